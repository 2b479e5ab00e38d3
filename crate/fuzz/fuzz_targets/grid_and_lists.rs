//! Fuzz the flag-syntax parsers: MIN:MAX:COUNT grids, comma lists, and
//! "a/b" rationals.

#![no_main]

use ctxharvest::ctxscen::parse_rational;
use ctxharvest::sweep::{parse_grid, parse_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(grid) = parse_grid(text) {
        assert!(grid.min.is_finite() && grid.max.is_finite() && grid.max >= grid.min);
        if grid.count >= 1 && grid.count <= 10_000 {
            let v = grid.values();
            assert_eq!(v.len(), grid.count);
        }
    }
    if let Ok(list) = parse_list(text) {
        assert!(list.iter().all(|v| v.is_finite()));
    }
    if let Ok(v) = parse_rational(text) {
        assert!(v.is_finite());
    }
});
