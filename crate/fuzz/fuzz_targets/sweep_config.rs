//! Fuzz the sweep configuration parser: no panics on arbitrary input, and
//! every accepted configuration stays self-consistent.

#![no_main]

use ctxharvest::sweep::SweepConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = SweepConfig::from_json(text) {
        // from_json validates; re-validating must agree.
        cfg.validate().expect("accepted config re-validates");
        // The grid must be materializable without surprises.
        let values = cfg.omega_grid.values();
        assert_eq!(values.len(), cfg.omega_grid.count);
        assert!(values.iter().all(|v| v.is_finite()));
    }
});
