//! Fuzz the empirical-model document parser: arbitrary bytes must never
//! panic, and every accepted document must survive a serialize/parse round
//! trip and, when small enough, a full contextual-fraction solve.

#![no_main]

use ctxharvest::ctxscen::{model_from_json, model_to_json, validate_model};
use ctxharvest::lpcf::contextual_fraction;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(model) = model_from_json(text) else {
        return;
    };
    // Accepted documents must round-trip exactly.
    let round = model_from_json(&model_to_json(&model)).expect("round trip parses");
    assert_eq!(round, model);

    let report = validate_model(&model);
    if report.normalization_ok
        && report.no_signalling_ok
        && report.nonnegative_ok
        && model.n_measurements <= 10
        && model.contexts.len() <= 16
    {
        // A validated model must solve cleanly with a certified optimum in [0, 1].
        if let Ok(cf) = contextual_fraction(&model) {
            assert!((-1e-9..=1.0 + 1e-9).contains(&cf), "CF out of range: {cf}");
        }
    }
});
