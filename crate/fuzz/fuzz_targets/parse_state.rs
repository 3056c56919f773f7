//! Fuzzes the statevector document parser: arbitrary bytes must never
//! panic, allocate past the qubit cap, or produce an unnormalized state.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // A small cap keeps adversarial dense/sparse documents from
        // requesting large registers; the cap must be enforced before any
        // 2^n allocation happens.
        if let Ok(state) = quantumness::io::statevector_from_json(text, 12) {
            debug_assert!((state.norm() - 1.0).abs() < 1e-9);
            let _ = quantumness::entropy::state_entropy(&state);
        }
    }
});
