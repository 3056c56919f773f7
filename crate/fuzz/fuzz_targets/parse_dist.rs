//! Fuzzes the distribution document parser and its main consumers:
//! arbitrary bytes must never panic, and anything that parses must be
//! usable for entropy measurement and DDG-tree construction.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(dist) = quantumness::io::parse_dist_document(text) {
            let h = quantumness::entropy::shannon_entropy(&dist);
            debug_assert!(h >= 0.0);
            let _ = quantumness::entropy::smoothed_entropy_lb(&dist, 0.25);
            let _ = quantumness::knuth_yao::build_tree(&dist, 16);
        }
    }
});
