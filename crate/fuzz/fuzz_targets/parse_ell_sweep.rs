#![no_main]

use libfuzzer_sys::fuzz_target;
use lrs_core::format::parse_ell_sweep;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ells) = parse_ell_sweep(text) {
        assert!(ells.iter().all(|&l| l > 0));
    }
});
