#![no_main]

use libfuzzer_sys::fuzz_target;
use lrs_core::code::build_code;
use lrs_core::format::{format_received, parse_received, parse_received_word};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let code = build_code(11, 1, 2, 5, 2, 5).unwrap();
    let f = code.field();
    let _ = parse_received(f, text);
    // Anything accepted as a word must survive a format/parse round trip.
    if let Ok(y) = parse_received_word(f, code.partition(), text) {
        let again = parse_received_word(f, code.partition(), &format_received(f, &y)).unwrap();
        assert_eq!(again, y);
    }
});
