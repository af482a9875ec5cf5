#![no_main]

use libfuzzer_sys::fuzz_target;
use lrs_core::analysis::{AnalysisContext, GuessDistribution};
use lrs_core::code::build_code;
use lrs_core::decoder::{randomized_decode, DecoderConfig};
use lrs_core::format::parse_received_word;
use lrs_core::sum_rank::sum_rank_distance;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let code = build_code(11, 1, 2, 5, 2, 5).unwrap();
    let Ok(y) = parse_received_word(code.field(), code.partition(), text) else {
        return;
    };
    let ctx = AnalysisContext::for_code(&code, 3, 3).unwrap();
    let cfg = DecoderConfig::new(&code, 3, 3, GuessDistribution::uniform(&ctx), 8, 1).unwrap();
    let out = randomized_decode(&cfg, &y).unwrap();
    assert!(out.iterations_used <= 8);
    if let Some(c) = out.codeword {
        assert!(sum_rank_distance(code.field(), &y, &c).unwrap() <= 3);
    }
    if let Ok(Some(m)) = code.decode_unique(&y, 2) {
        assert!(sum_rank_distance(code.field(), &y, &code.encode(&m).unwrap()).unwrap() <= 2);
    }
});
