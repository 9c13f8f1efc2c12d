#![no_main]

use libfuzzer_sys::fuzz_target;
use rotkit::classify::{classify_pair, TreePairProblem};
use rotkit::cli::parse_instance;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Two instances separated by a newline form a pair.
    let (a, b) = text.split_once('\n').unwrap_or((text, text));
    let (Ok(s), Ok(t)) = (parse_instance(a), parse_instance(b)) else {
        return;
    };
    if let Ok(pair) = TreePairProblem::new(s, t) {
        if pair.size() >= 2 {
            assert_eq!(classify_pair(&pair).ok(), classify_pair(&pair.swapped()).ok());
        }
    }
});
