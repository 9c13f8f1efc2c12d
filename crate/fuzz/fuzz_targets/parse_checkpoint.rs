#![no_main]

use libfuzzer_sys::fuzz_target;
use rotkit::census::parse_checkpoint;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let size = text
        .lines()
        .next()
        .and_then(|l| l.trim().strip_prefix("size,"))
        .and_then(|n| n.parse().ok())
        .unwrap_or(5);
    let _ = parse_checkpoint(text, size);
});
