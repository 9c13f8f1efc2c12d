#![no_main]

use libfuzzer_sys::fuzz_target;
use rotkit::triangulation::parse_triangulation;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(tri) = parse_triangulation(text) {
        assert!(tri.validate().is_ok());
        assert_eq!(parse_triangulation(&tri.to_string()).as_ref(), Ok(&tri));
        assert_eq!(tri.to_tree().to_triangulation(), tri);
    }
});
