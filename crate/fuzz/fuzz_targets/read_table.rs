#![no_main]

use libfuzzer_sys::fuzz_target;
use rotkit::cli::records::{read_table, Column};

fuzz_target!(|data: &[u8]| {
    if let Ok(table) = read_table(data) {
        for column in [Column::NoCommon, Column::Difficult] {
            for point in table.fractions(column) {
                assert!((0.0..=1.0).contains(&point.fraction));
            }
        }
    }
});
