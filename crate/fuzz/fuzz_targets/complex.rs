//! Complex files: reading must not panic, and anything accepted must
//! survive a canonical write and re-read unchanged.

#![no_main]

use cateig::io::{read_complex, read_complex_file, write_complex};
use libfuzzer_sys::fuzz_target;

const MAX_RANK: usize = 32;

fuzz_target!(|data: &str| {
    let Ok(file) = read_complex_file(data) else {
        return;
    };
    if file.degrees.len() > 16 || file.degrees.iter().any(|d| d.rank > MAX_RANK) {
        return;
    }
    if let Ok(x) = read_complex(data) {
        let text = write_complex(&x);
        assert_eq!(read_complex(&text).expect("canonical output reads back"), x);
    }
});
