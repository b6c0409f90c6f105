#![no_main]

use cateig::io::{read_map, write_map, MapFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(file) = serde_json::from_str::<MapFile>(data) else {
        return;
    };
    if let Ok(f) = read_map(data) {
        let text = write_map(&f, file.convention);
        assert_eq!(read_map(&text).expect("canonical output reads back"), f);
    }
});
