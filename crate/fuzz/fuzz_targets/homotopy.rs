#![no_main]

use cateig::io::{read_homotopy, write_homotopy, MapFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(file) = serde_json::from_str::<MapFile>(data) else {
        return;
    };
    if let Ok(psi) = read_homotopy(data) {
        let text = write_homotopy(&psi, file.convention);
        assert_eq!(read_homotopy(&text).expect("canonical output reads back"), psi);
    }
});
