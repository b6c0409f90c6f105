//! Certificates: reading and re-verifying arbitrary input must not panic.

#![no_main]

use cateig::io::{certificate_from_file, CertificateFile, ComplexFile};
use libfuzzer_sys::fuzz_target;

fn small(c: &ComplexFile) -> bool {
    c.degrees.len() <= 16 && c.degrees.iter().all(|d| d.rank <= 32)
}

fuzz_target!(|data: &str| {
    let Ok(file) = serde_json::from_str::<CertificateFile>(data) else {
        return;
    };
    if !(small(&file.cone) && small(&file.lambda) && small(&file.target)) {
        return;
    }
    if let Ok(cert) = certificate_from_file(&file) {
        let _ = cert.reverify();
    }
});
