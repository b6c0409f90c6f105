#![no_main]

use cateig::arith::RingSpec;
use cateig::io::{read_simplicial, simplicial_to_chain, Vertices};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let Ok(sc) = read_simplicial(data) else {
        return;
    };
    let n = match &sc.vertices {
        Vertices::Count(n) => *n,
        Vertices::Labels(l) => l.len(),
    };
    if n > 256 || sc.facets.len() > 64 || sc.facets.iter().any(|f| f.len() > 8) {
        return;
    }
    if let Ok(out) = simplicial_to_chain(&sc, RingSpec::Integers) {
        assert!(out.complex.validate().is_ok());
    }
});
