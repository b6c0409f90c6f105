//! Scalar text in every ring: parsing must not panic, and whatever parses
//! must print back to text that parses to the same value.

#![no_main]

use cateig::arith::RingSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if data.len() > 256 {
        return;
    }
    let rings = [
        RingSpec::Integers,
        RingSpec::Rationals,
        RingSpec::f2(),
        RingSpec::prime_field(7).unwrap(),
        RingSpec::prime_field(2_147_483_647).unwrap(),
    ];
    for ring in rings {
        if let Ok(v) = ring.parse_scalar(data) {
            let again = ring.parse_scalar(&v.to_string()).expect("printed scalars parse");
            assert_eq!(again, v);
        }
    }
});
