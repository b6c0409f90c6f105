//! Exact scalars over ℚ, 𝔽_p and ℤ.
//!
//! Every value knows which ring it lives in. Mixing rings in one operation is
//! an error, never a silent coercion.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: RingSpec, right: RingSpec },
    #[error("{value} is not invertible in {ring}")]
    NotInvertible { value: String, ring: RingSpec },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse {input:?} as an element of {ring}: {reason}")]
    Parse {
        input: String,
        ring: RingSpec,
        reason: &'static str,
    },
}

/// A prime modulus, checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(ArithError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

// Deterministic Miller-Rabin; these witnesses cover all of u64.
fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The coefficient ring of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Rationals,
    PrimeField(Prime),
    Integers,
}

impl RingSpec {
    pub fn prime_field(p: u64) -> Result<Self, ArithError> {
        Prime::new(p).map(RingSpec::PrimeField)
    }

    pub fn f2() -> Self {
        RingSpec::PrimeField(Prime(2))
    }

    pub fn is_field(self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        self.from_bigint(BigInt::from(v))
    }

    pub fn from_bigint(self, v: BigInt) -> Scalar {
        match self {
            RingSpec::Integers => Scalar::Integer(v),
            RingSpec::Rationals => Scalar::Rational(BigRational::from_integer(v)),
            RingSpec::PrimeField(p) => {
                let m = BigInt::from(p.0);
                let r = v.mod_floor(&m);
                Scalar::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: p,
                }
            }
        }
    }

    /// Parses the canonical text form: decimal integers, `p/q` rationals,
    /// residues as decimal integers (reduced mod p).
    pub fn parse_scalar(self, input: &str) -> Result<Scalar, ArithError> {
        let err = |reason| ArithError::Parse {
            input: input.to_string(),
            ring: self,
            reason,
        };
        match self {
            RingSpec::Rationals => {
                let (num, den) = match input.split_once('/') {
                    Some((n, d)) => (parse_int(n).ok_or_else(|| err("bad numerator"))?, {
                        if d.starts_with('-') || d.starts_with('+') {
                            return Err(err("denominator must be an unsigned integer"));
                        }
                        parse_int(d).ok_or_else(|| err("bad denominator"))?
                    }),
                    None => (parse_int(input).ok_or_else(|| err("not an integer or p/q"))?, BigInt::one()),
                };
                if den.is_zero() {
                    return Err(err("zero denominator"));
                }
                Ok(Scalar::Rational(BigRational::new(num, den)))
            }
            RingSpec::Integers => parse_int(input)
                .map(Scalar::Integer)
                .ok_or_else(|| err("not a decimal integer")),
            RingSpec::PrimeField(_) => parse_int(input)
                .map(|v| self.from_bigint(v))
                .ok_or_else(|| err("not a decimal integer")),
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::PrimeField(p) => write!(f, "F_{}", p.0),
        }
    }
}

/// An exact ring element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Integer(BigInt),
    Rational(BigRational),
    Residue { value: u64, modulus: Prime },
}

impl Scalar {
    pub fn ring(&self) -> RingSpec {
        match self {
            Scalar::Integer(_) => RingSpec::Integers,
            Scalar::Rational(_) => RingSpec::Rationals,
            Scalar::Residue { modulus, .. } => RingSpec::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Integer(v) => v.is_zero(),
            Scalar::Rational(v) => v.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Integer(v) => v.is_one(),
            Scalar::Rational(v) => v.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    /// Units: nonzero field elements, ±1 in ℤ.
    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Integer(v) => v.abs().is_one(),
            _ => !self.is_zero(),
        }
    }

    fn same_ring(&self, other: &Scalar) -> Result<(), ArithError> {
        if self.ring() == other.ring() {
            Ok(())
        } else {
            Err(ArithError::RingMismatch {
                left: self.ring(),
                right: other.ring(),
            })
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.same_ring(other)?;
        Ok(match (self, other) {
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a + b),
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                let p = modulus.0;
                Scalar::Residue {
                    value: ((*a as u128 + *b as u128) % p as u128) as u64,
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.same_ring(other)?;
        Ok(match (self, other) {
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a * b),
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: mul_mod(*a, *b, modulus.0),
                    modulus: *modulus,
                }
            }
            _ => unreachable!(),
        })
    }

    pub fn inv(&self) -> Result<Scalar, ArithError> {
        let fail = || ArithError::NotInvertible {
            value: self.to_string(),
            ring: self.ring(),
        };
        if !self.is_unit() {
            return Err(fail());
        }
        Ok(match self {
            Scalar::Integer(v) => Scalar::Integer(v.clone()),
            Scalar::Rational(v) => Scalar::Rational(v.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                // Fermat: a^(p-2) = a^(-1)
                value: pow_mod(*value, modulus.0 - 2, modulus.0),
                modulus: *modulus,
            },
        })
    }

    /// Exact division `self / other` in a field.
    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        if !other.ring().is_field() {
            return Err(ArithError::NotInvertible {
                value: other.to_string(),
                ring: other.ring(),
            });
        }
        self.checked_mul(&other.inv()?)
    }

    /// Quotient used to reduce `self` modulo `pivot`: exact in a field,
    /// floor division in ℤ (so the remainder lands in `[0, |pivot|)`).
    pub(crate) fn reduction_quotient(&self, pivot: &Scalar) -> Scalar {
        match (self, pivot) {
            (Scalar::Integer(a), Scalar::Integer(b)) => {
                let q = a.div_floor(b);
                // floor toward -inf w.r.t. a positive pivot keeps the remainder nonnegative
                if b.is_negative() && !(a - &q * b).is_zero() {
                    Scalar::Integer(q + 1)
                } else {
                    Scalar::Integer(q)
                }
            }
            _ => self.checked_div(pivot).expect("nonzero field pivot"),
        }
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        match self {
            Scalar::Integer(v) => Some(v),
            _ => None,
        }
    }

    /// Embeds ℤ into ℚ; other values pass through.
    pub fn to_rational(&self) -> Scalar {
        match self {
            Scalar::Integer(v) => Scalar::Rational(BigRational::from_integer(v.clone())),
            other => other.clone(),
        }
    }

    /// Returns the integer value if this is an integral rational or an integer.
    pub fn to_integer(&self) -> Option<Scalar> {
        match self {
            Scalar::Integer(_) => Some(self.clone()),
            Scalar::Rational(v) if v.is_integer() => Some(Scalar::Integer(v.to_integer())),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Integer(v) => write!(f, "{v}"),
            Scalar::Rational(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Scalar::Rational(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Integer(v) => Scalar::Integer(-v),
            Scalar::Rational(v) => Scalar::Rational(-v),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus.0 - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

// Operator forms panic on ring mismatch; matrix code checks rings once up front.
impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar ring mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.checked_sub(rhs).expect("scalar ring mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar ring mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Scalar {
        RingSpec::Rationals.parse_scalar(s).unwrap()
    }

    #[test]
    fn adds_fractions() {
        assert_eq!(q("1/2").checked_add(&q("1/3")).unwrap(), q("5/6"));
        assert_eq!(q("5/6").to_string(), "5/6");
        assert_eq!(q("4/2").to_string(), "2");
        assert_eq!(q("-2/4").to_string(), "-1/2");
    }

    #[test]
    fn inverse_in_f7_matches_brute_force() {
        let f7 = RingSpec::prime_field(7).unwrap();
        let three = f7.from_i64(3);
        let brute = (0..7)
            .find(|k| (k * 3) % 7 == 1)
            .expect("3 is a unit mod 7");
        assert_eq!(brute, 5);
        assert_eq!(three.inv().unwrap(), f7.from_i64(brute));
    }

    #[test]
    fn integer_non_units_are_not_invertible() {
        let two = RingSpec::Integers.from_i64(2);
        assert!(matches!(two.inv(), Err(ArithError::NotInvertible { .. })));
        let minus_one = RingSpec::Integers.from_i64(-1);
        assert_eq!(minus_one.inv().unwrap(), minus_one);
        assert!(RingSpec::Rationals.zero().inv().is_err());
    }

    #[test]
    fn mixing_rings_fails() {
        let a = RingSpec::Integers.one();
        let b = RingSpec::Rationals.one();
        assert!(matches!(
            a.checked_add(&b),
            Err(ArithError::RingMismatch { .. })
        ));
    }

    #[test]
    fn prime_check() {
        assert!(RingSpec::prime_field(2).is_ok());
        assert!(RingSpec::prime_field(1).is_err());
        assert!(RingSpec::prime_field(91).is_err());
        assert!(RingSpec::prime_field(1_000_000_007).is_ok());
        assert!(RingSpec::prime_field(18_446_744_073_709_551_557).is_ok());
    }

    #[test]
    fn parse_rejects_junk() {
        for bad in ["", "-", "1/0", "1/-2", " 1", "1.5", "0x10", "+3"] {
            assert!(RingSpec::Rationals.parse_scalar(bad).is_err(), "{bad:?}");
        }
        assert!(RingSpec::Integers.parse_scalar("1/2").is_err());
        let f5 = RingSpec::prime_field(5).unwrap();
        assert_eq!(f5.parse_scalar("-1").unwrap().to_string(), "4");
    }

    #[test]
    fn reduction_quotient_keeps_remainder_nonnegative() {
        let z = RingSpec::Integers;
        for (a, b) in [(7, 3), (-7, 3), (7, -3), (-7, -3), (6, -3)] {
            let q = z.from_i64(a).reduction_quotient(&z.from_i64(b));
            let r = &z.from_i64(a) - &(&q * &z.from_i64(b));
            let r = r.as_integer().unwrap().to_i64().unwrap();
            assert!((0..b.abs()).contains(&r), "{a} mod {b} -> {r}");
        }
    }

    fn any_ring() -> impl Strategy<Value = RingSpec> {
        prop_oneof![
            Just(RingSpec::Rationals),
            Just(RingSpec::Integers),
            Just(RingSpec::f2()),
            Just(RingSpec::prime_field(7).unwrap()),
            Just(RingSpec::prime_field(65_537).unwrap()),
        ]
    }

    fn scalar_in(ring: RingSpec) -> impl Strategy<Value = Scalar> {
        (any::<i64>(), 1i64..1000).prop_map(move |(n, d)| match ring {
            RingSpec::Rationals => {
                Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            _ => ring.from_i64(n),
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(s in any_ring().prop_flat_map(scalar_in)) {
            let text = s.to_string();
            prop_assert_eq!(s.ring().parse_scalar(&text).unwrap(), s);
        }

        #[test]
        fn field_axioms(
            (a, b, c) in prop_oneof![
                Just(RingSpec::Rationals),
                Just(RingSpec::f2()),
                Just(RingSpec::prime_field(101).unwrap()),
            ].prop_flat_map(|r| (scalar_in(r), scalar_in(r), scalar_in(r)))
        ) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }
    }
}
