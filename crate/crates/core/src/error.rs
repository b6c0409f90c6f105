use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::{ArithError, RingSpec};
use crate::cert::FailureReason;
use crate::complex::{ComplexViolation, MapViolation};
use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),
    #[error("complexes use different degree conventions")]
    ConventionMismatch,
    #[error("not a chain complex: {0}")]
    InvalidComplex(ComplexViolation),
    #[error("not a chain map: {0}")]
    NotChainMap(MapViolation),
    #[error("source of the eigenmap has a nonzero differential at degree {degree}")]
    NotScalarSource { degree: i64 },
    #[error("image of the incoming differential is not saturated at degree {degree} (torsion {factors:?})")]
    NotSaturated { degree: i64, factors: Vec<BigInt> },
    #[error("homology has torsion at degree {degree}: {factors:?}")]
    TorsionHomology { degree: i64, factors: Vec<BigInt> },
    #[error("eigenvalue hypotheses fail: {0}")]
    HypothesisFailure(FailureReason),
    #[error("block layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("operation needs a field, got {0}")]
    NotAField(RingSpec),
    #[error("total dimension {dim} exceeds the limit {max}")]
    TooLarge { dim: usize, max: usize },
}
