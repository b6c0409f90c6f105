//! Dense exact linear algebra: Gauss-Jordan over fields, Smith normal form
//! over ℤ, and the kernel / image / complement bases built on them.

mod echelon;
mod matrix;
mod snf;
mod subspace;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::{ArithError, RingSpec};

pub use echelon::{rank, rref, Rref};
pub use matrix::Matrix;
pub use snf::{smith_normal_form, SnfResult};
pub use subspace::{
    column_echelon, complement_basis, image_basis, inverse, kernel_basis, saturation_defect,
    solve, spans, ColumnEchelon, SubspaceBasis,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("operation needs a field, got {0}")]
    NotAField(RingSpec),
    #[error("operation needs the integers, got {0}")]
    NotIntegerRing(RingSpec),
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),
    #[error("submodule is not saturated, quotient torsion {factors:?}")]
    NotSaturated { factors: Vec<BigInt> },
    #[error("matrix is not invertible")]
    Singular,
    #[error(transparent)]
    Arith(#[from] ArithError),
}
