//! Exact homological algebra for deciding categorified eigenvalues.
//!
//! A scalar complex `λ` with a chain map `α : λ -> F` is an eigenvalue of
//! `F` (with the ring `R` as eigenobject) exactly when `Cone(α)` is
//! contractible, which happens exactly when `λ_n ≅ H^n(F)` and `α` picks
//! out cycle representatives injectively. This crate builds the cones and
//! certifies the answer with an explicit null-homotopy, in exact arithmetic
//! over ℚ, 𝔽_p or ℤ.

pub mod arith;
pub mod cert;
pub mod complex;
pub mod cone;
pub mod decomposition;
mod error;
pub mod generate;
pub mod io;
pub mod linalg;
pub mod oracle;

pub use error::Error;
