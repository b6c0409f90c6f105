//! Seeded random inputs: complexes, integer matrices, and families of
//! candidate eigenmaps (some valid, some deliberately broken).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::arith::{RingSpec, Scalar};
use crate::complex::{ChainComplex, Convention, GradedMap};
use crate::decomposition::canonical_alpha;
use crate::linalg::{inverse, kernel_basis, Matrix};

/// Shape limits for [`random_complex`].
#[derive(Debug, Clone, Copy)]
pub struct ComplexShape {
    /// Number of degrees, at least 1.
    pub max_len: usize,
    pub max_rank: usize,
    /// Upper bound on the sum of ranks.
    pub max_total: usize,
}

pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, ring: RingSpec) -> Scalar {
    match ring {
        RingSpec::Integers => Scalar::Integer(BigInt::from(rng.gen_range(-3..=3))),
        RingSpec::Rationals => {
            let n = BigInt::from(rng.gen_range(-4..=4));
            let d = if rng.gen_bool(0.25) {
                BigInt::from(rng.gen_range(2..=3))
            } else {
                BigInt::from(1)
            };
            Scalar::Rational(BigRational::new(n, d))
        }
        RingSpec::PrimeField(p) => ring.from_i64(rng.gen_range(0..p.get().min(1 << 30)) as i64),
    }
}

/// Random matrix with roughly `density` of its entries drawn nonzero.
pub fn random_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    ring: RingSpec,
    rows: usize,
    cols: usize,
    density: f64,
) -> Matrix {
    let mut m = Matrix::zeros(ring, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                m.set(i, j, random_scalar(rng, ring));
            }
        }
    }
    m
}

/// Integer matrix with entries uniform in `lo..=hi`.
pub fn random_integer_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    lo: i64,
    hi: i64,
) -> Matrix {
    let grid: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(lo..=hi)).collect())
        .collect();
    let refs: Vec<&[i64]> = grid.iter().map(Vec::as_slice).collect();
    let mut m = Matrix::from_i64(RingSpec::Integers, &refs);
    if rows == 0 {
        m = Matrix::zeros(RingSpec::Integers, 0, cols);
    }
    m
}

/// Random bounded complex. Each differential is a random combination of
/// functionals vanishing on the previous image, so `d ∘ d = 0` by
/// construction.
pub fn random_complex<R: Rng + ?Sized>(
    rng: &mut R,
    ring: RingSpec,
    shape: ComplexShape,
) -> ChainComplex {
    let convention = if rng.gen_bool(0.5) {
        Convention::Cochain
    } else {
        Convention::Chain
    };
    let len = rng.gen_range(1..=shape.max_len.max(1));
    let mut ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=shape.max_rank)).collect();
    while ranks.iter().sum::<usize>() > shape.max_total {
        let i = rng.gen_range(0..len);
        ranks[i] = ranks[i].saturating_sub(1);
    }
    let lo = rng.gen_range(-2..=1);
    let mut diffs: Vec<Matrix> = Vec::with_capacity(len.saturating_sub(1));
    for i in 0..len.saturating_sub(1) {
        let incoming = if i == 0 {
            Matrix::zeros(ring, ranks[0], 0)
        } else {
            diffs[i - 1].clone()
        };
        let d = if rng.gen_bool(0.15) {
            Matrix::zeros(ring, ranks[i + 1], ranks[i])
        } else {
            // rows of the annihilator of the incoming image
            let ann = kernel_basis(&incoming.transpose()).vectors;
            let coeffs = random_matrix(rng, ring, ranks[i + 1], ann.cols(), 0.6);
            &coeffs * &ann.transpose()
        };
        diffs.push(d);
    }
    ChainComplex::from_cochain_parts(ring, convention, lo, ranks, diffs)
        .expect("generated shapes are consistent")
}

/// Random invertible matrix (unimodular over ℤ).
pub fn random_invertible<R: Rng + ?Sized>(rng: &mut R, ring: RingSpec, n: usize) -> Matrix {
    if ring.is_field() {
        loop {
            let m = random_matrix(rng, ring, n, n, 0.7);
            if inverse(&m).is_ok() {
                return m;
            }
        }
    }
    let mut m = Matrix::identity(ring, n);
    for _ in 0..2 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            let mut e = Matrix::identity(ring, n);
            e.set(a, b, ring.from_i64(rng.gen_range(-2..=2)));
            m = &e * &m;
        }
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenFamily {
    /// The canonical eigenmap onto homology representatives.
    Canonical,
    /// Canonical eigenmap precomposed with an automorphism of `λ`.
    Automorphism,
    /// Canonical eigenmap plus boundaries; still an eigenvalue.
    BoundaryShift,
    /// Columns are random cycles; an eigenvalue exactly when they form a
    /// basis of homology.
    RandomCycles,
    /// One degree of `λ` gains a rank.
    RankUp,
    /// One degree of `λ` loses a rank.
    RankDown,
    /// One column duplicates another (or vanishes), keeping ranks right.
    Collapse,
    /// One column replaced by a boundary.
    BoundaryColumn,
    /// `α = 0` with the right ranks.
    Zero,
    /// Over ℤ, one column doubled.
    Doubled,
}

impl EigenFamily {
    pub const ALL: [EigenFamily; 10] = [
        EigenFamily::Canonical,
        EigenFamily::Automorphism,
        EigenFamily::BoundaryShift,
        EigenFamily::RandomCycles,
        EigenFamily::RankUp,
        EigenFamily::RankDown,
        EigenFamily::Collapse,
        EigenFamily::BoundaryColumn,
        EigenFamily::Zero,
        EigenFamily::Doubled,
    ];
}

impl fmt::Display for EigenFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone)]
pub struct EigenCase {
    pub family: EigenFamily,
    pub lambda: ChainComplex,
    pub alpha: GradedMap,
}

fn rebuild(
    f: &ChainComplex,
    blocks: BTreeMap<i64, Matrix>,
    family: EigenFamily,
) -> EigenCase {
    let ranks: BTreeMap<i64, usize> = blocks
        .iter()
        .map(|(&m, b)| (f.user_degree(m), b.cols()))
        .collect();
    let lambda = ChainComplex::scalar_object(f.ring(), f.convention(), &ranks);
    let mut alpha = GradedMap::new(f.ring(), 0);
    for (m, b) in blocks {
        alpha.insert(m, b);
    }
    EigenCase {
        family,
        lambda,
        alpha,
    }
}

fn random_cycle<R: Rng + ?Sized>(rng: &mut R, f: &ChainComplex, m: i64) -> Matrix {
    let z = kernel_basis(&f.diff(m)).vectors;
    &z * &random_matrix(rng, f.ring(), z.cols(), 1, 0.7)
}

fn random_boundary<R: Rng + ?Sized>(rng: &mut R, f: &ChainComplex, m: i64, cols: usize) -> Matrix {
    let d = f.diff(m - 1);
    &d * &random_matrix(rng, f.ring(), d.cols(), cols, 0.7)
}

/// One candidate `(λ, α)` for `f` from the given family, or `None` when
/// the family does not apply (no homology to perturb, torsion, wrong ring).
pub fn eigen_case<R: Rng + ?Sized>(
    rng: &mut R,
    f: &ChainComplex,
    family: EigenFamily,
) -> Option<EigenCase> {
    let ring = f.ring();
    let (_, canonical) = canonical_alpha(f).ok()?;
    let mut blocks: BTreeMap<i64, Matrix> = f
        .degrees()
        .map(|m| {
            let b = canonical
                .get(m)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(ring, f.rank(m), 0));
            (m, b)
        })
        .collect();
    let with_homology: Vec<i64> = blocks
        .iter()
        .filter(|(_, b)| b.cols() > 0)
        .map(|(&m, _)| m)
        .collect();
    let pick = |rng: &mut R| with_homology.choose(rng).copied();

    match family {
        EigenFamily::Canonical => {}
        EigenFamily::Automorphism => {
            for b in blocks.values_mut() {
                let a = random_invertible(rng, ring, b.cols());
                *b = &*b * &a;
            }
        }
        EigenFamily::BoundaryShift => {
            for (&m, b) in blocks.iter_mut() {
                let shift = random_boundary(rng, f, m, b.cols());
                *b = &*b + &shift;
            }
        }
        EigenFamily::RandomCycles => {
            for (&m, b) in blocks.iter_mut() {
                let cols: Vec<Matrix> = (0..b.cols()).map(|_| random_cycle(rng, f, m)).collect();
                *b = cols
                    .iter()
                    .fold(Matrix::zeros(ring, f.rank(m), 0), |acc, c| acc.hstack(c));
            }
        }
        EigenFamily::RankUp => {
            let m = *f.degrees().collect::<Vec<_>>().choose(rng)?;
            let extra = if rng.gen_bool(0.5) {
                random_cycle(rng, f, m)
            } else {
                Matrix::zeros(ring, f.rank(m), 1)
            };
            let b = blocks.get_mut(&m)?;
            *b = b.hstack(&extra);
        }
        EigenFamily::RankDown => {
            let m = pick(rng)?;
            let b = blocks.get_mut(&m)?;
            let keep: Vec<usize> = (1..b.cols()).collect();
            *b = b.select_columns(&keep);
        }
        EigenFamily::Collapse => {
            let m = pick(rng)?;
            let b = blocks.get_mut(&m)?;
            let j = rng.gen_range(0..b.cols());
            let replacement = if b.cols() > 1 {
                b.select_columns(&[(j + 1) % b.cols()])
            } else {
                Matrix::zeros(ring, b.rows(), 1)
            };
            for i in 0..b.rows() {
                b.set(i, j, replacement.get(i, 0).clone());
            }
        }
        EigenFamily::BoundaryColumn => {
            let m = pick(rng)?;
            let boundary = random_boundary(rng, f, m, 1);
            let b = blocks.get_mut(&m)?;
            let j = rng.gen_range(0..b.cols());
            for i in 0..b.rows() {
                b.set(i, j, boundary.get(i, 0).clone());
            }
        }
        EigenFamily::Zero => {
            pick(rng)?;
            for b in blocks.values_mut() {
                *b = Matrix::zeros(ring, b.rows(), b.cols());
            }
        }
        EigenFamily::Doubled => {
            if ring != RingSpec::Integers {
                return None;
            }
            let m = pick(rng)?;
            let b = blocks.get_mut(&m)?;
            let j = rng.gen_range(0..b.cols());
            for i in 0..b.rows() {
                let v = b.get(i, j) * &ring.from_i64(2);
                b.set(i, j, v);
            }
        }
    }
    Some(rebuild(f, blocks, family))
}
