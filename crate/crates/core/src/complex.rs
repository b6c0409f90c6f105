//! Bounded complexes of free modules and degree-homogeneous maps between them.
//!
//! Storage is always cochain-indexed (the differential raises the degree).
//! A complex read in chain convention is stored with negated degrees and
//! remembers its convention, so degrees are reported back the way the user
//! wrote them. "User degree" below means the degree in the complex's own
//! convention; "internal degree" is the stored cochain degree.
//!
//! `shift` never introduces signs on differentials, and mapping cones use
//! unsigned blocks.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::RingSpec;
use crate::linalg::Matrix;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `d_n : F_n -> F_{n+1}`
    Cochain,
    /// `d_n : C_n -> C_{n-1}`
    Chain,
}

impl Convention {
    /// Internal degree of a user degree (and back: the map is an involution).
    pub fn internal(self, degree: i64) -> i64 {
        match self {
            Convention::Cochain => degree,
            Convention::Chain => -degree,
        }
    }

    /// Internal shift of a user-facing degree shift.
    pub fn internal_shift(self, shift: i64) -> i64 {
        self.internal(shift)
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::Cochain => write!(f, "cochain"),
            Convention::Chain => write!(f, "chain"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    ring: RingSpec,
    convention: Convention,
    lo: i64,
    ranks: Vec<usize>,
    // diffs[i] : F_{lo+i} -> F_{lo+i+1}
    diffs: Vec<Matrix>,
}

/// First place where `d ∘ d` is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexViolation {
    /// User degree of the source of the first differential in the composite.
    pub degree: i64,
    pub row: usize,
    pub col: usize,
    pub value: String,
}

impl fmt::Display for ComplexViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d∘d is nonzero starting at degree {}: entry ({}, {}) = {}",
            self.degree, self.row, self.col, self.value
        )
    }
}

impl ChainComplex {
    /// Builds a complex from user-degree data. `diffs` is keyed by the
    /// source degree; absent differentials are zero. The support is the
    /// smallest window containing every key of `ranks`.
    pub fn new(
        ring: RingSpec,
        convention: Convention,
        ranks: &BTreeMap<i64, usize>,
        diffs: &BTreeMap<i64, Matrix>,
    ) -> Result<Self, Error> {
        let internal_ranks: BTreeMap<i64, usize> = ranks
            .iter()
            .map(|(&n, &r)| (convention.internal(n), r))
            .collect();
        let (lo, hi) = match (
            internal_ranks.keys().next(),
            internal_ranks.keys().next_back(),
        ) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0, -1),
        };
        let rank_vec: Vec<usize> = (lo..=hi)
            .map(|m| internal_ranks.get(&m).copied().unwrap_or(0))
            .collect();
        let rank_at = |m: i64| -> usize {
            if m < lo || m > hi {
                0
            } else {
                rank_vec[(m - lo) as usize]
            }
        };
        for (&n, d) in diffs {
            let m = convention.internal(n);
            let expected = (rank_at(m + 1), rank_at(m));
            if d.ring() != ring {
                return Err(Error::RingMismatch(ring, d.ring()));
            }
            if d.shape() != expected {
                return Err(Error::Shape(format!(
                    "differential from degree {n} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        let diff_vec = (lo..hi)
            .map(|m| {
                diffs
                    .get(&convention.internal(m))
                    .cloned()
                    .unwrap_or_else(|| Matrix::zeros(ring, rank_at(m + 1), rank_at(m)))
            })
            .collect();
        Ok(ChainComplex {
            ring,
            convention,
            lo,
            ranks: rank_vec,
            diffs: diff_vec,
        })
    }

    /// Builds directly from cochain-indexed data: `diffs[i] : F_{lo+i} -> F_{lo+i+1}`.
    pub fn from_cochain_parts(
        ring: RingSpec,
        convention: Convention,
        lo: i64,
        ranks: Vec<usize>,
        diffs: Vec<Matrix>,
    ) -> Result<Self, Error> {
        if diffs.len() != ranks.len().saturating_sub(1) {
            return Err(Error::Shape(format!(
                "{} differentials for {} modules",
                diffs.len(),
                ranks.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.ring() != ring {
                return Err(Error::RingMismatch(ring, d.ring()));
            }
            if d.shape() != (ranks[i + 1], ranks[i]) {
                return Err(Error::Shape(format!(
                    "differential at internal degree {} is {}x{}, expected {}x{}",
                    lo + i as i64,
                    d.rows(),
                    d.cols(),
                    ranks[i + 1],
                    ranks[i]
                )));
            }
        }
        Ok(ChainComplex {
            ring,
            convention,
            lo,
            ranks,
            diffs,
        })
    }

    /// The zero complex.
    pub fn zero(ring: RingSpec, convention: Convention) -> Self {
        ChainComplex {
            ring,
            convention,
            lo: 0,
            ranks: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// A complex with all differentials zero ("scalar object").
    pub fn scalar_object(
        ring: RingSpec,
        convention: Convention,
        ranks: &BTreeMap<i64, usize>,
    ) -> Self {
        Self::new(ring, convention, ranks, &BTreeMap::new()).expect("zero maps always fit")
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Same data presented in another convention (degrees are negated).
    pub fn with_convention(&self, convention: Convention) -> Self {
        ChainComplex {
            convention,
            ..self.clone()
        }
    }

    pub fn user_degree(&self, internal: i64) -> i64 {
        self.convention.internal(internal)
    }

    pub fn internal_degree(&self, user: i64) -> i64 {
        self.convention.internal(user)
    }

    /// Internal degree window `lo..=hi`, empty when `hi < lo`.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// Internal degrees of the window, ascending.
    pub fn degrees(&self) -> impl DoubleEndedIterator<Item = i64> + Clone {
        self.lo..=self.hi()
    }

    /// Internal degrees ordered by increasing user degree.
    pub fn degrees_by_user_order(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.degrees().collect();
        if self.convention == Convention::Chain {
            d.reverse();
        }
        d
    }

    /// Rank at an internal degree.
    pub fn rank(&self, m: i64) -> usize {
        if m < self.lo || m > self.hi() {
            0
        } else {
            self.ranks[(m - self.lo) as usize]
        }
    }

    /// The differential leaving internal degree `m`.
    pub fn diff(&self, m: i64) -> Matrix {
        if m >= self.lo && m < self.hi() {
            self.diffs[(m - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.ring, self.rank(m + 1), self.rank(m))
        }
    }

    pub fn total_dim(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Ranks keyed by user degree.
    pub fn user_ranks(&self) -> BTreeMap<i64, usize> {
        self.degrees()
            .map(|m| (self.user_degree(m), self.rank(m)))
            .collect()
    }

    /// Nonzero differentials keyed by user source degree.
    pub fn user_diffs(&self) -> BTreeMap<i64, Matrix> {
        self.degrees()
            .filter(|&m| self.rank(m) > 0 && self.rank(m + 1) > 0)
            .map(|m| (self.user_degree(m), self.diff(m)))
            .collect()
    }

    pub fn has_zero_differentials(&self) -> bool {
        self.diffs.iter().all(Matrix::is_zero)
    }

    /// Checks `d_{m+1} ∘ d_m = 0` everywhere, reporting the smallest user
    /// degree that fails.
    pub fn validate(&self) -> Result<(), ComplexViolation> {
        for m in self.degrees_by_user_order() {
            let comp = &self.diff(m + 1) * &self.diff(m);
            if let Some((row, col, v)) = comp.first_nonzero() {
                return Err(ComplexViolation {
                    degree: self.user_degree(m),
                    row,
                    col,
                    value: v.to_string(),
                });
            }
        }
        Ok(())
    }

    /// `X[k]_n = X_{n+k}` in the complex's own convention; differentials
    /// are left unsigned.
    pub fn shift(&self, k: i64) -> Self {
        ChainComplex {
            lo: self.lo - self.convention.internal_shift(k),
            ..self.clone()
        }
    }

    /// Degreewise direct sum with block-diagonal differentials.
    pub fn direct_sum(&self, other: &ChainComplex) -> Result<Self, Error> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring, other.ring));
        }
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch);
        }
        if self.ranks.is_empty() {
            return Ok(other.clone());
        }
        if other.ranks.is_empty() {
            return Ok(self.clone());
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let ranks = (lo..=hi).map(|m| self.rank(m) + other.rank(m)).collect();
        let diffs = (lo..hi)
            .map(|m| self.diff(m).block_diag(&other.diff(m)))
            .collect();
        ChainComplex::from_cochain_parts(self.ring, self.convention, lo, ranks, diffs)
    }
}

/// A family of matrices `X_m -> Y_{m + shift}` (internal degrees).
///
/// Chain maps have shift 0; homotopies have internal shift -1. Missing
/// blocks are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    ring: RingSpec,
    shift: i64,
    blocks: BTreeMap<i64, Matrix>,
}

/// Why a graded map failed to be a chain map between two complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapViolation {
    Shift(i64),
    Shape {
        degree: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    NotCommuting {
        degree: i64,
        row: usize,
        col: usize,
    },
}

impl fmt::Display for MapViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapViolation::Shift(s) => write!(f, "chain maps have shift 0, got {s}"),
            MapViolation::Shape {
                degree,
                expected,
                found,
            } => write!(
                f,
                "block at degree {degree} is {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            MapViolation::NotCommuting { degree, row, col } => write!(
                f,
                "d∘f and f∘d differ at degree {degree}, entry ({row}, {col})"
            ),
        }
    }
}

impl GradedMap {
    pub fn new(ring: RingSpec, shift: i64) -> Self {
        GradedMap {
            ring,
            shift,
            blocks: BTreeMap::new(),
        }
    }

    pub fn zero(ring: RingSpec, shift: i64) -> Self {
        Self::new(ring, shift)
    }

    pub fn identity(x: &ChainComplex) -> Self {
        let mut f = Self::new(x.ring(), 0);
        for m in x.degrees() {
            f.insert(m, Matrix::identity(x.ring(), x.rank(m)));
        }
        f
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    /// Internal degree shift.
    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Stores the block leaving internal degree `m`. Panics on ring mismatch.
    pub fn insert(&mut self, m: i64, block: Matrix) {
        assert_eq!(block.ring(), self.ring, "block ring mismatch");
        self.blocks.insert(m, block);
    }

    pub fn get(&self, m: i64) -> Option<&Matrix> {
        self.blocks.get(&m)
    }

    /// Block at internal degree `m`, or the zero matrix of the given shape.
    pub fn block(&self, m: i64, rows: usize, cols: usize) -> Matrix {
        match self.blocks.get(&m) {
            Some(b) if b.shape() == (rows, cols) => b.clone(),
            Some(b) if b.rows() * b.cols() == 0 && rows * cols == 0 => {
                Matrix::zeros(self.ring, rows, cols)
            }
            Some(b) => panic!(
                "block at internal degree {m} is {}x{}, expected {rows}x{cols}",
                b.rows(),
                b.cols()
            ),
            None => Matrix::zeros(self.ring, rows, cols),
        }
    }

    /// Block from `x` at internal degree `m` into `y`.
    pub fn block_between(&self, x: &ChainComplex, y: &ChainComplex, m: i64) -> Matrix {
        self.block(m, y.rank(m + self.shift), x.rank(m))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (i64, &Matrix)> {
        self.blocks.iter().map(|(&m, b)| (m, b))
    }

    /// Checks every stored block against the ranks of `source` and `target`.
    /// Blocks outside both windows must be empty.
    pub fn check_shapes(
        &self,
        source: &ChainComplex,
        target: &ChainComplex,
    ) -> Result<(), MapViolation> {
        for (&m, b) in &self.blocks {
            let expected = (target.rank(m + self.shift), source.rank(m));
            let degenerate = b.rows() * b.cols() == 0 && expected.0 * expected.1 == 0;
            if b.shape() != expected && !degenerate {
                return Err(MapViolation::Shape {
                    degree: source.user_degree(m),
                    expected,
                    found: b.shape(),
                });
            }
        }
        Ok(())
    }

    /// Union of the degrees where source or target (at the shifted degree)
    /// is nonzero, in the source's user order.
    fn support(&self, source: &ChainComplex, target: &ChainComplex) -> Vec<i64> {
        let mut degs: Vec<i64> = source
            .degrees()
            .chain(target.degrees().map(|m| m - self.shift))
            .collect();
        degs.sort_unstable();
        degs.dedup();
        if source.convention() == Convention::Chain {
            degs.reverse();
        }
        degs
    }

    /// Entrywise `self - other`; both maps need the same shift.
    pub fn sub(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.shift, other.shift, "shift mismatch");
        let mut out = GradedMap::new(self.ring, self.shift);
        let keys: std::collections::BTreeSet<i64> =
            self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        for m in keys {
            let b = match (self.blocks.get(&m), other.blocks.get(&m)) {
                (Some(a), Some(b)) if a.shape() == b.shape() => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b,
                (Some(a), Some(b)) => {
                    assert!(a.rows() * a.cols() == 0 && b.rows() * b.cols() == 0);
                    a.clone()
                }
                (None, None) => unreachable!(),
            };
            out.insert(m, b);
        }
        out
    }
}

/// Checks `d_Y ∘ f_m = f_{m+1} ∘ d_X` at every degree.
pub fn validate_chain_map(
    f: &GradedMap,
    source: &ChainComplex,
    target: &ChainComplex,
) -> Result<(), MapViolation> {
    if f.shift != 0 {
        return Err(MapViolation::Shift(f.shift));
    }
    f.check_shapes(source, target)?;
    for m in f.support(source, target) {
        let left = &target.diff(m) * &f.block_between(source, target, m);
        let right = &f.block_between(source, target, m + 1) * &source.diff(m);
        if let Some((row, col, _)) = (&left - &right).first_nonzero() {
            return Err(MapViolation::NotCommuting {
                degree: source.user_degree(m),
                row,
                col,
            });
        }
    }
    Ok(())
}
