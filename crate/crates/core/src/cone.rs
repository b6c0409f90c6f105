//! Mapping cones `Cone(α) = λ[1] ⊕ F`, homotopies, and null-homotopy
//! construction.
//!
//! The cone of `α : λ -> F` has `Z_m = λ_{m+1} ⊕ F_m` (internal cochain
//! degrees) and differential `[[0, 0], [α_{m+1}, d_m]]` in the raw basis.
//! In the adapted coordinates `[λ_{m+1} | G_m | Im d_{m-1}]` it becomes the
//! unsigned block matrix `[[0,0,0],[α,0,0],[0,δ_m,0]]`.
//!
//! Homotopies are checked against `f - g = d ∘ Ψ + Ψ ∘ d`, so a null-homotopy
//! (from 0 to the identity) satisfies `d ∘ Ψ + Ψ ∘ d = -id`.

use std::collections::BTreeMap;
use std::fmt;

use crate::arith::RingSpec;
use crate::cert::FailureReason;
use crate::complex::{validate_chain_map, ChainComplex, Convention, GradedMap};
use crate::decomposition::{decompose, homology, Decomposition};
use crate::linalg::{inverse, rank, smith_normal_form, solve, Matrix};
use crate::Error;

/// Sizes of the three blocks of `Z_m`, in order `λ_{m+1}`, `G_m`, `Im d_{m-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockSizes {
    pub lambda: usize,
    pub g: usize,
    pub im: usize,
}

impl BlockSizes {
    pub fn total(&self) -> usize {
        self.lambda + self.g + self.im
    }

    /// Offsets of the `G` and `Im` blocks (the `λ` block starts at 0).
    pub fn offsets(&self) -> (usize, usize) {
        (self.lambda, self.lambda + self.g)
    }
}

/// Block sizes keyed by internal degree of the cone.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockLayout {
    degrees: BTreeMap<i64, BlockSizes>,
}

impl BlockLayout {
    pub fn new(degrees: BTreeMap<i64, BlockSizes>) -> Self {
        BlockLayout { degrees }
    }

    pub fn get(&self, m: i64) -> BlockSizes {
        self.degrees.get(&m).copied().unwrap_or(BlockSizes {
            lambda: 0,
            g: 0,
            im: 0,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, BlockSizes)> + '_ {
        self.degrees.iter().map(|(&m, &s)| (m, s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeComplex {
    /// `λ[1] ⊕ F` in the raw basis (λ coordinates first).
    pub underlying: ChainComplex,
    pub layout: BlockLayout,
    pub lambda: ChainComplex,
    pub target: ChainComplex,
    pub alpha: GradedMap,
}

impl ConeComplex {
    /// `block_diag(I, [G | Im])` at internal degree `m`: adapted
    /// coordinates to raw coordinates.
    pub fn adapted_basis(&self, dec: &Decomposition, m: i64) -> Matrix {
        let ring = self.underlying.ring();
        Matrix::identity(ring, self.lambda.rank(m + 1)).block_diag(&dec.adapted_basis(m))
    }

    /// Inverse of [`Self::adapted_basis`].
    pub fn change_of_basis(&self, dec: &Decomposition, m: i64) -> Matrix {
        let ring = self.underlying.ring();
        Matrix::identity(ring, self.lambda.rank(m + 1)).block_diag(&dec.change_of_basis(m))
    }

    /// The cone differential at `m` in adapted coordinates.
    pub fn layout_differential(&self, dec: &Decomposition, m: i64) -> Matrix {
        &(&self.change_of_basis(dec, m + 1) * &self.underlying.diff(m)) * &self.adapted_basis(dec, m)
    }

    /// Checks that `dec` splits the target with the sizes recorded in the
    /// layout.
    pub fn check_layout(&self, dec: &Decomposition) -> Result<(), Error> {
        for m in self.underlying.degrees() {
            let want = self.layout.get(m);
            let found = (dec.g_dim(m), dec.im_dim(m));
            if (want.g, want.im) != found || want.lambda != self.lambda.rank(m + 1) {
                return Err(Error::LayoutMismatch(format!(
                    "degree {}: layout has G={}, Im={}, decomposition has G={}, Im={}",
                    self.underlying.user_degree(m),
                    want.g,
                    want.im,
                    found.0,
                    found.1
                )));
            }
        }
        Ok(())
    }
}

fn window(complexes: &[(i64, i64)]) -> Option<(i64, i64)> {
    complexes
        .iter()
        .filter(|(lo, hi)| lo <= hi)
        .fold(None, |acc, &(lo, hi)| match acc {
            None => Some((lo, hi)),
            Some((a, b)) => Some((a.min(lo), b.max(hi))),
        })
}

/// First user degree where a supposedly scalar complex has a nonzero
/// differential.
fn first_nonzero_differential(x: &ChainComplex) -> Option<i64> {
    x.degrees_by_user_order()
        .into_iter()
        .find(|&m| !x.diff(m).is_zero())
        .map(|m| x.user_degree(m))
}

/// Builds `Cone(α) = λ[1] ⊕ F` for a chain map `α : λ -> F` out of a scalar
/// complex.
pub fn mapping_cone(
    lambda: &ChainComplex,
    f: &ChainComplex,
    alpha: &GradedMap,
) -> Result<ConeComplex, Error> {
    if lambda.ring() != f.ring() {
        return Err(Error::RingMismatch(lambda.ring(), f.ring()));
    }
    if lambda.convention() != f.convention() {
        return Err(Error::ConventionMismatch);
    }
    if alpha.ring() != f.ring() {
        return Err(Error::RingMismatch(alpha.ring(), f.ring()));
    }
    if let Some(degree) = first_nonzero_differential(lambda) {
        return Err(Error::NotScalarSource { degree });
    }
    validate_chain_map(alpha, lambda, f).map_err(Error::NotChainMap)?;

    let ring = f.ring();
    let underlying = match window(&[(lambda.lo() - 1, lambda.hi() - 1), (f.lo(), f.hi())]) {
        None => ChainComplex::zero(ring, f.convention()),
        Some((lo, hi)) => {
            let ranks = (lo..=hi).map(|m| lambda.rank(m + 1) + f.rank(m)).collect();
            let diffs = (lo..hi)
                .map(|m| {
                    let (l_src, l_dst) = (lambda.rank(m + 1), lambda.rank(m + 2));
                    let mut d = Matrix::zeros(ring, l_dst + f.rank(m + 1), l_src + f.rank(m));
                    d.set_block(l_dst, 0, &alpha.block_between(lambda, f, m + 1));
                    d.set_block(l_dst, l_src, &f.diff(m));
                    d
                })
                .collect();
            ChainComplex::from_cochain_parts(ring, f.convention(), lo, ranks, diffs)?
        }
    };
    underlying.validate().map_err(Error::InvalidComplex)?;

    let layout = BlockLayout::new(
        underlying
            .degrees()
            .map(|m| {
                let im = rank(&f.diff(m - 1));
                let sizes = BlockSizes {
                    lambda: lambda.rank(m + 1),
                    g: f.rank(m) - im,
                    im,
                };
                (m, sizes)
            })
            .collect(),
    );
    Ok(ConeComplex {
        underlying,
        layout,
        lambda: lambda.clone(),
        target: f.clone(),
        alpha: alpha.clone(),
    })
}

/// A degree -1 map `Ψ^m : X_m -> X_{m-1}` (internal cochain degrees).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homotopy {
    map: GradedMap,
}

impl Homotopy {
    pub fn new(ring: RingSpec) -> Self {
        Homotopy {
            map: GradedMap::new(ring, -1),
        }
    }

    pub fn from_map(map: GradedMap) -> Result<Self, Error> {
        if map.shift() != -1 {
            return Err(Error::Shape(format!(
                "a homotopy lowers the internal degree by one, got shift {}",
                map.shift()
            )));
        }
        Ok(Homotopy { map })
    }

    pub fn ring(&self) -> RingSpec {
        self.map.ring()
    }

    pub fn insert(&mut self, m: i64, block: Matrix) {
        self.map.insert(m, block);
    }

    pub fn get(&self, m: i64) -> Option<&Matrix> {
        self.map.get(m)
    }

    /// `Ψ^m` on `x`, zero when absent.
    pub fn block_on(&self, x: &ChainComplex, m: i64) -> Matrix {
        self.map.block_between(x, x, m)
    }

    pub fn as_map(&self) -> &GradedMap {
        &self.map
    }

    pub fn into_map(self) -> GradedMap {
        self.map
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomotopyViolation {
    Shape {
        degree: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    Mismatch {
        degree: i64,
        row: usize,
        col: usize,
        expected: String,
        found: String,
    },
}

impl fmt::Display for HomotopyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomotopyViolation::Shape {
                degree,
                expected,
                found,
            } => write!(
                f,
                "block at degree {degree} is {}x{}, expected {}x{}",
                found.0, found.1, expected.0, expected.1
            ),
            HomotopyViolation::Mismatch {
                degree,
                row,
                col,
                expected,
                found,
            } => write!(
                f,
                "degree {degree}, entry ({row}, {col}): f - g is {expected} but dΨ + Ψd is {found}"
            ),
        }
    }
}

/// `d_{m-1} Ψ^m + Ψ^{m+1} d_m` at internal degree `m`.
pub fn homotopy_composite(x: &ChainComplex, psi: &Homotopy, m: i64) -> Matrix {
    &(&x.diff(m - 1) * &psi.block_on(x, m)) + &(&psi.block_on(x, m + 1) * &x.diff(m))
}

/// Checks `f^m - g^m = d Ψ^m + Ψ^{m+1} d` at every degree of `x`, reporting
/// the smallest user degree that fails.
pub fn verify_homotopy(
    x: &ChainComplex,
    f: &GradedMap,
    g: &GradedMap,
    psi: &Homotopy,
) -> Result<(), HomotopyViolation> {
    for m in x.degrees_by_user_order() {
        let expected = (x.rank(m - 1), x.rank(m));
        if let Some(b) = psi.get(m) {
            let degenerate = b.rows() * b.cols() == 0 && expected.0 * expected.1 == 0;
            if b.shape() != expected && !degenerate {
                return Err(HomotopyViolation::Shape {
                    degree: x.user_degree(m),
                    expected,
                    found: b.shape(),
                });
            }
        }
    }
    for m in x.degrees_by_user_order() {
        let n = x.rank(m);
        let lhs = &f.block(m, n, n) - &g.block(m, n, n);
        let rhs = homotopy_composite(x, psi, m);
        if let Some((row, col, _)) = (&lhs - &rhs).first_nonzero() {
            return Err(HomotopyViolation::Mismatch {
                degree: x.user_degree(m),
                row,
                col,
                expected: lhs.get(row, col).to_string(),
                found: rhs.get(row, col).to_string(),
            });
        }
    }
    Ok(())
}

/// Checks `d Ψ + Ψ d = -id`.
pub fn verify_null_homotopy(x: &ChainComplex, psi: &Homotopy) -> Result<(), HomotopyViolation> {
    verify_homotopy(x, &GradedMap::zero(x.ring(), 0), &GradedMap::identity(x), psi)
}

/// Per-degree check of the eigenmap hypotheses for `α` against a decomposition
/// adapted to it. On success returns `C` with `α_G = ker δ · C`, which is
/// then square and invertible over the ring.
pub(crate) fn alpha_coordinates(
    cone: &ConeComplex,
    dec: &Decomposition,
    m: i64,
) -> Result<Matrix, FailureReason> {
    let f = &cone.target;
    let lambda = &cone.lambda;
    let degree = f.user_degree(m);
    let a = cone.alpha.block_between(lambda, f, m);
    let l = lambda.rank(m);
    let ring = f.ring();
    let Some(d) = dec.get(m) else {
        return if l == 0 {
            Ok(Matrix::zeros(ring, 0, 0))
        } else {
            Err(FailureReason::RankMismatch { degree })
        };
    };
    if l != d.basis_ker_delta.dim() {
        return Err(FailureReason::RankMismatch { degree });
    }
    if rank(&a) < l {
        return Err(FailureReason::AlphaNotInjective { degree });
    }
    if !(&d.to_im_coords() * &a).is_zero() {
        return Err(FailureReason::AlphaNotIntoG { degree });
    }
    let a_g = &d.to_g_coords() * &a;
    let c = solve(&d.basis_ker_delta.vectors, &a_g)
        .expect("shapes agree")
        .ok_or(FailureReason::AlphaNotIntoG { degree })?;
    if inverse(&c).is_err() {
        let factors = smith_normal_form(&c).map(|s| s.torsion()).unwrap_or_default();
        return Err(FailureReason::NotSaturated { degree, factors });
    }
    Ok(c)
}

/// Builds `Φ` from the splitting `dec` of the target (which must be adapted
/// to `α`, see [`crate::decomposition::decompose_adapted`]):
/// `φ₁ = -α⁻¹` on `ker δ_m` and 0 on `K_m`, `φ₂ = -(δ_{m-1}|_K)⁻¹`.
pub fn construct_null_homotopy(cone: &ConeComplex, dec: &Decomposition) -> Result<Homotopy, Error> {
    cone.check_layout(dec)?;
    let z = &cone.underlying;
    let ring = z.ring();
    let mut coords = BTreeMap::new();
    let lo = z.lo().min(cone.lambda.lo());
    let hi = z.hi().max(cone.lambda.hi());
    let mut order: Vec<i64> = (lo..=hi).collect();
    if z.convention() == Convention::Chain {
        order.reverse();
    }
    for m in order {
        let c = alpha_coordinates(cone, dec, m).map_err(Error::HypothesisFailure)?;
        coords.insert(m, c);
    }

    let mut psi = Homotopy::new(ring);
    for m in z.degrees() {
        let src = cone.layout.get(m);
        let dst = cone.layout.get(m - 1);
        if src.total() == 0 || dst.total() == 0 {
            continue;
        }
        let mut block = Matrix::zeros(ring, dst.total(), src.total());
        if let Some(d) = dec.get(m) {
            let l = cone.lambda.rank(m);
            if l > 0 {
                // coordinates in [K | ker δ], then ker δ coordinates through C⁻¹
                let kk = d.basis_k.vectors.hstack(&d.basis_ker_delta.vectors);
                let split = inverse(&kk)?;
                let ker_rows = split.submatrix(d.basis_k.dim(), split.rows(), 0, split.cols());
                let c_inv = inverse(&coords[&m])?;
                let phi1 = -&(&c_inv * &ker_rows);
                block.set_block(0, src.offsets().0, &phi1);
            }
        }
        if let (Some(prev), true) = (dec.get(m - 1), src.im > 0) {
            let k = &prev.basis_k.vectors;
            let on_k = inverse(&(&prev.delta * k))?;
            let phi2 = -&(k * &on_k);
            block.set_block(dst.offsets().0, src.offsets().1, &phi2);
        }
        let raw = &(&cone.adapted_basis(dec, m - 1) * &block) * &cone.change_of_basis(dec, m);
        psi.insert(m, raw);
    }
    Ok(psi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contractibility {
    pub contractible: bool,
    pub witness: Option<Homotopy>,
}

/// Decides `X ∼ 0`: a bounded complex of free modules is contractible
/// exactly when all of its homology, torsion included, vanishes. A witness
/// `Ψ` with `dΨ + Ψd = -id` is returned in that case.
pub fn is_contractible(x: &ChainComplex) -> Contractibility {
    if !homology(x).is_zero() {
        return Contractibility {
            contractible: false,
            witness: None,
        };
    }
    let lambda = ChainComplex::zero(x.ring(), x.convention());
    let alpha = GradedMap::zero(x.ring(), 0);
    let cone = mapping_cone(&lambda, x, &alpha).expect("zero map into a valid complex");
    let dec = decompose(x).expect("acyclic complexes split");
    let witness = construct_null_homotopy(&cone, &dec).expect("acyclic complexes split");
    Contractibility {
        contractible: true,
        witness: Some(witness),
    }
}
