//! Splitting each module of a complex as `F_m = G_m ⊕ Im d_{m-1}` and
//! `G_m = K_m ⊕ ker δ_m`, where `δ_m` is the differential restricted to
//! `G_m`. Homology and the canonical eigenmap are read off these splittings.
//!
//! Over ℤ the splittings exist only when the relevant submodules are
//! saturated; failures report the torsion that blocks them.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::arith::RingSpec;
use crate::cert::FailureReason;
use crate::complex::{ChainComplex, Convention, GradedMap};
use crate::linalg::{
    column_echelon, complement_basis, image_basis, inverse, kernel_basis, rank,
    saturation_defect, smith_normal_form, solve, Matrix, SubspaceBasis,
};
use crate::Error;

/// Splitting data at one (internal) degree `m`.
///
/// `basis_g` and `basis_im_prev` are in ambient coordinates of `F_m`;
/// `basis_ker_delta` and `basis_k` are in coordinates of `basis_g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDecomposition {
    pub degree: i64,
    pub basis_im_prev: SubspaceBasis,
    pub basis_g: SubspaceBasis,
    pub basis_ker_delta: SubspaceBasis,
    pub basis_k: SubspaceBasis,
    /// `δ_m : G_m -> Im d_m`, columns in the image basis of degree `m + 1`.
    pub delta: Matrix,
    /// `[G | Im d_{m-1}]`: adapted coordinates to ambient coordinates.
    pub adapted_basis: Matrix,
    /// Inverse of `adapted_basis`: ambient coordinates to `[G | Im]` coordinates.
    pub change_of_basis: Matrix,
    /// Whether `G_m` was chosen to contain the image of a given eigenmap
    /// instead of by the default rule.
    pub alpha_adapted: bool,
}

impl DegreeDecomposition {
    pub fn g_dim(&self) -> usize {
        self.basis_g.dim()
    }

    pub fn im_dim(&self) -> usize {
        self.basis_im_prev.dim()
    }

    /// `ker δ_m` in ambient coordinates.
    pub fn ker_delta_ambient(&self) -> Matrix {
        &self.basis_g.vectors * &self.basis_ker_delta.vectors
    }

    /// Rows of `change_of_basis` giving `G` coordinates.
    pub fn to_g_coords(&self) -> Matrix {
        self.change_of_basis.submatrix(0, self.g_dim(), 0, self.change_of_basis.cols())
    }

    /// Rows of `change_of_basis` giving `Im d_{m-1}` coordinates.
    pub fn to_im_coords(&self) -> Matrix {
        let n = self.change_of_basis.rows();
        self.change_of_basis.submatrix(self.g_dim(), n, 0, n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub ring: RingSpec,
    pub convention: Convention,
    degrees: BTreeMap<i64, DegreeDecomposition>,
}

impl Decomposition {
    /// Splitting at internal degree `m`, if `m` lies in the window.
    pub fn get(&self, m: i64) -> Option<&DegreeDecomposition> {
        self.degrees.get(&m)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &DegreeDecomposition)> {
        self.degrees.iter().map(|(&m, d)| (m, d))
    }

    pub fn user_degree(&self, m: i64) -> i64 {
        self.convention.internal(m)
    }

    /// `dim G_m` (0 outside the window).
    pub fn g_dim(&self, m: i64) -> usize {
        self.get(m).map_or(0, DegreeDecomposition::g_dim)
    }

    pub fn im_dim(&self, m: i64) -> usize {
        self.get(m).map_or(0, DegreeDecomposition::im_dim)
    }

    /// `change_of_basis` at `m`, or the empty matrix outside the window.
    pub fn change_of_basis(&self, m: i64) -> Matrix {
        self.get(m)
            .map_or_else(|| Matrix::identity(self.ring, 0), |d| d.change_of_basis.clone())
    }

    pub fn adapted_basis(&self, m: i64) -> Matrix {
        self.get(m)
            .map_or_else(|| Matrix::identity(self.ring, 0), |d| d.adapted_basis.clone())
    }
}

/// Basis of the saturation of the lattice spanned by the columns of `a`
/// (over a field: of its span).
fn saturation(a: &Matrix) -> Matrix {
    if a.ring().is_field() {
        return column_echelon(a).basis;
    }
    let snf = smith_normal_form(a).expect("integer matrix");
    let u_inv = inverse(&snf.u).expect("unimodular");
    let idx: Vec<usize> = (0..snf.rank()).collect();
    column_echelon(&u_inv.select_columns(&idx)).basis
}

fn image_bases(f: &ChainComplex) -> BTreeMap<i64, SubspaceBasis> {
    (f.lo()..=f.hi() + 1)
        .map(|m| (m, image_basis(&f.diff(m - 1))))
        .collect()
}

/// Splits a single degree. `prefer` is an eigenmap block `λ_m -> F_m` whose
/// image `G_m` should contain when the default complement does not.
fn decompose_degree(
    f: &ChainComplex,
    m: i64,
    im_here: &SubspaceBasis,
    im_next: &SubspaceBasis,
    prefer: Option<&Matrix>,
) -> Result<DegreeDecomposition, Error> {
    let degree = f.user_degree(m);
    let defect = saturation_defect(&im_here.vectors);
    if !defect.is_empty() {
        return Err(Error::NotSaturated {
            degree,
            factors: defect,
        });
    }
    let split = |g: &SubspaceBasis| -> Result<(Matrix, Matrix), Error> {
        let p = g.vectors.hstack(&im_here.vectors);
        let q = inverse(&p)?;
        Ok((p, q))
    };
    let mut basis_g = complement_basis(im_here)?;
    let (mut p, mut q) = split(&basis_g)?;
    let mut alpha_adapted = false;

    if let Some(a) = prefer.filter(|a| !a.is_zero()) {
        let im_part = q.submatrix(basis_g.dim(), q.rows(), 0, q.cols());
        if !(&im_part * a).is_zero() {
            let sat = saturation(a);
            let combined = im_here.vectors.hstack(&sat);
            let independent = rank(&combined) == im_here.dim() + sat.cols();
            if !independent || !saturation_defect(&combined).is_empty() {
                return Err(Error::HypothesisFailure(FailureReason::AlphaNotIntoG {
                    degree,
                }));
            }
            let rest = complement_basis(&SubspaceBasis {
                ambient_dim: f.rank(m),
                vectors: combined,
            })?;
            basis_g = SubspaceBasis {
                ambient_dim: f.rank(m),
                vectors: sat.hstack(&rest.vectors),
            };
            (p, q) = split(&basis_g)?;
            alpha_adapted = true;
        }
    }

    let image_of_g = &f.diff(m) * &basis_g.vectors;
    let delta = solve(&im_next.vectors, &image_of_g)?
        .expect("d_m(G_m) lies in the image lattice of d_m");
    let basis_ker_delta = kernel_basis(&delta);
    let defect = saturation_defect(&basis_ker_delta.vectors);
    if !defect.is_empty() {
        return Err(Error::NotSaturated {
            degree,
            factors: defect,
        });
    }
    let basis_k = complement_basis(&basis_ker_delta)?;
    Ok(DegreeDecomposition {
        degree: m,
        basis_im_prev: im_here.clone(),
        basis_g,
        basis_ker_delta,
        basis_k,
        delta,
        adapted_basis: p,
        change_of_basis: q,
        alpha_adapted,
    })
}

/// Splits every degree of `f` with the default complement rule.
pub fn decompose(f: &ChainComplex) -> Result<Decomposition, Error> {
    decompose_adapted(f, None)
}

/// Like [`decompose`], but where the default `G_m` does not contain the
/// image of `alpha_m`, picks a complement that does. Fails with
/// `AlphaNotIntoG` when no complement of `Im d_{m-1}` contains it.
pub fn decompose_adapted(
    f: &ChainComplex,
    alpha: Option<(&GradedMap, &ChainComplex)>,
) -> Result<Decomposition, Error> {
    match decompose_prefix(f, alpha) {
        (dec, None) => Ok(dec),
        (_, Some((_, err))) => Err(err),
    }
}

/// Splits degrees in increasing user order until one fails; returns the
/// degrees split so far and the failing internal degree with its error.
pub(crate) fn decompose_prefix(
    f: &ChainComplex,
    alpha: Option<(&GradedMap, &ChainComplex)>,
) -> (Decomposition, Option<(i64, Error)>) {
    let ims = image_bases(f);
    let mut dec = Decomposition {
        ring: f.ring(),
        convention: f.convention(),
        degrees: BTreeMap::new(),
    };
    for m in f.degrees_by_user_order() {
        let prefer = alpha.map(|(a, lambda)| a.block_between(lambda, f, m));
        match decompose_degree(f, m, &ims[&m], &ims[&(m + 1)], prefer.as_ref()) {
            Ok(d) => {
                dec.degrees.insert(m, d);
            }
            Err(e) => return (dec, Some((m, e))),
        }
    }
    (dec, None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHomology {
    /// User degree.
    pub degree: i64,
    pub betti: usize,
    /// Invariant factors > 1 (ℤ only).
    pub torsion: Vec<BigInt>,
    /// Cycles spanning `ker δ_m`; absent when torsion blocks the splitting.
    pub representatives: Option<SubspaceBasis>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyResult {
    pub ring: RingSpec,
    pub convention: Convention,
    /// Ordered by increasing user degree.
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyResult {
    pub fn betti(&self, user_degree: i64) -> usize {
        self.degrees
            .iter()
            .find(|d| d.degree == user_degree)
            .map_or(0, |d| d.betti)
    }

    pub fn betti_numbers(&self) -> BTreeMap<i64, usize> {
        self.degrees.iter().map(|d| (d.degree, d.betti)).collect()
    }

    /// Vanishing homology, torsion included.
    pub fn is_zero(&self) -> bool {
        self.degrees
            .iter()
            .all(|d| d.betti == 0 && d.torsion.is_empty())
    }

    pub fn first_torsion(&self) -> Option<&DegreeHomology> {
        self.degrees.iter().find(|d| !d.torsion.is_empty())
    }
}

/// `H^m = ker d_m / Im d_{m-1}` at every degree of the window.
pub fn homology(f: &ChainComplex) -> HomologyResult {
    let ims = image_bases(f);
    let degrees = f
        .degrees_by_user_order()
        .into_iter()
        .map(|m| {
            let rank_out = rank(&f.diff(m));
            let rank_in = ims[&m].dim();
            let betti = f.rank(m) - rank_out - rank_in;
            let torsion = if f.ring().is_field() {
                Vec::new()
            } else {
                smith_normal_form(&f.diff(m - 1))
                    .expect("integer matrix")
                    .torsion()
            };
            let representatives = if torsion.is_empty() {
                decompose_degree(f, m, &ims[&m], &ims[&(m + 1)], None)
                    .ok()
                    .map(|d| SubspaceBasis {
                        ambient_dim: f.rank(m),
                        vectors: d.ker_delta_ambient(),
                    })
            } else {
                None
            };
            DegreeHomology {
                degree: f.user_degree(m),
                betti,
                torsion,
                representatives,
            }
        })
        .collect();
    HomologyResult {
        ring: f.ring(),
        convention: f.convention(),
        degrees,
    }
}

/// The eigenvalue `λ = H(F)` (as a complex with zero differentials) and the
/// eigenmap sending the standard basis of `λ_m` to the chosen cycle
/// representatives in `G_m`.
pub fn canonical_alpha(f: &ChainComplex) -> Result<(ChainComplex, GradedMap), Error> {
    let h = homology(f);
    if let Some(t) = h.first_torsion() {
        return Err(Error::TorsionHomology {
            degree: t.degree,
            factors: t.torsion.clone(),
        });
    }
    let dec = decompose(f)?;
    let ranks: BTreeMap<i64, usize> = f
        .degrees()
        .map(|m| (f.user_degree(m), dec.get(m).map_or(0, |d| d.basis_ker_delta.dim())))
        .collect();
    let lambda = ChainComplex::scalar_object(f.ring(), f.convention(), &ranks);
    let mut alpha = GradedMap::new(f.ring(), 0);
    for (m, d) in dec.iter() {
        alpha.insert(m, d.ker_delta_ambient());
    }
    Ok((lambda, alpha))
}
