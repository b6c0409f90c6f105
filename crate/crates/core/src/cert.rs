//! Deciding whether `(λ, α)` is an eigenvalue of `F` with eigenobject `R`,
//! and the block analysis of null-homotopies of the cone.
//!
//! With `R` as eigenobject, `Cone(α) ⊗ R = Cone(α)`, so `λ` is an eigenvalue
//! exactly when the cone is contractible. The forward direction produces an
//! explicit witness; the converse reports the first hypothesis that fails.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::arith::RingSpec;
use crate::complex::{ChainComplex, Convention, GradedMap};
use crate::cone::{
    alpha_coordinates, construct_null_homotopy, is_contractible, mapping_cone,
    verify_null_homotopy, ConeComplex, Homotopy,
};
use crate::decomposition::{canonical_alpha, decompose_prefix, homology, Decomposition};
use crate::linalg::{complement_basis, image_basis, inverse, rank, spans, Matrix, SubspaceBasis};
use crate::Error;

/// Why `(λ, α)` fails to be an eigenvalue. Degrees are user degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    /// `rank λ_n` differs from the Betti number of `F` at `n`.
    RankMismatch { degree: i64 },
    /// `H^n(F)` has torsion, so it is not a free module.
    Torsion { degree: i64, factors: Vec<BigInt> },
    AlphaNotInjective { degree: i64 },
    /// No complement of `Im d_{n-1}` contains `Im α_n` (equivalently, `α`
    /// does not induce an injection into homology).
    AlphaNotIntoG { degree: i64 },
    /// Over ℤ: `Im α_n` has full rank in `ker δ_n` but is a proper sublattice.
    NotSaturated { degree: i64, factors: Vec<BigInt> },
}

impl FailureReason {
    pub fn degree(&self) -> i64 {
        match self {
            FailureReason::RankMismatch { degree }
            | FailureReason::Torsion { degree, .. }
            | FailureReason::AlphaNotInjective { degree }
            | FailureReason::AlphaNotIntoG { degree }
            | FailureReason::NotSaturated { degree, .. } => *degree,
        }
    }
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::RankMismatch { degree } => write!(f, "RankMismatch({degree})"),
            FailureReason::Torsion { degree, factors } => {
                write!(f, "Torsion({degree}, {factors:?})")
            }
            FailureReason::AlphaNotInjective { degree } => {
                write!(f, "AlphaNotInjective({degree})")
            }
            FailureReason::AlphaNotIntoG { degree } => write!(f, "AlphaNotIntoG({degree})"),
            FailureReason::NotSaturated { degree, factors } => {
                write!(f, "NotSaturated({degree}, {factors:?})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Eigenvalue,
    NotEigenvalue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenCertificate {
    pub verdict: Verdict,
    pub ring: RingSpec,
    pub convention: Convention,
    /// Always `"R"`: the ring itself as a rank-one free module.
    pub eigenobject: String,
    /// Keyed by user degree.
    pub lambda_ranks: BTreeMap<i64, usize>,
    pub homology_ranks: BTreeMap<i64, usize>,
    pub torsion: BTreeMap<i64, Vec<BigInt>>,
    pub alpha_injective: BTreeMap<i64, bool>,
    pub witness: Option<Homotopy>,
    pub failure_reason: Option<FailureReason>,
    /// Independent check of `Cone(α) ∼ 0` by the homology criterion.
    pub cone_contractible: bool,
    pub cone: ConeComplex,
    /// `[G | Im d]` bases of the target used for the witness, by user degree.
    pub bases: BTreeMap<i64, Matrix>,
}

impl EigenCertificate {
    /// Re-checks the witness from scratch against the stored cone.
    pub fn reverify(&self) -> bool {
        let consistent = match self.verdict {
            Verdict::Eigenvalue => self.failure_reason.is_none() && self.witness.is_some(),
            Verdict::NotEigenvalue => self.failure_reason.is_some() && self.witness.is_none(),
        };
        consistent
            && self
                .witness
                .as_ref()
                .is_none_or(|w| verify_null_homotopy(&self.cone.underlying, w).is_ok())
    }
}

/// Internal degrees covered by either complex, by increasing user degree.
fn joint_degrees(a: &ChainComplex, b: &ChainComplex) -> Vec<i64> {
    let mut d: Vec<i64> = a.degrees().chain(b.degrees()).collect();
    d.sort_unstable();
    d.dedup();
    if a.convention() == Convention::Chain {
        d.reverse();
    }
    d
}

/// Decides whether `λ` (with eigenmap `α : λ -> F`) is a categorified
/// eigenvalue of `F` with eigenobject `R`.
pub fn decide_eigenvalue(
    f: &ChainComplex,
    lambda: &ChainComplex,
    alpha: &GradedMap,
) -> Result<EigenCertificate, Error> {
    f.validate().map_err(Error::InvalidComplex)?;
    let cone = mapping_cone(lambda, f, alpha)?;
    let h = homology(f);
    let (dec, stopped) = decompose_prefix(f, Some((alpha, lambda)));

    let mut failure = None;
    for m in joint_degrees(f, lambda) {
        let degree = f.user_degree(m);
        let l = lambda.rank(m);
        let a = alpha.block_between(lambda, f, m);
        let dh = h.degrees.iter().find(|d| d.degree == degree);
        let betti = dh.map_or(0, |d| d.betti);
        let reason = if let Some(t) = dh.filter(|d| !d.torsion.is_empty()) {
            Some(FailureReason::Torsion {
                degree,
                factors: t.torsion.clone(),
            })
        } else if l != betti {
            Some(FailureReason::RankMismatch { degree })
        } else if rank(&a) < l {
            Some(FailureReason::AlphaNotInjective { degree })
        } else {
            match &stopped {
                Some((at, err)) if *at == m => Some(match err {
                    Error::HypothesisFailure(r) => r.clone(),
                    other => return Err(other.clone()),
                }),
                _ => alpha_coordinates(&cone, &dec, m).err(),
            }
        };
        if reason.is_some() {
            failure = reason;
            break;
        }
    }

    let alpha_injective = joint_degrees(f, lambda)
        .into_iter()
        .filter(|&m| lambda.rank(m) > 0)
        .map(|m| {
            let a = alpha.block_between(lambda, f, m);
            (f.user_degree(m), rank(&a) == lambda.rank(m))
        })
        .collect();

    let (witness, bases) = if failure.is_none() {
        let psi = construct_null_homotopy(&cone, &dec)?;
        assert!(
            verify_null_homotopy(&cone.underlying, &psi).is_ok(),
            "constructed witness fails verification"
        );
        let bases = dec
            .iter()
            .map(|(m, d)| (f.user_degree(m), d.adapted_basis.clone()))
            .collect();
        (Some(psi), bases)
    } else {
        (None, BTreeMap::new())
    };
    let cone_contractible = match &witness {
        Some(_) => true,
        None => is_contractible(&cone.underlying).contractible,
    };

    Ok(EigenCertificate {
        verdict: if failure.is_none() {
            Verdict::Eigenvalue
        } else {
            Verdict::NotEigenvalue
        },
        ring: f.ring(),
        convention: f.convention(),
        eigenobject: "R".to_string(),
        lambda_ranks: lambda.user_ranks(),
        homology_ranks: h.betti_numbers(),
        torsion: h
            .degrees
            .iter()
            .filter(|d| !d.torsion.is_empty())
            .map(|d| (d.degree, d.torsion.clone()))
            .collect(),
        alpha_injective,
        witness,
        failure_reason: failure,
        cone_contractible,
        cone,
        bases,
    })
}

/// Certifies the homology of `F` (with its canonical eigenmap) as an
/// eigenvalue of `F`.
pub fn certify_homology_eigenvalue(f: &ChainComplex) -> Result<EigenCertificate, Error> {
    f.validate().map_err(Error::InvalidComplex)?;
    let (lambda, alpha) = canonical_alpha(f)?;
    decide_eigenvalue(f, &lambda, &alpha)
}

/// Block-by-block analysis of one degree `m` of a homotopy on the cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBlocks {
    /// User degree of `Z_m`.
    pub degree: i64,
    /// `ψ^m_{12} : G_m -> λ_m`.
    pub psi12: Matrix,
    /// `ψ^m_{23} : Im d_{m-1} -> G_{m-1}`.
    pub psi23: Matrix,
    /// `ψ^m_{12} α_m = -id`.
    pub eq1_holds: bool,
    /// `α_m ψ^m_{12} + ψ^{m+1}_{23} δ_m = -id`.
    pub eq2_holds: bool,
    /// `δ_{m-1} ψ^m_{23} = -id`.
    pub eq3_holds: bool,
    /// `c_{m-1} = ψ^m_{23} + (δ_{m-1}|_K)⁻¹`.
    pub c_residual: Option<Matrix>,
    /// `δ_{m-1} c_{m-1} = 0`.
    pub c_condition_holds: bool,
    /// `ψ^m_{12}` restricted to a complement of `Im α_m` in `G_m`.
    pub g_residual: Option<Matrix>,
    pub rank_a: usize,
    pub rank_b: usize,
    pub rank_c: usize,
    pub rank_d: usize,
    pub im_alpha_eq_ker_delta: bool,
}

impl DegreeBlocks {
    pub fn conclusions_hold(&self) -> bool {
        self.rank_a == 0 && self.rank_d == 0 && self.im_alpha_eq_ker_delta
    }

    pub fn equations_hold(&self) -> bool {
        self.eq1_holds && self.eq2_holds && self.eq3_holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAnalysis {
    pub degrees: Vec<DegreeBlocks>,
}

impl BlockAnalysis {
    pub fn equations_hold(&self) -> bool {
        self.degrees.iter().all(DegreeBlocks::equations_hold)
    }

    pub fn conclusions_hold(&self) -> bool {
        self.degrees.iter().all(DegreeBlocks::conclusions_hold)
    }

    pub fn c_conditions_hold(&self) -> bool {
        self.degrees.iter().all(|d| d.c_condition_holds)
    }
}

fn is_minus_identity(a: &Matrix) -> bool {
    a.is_square() && (-a).is_identity()
}

/// Extracts the blocks of `Ψ` in the adapted layout `[λ | G | Im]` of the
/// cone and evaluates the diagonal homotopy equations and their
/// consequences. `dec` must be the splitting of the target the layout
/// refers to (adapted to `α`).
pub fn analyze_homotopy_blocks(
    cone: &ConeComplex,
    psi: &Homotopy,
    dec: &Decomposition,
) -> Result<BlockAnalysis, Error> {
    cone.check_layout(dec)?;
    let z = &cone.underlying;
    let f = &cone.target;
    let ring = z.ring();
    for m in z.degrees() {
        if let Some(b) = psi.get(m) {
            let expected = (z.rank(m - 1), z.rank(m));
            if b.shape() != expected && b.rows() * b.cols() + expected.0 * expected.1 != 0 {
                return Err(Error::LayoutMismatch(format!(
                    "homotopy block at degree {} is {}x{}, expected {}x{}",
                    z.user_degree(m),
                    b.rows(),
                    b.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
    }
    let layout_psi = |m: i64| -> Matrix {
        &(&cone.change_of_basis(dec, m - 1) * &psi.block_on(z, m)) * &cone.adapted_basis(dec, m)
    };
    // α_m in G_m coordinates, δ_m, and K_m / ker δ_m bases (G coordinates)
    let parts = |m: i64| -> (Matrix, Matrix, SubspaceBasis, SubspaceBasis) {
        let l = cone.lambda.rank(m);
        match dec.get(m) {
            Some(d) => (
                &d.to_g_coords() * &cone.alpha.block_between(&cone.lambda, f, m),
                d.delta.clone(),
                d.basis_k.clone(),
                d.basis_ker_delta.clone(),
            ),
            None => (
                Matrix::zeros(ring, 0, l),
                Matrix::zeros(ring, dec.im_dim(m + 1), 0),
                SubspaceBasis::empty(ring, 0),
                SubspaceBasis::empty(ring, 0),
            ),
        }
    };

    let mut degrees = Vec::new();
    for m in z.degrees_by_user_order() {
        let here = cone.layout.get(m);
        let below = cone.layout.get(m - 1);
        let above = cone.layout.get(m + 1);
        let l_m = cone.lambda.rank(m);
        let p = layout_psi(m);
        let p_next = layout_psi(m + 1);
        // rows of Ψ^m: [λ_m | G_{m-1} | Im d_{m-2}], columns: [λ_{m+1} | G_m | Im d_{m-1}]
        let psi12 = p.submatrix(0, below.lambda, here.lambda, here.lambda + here.g);
        let psi23 = p.submatrix(
            below.lambda,
            below.lambda + below.g,
            here.lambda + here.g,
            here.total(),
        );
        let psi23_next = p_next.submatrix(
            here.lambda,
            here.lambda + here.g,
            above.lambda + above.g,
            above.total(),
        );
        let (alpha_g, delta, k, ker) = parts(m);
        let (_, delta_prev, k_prev, _) = parts(m - 1);
        debug_assert_eq!(below.lambda, l_m);

        let eq1 = &psi12 * &alpha_g;
        let eq2 = &(&alpha_g * &psi12) + &(&psi23_next * &delta);
        let eq3 = &delta_prev * &psi23;

        let c_residual = inverse(&(&delta_prev * &k_prev.vectors))
            .ok()
            .map(|inv| &psi23 + &(&k_prev.vectors * &inv));
        let c_condition_holds = c_residual
            .as_ref()
            .is_some_and(|c| (&delta_prev * c).is_zero());

        let g_residual = complement_basis(&image_basis(&alpha_g))
            .ok()
            .map(|c| &psi12 * &c.vectors);

        let rank_alpha = rank(&alpha_g);
        let rank_c = ker.dim() + rank_alpha - rank(&ker.vectors.hstack(&alpha_g));
        let rank_d = k.dim() + rank_alpha - rank(&k.vectors.hstack(&alpha_g));
        let im_alpha_eq_ker_delta =
            spans(&alpha_g, &ker.vectors) && spans(&ker.vectors, &alpha_g);

        degrees.push(DegreeBlocks {
            degree: z.user_degree(m),
            psi12,
            psi23,
            eq1_holds: l_m == 0 || is_minus_identity(&eq1),
            eq2_holds: here.g == 0 || is_minus_identity(&eq2),
            eq3_holds: here.im == 0 || is_minus_identity(&eq3),
            c_residual,
            c_condition_holds,
            g_residual,
            rank_a: ker.dim() - rank_c,
            rank_b: k.dim() - rank_d,
            rank_c,
            rank_d,
            im_alpha_eq_ker_delta,
        });
    }
    Ok(BlockAnalysis { degrees })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::decompose_adapted;

    fn z(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64(RingSpec::Integers, rows)
    }

    fn circle() -> ChainComplex {
        ChainComplex::new(
            RingSpec::Integers,
            Convention::Chain,
            &BTreeMap::from([(0, 3), (1, 3)]),
            &BTreeMap::from([(1, z(&[&[0, 0, 0], &[1, 0, -1], &[0, 1, -1]]))]),
        )
        .unwrap()
    }

    fn lambda(ranks: &[(i64, usize)]) -> ChainComplex {
        ChainComplex::scalar_object(
            RingSpec::Integers,
            Convention::Chain,
            &ranks.iter().copied().collect(),
        )
    }

    fn alpha(f: &ChainComplex, blocks: &[(i64, Matrix)]) -> GradedMap {
        let mut a = GradedMap::new(f.ring(), 0);
        for (n, b) in blocks {
            a.insert(f.internal_degree(*n), b.clone());
        }
        a
    }

    #[test]
    fn circle_is_an_eigenvalue() {
        let f = circle();
        let a = alpha(&f, &[(1, z(&[&[1], &[1], &[1]])), (0, z(&[&[1], &[0], &[0]]))]);
        let cert = decide_eigenvalue(&f, &lambda(&[(0, 1), (1, 1)]), &a).unwrap();
        assert_eq!(cert.verdict, Verdict::Eigenvalue);
        assert!(cert.reverify());
        assert!(cert.cone_contractible);
        let zc = &cert.cone.underlying;
        let w = cert.witness.as_ref().unwrap();
        assert_eq!(w.block_on(zc, zc.internal_degree(1)), z(&[&[0, 0, 0, -1]]));
    }

    #[test]
    fn rank_mismatch_at_degree_zero() {
        let f = circle();
        let a = alpha(
            &f,
            &[(1, z(&[&[1], &[1], &[1]])), (0, z(&[&[1, 0], &[0, 1], &[0, 0]]))],
        );
        let cert = decide_eigenvalue(&f, &lambda(&[(0, 2), (1, 1)]), &a).unwrap();
        assert_eq!(cert.verdict, Verdict::NotEigenvalue);
        assert_eq!(
            cert.failure_reason,
            Some(FailureReason::RankMismatch { degree: 0 })
        );
        assert!(!cert.cone_contractible);
        assert!(cert.reverify());
    }

    #[test]
    fn non_injective_and_boundary_alphas() {
        let f = circle();
        let l = lambda(&[(0, 1), (1, 1)]);
        let a = alpha(&f, &[(1, z(&[&[1], &[1], &[1]]))]);
        let cert = decide_eigenvalue(&f, &l, &a).unwrap();
        assert_eq!(
            cert.failure_reason,
            Some(FailureReason::AlphaNotInjective { degree: 0 })
        );
        assert_eq!(cert.alpha_injective, BTreeMap::from([(0, false), (1, true)]));

        let a = alpha(&f, &[(1, z(&[&[1], &[1], &[1]])), (0, z(&[&[0], &[1], &[0]]))]);
        let cert = decide_eigenvalue(&f, &l, &a).unwrap();
        assert_eq!(
            cert.failure_reason,
            Some(FailureReason::AlphaNotIntoG { degree: 0 })
        );
        assert!(!cert.cone_contractible);
    }

    #[test]
    fn representative_outside_default_complement_still_certifies() {
        let f = circle();
        let a = alpha(&f, &[(1, z(&[&[1], &[1], &[1]])), (0, z(&[&[1], &[1], &[0]]))]);
        let cert = decide_eigenvalue(&f, &lambda(&[(0, 1), (1, 1)]), &a).unwrap();
        assert_eq!(cert.verdict, Verdict::Eigenvalue);
        assert!(cert.reverify());
    }

    #[test]
    fn doubled_cycle_is_not_saturated() {
        let f = circle();
        let a = alpha(&f, &[(1, z(&[&[2], &[2], &[2]])), (0, z(&[&[1], &[0], &[0]]))]);
        let cert = decide_eigenvalue(&f, &lambda(&[(0, 1), (1, 1)]), &a).unwrap();
        assert_eq!(
            cert.failure_reason,
            Some(FailureReason::NotSaturated {
                degree: 1,
                factors: vec![BigInt::from(2)]
            })
        );
        assert!(!cert.cone_contractible);
    }

    #[test]
    fn certify_examples() {
        let cert = certify_homology_eigenvalue(&circle()).unwrap();
        assert_eq!(cert.verdict, Verdict::Eigenvalue);
        assert_eq!(cert.lambda_ranks, BTreeMap::from([(0, 1), (1, 1)]));

        let q = RingSpec::Rationals;
        let exact = ChainComplex::new(
            q,
            Convention::Cochain,
            &BTreeMap::from([(0, 2), (1, 2)]),
            &BTreeMap::from([(0, Matrix::from_i64(q, &[&[1, 2], &[3, 4]]))]),
        )
        .unwrap();
        let cert = certify_homology_eigenvalue(&exact).unwrap();
        assert_eq!(cert.verdict, Verdict::Eigenvalue);
        assert!(cert.lambda_ranks.values().all(|&r| r == 0));

        let two = ChainComplex::new(
            RingSpec::Integers,
            Convention::Cochain,
            &BTreeMap::from([(0, 1), (1, 1)]),
            &BTreeMap::from([(0, z(&[&[2]]))]),
        )
        .unwrap();
        assert_eq!(
            certify_homology_eigenvalue(&two),
            Err(Error::TorsionHomology {
                degree: 1,
                factors: vec![BigInt::from(2)]
            })
        );
    }

    #[test]
    fn block_analysis_of_the_circle_witness() {
        let f = circle();
        let a = alpha(&f, &[(1, z(&[&[1], &[1], &[1]])), (0, z(&[&[1], &[0], &[0]]))]);
        let l = lambda(&[(0, 1), (1, 1)]);
        let cert = decide_eigenvalue(&f, &l, &a).unwrap();
        let dec = decompose_adapted(&f, Some((&a, &l))).unwrap();
        let analysis =
            analyze_homotopy_blocks(&cert.cone, cert.witness.as_ref().unwrap(), &dec).unwrap();
        assert!(analysis.equations_hold());
        assert!(analysis.conclusions_hold());
        assert!(analysis.c_conditions_hold());

        let zero = Homotopy::new(f.ring());
        let analysis = analyze_homotopy_blocks(&cert.cone, &zero, &dec).unwrap();
        for d in &analysis.degrees {
            let im = cert.cone.layout.get(cert.cone.underlying.internal_degree(d.degree)).im;
            assert_eq!(d.eq3_holds, im == 0);
        }
    }
}
