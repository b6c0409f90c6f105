use num_bigint::BigInt;

use super::echelon::rref;
use super::snf::smith_normal_form;
use super::{LinalgError, Matrix};
use crate::arith::{RingSpec, Scalar};

/// A basis of a submodule, stored as the columns of `vectors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub ambient_dim: usize,
    pub vectors: Matrix,
}

impl SubspaceBasis {
    pub fn empty(ring: RingSpec, ambient_dim: usize) -> Self {
        SubspaceBasis {
            ambient_dim,
            vectors: Matrix::zeros(ring, ambient_dim, 0),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn ring(&self) -> RingSpec {
        self.vectors.ring()
    }
}

/// Column echelon form with pivots at the last nonzero entry of each column,
/// columns ordered by increasing pivot row.
///
/// Over a field every pivot is 1 and pivot rows of the other columns are
/// cleared; over ℤ pivots are positive and the other columns' entries in a
/// pivot row are reduced into `[0, pivot)`. Both forms are unique for the
/// span (resp. lattice) generated by the input columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnEchelon {
    pub basis: Matrix,
    pub pivot_rows: Vec<usize>,
}

pub fn column_echelon(a: &Matrix) -> ColumnEchelon {
    let ring = a.ring();
    let m = a.rows();
    let field = ring.is_field();
    let mut active: Vec<Vec<Scalar>> = a
        .columns()
        .into_iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    let mut fixed: Vec<(usize, Vec<Scalar>)> = Vec::new();

    let axpy = |dst: &mut Vec<Scalar>, q: &Scalar, src: &[Scalar]| {
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                *d = &*d - &(q * s);
            }
        }
    };

    for row in (0..m).rev() {
        if field {
            let Some(k) = active.iter().position(|c| !c[row].is_zero()) else {
                continue;
            };
            let mut piv = active.remove(k);
            let inv = piv[row].inv().expect("nonzero field element");
            for x in piv.iter_mut() {
                *x = &*x * &inv;
            }
            for c in active.iter_mut() {
                if !c[row].is_zero() {
                    let q = c[row].clone();
                    axpy(c, &q, &piv);
                }
            }
            fixed.push((row, piv));
        } else {
            loop {
                let nonzero: Vec<usize> = (0..active.len())
                    .filter(|&k| !active[k][row].is_zero())
                    .collect();
                if nonzero.len() <= 1 {
                    break;
                }
                let best = *nonzero
                    .iter()
                    .min_by_key(|&&k| {
                        let v = active[k][row].as_integer().unwrap().clone();
                        (num_traits::Signed::abs(&v), k)
                    })
                    .unwrap();
                let piv = active[best].clone();
                for &k in &nonzero {
                    if k != best {
                        let q = active[k][row].reduction_quotient(&piv[row]);
                        axpy(&mut active[k], &q, &piv);
                    }
                }
            }
            if let Some(k) = active.iter().position(|c| !c[row].is_zero()) {
                let mut piv = active.remove(k);
                if num_traits::Signed::is_negative(piv[row].as_integer().unwrap()) {
                    for x in piv.iter_mut() {
                        *x = -&*x;
                    }
                }
                fixed.push((row, piv));
            }
        }
        active.retain(|c| c.iter().any(|x| !x.is_zero()));
    }

    // fixed is ordered by decreasing pivot row
    for k in 0..fixed.len() {
        let (prow, piv) = fixed[k].clone();
        for (_, col) in fixed.iter_mut().take(k) {
            if col[prow].is_zero() {
                continue;
            }
            let q = col[prow].reduction_quotient(&piv[prow]);
            axpy(col, &q, &piv);
        }
    }
    fixed.reverse();
    let pivot_rows = fixed.iter().map(|(r, _)| *r).collect();
    let columns: Vec<Vec<Scalar>> = fixed.into_iter().map(|(_, c)| c).collect();
    ColumnEchelon {
        basis: Matrix::from_columns(ring, m, &columns),
        pivot_rows,
    }
}

/// Basis of the column space (column lattice over ℤ) of `a`.
pub fn image_basis(a: &Matrix) -> SubspaceBasis {
    SubspaceBasis {
        ambient_dim: a.rows(),
        vectors: column_echelon(a).basis,
    }
}

/// Basis of `{x : a x = 0}`. Over ℤ this generates the full kernel lattice.
pub fn kernel_basis(a: &Matrix) -> SubspaceBasis {
    let ring = a.ring();
    let n = a.cols();
    let raw = if ring.is_field() {
        let r = rref(a).expect("field");
        let free: Vec<usize> = (0..n).filter(|j| !r.pivots.contains(j)).collect();
        let mut k = Matrix::zeros(ring, n, free.len());
        for (c, &f) in free.iter().enumerate() {
            k.set(f, c, ring.one());
            for (i, &p) in r.pivots.iter().enumerate() {
                k.set(p, c, -r.reduced.get(i, f));
            }
        }
        k
    } else {
        let snf = smith_normal_form(a).expect("integer matrix");
        let idx: Vec<usize> = (snf.rank()..n).collect();
        snf.v.select_columns(&idx)
    };
    SubspaceBasis {
        ambient_dim: n,
        vectors: column_echelon(&raw).basis,
    }
}

/// Invariant factors other than 1 of the inclusion `span(columns) -> R^m`.
/// Empty means the submodule is saturated (always the case over a field).
pub fn saturation_defect(sub: &Matrix) -> Vec<BigInt> {
    if sub.ring().is_field() {
        return Vec::new();
    }
    smith_normal_form(sub).expect("integer matrix").torsion()
}

/// A direct complement of `sub` in the ambient module.
///
/// Standard basis vectors at the non-pivot rows of the column echelon form
/// of `sub`. Over ℤ that choice is only used when every pivot is 1; otherwise
/// the complement is read off the Smith normal form change of basis.
pub fn complement_basis(sub: &SubspaceBasis) -> Result<SubspaceBasis, LinalgError> {
    let ring = sub.ring();
    let m = sub.ambient_dim;
    let defect = saturation_defect(&sub.vectors);
    if !defect.is_empty() {
        return Err(LinalgError::NotSaturated { factors: defect });
    }
    let ech = column_echelon(&sub.vectors);
    let unit_pivots = ech
        .pivot_rows
        .iter()
        .enumerate()
        .all(|(k, &r)| ech.basis.get(r, k).is_one());
    let vectors = if ring.is_field() || unit_pivots {
        let free: Vec<usize> = (0..m).filter(|r| !ech.pivot_rows.contains(r)).collect();
        let mut c = Matrix::zeros(ring, m, free.len());
        for (k, &r) in free.iter().enumerate() {
            c.set(r, k, ring.one());
        }
        c
    } else {
        let snf = smith_normal_form(&ech.basis)?;
        let u_inv = inverse(&snf.u)?;
        let idx: Vec<usize> = (snf.rank()..m).collect();
        u_inv.select_columns(&idx)
    };
    Ok(SubspaceBasis {
        ambient_dim: m,
        vectors,
    })
}

/// Solves `a x = b` column by column. `Ok(None)` when there is no solution
/// (over ℤ: no integral solution).
pub fn solve(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::ShapeMismatch {
            expected: (a.rows(), b.cols()),
            found: b.shape(),
        });
    }
    if a.ring() != b.ring() {
        return Err(LinalgError::RingMismatch(a.ring(), b.ring()));
    }
    let ring = a.ring();
    let (m, n) = a.shape();
    let k = b.cols();
    let mut x = Matrix::zeros(ring, n, k);
    if ring.is_field() {
        let r = rref(a)?;
        let c = &r.transform * b;
        for i in r.rank()..m {
            if c.row(i).iter().any(|v| !v.is_zero()) {
                return Ok(None);
            }
        }
        for (i, &p) in r.pivots.iter().enumerate() {
            for j in 0..k {
                x.set(p, j, c.get(i, j).clone());
            }
        }
        Ok(Some(x))
    } else {
        let snf = smith_normal_form(a)?;
        let c = &snf.u * b;
        let rank = snf.rank();
        for i in rank..m {
            if c.row(i).iter().any(|v| !v.is_zero()) {
                return Ok(None);
            }
        }
        let mut y = Matrix::zeros(ring, n, k);
        for (i, d) in snf.invariant_factors.iter().enumerate() {
            for j in 0..k {
                let v = c.get(i, j).as_integer().unwrap();
                if !num_integer::Integer::is_multiple_of(v, d) {
                    return Ok(None);
                }
                y.set(i, j, Scalar::Integer(v / d));
            }
        }
        x = &snf.v * &y;
        Ok(Some(x))
    }
}

/// Inverse of a square matrix; over ℤ the matrix must be unimodular.
pub fn inverse(a: &Matrix) -> Result<Matrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::ShapeMismatch {
            expected: (a.rows(), a.rows()),
            found: a.shape(),
        });
    }
    let n = a.rows();
    if a.ring().is_field() {
        let r = rref(a)?;
        if r.rank() < n {
            return Err(LinalgError::Singular);
        }
        Ok(r.transform)
    } else {
        let snf = smith_normal_form(a)?;
        if snf.rank() < n || !snf.torsion().is_empty() {
            return Err(LinalgError::Singular);
        }
        Ok(&snf.v * &snf.u)
    }
}

/// `true` when every column of `vectors` lies in the span (lattice over ℤ)
/// of `basis`.
pub fn spans(basis: &Matrix, vectors: &Matrix) -> bool {
    matches!(solve(basis, vectors), Ok(Some(_)))
}
