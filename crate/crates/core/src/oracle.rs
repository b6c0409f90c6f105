//! Brute-force cross-checks that share nothing with the elimination code
//! in [`crate::linalg`] beyond scalar arithmetic.

use std::collections::{BTreeMap, HashSet};

use crate::arith::{RingSpec, Scalar};
use crate::complex::{ChainComplex, GradedMap};
use crate::cone::Homotopy;
use crate::linalg::Matrix;
use crate::Error;

/// Largest total dimension accepted by [`brute_homology_f2`].
pub const MAX_ENUMERATION_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleReport {
    /// Betti numbers by user degree, from exhaustive enumeration over 𝔽₂.
    Enumeration { ranks: BTreeMap<i64, usize> },
    /// Whether the homotopy equations are solvable, with one solution.
    LinearSystem {
        solvable: bool,
        solution: Option<Homotopy>,
    },
}

/// Columns of an 𝔽₂ matrix packed as bit masks over the rows.
fn column_masks(a: &Matrix) -> Vec<u64> {
    (0..a.cols())
        .map(|j| {
            (0..a.rows())
                .filter(|&i| !a.get(i, j).is_zero())
                .fold(0u64, |acc, i| acc | (1 << i))
        })
        .collect()
}

fn apply(cols: &[u64], v: u64) -> u64 {
    cols.iter()
        .enumerate()
        .filter(|(j, _)| v >> j & 1 == 1)
        .fold(0, |acc, (_, c)| acc ^ c)
}

/// Homology ranks over 𝔽₂ by enumerating every vector of every term.
pub fn brute_homology_f2(f: &ChainComplex) -> Result<BTreeMap<i64, usize>, Error> {
    if f.ring() != RingSpec::f2() {
        return Err(Error::RingMismatch(RingSpec::f2(), f.ring()));
    }
    if f.total_dim() > MAX_ENUMERATION_DIM {
        return Err(Error::TooLarge {
            dim: f.total_dim(),
            max: MAX_ENUMERATION_DIM,
        });
    }
    let mut out = BTreeMap::new();
    for m in f.degrees() {
        let out_cols = column_masks(&f.diff(m));
        let kernel = (0..1u64 << f.rank(m))
            .filter(|&v| apply(&out_cols, v) == 0)
            .count();
        let in_cols = column_masks(&f.diff(m - 1));
        let image: HashSet<u64> = (0..1u64 << f.rank(m - 1))
            .map(|v| apply(&in_cols, v))
            .collect();
        // both counts are powers of two
        let betti = kernel.trailing_zeros() - image.len().trailing_zeros();
        out.insert(f.user_degree(m), betti as usize);
    }
    Ok(out)
}

/// Exact solution of `A x = b` over a field by plain Gaussian elimination
/// on the augmented system.
fn solve_system(ring: RingSpec, mut rows: Vec<Vec<Scalar>>, unknowns: usize) -> Option<Vec<Scalar>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("field");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i][c..=unknowns].iter_mut().zip(&pivot_row[c..=unknowns]) {
                    *x = &*x - &(&factor * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[unknowns].is_zero()) {
        return None;
    }
    let mut x = vec![ring.zero(); unknowns];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][unknowns].clone();
    }
    Some(x)
}

/// Treats `f - g = d Ψ + Ψ d` as one linear system in the entries of `Ψ`
/// and solves it. Returns a solution when one exists.
pub fn homotopy_system_solvable(
    x: &ChainComplex,
    f: &GradedMap,
    g: &GradedMap,
) -> Result<Option<Homotopy>, Error> {
    let ring = x.ring();
    if !ring.is_field() {
        return Err(Error::NotAField(ring));
    }
    // unknown index of entry (i, j) of Ψ^m : X_m -> X_{m-1}
    let mut offset = BTreeMap::new();
    let mut unknowns = 0;
    for m in x.degrees() {
        offset.insert(m, unknowns);
        unknowns += x.rank(m - 1) * x.rank(m);
    }
    let var = |m: i64, i: usize, j: usize| offset[&m] + i * x.rank(m) + j;

    let mut rows = Vec::new();
    for m in x.degrees() {
        let n = x.rank(m);
        let lhs = &f.block(m, n, n) - &g.block(m, n, n);
        let d_in = x.diff(m - 1); // X_{m-1} -> X_m
        let d_out = x.diff(m); // X_m -> X_{m+1}
        for i in 0..n {
            for j in 0..n {
                let mut row = vec![ring.zero(); unknowns + 1];
                // (d_{m-1} Ψ^m)[i][j] = Σ_k d_in[i][k] Ψ^m[k][j]
                for k in 0..x.rank(m - 1) {
                    let c = d_in.get(i, k);
                    if !c.is_zero() {
                        let v = var(m, k, j);
                        row[v] = &row[v] + c;
                    }
                }
                // (Ψ^{m+1} d_m)[i][j] = Σ_k Ψ^{m+1}[i][k] d_out[k][j]
                if offset.contains_key(&(m + 1)) {
                    for k in 0..x.rank(m + 1) {
                        let c = d_out.get(k, j);
                        if !c.is_zero() {
                            let v = var(m + 1, i, k);
                            row[v] = &row[v] + c;
                        }
                    }
                }
                row[unknowns] = lhs.get(i, j).clone();
                rows.push(row);
            }
        }
    }
    let Some(sol) = solve_system(ring, rows, unknowns) else {
        return Ok(None);
    };
    let mut psi = Homotopy::new(ring);
    for m in x.degrees() {
        let (r, c) = (x.rank(m - 1), x.rank(m));
        let entries = (0..r)
            .map(|i| (0..c).map(|j| sol[var(m, i, j)].clone()).collect())
            .collect();
        psi.insert(m, Matrix::from_rows(ring, c, entries));
    }
    Ok(Some(psi))
}

/// [`homotopy_system_solvable`] for a null-homotopy (`f = 0`, `g = id`).
pub fn null_homotopy_report(x: &ChainComplex) -> Result<OracleReport, Error> {
    let solution =
        homotopy_system_solvable(x, &GradedMap::zero(x.ring(), 0), &GradedMap::identity(x))?;
    Ok(OracleReport::LinearSystem {
        solvable: solution.is_some(),
        solution,
    })
}

/// [`brute_homology_f2`] wrapped as a report.
pub fn enumeration_report(f: &ChainComplex) -> Result<OracleReport, Error> {
    brute_homology_f2(f).map(|ranks| OracleReport::Enumeration { ranks })
}
