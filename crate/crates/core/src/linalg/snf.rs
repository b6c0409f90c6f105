use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LinalgError, Matrix};
use crate::arith::{RingSpec, Scalar};

/// `u * a * v = s` with `u`, `v` unimodular and `s` diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: Matrix,
    pub s: Matrix,
    pub v: Matrix,
    /// Nonzero diagonal entries of `s`, each dividing the next.
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Invariant factors other than 1: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

type Grid = Vec<Vec<BigInt>>;

fn to_grid(a: &Matrix) -> Grid {
    (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .map(|x| x.as_integer().expect("integer entry").clone())
                .collect()
        })
        .collect()
}

fn from_grid(g: Grid, cols: usize) -> Matrix {
    Matrix::from_rows(
        RingSpec::Integers,
        cols,
        g.into_iter()
            .map(|r| r.into_iter().map(Scalar::Integer).collect())
            .collect(),
    )
}

fn identity_grid(n: usize) -> Grid {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

// row[t] -= q * row[s] on both the working matrix and the row transform
fn row_axpy(g: &mut Grid, t: usize, s: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (src, dst) = if s < t {
        let (lo, hi) = g.split_at_mut(t);
        (&lo[s], &mut hi[0])
    } else {
        let (lo, hi) = g.split_at_mut(s);
        (&hi[0], &mut lo[t])
    };
    for (d, x) in dst.iter_mut().zip(src) {
        if !x.is_zero() {
            *d -= q * x;
        }
    }
}

fn col_axpy(g: &mut Grid, t: usize, s: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in g.iter_mut() {
        if !row[s].is_zero() {
            let delta = q * &row[s];
            row[t] -= delta;
        }
    }
}

fn swap_cols(g: &mut Grid, a: usize, b: usize) {
    for row in g.iter_mut() {
        row.swap(a, b);
    }
}

/// Smith normal form over ℤ.
///
/// Pivots are chosen as the entry of smallest absolute value in the active
/// block, ties broken in row-major order.
pub fn smith_normal_form(a: &Matrix) -> Result<SnfResult, LinalgError> {
    if a.ring() != RingSpec::Integers {
        return Err(LinalgError::NotIntegerRing(a.ring()));
    }
    let (m, n) = a.shape();
    let mut s = to_grid(a);
    let mut u = identity_grid(m);
    let mut v = identity_grid(n);
    let mut factors = Vec::new();

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[i][j].is_zero() {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bi, bj)) => s[i][j].abs() < s[bi][bj].abs(),
                    };
                    if better {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Ok(finish(s, u, v, factors, n));
            };
            s.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut s, t, pj);
            swap_cols(&mut v, t, pj);

            let pivot = s[t][t].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if s[i][t].is_zero() {
                    continue;
                }
                let q = s[i][t].div_floor(&pivot);
                row_axpy(&mut s, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                dirty |= !s[i][t].is_zero();
            }
            for j in t + 1..n {
                if s[t][j].is_zero() {
                    continue;
                }
                let q = s[t][j].div_floor(&pivot);
                col_axpy(&mut s, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                dirty |= !s[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility: fold a row holding a non-multiple into the pivot row
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !s[i][j].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut s, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if s[t][t].is_negative() {
            for x in s[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        factors.push(s[t][t].clone());
    }
    Ok(finish(s, u, v, factors, n))
}

fn finish(s: Grid, u: Grid, v: Grid, factors: Vec<BigInt>, n: usize) -> SnfResult {
    let m = s.len();
    SnfResult {
        u: from_grid(u, m),
        s: from_grid(s, n),
        v: from_grid(v, n),
        invariant_factors: factors,
    }
}
