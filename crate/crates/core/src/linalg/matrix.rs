use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{RingSpec, Scalar};

/// Dense row-major matrix of exact scalars.
///
/// `0 x n` and `n x 0` shapes are valid and stand for the zero maps to and
/// from the zero module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            ring,
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    /// Builds a matrix from row vectors. Panics if rows are ragged or an
    /// entry belongs to a different ring.
    pub fn from_rows(ring: RingSpec, cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            for x in row {
                assert_eq!(x.ring(), ring, "entry ring mismatch");
                data.push(x);
            }
        }
        Matrix {
            ring,
            rows: nrows,
            cols,
            data,
        }
    }

    pub fn from_i64(ring: RingSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            ring,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| ring.from_i64(v)).collect())
                .collect(),
        )
    }

    /// Column vector.
    pub fn column_from(ring: RingSpec, entries: Vec<Scalar>) -> Self {
        Self::from_rows(ring, 1, entries.into_iter().map(|x| vec![x]).collect())
    }

    pub fn from_columns(ring: RingSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        assert_eq!(v.ring(), self.ring, "entry ring mismatch");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn rows_vec(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &Scalar)> {
        self.data
            .iter()
            .position(|x| !x.is_zero())
            .map(|k| (k / self.cols, k % self.cols, &self.data[k]))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let mut m = Matrix::zeros(self.ring, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.data[(i - r0) * (c1 - c0) + (j - c0)] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.ring, self.rows, idx.len());
        for (k, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                m.set(i, k, self.get(i, j).clone());
            }
        }
        m
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        assert_eq!(self.ring, other.ring);
        let mut m = Matrix::zeros(self.ring, self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        assert_eq!(self.ring, other.ring);
        let mut m = Matrix::zeros(self.ring, self.rows + other.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, other);
        m
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ring, other.ring);
        let mut m = Matrix::zeros(
            self.ring,
            self.rows + other.rows,
            self.cols + other.cols,
        );
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    /// Re-interprets the entries in another ring (ℤ → ℚ, ℤ → 𝔽_p, or a
    /// ℚ matrix with integral entries → ℤ). Returns `None` when an entry has
    /// no image.
    pub fn change_ring(&self, ring: RingSpec) -> Option<Matrix> {
        let data = self
            .data
            .iter()
            .map(|x| match (x, ring) {
                (_, r) if r == self.ring => Some(x.clone()),
                (Scalar::Integer(v), r) => Some(r.from_bigint(v.clone())),
                (Scalar::Rational(_), RingSpec::Integers) => x.to_integer(),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Option<Matrix> {
        if self.cols != rhs.rows || self.ring != rhs.ring {
            return None;
        }
        let mut out = Matrix::zeros(self.ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Some(out)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[target] += c * row[source]
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(source, j);
            if s.is_zero() {
                continue;
            }
            let v = self.get(target, j) + &(c * s);
            self.data[target * self.cols + j] = v;
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, c: &Scalar) {
        for j in 0..self.cols {
            let v = self.get(i, j) * c;
            self.data[i * self.cols + j] = v;
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "] ({}x{} over {})", self.rows, self.cols, self.ring)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).unwrap_or_else(|| {
            panic!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )
        })
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix add shape mismatch");
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sub shape mismatch");
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_shapes_multiply() {
        let z = RingSpec::Integers;
        let a = Matrix::zeros(z, 3, 0);
        let b = Matrix::zeros(z, 0, 2);
        let c = &a * &b;
        assert_eq!(c.shape(), (3, 2));
        assert!(c.is_zero());
        let d = &b * &Matrix::zeros(z, 2, 0);
        assert_eq!(d.shape(), (0, 0));
        assert!(d.is_identity());
    }

    #[test]
    fn stacking() {
        let q = RingSpec::Rationals;
        let a = Matrix::from_i64(q, &[&[1, 2]]);
        let b = Matrix::from_i64(q, &[&[3, 4]]);
        let v = a.vstack(&b);
        assert_eq!(v, Matrix::from_i64(q, &[&[1, 2], &[3, 4]]));
        assert_eq!(v.transpose(), Matrix::from_i64(q, &[&[1, 3], &[2, 4]]));
        assert_eq!(a.hstack(&b), Matrix::from_i64(q, &[&[1, 2, 3, 4]]));
        assert_eq!(v.submatrix(1, 2, 1, 2), Matrix::from_i64(q, &[&[4]]));
    }
}
