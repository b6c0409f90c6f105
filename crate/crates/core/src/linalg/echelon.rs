use super::{LinalgError, Matrix};

/// Output of Gauss-Jordan elimination: `transform * input = reduced`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub transform: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row-echelon form over a field.
pub fn rref(a: &Matrix) -> Result<Rref, LinalgError> {
    let ring = a.ring();
    if !ring.is_field() {
        return Err(LinalgError::NotAField(ring));
    }
    let mut r = a.clone();
    let mut t = Matrix::identity(ring, a.rows());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        let Some(p) = (row..a.rows()).find(|&i| !r.get(i, col).is_zero()) else {
            continue;
        };
        r.swap_rows(row, p);
        t.swap_rows(row, p);
        let inv = r.get(row, col).inv()?;
        r.scale_row(row, &inv);
        t.scale_row(row, &inv);
        for i in 0..a.rows() {
            if i != row && !r.get(i, col).is_zero() {
                let c = -r.get(i, col);
                r.add_row_multiple(i, row, &c);
                t.add_row_multiple(i, row, &c);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Ok(Rref {
        reduced: r,
        transform: t,
        pivots,
    })
}

/// Rank over the fraction field: integer matrices are lifted to ℚ.
pub fn rank(a: &Matrix) -> usize {
    let lifted;
    let m = if a.ring().is_field() {
        a
    } else {
        lifted = a
            .change_ring(crate::arith::RingSpec::Rationals)
            .expect("integers embed in Q");
        &lifted
    };
    rref(m).expect("field").rank()
}
