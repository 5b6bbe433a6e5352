//! Dense exact matrices with reduced row echelon form, null spaces, and the
//! Zassenhaus sum/intersection of row spaces.

use crate::field::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub field: Field,
    pub cols: usize,
    pub rows: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn new(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols);
        }
        Matrix { field, cols, rows }
    }

    pub fn zero(field: Field, nrows: usize, cols: usize) -> Self {
        Matrix {
            field,
            cols,
            rows: vec![vec![field.zero(); cols]; nrows],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(pr) = (row..self.nrows()).find(|&i| !self.rows[i][col].is_zero()) else {
                continue;
            };
            self.rows.swap(row, pr);
            let inv = f.inv(&self.rows[row][col]).expect("pivot nonzero");
            for c in col..self.cols {
                self.rows[row][c] = f.mul(&self.rows[row][c], &inv);
            }
            for i in 0..self.nrows() {
                if i != row && !self.rows[i][col].is_zero() {
                    let factor = self.rows[i][col].clone();
                    for c in col..self.cols {
                        let sub = f.mul(&factor, &self.rows[row][c]);
                        self.rows[i][c] = f.sub(&self.rows[i][c], &sub);
                    }
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.nrows() {
                break;
            }
        }
        pivots
    }

    /// Canonical basis of the row space: RREF with zero rows dropped.
    pub fn row_basis(mut self) -> Matrix {
        self.rref();
        self.rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        self
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right null space `{ y : M y = 0 }`.
    pub fn null_space(&self) -> Vec<Vec<Scalar>> {
        let f = self.field;
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut y = vec![f.zero(); self.cols];
            y[free] = f.one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                y[pcol] = f.neg(&m.rows[prow][free]);
            }
            basis.push(y);
        }
        basis
    }

    /// Stack another matrix below this one.
    pub fn stacked(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Matrix::new(self.field, self.cols, rows)
    }
}

/// Zassenhaus: bases of the sum and the intersection of two row spaces.
pub fn sum_and_intersection(a: &Matrix, b: &Matrix) -> (Matrix, Matrix) {
    assert_eq!(a.cols, b.cols);
    let f = a.field;
    let m = a.cols;
    let mut block = Matrix::zero(f, 0, 2 * m);
    for r in &a.rows {
        let mut row = r.clone();
        row.extend(r.iter().cloned());
        block.rows.push(row);
    }
    for r in &b.rows {
        let mut row = r.clone();
        row.extend(std::iter::repeat_n(f.zero(), m));
        block.rows.push(row);
    }
    block.rref();
    let mut sum_rows = Vec::new();
    let mut int_rows = Vec::new();
    for row in &block.rows {
        let left_zero = row[..m].iter().all(|x| x.is_zero());
        if !left_zero {
            sum_rows.push(row[..m].to_vec());
        } else if row[m..].iter().any(|x| !x.is_zero()) {
            int_rows.push(row[m..].to_vec());
        }
    }
    (
        Matrix::new(f, m, sum_rows).row_basis(),
        Matrix::new(f, m, int_rows).row_basis(),
    )
}

pub fn dot(f: &Field, a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        acc = f.add(&acc, &f.mul(x, y));
    }
    acc
}
