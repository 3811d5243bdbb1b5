//! Dense matrices over `F_{q^s}` with exact elimination.

use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![FElem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = FElem::ONE;
        }
        m
    }

    /// Builds from row vectors, which must all have the same length.
    pub fn from_rows(rows: Vec<Vec<FElem>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::BadDimensions("ragged rows".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[FElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// The first `n` rows.
    pub fn top_rows(&self, n: usize) -> Matrix {
        let n = n.min(self.rows);
        Matrix { rows: n, cols: self.cols, data: self.data[..n * self.cols].to_vec() }
    }

    /// Columns `idx` in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (c, &j) in idx.iter().enumerate() {
                out[(i, c)] = self[(i, j)];
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(Error::BadDimensions(format!("cannot stack {} and {} columns", self.cols, other.cols)));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols, data })
    }

    pub fn mul(&self, field: &FieldCtx, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::BadDimensions(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = field.mul(a, rhs[(l, j)]);
                    out[(i, j)] = field.add(out[(i, j)], prod);
                }
            }
        }
        Ok(out)
    }

    /// `row_vector * self`.
    pub fn left_mul_vec(&self, field: &FieldCtx, v: &[FElem]) -> Vec<FElem> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![FElem::ZERO; self.cols];
        for (i, &c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(self.row(i)) {
                *o = field.add(*o, field.mul(c, g));
            }
        }
        out
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn echelon(&mut self, field: &FieldCtx) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = field.inv(self[(r, col)]).expect("pivot is nonzero");
            for j in col..self.cols {
                self[(r, j)] = field.mul(self[(r, j)], inv);
            }
            for i in 0..self.rows {
                let factor = self[(i, col)];
                if i == r || factor.is_zero() {
                    continue;
                }
                for j in col..self.cols {
                    let sub = field.mul(factor, self[(r, j)]);
                    self[(i, j)] = field.sub(self[(i, j)], sub);
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Rank over `F_{q^s}`.
    pub fn rank(&self, field: &FieldCtx) -> usize {
        self.clone().echelon(field).len()
    }

    pub fn det(&self, field: &FieldCtx) -> Result<FElem> {
        if self.rows != self.cols {
            return Err(Error::BadDimensions(format!("determinant of {}x{}", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = FElem::ONE;
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m[(i, col)].is_zero()) else {
                return Ok(FElem::ZERO);
            };
            if p != col {
                m.swap_rows(col, p);
                det = field.neg(det);
            }
            let pivot = m[(col, col)];
            det = field.mul(det, pivot);
            let inv = field.inv(pivot)?;
            for i in col + 1..n {
                let factor = field.mul(m[(i, col)], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = field.mul(factor, m[(col, j)]);
                    m[(i, j)] = field.sub(m[(i, j)], sub);
                }
            }
        }
        Ok(det)
    }

    /// Whether the row spaces over `F_{q^s}` coincide.
    pub fn same_row_space(&self, field: &FieldCtx, other: &Matrix) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let r = self.rank(field);
        r == other.rank(field) && self.vstack(other).map(|m| m.rank(field)) == Ok(r)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FElem;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &FElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FElem {
        &mut self.data[i * self.cols + j]
    }
}
