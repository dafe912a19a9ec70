//! Dense matrices and Gaussian elimination over a [`Field`].

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug)]
pub struct MatrixF<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> MatrixF<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(MatrixF {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        MatrixF {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.field.one();
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::LengthMismatch {
                expected: c,
                got: bad.len(),
            });
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows || !self.field.same_field(&other.field) {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let f = &self.field;
        let mut out = Self::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), &f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        MatrixF {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let pivots = rref_in_place(&self.field, self.rows, self.cols, &mut m.data);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.field.matrix_rank(self.rows, self.cols, &self.data)
    }

    /// Basis of the right kernel: one vector per free column of the reduced
    /// echelon form, with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(r.get(i, free));
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> Result<F::Elem> {
        if self.rows != self.cols {
            return Err(Error::Precondition("determinant of a non-square matrix".into()));
        }
        let f = &self.field;
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !f.is_zero(&a[i * n + c])) else {
                return Ok(f.zero());
            };
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = f.neg(&det);
            }
            let piv = a[c * n + c].clone();
            det = f.mul(&det, &piv);
            let inv = f.inv(&piv).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(&a[i * n + c], &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(&a[i * n + j], &f.mul(&factor, &a[c * n + j]));
                    a[i * n + j] = v;
                }
            }
        }
        Ok(det)
    }
}

fn rref_in_place<F: Field>(f: &F, rows: usize, cols: usize, a: &mut [F::Elem]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&a[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&a[r * cols + c]).expect("nonzero pivot");
        for j in c..cols {
            a[r * cols + j] = f.mul(&a[r * cols + j], &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(&a[i * cols + c]) {
                continue;
            }
            let factor = a[i * cols + c].clone();
            for j in c..cols {
                let v = f.sub(&a[i * cols + j], &f.mul(&factor, &a[r * cols + j]));
                a[i * cols + j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank by forward elimination on an owned row-major buffer.
pub fn gaussian_rank<F: Field>(f: &F, rows: usize, cols: usize, mut a: Vec<F::Elem>) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&a[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&a[r * cols + c]).expect("nonzero pivot");
        for i in r + 1..rows {
            if f.is_zero(&a[i * cols + c]) {
                continue;
            }
            let factor = f.mul(&a[i * cols + c], &inv);
            for j in c..cols {
                let v = f.sub(&a[i * cols + j], &f.mul(&factor, &a[r * cols + j]));
                a[i * cols + j] = v;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FiniteField, Rationals};
    use proptest::prelude::*;

    #[test]
    fn small_kernels() {
        let q = Rationals;
        let id = MatrixF::identity(q, 3);
        assert!(id.nullspace().is_empty());
        assert_eq!(MatrixF::zeros(q, 2, 3).nullspace().len(), 3);

        let f2 = FiniteField::prime(2).unwrap();
        let m = MatrixF::from_rows(f2, vec![vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(m.nullspace(), vec![vec![1, 1, 0]]);
    }

    #[test]
    fn determinant_of_permutation() {
        let f = FiniteField::prime(7).unwrap();
        let m = MatrixF::from_rows(f, vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]).unwrap();
        assert_eq!(m.determinant().unwrap(), 4);
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(0u32..5, 20), rows in 1usize..5) {
            let f = FiniteField::prime(5).unwrap();
            let cols = 20 / rows.max(1);
            let data = entries[..rows * cols].to_vec();
            let m = MatrixF::new(f, rows, cols, data).unwrap();
            let kernel = m.nullspace();
            prop_assert_eq!(m.rank() + kernel.len(), cols);
            for v in &kernel {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| *x == 0));
            }
        }

        #[test]
        fn rational_rank_matches_elimination(entries in proptest::collection::vec(-3i64..4, 12)) {
            let q = Rationals;
            let data: Vec<_> = entries.iter().map(|&n| q.from_i64(n)).collect();
            let m = MatrixF::new(q, 3, 4, data.clone()).unwrap();
            prop_assert_eq!(m.rank(), gaussian_rank(&q, 3, 4, data));
        }
    }
}
