use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use super::rational::Q;
use super::LinalgError;

/// Rows above this count are multiplied in parallel.
const PAR_ROWS: usize = 256;

/// Sparse exact matrix in sorted row-major coordinate form.
///
/// Each row holds `(col, value)` pairs with strictly increasing `col` and no
/// zero values, so structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Q)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n).map(|i| vec![(i, Q::one())]).collect();
        SparseMatrix { rows: n, cols: n, data }
    }

    /// Builds a matrix from triplets, summing duplicates and dropping zeros.
    pub fn from_triplets<I>(rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Q)>,
    {
        let mut acc: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in entries {
            assert!(i < rows && j < cols, "entry ({i},{j}) outside {rows}x{cols}");
            if v.is_zero() {
                continue;
            }
            let slot = acc[i].entry(j).or_insert_with(Q::zero);
            *slot += v;
        }
        let data = acc
            .into_iter()
            .map(|row| row.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { rows, cols, data }
    }

    /// Builds a matrix from rows already sorted by column; zeros are removed.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Vec<(usize, Q)>>) -> Self {
        assert_eq!(data.len(), rows);
        let data = data
            .into_iter()
            .map(|row| {
                debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
                row.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix { rows, cols, data }
    }

    pub fn from_dense(dense: &[Vec<Q>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let data = dense
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { rows, cols, data }
    }

    /// Column-major construction: `columns[j]` lists `(row, value)` of column `j`.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Q)>>) -> Self {
        let cols = columns.len();
        let mut data: Vec<Vec<(usize, Q)>> = vec![Vec::new(); rows];
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col {
                if !v.is_zero() {
                    data[i].push((j, v));
                }
            }
        }
        SparseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, Q)] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self
                .data
                .iter()
                .enumerate()
                .all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1.is_one())
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.cols];
        for (i, j, v) in self.entries() {
            data[j].push((i, v.clone()));
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn scale(&self, s: &Q) -> SparseMatrix {
        if s.is_zero() {
            return SparseMatrix::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|(j, v)| (*j, v * s)).collect())
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    fn merge_rows(a: &[(usize, Q)], b: &[(usize, Q)], sb: &Q) -> Vec<(usize, Q)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            if y == b.len() || (x < a.len() && a[x].0 < b[y].0) {
                out.push(a[x].clone());
                x += 1;
            } else if x == a.len() || b[y].0 < a[x].0 {
                let v = &b[y].1 * sb;
                if !v.is_zero() {
                    out.push((b[y].0, v));
                }
                y += 1;
            } else {
                let v = &a[x].1 + &b[y].1 * sb;
                if !v.is_zero() {
                    out.push((a[x].0, v));
                }
                x += 1;
                y += 1;
            }
        }
        out
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &SparseMatrix, s: &Q) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| Self::merge_rows(a, b, s))
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(other, &Q::one())
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        self.add_scaled(other, &-Q::one())
    }

    fn mul_row(row: &[(usize, Q)], other: &SparseMatrix) -> Vec<(usize, Q)> {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (k, a) in row {
            for (j, b) in &other.data[*k] {
                let slot = acc.entry(*j).or_insert_with(Q::zero);
                *slot += a * b;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Matrix product by row-wise accumulation.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let data: Vec<Vec<(usize, Q)>> = if self.rows >= PAR_ROWS {
            self.data.par_iter().map(|r| Self::mul_row(r, other)).collect()
        } else {
            self.data.iter().map(|r| Self::mul_row(r, other)).collect()
        };
        SparseMatrix { rows: self.rows, cols: other.cols, data }
    }

    /// Kronecker product; pair `(i, j)` maps to `i * b.rows + j` (rows) and likewise for columns.
    pub fn kron(&self, b: &SparseMatrix) -> SparseMatrix {
        let rows = self.rows * b.rows;
        let cols = self.cols * b.cols;
        let mut data = Vec::with_capacity(rows);
        for ra in &self.data {
            for rb in &b.data {
                let mut row = Vec::with_capacity(ra.len() * rb.len());
                for (ja, va) in ra {
                    for (jb, vb) in rb {
                        row.push((ja * b.cols + jb, va * vb));
                    }
                }
                data.push(row);
            }
        }
        SparseMatrix { rows, cols, data }
    }

    pub fn trace(&self) -> Result<Q, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: self.cols });
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).fold(Q::zero(), |a, b| a + b))
    }

    /// `trace(self * other)` without forming the product.
    pub fn trace_of_product(&self, other: &SparseMatrix) -> Result<Q, LinalgError> {
        if self.rows != other.cols || self.cols != other.rows {
            return Err(LinalgError::NonSquare { rows: self.rows, cols: other.cols });
        }
        let t = (0..self.rows)
            .into_par_iter()
            .map(|i| {
                self.data[i]
                    .iter()
                    .map(|(k, a)| a * other.get(*k, i))
                    .fold(Q::zero(), |x, y| x + y)
            })
            .reduce(Q::zero, |a, b| a + b);
        Ok(t)
    }

    /// Applies the matrix to a sparse column vector.
    pub fn apply(&self, v: &BTreeMap<usize, Q>) -> BTreeMap<usize, Q> {
        let mut out = BTreeMap::new();
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = Q::zero();
            for (j, a) in row {
                if let Some(x) = v.get(j) {
                    acc += a * x;
                }
            }
            if !acc.is_zero() {
                out.insert(i, acc);
            }
        }
        out
    }

    /// Column `j` as `(row, value)` pairs.
    pub fn column(&self, j: usize) -> Vec<(usize, Q)> {
        (0..self.rows)
            .filter_map(|i| {
                let v = self.get(i, j);
                (!v.is_zero()).then_some((i, v))
            })
            .collect()
    }

    /// First position where the two matrices differ, with both values.
    pub fn first_difference(&self, other: &SparseMatrix) -> Option<(usize, usize, Q, Q)> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Some((self.rows, self.cols, Q::zero(), Q::zero()));
        }
        for i in 0..self.rows {
            if self.data[i] != other.data[i] {
                let mut cols: Vec<usize> = self.data[i]
                    .iter()
                    .chain(&other.data[i])
                    .map(|(j, _)| *j)
                    .collect();
                cols.sort_unstable();
                for j in cols {
                    let (a, b) = (self.get(i, j), other.get(i, j));
                    if a != b {
                        return Some((i, j, a, b));
                    }
                }
            }
        }
        None
    }

    pub fn kernel_dimension(&self) -> usize {
        self.cols - super::elim::rank(self)
    }

    pub fn rank(&self) -> usize {
        super::elim::rank(self)
    }
}
