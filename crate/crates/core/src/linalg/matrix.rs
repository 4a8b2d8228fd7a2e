use std::fmt;
use std::ops::{Index, IndexMut};

use super::{Scalar, Subspace};
use crate::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn scalar_matrix(n: usize, s: &Scalar) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    /// Panics if `data.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; all rows must share a length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Integer-entry convenience constructor.
    pub fn from_ints<const C: usize>(rows: &[[i64; C]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
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

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    /// Row-major flattening; the coordinates of this matrix in operator space.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = &self[(i, j)];
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -&self[(j, i)]))
    }

    /// `Some(s)` when the matrix equals `s·I`.
    pub fn as_scalar_multiple_of_identity(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        let s = if self.rows == 0 {
            Scalar::zero()
        } else {
            self[(0, 0)].clone()
        };
        let ok = (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                if i == j {
                    self[(i, j)] == s
                } else {
                    self[(i, j)].is_zero()
                }
            })
        });
        ok.then_some(s)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| &self[(i, i)]).sum()
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "incompatible matrix product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "incompatible matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block_diagonal(blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                m.set_block(i * other.rows, j * other.cols, &other.scale(a));
            }
        }
        m
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Scalar::to_f64).collect())
            .collect()
    }

    /// Reduced row-echelon form together with its pivot columns.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip().expect("nonzero pivot");
            if !inv.is_one() {
                for j in c..m.cols {
                    let v = &m[(r, j)] * &inv;
                    m[(r, j)] = v;
                }
            }
            let pivot_row: Vec<(usize, Scalar)> = (c..m.cols)
                .filter(|&j| !m[(r, j)].is_zero())
                .map(|j| (j, m[(r, j)].clone()))
                .collect();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for (j, v) in &pivot_row {
                    let d = &f * v;
                    m[(i, *j)] -= d;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> Matrix {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Right kernel `{v : self·v = 0}`.
    pub fn nullspace(&self) -> Subspace {
        let (r, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut vectors = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[f] = Scalar::one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -&r[(k, f)];
            }
            vectors.push(v);
        }
        Subspace::from_vectors(self.cols, vectors)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Matrix::identity(n));
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.submatrix(0, n, n, n))
    }

    /// A particular solution of `self·x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, v) in b.iter().enumerate() {
            aug[(i, self.cols)] = v.clone();
        }
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = r[(k, self.cols)].clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Scalar::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            let inv = pivot.recip().expect("nonzero pivot");
            for i in c + 1..n {
                let f = &m[(i, c)] * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let d = &f * &m[(c, j)];
                    m[(i, j)] -= d;
                }
            }
        }
        Ok(det)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", padded.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;
    use proptest::prelude::*;

    #[test]
    fn rref_examples() {
        assert_eq!(Matrix::identity(3).rref(), Matrix::identity(3));
        assert_eq!(Matrix::zeros(2, 3).rref(), Matrix::zeros(2, 3));
        let m = Matrix::from_ints(&[[2, 4], [1, 2]]);
        assert_eq!(m.rref(), Matrix::from_ints(&[[1, 2], [0, 0]]));
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(Matrix::identity(4).nullspace().dim(), 0);
        assert_eq!(Matrix::zeros(2, 3).nullspace(), Subspace::full(3));
        let ns = Matrix::from_ints(&[[1, 1, 0]]).nullspace();
        assert_eq!(ns.dim(), 2);
        assert!(ns.contains(&[q(1, 1), q(-1, 1), q(0, 1)]));
        assert!(ns.contains(&[q(0, 1), q(0, 1), q(1, 1)]));
        assert!(!ns.contains(&[q(1, 1), q(0, 1), q(0, 1)]));
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::from_ints(&[[2, 1], [1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(Matrix::from_ints(&[[1, 2], [2, 4]]).inverse().is_none());
        let x = m.solve(&[q(3, 1), q(2, 1)]).unwrap();
        assert_eq!(x, vec![q(1, 1), q(1, 1)]);
        assert!(Matrix::from_ints(&[[1, 1], [1, 1]])
            .solve(&[q(1, 1), q(2, 1)])
            .is_none());
    }

    #[test]
    fn determinant_with_row_swap() {
        let m = Matrix::from_ints(&[[0, 1], [1, 0]]);
        assert_eq!(m.determinant().unwrap(), q(-1, 1));
        let m = Matrix::from_ints(&[[1, 2, 3], [4, 5, 6], [7, 8, 10]]);
        assert_eq!(m.determinant().unwrap(), q(-3, 1));
    }

    #[test]
    fn kron_block_layout() {
        let a = Matrix::from_ints(&[[0, 1], [-1, 0]]);
        let k = a.kron(&Matrix::identity(2));
        assert_eq!(k[(0, 2)], q(1, 1));
        assert_eq!(k[(1, 3)], q(1, 1));
        assert_eq!(k[(2, 0)], q(-1, 1));
        assert!(k.is_skew_symmetric());
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(-3i64..4, r * c)
                .prop_map(move |v| Matrix::from_vec(r, c, v.into_iter().map(Scalar::from_int).collect()))
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let r = m.rref();
            prop_assert_eq!(r.rref(), r);
        }

        #[test]
        fn rank_nullity(m in small_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.dim(), m.cols());
            for v in ns.vectors() {
                prop_assert!(m.mul_vec(&v).iter().all(Scalar::is_zero));
            }
        }

        #[test]
        fn rref_preserves_row_space(m in small_matrix()) {
            let a = Subspace::from_vectors(m.cols(), (0..m.rows()).map(|i| m.row(i).to_vec()));
            let r = m.rref();
            let b = Subspace::from_vectors(r.cols(), (0..r.rows()).map(|i| r.row(i).to_vec()));
            prop_assert_eq!(a, b);
        }
    }
}
