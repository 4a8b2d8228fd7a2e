use super::{Matrix, Scalar, Subspace};
use crate::{Error, Result};

/// Sylvester classification of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    NegativeDefinite,
    IndefiniteOrSemidefinite,
}

impl Definiteness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Definiteness::PositiveDefinite => "positive_definite",
            Definiteness::NegativeDefinite => "negative_definite",
            Definiteness::IndefiniteOrSemidefinite => "indefinite_or_semidefinite",
        }
    }
}

/// Inertia counts `(positive, negative, zero)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// A symmetric bilinear form given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::Dimension("bilinear form gram matrix is not symmetric".into()));
        }
        Ok(BilinearForm { gram })
    }

    pub fn zero(dim: usize) -> Self {
        BilinearForm {
            gram: Matrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }

    /// `{x : F(x, y) = 0 for all y}`.
    pub fn radical(&self) -> Subspace {
        self.gram.nullspace()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.radical().is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.gram.is_zero()
    }

    /// Leading principal minors, in order.
    pub fn leading_minors(&self) -> Vec<Scalar> {
        (1..=self.dim())
            .map(|k| self.gram.submatrix(0, 0, k, k).determinant().expect("square submatrix"))
            .collect()
    }

    /// Exact classification by Sylvester's criterion. A zero leading minor
    /// always reports `IndefiniteOrSemidefinite`.
    pub fn definiteness(&self) -> Definiteness {
        let minors = self.leading_minors();
        if minors.iter().any(Scalar::is_zero) {
            return Definiteness::IndefiniteOrSemidefinite;
        }
        if minors.iter().all(|m| m.signum() > 0) {
            return Definiteness::PositiveDefinite;
        }
        let alternating = minors
            .iter()
            .enumerate()
            .all(|(k, m)| m.signum() == if k % 2 == 0 { -1 } else { 1 });
        if alternating {
            Definiteness::NegativeDefinite
        } else {
            Definiteness::IndefiniteOrSemidefinite
        }
    }

    /// Inertia by exact congruence diagonalization.
    pub fn signature(&self) -> Signature {
        let n = self.dim();
        let mut a = self.gram.clone();
        let mut diag = Vec::with_capacity(n);
        let mut k = 0;
        while k < n {
            // bring a nonzero diagonal entry to position k
            if let Some(p) = (k..n).find(|&i| !a[(i, i)].is_zero()) {
                swap_sym(&mut a, k, p);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_zero())
            {
                // row/col i += row/col j gives a[i][i] = 2 a[i][j]
                add_sym(&mut a, i, j, &Scalar::one());
                swap_sym(&mut a, k, i);
            } else {
                diag.extend(std::iter::repeat_n(Scalar::zero(), n - k));
                break;
            }
            let pivot = a[(k, k)].clone();
            let inv = pivot.recip().expect("nonzero pivot");
            for i in k + 1..n {
                let f = -(&a[(i, k)] * &inv);
                if !f.is_zero() {
                    add_sym(&mut a, i, k, &f);
                }
            }
            diag.push(pivot);
            k += 1;
        }
        Signature {
            positive: diag.iter().filter(|d| d.signum() > 0).count(),
            negative: diag.iter().filter(|d| d.signum() < 0).count(),
            zero: diag.iter().filter(|d| d.is_zero()).count(),
        }
    }
}

fn swap_sym(a: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    let n = a.rows();
    for c in 0..n {
        let t = a[(i, c)].clone();
        a[(i, c)] = a[(j, c)].clone();
        a[(j, c)] = t;
    }
    for r in 0..n {
        let t = a[(r, i)].clone();
        a[(r, i)] = a[(r, j)].clone();
        a[(r, j)] = t;
    }
}

/// Congruence `a ← Eᵀ a E` with `E` adding `f`·(basis j) to basis i.
fn add_sym(a: &mut Matrix, i: usize, j: usize, f: &Scalar) {
    let n = a.rows();
    for c in 0..n {
        let d = f * &a[(j, c)];
        a[(i, c)] += d;
    }
    for r in 0..n {
        let d = f * &a[(r, j)];
        a[(r, i)] += d;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(rows: &[[i64; 2]]) -> BilinearForm {
        BilinearForm::new(Matrix::from_ints(rows)).unwrap()
    }

    #[test]
    fn definiteness_examples() {
        let id = BilinearForm::new(Matrix::identity(3)).unwrap();
        assert_eq!(id.definiteness(), Definiteness::PositiveDefinite);
        let neg = BilinearForm::new(Matrix::identity(3).scale(&Scalar::from_int(-1))).unwrap();
        assert_eq!(neg.definiteness(), Definiteness::NegativeDefinite);
        assert_eq!(
            form(&[[1, 0], [0, -1]]).definiteness(),
            Definiteness::IndefiniteOrSemidefinite
        );
        assert_eq!(
            form(&[[0, 1], [1, 0]]).definiteness(),
            Definiteness::IndefiniteOrSemidefinite
        );
    }

    #[test]
    fn rejects_nonsymmetric_gram() {
        assert!(BilinearForm::new(Matrix::from_ints(&[[1, 2], [3, 4]])).is_err());
    }

    #[test]
    fn signature_handles_zero_diagonal() {
        let s = form(&[[0, 1], [1, 0]]).signature();
        assert_eq!((s.positive, s.negative, s.zero), (1, 1, 0));
        let s = form(&[[1, 1], [1, 1]]).signature();
        assert_eq!((s.positive, s.negative, s.zero), (1, 0, 1));
        let s = BilinearForm::zero(3).signature();
        assert_eq!((s.positive, s.negative, s.zero), (0, 0, 3));
    }

    #[test]
    fn radical_of_degenerate_form() {
        let f = form(&[[1, 1], [1, 1]]);
        assert_eq!(f.radical().dim(), 1);
        assert!(!f.is_nondegenerate());
    }
}
