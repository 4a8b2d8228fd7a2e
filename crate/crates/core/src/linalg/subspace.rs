use std::fmt;

use super::{Matrix, Scalar};

/// A subspace of `ℚ^ambient`, stored by its reduced row-echelon basis.
///
/// The basis is canonical, so `==` is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of the given vectors (each of length `ambient`).
    pub fn from_vectors<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut data = Vec::new();
        let mut rows = 0;
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector length does not match ambient dimension");
            data.extend(v);
            rows += 1;
        }
        Self::from_matrix_rows(&Matrix::from_vec(rows, ambient, data))
    }

    /// Row space of `m`.
    pub fn from_matrix_rows(m: &Matrix) -> Self {
        let (r, pivots) = m.rref_with_pivots();
        let basis = r.submatrix(0, 0, pivots.len(), m.cols());
        Subspace {
            ambient: m.cols(),
            basis,
            pivots,
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Self::from_vectors(
            ambient,
            indices.into_iter().map(|i| {
                let mut v = vec![Scalar::zero(); ambient];
                v[i] = Scalar::one();
                v
            }),
        )
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// The canonical basis as matrix rows.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    /// `v` minus its echelon reduction against the basis; zero iff `v` lies in the span.
    pub fn residual(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let mut r = v.to_vec();
        for (k, &p) in self.pivots.iter().enumerate() {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(k).iter().enumerate() {
                if !b.is_zero() {
                    r[j] -= &f * b;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.residual(v).iter().all(Scalar::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    /// Coefficients of `v` in the canonical basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.contains(v)
            .then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// `self + other`.
    pub fn join(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::from_vectors(self.ambient, self.vectors().into_iter().chain(other.vectors()))
    }

    /// `{w : w·v = 0 for all v}` under the coordinate dot product.
    pub fn annihilator(&self) -> Subspace {
        self.basis.nullspace()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        self.annihilator().join(&other.annihilator()).annihilator()
    }

    /// `{v ∈ self : f(v) = 0}` for a linear map `f` given by its action on vectors.
    pub fn restrict_kernel<F>(&self, f: F) -> Subspace
    where
        F: Fn(&[Scalar]) -> Vec<Scalar>,
    {
        let vs = self.vectors();
        if vs.is_empty() {
            return self.clone();
        }
        let images: Vec<Vec<Scalar>> = vs.iter().map(|v| f(v)).collect();
        let out_dim = images[0].len();
        let system = Matrix::from_columns(out_dim, &images);
        let kernel = system.nullspace();
        let combos = kernel.vectors().into_iter().map(|c| {
            let mut w = vec![Scalar::zero(); self.ambient];
            for (ci, v) in c.iter().zip(&vs) {
                if ci.is_zero() {
                    continue;
                }
                for (wj, vj) in w.iter_mut().zip(v) {
                    if !vj.is_zero() {
                        *wj += ci * vj;
                    }
                }
            }
            w
        });
        Subspace::from_vectors(self.ambient, combos)
    }

    /// The image of this subspace under `f`, living in `ℚ^target`.
    pub fn map<F>(&self, target: usize, f: F) -> Subspace
    where
        F: Fn(&[Scalar]) -> Vec<Scalar>,
    {
        Subspace::from_vectors(target, self.vectors().iter().map(|v| f(v)))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient)?;
        fmt::Debug::fmt(&self.basis, f)
    }
}

/// All `T` (as row-major `k²` vectors) commuting with every given `k×k` matrix.
pub fn centralizer(k: usize, mats: &[Matrix]) -> Subspace {
    let mut space = Subspace::full(k * k);
    for m in mats {
        assert!(m.rows() == k && m.cols() == k, "centralizer needs k×k matrices");
        space = space.restrict_kernel(|v| {
            let t = Matrix::from_vec(k, k, v.to_vec());
            t.commutator(m).to_vec()
        });
    }
    space
}
