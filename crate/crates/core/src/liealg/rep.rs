use super::LieAlgebra;
use crate::linalg::{BilinearForm, Matrix, Scalar};
use crate::{Error, Result};

/// A matrix representation `ρ: g → gl(V)` given on basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    parent: LieAlgebra,
    space_dim: usize,
    rho: Vec<Matrix>,
}

impl Representation {
    /// Checks sizes and the homomorphism law on all basis pairs.
    pub fn new(parent: &LieAlgebra, rho: Vec<Matrix>) -> Result<Self> {
        if rho.len() != parent.dim() {
            return Err(Error::InvalidRepresentation(format!(
                "{} matrices for an algebra of dimension {}",
                rho.len(),
                parent.dim()
            )));
        }
        let space_dim = rho.first().map_or(0, Matrix::rows);
        if rho.iter().any(|m| m.rows() != space_dim || m.cols() != space_dim) {
            return Err(Error::InvalidRepresentation(
                "representation matrices must be square of equal size".into(),
            ));
        }
        let rep = Representation {
            parent: parent.clone(),
            space_dim,
            rho,
        };
        rep.check_homomorphism()?;
        Ok(rep)
    }

    /// `ρ = ad`.
    pub fn adjoint(g: &LieAlgebra) -> Self {
        Representation {
            parent: g.clone(),
            space_dim: g.dim(),
            rho: g.ad_basis().to_vec(),
        }
    }

    /// `ρ ≡ 0` on a space of the given dimension.
    pub fn zero(g: &LieAlgebra, space_dim: usize) -> Self {
        Representation {
            parent: g.clone(),
            space_dim,
            rho: vec![Matrix::zeros(space_dim, space_dim); g.dim()],
        }
    }

    fn check_homomorphism(&self) -> Result<()> {
        let n = self.parent.dim();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.rho_of(&bracket_coords(&self.parent, i, j));
                let rhs = self.rho[i].commutator(&self.rho[j]);
                if lhs != rhs {
                    return Err(Error::InvalidRepresentation(format!(
                        "rho([b{}, b{}]) != [rho(b{}), rho(b{})]",
                        i + 1,
                        j + 1,
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn parent(&self) -> &LieAlgebra {
        &self.parent
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.rho
    }

    /// `ρ(x) = Σⱼ x[j]·ρ(bⱼ)`.
    pub fn rho_of(&self, x: &[Scalar]) -> Matrix {
        let mut m = Matrix::zeros(self.space_dim, self.space_dim);
        for (xi, r) in x.iter().zip(&self.rho) {
            if !xi.is_zero() {
                m = m.add(&r.scale(xi));
            }
        }
        m
    }

    /// `B_ρ(bᵢ, bⱼ) = tr(ρ(bᵢ)ρ(bⱼ))`.
    pub fn trace_form(&self) -> BilinearForm {
        let n = self.parent.dim();
        let mut gram = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = trace_of_product(&self.rho[i], &self.rho[j]);
                gram[(j, i)] = t.clone();
                gram[(i, j)] = t;
            }
        }
        BilinearForm::new(gram).expect("trace form is symmetric")
    }
}

fn bracket_coords(g: &LieAlgebra, i: usize, j: usize) -> Vec<Scalar> {
    (0..g.dim()).map(|k| g.constant(i, j, k).clone()).collect()
}

/// `tr(AB)` without forming the product.
fn trace_of_product(a: &Matrix, b: &Matrix) -> Scalar {
    let n = a.rows();
    let mut t = Scalar::zero();
    for i in 0..n {
        for k in 0..n {
            let x = &a[(i, k)];
            let y = &b[(k, i)];
            if !x.is_zero() && !y.is_zero() {
                t += x * y;
            }
        }
    }
    t
}
