//! Derivations and automorphisms of `A(g)`.
//!
//! Operators on `A(g)` are exact `3n × 3n` matrices in the `(x₁|x₂|x₃)`
//! order. Two families always act: `diag(ad x)`, and `so(3)` (more generally
//! `gl(3)`) acting on the slot index, `M ↦ M ⊗ Iₙ`. For simple `g` these
//! exhaust the derivations, and automorphisms factor as `diag(φ)·(R ⊗ Iₙ)`.

use nalgebra::DMatrix;

use crate::linalg::{centralizer, q, Matrix, Scalar, Subspace};
use crate::nahm::NahmAlgebra;
use crate::structure::is_simple_nahm;
use crate::{Error, Result};

/// `T` viewed as a 3×3 grid of `n×n` blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOperator {
    n: usize,
    t: Matrix,
}

impl BlockOperator {
    pub fn new(n: usize, t: Matrix) -> Result<Self> {
        if t.rows() != 3 * n || t.cols() != 3 * n {
            return Err(Error::Dimension(format!("operator must be {0}×{0}", 3 * n)));
        }
        Ok(BlockOperator { n, t })
    }

    pub fn block(&self, i: usize, j: usize) -> Matrix {
        self.t.submatrix(i * self.n, j * self.n, self.n, self.n)
    }

    /// Diagonal blocks only.
    pub fn diag_part(&self) -> Matrix {
        let blocks: Vec<Matrix> = (0..3).map(|i| self.block(i, i)).collect();
        Matrix::block_diagonal(&[&blocks[0], &blocks[1], &blocks[2]])
    }

    /// Off-diagonal blocks only.
    pub fn off_part(&self) -> Matrix {
        self.t.sub(&self.diag_part())
    }

    pub fn matrix(&self) -> &Matrix {
        &self.t
    }
}

/// Products of all basis pairs, `table[i][j] = BᵢBⱼ`.
fn product_table(alg: &NahmAlgebra) -> Vec<Vec<Vec<Scalar>>> {
    let basis: Vec<Vec<Scalar>> = alg.basis().iter().map(|b| b.coords()).collect();
    basis
        .iter()
        .map(|x| basis.iter().map(|y| alg.mul_coords(x, y)).collect())
        .collect()
}

fn leibniz_defect(alg: &NahmAlgebra, table: &[Vec<Vec<Scalar>>], t: &Matrix, i: usize, j: usize) -> Vec<Scalar> {
    let lhs = t.mul_vec(&table[i][j]);
    let a = alg.mul_coords(&t.column(i), &unit(alg.dim(), j));
    let b = alg.mul_coords(&unit(alg.dim(), i), &t.column(j));
    lhs.iter().zip(a.iter().zip(&b)).map(|(l, (x, y))| l - x - y).collect()
}

fn unit(d: usize, i: usize) -> Vec<Scalar> {
    crate::linalg::unit_vec(d, i)
}

/// `T(XY) = (TX)Y + X(TY)` on all basis pairs.
pub fn is_derivation(alg: &NahmAlgebra, t: &Matrix) -> bool {
    let d = alg.dim();
    if t.rows() != d || t.cols() != d {
        return false;
    }
    let table = product_table(alg);
    (0..d).all(|i| (i..d).all(|j| leibniz_defect(alg, &table, t, i, j).iter().all(Scalar::is_zero)))
}

/// `Der(A(g))` as a subspace of row-major `(3n)²` operator vectors,
/// verified to be closed under commutators.
pub fn derivation_algebra(alg: &NahmAlgebra) -> Result<Subspace> {
    let d = alg.dim();
    let table = product_table(alg);
    let mut der = Subspace::full(d * d);
    for i in 0..d {
        der = der.restrict_kernel(|v| {
            let t = Matrix::from_vec(d, d, v.to_vec());
            (i..d).flat_map(|j| leibniz_defect(alg, &table, &t, i, j)).collect()
        });
    }
    let mats: Vec<Matrix> = der.vectors().into_iter().map(|v| Matrix::from_vec(d, d, v)).collect();
    for (a, x) in mats.iter().enumerate() {
        for y in &mats[a + 1..] {
            if !der.contains(&x.commutator(y).to_vec()) {
                return Err(Error::Inconsistent(
                    "derivation algebra is not closed under commutators".into(),
                ));
            }
        }
    }
    Ok(der)
}

/// Basis of a derivation subspace as matrices.
pub fn operator_basis(alg: &NahmAlgebra, s: &Subspace) -> Vec<Matrix> {
    let d = alg.dim();
    s.vectors().into_iter().map(|v| Matrix::from_vec(d, d, v)).collect()
}

/// `diag(ad x, ad x, ad x)`.
pub fn diag_ad(alg: &NahmAlgebra, x: &[Scalar]) -> Result<Matrix> {
    let a = alg.base().ad(x)?;
    Ok(Matrix::block_diagonal(&[&a, &a, &a]))
}

/// `M ⊗ Iₙ`: `M` acting on the slot index.
pub fn slot_action(alg: &NahmAlgebra, m: &Matrix) -> Result<Matrix> {
    if m.rows() != 3 || m.cols() != 3 {
        return Err(Error::Dimension("slot action needs a 3×3 matrix".into()));
    }
    Ok(m.kron(&Matrix::identity(alg.n())))
}

/// [`slot_action`] restricted to skew `M`, the `so(3)` derivations.
pub fn so3_action(alg: &NahmAlgebra, m: &Matrix) -> Result<Matrix> {
    if !m.is_skew_symmetric() {
        return Err(Error::Precondition("so(3) action needs a skew-symmetric matrix".into()));
    }
    slot_action(alg, m)
}

/// `E₁₂, E₁₃, E₂₃` with `Eᵢⱼ = eᵢeⱼᵗ − eⱼeᵢᵗ`.
pub fn so3_generators() -> [Matrix; 3] {
    let e = |i: usize, j: usize| {
        let mut m = Matrix::zeros(3, 3);
        m[(i, j)] = Scalar::one();
        m[(j, i)] = -Scalar::one();
        m
    };
    [e(0, 1), e(0, 2), e(1, 2)]
}

/// `span{diag(ad bᵢ)} + span{so3_action(Eᵢⱼ)}`.
pub fn expected_derivations(alg: &NahmAlgebra) -> Subspace {
    let n = alg.n();
    let diag = (0..n).map(|i| {
        diag_ad(alg, &crate::linalg::unit_vec(n, i))
            .expect("basis vector")
            .to_vec()
    });
    let rot = so3_generators()
        .into_iter()
        .map(|m| so3_action(alg, &m).expect("skew generator").to_vec());
    Subspace::from_vectors(alg.dim() * alg.dim(), diag.chain(rot))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub der_dim: usize,
    /// `dim g + 3`.
    pub expected_dim: usize,
    /// `Der(A)` equals `diag(ad g) ⊕ so(3)` as canonical subspaces.
    pub span_equal: bool,
}

impl DecompositionReport {
    pub fn pass(&self) -> bool {
        self.span_equal && self.der_dim == self.expected_dim
    }
}

/// Checks `Der(A(g)) = diag(ad g) ⊕ so(3)` for simple `g`.
pub fn decomposition_check(alg: &NahmAlgebra) -> Result<DecompositionReport> {
    if !is_simple_nahm(alg).simple {
        return Err(Error::Precondition(format!("A({}) is not simple", alg.base().name())));
    }
    let der = derivation_algebra(alg)?;
    Ok(DecompositionReport {
        der_dim: der.dim(),
        expected_dim: alg.n() + 3,
        span_equal: der == expected_derivations(alg),
    })
}

/// Operators commuting with every `L(Bᵢ)`.
pub fn schur_centralizer(alg: &NahmAlgebra) -> Subspace {
    let ls: Vec<Matrix> = alg
        .basis()
        .iter()
        .map(|b| alg.left_mult(b).expect("basis element"))
        .collect();
    centralizer(alg.dim(), &ls)
}

/// `Tᶜ = G⁻¹ Tᵗ G` with `G` the standard-form Gram matrix, so that
/// `C(TᶜX, Y) = C(X, TY)`.
pub fn c_transpose(alg: &NahmAlgebra, t: &Matrix) -> Result<Matrix> {
    let g = alg.standard_form().gram().clone();
    let ginv = g
        .inverse()
        .ok_or_else(|| Error::Precondition("standard form is degenerate".into()))?;
    Ok(ginv.mul(&t.transpose()).mul(&g))
}

/// `λ` with `T + Tᶜ = λI`, if `T + Tᶜ` is scalar.
pub fn c_symmetric_scalar(alg: &NahmAlgebra, t: &Matrix) -> Result<Option<Scalar>> {
    Ok(t.add(&c_transpose(alg, t)?).as_scalar_multiple_of_identity())
}

/// Invertible and `F(XY) = F(X)F(Y)` on all basis pairs.
pub fn is_automorphism(alg: &NahmAlgebra, f: &Matrix) -> bool {
    let d = alg.dim();
    if f.rows() != d || f.cols() != d || f.inverse().is_none() {
        return false;
    }
    let table = product_table(alg);
    let cols: Vec<Vec<Scalar>> = (0..d).map(|i| f.column(i)).collect();
    (0..d).all(|i| (i..d).all(|j| f.mul_vec(&table[i][j]) == alg.mul_coords(&cols[i], &cols[j])))
}

/// `U = ⅓[[−1,2,2],[2,−1,2],[2,2,−1]]`.
pub fn grading_matrix() -> Matrix {
    let mut u = Matrix::from_ints(&[[-1, 2, 2], [2, -1, 2], [2, 2, -1]]);
    u = u.scale(&q(1, 3));
    u
}

/// `G = (π/√3)[[0,1,−1],[−1,0,1],[1,−1,0]]`, a logarithm of `U`.
pub fn grading_generator() -> DMatrix<f64> {
    let s = std::f64::consts::PI / 3f64.sqrt();
    DMatrix::from_row_slice(3, 3, &[0.0, s, -s, -s, 0.0, s, s, -s, 0.0])
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradingAutomorphism {
    pub u: Matrix,
    pub generator: DMatrix<f64>,
    /// `UᵗU = I` and `det U = 1`.
    pub in_so3: bool,
    pub involution: bool,
    /// `U ⊗ Iₙ = P_Δ − P_W` on `A(g)`.
    pub equals_projection_difference: bool,
    pub is_automorphism: bool,
    /// `‖exp(G) − U‖∞`.
    pub exp_error: f64,
}

impl GradingAutomorphism {
    pub fn pass(&self, exp_tol: f64) -> bool {
        self.in_so3
            && self.involution
            && self.equals_projection_difference
            && self.is_automorphism
            && self.exp_error <= exp_tol
    }
}

pub fn grading_automorphism(alg: &NahmAlgebra) -> GradingAutomorphism {
    let u = grading_matrix();
    let in_so3 = u.transpose().mul(&u).is_identity() && u.determinant().is_ok_and(|d| d.is_one());
    let involution = u.mul(&u).is_identity();
    let blockwise = slot_action(alg, &u).expect("3×3");
    let d = alg.dim();
    let mut diff = Matrix::zeros(d, d);
    for (j, b) in alg.basis().iter().enumerate() {
        let col = alg.proj_delta(b).sub(&alg.proj_w(b)).coords();
        for (i, v) in col.into_iter().enumerate() {
            diff[(i, j)] = v;
        }
    }
    let generator = grading_generator();
    let ue = crate::flow::to_dmatrix(&u);
    let exp_error = (expm(&generator) - ue).amax();
    GradingAutomorphism {
        equals_projection_difference: diff == blockwise,
        is_automorphism: is_automorphism(alg, &blockwise),
        u,
        generator,
        in_so3,
        involution,
        exp_error,
    }
}

/// Matrix exponential by scaling and squaring of the Taylor series.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a
        .row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut s = 0;
    while norm / 2f64.powi(s) > 0.5 {
        s += 1;
    }
    let scaled = a / 2f64.powi(s);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.amax() <= f64::EPSILON * 1e-3 * result.amax() {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// `F = diag(φ, φ, φ)·(R ⊗ Iₙ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutFactorization {
    pub phi: Matrix,
    pub r: Matrix,
}

/// `ω` coordinates of `Σ c·Eᵢⱼ` in the order `(E₁₂, E₁₃, E₂₃)`, so that the
/// skew matrix acts as `v ↦ ω × v`: `E₁₂ ↔ −e₃`, `E₁₃ ↔ e₂`, `E₂₃ ↔ −e₁`.
fn hat_inverse_basis() -> Matrix {
    Matrix::from_ints(&[[0, 0, -1], [0, 1, 0], [-1, 0, 0]])
}

/// Factors an automorphism of a simple `A(g)` by its conjugation action on
/// the `so(3)` derivations.
///
/// Conjugating `so3_action(E)` by `F` gives `so3_action(R E Rᵗ)`; in the
/// axial-vector coordinates `ω` that map is `R` itself, so `R = Q K Q⁻¹`
/// where `K` is the conjugation matrix in the `Eᵢⱼ` basis and `Q` the
/// `Eᵢⱼ → ω` change of coordinates.
pub fn aut_factorization(alg: &NahmAlgebra, f: &Matrix) -> Result<AutFactorization> {
    if !is_simple_nahm(alg).simple {
        return Err(Error::Precondition(format!("A({}) is not simple", alg.base().name())));
    }
    if !is_automorphism(alg, f) {
        return Err(Error::Precondition("F is not an automorphism of A(g)".into()));
    }
    let n = alg.n();
    let finv = f.inverse().expect("automorphisms are invertible");
    let gens = so3_generators();
    let mut k = Matrix::zeros(3, 3);
    for (col, e) in gens.iter().enumerate() {
        let conj = f.mul(&so3_action(alg, e)?).mul(&finv);
        let m = Matrix::from_vec(
            3,
            3,
            (0..3)
                .flat_map(|i| (0..3).map(move |j| (i, j)))
                .map(|(i, j)| conj[(i * n, j * n)].clone())
                .collect(),
        );
        if !m.is_skew_symmetric() || slot_action(alg, &m)? != conj {
            return Err(Error::Inconsistent(
                "conjugation does not preserve the so(3) derivations".into(),
            ));
        }
        let coeffs = [m[(0, 1)].clone(), m[(0, 2)].clone(), m[(1, 2)].clone()];
        for (row, c) in coeffs.into_iter().enumerate() {
            k[(row, col)] = c;
        }
    }
    let qm = hat_inverse_basis();
    let r = qm.mul(&k).mul(&qm.inverse().expect("invertible"));
    if !r.transpose().mul(&r).is_identity() || !r.determinant()?.is_one() {
        return Err(Error::Inconsistent("recovered rotation is not in SO(3)".into()));
    }
    let diag = f.mul(&slot_action(alg, &r.transpose())?);
    let ops = BlockOperator::new(n, diag.clone())?;
    let phi = ops.block(0, 0);
    if !ops.off_part().is_zero() || ops.block(1, 1) != phi || ops.block(2, 2) != phi {
        return Err(Error::Inconsistent("F·R⁻¹ is not of the form diag(φ, φ, φ)".into()));
    }
    if !alg.base().is_automorphism(&phi) {
        return Err(Error::Inconsistent("recovered φ is not an automorphism of g".into()));
    }
    let rebuilt = diag.mul(&slot_action(alg, &r)?);
    if rebuilt != *f {
        return Err(Error::Inconsistent("diag(φ)·R does not reproduce F".into()));
    }
    Ok(AutFactorization { phi, r })
}

/// A derivation `D ∈ Der(A)` with `D·p = target`, if one exists.
pub fn derivation_sending(alg: &NahmAlgebra, der: &Subspace, p: &[Scalar], target: &[Scalar]) -> Option<Matrix> {
    let basis = operator_basis(alg, der);
    if basis.is_empty() {
        return None;
    }
    let images: Vec<Vec<Scalar>> = basis.iter().map(|d| d.mul_vec(p)).collect();
    let system = Matrix::from_columns(alg.dim(), &images);
    let c = system.solve(target)?;
    let d = alg.dim();
    let mut out = Matrix::zeros(d, d);
    for (ci, b) in c.iter().zip(&basis) {
        if !ci.is_zero() {
            out = out.add(&b.scale(ci));
        }
    }
    Some(out)
}
