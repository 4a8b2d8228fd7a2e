//! Nilpotent and idempotent elements of `A(g)`.
//!
//! `N² = 0` exactly when the components of `N` commute pairwise, and
//! `E² = E` exactly when `(e₁, e₂, e₃)` satisfies `[eᵢ, eᵢ₊₁] = eᵢ₊₂`, i.e.
//! spans a copy of `so(3)` in `g`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::flow::{max_abs, rationalize, FloatNahm};
use crate::liealg::LieAlgebra;
use crate::linalg::{Matrix, Scalar, Subspace};
use crate::nahm::{triple_subspace, NahmAlgebra, NahmElement};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotentReport {
    /// `N² = 0`.
    pub nilpotent: bool,
    pub is_zero: bool,
    /// `[nᵢ, nⱼ] = 0` for all `i, j`.
    pub components_commute: bool,
    /// `ℚn₁ × ℚn₂ × ℚn₃` has zero product.
    pub abelian_span: bool,
}

pub fn is_nilpotent(alg: &NahmAlgebra, x: &NahmElement) -> Result<NilpotentReport> {
    let sq = alg.product(x, x)?;
    let g = alg.base();
    let c = x.components();
    let components_commute =
        (0..3).all(|i| (i + 1..3).all(|j| g.bracket_unchecked(&c[i], &c[j]).iter().all(Scalar::is_zero)));
    let n = alg.n();
    let lines: Vec<Subspace> = c.iter().map(|v| Subspace::from_vectors(n, [v.clone()])).collect();
    let span = triple_subspace([&lines[0], &lines[1], &lines[2]]);
    let vs = span.vectors();
    let abelian_span = vs
        .iter()
        .all(|a| vs.iter().all(|b| alg.mul_coords(a, b).iter().all(Scalar::is_zero)));
    Ok(NilpotentReport {
        nilpotent: sq.is_zero(),
        is_zero: x.is_zero(),
        components_commute,
        abelian_span,
    })
}

/// `E ≠ 0` and `E² = E`. A positive answer also checks that the
/// components are linearly independent, as they must be.
pub fn is_idempotent(alg: &NahmAlgebra, e: &NahmElement) -> Result<bool> {
    let sq = alg.product(e, e)?;
    if e.is_zero() || sq != *e {
        return Ok(false);
    }
    let independent = Subspace::from_vectors(alg.n(), e.components().iter().cloned()).dim() == 3;
    if !independent {
        return Err(Error::Inconsistent(format!(
            "idempotent {e} has linearly dependent components"
        )));
    }
    Ok(true)
}

/// Three vectors of `g` with `[eᵢ, eᵢ₊₁] = eᵢ₊₂` (indices mod 3), linearly
/// independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct So3Triple {
    e: [Vec<Scalar>; 3],
}

impl So3Triple {
    pub fn new(g: &LieAlgebra, e1: Vec<Scalar>, e2: Vec<Scalar>, e3: Vec<Scalar>) -> Result<Self> {
        let e = [e1, e2, e3];
        for i in 0..3 {
            let b = g.bracket(&e[i], &e[(i + 1) % 3])?;
            if b != e[(i + 2) % 3] {
                return Err(Error::Precondition(format!(
                    "[e{}, e{}] != e{}",
                    i + 1,
                    (i + 1) % 3 + 1,
                    (i + 2) % 3 + 1
                )));
            }
        }
        if Subspace::from_vectors(g.dim(), e.iter().cloned()).dim() != 3 {
            return Err(Error::Precondition("triple is linearly dependent".into()));
        }
        Ok(So3Triple { e })
    }

    pub fn vectors(&self) -> &[Vec<Scalar>; 3] {
        &self.e
    }
}

/// `E = (e₁, e₂, e₃)`, verified idempotent.
pub fn idempotent_from_so3(alg: &NahmAlgebra, t: &So3Triple) -> Result<NahmElement> {
    let [a, b, c] = t.e.clone();
    let e = NahmElement::new(a, b, c)?;
    if !is_idempotent(alg, &e)? {
        return Err(Error::Inconsistent("so(3) triple did not give an idempotent".into()));
    }
    Ok(e)
}

/// Idempotents `(bᵢ, bⱼ, bₖ)` made of distinct basis vectors, in
/// lexicographic order of `(i, j, k)`.
pub fn basis_idempotents(alg: &NahmAlgebra) -> Vec<NahmElement> {
    let n = alg.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let e = NahmElement::from_basis_triple(n, [i, j, k]);
                if alg.square(&e) == e {
                    out.push(e);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonOptions {
    /// Target `‖X² − X‖∞`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-10,
            max_iter: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonResult {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// `‖X² − X‖∞` at `x`.
    pub residual: f64,
    /// The rationalized point when it is exactly idempotent.
    pub exact: Option<NahmElement>,
}

const HALVINGS: usize = 30;
const DIVERGENCE_NORM: f64 = 1e12;

/// Newton's method on `F(X) = X² − X` with Jacobian `2L(X) − I`, using
/// least-squares steps and step halving on residual increase.
///
/// Converging to `0` counts as failure. On success the point is rounded to
/// rationals with denominators at most `10⁶` and re-checked exactly.
pub fn find_idempotent(alg: &NahmAlgebra, x0: &[f64], opts: &NewtonOptions) -> Result<NewtonResult> {
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Precondition("Newton tolerance must be positive".into()));
    }
    let f = FloatNahm::new(alg);
    let d = f.dim();
    if x0.len() != d {
        return Err(Error::Dimension(format!("start has length {}, expected {d}", x0.len())));
    }
    let residual = |x: &[f64]| -> Vec<f64> { f.square(x).iter().zip(x).map(|(s, v)| s - v).collect() };
    let mut x = x0.to_vec();
    let mut r = residual(&x);
    let mut rn = max_abs(&r);
    for iter in 0..=opts.max_iter {
        if rn <= opts.tol {
            if max_abs(&x) <= opts.tol.sqrt() {
                return Err(Error::Numerical(
                    "Newton converged to 0, which is not idempotent".into(),
                ));
            }
            let exact = rationalize(&x).ok().filter(|e| is_idempotent(alg, e).unwrap_or(false));
            return Ok(NewtonResult {
                x,
                iterations: iter,
                residual: rn,
                exact,
            });
        }
        if iter == opts.max_iter {
            break;
        }
        let jac = f.left_mult(&x) * 2.0 - DMatrix::identity(d, d);
        let rhs = -DVector::from_column_slice(&r);
        let step = jac
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .map_err(|e| Error::Numerical(format!("least-squares solve failed: {e}")))?;
        // halve until the residual drops; after the last halving take the step anyway
        let mut scale = 1.0;
        for k in 0..=HALVINGS {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + scale * s).collect();
            let tr = residual(&trial);
            let trn = max_abs(&tr);
            if trn < rn || k == HALVINGS {
                x = trial;
                r = tr;
                rn = trn;
                break;
            }
            scale *= 0.5;
        }
        if max_abs(&x) > DIVERGENCE_NORM || !rn.is_finite() {
            return Err(Error::Numerical(format!(
                "Newton iteration diverged at step {}",
                iter + 1
            )));
        }
    }
    Err(Error::Numerical(format!(
        "Newton did not reach tolerance {} in {} iterations (residual {rn:e})",
        opts.tol, opts.max_iter
    )))
}

/// Uniform start in `[−1, 1]^{3n}` from a seed.
pub fn random_start(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

/// An element whose fourth powers disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerAssocWitness {
    pub x: NahmElement,
    /// `((X²)X)X`.
    pub left: NahmElement,
    /// `(X²)(X²)`.
    pub right: NahmElement,
}

/// Searches basis elements, then `Bᵢ + Bⱼ` and `Bᵢ − Bⱼ` for `i < j` in
/// lexicographic order, for `X` with `((X²)X)X ≠ (X²)(X²)`.
pub fn power_assoc_witness(alg: &NahmAlgebra) -> Option<PowerAssocWitness> {
    let basis = alg.basis();
    let check = |x: NahmElement| {
        let sq = alg.square(&x);
        let left = alg.mul(&alg.mul(&sq, &x), &x);
        let right = alg.square(&sq);
        (left != right).then_some(PowerAssocWitness { x, left, right })
    };
    let singles = basis.iter().cloned();
    let pairs = (0..basis.len()).flat_map(|i| {
        let basis = &basis;
        (i + 1..basis.len()).flat_map(move |j| [basis[i].add(&basis[j]), basis[i].sub(&basis[j])])
    });
    singles.chain(pairs).find_map(check)
}

/// Exact check that `aE` is not idempotent for `a ∉ {0, 1}`.
pub fn scaled_is_idempotent(alg: &NahmAlgebra, e: &NahmElement, a: &Scalar) -> Result<bool> {
    is_idempotent(alg, &e.scale(a))
}

/// The so(3) relations `[eᵢ, eᵢ₊₁] = eᵢ₊₂` for the components of `e`.
pub fn satisfies_so3_relations(g: &LieAlgebra, e: &NahmElement) -> bool {
    let c = e.components();
    (0..3).all(|i| g.bracket_unchecked(&c[i], &c[(i + 1) % 3]) == c[(i + 2) % 3])
}

/// Rotation matrices act on idempotents of `A(so3)` through the base: the
/// columns of any `R ∈ SO(3, ℚ)` form an so(3) triple.
pub fn triple_from_rotation(g: &LieAlgebra, r: &Matrix) -> Result<So3Triple> {
    So3Triple::new(g, r.column(0), r.column(1), r.column(2))
}
