//! The Nahm algebra `A(g) = g × g × g`.
//!
//! Elements are triples `X = (x₁, x₂, x₃)` and the product is
//!
//! ```text
//! X·Y = ½([x₂,y₃] + [y₂,x₃] | [x₃,y₁] + [y₃,x₁] | [x₁,y₂] + [y₁,x₂])
//! ```
//!
//! so that `X² = ([x₂,x₃], [x₃,x₁], [x₁,x₂])`. Every matrix and coordinate
//! vector over `A(g)` uses the concatenated order `(x₁ | x₂ | x₃)`.

use std::fmt;

use crate::liealg::{LieAlgebra, Representation};
use crate::linalg::{is_zero_vec, q, BilinearForm, Definiteness, Matrix, ParseScalarError, Scalar, Subspace};
use crate::{Error, Result};

/// A triple `(x₁, x₂, x₃)` of vectors of `g`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NahmElement {
    x: [Vec<Scalar>; 3],
}

impl NahmElement {
    pub fn new(x1: Vec<Scalar>, x2: Vec<Scalar>, x3: Vec<Scalar>) -> Result<Self> {
        if x1.len() != x2.len() || x2.len() != x3.len() {
            return Err(Error::Dimension("components of a Nahm element differ in length".into()));
        }
        Ok(NahmElement { x: [x1, x2, x3] })
    }

    pub fn zero(n: usize) -> Self {
        NahmElement {
            x: std::array::from_fn(|_| vec![Scalar::zero(); n]),
        }
    }

    /// `(bᵢ, bⱼ, bₖ)` for zero-based basis indices.
    pub fn from_basis_triple(n: usize, idx: [usize; 3]) -> Self {
        let mut e = Self::zero(n);
        for (slot, &i) in idx.iter().enumerate() {
            e.x[slot][i] = Scalar::one();
        }
        e
    }

    /// `Δ(x) = (x, x, x)`.
    pub fn delta(x: &[Scalar]) -> Self {
        NahmElement {
            x: std::array::from_fn(|_| x.to_vec()),
        }
    }

    /// Splits a `3n` coordinate vector.
    pub fn from_coords(coords: &[Scalar]) -> Result<Self> {
        if !coords.len().is_multiple_of(3) {
            return Err(Error::Dimension(format!(
                "coordinate vector length {} is not a multiple of 3",
                coords.len()
            )));
        }
        let n = coords.len() / 3;
        Ok(NahmElement {
            x: std::array::from_fn(|i| coords[i * n..(i + 1) * n].to_vec()),
        })
    }

    /// Parses `a,b,…;c,d,…;e,f,…` with rational entries.
    pub fn parse(s: &str) -> Result<Self> {
        let slots: Vec<&str> = s.split(';').collect();
        if slots.len() != 3 {
            return Err(Error::Dimension(format!(
                "expected three `;`-separated slots, found {}",
                slots.len()
            )));
        }
        let parse_slot = |slot: &str| -> Result<Vec<Scalar>> {
            if slot.trim().is_empty() {
                return Ok(Vec::new());
            }
            slot.split(',')
                .map(|t| t.parse::<Scalar>())
                .collect::<std::result::Result<_, ParseScalarError>>()
                .map_err(|e| Error::Dimension(e.to_string()))
        };
        Self::new(parse_slot(slots[0])?, parse_slot(slots[1])?, parse_slot(slots[2])?)
    }

    /// Dimension of `g`.
    pub fn n(&self) -> usize {
        self.x[0].len()
    }

    pub fn component(&self, i: usize) -> &[Scalar] {
        &self.x[i]
    }

    pub fn components(&self) -> &[Vec<Scalar>; 3] {
        &self.x
    }

    pub fn coords(&self) -> Vec<Scalar> {
        self.x.concat()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.x.iter().flatten().map(Scalar::to_f64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(|c| is_zero_vec(c))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        NahmElement {
            x: std::array::from_fn(|i| self.x[i].iter().map(|v| s * v).collect()),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        NahmElement {
            x: std::array::from_fn(|i| self.x[i].iter().zip(&other.x[i]).map(|(a, b)| a + b).collect()),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }
}

impl fmt::Display for NahmElement {
    /// Same syntax as [`NahmElement::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.x.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            for (j, v) in c.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for NahmElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Outcome of checking the `Δ ⊕ W` grading on basis pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingReport {
    pub delta_delta_zero: bool,
    pub delta_w_in_w: bool,
    pub w_w_in_delta: bool,
    pub direct_sum: bool,
    /// First failing product per property, as human-readable text.
    pub witnesses: Vec<String>,
}

impl GradingReport {
    pub fn pass(&self) -> bool {
        self.delta_delta_zero && self.delta_w_in_w && self.w_w_in_delta && self.direct_sum
    }
}

/// A ℤ₂-grading `A(g) = even ⊕ odd` induced from a grading of `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedGrading {
    /// Pattern such as `"011"`: which slots take `g₁` in the even part.
    pub label: &'static str,
    pub even: Subspace,
    pub odd: Subspace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NahmAlgebra {
    base: LieAlgebra,
}

impl NahmAlgebra {
    pub fn new(base: LieAlgebra) -> Self {
        NahmAlgebra { base }
    }

    pub fn base(&self) -> &LieAlgebra {
        &self.base
    }

    /// `n = dim g`.
    pub fn n(&self) -> usize {
        self.base.dim()
    }

    /// `3n`.
    pub fn dim(&self) -> usize {
        3 * self.base.dim()
    }

    fn check(&self, x: &NahmElement) -> Result<()> {
        if x.n() == self.n() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "element over a {}-dimensional algebra used in A({})",
                x.n(),
                self.base.name()
            )))
        }
    }

    pub fn product(&self, x: &NahmElement, y: &NahmElement) -> Result<NahmElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul(x, y))
    }

    /// Product without dimension checks; panics on mismatched elements.
    pub fn mul(&self, x: &NahmElement, y: &NahmElement) -> NahmElement {
        let g = &self.base;
        let half = q(1, 2);
        let slot = |a: usize, b: usize| {
            let s = g.bracket_unchecked(&x.x[a], &y.x[b]);
            let t = g.bracket_unchecked(&y.x[a], &x.x[b]);
            s.iter().zip(&t).map(|(u, v)| &half * &(u + v)).collect::<Vec<_>>()
        };
        NahmElement {
            x: [slot(1, 2), slot(2, 0), slot(0, 1)],
        }
    }

    /// `X² = ([x₂,x₃], [x₃,x₁], [x₁,x₂])`; panics on a mismatched element.
    pub fn square(&self, x: &NahmElement) -> NahmElement {
        let g = &self.base;
        NahmElement {
            x: [
                g.bracket_unchecked(&x.x[1], &x.x[2]),
                g.bracket_unchecked(&x.x[2], &x.x[0]),
                g.bracket_unchecked(&x.x[0], &x.x[1]),
            ],
        }
    }

    /// Product of two `3n` coordinate vectors.
    pub fn mul_coords(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let x = NahmElement::from_coords(x).expect("3n coordinates");
        let y = NahmElement::from_coords(y).expect("3n coordinates");
        self.mul(&x, &y).coords()
    }

    /// The `3n` standard basis of `A(g)` as elements.
    pub fn basis(&self) -> Vec<NahmElement> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut v = vec![Scalar::zero(); d];
                v[i] = Scalar::one();
                NahmElement::from_coords(&v).expect("3n coordinates")
            })
            .collect()
    }

    /// `L(X)`, so that `L(X)·Y = X·Y`.
    pub fn left_mult(&self, x: &NahmElement) -> Result<Matrix> {
        self.check(x)?;
        let ads = [self.base.ad(&x.x[0])?, self.base.ad(&x.x[1])?, self.base.ad(&x.x[2])?];
        Ok(block_operator(&ads))
    }

    /// `L_ρ(X)`, the block pattern of `L(X)` with `ρ(xᵢ)` in place of `ad xᵢ`.
    pub fn l_rho(&self, rep: &Representation, x: &NahmElement) -> Result<Matrix> {
        self.check(x)?;
        self.check_rep(rep)?;
        let rhos = [rep.rho_of(&x.x[0]), rep.rho_of(&x.x[1]), rep.rho_of(&x.x[2])];
        Ok(block_operator(&rhos))
    }

    fn check_rep(&self, rep: &Representation) -> Result<()> {
        if rep.parent() == &self.base {
            Ok(())
        } else {
            Err(Error::InvalidRepresentation(format!(
                "representation of {} used with A({})",
                rep.parent().name(),
                self.base.name()
            )))
        }
    }

    /// `A(φ) = diag(φ, φ, φ)` for a Lie homomorphism `φ: g → target`.
    pub fn lift_hom(&self, target: &LieAlgebra, phi: &Matrix) -> Result<Matrix> {
        if !self.base.is_homomorphism_to(target, phi) {
            return Err(Error::Precondition("map is not a Lie algebra homomorphism".into()));
        }
        Ok(Matrix::block_diagonal(&[phi, phi, phi]))
    }

    pub fn delta(&self, x: &[Scalar]) -> NahmElement {
        NahmElement::delta(x)
    }

    /// `P_Δ(X) = Δ(⅓(x₁ + x₂ + x₃))`.
    pub fn proj_delta(&self, x: &NahmElement) -> NahmElement {
        let third = q(1, 3);
        let mean: Vec<Scalar> = (0..x.n())
            .map(|i| &third * &(&(&x.x[0][i] + &x.x[1][i]) + &x.x[2][i]))
            .collect();
        NahmElement::delta(&mean)
    }

    /// `P_W(X) = X − P_Δ(X)`.
    pub fn proj_w(&self, x: &NahmElement) -> NahmElement {
        x.sub(&self.proj_delta(x))
    }

    /// `Δ(g)` as a subspace of `A(g)`.
    pub fn delta_subspace(&self) -> Subspace {
        let n = self.n();
        Subspace::from_vectors(
            self.dim(),
            (0..n).map(|i| NahmElement::delta(&crate::linalg::unit_vec(n, i)).coords()),
        )
    }

    /// `W(g) = {X : x₁ + x₂ + x₃ = 0}`.
    pub fn w_subspace(&self) -> Subspace {
        Subspace::from_vectors(self.dim(), self.w_spanning_set().iter().map(NahmElement::coords))
    }

    fn w_spanning_set(&self) -> Vec<NahmElement> {
        let n = self.n();
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            let e = crate::linalg::unit_vec(n, i);
            let m: Vec<Scalar> = e.iter().map(|v| -v).collect();
            let z = vec![Scalar::zero(); n];
            out.push(NahmElement {
                x: [e.clone(), m.clone(), z.clone()],
            });
            out.push(NahmElement { x: [z, e, m] });
        }
        out
    }

    /// Checks `Δ·Δ = 0`, `Δ·W ⊆ W`, `W·W ⊆ Δ` and `A = Δ ⊕ W` on basis pairs.
    pub fn grading_check(&self) -> GradingReport {
        let n = self.n();
        let deltas: Vec<NahmElement> = (0..n)
            .map(|i| NahmElement::delta(&crate::linalg::unit_vec(n, i)))
            .collect();
        let ws = self.w_spanning_set();
        let delta_space = self.delta_subspace();
        let w_space = self.w_subspace();
        let mut witnesses = Vec::new();

        let mut first_failure =
            |name: &str, pairs: &[(&NahmElement, &NahmElement)], ok: &dyn Fn(&NahmElement) -> bool| {
                for (a, b) in pairs {
                    let p = self.mul(a, b);
                    if !ok(&p) {
                        witnesses.push(format!("{name}: ({a})·({b}) = ({p})"));
                        return false;
                    }
                }
                true
            };
        let dd: Vec<_> = deltas.iter().flat_map(|a| deltas.iter().map(move |b| (a, b))).collect();
        let dw: Vec<_> = deltas.iter().flat_map(|a| ws.iter().map(move |b| (a, b))).collect();
        let ww: Vec<_> = ws.iter().flat_map(|a| ws.iter().map(move |b| (a, b))).collect();
        let delta_delta_zero = first_failure("delta*delta", &dd, &|p| p.is_zero());
        let delta_w_in_w = first_failure("delta*W", &dw, &|p| w_space.contains(&p.coords()));
        let w_w_in_delta = first_failure("W*W", &ww, &|p| delta_space.contains(&p.coords()));
        let direct_sum =
            delta_space.dim() + w_space.dim() == self.dim() && delta_space.intersection(&w_space).is_zero();
        if !direct_sum {
            witnesses.push("A is not the direct sum of delta and W".into());
        }
        GradingReport {
            delta_delta_zero,
            delta_w_in_w,
            w_w_in_delta,
            direct_sum,
            witnesses,
        }
    }

    /// The three gradings `A₀₁₁ ⊕ A₁₀₀`, `A₁₀₁ ⊕ A₀₁₀`, `A₁₁₀ ⊕ A₀₀₁` induced by a
    /// ℤ₂-grading `g = g₀ ⊕ g₁`, each verified on basis pairs.
    pub fn induced_gradings(&self, g0: &Subspace, g1: &Subspace) -> Result<[InducedGrading; 3]> {
        let g = &self.base;
        let n = g.dim();
        if g0.ambient() != n || g1.ambient() != n {
            return Err(Error::Dimension("grading subspaces must live in g".into()));
        }
        let not_grading = |why: &str| Err(Error::Precondition(format!("not a Z2-grading of g: {why}")));
        if g0.dim() + g1.dim() != n || !g0.intersection(g1).is_zero() {
            return not_grading("g0 and g1 are not complementary");
        }
        if !g0.contains_subspace(&g.bracket_span(g0, g0)) {
            return not_grading("[g0, g0] is not contained in g0");
        }
        if !g1.contains_subspace(&g.bracket_span(g0, g1)) {
            return not_grading("[g0, g1] is not contained in g1");
        }
        if !g0.contains_subspace(&g.bracket_span(g1, g1)) {
            return not_grading("[g1, g1] is not contained in g0");
        }
        let pick = |odd_slot: bool| if odd_slot { g1 } else { g0 };
        let build = |label: &'static str, pattern: [bool; 3]| -> Result<InducedGrading> {
            let even = triple_subspace([pick(pattern[0]), pick(pattern[1]), pick(pattern[2])]);
            let odd = triple_subspace([pick(!pattern[0]), pick(!pattern[1]), pick(!pattern[2])]);
            let closed = |a: &Subspace, b: &Subspace, target: &Subspace| {
                let bv = b.vectors();
                a.vectors()
                    .iter()
                    .all(|x| bv.iter().all(|y| target.contains(&self.mul_coords(x, y))))
            };
            let ok = even.dim() + odd.dim() == self.dim()
                && even.intersection(&odd).is_zero()
                && closed(&even, &even, &even)
                && closed(&even, &odd, &odd)
                && closed(&odd, &odd, &even);
            if !ok {
                return Err(Error::Inconsistent(format!(
                    "induced grading A_{label} failed verification"
                )));
            }
            Ok(InducedGrading { label, even, odd })
        };
        Ok([
            build("011", [false, true, true])?,
            build("101", [true, false, true])?,
            build("110", [true, true, false])?,
        ])
    }

    /// `C_ρ(X, Y) = tr(L_ρ(X) L_ρ(Y))`, computed from the definition and
    /// from `C_ρ = −½ diag(B_ρ, B_ρ, B_ρ)`; the two must agree exactly.
    pub fn trace_form_nahm(&self, rep: &Representation) -> Result<BilinearForm> {
        self.check_rep(rep)?;
        let shortcut = self.trace_form_shortcut(rep);
        let by_definition = self.trace_form_by_definition(rep)?;
        if by_definition != *shortcut.gram() {
            return Err(Error::Inconsistent(
                "trace of L_rho products disagrees with -1/2 diag(B_rho)".into(),
            ));
        }
        Ok(shortcut)
    }

    fn trace_form_shortcut(&self, rep: &Representation) -> BilinearForm {
        let b = rep.trace_form().gram().scale(&q(-1, 2));
        BilinearForm::new(Matrix::block_diagonal(&[&b, &b, &b])).expect("symmetric")
    }

    fn trace_form_by_definition(&self, rep: &Representation) -> Result<Matrix> {
        let d = self.dim();
        let ls = self
            .basis()
            .iter()
            .map(|e| self.l_rho(rep, e))
            .collect::<Result<Vec<_>>>()?;
        let mut gram = Matrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let t = ls[i].mul(&ls[j]).trace();
                gram[(j, i)] = t.clone();
                gram[(i, j)] = t;
            }
        }
        Ok(gram)
    }

    /// The standard form `C`, i.e. the adjoint trace form.
    pub fn standard_form(&self) -> BilinearForm {
        self.trace_form_nahm(&Representation::adjoint(&self.base))
            .expect("adjoint representation belongs to the base algebra")
    }

    /// `rad C_ρ`, verified to equal `rad B_ρ × rad B_ρ × rad B_ρ`.
    pub fn form_radical_nahm(&self, rep: &Representation) -> Result<Subspace> {
        let rad = self.trace_form_nahm(rep)?.radical();
        let rb = rep.trace_form().radical();
        if rad != triple_subspace([&rb, &rb, &rb]) {
            return Err(Error::Inconsistent("rad C_rho differs from (rad B_rho)^3".into()));
        }
        Ok(rad)
    }

    /// Compact means the standard form is positive definite; defined for
    /// semisimple `g` only.
    pub fn is_compact(&self) -> Result<bool> {
        if !self.base.is_semisimple() {
            return Err(Error::Precondition(format!("{} is not semisimple", self.base.name())));
        }
        Ok(self.standard_form().definiteness() == Definiteness::PositiveDefinite)
    }

    /// The `C`-orthogonal complement of `Δ(g)`.
    pub fn delta_orthogonal_complement(&self) -> Subspace {
        let c = self.standard_form();
        let rows: Vec<Vec<Scalar>> = self
            .delta_subspace()
            .vectors()
            .iter()
            .map(|d| c.gram().mul_vec(d))
            .collect();
        Matrix::from_vec(rows.len(), self.dim(), rows.concat()).nullspace()
    }

    /// `{Y : y₁ + y₂ + y₃ ∈ rad κ}`.
    pub fn w_rad(&self) -> Subspace {
        let rad_kappa = self.base.killing().radical();
        // constraints: the sum lies in rad κ, i.e. it is annihilated by rad κ's annihilator
        let ann = rad_kappa.annihilator();
        let rows: Vec<Vec<Scalar>> = ann
            .vectors()
            .into_iter()
            .map(|a| [a.clone(), a.clone(), a].concat())
            .collect();
        Matrix::from_vec(rows.len(), self.dim(), rows.concat()).nullspace()
    }
}

/// `m₁ × m₂ × m₃` inside `A(g)`.
pub fn triple_subspace(m: [&Subspace; 3]) -> Subspace {
    let n = m[0].ambient();
    let mut vectors = Vec::new();
    for (slot, s) in m.iter().enumerate() {
        assert_eq!(s.ambient(), n, "triple components must share the ambient dimension");
        for v in s.vectors() {
            let mut w = vec![Scalar::zero(); 3 * n];
            w[slot * n..(slot + 1) * n].clone_from_slice(&v);
            vectors.push(w);
        }
    }
    Subspace::from_vectors(3 * n, vectors)
}

/// `½ [[0, −M₃, M₂], [M₃, 0, −M₁], [−M₂, M₁, 0]]`.
fn block_operator(m: &[Matrix; 3]) -> Matrix {
    let k = m[0].rows();
    let half = q(1, 2);
    let minus_half = q(-1, 2);
    let mut out = Matrix::zeros(3 * k, 3 * k);
    let blocks = [
        (0, 1, 2, &minus_half),
        (0, 2, 1, &half),
        (1, 0, 2, &half),
        (1, 2, 0, &minus_half),
        (2, 0, 1, &minus_half),
        (2, 1, 0, &half),
    ];
    for (r, c, which, s) in blocks {
        out.set_block(r * k, c * k, &m[which].scale(s));
    }
    out
}
