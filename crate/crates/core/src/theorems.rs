//! Runs every structural and dynamical property of `A(g)` that this crate
//! can check, for one base algebra.
//!
//! Each check carries the statement it verifies. Checks whose hypotheses
//! fail for the given algebra are reported as skipped with the reason.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::derivations::{
    aut_factorization, c_transpose, derivation_algebra, derivation_sending, diag_ad, expm, grading_automorphism,
    grading_matrix, is_automorphism, is_derivation, operator_basis, schur_centralizer, slot_action, so3_action,
    so3_generators, BlockOperator,
};
use crate::flow::{
    integrate, max_abs, monitor_confinement, monitor_decoupling, monitor_derivation_flow, monitor_gradient,
    monitor_monotone, monitor_transport, to_dmatrix, FloatNahm, FlowOptions, FlowStatus,
};
use crate::liealg::{defining_representation, LieAlgebra, Representation};
use crate::linalg::{q, unit_vec, zero_vec, Matrix, Scalar, Subspace};
use crate::nahm::{triple_subspace, NahmAlgebra, NahmElement};
use crate::special::{
    basis_idempotents, find_idempotent, is_idempotent, is_nilpotent, power_assoc_witness, random_start,
    satisfies_so3_relations, NewtonOptions,
};
use crate::structure::{
    ideal_closure_nahm, is_ideal_general, is_semisimple_nahm, is_simple_nahm, product_closure, projections_of_ideal,
    radical_nahm, subalgebra_generated,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    /// The statement being verified.
    pub statement: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremOptions {
    /// Seed for the sampled elements and Newton starts.
    pub seed: u64,
    /// Random samples per sampled property.
    pub samples: usize,
    /// Run the integrator-based checks.
    pub flow: bool,
}

impl Default for TheoremOptions {
    fn default() -> Self {
        TheoremOptions {
            seed: 0,
            samples: 10,
            flow: true,
        }
    }
}

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn verdict(ok: bool, detail: impl Into<String>) -> Outcome {
    if ok {
        Outcome::Pass(detail.into())
    } else {
        Outcome::Fail(detail.into())
    }
}

/// Shared data computed once per run.
struct Ctx {
    alg: NahmAlgebra,
    rng: ChaCha8Rng,
    samples: usize,
    rad: Subspace,
    der: Option<Subspace>,
    idempotents: Vec<NahmElement>,
    homs: Vec<Matrix>,
}

impl Ctx {
    fn g(&self) -> &LieAlgebra {
        self.alg.base()
    }

    fn n(&self) -> usize {
        self.alg.n()
    }

    fn rand_scalar(&mut self) -> Scalar {
        q(self.rng.random_range(-3..=3), self.rng.random_range(1..=3))
    }

    fn rand_vec(&mut self, len: usize) -> Vec<Scalar> {
        (0..len).map(|_| self.rand_scalar()).collect()
    }

    fn rand_element(&mut self) -> NahmElement {
        let v = self.rand_vec(self.alg.dim());
        NahmElement::from_coords(&v).expect("length 3n")
    }

    fn rand_f64(&mut self, len: usize, scale: f64) -> Vec<f64> {
        (0..len).map(|_| self.rng.random_range(-scale..=scale)).collect()
    }

    fn der(&mut self) -> Result<Subspace> {
        if self.der.is_none() {
            self.der = Some(derivation_algebra(&self.alg)?);
        }
        Ok(self.der.clone().expect("just computed"))
    }

    fn ideals(&self) -> Vec<(&'static str, Subspace)> {
        let n = self.n();
        let ads = self.g().ad_basis();
        let stacked = Matrix::from_vec(n * n, n, ads.iter().flat_map(|m| m.to_vec()).collect());
        vec![
            ("0", Subspace::zero(n)),
            ("g", Subspace::full(n)),
            ("[g,g]", self.g().derived_algebra()),
            ("rad g", self.rad.clone()),
            ("center", stacked.nullspace()),
        ]
    }

    fn flow_opts(&self, t_end: f64) -> FlowOptions {
        FlowOptions::with_t_end(t_end)
    }
}

/// Identity, zero, sign changes and cyclic shifts of the basis that are
/// Lie homomorphisms `g → g`.
fn endomorphism_candidates(g: &LieAlgebra) -> Vec<Matrix> {
    let n = g.dim();
    let mut cands = vec![Matrix::identity(n), Matrix::zeros(n, n)];
    if n <= 6 {
        for mask in 1..(1u32 << n) {
            let mut m = Matrix::identity(n);
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    m[(i, i)] = Scalar::from_int(-1);
                }
            }
            cands.push(m);
        }
    }
    let mut shift = Matrix::zeros(n, n);
    for i in 0..n {
        shift[((i + 1) % n, i)] = Scalar::one();
    }
    cands.push(shift);
    cands.into_iter().filter(|m| g.is_homomorphism_to(g, m)).collect()
}

fn gram_eval(gram: &Matrix, x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter()
        .zip(gram.mul_vec(y))
        .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * &b))
}

type CheckFn = fn(&mut Ctx) -> Result<Outcome>;

const CHECKS: &[(&str, &str, CheckFn)] = &[
    ("rref-idempotent", "rref(rref(M)) = rref(M)", rref_idempotent),
    ("rank-nullity", "rank M + dim ker M = cols M", rank_nullity),
    (
        "centralizer-commutes",
        "every centralizer element commutes with every input",
        centralizer_commutes,
    ),
    (
        "subspace-canonical-form",
        "equal subspaces have equal canonical bases",
        canonical_form,
    ),
    ("killing-invariance", "κ([x,y],z) = κ(x,[y,z])", killing_invariance),
    ("ad-representation", "ad[x,y] = [ad x, ad y]", ad_representation),
    (
        "radical-solvable-ideal",
        "rad g is an ideal with derived series ending at 0",
        radical_solvable_ideal,
    ),
    (
        "semisimple-iff-radical-zero",
        "g semisimple ⇔ rad g = 0",
        semisimple_iff_radical_zero,
    ),
    (
        "simple-ideal-closures",
        "g simple ⇒ the ideal generated by any v ≠ 0 is g",
        simple_ideal_closures,
    ),
    ("commutativity", "XY = YX", commutativity),
    ("left-mult-consistency", "L(X)Y = XY", left_mult_consistency),
    ("grading", "Δ·Δ = 0, Δ·W ⊆ W, W·W ⊆ Δ, A = Δ ⊕ W", grading),
    (
        "trace-form-identity",
        "tr(L_ρ(X)L_ρ(Y)) = −½ Σ B_ρ(xᵢ,yᵢ)",
        trace_form_identity,
    ),
    ("trace-form-invariance", "C_ρ(XY,Z) = C_ρ(X,YZ)", trace_form_invariance),
    ("lift-functoriality", "A(φ∘ψ) = A(φ)A(ψ)", lift_functoriality),
    (
        "delta-orthogonal-complement",
        "Δ(g)^⊥ = {Y : y₁+y₂+y₃ ∈ rad κ}, = W(g) iff κ nondegenerate",
        delta_complement,
    ),
    (
        "power-associativity-failure",
        "A(g) need not be fourth-power associative",
        power_associativity,
    ),
    ("ideals-lift", "𝔥 ideal of g ⇒ 𝔥×𝔥×𝔥 ideal of A(g)", ideals_lift),
    (
        "ideal-projections",
        "S ideal of A(g) ⇒ [g,𝔥ᵢ] ⊆ 𝔥ᵢ₊₁ ∩ 𝔥ᵢ₊₂",
        ideal_projections,
    ),
    (
        "generated-subalgebra",
        "⟨P⟩ contains P and is the least product-closed such subspace",
        generated_subalgebra,
    ),
    (
        "radical-transfer",
        "rad A(g) = A(rad g) and A(g)/rad is semisimple",
        radical_transfer,
    ),
    ("simplicity-transfer", "A(g) simple ⇔ g simple", simplicity_transfer),
    (
        "semisimplicity-transfer",
        "A(g) semisimple ⇔ g semisimple",
        semisimplicity_transfer,
    ),
    (
        "abelian-subalgebras-nilpotent",
        "every element of an abelian subalgebra squares to 0",
        abelian_nilpotent,
    ),
    (
        "idempotent-so3-triples",
        "E² = E ⇔ (e₁,e₂,e₃) is an independent so(3) triple",
        idempotent_triples,
    ),
    (
        "idempotent-homogeneity",
        "E² = E, a ∉ {0,1} ⇒ (aE)² ≠ aE",
        idempotent_homogeneity,
    ),
    (
        "newton-idempotents",
        "Newton limits are exact idempotents or reported approximate",
        newton_idempotents,
    ),
    (
        "derivations-lie-algebra",
        "Der A(g) is closed under commutators",
        derivations_lie_algebra,
    ),
    ("derivation-split", "T ∈ Der ⇒ T_diag, T_off ∈ Der", derivation_split),
    (
        "simple-derivations",
        "g simple ⇒ Der A(g) = diag(ad g) ⊕ so(3), centralizer of L is 1-dim",
        simple_derivations,
    ),
    (
        "derivations-c-skew",
        "diag(ad x) and so(3) actions are C-skew",
        derivations_c_skew,
    ),
    (
        "automorphism-closure",
        "products and inverses of automorphisms are automorphisms",
        automorphism_closure,
    ),
    (
        "grading-automorphism",
        "U = P_Δ − P_W ∈ SO(3) is an involutive automorphism, U = exp(G)",
        grading_auto,
    ),
    (
        "automorphism-factorization",
        "g simple ⇒ Aut A(g) = Aut(g) × SO(3)",
        automorphism_factorization,
    ),
    (
        "derivation-exponentials",
        "exp(sD) is an automorphism for D ∈ Der",
        derivation_exponentials,
    ),
    ("ray-solutions", "X(0) = aE ⇒ X(t) = aE/(1 − at)", ray_solutions),
    ("equilibria", "X(t) ≡ P ⇔ P² = 0", equilibria),
    ("confinement", "X(t;P) ∈ ⟨P⟩", confinement),
    ("gradient-flow", "X² = ∇φ(X) with φ = ⅓C(X,X²)", gradient_flow),
    (
        "monotone-potential",
        "compact A(g) ⇒ φ(X(t)) nondecreasing",
        monotone_potential,
    ),
    (
        "decoupling",
        "A(g₁⊕g₂) flow splits into A(g₁) and A(g₂) flows",
        decoupling,
    ),
    ("symmetry-transport", "F ∈ Aut ⇒ X(t;FP) = F X(t;P)", symmetry_transport),
    ("derivation-flow", "DP = P² ⇒ X(t;P) = e^{tD}P", derivation_flow),
];

const FLOW_CHECKS: &[&str] = &[
    "ray-solutions",
    "equilibria",
    "confinement",
    "gradient-flow",
    "monotone-potential",
    "decoupling",
    "symmetry-transport",
    "derivation-flow",
];

/// Number of checks a full run reports.
pub fn check_count() -> usize {
    CHECKS.len()
}

/// Runs every check in a fixed order. Failures inside a check (including
/// internal errors) are reported as failed checks, never as an `Err`.
pub fn check_theorems(g: &LieAlgebra, opts: &TheoremOptions) -> Result<Vec<Check>> {
    g.ensure_valid()?;
    let alg = NahmAlgebra::new(g.clone());
    let rad = g.radical()?;
    let homs = endomorphism_candidates(g);
    let mut idempotents = basis_idempotents(&alg);
    idempotents.truncate(3);
    let mut ctx = Ctx {
        alg,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        samples: opts.samples,
        rad,
        der: None,
        idempotents,
        homs,
    };
    let mut out = Vec::with_capacity(CHECKS.len());
    for (name, statement, f) in CHECKS {
        log::debug!("running {name}");
        let outcome = if !opts.flow && FLOW_CHECKS.contains(name) {
            Outcome::Skip("flow checks disabled".into())
        } else {
            match f(&mut ctx) {
                Ok(o) => o,
                Err(Error::Precondition(msg)) => Outcome::Skip(msg),
                Err(e) => Outcome::Fail(e.to_string()),
            }
        };
        let (status, detail) = match outcome {
            Outcome::Pass(d) => (Status::Pass, d),
            Outcome::Fail(d) => (Status::Fail, d),
            Outcome::Skip(d) => (Status::Skip, d),
        };
        out.push(Check {
            name,
            statement,
            status,
            detail,
        });
    }
    Ok(out)
}

fn test_matrices(ctx: &Ctx) -> Vec<Matrix> {
    let mut ms: Vec<Matrix> = ctx
        .alg
        .basis()
        .iter()
        .map(|b| ctx.alg.left_mult(b).expect("basis element"))
        .collect();
    ms.push(ctx.g().killing().gram().clone());
    ms.extend(ctx.g().ad_basis().iter().cloned());
    ms
}

fn rref_idempotent(ctx: &mut Ctx) -> Result<Outcome> {
    let ms = test_matrices(ctx);
    let ok = ms.iter().all(|m| {
        let r = m.rref();
        r.rref() == r
    });
    Ok(verdict(ok, format!("{} matrices", ms.len())))
}

fn rank_nullity(ctx: &mut Ctx) -> Result<Outcome> {
    let ms = test_matrices(ctx);
    let ok = ms.iter().all(|m| m.rank() + m.nullspace().dim() == m.cols());
    Ok(verdict(ok, format!("{} matrices", ms.len())))
}

fn centralizer_commutes(ctx: &mut Ctx) -> Result<Outcome> {
    let d = ctx.alg.dim();
    let cent = schur_centralizer(&ctx.alg);
    let ls: Vec<Matrix> = ctx
        .alg
        .basis()
        .iter()
        .map(|b| ctx.alg.left_mult(b).expect("basis"))
        .collect();
    let ok = cent.vectors().iter().all(|v| {
        let c = Matrix::from_vec(d, d, v.clone());
        ls.iter().all(|l| c.commutator(l).is_zero())
    });
    Ok(verdict(ok, format!("centralizer of L(A) has dim {}", cent.dim())))
}

fn canonical_form(ctx: &mut Ctx) -> Result<Outcome> {
    let d = ctx.alg.dim();
    let mut ok = true;
    for s in [ctx.alg.delta_subspace(), ctx.alg.w_subspace(), ctx.rad.clone()] {
        let amb = s.ambient();
        let vs = s.vectors();
        // random invertible recombination of the basis, plus a redundant vector
        let mut mixed: Vec<Vec<Scalar>> = Vec::new();
        for (i, v) in vs.iter().enumerate() {
            let mut w = v.clone();
            for u in &vs[..i] {
                let c = ctx.rand_scalar();
                w = crate::linalg::add_vec(&w, &crate::linalg::scale_vec(&c, u));
            }
            mixed.push(crate::linalg::scale_vec(&Scalar::from_int(i as i64 + 2), &w));
        }
        if let Some(first) = vs.first() {
            mixed.push(first.clone());
        }
        ok &= Subspace::from_vectors(amb, mixed) == s;
    }
    ok &= Subspace::full(d) == ctx.alg.delta_subspace().join(&ctx.alg.w_subspace());
    Ok(verdict(ok, "Δ, W and rad g rebuilt from recombined spanning sets"))
}

fn killing_invariance(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.g();
    let n = g.dim();
    let k = g.killing();
    let e: Vec<Vec<Scalar>> = (0..n).map(|i| unit_vec(n, i)).collect();
    let mut failures = 0;
    for x in &e {
        for y in &e {
            for z in &e {
                if k.eval(&g.bracket_unchecked(x, y), z) != k.eval(x, &g.bracket_unchecked(y, z)) {
                    failures += 1;
                }
            }
        }
    }
    Ok(verdict(
        failures == 0,
        format!("{} basis triples, {failures} failures", n * n * n),
    ))
}

fn ad_representation(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.g();
    let n = g.dim();
    let ads = g.ad_basis();
    let mut ok = true;
    for i in 0..n {
        for j in 0..n {
            let b = g.bracket_unchecked(&unit_vec(n, i), &unit_vec(n, j));
            ok &= g.ad(&b)? == ads[i].commutator(&ads[j]);
        }
    }
    Ok(verdict(ok, format!("{} basis pairs", n * n)))
}

fn radical_solvable_ideal(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.g();
    let ideal = g.is_ideal(&ctx.rad);
    let (series, solvable) = g.derived_series_of(&ctx.rad);
    let dims: Vec<String> = series.iter().map(|s| s.dim().to_string()).collect();
    Ok(verdict(
        ideal && solvable,
        format!(
            "dim rad g = {}, derived series dims {}",
            ctx.rad.dim(),
            dims.join(" > ")
        ),
    ))
}

fn semisimple_iff_radical_zero(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.g();
    let ss = g.is_semisimple();
    Ok(verdict(
        ss == ctx.rad.is_zero(),
        format!("semisimple {ss}, dim rad g = {}", ctx.rad.dim()),
    ))
}

fn simple_ideal_closures(ctx: &mut Ctx) -> Result<Outcome> {
    if !ctx.g().is_simple() {
        return Ok(Outcome::Skip("g is not simple".into()));
    }
    let n = ctx.n();
    let mut tried = 0;
    for _ in 0..ctx.samples {
        let v = ctx.rand_vec(n);
        if v.iter().all(Scalar::is_zero) {
            continue;
        }
        tried += 1;
        if !ctx.g().ideal_closure(&[v]).is_full() {
            return Ok(Outcome::Fail("a proper ideal was generated".into()));
        }
    }
    Ok(Outcome::Pass(format!("{tried} random nonzero vectors")))
}

fn commutativity(ctx: &mut Ctx) -> Result<Outcome> {
    let basis = ctx.alg.basis();
    let mut ok = basis
        .iter()
        .all(|x| basis.iter().all(|y| ctx.alg.mul(x, y) == ctx.alg.mul(y, x)));
    for _ in 0..ctx.samples {
        let (x, y) = (ctx.rand_element(), ctx.rand_element());
        ok &= ctx.alg.mul(&x, &y) == ctx.alg.mul(&y, &x);
    }
    Ok(verdict(
        ok,
        format!("{} basis pairs and {} random pairs", basis.len().pow(2), ctx.samples),
    ))
}

fn left_mult_consistency(ctx: &mut Ctx) -> Result<Outcome> {
    let basis = ctx.alg.basis();
    let mut ok = true;
    for x in &basis {
        let l = ctx.alg.left_mult(x)?;
        for y in &basis {
            ok &= l.mul_vec(&y.coords()) == ctx.alg.mul(x, y).coords();
        }
    }
    Ok(verdict(ok, format!("{} basis pairs", basis.len().pow(2))))
}

fn grading(ctx: &mut Ctx) -> Result<Outcome> {
    let r = ctx.alg.grading_check();
    let detail = if r.witnesses.is_empty() {
        "all basis products".to_string()
    } else {
        r.witnesses.join("; ")
    };
    Ok(verdict(r.pass(), detail))
}

fn representations(g: &LieAlgebra) -> Vec<(&'static str, Representation)> {
    let mut reps = vec![("adjoint", Representation::adjoint(g))];
    if let Ok(d) = defining_representation(g) {
        reps.push(("defining", d));
    }
    reps
}

fn trace_form_identity(ctx: &mut Ctx) -> Result<Outcome> {
    let reps = representations(ctx.g());
    let mut names = Vec::new();
    for (name, rep) in &reps {
        ctx.alg.trace_form_nahm(rep)?;
        names.push(*name);
    }
    Ok(Outcome::Pass(format!("representations: {}", names.join(", "))))
}

fn trace_form_invariance(ctx: &mut Ctx) -> Result<Outcome> {
    let basis = ctx.alg.basis();
    let mut names = Vec::new();
    let mut ok = true;
    for (name, rep) in representations(ctx.g()) {
        let gram = ctx.alg.trace_form_nahm(&rep)?.gram().clone();
        for x in &basis {
            for y in &basis {
                let xy = ctx.alg.mul(x, y).coords();
                for z in &basis {
                    let yz = ctx.alg.mul(y, z).coords();
                    ok &= gram_eval(&gram, &xy, &z.coords()) == gram_eval(&gram, &x.coords(), &yz);
                }
            }
        }
        names.push(name);
    }
    Ok(verdict(
        ok,
        format!("{} basis triples for {}", basis.len().pow(3), names.join(", ")),
    ))
}

fn lift_functoriality(ctx: &mut Ctx) -> Result<Outcome> {
    let g = ctx.g().clone();
    let homs: Vec<Matrix> = ctx.homs.iter().take(8).cloned().collect();
    let mut pairs = 0;
    for phi in &homs {
        for psi in &homs {
            let comp = phi.mul(psi);
            let lhs = ctx.alg.lift_hom(&g, &comp)?;
            let rhs = ctx.alg.lift_hom(&g, phi)?.mul(&ctx.alg.lift_hom(&g, psi)?);
            if lhs != rhs {
                return Ok(Outcome::Fail("A(φ∘ψ) differs from A(φ)A(ψ)".into()));
            }
            pairs += 1;
        }
    }
    Ok(Outcome::Pass(format!("{pairs} composable pairs of endomorphisms")))
}

fn delta_complement(ctx: &mut Ctx) -> Result<Outcome> {
    let comp = ctx.alg.delta_orthogonal_complement();
    let w_rad = ctx.alg.w_rad();
    let nondeg = ctx.g().killing().is_nondegenerate();
    let equals_w = w_rad == ctx.alg.w_subspace();
    Ok(verdict(
        comp == w_rad && equals_w == nondeg,
        format!("dim Δ^⊥ = {}, equals W: {equals_w}", comp.dim()),
    ))
}

fn power_associativity(ctx: &mut Ctx) -> Result<Outcome> {
    match power_assoc_witness(&ctx.alg) {
        None => Ok(Outcome::Skip("no witness among basis vectors and their sums".into())),
        Some(w) => {
            let sq = ctx.alg.square(&w.x);
            let left = ctx.alg.mul(&ctx.alg.mul(&sq, &w.x), &w.x);
            let right = ctx.alg.square(&sq);
            Ok(verdict(
                left == w.left && right == w.right && left != right,
                format!("X = {}: ((X²)X)X = {}, (X²)(X²) = {}", w.x, w.left, w.right),
            ))
        }
    }
}

fn ideals_lift(ctx: &mut Ctx) -> Result<Outcome> {
    let mut names = Vec::new();
    for (name, h) in ctx.ideals() {
        if !ctx.g().is_ideal(&h) {
            return Err(Error::Inconsistent(format!("{name} is not an ideal of g")));
        }
        if !is_ideal_general(&ctx.alg, &triple_subspace([&h, &h, &h])) {
            return Ok(Outcome::Fail(format!("A({name}) is not an ideal")));
        }
        names.push(name);
    }
    Ok(Outcome::Pass(format!("ideals {}", names.join(", "))))
}

fn ideal_projections(ctx: &mut Ctx) -> Result<Outcome> {
    let mut ideals: Vec<Subspace> = ctx
        .ideals()
        .into_iter()
        .map(|(_, h)| triple_subspace([&h, &h, &h]))
        .collect();
    ideals.push(radical_nahm(&ctx.alg)?);
    for _ in 0..3 {
        let x = ctx.rand_element();
        ideals.push(ideal_closure_nahm(
            &ctx.alg,
            &Subspace::from_vectors(ctx.alg.dim(), [x.coords()]),
        ));
    }
    for s in &ideals {
        let p = projections_of_ideal(&ctx.alg, s)?;
        if !p.inclusions_hold || !p.intersection_is_ideal {
            return Ok(Outcome::Fail(format!(
                "ideal of dim {} violates the inclusions",
                s.dim()
            )));
        }
    }
    Ok(Outcome::Pass(format!("{} ideals of A(g)", ideals.len())))
}

fn test_points(ctx: &mut Ctx) -> Vec<NahmElement> {
    let n = ctx.n();
    let mut pts = ctx.idempotents.iter().take(1).cloned().collect::<Vec<_>>();
    if n >= 2 {
        pts.push(NahmElement::new(unit_vec(n, 0), unit_vec(n, 1), zero_vec(n)).expect("lengths"));
    }
    pts.push(ctx.rand_element());
    pts
}

fn generated_subalgebra(ctx: &mut Ctx) -> Result<Outcome> {
    let pts = test_points(ctx);
    for p in &pts {
        let gen = subalgebra_generated(&ctx.alg, p)?;
        let closed = product_closure(&ctx.alg, &gen.closure) == gen.closure;
        let least = product_closure(&ctx.alg, &Subspace::from_vectors(ctx.alg.dim(), [p.coords()])) == gen.closure;
        if !gen.closure.contains(&p.coords()) || !gen.closure.contains_subspace(&gen.powers) || !closed || !least {
            return Ok(Outcome::Fail(format!(
                "closure of {p} is not the least closed subspace"
            )));
        }
    }
    Ok(Outcome::Pass(format!("{} starting elements", pts.len())))
}

fn radical_transfer(ctx: &mut Ctx) -> Result<Outcome> {
    let rad_a = radical_nahm(&ctx.alg)?;
    let lifted = triple_subspace([&ctx.rad, &ctx.rad, &ctx.rad]);
    if rad_a != lifted {
        return Ok(Outcome::Fail("rad A(g) differs from A(rad g)".into()));
    }
    if ctx.rad.is_full() {
        return Ok(Outcome::Pass("g is solvable, so A(g)/rad = 0".into()));
    }
    let (quot, _) = ctx.g().quotient(&ctx.rad)?;
    let ss = is_semisimple_nahm(&NahmAlgebra::new(quot.clone()))?;
    Ok(verdict(
        ss,
        format!(
            "dim rad A(g) = {}, quotient of dim {} semisimple: {ss}",
            rad_a.dim(),
            quot.dim()
        ),
    ))
}

fn simplicity_transfer(ctx: &mut Ctx) -> Result<Outcome> {
    let a = is_simple_nahm(&ctx.alg).simple;
    let b = ctx.g().is_simple();
    Ok(verdict(a == b, format!("A(g) simple {a}, g simple {b}")))
}

fn semisimplicity_transfer(ctx: &mut Ctx) -> Result<Outcome> {
    let a = is_semisimple_nahm(&ctx.alg)?;
    let b = ctx.g().is_semisimple();
    Ok(verdict(a == b, format!("A(g) semisimple {a}, g semisimple {b}")))
}

fn abelian_nilpotent(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.n();
    let mut elems: Vec<NahmElement> = (0..n).map(|i| NahmElement::delta(&unit_vec(n, i))).collect();
    for _ in 0..ctx.samples {
        let x = ctx.rand_vec(n);
        elems.push(NahmElement::delta(&x));
    }
    let mut triples = 0;
    for i in 0..n {
        for j in i..n {
            let (a, b) = (unit_vec(n, i), unit_vec(n, j));
            if !ctx.g().bracket_unchecked(&a, &b).iter().all(Scalar::is_zero) {
                continue;
            }
            let c = crate::linalg::add_vec(&a, &b);
            let s = ctx.rand_scalar();
            elems.push(NahmElement::new(a.clone(), crate::linalg::scale_vec(&s, &b), c)?);
            triples += 1;
        }
    }
    for x in &elems {
        let r = is_nilpotent(&ctx.alg, x)?;
        if !(r.nilpotent && r.components_commute && r.abelian_span) {
            return Ok(Outcome::Fail(format!("{x} is not nilpotent")));
        }
    }
    Ok(Outcome::Pass(format!(
        "{} elements of Δ(g) and {triples} commuting triples",
        n + ctx.samples
    )))
}

fn idempotent_triples(ctx: &mut Ctx) -> Result<Outcome> {
    if ctx.idempotents.is_empty() {
        return Ok(Outcome::Skip("no so(3) triple among the basis vectors".into()));
    }
    for e in &ctx.idempotents {
        // is_idempotent errors if the components are dependent
        if !is_idempotent(&ctx.alg, e)? || !satisfies_so3_relations(ctx.g(), e) {
            return Ok(Outcome::Fail(format!("{e} fails the so(3) relations")));
        }
    }
    Ok(Outcome::Pass(format!(
        "{} idempotents, e.g. {}",
        ctx.idempotents.len(),
        ctx.idempotents[0]
    )))
}

fn idempotent_homogeneity(ctx: &mut Ctx) -> Result<Outcome> {
    if ctx.idempotents.is_empty() {
        return Ok(Outcome::Skip("no exact idempotent available".into()));
    }
    let scalars = [Scalar::from_int(-1), q(1, 2), Scalar::from_int(2), Scalar::from_int(3)];
    for e in &ctx.idempotents {
        for a in &scalars {
            if is_idempotent(&ctx.alg, &e.scale(a))? {
                return Ok(Outcome::Fail(format!("{a}·{e} is idempotent")));
            }
        }
    }
    Ok(Outcome::Pass("a ∈ {-1, 1/2, 2, 3}".into()))
}

fn newton_idempotents(ctx: &mut Ctx) -> Result<Outcome> {
    let d = ctx.alg.dim();
    let opts = NewtonOptions::default();
    let mut starts: Vec<Vec<f64>> = ctx
        .idempotents
        .iter()
        .take(1)
        .map(|e| e.to_f64().iter().map(|v| 1.1 * v).collect())
        .collect();
    for k in 0..3 {
        let seed = ctx.rng.random::<u64>() ^ k;
        starts.push(random_start(d, seed));
    }
    let (mut exact, mut approx) = (0, 0);
    for s in &starts {
        let Ok(r) = find_idempotent(&ctx.alg, s, &opts) else {
            continue;
        };
        if r.residual > opts.tol {
            return Ok(Outcome::Fail("reported success above tolerance".into()));
        }
        match &r.exact {
            Some(e) if is_idempotent(&ctx.alg, e)? && satisfies_so3_relations(ctx.g(), e) => exact += 1,
            Some(e) => return Ok(Outcome::Fail(format!("exactified {e} is not idempotent"))),
            None => approx += 1,
        }
    }
    if exact + approx == 0 {
        return Ok(Outcome::Skip(format!(
            "none of {} Newton starts converged",
            starts.len()
        )));
    }
    Ok(Outcome::Pass(format!(
        "{} starts: {exact} exact, {approx} approximate-only",
        starts.len()
    )))
}

fn derivations_lie_algebra(ctx: &mut Ctx) -> Result<Outcome> {
    let der = ctx.der()?;
    let ops = operator_basis(&ctx.alg, &der);
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            let c = a.commutator(b);
            if !is_derivation(&ctx.alg, &c) || !der.contains(&c.to_vec()) {
                return Ok(Outcome::Fail("a commutator of derivations left Der".into()));
            }
        }
    }
    Ok(Outcome::Pass(format!("dim Der A(g) = {}", der.dim())))
}

fn derivation_split(ctx: &mut Ctx) -> Result<Outcome> {
    let der = ctx.der()?;
    let n = ctx.n();
    for t in operator_basis(&ctx.alg, &der) {
        let b = BlockOperator::new(n, t)?;
        if !is_derivation(&ctx.alg, &b.diag_part()) || !is_derivation(&ctx.alg, &b.off_part()) {
            return Ok(Outcome::Fail("a derivation splits into non-derivations".into()));
        }
    }
    Ok(Outcome::Pass(format!("{} basis derivations", der.dim())))
}

fn simple_derivations(ctx: &mut Ctx) -> Result<Outcome> {
    if !is_simple_nahm(&ctx.alg).simple {
        return Ok(Outcome::Skip("A(g) is not simple".into()));
    }
    let der = ctx.der()?;
    let expected = crate::derivations::expected_derivations(&ctx.alg);
    let schur = schur_centralizer(&ctx.alg).dim();
    Ok(verdict(
        der == expected && der.dim() == ctx.n() + 3 && schur == 1,
        format!(
            "dim Der = {} (dim g + 3 = {}), centralizer dim {schur}",
            der.dim(),
            ctx.n() + 3
        ),
    ))
}

fn derivations_c_skew(ctx: &mut Ctx) -> Result<Outcome> {
    if !ctx.alg.standard_form().is_nondegenerate() {
        return Ok(Outcome::Skip("standard form is degenerate".into()));
    }
    let n = ctx.n();
    let mut ts: Vec<Matrix> = (0..n)
        .map(|i| diag_ad(&ctx.alg, &unit_vec(n, i)))
        .collect::<Result<_>>()?;
    for m in so3_generators() {
        ts.push(so3_action(&ctx.alg, &m)?);
    }
    for t in &ts {
        if !t.add(&c_transpose(&ctx.alg, t)?).is_zero() {
            return Ok(Outcome::Fail("T + Tᶜ ≠ 0".into()));
        }
    }
    Ok(Outcome::Pass(format!("{} operators", ts.len())))
}

fn cyclic3() -> Matrix {
    Matrix::from_ints(&[[0, 0, 1], [1, 0, 0], [0, 1, 0]])
}

fn test_automorphisms(ctx: &Ctx) -> Result<Vec<Matrix>> {
    let mut auts = vec![
        slot_action(&ctx.alg, &grading_matrix())?,
        slot_action(&ctx.alg, &cyclic3())?,
    ];
    for phi in ctx
        .homs
        .iter()
        .filter(|m| !m.is_identity() && ctx.g().is_automorphism(m))
        .take(2)
    {
        auts.push(Matrix::block_diagonal(&[phi, phi, phi]));
    }
    Ok(auts)
}

fn automorphism_closure(ctx: &mut Ctx) -> Result<Outcome> {
    let auts = test_automorphisms(ctx)?;
    if let Some(bad) = auts.iter().position(|f| !is_automorphism(&ctx.alg, f)) {
        return Err(Error::Inconsistent(format!("test map {bad} is not an automorphism")));
    }
    for f in &auts {
        let inv = f.inverse().expect("automorphism");
        if !is_automorphism(&ctx.alg, &inv) {
            return Ok(Outcome::Fail("inverse is not an automorphism".into()));
        }
        for h in &auts {
            if !is_automorphism(&ctx.alg, &f.mul(h)) {
                return Ok(Outcome::Fail("product is not an automorphism".into()));
            }
        }
    }
    Ok(Outcome::Pass(format!(
        "{} automorphisms, all products and inverses",
        auts.len()
    )))
}

fn grading_auto(ctx: &mut Ctx) -> Result<Outcome> {
    let r = grading_automorphism(&ctx.alg);
    Ok(verdict(r.pass(1e-12), format!("‖exp(G) − U‖∞ = {:.3e}", r.exp_error)))
}

fn automorphism_factorization(ctx: &mut Ctx) -> Result<Outcome> {
    if !is_simple_nahm(&ctx.alg).simple {
        return Ok(Outcome::Skip("A(g) is not simple".into()));
    }
    let n = ctx.n();
    let phi = ctx
        .homs
        .iter()
        .find(|m| !m.is_identity() && ctx.g().is_automorphism(m))
        .cloned()
        .unwrap_or_else(|| Matrix::identity(n));
    let u = grading_matrix();
    let diag = Matrix::block_diagonal(&[&phi, &phi, &phi]);
    let r_part = slot_action(&ctx.alg, &u)?;
    let cases = [
        (Matrix::identity(n), u.clone(), r_part.clone()),
        (phi.clone(), Matrix::identity(3), diag.clone()),
        (phi.clone(), u.clone(), diag.mul(&r_part)),
    ];
    for (phi, r, f) in &cases {
        let fac = aut_factorization(&ctx.alg, f)?;
        if fac.phi != *phi || fac.r != *r {
            return Ok(Outcome::Fail("recovered (φ, R) differs from the construction".into()));
        }
    }
    Ok(Outcome::Pass(format!("{} constructed automorphisms", cases.len())))
}

fn derivation_exponentials(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.n();
    let f = FloatNahm::new(&ctx.alg);
    let d = f.dim();
    let mut ds: Vec<Matrix> = (0..n)
        .map(|i| diag_ad(&ctx.alg, &unit_vec(n, i)))
        .collect::<Result<_>>()?;
    for m in so3_generators() {
        ds.push(so3_action(&ctx.alg, &m)?);
    }
    let basis: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            let mut v = vec![0.0; d];
            v[i] = 1.0;
            v
        })
        .collect();
    let mut worst = 0.0_f64;
    for dm in &ds {
        for s in [0.3, -0.7] {
            let e: DMatrix<f64> = expm(&(to_dmatrix(dm) * s));
            let scale = e.amax().max(1.0).powi(2);
            let apply =
                |v: &[f64]| -> Vec<f64> { (&e * nalgebra::DVector::from_column_slice(v)).iter().copied().collect() };
            let images: Vec<Vec<f64>> = basis.iter().map(|b| apply(b)).collect();
            for i in 0..d {
                for j in i..d {
                    let lhs = apply(&f.mul(&basis[i], &basis[j]));
                    let rhs = f.mul(&images[i], &images[j]);
                    let dev = lhs.iter().zip(&rhs).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
                    worst = worst.max(dev / scale);
                }
            }
        }
    }
    Ok(verdict(
        worst <= 1e-12,
        format!(
            "{} derivations, s ∈ {{0.3, -0.7}}, max scaled residual {worst:.3e}",
            ds.len()
        ),
    ))
}

fn ray_solutions(ctx: &mut Ctx) -> Result<Outcome> {
    let Some(e) = ctx.idempotents.first() else {
        return Ok(Outcome::Skip("no exact idempotent available".into()));
    };
    let ef = e.to_f64();
    let mut worst = 0.0_f64;
    for a in [1.0, -1.0, 0.5] {
        let t_end = if a > 0.0 { 2.0 / a } else { 5.0 };
        let p: Vec<f64> = ef.iter().map(|v| a * v).collect();
        let traj = integrate(&ctx.alg, &p, &ctx.flow_opts(t_end))?;
        for (t, x) in traj.times.iter().zip(&traj.states) {
            if max_abs(x) > 1e3 {
                break;
            }
            let c = a / (1.0 - a * t);
            let exact: Vec<f64> = ef.iter().map(|v| c * v).collect();
            let dev = x.iter().zip(&exact).fold(0.0_f64, |m, (u, v)| m.max((u - v).abs()));
            worst = worst.max(dev / max_abs(&exact));
        }
    }
    Ok(verdict(
        worst <= 1e-6,
        format!("a ∈ {{1, -1, 1/2}}, max relative error {worst:.3e}"),
    ))
}

fn equilibria(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.n();
    let f = FloatNahm::new(&ctx.alg);
    let opts = ctx.flow_opts(10.0);
    let mut pts: Vec<Vec<f64>> = vec![NahmElement::delta(&unit_vec(n, 0)).to_f64(), vec![0.0; 3 * n]];
    let x = ctx.rand_vec(n);
    pts.push(NahmElement::delta(&x).to_f64());
    let r = ctx.rand_f64(3 * n, 0.2);
    pts.push(r);
    let mut drift = 0.0_f64;
    for p in &pts {
        let short = FlowOptions {
            t_end: 0.5,
            ..opts.clone()
        };
        let is_nil = max_abs(&f.square(p)) < opts.abs_tol;
        let traj = integrate(&ctx.alg, p, if is_nil { &opts } else { &short })?;
        let eq = traj.status == FlowStatus::Equilibrium;
        if eq != is_nil {
            return Ok(Outcome::Fail(format!(
                "status {} with ‖P²‖∞ = {:.3e}",
                traj.status.label(),
                max_abs(&f.square(p))
            )));
        }
        if eq {
            for s in &traj.states {
                drift = drift.max(s.iter().zip(p).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())));
            }
        }
    }
    Ok(verdict(
        drift <= 1e-9,
        format!(
            "{} initial states, max equilibrium drift {drift:.3e} on [0, 10]",
            pts.len()
        ),
    ))
}

fn confinement(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.n();
    let mut pts = vec![NahmElement::delta(&unit_vec(n, 0)).to_f64()];
    pts.extend(test_points(ctx).iter().take(2).map(NahmElement::to_f64));
    let mut worst = 0.0_f64;
    for p in &pts {
        let traj = integrate(&ctx.alg, p, &ctx.flow_opts(0.5))?;
        worst = worst.max(monitor_confinement(&ctx.alg, &traj, p, 1e3)?);
    }
    Ok(verdict(
        worst <= 1e-6,
        format!("{} initial states, max residual {worst:.3e}", pts.len()),
    ))
}

fn gradient_flow(ctx: &mut Ctx) -> Result<Outcome> {
    if !ctx.alg.standard_form().is_nondegenerate() {
        return Ok(Outcome::Skip("standard form is degenerate".into()));
    }
    let d = ctx.alg.dim();
    let mut worst = 0.0_f64;
    for _ in 0..ctx.samples {
        let x = ctx.rand_f64(d, 1.0);
        worst = worst.max(monitor_gradient(&ctx.alg, &x, 1e-5)?);
    }
    Ok(verdict(
        worst <= 1e-8,
        format!("{} random points, max residual {worst:.3e}", ctx.samples),
    ))
}

fn monotone_potential(ctx: &mut Ctx) -> Result<Outcome> {
    if !ctx.g().is_semisimple() || !ctx.alg.is_compact()? {
        return Ok(Outcome::Skip("A(g) is not compact".into()));
    }
    let d = ctx.alg.dim();
    let mut pts: Vec<Vec<f64>> = ctx.idempotents.iter().take(1).map(NahmElement::to_f64).collect();
    pts.push(ctx.rand_f64(d, 0.5));
    let mut worst = 0.0_f64;
    for p in &pts {
        let opts = ctx.flow_opts(0.9);
        let traj = integrate(&ctx.alg, p, &opts)?;
        let r = monitor_monotone(&ctx.alg, &traj, opts.abs_tol)?;
        if !r.monotone {
            return Ok(Outcome::Fail(format!("potential dropped by {:.3e}", r.max_decrease)));
        }
        worst = worst.max(r.max_decrease);
    }
    Ok(Outcome::Pass(format!(
        "{} trajectories, max drop {worst:.3e}",
        pts.len()
    )))
}

fn decoupling(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.n();
    let p1 = match ctx.idempotents.first() {
        Some(e) => e.to_f64(),
        None => ctx.rand_f64(3 * n, 0.5),
    };
    let p2 = NahmElement::delta(&unit_vec(n, 0)).to_f64();
    let g = ctx.g().clone();
    let dev = monitor_decoupling(&g, &g, &p1, &p2, &ctx.flow_opts(0.5))?;
    Ok(verdict(
        dev <= 1e-6,
        format!("g ⊕ g on [0, 0.5], max deviation {dev:.3e}"),
    ))
}

fn symmetry_transport(ctx: &mut Ctx) -> Result<Outcome> {
    let auts = test_automorphisms(ctx)?;
    let opts = ctx.flow_opts(0.5);
    let tol = 10.0 * opts.rel_tol;
    let p = ctx.rand_f64(ctx.alg.dim(), 0.5);
    let mut worst = 0.0_f64;
    for f in &auts {
        worst = worst.max(monitor_transport(&ctx.alg, f, &p, &opts)?);
    }
    Ok(verdict(
        worst <= tol,
        format!("{} automorphisms on [0, 0.5], max deviation {worst:.3e}", auts.len()),
    ))
}

fn derivation_flow(ctx: &mut Ctx) -> Result<Outcome> {
    let n = ctx.n();
    let diag = Subspace::from_vectors(
        ctx.alg.dim().pow(2),
        (0..n).map(|i| diag_ad(&ctx.alg, &unit_vec(n, i)).expect("basis").to_vec()),
    );
    let der = ctx.der()?;
    // every element whose slots are basis vectors or zero
    let choices: Vec<Vec<Scalar>> = std::iter::once(zero_vec(n))
        .chain((0..n).map(|i| unit_vec(n, i)))
        .collect();
    let mut pts = Vec::new();
    for a in &choices {
        for b in &choices {
            for c in &choices {
                pts.push(NahmElement::new(a.clone(), b.clone(), c.clone())?);
            }
        }
    }
    for (space, label) in [(&diag, "diag(ad x)"), (&der, "Der A(g)")] {
        for p in &pts {
            let sq = ctx.alg.square(p);
            if sq.is_zero() {
                continue;
            }
            if let Some(d) = derivation_sending(&ctx.alg, space, &p.coords(), &sq.coords()) {
                let dev = monitor_derivation_flow(&ctx.alg, &d, &p.to_f64(), &ctx.flow_opts(0.5))?;
                return Ok(verdict(
                    dev <= 1e-8,
                    format!("D ∈ {label} with DP = P² for P = {p}, max deviation {dev:.3e}"),
                ));
            }
        }
    }
    Ok(Outcome::Skip(
        "no test element P admits a derivation with DP = P²; derivation-exponentials covers this case".into(),
    ))
}
