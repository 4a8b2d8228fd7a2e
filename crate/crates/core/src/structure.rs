//! Subalgebras, ideals, simplicity and the radical of `A(g)`.
//!
//! General ideals and subalgebras of `A(g)` are plain subspaces of the
//! `3n`-dimensional coordinate space. Products `𝔪₁ × 𝔪₂ × 𝔪₃` get their own
//! type because their closure properties reduce to bracket inclusions in `g`,
//! but not every subalgebra of `A(g)` has that shape.

use crate::liealg::LieAlgebra;
use crate::linalg::{Matrix, Scalar, Subspace};
use crate::nahm::{triple_subspace, NahmAlgebra, NahmElement};
use crate::{Error, Result};

/// `𝔪₁ × 𝔪₂ × 𝔪₃`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleSubspace {
    pub m: [Subspace; 3],
}

impl TripleSubspace {
    pub fn new(m1: Subspace, m2: Subspace, m3: Subspace) -> Result<Self> {
        if m1.ambient() != m2.ambient() || m2.ambient() != m3.ambient() {
            return Err(Error::Dimension("triple components live in different spaces".into()));
        }
        Ok(TripleSubspace { m: [m1, m2, m3] })
    }

    /// `(𝔥, 𝔥, 𝔥)`.
    pub fn diagonal(h: &Subspace) -> Self {
        TripleSubspace {
            m: [h.clone(), h.clone(), h.clone()],
        }
    }

    pub fn to_subspace(&self) -> Subspace {
        triple_subspace([&self.m[0], &self.m[1], &self.m[2]])
    }
}

/// Whether every product of a vector of `a` with a vector of `b` lies in `target`.
fn products_within(alg: &NahmAlgebra, a: &Subspace, b: &Subspace, target: &Subspace) -> bool {
    let bv = b.vectors();
    a.vectors()
        .iter()
        .all(|x| bv.iter().all(|y| target.contains(&alg.mul_coords(x, y))))
}

/// `[𝔪ᵢ, 𝔪ᵢ₊₁] ⊆ 𝔪ᵢ₊₂` for all `i`, cross-checked against product closure
/// of the span in `A(g)`.
pub fn is_subalgebra_triple(alg: &NahmAlgebra, t: &TripleSubspace) -> Result<bool> {
    let g = alg.base();
    let m = &t.m;
    let by_brackets = (0..3).all(|i| m[(i + 2) % 3].contains_subspace(&g.bracket_span(&m[i], &m[(i + 1) % 3])));
    let span = t.to_subspace();
    let by_products = products_within(alg, &span, &span, &span);
    if by_brackets != by_products {
        return Err(Error::Inconsistent(format!(
            "triple subalgebra test: bracket criterion {by_brackets}, product closure {by_products}"
        )));
    }
    Ok(by_brackets)
}

/// `[g, 𝔥ᵢ] ⊆ 𝔥ᵢ₊₁ ∩ 𝔥ᵢ₊₂` for all `i`, cross-checked against
/// [`is_ideal_general`].
pub fn is_ideal_triple(alg: &NahmAlgebra, t: &TripleSubspace) -> Result<bool> {
    let g = alg.base();
    let full = Subspace::full(g.dim());
    let h = &t.m;
    let by_brackets = (0..3).all(|i| {
        let image = g.bracket_span(&full, &h[i]);
        h[(i + 1) % 3].contains_subspace(&image) && h[(i + 2) % 3].contains_subspace(&image)
    });
    let by_products = is_ideal_general(alg, &t.to_subspace());
    if by_brackets != by_products {
        return Err(Error::Inconsistent(format!(
            "triple ideal test: bracket criterion {by_brackets}, product closure {by_products}"
        )));
    }
    Ok(by_brackets)
}

/// `A·S ⊆ S`, checked on basis pairs (commutativity covers `S·A`).
pub fn is_ideal_general(alg: &NahmAlgebra, s: &Subspace) -> bool {
    s.vectors().iter().all(|v| {
        let l = alg
            .left_mult(&NahmElement::from_coords(v).expect("3n coordinates"))
            .expect("matching dimension");
        (0..alg.dim()).all(|j| s.contains(&l.column(j)))
    })
}

/// Projections `𝔥ᵢ = πᵢ(S)` of an ideal together with the inclusion checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealProjections {
    pub h: [Subspace; 3],
    /// `[g, 𝔥ᵢ] ⊆ 𝔥ᵢ₊₁ ∩ 𝔥ᵢ₊₂` for all `i`.
    pub inclusions_hold: bool,
    pub intersection: Subspace,
    pub intersection_is_ideal: bool,
}

pub fn projections_of_ideal(alg: &NahmAlgebra, s: &Subspace) -> Result<IdealProjections> {
    if !is_ideal_general(alg, s) {
        return Err(Error::Precondition("subspace is not an ideal of A(g)".into()));
    }
    let g = alg.base();
    let n = g.dim();
    let h: [Subspace; 3] = std::array::from_fn(|i| {
        Subspace::from_vectors(n, s.vectors().into_iter().map(|v| v[i * n..(i + 1) * n].to_vec()))
    });
    let full = Subspace::full(n);
    let inclusions_hold = (0..3).all(|i| {
        let image = g.bracket_span(&full, &h[i]);
        h[(i + 1) % 3].contains_subspace(&image) && h[(i + 2) % 3].contains_subspace(&image)
    });
    let intersection = h[0].intersection(&h[1]).intersection(&h[2]);
    let intersection_is_ideal = g.is_ideal(&intersection);
    Ok(IdealProjections {
        h,
        inclusions_hold,
        intersection,
        intersection_is_ideal,
    })
}

/// The subalgebra generated by one element, two ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedSubalgebra {
    /// Span of the principal powers `P, P², P²·P, (P²·P)·P, …`.
    pub powers: Subspace,
    /// Smallest product-closed subspace containing `P`.
    pub closure: Subspace,
}

pub fn subalgebra_generated(alg: &NahmAlgebra, p: &NahmElement) -> Result<GeneratedSubalgebra> {
    if p.n() != alg.n() {
        return Err(Error::Dimension("element does not belong to this algebra".into()));
    }
    let d = alg.dim();
    let mut powers = Subspace::from_vectors(d, [p.coords()]);
    let mut current = alg.square(p);
    loop {
        let next = powers.join(&Subspace::from_vectors(d, [current.coords()]));
        if next == powers {
            break;
        }
        powers = next;
        current = alg.mul(&current, p);
    }
    Ok(GeneratedSubalgebra {
        closure: product_closure(alg, &powers),
        powers,
    })
}

/// Smallest product-closed subspace containing `seed`.
pub fn product_closure(alg: &NahmAlgebra, seed: &Subspace) -> Subspace {
    let mut s = seed.clone();
    loop {
        let vs = s.vectors();
        let mut all = vs.clone();
        for (i, x) in vs.iter().enumerate() {
            for y in &vs[i..] {
                all.push(alg.mul_coords(x, y));
            }
        }
        let next = Subspace::from_vectors(alg.dim(), all);
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Smallest ideal of `A(g)` containing `seed`.
pub fn ideal_closure_nahm(alg: &NahmAlgebra, seed: &Subspace) -> Subspace {
    let ls: Vec<Matrix> = alg
        .basis()
        .iter()
        .map(|e| alg.left_mult(e).expect("basis element"))
        .collect();
    ideal_closure_with(alg.dim(), &ls, seed)
}

fn ideal_closure_with(dim: usize, ls: &[Matrix], seed: &Subspace) -> Subspace {
    let mut s = seed.clone();
    loop {
        let vs = s.vectors();
        let mut all = vs.clone();
        for l in ls {
            for v in &vs {
                all.push(l.mul_vec(v));
            }
        }
        let next = Subspace::from_vectors(dim, all);
        if next == s {
            return s;
        }
        s = next;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NahmSimplicity {
    pub simple: bool,
    /// Simplicity of `g`, which decides simplicity of `A(g)`.
    pub base_simple: bool,
    /// Whether every basis element of `A(g)` generates all of `A(g)` as an ideal.
    pub closures_full: bool,
    pub diagnostic: Option<String>,
}

/// `A(g)` is simple iff `g` is; cross-checked by ideal closures in `A(g)`.
pub fn is_simple_nahm(alg: &NahmAlgebra) -> NahmSimplicity {
    let base = alg.base().simplicity();
    let d = alg.dim();
    let ls: Vec<Matrix> = alg
        .basis()
        .iter()
        .map(|e| alg.left_mult(e).expect("basis element"))
        .collect();
    let nonzero_product = ls.iter().any(|l| !l.is_zero());
    let closures_full =
        d > 0 && nonzero_product && (0..d).all(|i| ideal_closure_with(d, &ls, &Subspace::coordinate(d, [i])).is_full());
    let mut diagnostic = base.diagnostic.clone();
    if closures_full != base.simple {
        let msg = format!(
            "simplicity of A({}) disagrees with simplicity of the base: closures {}, base {}",
            alg.base().name(),
            closures_full,
            base.simple
        );
        log::warn!("{msg}");
        diagnostic = Some(msg);
    }
    NahmSimplicity {
        simple: closures_full,
        base_simple: base.simple,
        closures_full,
        diagnostic,
    }
}

/// Semisimplicity of `g` and nondegeneracy of the standard form, which must agree.
pub fn is_semisimple_nahm(alg: &NahmAlgebra) -> Result<bool> {
    let by_killing = alg.base().is_semisimple();
    let by_form = alg.standard_form().is_nondegenerate();
    if by_killing != by_form {
        return Err(Error::Inconsistent(format!(
            "g semisimple = {by_killing} but standard form nondegenerate = {by_form}"
        )));
    }
    Ok(by_killing)
}

/// `rad A(g) = (rad g)³`, verified to be an ideal with semisimple quotient
/// `A(g)/A(rad g) ≅ A(g/rad g)`.
pub fn radical_nahm(alg: &NahmAlgebra) -> Result<Subspace> {
    let rad = alg.base().radical()?;
    let s = triple_subspace([&rad, &rad, &rad]);
    if !is_ideal_general(alg, &s) {
        return Err(Error::Inconsistent("(rad g)^3 is not an ideal of A(g)".into()));
    }
    let (quotient, _) = alg.base().quotient(&rad)?;
    if !quotient.is_semisimple() {
        return Err(Error::Inconsistent("g / rad g is not semisimple".into()));
    }
    Ok(s)
}

/// Outcome of checking a proposed Levi factor `s` of `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviReport {
    pub is_subalgebra: bool,
    pub is_semisimple: bool,
    pub complements_radical: bool,
    /// `(dim A(s), dim rad A(g))` when every check passes.
    pub decomposition: Option<(usize, usize)>,
    pub failures: Vec<String>,
}

impl LeviReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_levi(alg: &NahmAlgebra, s_basis: &[Vec<Scalar>]) -> Result<LeviReport> {
    let g = alg.base();
    let n = g.dim();
    if s_basis.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension("Levi basis vectors must lie in g".into()));
    }
    let s = Subspace::from_vectors(n, s_basis.iter().cloned());
    let rad = g.radical()?;
    let mut failures = Vec::new();

    let is_subalgebra = g.is_subalgebra(&s);
    if !is_subalgebra {
        failures.push("span is not a subalgebra of g".to_string());
    }
    let is_semisimple = is_subalgebra && restricted(g, &s).is_ok_and(|sub| sub.is_semisimple());
    if !is_semisimple {
        failures.push("span is not semisimple".to_string());
    }
    let complements_radical = s.dim() + rad.dim() == n && s.intersection(&rad).is_zero();
    if !complements_radical {
        failures.push("g is not the direct sum of the span and rad g".to_string());
    }
    let decomposition = failures.is_empty().then(|| (3 * s.dim(), 3 * rad.dim()));
    Ok(LeviReport {
        is_subalgebra,
        is_semisimple,
        complements_radical,
        decomposition,
        failures,
    })
}

fn restricted(g: &LieAlgebra, s: &Subspace) -> Result<LieAlgebra> {
    g.subalgebra(format!("{} subalgebra", g.name()), &s.vectors())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;
    use crate::linalg::{ivec, unit_vec};

    fn a(name: &str) -> NahmAlgebra {
        NahmAlgebra::new(catalog(name).unwrap())
    }

    fn line(n: usize, i: usize) -> Subspace {
        Subspace::coordinate(n, [i])
    }

    #[test]
    fn subalgebra_triple_examples() {
        let so3 = a("so3");
        let t = TripleSubspace::new(line(3, 0), line(3, 1), line(3, 2)).unwrap();
        assert!(is_subalgebra_triple(&so3, &t).unwrap());
        let t = TripleSubspace::new(line(3, 0), line(3, 0), line(3, 1)).unwrap();
        assert!(!is_subalgebra_triple(&so3, &t).unwrap());
        let sl2 = a("sl2");
        let borel = Subspace::coordinate(3, [0, 1]);
        assert!(is_subalgebra_triple(&sl2, &TripleSubspace::diagonal(&borel)).unwrap());
        let not_sub = Subspace::coordinate(3, [1, 2]);
        assert!(!is_subalgebra_triple(&sl2, &TripleSubspace::diagonal(&not_sub)).unwrap());
    }

    #[test]
    fn ideal_triple_examples() {
        let g = a("so3+abelian(1)");
        let center = line(4, 3);
        assert!(is_ideal_triple(&g, &TripleSubspace::diagonal(&center)).unwrap());
        let so3 = a("so3");
        let t = TripleSubspace::new(line(3, 0), line(3, 1), line(3, 2)).unwrap();
        assert!(!is_ideal_triple(&so3, &t).unwrap());
        let z = Subspace::zero(3);
        assert!(is_ideal_triple(&so3, &TripleSubspace::diagonal(&z)).unwrap());
    }

    #[test]
    fn ideal_general_examples() {
        let so3 = a("so3");
        assert!(is_ideal_general(&so3, &Subspace::full(9)));
        assert!(is_ideal_general(&so3, &Subspace::zero(9)));
        let two = a("so3+so3");
        let first = Subspace::coordinate(6, [0, 1, 2]);
        assert!(is_ideal_general(&two, &triple_subspace([&first, &first, &first])));
        assert!(!is_ideal_general(&so3, &so3.delta_subspace()));
    }

    #[test]
    fn projection_examples() {
        let g = a("sl2+aff1");
        let rad = g.base().radical().unwrap();
        let p = projections_of_ideal(&g, &radical_nahm(&g).unwrap()).unwrap();
        assert!(p.h.iter().all(|h| *h == rad));
        assert_eq!(p.intersection, rad);
        assert!(p.inclusions_hold && p.intersection_is_ideal);
        let p = projections_of_ideal(&g, &Subspace::zero(15)).unwrap();
        assert!(p.h.iter().all(Subspace::is_zero));
        assert!(projections_of_ideal(&a("so3"), &a("so3").delta_subspace()).is_err());
    }

    #[test]
    fn generated_subalgebra_examples() {
        let so3 = a("so3");
        let d = NahmElement::delta(&ivec(&[1, 2, 3]));
        let r = subalgebra_generated(&so3, &d).unwrap();
        assert_eq!(r.closure.dim(), 1);
        assert_eq!(r.powers.dim(), 1);
        let e = NahmElement::from_basis_triple(3, [0, 1, 2]);
        assert_eq!(subalgebra_generated(&so3, &e).unwrap().closure.dim(), 1);
        let p = NahmElement::new(unit_vec(3, 0), unit_vec(3, 1), ivec(&[0, 0, 0])).unwrap();
        let r = subalgebra_generated(&so3, &p).unwrap();
        assert_eq!(r.powers.dim(), 2);
        assert_eq!(r.closure.dim(), 2);
        assert!(r.closure.contains(&so3.square(&p).coords()));
    }

    #[test]
    fn simplicity_examples() {
        assert!(is_simple_nahm(&a("so3")).simple);
        assert!(!is_simple_nahm(&a("heisenberg")).simple);
        let r = is_simple_nahm(&a("so3+so3"));
        assert!(!r.simple);
        assert!(r.diagnostic.is_none());
    }

    #[test]
    fn semisimplicity_examples() {
        assert!(is_semisimple_nahm(&a("so3")).unwrap());
        assert!(!is_semisimple_nahm(&a("heisenberg")).unwrap());
        assert!(is_semisimple_nahm(&a("sl2+so3")).unwrap());
    }

    #[test]
    fn radical_examples() {
        assert!(radical_nahm(&a("so3")).unwrap().is_zero());
        assert!(radical_nahm(&a("heisenberg")).unwrap().is_full());
        assert_eq!(radical_nahm(&a("sl2+aff1")).unwrap().dim(), 6);
    }

    #[test]
    fn levi_examples() {
        let g = a("sl2+aff1");
        let sl2: Vec<_> = (0..3).map(|i| unit_vec(5, i)).collect();
        let r = verify_levi(&g, &sl2).unwrap();
        assert!(r.pass(), "{:?}", r.failures);
        assert_eq!(r.decomposition, Some((9, 6)));
        let r = verify_levi(&g, &[unit_vec(5, 0), unit_vec(5, 1)]).unwrap();
        assert!(!r.pass());
        assert!(r.is_subalgebra && !r.is_semisimple);
        let so3 = a("so3");
        let all: Vec<_> = (0..3).map(|i| unit_vec(3, i)).collect();
        assert_eq!(verify_levi(&so3, &all).unwrap().decomposition, Some((9, 0)));
    }
}
