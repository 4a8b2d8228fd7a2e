//! Randomized invariants of Lie algebras, Nahm algebras and their symmetries.

use nahm_core::derivations::{
    c_transpose, derivation_algebra, diag_ad, grading_matrix, is_automorphism, is_derivation, operator_basis,
    slot_action, so3_action, BlockOperator,
};
use nahm_core::liealg::{catalog, LieAlgebra};
use nahm_core::linalg::{centralizer, q, Matrix, Scalar, Subspace};
use nahm_core::nahm::{NahmAlgebra, NahmElement};
use nahm_core::special::{is_idempotent, is_nilpotent};
use proptest::prelude::*;
use std::sync::OnceLock;

const BASES: [&str; 6] = ["so3", "sl2", "heisenberg", "aff1", "so3+so3", "sl2+aff1"];

fn scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

fn vector(len: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(scalar(), len)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    vector(rows * cols).prop_map(move |v| Matrix::from_vec(rows, cols, v))
}

fn element(n: usize) -> impl Strategy<Value = NahmElement> {
    vector(3 * n).prop_map(|v| NahmElement::from_coords(&v).unwrap())
}

/// A catalog algebra rewritten in a random basis, so structure constants are
/// no longer sparse or integral.
fn random_algebra() -> impl Strategy<Value = LieAlgebra> {
    (0..BASES.len()).prop_flat_map(|i| {
        let g = catalog(BASES[i]).unwrap();
        let n = g.dim();
        matrix(n, n).prop_filter_map("singular change of basis", move |p| g.in_basis(&p).ok())
    })
}

fn random_change_of_basis() -> impl Strategy<Value = (LieAlgebra, Matrix, LieAlgebra)> {
    (0..BASES.len()).prop_flat_map(|i| {
        let h = catalog(BASES[i]).unwrap();
        let n = h.dim();
        matrix(n, n).prop_filter_map("singular change of basis", move |p| {
            let g = h.in_basis(&p).ok()?;
            Some((h.clone(), p, g))
        })
    })
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    nahm_core::linalg::unit_vec(n, i)
}

fn nahm(name: &str) -> NahmAlgebra {
    NahmAlgebra::new(catalog(name).unwrap())
}

fn der_basis(name: &'static str) -> &'static [Matrix] {
    static CACHE: OnceLock<Vec<(&'static str, Vec<Matrix>)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        ["so3", "sl2", "heisenberg", "aff1"]
            .into_iter()
            .map(|n| {
                let alg = nahm(n);
                let der = derivation_algebra(&alg).unwrap();
                (n, operator_basis(&alg, &der))
            })
            .collect()
    });
    &all.iter().find(|(n, _)| *n == name).unwrap().1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rref_is_idempotent_and_rank_nullity_holds(m in (1usize..5, 1usize..6).prop_flat_map(|(r, c)| matrix(r, c))) {
        let r = m.rref();
        prop_assert_eq!(r.rref(), r);
        prop_assert_eq!(m.rank() + m.nullspace().dim(), m.cols());
    }

    #[test]
    fn centralizer_elements_commute(ms in prop::collection::vec(matrix(3, 3), 1..3)) {
        let c = centralizer(3, &ms);
        for v in c.vectors() {
            let z = Matrix::from_vec(3, 3, v);
            for m in &ms {
                prop_assert!(z.commutator(m).is_zero());
            }
        }
        prop_assert!(c.contains(&Matrix::identity(3).to_vec()));
    }

    #[test]
    fn subspace_equality_ignores_spanning_set(vs in prop::collection::vec(vector(4), 1..4), c in scalar()) {
        let s = Subspace::from_vectors(4, vs.clone());
        let mut mixed: Vec<Vec<Scalar>> = vs.iter().rev().cloned().collect();
        if vs.len() >= 2 {
            let combo = vs[0].iter().zip(&vs[1]).map(|(a, b)| a + &(&c * b)).collect();
            mixed.push(combo);
        }
        prop_assert_eq!(Subspace::from_vectors(4, mixed), s);
    }

    #[test]
    fn killing_form_is_invariant(g in random_algebra()) {
        let n = g.dim();
        let k = g.killing();
        for i in 0..n {
            for j in 0..n {
                let bij = g.bracket_unchecked(&unit(n, i), &unit(n, j));
                for l in 0..n {
                    let lhs = k.eval(&bij, &unit(n, l));
                    let rhs = k.eval(&unit(n, i), &g.bracket_unchecked(&unit(n, j), &unit(n, l)));
                    prop_assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn ad_is_a_representation(g in random_algebra(), x in vector(6), y in vector(6)) {
        let n = g.dim();
        let (x, y) = (&x[..n], &y[..n]);
        let lhs = g.ad(&g.bracket(x, y).unwrap()).unwrap();
        prop_assert_eq!(lhs, g.ad(x).unwrap().commutator(&g.ad(y).unwrap()));
    }

    #[test]
    fn radical_is_a_solvable_ideal(g in random_algebra()) {
        let rad = g.radical().unwrap();
        prop_assert!(g.is_ideal(&rad));
        prop_assert!(g.derived_series_of(&rad).1);
        prop_assert_eq!(g.is_semisimple(), rad.is_zero());
    }

    #[test]
    fn simple_algebras_have_no_proper_ideals(v in vector(3), name in prop::sample::select(vec!["so3", "sl2"])) {
        prop_assume!(v.iter().any(|s| !s.is_zero()));
        prop_assert!(catalog(name).unwrap().ideal_closure(&[v]).is_full());
    }

    #[test]
    fn nahm_product_is_commutative_and_matches_left_mult(
        (name, x, y) in (0..BASES.len()).prop_flat_map(|i| {
            let n = catalog(BASES[i]).unwrap().dim();
            (Just(BASES[i]), element(n), element(n))
        })
    ) {
        let a = nahm(name);
        let xy = a.product(&x, &y).unwrap();
        prop_assert_eq!(&xy, &a.product(&y, &x).unwrap());
        prop_assert_eq!(a.left_mult(&x).unwrap().mul_vec(&y.coords()), xy.coords());
    }

    #[test]
    fn standard_form_is_invariant(x in element(3), y in element(3), z in element(3), name in prop::sample::select(vec!["so3", "sl2", "heisenberg"])) {
        let a = nahm(name);
        let c = a.standard_form();
        let lhs = c.eval(&a.mul(&x, &y).coords(), &z.coords());
        let rhs = c.eval(&x.coords(), &a.mul(&y, &z).coords());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn grading_holds_on_random_elements(d1 in vector(3), d2 in vector(3), w1 in element(3), w2 in element(3)) {
        let a = nahm("sl2");
        let (w1, w2) = (a.proj_w(&w1), a.proj_w(&w2));
        let (d1, d2) = (NahmElement::delta(&d1), NahmElement::delta(&d2));
        prop_assert!(a.mul(&d1, &d2).is_zero());
        prop_assert!(a.proj_delta(&a.mul(&d1, &w1)).is_zero());
        prop_assert!(a.proj_w(&a.mul(&w1, &w2)).is_zero());
    }

    #[test]
    fn lifts_are_functorial((h, p, g) in random_change_of_basis(), x in element(6), y in element(6)) {
        // g is h in the basis given by the columns of P: P maps g → h, P⁻¹ maps h → g
        let n = g.dim();
        let ag = NahmAlgebra::new(g.clone());
        let ah = NahmAlgebra::new(h.clone());
        let pinv = p.inverse().unwrap();
        let phi = ag.lift_hom(&h, &p).unwrap();
        let psi = ah.lift_hom(&g, &pinv).unwrap();
        prop_assert_eq!(ag.lift_hom(&g, &pinv.mul(&p)).unwrap(), psi.mul(&phi));
        prop_assert_eq!(phi.mul(&psi), Matrix::identity(3 * n));
        let x = NahmElement::from_coords(&x.coords().into_iter().take(3 * n).collect::<Vec<_>>()).unwrap();
        let y = NahmElement::from_coords(&y.coords().into_iter().take(3 * n).collect::<Vec<_>>()).unwrap();
        let lhs = phi.mul_vec(&ag.mul(&x, &y).coords());
        let rhs = ah.mul_coords(&phi.mul_vec(&x.coords()), &phi.mul_vec(&y.coords()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivations_form_a_lie_algebra(
        name in prop::sample::select(vec!["so3", "sl2", "heisenberg", "aff1"]),
        cs in prop::collection::vec(scalar(), 2 * 36),
    ) {
        let a = nahm(name);
        let basis = der_basis(name);
        let combo = |off: usize| basis.iter().enumerate().fold(Matrix::zeros(a.dim(), a.dim()), |acc, (i, b)| acc.add(&b.scale(&cs[(off + i) % cs.len()])));
        let (s, t) = (combo(0), combo(basis.len()));
        prop_assert!(is_derivation(&a, &s));
        let c = s.commutator(&t);
        prop_assert!(is_derivation(&a, &c));
        let split = BlockOperator::new(a.n(), s).unwrap();
        prop_assert!(is_derivation(&a, &split.diag_part()));
        prop_assert!(is_derivation(&a, &split.off_part()));
    }

    #[test]
    fn derivations_are_c_skew(x in vector(3), m in vector(3), name in prop::sample::select(vec!["so3", "sl2"])) {
        let a = nahm(name);
        let d = diag_ad(&a, &x).unwrap();
        prop_assert!(d.add(&c_transpose(&a, &d).unwrap()).is_zero());
        let skew = Matrix::from_vec(3, 3, vec![
            Scalar::zero(), m[0].clone(), m[1].clone(),
            -&m[0], Scalar::zero(), m[2].clone(),
            -&m[1], -&m[2], Scalar::zero(),
        ]);
        let r = so3_action(&a, &skew).unwrap();
        prop_assert!(r.add(&c_transpose(&a, &r).unwrap()).is_zero());
    }

    #[test]
    fn automorphisms_are_closed_under_products_and_inverses(word in prop::collection::vec(0usize..3, 1..5)) {
        let a = nahm("so3");
        let cyclic = Matrix::from_ints(&[[0, 0, 1], [1, 0, 0], [0, 1, 0]]);
        let flip = Matrix::from_ints(&[[1, 0, 0], [0, -1, 0], [0, 0, -1]]);
        let gens = [
            slot_action(&a, &grading_matrix()).unwrap(),
            slot_action(&a, &cyclic).unwrap(),
            Matrix::block_diagonal(&[&flip, &flip, &flip]),
        ];
        let f = word.iter().fold(Matrix::identity(9), |acc, &i| acc.mul(&gens[i]));
        prop_assert!(is_automorphism(&a, &f));
        prop_assert!(is_automorphism(&a, &f.inverse().unwrap()));
    }

    #[test]
    fn scaled_idempotents_are_not_idempotent(s in scalar()) {
        prop_assume!(!s.is_zero() && !s.is_one());
        let a = nahm("so3");
        let e = NahmElement::from_basis_triple(3, [0, 1, 2]);
        prop_assert!(!is_idempotent(&a, &e.scale(&s)).unwrap());
    }

    #[test]
    fn diagonal_elements_are_nilpotent(x in vector(3), name in prop::sample::select(vec!["so3", "sl2", "heisenberg"])) {
        let a = nahm(name);
        let r = is_nilpotent(&a, &NahmElement::delta(&x)).unwrap();
        prop_assert!(r.nilpotent && r.components_commute && r.abelian_span);
    }
}
