//! Exact results compared with independent binary64 computations that
//! share no code with the library: products from cross products, and
//! dimensions from SVD ranks of directly assembled linear systems.

use nahm_core::derivations::{derivation_algebra, schur_centralizer};
use nahm_core::flow::{integrate, FlowOptions, FlowStatus};
use nahm_core::liealg::catalog;
use nahm_core::linalg::{q, Scalar};
use nahm_core::nahm::{NahmAlgebra, NahmElement};
use nahm_core::structure::radical_nahm;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense binary64 structure constants `c[i][j][k]`.
fn constants(name: &str) -> (usize, Vec<f64>) {
    let g = catalog(name).unwrap();
    let c = g.structure_constants().iter().map(Scalar::to_f64).collect();
    (g.dim(), c)
}

fn bracket(n: usize, c: &[f64], x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[k] += x[i] * y[j] * c[(i * n + j) * n + k];
            }
        }
    }
    out
}

/// The Nahm product written out from the bracket, slot by slot.
fn product(n: usize, c: &[f64], x: &[f64], y: &[f64]) -> Vec<f64> {
    let s = |v: &[f64], i: usize| v[i * n..(i + 1) * n].to_vec();
    let mut out = Vec::with_capacity(3 * n);
    for (a, b) in [(1, 2), (2, 0), (0, 1)] {
        let p = bracket(n, c, &s(x, a), &s(y, b));
        let q = bracket(n, c, &s(y, a), &s(x, b));
        out.extend(p.iter().zip(&q).map(|(u, v)| 0.5 * (u + v)));
    }
    out
}

fn rank(m: &DMatrix<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let tol = 1e-9 * sv.max().max(1.0);
    sv.iter().filter(|s| **s > tol).count()
}

/// `dim Der` as the nullity of the Leibniz system `D(bᵢbⱼ) = (Dbᵢ)bⱼ + bᵢ(Dbⱼ)`.
fn der_dim_oracle(name: &str) -> usize {
    let (n, c) = constants(name);
    let d = 3 * n;
    let e = |i: usize| {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        v
    };
    let mul = |i: usize, j: usize| product(n, &c, &e(i), &e(j));
    // unknown D[r][s] at column r*d + s
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for i in 0..d {
        for j in i..d {
            let bij = mul(i, j);
            for r in 0..d {
                let mut row = vec![0.0; d * d];
                for (s, v) in bij.iter().enumerate() {
                    row[r * d + s] += v;
                }
                // (D bᵢ) bⱼ = Σ_s D[s][i] (b_s bⱼ), and symmetric in i ↔ j
                for s in 0..d {
                    row[s * d + i] -= mul(s, j)[r];
                    row[s * d + j] -= mul(i, s)[r];
                }
                if row.iter().any(|v| *v != 0.0) {
                    rows.push(row);
                }
            }
        }
    }
    let m = DMatrix::from_fn(rows.len(), d * d, |r, k| rows[r][k]);
    d * d - rank(&m)
}

/// Dimension of the commutant of all `L(bᵢ)`.
fn schur_dim_oracle(name: &str) -> usize {
    let (n, c) = constants(name);
    let d = 3 * n;
    let ls: Vec<DMatrix<f64>> = (0..d)
        .map(|i| {
            let mut x = vec![0.0; d];
            x[i] = 1.0;
            DMatrix::from_fn(d, d, |r, s| {
                let mut y = vec![0.0; d];
                y[s] = 1.0;
                product(n, &c, &x, &y)[r]
            })
        })
        .collect();
    // vec(ZL − LZ) = (Lᵗ ⊗ I − I ⊗ L) vec(Z) in column-major vec
    let id = DMatrix::<f64>::identity(d, d);
    let mut blocks = Vec::new();
    for l in &ls {
        blocks.push(l.transpose().kronecker(&id) - id.kronecker(l));
    }
    let m = DMatrix::from_fn(blocks.len() * d * d, d * d, |r, k| {
        blocks[r / (d * d)][(r % (d * d), k)]
    });
    d * d - rank(&m)
}

#[test]
fn so3_product_matches_cross_products() {
    let a = NahmAlgebra::new(catalog("so3").unwrap());
    let cross = |u: &[f64], v: &[f64]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let xs: Vec<Scalar> = (0..9)
            .map(|_| q(rng.random_range(-5..=5), rng.random_range(1..=4)))
            .collect();
        let ys: Vec<Scalar> = (0..9)
            .map(|_| q(rng.random_range(-5..=5), rng.random_range(1..=4)))
            .collect();
        let x = NahmElement::from_coords(&xs).unwrap();
        let y = NahmElement::from_coords(&ys).unwrap();
        let exact = a.mul(&x, &y).to_f64();
        let (xf, yf) = (x.to_f64(), y.to_f64());
        let s = |v: &[f64], i: usize| v[3 * i..3 * i + 3].to_vec();
        for (slot, (p, q)) in [(1, 2), (2, 0), (0, 1)].into_iter().enumerate() {
            let u = cross(&s(&xf, p), &s(&yf, q));
            let v = cross(&s(&yf, p), &s(&xf, q));
            for k in 0..3 {
                assert!((exact[3 * slot + k] - 0.5 * (u[k] + v[k])).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn products_match_the_bracket_formula_on_every_catalog_algebra() {
    for name in ["so3", "sl2", "heisenberg", "aff1", "so3+so3", "sl2+aff1"] {
        let a = NahmAlgebra::new(catalog(name).unwrap());
        let (n, c) = constants(name);
        let basis = a.basis();
        for x in &basis {
            for y in &basis {
                let oracle = product(n, &c, &x.to_f64(), &y.to_f64());
                assert_eq!(a.mul(x, y).to_f64(), oracle, "{name}");
            }
        }
    }
}

#[test]
fn derivation_dimensions_match_svd_rank() {
    for name in ["so3", "sl2", "heisenberg", "aff1", "abelian(2)"] {
        let exact = derivation_algebra(&NahmAlgebra::new(catalog(name).unwrap()))
            .unwrap()
            .dim();
        assert_eq!(exact, der_dim_oracle(name), "{name}");
    }
    assert_eq!(der_dim_oracle("so3"), 6);
    assert_eq!(der_dim_oracle("sl2"), 6);
    assert_eq!(der_dim_oracle("abelian(2)"), 36);
}

#[test]
fn schur_centralizers_match_svd_rank() {
    for name in ["so3", "sl2", "so3+so3", "heisenberg"] {
        let exact = schur_centralizer(&NahmAlgebra::new(catalog(name).unwrap())).dim();
        assert_eq!(exact, schur_dim_oracle(name), "{name}");
    }
    assert_eq!(schur_dim_oracle("so3"), 1);
    assert!(schur_dim_oracle("so3+so3") >= 2);
}

#[test]
fn killing_forms_match_traces() {
    for name in ["so3", "sl2", "heisenberg", "aff1", "sl2+aff1"] {
        let g = catalog(name).unwrap();
        let (n, c) = constants(name);
        let ad = |i: usize| DMatrix::from_fn(n, n, |k, j| c[(i * n + j) * n + k]);
        let k = g.killing();
        for i in 0..n {
            for j in 0..n {
                let t = (ad(i) * ad(j)).trace();
                assert_eq!(k.gram()[(i, j)].to_f64(), t, "{name}");
            }
        }
    }
    // sl2 in the basis h, e, f
    let k = catalog("sl2").unwrap().killing();
    let expected = [[8.0, 0.0, 0.0], [0.0, 0.0, 4.0], [0.0, 4.0, 0.0]];
    for (i, row) in expected.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert_eq!(k.gram()[(i, j)].to_f64(), *v);
        }
    }
}

#[test]
fn radical_dimensions_match_hand_counts() {
    // heisenberg and aff1 are solvable; sl2+aff1 has radical aff1
    for (name, rad) in [
        ("so3", 0),
        ("sl2", 0),
        ("heisenberg", 3),
        ("aff1", 2),
        ("so3+so3", 0),
        ("sl2+aff1", 2),
    ] {
        let g = catalog(name).unwrap();
        assert_eq!(g.radical().unwrap().dim(), rad, "{name}");
        assert_eq!(radical_nahm(&NahmAlgebra::new(g)).unwrap().dim(), 3 * rad, "{name}");
    }
}

#[test]
fn ray_blow_up_times_match_closed_form() {
    let a = NahmAlgebra::new(catalog("so3").unwrap());
    let e = NahmElement::from_basis_triple(3, [0, 1, 2]).to_f64();
    for s in [0.5, 1.0, 2.0, 4.0] {
        let p: Vec<f64> = e.iter().map(|v| s * v).collect();
        let traj = integrate(&a, &p, &FlowOptions::with_t_end(2.0 / s)).unwrap();
        match traj.status {
            FlowStatus::BlowUp { t_est } => assert!((t_est - 1.0 / s).abs() <= 0.01 / s, "a = {s}: {t_est}"),
            other => panic!("a = {s}: {other:?}"),
        }
    }
}
