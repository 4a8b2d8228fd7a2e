//! Acceptance criteria, one PASS/FAIL line each. Run with
//! `cargo test -p nahm-cli --test acceptance -- --nocapture` to see the lines.

use nahm_core::derivations::{
    aut_factorization, decomposition_check, derivation_algebra, grading_automorphism, is_automorphism, operator_basis,
    schur_centralizer, slot_action, BlockOperator,
};
use nahm_core::flow::{
    integrate, monitor_confinement, monitor_decoupling, monitor_gradient, monitor_transport, FlowOptions, FlowStatus,
};
use nahm_core::liealg::{catalog, defining_representation, Representation};
use nahm_core::linalg::{q, unit_vec, Definiteness, Matrix, Scalar};
use nahm_core::nahm::{triple_subspace, NahmAlgebra, NahmElement};
use nahm_core::special::{find_idempotent, is_idempotent, is_nilpotent, power_assoc_witness, NewtonOptions};
use nahm_core::structure::{is_semisimple_nahm, is_simple_nahm, radical_nahm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::Command;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn nahm(name: &str) -> NahmAlgebra {
    NahmAlgebra::new(catalog(name).expect("catalog algebra"))
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(2024)
}

fn rand_rational(rng: &mut ChaCha8Rng, len: usize) -> Vec<Scalar> {
    (0..len)
        .map(|_| q(rng.random_range(-6..=6), rng.random_range(1..=5)))
        .collect()
}

fn rand_f64(rng: &mut ChaCha8Rng, len: usize, scale: f64) -> Vec<f64> {
    (0..len).map(|_| scale * rng.random_range(-1.0..=1.0)).collect()
}

fn e_so3() -> NahmElement {
    NahmElement::from_basis_triple(3, [0, 1, 2])
}

fn commutative_product() -> Outcome {
    let mut pairs = 0;
    for name in ["so3", "sl2", "heisenberg", "sl2+aff1"] {
        let a = nahm(name);
        let basis = a.basis();
        for x in &basis {
            let l = a.left_mult(x).map_err(|e| e.to_string())?;
            for y in &basis {
                let xy = a.mul(x, y);
                ensure!(xy == a.mul(y, x), "{name}: XY ≠ YX for X = {x}, Y = {y}");
                ensure!(
                    l.mul_vec(&y.coords()) == xy.coords(),
                    "{name}: L(X)Y ≠ XY for X = {x}, Y = {y}"
                );
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} basis pairs, exact"))
}

fn grading() -> Outcome {
    let names = [
        "so3",
        "sl2",
        "heisenberg",
        "aff1",
        "abelian(2)",
        "abelian(3)",
        "so3+so3",
        "sl2+aff1",
    ];
    for name in names {
        let r = nahm(name).grading_check();
        ensure!(r.pass(), "{name}: {:?}", r.witnesses);
    }
    Ok(format!("{} algebras", names.len()))
}

fn trace_forms() -> Outcome {
    let mut forms = 0;
    for name in ["so3", "sl2"] {
        let a = nahm(name);
        let g = a.base().clone();
        let reps = [
            Representation::adjoint(&g),
            defining_representation(&g).map_err(|e| e.to_string())?,
        ];
        for rep in &reps {
            let c = a.trace_form_nahm(rep).map_err(|e| format!("{name}: {e}"))?;
            let basis = a.basis();
            for x in &basis {
                for y in &basis {
                    let xy = a.mul(x, y).coords();
                    for z in &basis {
                        let lhs = c.eval(&xy, &z.coords());
                        let rhs = c.eval(&x.coords(), &a.mul(y, z).coords());
                        ensure!(lhs == rhs, "{name}: C(XY, Z) ≠ C(X, YZ) at {x}, {y}, {z}");
                    }
                }
            }
            forms += 1;
        }
    }
    Ok(format!("{forms} trace forms invariant on all basis triples"))
}

fn structure_transfer() -> Outcome {
    let names = ["so3", "sl2", "heisenberg", "aff1", "so3+so3", "sl2+aff1"];
    for name in names {
        let a = nahm(name);
        let g = a.base();
        ensure!(is_simple_nahm(&a).simple == g.is_simple(), "{name}: simplicity differs");
        let ss = is_semisimple_nahm(&a).map_err(|e| e.to_string())?;
        ensure!(ss == g.is_semisimple(), "{name}: semisimplicity differs");
        let rad = g.radical().map_err(|e| e.to_string())?;
        let rad_a = radical_nahm(&a).map_err(|e| e.to_string())?;
        ensure!(
            rad_a == triple_subspace([&rad, &rad, &rad]),
            "{name}: rad A(g) ≠ A(rad g)"
        );
    }
    Ok(format!("{} algebras", names.len()))
}

fn compact_so3() -> Outcome {
    let a = nahm("so3");
    let c = a.standard_form();
    ensure!(*c.gram() == Matrix::identity(9), "standard form of A(so3) is not I₉");
    ensure!(
        c.definiteness() == Definiteness::PositiveDefinite,
        "not positive definite"
    );
    ensure!(
        a.is_compact().map_err(|e| e.to_string())?,
        "A(so3) not reported compact"
    );
    Ok("C = I₉, positive definite, compact".into())
}

fn derivation_dims() -> Outcome {
    let mut dims = Vec::new();
    for name in ["so3", "sl2"] {
        let a = nahm(name);
        let r = decomposition_check(&a).map_err(|e| e.to_string())?;
        ensure!(r.der_dim == 6 && r.pass(), "{name}: {r:?}");
        let der = derivation_algebra(&a).map_err(|e| e.to_string())?;
        for d in operator_basis(&a, &der) {
            let split = BlockOperator::new(a.n(), d).map_err(|e| e.to_string())?;
            ensure!(
                der.contains(&split.diag_part().to_vec()) && der.contains(&split.off_part().to_vec()),
                "{name}: a derivation does not split"
            );
        }
        dims.push(format!("{name} {}", r.der_dim));
    }
    let ab = derivation_algebra(&nahm("abelian(2)"))
        .map_err(|e| e.to_string())?
        .dim();
    ensure!(ab == 36, "abelian(2): dim Der = {ab}");
    dims.push(format!("abelian(2) {ab}"));
    Ok(dims.join(", "))
}

fn schur() -> Outcome {
    let s = schur_centralizer(&nahm("so3")).dim();
    let ss = schur_centralizer(&nahm("so3+so3")).dim();
    ensure!(s == 1, "so3: {s}");
    ensure!(ss >= 2, "so3+so3: {ss}");
    Ok(format!("so3 {s}, so3+so3 {ss}"))
}

fn grading_symmetry() -> Outcome {
    let a = nahm("so3");
    let g = grading_automorphism(&a);
    let u = Matrix::from_vec(3, 3, [-1, 2, 2, 2, -1, 2, 2, 2, -1].iter().map(|&v| q(v, 3)).collect());
    ensure!(g.u == u, "U = {:?}", g.u);
    ensure!(g.pass(1e-12), "{g:?}");
    // e1 → e2 → e3 → e1
    let perm = Matrix::from_ints(&[[0, 1, 0], [0, 0, 1], [1, 0, 0]]);
    let diag = Matrix::block_diagonal(&[&perm, &perm, &perm]);
    let blockwise = slot_action(&a, &g.u).map_err(|e| e.to_string())?;
    ensure!(is_automorphism(&a, &diag), "diag(φ, φ, φ) is not an automorphism");
    let mut ok = 0;
    for f in [blockwise.clone(), diag.clone(), diag.mul(&blockwise)] {
        let fac = aut_factorization(&a, &f).map_err(|e| e.to_string())?;
        ensure!(
            diag_of(&fac.phi).mul(&slot_action(&a, &fac.r).map_err(|e| e.to_string())?) == f,
            "bad factorization"
        );
        ok += 1;
    }
    Ok(format!(
        "U ∈ SO(3), U² = I, exp error {:.1e}, {ok} factorizations",
        g.exp_error
    ))
}

fn diag_of(phi: &Matrix) -> Matrix {
    Matrix::block_diagonal(&[phi, phi, phi])
}

fn special_elements() -> Outcome {
    let a = nahm("so3");
    let e = e_so3();
    ensure!(is_idempotent(&a, &e).map_err(|e| e.to_string())?, "E is not idempotent");
    let mut rng = rng();
    for _ in 0..10 {
        let x = rand_rational(&mut rng, 3);
        let r = is_nilpotent(&a, &NahmElement::delta(&x)).map_err(|e| e.to_string())?;
        ensure!(r.nilpotent, "Δ({x:?}) is not nilpotent");
    }
    let x0: Vec<f64> = e.to_f64().iter().map(|v| 1.1 * v).collect();
    let opts = NewtonOptions::default();
    let r = find_idempotent(&a, &x0, &opts).map_err(|e| e.to_string())?;
    ensure!(
        r.residual <= 1e-10 && r.iterations <= 20,
        "residual {:.1e} after {} iterations",
        r.residual,
        r.iterations
    );
    Ok(format!(
        "Newton from 1.1E: residual {:.1e} in {} iterations",
        r.residual, r.iterations
    ))
}

fn power_associativity() -> Outcome {
    let a = nahm("so3");
    let w = power_assoc_witness(&a).ok_or("no witness found")?;
    let x = NahmElement::new(unit_vec(3, 0), unit_vec(3, 1), vec![Scalar::zero(); 3]).map_err(|e| e.to_string())?;
    let half_e3 = NahmElement::new(
        vec![Scalar::zero(); 3],
        vec![Scalar::zero(); 3],
        vec![Scalar::zero(), Scalar::zero(), q(1, 2)],
    )
    .map_err(|e| e.to_string())?;
    ensure!(w.x == x, "witness X = {}", w.x);
    ensure!(
        w.left == half_e3 && w.right.is_zero(),
        "X²X² = {}, X(XX²) = {}",
        w.left,
        w.right
    );
    Ok(format!("X = {}: X²X² = {}, X(XX²) = 0", w.x, w.left))
}

fn flows() -> Outcome {
    let a = nahm("so3");
    let e = e_so3().to_f64();
    let traj = integrate(&a, &e, &FlowOptions::with_t_end(2.0)).map_err(|e| e.to_string())?;
    let t_est = match traj.status {
        FlowStatus::BlowUp { t_est } => t_est,
        other => return Err(format!("ray from E: {other:?}")),
    };
    ensure!((0.99..=1.01).contains(&t_est), "t_est = {t_est}");

    let d1 = NahmElement::delta(&unit_vec(3, 0)).to_f64();
    let traj = integrate(&a, &d1, &FlowOptions::with_t_end(10.0)).map_err(|e| e.to_string())?;
    let drift = traj
        .states
        .iter()
        .flat_map(|x| x.iter().zip(&d1).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max);
    ensure!(traj.final_time() >= 10.0 && drift <= 1e-9, "Δ(e1) drift {drift:.1e}");

    let mut rng = rng();
    let delta_x = NahmElement::delta(&rand_rational(&mut rng, 3)).to_f64();
    let pair = NahmElement::new(unit_vec(3, 0), unit_vec(3, 1), vec![Scalar::zero(); 3])
        .map_err(|e| e.to_string())?
        .to_f64();
    let mut confinement = 0.0_f64;
    for p in [&delta_x, &e, &pair] {
        let traj = integrate(&a, p, &FlowOptions::with_t_end(0.5)).map_err(|e| e.to_string())?;
        confinement = confinement.max(monitor_confinement(&a, &traj, p, 1e3).map_err(|e| e.to_string())?);
    }
    ensure!(confinement <= 1e-6, "confinement residual {confinement:.1e}");

    let mut gradient = 0.0_f64;
    for _ in 0..10 {
        let x = rand_f64(&mut rng, 9, 1.0);
        gradient = gradient.max(monitor_gradient(&a, &x, 1e-5).map_err(|e| e.to_string())?);
    }
    ensure!(gradient <= 1e-8, "gradient residual {gradient:.1e}");

    let u = slot_action(&a, &grading_automorphism(&a).u).map_err(|e| e.to_string())?;
    let p = rand_f64(&mut rng, 9, 0.5);
    let transport = monitor_transport(&a, &u, &p, &FlowOptions::with_t_end(0.5)).map_err(|e| e.to_string())?;
    ensure!(transport <= 1e-6, "transport deviation {transport:.1e}");

    let g = catalog("so3").expect("so3");
    let (p1, p2) = (rand_f64(&mut rng, 9, 0.5), d1.clone());
    let decoupling = monitor_decoupling(&g, &g, &p1, &p2, &FlowOptions::with_t_end(0.5)).map_err(|e| e.to_string())?;
    ensure!(decoupling <= 1e-6, "decoupling deviation {decoupling:.1e}");

    Ok(format!(
        "t_est {t_est:.6}, drift {drift:.1e}, confinement {confinement:.1e}, gradient {gradient:.1e}, transport {transport:.1e}, decoupling {decoupling:.1e}"
    ))
}

fn check_theorems_cli() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_nahm"))
        .args(["check-theorems", "catalog:so3"])
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure!(
        out.status.code() == Some(0),
        "exit code {:?}\n{text}",
        out.status.code()
    );
    let mut named = 0;
    for line in text
        .lines()
        .filter(|l| l.starts_with("PASS ") || l.starts_with("FAIL "))
    {
        let rest = &line[5..];
        let name = rest.split_whitespace().next().unwrap_or("");
        ensure!(
            !name.is_empty() && rest.contains(" [") && rest.contains("]: "),
            "line without a reference: {line}"
        );
        named += 1;
    }
    ensure!(named >= 25, "only {named} checks");
    Ok(format!("{named} checks, each with a reference"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 12] = [
        ("commutative product and left multiplication", commutative_product),
        ("Δ ⊕ W grading", grading),
        ("trace forms and invariance", trace_forms),
        ("simplicity, semisimplicity and radical transfer", structure_transfer),
        ("compact form of A(so3)", compact_so3),
        ("derivation algebras", derivation_dims),
        ("Schur centralizers", schur),
        ("grading automorphism and factorization", grading_symmetry),
        ("idempotents, nilpotents and Newton", special_elements),
        ("power-associativity failure", power_associativity),
        ("flow properties", flows),
        ("check-theorems on so3", check_theorems_cli),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
