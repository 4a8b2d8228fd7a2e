//! Exact rational dense linear algebra.

mod form;
mod matrix;
mod scalar;
mod subspace;

pub use form::{BilinearForm, Definiteness, Signature};
pub use matrix::Matrix;
pub use scalar::{q, ParseScalarError, Scalar};
pub use subspace::{centralizer, Subspace};

/// Exact zero test for a coordinate vector.
pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn zero_vec(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(s: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| s * x).collect()
}

pub fn to_f64_vec(a: &[Scalar]) -> Vec<f64> {
    a.iter().map(Scalar::to_f64).collect()
}

/// Integer vector literal helper.
pub fn ivec(values: &[i64]) -> Vec<Scalar> {
    values.iter().map(|&v| Scalar::from_int(v)).collect()
}
