//! Nahm algebras of Lie algebras.
//!
//! Given a Lie algebra `g` by exact rational structure constants, this crate
//! builds the commutative nonassociative algebra `A(g) = g × g × g` whose
//! squaring map is the right-hand side of the Nahm equations
//!
//! ```text
//! ẋ₁ = [x₂, x₃],  ẋ₂ = [x₃, x₁],  ẋ₃ = [x₁, x₂]
//! ```
//!
//! and computes its structure exactly over ℚ: ideals, radical, trace forms,
//! derivations, automorphisms, idempotents and nilpotents. The [`flow`]
//! module integrates `Ẋ = X²` in binary64 and monitors the dynamical
//! consequences of that structure.
//!
//! ```
//! use nahm_core::liealg::catalog;
//! use nahm_core::nahm::{NahmAlgebra, NahmElement};
//!
//! let a = NahmAlgebra::new(catalog("so3").unwrap());
//! let e = NahmElement::from_basis_triple(3, [0, 1, 2]);
//! assert_eq!(a.square(&e), e); // E = (e₁, e₂, e₃) is an idempotent
//! ```

pub mod derivations;
pub mod flow;
pub mod liealg;
pub mod linalg;
pub mod nahm;
pub mod special;
pub mod structure;
pub mod theorems;

pub use linalg::{BilinearForm, Matrix, Scalar, Subspace};

/// Errors reported by the algebraic and numerical routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("unknown catalog algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// Two independent computations of the same quantity disagreed.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
