//! Lie algebras given by structure constants.
//!
//! A [`LieAlgebra`] stores the dense tensor `c[i][j][k]` with
//! `[bᵢ, bⱼ] = Σₖ c[i][j][k] bₖ` in a fixed basis `b₀ … bₙ₋₁`. Vectors of `g`
//! are plain coordinate slices in that basis; every subspace answer is given
//! in the same basis.

mod catalog;
mod rep;

use std::fmt;

pub use catalog::{catalog, catalog_entries, defining_representation, CatalogEntry};
pub use rep::Representation;

use crate::linalg::{centralizer, is_zero_vec, unit_vec, BilinearForm, Matrix, Scalar, Subspace};
use crate::{Error, Result};

/// Outcome of checking antisymmetry and the Jacobi identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub antisymmetry_ok: bool,
    pub jacobi_ok: bool,
    /// `(i, j, k)` with `c[i][j][k] ≠ −c[j][i][k]`, zero-based, `i ≤ j`.
    pub antisymmetry_failures: Vec<(usize, usize, usize)>,
    /// `(i, j, k, l, residual)`: coefficient `l` of the Jacobi sum for `bᵢ, bⱼ, bₖ`.
    pub jacobi_failures: Vec<(usize, usize, usize, usize, Scalar)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry_ok && self.jacobi_ok
    }
}

impl fmt::Display for ValidationReport {
    /// One-based indices, matching the algebra document format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "antisymmetry: {}",
            if self.antisymmetry_ok { "ok" } else { "FAILED" }
        )?;
        for (i, j, k) in &self.antisymmetry_failures {
            writeln!(
                f,
                "  c[{}][{}][{}] != -c[{}][{}][{}]",
                i + 1,
                j + 1,
                k + 1,
                j + 1,
                i + 1,
                k + 1
            )?;
        }
        writeln!(f, "jacobi: {}", if self.jacobi_ok { "ok" } else { "FAILED" })?;
        for (i, j, k, l, r) in &self.jacobi_failures {
            writeln!(
                f,
                "  (i,j,k,l) = ({},{},{},{}): residual {r}",
                i + 1,
                j + 1,
                k + 1,
                l + 1
            )?;
        }
        Ok(())
    }
}

/// Result of the two independent simplicity tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityReport {
    pub simple: bool,
    pub nonabelian: bool,
    pub semisimple: bool,
    /// Dimension of the commutant of `ad(g)` over ℚ.
    pub centralizer_dim: usize,
    /// Whether every basis vector generates all of `g` as an ideal.
    pub basis_closures_full: bool,
    /// Set when the centralizer test and the ideal-closure test disagree.
    pub diagnostic: Option<String>,
}

/// Nonzero terms `(k, coeff)` of one bracket.
pub type BracketTerms = Vec<(usize, Scalar)>;

#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    name: String,
    dim: usize,
    c: Vec<Scalar>,
    ad_basis: Vec<Matrix>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra({}, dim {})", self.name, self.dim)
    }
}

impl LieAlgebra {
    /// Stores a structure-constant tensor without validating it.
    ///
    /// `c` is indexed `c[(i * n + j) * n + k]`.
    pub fn from_structure_constants(name: impl Into<String>, dim: usize, c: Vec<Scalar>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::Dimension(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                c.len()
            )));
        }
        let mut g = LieAlgebra {
            name: name.into(),
            dim,
            c,
            ad_basis: Vec::new(),
        };
        g.ad_basis = (0..dim).map(|i| g.ad_of_basis(i)).collect();
        Ok(g)
    }

    /// Builds an algebra from brackets `[bᵢ, bⱼ] = Σ coeff·bₖ` for `i < j`
    /// (zero-based), completing antisymmetrically, and validates it.
    pub fn from_brackets(
        name: impl Into<String>,
        dim: usize,
        brackets: &[(usize, usize, BracketTerms)],
    ) -> Result<Self> {
        let mut c = vec![Scalar::zero(); dim * dim * dim];
        for (i, j, terms) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim || i >= j {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket indices ({i}, {j}) must satisfy i < j < {dim}"
                )));
            }
            for (k, v) in terms {
                if *k >= dim {
                    return Err(Error::InvalidAlgebra(format!("basis index {k} out of range")));
                }
                c[(i * dim + j) * dim + k] += v;
                c[(j * dim + i) * dim + k] -= v;
            }
        }
        let g = Self::from_structure_constants(name, dim, c)?;
        g.ensure_valid()?;
        Ok(g)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidAlgebra(report.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c[i][j][k]`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure_constants(&self) -> &[Scalar] {
        &self.c
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.dim;
        let mut antisymmetry_failures = Vec::new();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if *self.constant(i, j, k) != -self.constant(j, i, k) {
                        antisymmetry_failures.push((i, j, k));
                    }
                }
            }
        }
        let mut jacobi_failures = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = Scalar::zero();
                        for m in 0..n {
                            s += self.constant(i, j, m) * self.constant(m, k, l);
                            s += self.constant(j, k, m) * self.constant(m, i, l);
                            s += self.constant(k, i, m) * self.constant(m, j, l);
                        }
                        if !s.is_zero() {
                            jacobi_failures.push((i, j, k, l, s));
                        }
                    }
                }
            }
        }
        ValidationReport {
            antisymmetry_ok: antisymmetry_failures.is_empty(),
            jacobi_ok: jacobi_failures.is_empty(),
            antisymmetry_failures,
            jacobi_failures,
        }
    }

    fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "vector of length {} in algebra of dimension {}",
                v.len(),
                self.dim
            )))
        }
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    /// Bracket without length checks; panics on mismatched lengths.
    pub fn bracket_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = vec![Scalar::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let ad = &self.ad_basis[i];
            for k in 0..n {
                let mut acc = Scalar::zero();
                for (j, yj) in y.iter().enumerate() {
                    let a = &ad[(k, j)];
                    if !a.is_zero() && !yj.is_zero() {
                        acc += a * yj;
                    }
                }
                if !acc.is_zero() {
                    out[k] += xi * &acc;
                }
            }
        }
        out
    }

    fn ad_of_basis(&self, i: usize) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                m[(k, j)] = self.constant(i, j, k).clone();
            }
        }
        m
    }

    /// `ad(bᵢ)`.
    pub fn ad_basis(&self) -> &[Matrix] {
        &self.ad_basis
    }

    pub fn ad(&self, x: &[Scalar]) -> Result<Matrix> {
        self.check_len(x)?;
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for (xi, a) in x.iter().zip(&self.ad_basis) {
            if !xi.is_zero() {
                m = m.add(&a.scale(xi));
            }
        }
        Ok(m)
    }

    /// `κ(bᵢ, bⱼ) = tr(ad bᵢ · ad bⱼ)`.
    pub fn killing(&self) -> BilinearForm {
        Representation::adjoint(self).trace_form()
    }

    /// `span{[s, t] : s ∈ a, t ∈ b}`.
    pub fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let av = a.vectors();
        let bv = b.vectors();
        let mut out = Vec::with_capacity(av.len() * bv.len());
        for x in &av {
            for y in &bv {
                let z = self.bracket_unchecked(x, y);
                if !is_zero_vec(&z) {
                    out.push(z);
                }
            }
        }
        Subspace::from_vectors(self.dim, out)
    }

    /// `[g, g]`.
    pub fn derived_algebra(&self) -> Subspace {
        let g = Subspace::full(self.dim);
        self.bracket_span(&g, &g)
    }

    /// Strictly descending derived series of `s` (the whole algebra when
    /// `None`), ending at its stable member, plus the solvability flag.
    pub fn derived_series_of(&self, s: &Subspace) -> (Vec<Subspace>, bool) {
        let mut series = vec![s.clone()];
        loop {
            let last = series.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let next = self.bracket_span(last, last);
            if next == *last {
                break;
            }
            series.push(next);
        }
        let solvable = series.last().is_some_and(Subspace::is_zero);
        (series, solvable)
    }

    pub fn derived_series(&self) -> (Vec<Subspace>, bool) {
        self.derived_series_of(&Subspace::full(self.dim))
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().1
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        self.bracket_span(s, s).is_zero() || s.contains_subspace(&self.bracket_span(s, s))
    }

    /// `[bᵢ, S] ⊆ S` for every basis vector.
    pub fn is_ideal(&self, s: &Subspace) -> bool {
        let sv = s.vectors();
        (0..self.dim).all(|i| sv.iter().all(|v| s.contains(&self.ad_basis[i].mul_vec(v))))
    }

    /// Maximal solvable ideal, computed as the Killing-orthogonal complement
    /// of `[g, g]` and verified to be a solvable ideal before returning.
    pub fn radical(&self) -> Result<Subspace> {
        let kappa = self.killing();
        let derived = self.derived_algebra();
        let n = self.dim;
        let mut rows = Matrix::zeros(derived.dim(), n);
        for (r, d) in derived.vectors().iter().enumerate() {
            let kd = kappa.gram().mul_vec(d);
            for (c, v) in kd.into_iter().enumerate() {
                rows[(r, c)] = v;
            }
        }
        let rad = rows.nullspace();
        if !self.is_ideal(&rad) {
            return Err(Error::Inconsistent(format!(
                "computed radical of {} is not an ideal",
                self.name
            )));
        }
        if !self.derived_series_of(&rad).1 {
            return Err(Error::Inconsistent(format!(
                "computed radical of {} is not solvable",
                self.name
            )));
        }
        Ok(rad)
    }

    /// `κ` nondegenerate.
    pub fn is_semisimple(&self) -> bool {
        self.killing().is_nondegenerate()
    }

    /// Smallest ideal containing the seed vectors.
    pub fn ideal_closure(&self, seed: &[Vec<Scalar>]) -> Subspace {
        let mut s = Subspace::from_vectors(self.dim, seed.iter().cloned());
        loop {
            let mut vectors = s.vectors();
            let base = vectors.clone();
            for a in &self.ad_basis {
                for v in &base {
                    vectors.push(a.mul_vec(v));
                }
            }
            let next = Subspace::from_vectors(self.dim, vectors);
            if next == s {
                return s;
            }
            s = next;
        }
    }

    /// Simplicity by semisimplicity plus a one-dimensional commutant of
    /// `ad(g)`, cross-checked by ideal closures of the basis vectors.
    ///
    /// Over ℚ the commutant test misses simple algebras of complex type
    /// (their commutant is two-dimensional). When the two tests disagree
    /// the closure test decides and the report carries a diagnostic.
    pub fn simplicity(&self) -> SimplicityReport {
        let n = self.dim;
        let nonabelian = !self.derived_algebra().is_zero();
        let semisimple = self.is_semisimple();
        let centralizer_dim = centralizer(n, &self.ad_basis).dim();
        let basis_closures_full = n > 0 && (0..n).all(|i| self.ideal_closure(&[unit_vec(n, i)]).is_full());
        let by_centralizer = nonabelian && semisimple && centralizer_dim == 1;
        let by_closure = nonabelian && basis_closures_full;
        let diagnostic = (by_centralizer != by_closure).then(|| {
            let msg = format!(
                "simplicity tests disagree for {}: centralizer test says {}, ideal-closure test says {} (centralizer dim {})",
                self.name, by_centralizer, by_closure, centralizer_dim
            );
            log::warn!("{msg}");
            msg
        });
        SimplicityReport {
            simple: by_closure,
            nonabelian,
            semisimple,
            centralizer_dim,
            basis_closures_full,
            diagnostic,
        }
    }

    pub fn is_simple(&self) -> bool {
        self.simplicity().simple
    }

    /// `g₁ ⊕ g₂` with the basis of `g₁` first.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let (n1, n2) = (self.dim, other.dim);
        let n = n1 + n2;
        let mut c = vec![Scalar::zero(); n * n * n];
        for i in 0..n1 {
            for j in 0..n1 {
                for k in 0..n1 {
                    c[(i * n + j) * n + k] = self.constant(i, j, k).clone();
                }
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                for k in 0..n2 {
                    c[((i + n1) * n + j + n1) * n + k + n1] = other.constant(i, j, k).clone();
                }
            }
        }
        let name = match (self.name.is_empty(), other.name.is_empty()) {
            (true, _) => other.name.clone(),
            (_, true) => self.name.clone(),
            _ => format!("{}+{}", self.name, other.name),
        };
        LieAlgebra::from_structure_constants(name, n, c).expect("consistent tensor size")
    }

    /// Structure constants of the subalgebra spanned by `basis` (which must
    /// be linearly independent and closed under the bracket), in that basis.
    pub fn subalgebra(&self, name: impl Into<String>, basis: &[Vec<Scalar>]) -> Result<LieAlgebra> {
        let m = basis.len();
        for v in basis {
            self.check_len(v)?;
        }
        let cols = Matrix::from_columns(self.dim, basis);
        if cols.rank() != m {
            return Err(Error::Precondition("subalgebra basis is linearly dependent".into()));
        }
        let mut c = vec![Scalar::zero(); m * m * m];
        for i in 0..m {
            for j in 0..m {
                let z = self.bracket_unchecked(&basis[i], &basis[j]);
                let coeffs = cols
                    .solve(&z)
                    .ok_or_else(|| Error::Precondition("span is not closed under the bracket".into()))?;
                for (k, v) in coeffs.into_iter().enumerate() {
                    c[(i * m + j) * m + k] = v;
                }
            }
        }
        LieAlgebra::from_structure_constants(name, m, c)
    }

    /// The same algebra in the basis given by the columns of the invertible `p`.
    pub fn in_basis(&self, p: &Matrix) -> Result<LieAlgebra> {
        if p.rows() != self.dim || p.cols() != self.dim || p.inverse().is_none() {
            return Err(Error::Precondition("change of basis must be invertible n×n".into()));
        }
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|i| p.column(i)).collect();
        self.subalgebra(self.name.clone(), &cols)
    }

    /// `g / ideal` on the complement spanned by the non-pivot coordinates of
    /// the ideal's echelon basis.
    pub fn quotient(&self, ideal: &Subspace) -> Result<(LieAlgebra, Vec<usize>)> {
        if !self.is_ideal(ideal) {
            return Err(Error::Precondition(
                "quotient by a subspace that is not an ideal".into(),
            ));
        }
        let n = self.dim;
        let complement: Vec<usize> = (0..n).filter(|c| !ideal.pivots().contains(c)).collect();
        let m = complement.len();
        let mut c = vec![Scalar::zero(); m * m * m];
        for (a, &i) in complement.iter().enumerate() {
            for (b, &j) in complement.iter().enumerate() {
                let z = self.bracket_unchecked(&unit_vec(n, i), &unit_vec(n, j));
                let reduced = ideal.residual(&z);
                for (k, &col) in complement.iter().enumerate() {
                    c[(a * m + b) * m + k] = reduced[col].clone();
                }
            }
        }
        let g = LieAlgebra::from_structure_constants(format!("{}/ideal", self.name), m, c)?;
        Ok((g, complement))
    }

    /// Whether the linear map `phi` (m×n, from this algebra to `target`)
    /// preserves brackets on all basis pairs.
    pub fn is_homomorphism_to(&self, target: &LieAlgebra, phi: &Matrix) -> bool {
        let n = self.dim;
        if phi.cols() != n || phi.rows() != target.dim {
            return false;
        }
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let lhs = phi.mul_vec(&self.bracket_unchecked(&unit_vec(n, i), &unit_vec(n, j)));
                let rhs = target.bracket_unchecked(&phi.column(i), &phi.column(j));
                lhs == rhs
            })
        })
    }

    pub fn is_automorphism(&self, phi: &Matrix) -> bool {
        phi.inverse().is_some() && self.is_homomorphism_to(self, phi)
    }
}
