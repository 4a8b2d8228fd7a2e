//! JSON algebra documents: `{name, dim, brackets: [{i, j, coeffs: [{k, num, den}]}]}`
//! with 1-based indices, `i < j`, and exact `num/den` coefficients.

use nahm_core::liealg::{catalog, LieAlgebra};
use nahm_core::linalg::{q, Scalar};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<Coeff>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coeff {
    pub k: usize,
    pub num: i64,
    pub den: i64,
}

/// A rational as `{num, den}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn from_scalar(s: &Scalar) -> Result<Self, CliError> {
        let num = i64::try_from(&s.numer());
        let den = i64::try_from(&s.denom());
        match (num, den) {
            (Ok(num), Ok(den)) => Ok(Rational { num, den }),
            _ => Err(CliError::Input(format!("rational {s} does not fit in 64-bit integers"))),
        }
    }
}

impl AlgebraDocument {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed algebra document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Structure constants after checking indices, without the Jacobi check.
    pub fn to_algebra_unchecked(&self) -> Result<LieAlgebra, CliError> {
        let n = self.dim;
        if n == 0 {
            return Err(CliError::Input("dim must be positive".into()));
        }
        let mut c = vec![Scalar::zero(); n * n * n];
        let mut seen = std::collections::BTreeSet::new();
        for b in &self.brackets {
            if b.i == 0 || b.j == 0 || b.i > n || b.j > n {
                return Err(CliError::Input(format!(
                    "bracket [{}, {}]: index out of range 1..{n}",
                    b.i, b.j
                )));
            }
            if b.i >= b.j {
                return Err(CliError::Input(format!("bracket [{}, {}]: need i < j", b.i, b.j)));
            }
            if !seen.insert((b.i, b.j)) {
                return Err(CliError::Input(format!("bracket [{}, {}] given twice", b.i, b.j)));
            }
            let (i, j) = (b.i - 1, b.j - 1);
            for co in &b.coeffs {
                if co.k == 0 || co.k > n {
                    return Err(CliError::Input(format!(
                        "coefficient index k = {} out of range 1..{n}",
                        co.k
                    )));
                }
                if co.den <= 0 {
                    return Err(CliError::Input(format!(
                        "coefficient denominator {} must be positive",
                        co.den
                    )));
                }
                let k = co.k - 1;
                let v = &c[(i * n + j) * n + k] + &q(co.num, co.den);
                c[(j * n + i) * n + k] = -&v;
                c[(i * n + j) * n + k] = v;
            }
        }
        LieAlgebra::from_structure_constants(self.name.clone(), n, c).map_err(|e| CliError::Input(e.to_string()))
    }

    /// Parses and validates; Jacobi failures report the failing quadruple.
    pub fn to_algebra(&self) -> Result<LieAlgebra, CliError> {
        let g = self.to_algebra_unchecked()?;
        let report = g.validate();
        if !report.is_valid() {
            return Err(CliError::Input(format!(
                "algebra `{}` is not a Lie algebra: {report}",
                self.name
            )));
        }
        Ok(g)
    }

    /// Canonical document: brackets `i < j` in order, nonzero coefficients
    /// in order of `k`.
    pub fn from_algebra(g: &LieAlgebra) -> Result<Self, CliError> {
        let n = g.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs = (0..n)
                    .filter(|&k| !g.constant(i, j, k).is_zero())
                    .map(|k| {
                        let r = Rational::from_scalar(g.constant(i, j, k))?;
                        Ok(Coeff {
                            k: k + 1,
                            num: r.num,
                            den: r.den,
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                if !coeffs.is_empty() {
                    brackets.push(BracketEntry {
                        i: i + 1,
                        j: j + 1,
                        coeffs,
                    });
                }
            }
        }
        Ok(AlgebraDocument {
            name: g.name().to_string(),
            dim: n,
            brackets,
        })
    }
}

/// Resolves `catalog:NAME` or a path to a JSON document.
pub fn load_source(source: &str) -> Result<LieAlgebra, CliError> {
    load_source_unchecked(source).and_then(|g| {
        let report = g.validate();
        if report.is_valid() {
            Ok(g)
        } else {
            Err(CliError::Input(format!(
                "algebra `{}` is not a Lie algebra: {report}",
                g.name()
            )))
        }
    })
}

pub fn load_source_unchecked(source: &str) -> Result<LieAlgebra, CliError> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return catalog(name).map_err(|e| CliError::Input(e.to_string()));
    }
    let text = std::fs::read_to_string(source).map_err(|e| CliError::Input(format!("cannot read {source}: {e}")))?;
    AlgebraDocument::from_json(&text)?.to_algebra_unchecked()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn so3_doc() -> AlgebraDocument {
        AlgebraDocument::from_json(
            r#"{"name":"so3","dim":3,"brackets":[
                {"i":1,"j":2,"coeffs":[{"k":3,"num":1,"den":1}]},
                {"i":2,"j":3,"coeffs":[{"k":1,"num":1,"den":1}]},
                {"i":1,"j":3,"coeffs":[{"k":2,"num":-1,"den":1}]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn so3_document_matches_catalog() {
        let g = so3_doc().to_algebra().unwrap();
        assert_eq!(g.structure_constants(), catalog("so3").unwrap().structure_constants());
    }

    #[test]
    fn empty_brackets_give_abelian() {
        let d = AlgebraDocument::from_json(r#"{"name":"a","dim":2,"brackets":[]}"#).unwrap();
        let g = d.to_algebra().unwrap();
        assert_eq!(
            g.structure_constants(),
            catalog("abelian(2)").unwrap().structure_constants()
        );
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [e1,e2] = e1, [e1,e3] = e3, [e2,e3] = 0
        let d = AlgebraDocument::from_json(
            r#"{"name":"bad","dim":3,"brackets":[
                {"i":1,"j":2,"coeffs":[{"k":1,"num":1,"den":1}]},
                {"i":1,"j":3,"coeffs":[{"k":3,"num":1,"den":1}]}]}"#,
        )
        .unwrap();
        let report = d.to_algebra_unchecked().unwrap().validate();
        assert!(!report.jacobi_ok);
        let (i, j, k, _, _) = report.jacobi_failures[0].clone();
        assert_eq!((i, j, k), (0, 1, 2));
        let err = d.to_algebra().unwrap_err().to_string();
        assert!(err.contains("Jacobi") || err.contains("jacobi"), "{err}");
    }

    #[test]
    fn bad_documents_are_rejected() {
        for text in [
            r#"{"name":"x","dim":2,"brackets":[{"i":1,"j":3,"coeffs":[]}]}"#,
            r#"{"name":"x","dim":2,"brackets":[{"i":2,"j":1,"coeffs":[]}]}"#,
            r#"{"name":"x","dim":2,"brackets":[{"i":1,"j":2,"coeffs":[{"k":1,"num":1,"den":0}]}]}"#,
            r#"{"name":"x","dim":2,"brackets":[{"i":1,"j":2,"coeffs":[{"k":3,"num":1,"den":1}]}]}"#,
            r#"{"name":"x","dim":0}"#,
        ] {
            assert!(
                AlgebraDocument::from_json(text).unwrap().to_algebra().is_err(),
                "{text}"
            );
        }
        assert!(AlgebraDocument::from_json("{not json").is_err());
        assert!(AlgebraDocument::from_json(r#"{"name":"x","dim":2,"extra":1}"#).is_err());
    }

    #[test]
    fn catalog_documents_round_trip() {
        for name in ["so3", "sl2", "heisenberg", "aff1", "abelian(3)", "sl2+aff1", "so3+so3"] {
            let g = catalog(name).unwrap();
            let doc = AlgebraDocument::from_algebra(&g).unwrap();
            let again = AlgebraDocument::from_json(&doc.to_json()).unwrap();
            assert_eq!(again, doc);
            let h = again.to_algebra().unwrap();
            assert_eq!(h.structure_constants(), g.structure_constants(), "{name}");
            assert_eq!(AlgebraDocument::from_algebra(&h).unwrap(), doc);
        }
    }
}
