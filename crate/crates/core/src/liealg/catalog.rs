use super::{LieAlgebra, Representation};
use crate::linalg::{q, Matrix, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
}

/// The named algebras accepted by [`catalog`], excluding sums.
pub fn catalog_entries() -> &'static [CatalogEntry] {
    &[
        CatalogEntry {
            name: "so3",
            description: "compact simple, basis e1,e2,e3 with [e_i,e_{i+1}] = e_{i+2}",
        },
        CatalogEntry {
            name: "sl2",
            description: "split simple, basis h,e,f with [h,e] = 2e, [h,f] = -2f, [e,f] = h",
        },
        CatalogEntry {
            name: "heisenberg",
            description: "nilpotent, basis x,y,z with [x,y] = z",
        },
        CatalogEntry {
            name: "aff1",
            description: "solvable, basis a,b with [a,b] = b",
        },
        CatalogEntry {
            name: "abelian(n)",
            description: "n-dimensional with zero bracket",
        },
    ]
}

/// Looks up a catalog algebra. Sums are written `a+b+…`, e.g. `sl2+aff1`.
pub fn catalog(name: &str) -> Result<LieAlgebra> {
    let name = name.trim();
    if name.contains('+') {
        let mut parts = name.split('+');
        let first = catalog(parts.next().unwrap_or_default())?;
        let sum = parts.try_fold(first, |acc, p| Ok::<_, Error>(acc.direct_sum(&catalog(p)?)))?;
        return Ok(sum.with_name(name));
    }
    let one = Scalar::one;
    match name {
        "so3" => LieAlgebra::from_brackets(
            name,
            3,
            &[
                (0, 1, vec![(2, one())]),
                (1, 2, vec![(0, one())]),
                (0, 2, vec![(1, -one())]),
            ],
        ),
        "sl2" => LieAlgebra::from_brackets(
            name,
            3,
            &[
                (0, 1, vec![(1, q(2, 1))]),
                (0, 2, vec![(2, q(-2, 1))]),
                (1, 2, vec![(0, one())]),
            ],
        ),
        "heisenberg" => LieAlgebra::from_brackets(name, 3, &[(0, 1, vec![(2, one())])]),
        "aff1" => LieAlgebra::from_brackets(name, 2, &[(0, 1, vec![(1, one())])]),
        _ => {
            let n = name
                .strip_prefix("abelian(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|d| d.trim().parse::<usize>().ok())
                .ok_or_else(|| Error::UnknownAlgebra(name.to_string()))?;
            LieAlgebra::from_brackets(name, n, &[])
        }
    }
}

/// The smallest faithful matrix representation of a catalog summand, or the
/// block sum of them for catalog sums. Only so3 and sl2 have one here
/// (so3 acts on ℚ³ by `ad`, sl2 on ℚ² by trace-free matrices).
pub fn defining_representation(g: &LieAlgebra) -> Result<Representation> {
    let blocks: Vec<Vec<Matrix>> = g
        .name()
        .split('+')
        .map(|part| match part.trim() {
            "so3" => Ok(catalog("so3")?.ad_basis().to_vec()),
            "sl2" => Ok(vec![
                Matrix::from_ints(&[[1, 0], [0, -1]]),
                Matrix::from_ints(&[[0, 1], [0, 0]]),
                Matrix::from_ints(&[[0, 0], [1, 0]]),
            ]),
            other => Err(Error::InvalidRepresentation(format!(
                "no defining representation for `{other}`"
            ))),
        })
        .collect::<Result<_>>()?;
    let sizes: Vec<usize> = blocks.iter().map(|b| b[0].rows()).collect();
    let total: usize = sizes.iter().sum();
    let mut rho = Vec::with_capacity(g.dim());
    let mut offset = 0;
    for (block, size) in blocks.iter().zip(&sizes) {
        for m in block {
            let mut big = Matrix::zeros(total, total);
            big.set_block(offset, offset, m);
            rho.push(big);
        }
        offset += size;
    }
    Representation::new(g, rho)
}
