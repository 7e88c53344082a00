//! Built-in algebras.
//!
//! Basis conventions:
//! - `abelian<n>`: zero bracket.
//! - `solvable2`: `[e1, e2] = e2`.
//! - `heisenberg3`: `[e1, e2] = e3`.
//! - `sl2`: basis `(h, e, f)` with `[h, e] = 2e`, `[h, f] = -2f`, `[e, f] = h`.
//! - `so3`: `[e_i, e_j] = eps_{ijk} e_k`, i.e. `e1 = -M23`, `e2 = M13`, `e3 = -M12`
//!   where `M_ab = E_ab - E_ba`.
//! - `so<n>`, `n != 3`: basis `M_ab`, `a < b`, in lexicographic order of `(a, b)`.
//! - `strict_upper_triangular<n>`: elementary matrices `E_ab`, `a < b`, lexicographic.

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::rational::int;

pub const MAX_ABELIAN: usize = 64;
pub const MAX_SO: usize = 6;
pub const MAX_STRICT_UPPER: usize = 6;

type IntMatrix = Vec<Vec<i64>>;

fn commutator(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out[i][j] += a[i][k] * b[k][j] - b[i][k] * a[k][j];
            }
        }
    }
    out
}

/// Structure constants of a matrix Lie algebra: `coords` must express a
/// matrix of the span in the given basis.
fn from_matrix_basis(
    name: String,
    basis: &[IntMatrix],
    coords: impl Fn(&IntMatrix) -> Vec<i64>,
) -> LieAlgebra {
    let dim = basis.len();
    let mut entries = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let c = coords(&commutator(&basis[i], &basis[j]));
            for (k, v) in c.into_iter().enumerate() {
                if v != 0 {
                    entries.push(((i, j, k), int(v)));
                }
            }
        }
    }
    LieAlgebra::new(name, dim, entries).expect("matrix algebras satisfy Jacobi")
}

fn unit(n: usize, a: usize, b: usize, v: i64) -> IntMatrix {
    let mut m = vec![vec![0; n]; n];
    m[a][b] = v;
    m
}

fn rotation(n: usize, a: usize, b: usize) -> IntMatrix {
    let mut m = unit(n, a, b, 1);
    m[b][a] = -1;
    m
}

fn upper_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect()
}

fn check_range(name: &str, n: usize, lo: usize, hi: usize) -> Result<()> {
    if n < lo || n > hi {
        return Err(Error::ParamOutOfRange {
            name: name.to_string(),
            param: n,
            supported: format!("{lo}..={hi}"),
        });
    }
    Ok(())
}

pub fn abelian(n: usize) -> Result<LieAlgebra> {
    check_range("abelian", n, 1, MAX_ABELIAN)?;
    LieAlgebra::new(format!("abelian{n}"), n, std::iter::empty())
}

pub fn solvable2() -> LieAlgebra {
    LieAlgebra::new("solvable2", 2, [((0, 1, 1), int(1))]).expect("valid")
}

pub fn heisenberg3() -> LieAlgebra {
    LieAlgebra::new("heisenberg3", 3, [((0, 1, 2), int(1))]).expect("valid")
}

pub fn sl2() -> LieAlgebra {
    let h = vec![vec![1, 0], vec![0, -1]];
    let e = unit(2, 0, 1, 1);
    let f = unit(2, 1, 0, 1);
    from_matrix_basis("sl2".into(), &[h, e, f], |m| {
        vec![m[0][0], m[0][1], m[1][0]]
    })
}

pub fn so(n: usize) -> Result<LieAlgebra> {
    check_range("so", n, 2, MAX_SO)?;
    let name = format!("so{n}");
    if n == 3 {
        // e1 = -M23, e2 = M13, e3 = -M12
        let basis = [rotation(3, 2, 1), rotation(3, 0, 2), rotation(3, 1, 0)];
        return Ok(from_matrix_basis(name, &basis, |m| {
            vec![-m[1][2], m[0][2], -m[0][1]]
        }));
    }
    let pairs = upper_pairs(n);
    let basis: Vec<IntMatrix> = pairs.iter().map(|&(a, b)| rotation(n, a, b)).collect();
    Ok(from_matrix_basis(name, &basis, |m| {
        pairs.iter().map(|&(a, b)| m[a][b]).collect()
    }))
}

pub fn strict_upper_triangular(n: usize) -> Result<LieAlgebra> {
    check_range("strict_upper_triangular", n, 2, MAX_STRICT_UPPER)?;
    let pairs = upper_pairs(n);
    let basis: Vec<IntMatrix> = pairs.iter().map(|&(a, b)| unit(n, a, b, 1)).collect();
    Ok(from_matrix_basis(
        format!("strict_upper_triangular{n}"),
        &basis,
        |m| pairs.iter().map(|&(a, b)| m[a][b]).collect(),
    ))
}

/// Looks up a catalog algebra by family name and optional size parameter.
pub fn catalog(name: &str, param: Option<usize>) -> Result<LieAlgebra> {
    let need = |p: Option<usize>| {
        p.ok_or_else(|| Error::ParamOutOfRange {
            name: name.to_string(),
            param: 0,
            supported: "a size parameter is required".into(),
        })
    };
    let fixed = |alg: LieAlgebra, n: usize| match param {
        None => Ok(alg),
        Some(p) if p == n => Ok(alg),
        Some(p) => Err(Error::ParamOutOfRange {
            name: name.to_string(),
            param: p,
            supported: n.to_string(),
        }),
    };
    match name {
        "abelian" => abelian(need(param)?),
        "solvable" | "solvable2" => fixed(solvable2(), 2),
        "heisenberg" | "heisenberg3" => fixed(heisenberg3(), 3),
        "sl" | "sl2" => fixed(sl2(), 2),
        "so" => so(need(param)?),
        "strict_upper_triangular" | "sut" => strict_upper_triangular(need(param)?),
        _ => Err(Error::UnknownAlgebra(name.to_string())),
    }
}

/// Resolves compact names such as `so3`, `abelian4`, `strict_upper_triangular5`.
pub fn lookup(spec: &str) -> Result<LieAlgebra> {
    let spec = spec.trim();
    if let Ok(alg) = catalog(spec, None) {
        return Ok(alg);
    }
    let split = spec.trim_end_matches(|c: char| c.is_ascii_digit()).len();
    let (family, digits) = spec.split_at(split);
    if digits.is_empty() || family.is_empty() {
        return Err(Error::UnknownAlgebra(spec.to_string()));
    }
    let family = family.trim_end_matches('_');
    let n: usize = digits
        .parse()
        .map_err(|_| Error::UnknownAlgebra(spec.to_string()))?;
    catalog(family, Some(n))
}

pub struct CatalogFamily {
    pub pattern: &'static str,
    pub sizes: Vec<usize>,
    pub basis: &'static str,
}

/// Every family with its supported size parameters (all instances listed).
pub fn families() -> Vec<CatalogFamily> {
    vec![
        CatalogFamily {
            pattern: "abelian",
            sizes: (1..=MAX_ABELIAN).collect(),
            basis: "zero bracket",
        },
        CatalogFamily {
            pattern: "solvable2",
            sizes: vec![],
            basis: "[e1,e2] = e2",
        },
        CatalogFamily {
            pattern: "heisenberg3",
            sizes: vec![],
            basis: "[e1,e2] = e3",
        },
        CatalogFamily {
            pattern: "sl2",
            sizes: vec![],
            basis: "(h, e, f): [h,e] = 2e, [h,f] = -2f, [e,f] = h",
        },
        CatalogFamily {
            pattern: "so",
            sizes: (2..=MAX_SO).collect(),
            basis: "so3: [e_i,e_j] = eps_ijk e_k; otherwise M_ab = E_ab - E_ba, a<b, lexicographic",
        },
        CatalogFamily {
            pattern: "strict_upper_triangular",
            sizes: (2..=MAX_STRICT_UPPER).collect(),
            basis: "E_ab, a<b, lexicographic",
        },
    ]
}

/// Catalog algebras exercised by the verification suite.
pub fn standard_suite() -> Vec<LieAlgebra> {
    let mut out: Vec<LieAlgebra> = (1..=5).map(|n| abelian(n).expect("in range")).collect();
    out.push(solvable2());
    out.push(heisenberg3());
    for n in 3..=5 {
        out.push(so(n).expect("in range"));
    }
    out.push(sl2());
    for n in 3..=5 {
        out.push(strict_upper_triangular(n).expect("in range"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraVector;

    fn eps(i: usize, j: usize, k: usize) -> i64 {
        match (i, j, k) {
            (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
            (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
            _ => 0,
        }
    }

    #[test]
    fn so3_is_levi_civita() {
        let so3 = so(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(so3.structure_constant(i, j, k), int(eps(i, j, k)));
                }
            }
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(so(4).unwrap().dim(), 6);
        assert_eq!(so(6).unwrap().dim(), 15);
        assert_eq!(strict_upper_triangular(6).unwrap().dim(), 15);
        assert_eq!(abelian(5).unwrap().dim(), 5);
        assert!(abelian(5).unwrap().is_abelian());
        assert_eq!(solvable2().structure_constant(0, 1, 1), int(1));
    }

    #[test]
    fn lookup_names() {
        assert_eq!(lookup("so3").unwrap(), so(3).unwrap());
        assert_eq!(lookup("abelian4").unwrap().dim(), 4);
        assert_eq!(lookup("solvable2").unwrap(), solvable2());
        assert_eq!(lookup("sl2").unwrap(), sl2());
        assert_eq!(lookup("strict_upper_triangular5").unwrap().dim(), 10);
        assert_eq!(catalog("so", Some(3)).unwrap(), so(3).unwrap());
        assert!(matches!(lookup("so9"), Err(Error::ParamOutOfRange { .. })));
        assert!(matches!(lookup("g2"), Err(Error::UnknownAlgebra(_))));
        assert!(matches!(lookup("e8"), Err(Error::UnknownAlgebra(_))));
        assert!(matches!(
            catalog("so", None),
            Err(Error::ParamOutOfRange { .. })
        ));
    }

    #[test]
    fn sl2_relations() {
        let l = sl2();
        let e = |i| AlgebraVector::basis(3, i);
        assert_eq!(l.bracket(&e(0), &e(1)).unwrap(), e(1).scale(&int(2)));
        assert_eq!(l.bracket(&e(0), &e(2)).unwrap(), e(2).scale(&int(-2)));
        assert_eq!(l.bracket(&e(1), &e(2)).unwrap(), e(0));
    }

    #[test]
    fn every_catalog_algebra_satisfies_jacobi() {
        let mut all = standard_suite();
        all.push(so(6).unwrap());
        all.push(so(2).unwrap());
        all.push(strict_upper_triangular(6).unwrap());
        for alg in all {
            assert!(alg.jacobi_defect().is_empty(), "{}", alg.name());
        }
    }
}
