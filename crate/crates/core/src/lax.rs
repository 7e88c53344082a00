//! Lax vector fields `X_B = A B` and the deformed bracket of potentials.
//!
//! Two independent formulas are provided for the deformed bracket `{B, C}`:
//! the commutator form [`deformed_bracket_commutator`] and the directional
//! derivative form [`deformed_bracket_directional`]. They must agree exactly;
//! `B -> X_B` is then a homomorphism onto Lax fields.

use crate::algebra::AlgebraVector;
use crate::endo::CanonicalPackage;
use crate::error::{Error, Result};
use crate::report::{Status, VerificationReport};
use crate::tensor::PolyVectorField;

#[derive(Clone, Debug)]
pub struct LaxSystem {
    pub pkg: CanonicalPackage,
    pub potential: PolyVectorField,
    pub field: PolyVectorField,
}

impl LaxSystem {
    pub fn dim(&self) -> usize {
        self.pkg.dim()
    }
}

fn check(pkg: &CanonicalPackage, fields: &[&PolyVectorField]) -> Result<()> {
    for f in fields {
        if f.dim() != pkg.dim() {
            return Err(Error::DimensionMismatch {
                expected: pkg.dim(),
                found: f.dim(),
            });
        }
    }
    Ok(())
}

/// `X_B^k = x^i c^k_{ij} B^j`.
pub fn lax_field(pkg: &CanonicalPackage, potential: &PolyVectorField) -> Result<LaxSystem> {
    check(pkg, &[potential])?;
    let field = pkg.apply(potential)?;
    Ok(LaxSystem {
        pkg: pkg.clone(),
        potential: potential.clone(),
        field,
    })
}

fn x_of(pkg: &CanonicalPackage, b: &PolyVectorField) -> PolyVectorField {
    pkg.apply(b).expect("dimension checked by caller")
}

/// `{B,C} = -[[B,C]] + [X_B, C] + [B, X_C] - X_{[B,C]}` where `[[.,.]]` is the
/// pointwise algebra bracket and `[.,.]` the vector-field commutator.
pub fn deformed_bracket_commutator(
    pkg: &CanonicalPackage,
    b: &PolyVectorField,
    c: &PolyVectorField,
) -> Result<PolyVectorField> {
    check(pkg, &[b, c])?;
    let xb = x_of(pkg, b);
    let xc = x_of(pkg, c);
    let pointwise = pkg.lambda.pointwise_bracket(b, c)?;
    let t1 = xb.commutator(c)?;
    let t2 = b.commutator(&xc)?;
    let t3 = x_of(pkg, &b.commutator(c)?);
    Ok(&(&(&t1 + &t2) - &t3) - &pointwise)
}

/// `{B,C} = [[B,C]] + X_B(C) - X_C(B)` with `X_B(C)` the componentwise
/// directional derivative of `C` along `X_B`.
pub fn deformed_bracket_directional(
    pkg: &CanonicalPackage,
    b: &PolyVectorField,
    c: &PolyVectorField,
) -> Result<PolyVectorField> {
    check(pkg, &[b, c])?;
    let xb = x_of(pkg, b);
    let xc = x_of(pkg, c);
    let pointwise = pkg.lambda.pointwise_bracket(b, c)?;
    Ok(&(&pointwise + &xb.derive_field(c)?) - &xc.derive_field(b)?)
}

/// The deformed bracket (directional form).
pub fn deformed_bracket(
    pkg: &CanonicalPackage,
    b: &PolyVectorField,
    c: &PolyVectorField,
) -> Result<PolyVectorField> {
    deformed_bracket_directional(pkg, b, c)
}

fn residuals(label: &str, f: &PolyVectorField) -> Vec<String> {
    f.components()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, p)| format!("{label}[d{}] = {}", k + 1, p))
        .collect()
}

/// Checks `[X_B, X_C] = X_{B,C}` and that both bracket formulas agree.
pub fn verify_homomorphism(
    pkg: &CanonicalPackage,
    b: &PolyVectorField,
    c: &PolyVectorField,
) -> Result<VerificationReport> {
    let via_commutator = deformed_bracket_commutator(pkg, b, c)?;
    let via_directional = deformed_bracket_directional(pkg, b, c)?;
    let lhs = x_of(pkg, b).commutator(&x_of(pkg, c))?;
    let rhs = x_of(pkg, &via_commutator);
    let mut res = residuals("[X_B,X_C] - X_{B,C}", &(&lhs - &rhs));
    res.extend(residuals(
        "commutator form - directional form",
        &(&via_commutator - &via_directional),
    ));
    Ok(VerificationReport::from_residuals(
        "lax-homomorphism",
        "[X_B,X_C] = X_{B,C}",
        res,
    ))
}

/// Cyclic sum `{B,{C,D}} + {C,{D,B}} + {D,{B,C}} = 0`.
pub fn verify_jacobi_deformed(
    pkg: &CanonicalPackage,
    b: &PolyVectorField,
    c: &PolyVectorField,
    d: &PolyVectorField,
) -> Result<VerificationReport> {
    check(pkg, &[b, c, d])?;
    let br = |u: &PolyVectorField, v: &PolyVectorField| deformed_bracket(pkg, u, v);
    let sum = &(&br(b, &br(c, d)?)? + &br(c, &br(d, b)?)?) + &br(d, &br(b, c)?)?;
    Ok(VerificationReport::from_residuals(
        "deformed-jacobi",
        "{B,{C,D}} + {C,{D,B}} + {D,{B,C}} = 0",
        residuals("cyclic sum", &sum),
    ))
}

/// If `X_B` and `X_C` commute with `x`, then so does `X_{B,C}`.
pub fn symmetry_closure(
    pkg: &CanonicalPackage,
    x: &PolyVectorField,
    b: &PolyVectorField,
    c: &PolyVectorField,
) -> Result<VerificationReport> {
    check(pkg, &[x, b, c])?;
    const ID: &str = "symmetry-closure";
    const STATEMENT: &str = "[X_B,X] = [X_C,X] = 0 implies [X_{B,C},X] = 0";
    let mut hyp = residuals("[X_B,X]", &x_of(pkg, b).commutator(x)?);
    hyp.extend(residuals("[X_C,X]", &x_of(pkg, c).commutator(x)?));
    if !hyp.is_empty() {
        return Ok(VerificationReport {
            identity: ID.into(),
            paper_ref: STATEMENT.into(),
            status: Status::HypothesisNotSatisfied,
            witness: Some(hyp),
        });
    }
    let bc = deformed_bracket(pkg, b, c)?;
    let res = residuals("[X_{B,C},X]", &x_of(pkg, &bc).commutator(x)?);
    Ok(VerificationReport::from_residuals(ID, STATEMENT, res))
}

/// Closed forms for brackets of constant and fundamental potentials over all
/// basis pairs: `{v~, w~} = [v,w]~`, `{X_v, w~} = X_[v,w]` and
/// `{X_v, X_w} = X_{A [v,w]~} - [[X_v, X_w]]`.
pub fn verify_closed_forms(pkg: &CanonicalPackage) -> Result<Vec<VerificationReport>> {
    let n = pkg.dim();
    let (mut constants, mut mixed, mut fundamental) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..n {
        let v = AlgebraVector::basis(n, i);
        let vt = PolyVectorField::constant(&v);
        let xv = pkg.infinitesimal_rep(&v)?;
        for j in 0..n {
            let w = AlgebraVector::basis(n, j);
            let wt = PolyVectorField::constant(&w);
            let xw = pkg.infinitesimal_rep(&w)?;
            let vw = pkg.algebra.bracket(&v, &w)?;
            let tag = format!("(e{},e{})", i + 1, j + 1);

            let lhs = deformed_bracket(pkg, &vt, &wt)?;
            constants.extend(residuals(
                &format!("{{v,w}} - [v,w] {tag}"),
                &(&lhs - &PolyVectorField::constant(&vw)),
            ));

            let lhs = deformed_bracket(pkg, &xv, &wt)?;
            mixed.extend(residuals(
                &format!("{{X_v,w}} - X_[v,w] {tag}"),
                &(&lhs - &pkg.infinitesimal_rep(&vw)?),
            ));

            let lhs = deformed_bracket(pkg, &xv, &xw)?;
            let rhs = &x_of(pkg, &pkg.infinitesimal_rep(&vw)?)
                - &pkg.lambda.pointwise_bracket(&xv, &xw)?;
            fundamental.extend(residuals(
                &format!("{{X_v,X_w}} - (X_(A[v,w]) - [[X_v,X_w]]) {tag}"),
                &(&lhs - &rhs),
            ));
        }
    }
    Ok(vec![
        VerificationReport::from_residuals("bracket-constants", "{v~,w~} = [v,w]~", constants),
        VerificationReport::from_residuals(
            "bracket-fundamental-constant",
            "{X_v,w~} = X_[v,w]",
            mixed,
        ),
        VerificationReport::from_residuals(
            "bracket-fundamental-pair",
            "{X_v,X_w} = X_{A[v,w]} - [[X_v,X_w]]",
            fundamental,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fieldlang::{parse_field, Params};
    use crate::poly::MultiPoly;
    use crate::rational::int;

    fn abc(a: i64, b: i64, c: i64) -> Params {
        [("a", a), ("b", b), ("c", c)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), int(v)))
            .collect()
    }

    #[test]
    fn euler_potential_gives_euler_field() {
        let pkg = CanonicalPackage::build(catalog::so(3).unwrap());
        let b = parse_field("d1: a*x1; d2: b*x2; d3: c*x3", 3, &abc(1, 2, 3)).unwrap();
        let sys = lax_field(&pkg, &b).unwrap();
        let expected = parse_field(
            "d1: (c-b)*x2*x3; d2: (a-c)*x3*x1; d3: (b-a)*x1*x2",
            3,
            &abc(1, 2, 3),
        )
        .unwrap();
        assert_eq!(sys.field, expected);
    }

    #[test]
    fn liouville_potential_is_inert() {
        for alg in [
            catalog::sl2(),
            catalog::so(4).unwrap(),
            catalog::solvable2(),
        ] {
            let pkg = CanonicalPackage::build(alg);
            assert!(lax_field(&pkg, &pkg.liouville).unwrap().field.is_zero());
        }
    }

    #[test]
    fn constant_potential_is_fundamental_field() {
        let pkg = CanonicalPackage::build(catalog::so(3).unwrap());
        let e3 = AlgebraVector::basis(3, 2);
        let sys = lax_field(&pkg, &PolyVectorField::constant(&e3)).unwrap();
        assert_eq!(sys.field, pkg.infinitesimal_rep(&e3).unwrap());
    }

    #[test]
    fn bracket_of_constants() {
        let pkg = CanonicalPackage::build(catalog::so(3).unwrap());
        let e = |i| PolyVectorField::constant(&AlgebraVector::basis(3, i));
        for f in [deformed_bracket_commutator, deformed_bracket_directional] {
            assert_eq!(f(&pkg, &e(0), &e(1)).unwrap(), e(2));
        }
    }

    #[test]
    fn bracket_with_itself_vanishes() {
        let pkg = CanonicalPackage::build(catalog::sl2());
        let b = parse_field("d1: x1*x2 + 3; d3: x3^2 - x1", 3, &Params::new()).unwrap();
        assert!(deformed_bracket_commutator(&pkg, &b, &b).unwrap().is_zero());
        assert!(deformed_bracket_directional(&pkg, &b, &b)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn abelian_bracket_vanishes() {
        let pkg = CanonicalPackage::build(catalog::abelian(3).unwrap());
        let b = parse_field("d1: x1*x2; d2: x3", 3, &Params::new()).unwrap();
        let c = parse_field("d3: x1^2 + x2", 3, &Params::new()).unwrap();
        assert!(deformed_bracket_directional(&pkg, &b, &c)
            .unwrap()
            .is_zero());
        assert!(verify_homomorphism(&pkg, &b, &c).unwrap().passed());
    }

    #[test]
    fn mixed_example_agrees_across_formulas() {
        let pkg = CanonicalPackage::build(catalog::so(3).unwrap());
        let e1 = PolyVectorField::constant(&AlgebraVector::basis(3, 0));
        let c = PolyVectorField::new(vec![
            MultiPoly::var(3, 0),
            MultiPoly::zero(3),
            MultiPoly::zero(3),
        ])
        .unwrap();
        let a = deformed_bracket_commutator(&pkg, &e1, &c).unwrap();
        let b = deformed_bracket_directional(&pkg, &e1, &c).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn homomorphism_on_solvable_constants() {
        let pkg = CanonicalPackage::build(catalog::solvable2());
        let e = |i| PolyVectorField::constant(&AlgebraVector::basis(2, i));
        assert!(verify_homomorphism(&pkg, &e(0), &e(1)).unwrap().passed());
    }

    #[test]
    fn jacobi_with_zero_member() {
        let pkg = CanonicalPackage::build(catalog::so(3).unwrap());
        let b = parse_field("d1: x2^2; d2: x1*x3", 3, &Params::new()).unwrap();
        let c = parse_field("d3: x1 - 2*x2", 3, &Params::new()).unwrap();
        let r = verify_jacobi_deformed(&pkg, &b, &c, &PolyVectorField::zero(3)).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn symmetric_top_symmetries() {
        let pkg = CanonicalPackage::build(catalog::so(3).unwrap());
        // a = b: rotations about the third axis commute with the Euler field
        let euler = lax_field(
            &pkg,
            &parse_field("d1: a*x1; d2: b*x2; d3: c*x3", 3, &abc(2, 2, 5)).unwrap(),
        )
        .unwrap()
        .field;
        let e3 = AlgebraVector::basis(3, 2);
        let b = PolyVectorField::constant(&e3);
        // x3 is conserved, so x3 times the rotation field is also a symmetry
        let c = parse_field("d3: x3", 3, &Params::new()).unwrap();
        let r = symmetry_closure(&pkg, &euler, &b, &c).unwrap();
        assert_eq!(r.status, Status::Pass, "{:?}", r.witness);

        let trivial = symmetry_closure(&pkg, &euler, &b, &b).unwrap();
        assert!(trivial.passed());

        let e1 = PolyVectorField::constant(&AlgebraVector::basis(3, 0));
        let r = symmetry_closure(&pkg, &euler, &e1, &b).unwrap();
        assert_eq!(r.status, Status::HypothesisNotSatisfied);
    }
}
