//! The canonical endomorphism field `A = J _| lambda` of a Lie algebra and
//! the identities it satisfies.
//!
//! At a point `x`, `A_x` is the matrix of `ad_x`: entry `(k, j)` of `A` is
//! `x^i c^k_{ij}`. Its Nijenhuis bracket equals `-2 lambda _| A`; its power
//! traces `I_k = Tr A^k` are the Casimir polynomials.

use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;

use crate::algebra::{AlgebraVector, LieAlgebra, Matrix};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::Rational;
use crate::report::VerificationReport;
use crate::tensor::{ConstantOneTwoField, EndoField, PolyVectorField, VectorBiform};

#[derive(Clone, Debug)]
pub struct CanonicalPackage {
    pub algebra: Arc<LieAlgebra>,
    pub lambda: ConstantOneTwoField,
    /// Liouville field `J = x^i d_i`.
    pub liouville: PolyVectorField,
    /// Canonical endomorphism field.
    pub endo: EndoField,
}

impl CanonicalPackage {
    pub fn build(algebra: LieAlgebra) -> Self {
        Self::from_arc(Arc::new(algebra))
    }

    pub fn from_arc(algebra: Arc<LieAlgebra>) -> Self {
        let n = algebra.dim();
        let lambda = ConstantOneTwoField::new(algebra.clone());
        let liouville = PolyVectorField::liouville(n);
        let endo = lambda
            .contract_vector(&liouville)
            .expect("Liouville field has the algebra dimension");
        CanonicalPackage {
            algebra,
            lambda,
            liouville,
            endo,
        }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `A X`.
    pub fn apply(&self, x: &PolyVectorField) -> Result<PolyVectorField> {
        self.endo.apply(x)
    }

    /// Fundamental field `X_v = A v~`, i.e. `x -> [x, v]`.
    pub fn infinitesimal_rep(&self, v: &AlgebraVector) -> Result<PolyVectorField> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.dim(),
            });
        }
        self.endo.apply(&PolyVectorField::constant(v))
    }

    pub fn casimirs(&self, max_k: usize) -> CasimirSet {
        casimirs(&self.endo, max_k)
    }
}

/// Nijenhuis bracket `[K, K]` of an endomorphism field with itself, from
/// `1/2 [K,K](X,Y) = [KX,KY] - K[KX,Y] - K[X,KY] + K^2[X,Y]` evaluated on
/// coordinate fields (where the last term vanishes).
pub fn nijenhuis(k: &EndoField) -> VectorBiform {
    let n = k.dim();
    let columns: Vec<PolyVectorField> = (0..n).map(|j| k.column(j)).collect();
    let two = crate::rational::int(2);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let halves: Vec<((usize, usize), PolyVectorField)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let da = PolyVectorField::coordinate(n, a);
            let db = PolyVectorField::coordinate(n, b);
            let (ka, kb) = (&columns[a], &columns[b]);
            let first = ka.commutator(kb).expect("same dimension");
            let second = k
                .apply(&ka.commutator(&db).expect("same dimension"))
                .expect("dim");
            let third = k
                .apply(&da.commutator(kb).expect("same dimension"))
                .expect("dim");
            ((a, b), &(&first - &second) - &third)
        })
        .collect();
    let mut out = VectorBiform::zero(n);
    for ((a, b), half) in halves {
        for (i, p) in half.components().iter().enumerate() {
            out.add_component(i, a, b, &p.scale(&two));
        }
    }
    out
}

/// Checks `[A, A] + 2 lambda _| A = 0` component by component.
pub fn verify_theorem21(pkg: &CanonicalPackage) -> VerificationReport {
    let lhs = nijenhuis(&pkg.endo);
    let rhs = pkg
        .lambda
        .contract_endo(&pkg.endo)
        .expect("same dimension")
        .scale(&crate::rational::int(2));
    let residual = &lhs + &rhs;
    VerificationReport::from_residuals(
        "nijenhuis-canonical",
        "[A,A] = -2 lambda _| A",
        residual.listing(),
    )
}

/// Power traces `I_k = Tr A^k`, `k = 1..=K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CasimirSet {
    pub polys: Vec<MultiPoly>,
}

impl CasimirSet {
    /// `I_k` for 1-based `k`.
    pub fn get(&self, k: usize) -> &MultiPoly {
        &self.polys[k - 1]
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

pub fn casimirs(a: &EndoField, max_k: usize) -> CasimirSet {
    let n = a.dim();
    let mut polys = Vec::with_capacity(max_k);
    let mut power = a.clone();
    for k in 1..=max_k {
        if k > 1 {
            if k == max_k {
                // only the diagonal of the last power is needed
                let mut tr = MultiPoly::zero(n);
                for i in 0..n {
                    for j in 0..n {
                        let (p, q) = (power.entry(i, j), a.entry(j, i));
                        if !p.is_zero() && !q.is_zero() {
                            tr.add_product(p, q);
                        }
                    }
                }
                polys.push(tr);
                break;
            }
            power = power.compose(a).expect("square fields of equal size");
        }
        polys.push(power.trace());
    }
    CasimirSet { polys }
}

/// Quadratic form `sum_{ab} M_{ab} x^a x^b`.
pub fn quadratic_form(m: &Matrix) -> MultiPoly {
    let n = m.rows();
    let mut out = MultiPoly::zero(n);
    for a in 0..n {
        for b in 0..n {
            if !m[(a, b)].is_zero() {
                let xab = &MultiPoly::var(n, a) * &MultiPoly::var(n, b);
                out.add_scaled(&m[(a, b)], &xab);
            }
        }
    }
    out
}

fn endo_residuals(label: &str, e: &EndoField) -> Vec<String> {
    let n = e.dim();
    let mut out = Vec::new();
    for k in 0..n {
        for j in 0..n {
            let p = e.entry(k, j);
            if !p.is_zero() {
                out.push(format!("{label}({},{}) = {}", k + 1, j + 1, p));
            }
        }
    }
    out
}

fn field_residuals(label: &str, f: &PolyVectorField) -> Vec<String> {
    f.components()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, p)| format!("{label}[d{}] = {}", k + 1, p))
        .collect()
}

fn basis_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// Highest Casimir degree checked by [`verify_structural`]: `n` up to dimension
/// 10, then capped because `Tr A^k` grows combinatorially (so6 needs ~30 s for `k = 10`).
pub fn structural_casimir_degree(n: usize) -> usize {
    if n <= 10 {
        n
    } else {
        8
    }
}

/// The structural identities of the canonical field, one report each.
pub fn verify_structural(pkg: &CanonicalPackage) -> Vec<VerificationReport> {
    verify_structural_with(pkg, structural_casimir_degree(pkg.dim()))
}

pub fn verify_structural_with(pkg: &CanonicalPackage, max_k: usize) -> Vec<VerificationReport> {
    type Check<'a> = Box<dyn Fn() -> VerificationReport + Send + Sync + 'a>;
    let checks: Vec<Check> = vec![
        Box::new(|| check_liouville_derivative(pkg)),
        Box::new(|| check_liouville_annihilated(pkg)),
        Box::new(|| check_adjoint_invariance(pkg)),
        Box::new(|| check_trace_square(pkg)),
        Box::new(|| check_trace(pkg)),
        Box::new(|| check_killing_skew(pkg)),
        Box::new(move || check_casimir_annihilated(pkg, max_k)),
        Box::new(|| check_nijenhuis_on_constants(pkg)),
        Box::new(|| check_homomorphism(pkg)),
        Box::new(|| check_rep_against_constant(pkg)),
    ];
    checks.par_iter().map(|c| c()).collect()
}

fn check_liouville_derivative(pkg: &CanonicalPackage) -> VerificationReport {
    let lj = pkg.endo.lie_derivative(&pkg.liouville).expect("dim");
    VerificationReport::from_residuals(
        "liouville-derivative",
        "L_J A = A",
        endo_residuals("L_J A - A", &(&lj - &pkg.endo)),
    )
}

fn check_liouville_annihilated(pkg: &CanonicalPackage) -> VerificationReport {
    let aj = pkg.apply(&pkg.liouville).expect("dim");
    VerificationReport::from_residuals(
        "liouville-kernel",
        "J _| A = 0",
        field_residuals("A J", &aj),
    )
}

fn check_adjoint_invariance(pkg: &CanonicalPackage) -> VerificationReport {
    let n = pkg.dim();
    let mut residuals = Vec::new();
    for i in 0..n {
        let xv = pkg
            .infinitesimal_rep(&AlgebraVector::basis(n, i))
            .expect("dim");
        let l = pkg.endo.lie_derivative(&xv).expect("dim");
        residuals.extend(endo_residuals(&format!("L_X(e{}) A", i + 1), &l));
    }
    VerificationReport::from_residuals("adjoint-invariance", "L_{X_v} A = 0", residuals)
}

fn check_trace_square(pkg: &CanonicalPackage) -> VerificationReport {
    let tr = pkg.endo.compose(&pkg.endo).expect("dim").trace();
    let k = quadratic_form(&pkg.algebra.killing_form());
    let diff = &tr - &k;
    let residuals = if diff.is_zero() {
        vec![]
    } else {
        vec![format!("Tr(A A) - K(J,J) = {diff}")]
    };
    VerificationReport::from_residuals("trace-square-killing", "Tr(A o A) = K(J,J)", residuals)
}

fn check_trace(pkg: &CanonicalPackage) -> VerificationReport {
    let chi = MultiPoly::linear(pkg.algebra.characteristic_form().components());
    let diff = &pkg.endo.trace() - &chi;
    let residuals = if diff.is_zero() {
        vec![]
    } else {
        vec![format!("Tr A - chi(J) = {diff}")]
    };
    VerificationReport::from_residuals("trace-characteristic", "Tr A = chi(J)", residuals)
}

fn check_killing_skew(pkg: &CanonicalPackage) -> VerificationReport {
    let k = pkg.algebra.killing_form();
    // K(Av, w) + K(v, Aw) = v^T (A^T K + K A) w
    let ka = pkg.endo.left_mul_const(&k);
    let sum = &ka.transpose() + &ka;
    VerificationReport::from_residuals(
        "killing-skew",
        "K(Av,w) = -K(v,Aw)",
        endo_residuals("A^T K + K A", &sum),
    )
}

fn check_casimir_annihilated(pkg: &CanonicalPackage, max_k: usize) -> VerificationReport {
    let n = pkg.dim();
    let set = pkg.casimirs(max_k);
    let mut residuals = Vec::new();
    for (m, ik) in set.polys.iter().enumerate() {
        let grad: Vec<MultiPoly> = (0..n).map(|k| ik.d(k)).collect();
        for j in 0..n {
            let mut acc = MultiPoly::zero(n);
            for (k, g) in grad.iter().enumerate() {
                let a = pkg.endo.entry(k, j);
                if !a.is_zero() && !g.is_zero() {
                    acc.add_product(a, g);
                }
            }
            if !acc.is_zero() {
                residuals.push(format!("(A _| dI{})[dx{}] = {}", m + 1, j + 1, acc));
            }
        }
    }
    VerificationReport::from_residuals("casimir-annihilated", "A _| dI_k = 0", residuals)
}

fn check_nijenhuis_on_constants(pkg: &CanonicalPackage) -> VerificationReport {
    let n = pkg.dim();
    let nij = nijenhuis(&pkg.endo);
    let minus_two = crate::rational::int(-2);
    let mut residuals = Vec::new();
    for (i, j) in basis_pairs(n) {
        let di = PolyVectorField::coordinate(n, i);
        let dj = PolyVectorField::coordinate(n, j);
        let lhs = nij.evaluate(&di, &dj).expect("dim");
        let eij = pkg
            .algebra
            .bracket(&AlgebraVector::basis(n, i), &AlgebraVector::basis(n, j))
            .expect("dim");
        let rhs = pkg
            .lambda
            .pointwise_bracket(&pkg.liouville, &PolyVectorField::constant(&eij))
            .expect("dim")
            .scale(&minus_two);
        residuals.extend(field_residuals(
            &format!(
                "[A,A](d{},d{}) + 2[x,[e{},e{}]]",
                i + 1,
                j + 1,
                i + 1,
                j + 1
            ),
            &(&lhs - &rhs),
        ));
    }
    VerificationReport::from_residuals(
        "nijenhuis-on-constants",
        "[A,A](v~,w~) = -2 A([v,w]~)",
        residuals,
    )
}

fn check_homomorphism(pkg: &CanonicalPackage) -> VerificationReport {
    let n = pkg.dim();
    let reps: Vec<PolyVectorField> = (0..n)
        .map(|i| {
            pkg.infinitesimal_rep(&AlgebraVector::basis(n, i))
                .expect("dim")
        })
        .collect();
    let mut residuals = Vec::new();
    for (i, j) in basis_pairs(n) {
        let lhs = reps[i].commutator(&reps[j]).expect("dim");
        let eij = pkg
            .algebra
            .bracket(&AlgebraVector::basis(n, i), &AlgebraVector::basis(n, j))
            .expect("dim");
        let rhs = pkg.infinitesimal_rep(&eij).expect("dim");
        residuals.extend(field_residuals(
            &format!("[X(e{}),X(e{})] - X([e{},e{}])", i + 1, j + 1, i + 1, j + 1),
            &(&lhs - &rhs),
        ));
    }
    VerificationReport::from_residuals(
        "representation-homomorphism",
        "[X_v,X_w] = X_[v,w]",
        residuals,
    )
}

fn check_rep_against_constant(pkg: &CanonicalPackage) -> VerificationReport {
    let n = pkg.dim();
    let mut residuals = Vec::new();
    for i in 0..n {
        let xv = pkg
            .infinitesimal_rep(&AlgebraVector::basis(n, i))
            .expect("dim");
        for j in 0..n {
            let w = AlgebraVector::basis(n, j);
            let lhs = xv.commutator(&PolyVectorField::constant(&w)).expect("dim");
            let vw = pkg
                .algebra
                .bracket(&AlgebraVector::basis(n, i), &w)
                .expect("dim");
            let rhs = PolyVectorField::constant(&vw);
            residuals.extend(field_residuals(
                &format!("[X(e{}),e{}~] - [e{},e{}]~", i + 1, j + 1, i + 1, j + 1),
                &(&lhs - &rhs),
            ));
        }
    }
    VerificationReport::from_residuals("representation-constant", "[X_v, w~] = [v,w]~", residuals)
}

/// Exact linear-algebra data of the orbit through `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRanks {
    /// `rank ad_x`: dimension of the orbit (image of `A_x`).
    pub rank_ad: usize,
    pub rank_ad_sq: usize,
    /// `dim (Ker ad_x cap Im ad_x)`.
    pub dim_ker_cap_im: usize,
    /// `A_x` maps `Im ad_x` onto exactly `Im ad_x^2`.
    pub restriction_image_matches: bool,
}

impl OrbitRanks {
    pub fn as_tuple(&self) -> (usize, usize, usize) {
        (self.rank_ad, self.rank_ad_sq, self.dim_ker_cap_im)
    }
}

pub fn orbit_ranks(pkg: &CanonicalPackage, x: &[Rational]) -> Result<OrbitRanks> {
    let n = pkg.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let ad = pkg.endo.evaluate(x)?;
    let ad_sq = ad.mul(&ad);
    let rank_ad = ad.rank();
    let rank_ad_sq = ad_sq.rank();

    // tangent space of the orbit: independent columns of ad_x
    let (_, pivots) = ad.rref();
    let tangent = ad.select_columns(&pivots);
    let restricted = ad.mul(&tangent);
    let rank_restricted = restricted.rank();
    let restriction_image_matches =
        rank_restricted == rank_ad_sq && restricted.hstack(&ad_sq).rank() == rank_ad_sq;

    // dim(Ker cap Im) = dim Ker + dim Im - dim(Ker + Im)
    let kernel = ad.nullspace();
    let dim_ker_cap_im = if kernel.is_empty() {
        0
    } else {
        let k = Matrix::from_columns(&kernel);
        kernel.len() + rank_ad - k.hstack(&tangent).rank()
    };
    Ok(OrbitRanks {
        rank_ad,
        rank_ad_sq,
        dim_ker_cap_im,
        restriction_image_matches,
    })
}

/// `[x, [[x, v], [x, w]]]`: vanishes on an orbit exactly when the restriction of
/// `A` to that orbit is integrable.
pub fn integrability_probe(
    algebra: &LieAlgebra,
    x: &AlgebraVector,
    v: &AlgebraVector,
    w: &AlgebraVector,
) -> Result<AlgebraVector> {
    let xv = algebra.bracket(x, v)?;
    let xw = algebra.bracket(x, w)?;
    let inner = algebra.bracket(&xv, &xw)?;
    algebra.bracket(x, &inner)
}

/// A triple with nonzero [`integrability_probe`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityWitness {
    pub x: AlgebraVector,
    pub v: AlgebraVector,
    pub w: AlgebraVector,
    pub value: AlgebraVector,
}

/// Deterministic search over `x = e_a` or `e_a + e_b` and basis `v`, `w`.
pub fn find_integrability_witness(algebra: &LieAlgebra) -> Option<IntegrabilityWitness> {
    let n = algebra.dim();
    let xs = (0..n).flat_map(|a| (a..n).map(move |b| (a, b)));
    for (a, b) in xs {
        let mut x = AlgebraVector::basis(n, a);
        if b != a {
            x = &x + &AlgebraVector::basis(n, b);
        }
        for i in 0..n {
            for j in i + 1..n {
                let (v, w) = (AlgebraVector::basis(n, i), AlgebraVector::basis(n, j));
                let value = integrability_probe(algebra, &x, &v, &w).expect("same dimension");
                if !value.is_zero() {
                    return Some(IntegrabilityWitness { x, v, w, value });
                }
            }
        }
    }
    None
}

/// Passes when no witness is found: the probe vanishes on every searched triple.
pub fn verify_integrability(algebra: &LieAlgebra) -> VerificationReport {
    const ID: &str = "integrability";
    const STATEMENT: &str = "[x, [[x,v], [x,w]]] = 0";
    match find_integrability_witness(algebra) {
        None => VerificationReport::pass(ID, STATEMENT),
        Some(wit) => VerificationReport::fail(
            ID,
            STATEMENT,
            vec![
                format!("x = {}", wit.x),
                format!("v = {}", wit.v),
                format!("w = {}", wit.w),
                format!("probe = {}", wit.value),
            ],
        ),
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn integrability_witness_search() {
        assert!(verify_integrability(&catalog::so(3).unwrap()).passed());
        assert!(verify_integrability(&catalog::so(4).unwrap()).passed());
        assert!(verify_integrability(&catalog::heisenberg3()).passed());
        let wit = find_integrability_witness(&catalog::so(5).unwrap()).unwrap();
        assert!(!wit.value.is_zero());
        assert!(!verify_integrability(&catalog::so(5).unwrap()).passed());
    }

    use super::*;
    use crate::catalog;
    use crate::rational::{frac, int};

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn abelian_endo_is_zero() {
        let pkg = CanonicalPackage::build(catalog::abelian(4).unwrap());
        assert!(pkg.endo.is_zero());
        assert!(nijenhuis(&pkg.endo).is_zero());
    }

    #[test]
    fn so3_endo_matches_rotation_generators() {
        let pkg = CanonicalPackage::build(catalog::so(3).unwrap());
        let a = &pkg.endo;
        // x1 (dx2 d3 - dx3 d2) + cyclic
        assert_eq!(*a.entry(2, 1), x(3, 0));
        assert_eq!(*a.entry(1, 2), -&x(3, 0));
        assert_eq!(*a.entry(0, 2), x(3, 1));
        assert_eq!(*a.entry(2, 0), -&x(3, 1));
        assert_eq!(*a.entry(1, 0), x(3, 2));
        assert_eq!(*a.entry(0, 1), -&x(3, 2));
        for i in 0..3 {
            assert!(a.entry(i, i).is_zero());
        }
    }

    #[test]
    fn solvable2_endo_has_the_extra_term() {
        let pkg = CanonicalPackage::build(catalog::solvable2());
        assert_eq!(*pkg.endo.entry(1, 1), x(2, 0));
        assert_eq!(*pkg.endo.entry(1, 0), -&x(2, 1));
        assert!(pkg.endo.entry(0, 0).is_zero() && pkg.endo.entry(0, 1).is_zero());
    }

    #[test]
    fn apply_examples() {
        let pkg = CanonicalPackage::build(catalog::so(3).unwrap());
        assert!(pkg.apply(&pkg.liouville).unwrap().is_zero());
        assert!(EndoField::zero(3).apply(&pkg.liouville).unwrap().is_zero());
        let img = pkg.apply(&PolyVectorField::coordinate(3, 0)).unwrap();
        let expected = PolyVectorField::new(vec![MultiPoly::zero(3), x(3, 2), -&x(3, 1)]).unwrap();
        assert_eq!(img, expected);
    }

    #[test]
    fn infinitesimal_rep_examples() {
        let so3 = CanonicalPackage::build(catalog::so(3).unwrap());
        let x3 = so3.infinitesimal_rep(&AlgebraVector::basis(3, 2)).unwrap();
        // x -> [x, e3] = (x2, -x1, 0)
        let expected = PolyVectorField::new(vec![x(3, 1), -&x(3, 0), MultiPoly::zero(3)]).unwrap();
        assert_eq!(x3, expected);
        assert!(so3
            .infinitesimal_rep(&AlgebraVector::zero(3))
            .unwrap()
            .is_zero());
        assert!(so3.infinitesimal_rep(&AlgebraVector::zero(2)).is_err());

        let s2 = CanonicalPackage::build(catalog::solvable2());
        let x2 = s2.infinitesimal_rep(&AlgebraVector::basis(2, 1)).unwrap();
        assert_eq!(
            x2,
            PolyVectorField::new(vec![MultiPoly::zero(2), x(2, 0)]).unwrap()
        );
    }

    #[test]
    fn nijenhuis_of_identity_vanishes() {
        assert!(nijenhuis(&EndoField::identity(3)).is_zero());
    }

    #[test]
    fn nijenhuis_solvable2() {
        let pkg = CanonicalPackage::build(catalog::solvable2());
        let t = nijenhuis(&pkg.endo);
        assert_eq!(t.listing(), vec!["T^2_{12} = -2*x1".to_string()]);
    }

    #[test]
    fn casimir_examples() {
        let so3 = CanonicalPackage::build(catalog::so(3).unwrap());
        let set = so3.casimirs(3);
        assert!(set.get(1).is_zero());
        assert_eq!(set.get(2).to_string(), "-2*x1^2 - 2*x2^2 - 2*x3^2");
        assert!(set.get(3).is_zero());
        let s2 = CanonicalPackage::build(catalog::solvable2());
        assert_eq!(s2.casimirs(1).get(1), &x(2, 0));
        // the shortcut for the last power agrees with a full product
        let full = s2.endo.compose(&s2.endo).unwrap().trace();
        assert_eq!(s2.casimirs(2).get(2), &full);
        assert!(CanonicalPackage::build(catalog::abelian(4).unwrap())
            .casimirs(3)
            .polys
            .iter()
            .all(MultiPoly::is_zero));
    }

    #[test]
    fn theorem_holds_on_small_algebras() {
        for alg in [
            catalog::so(3).unwrap(),
            catalog::heisenberg3(),
            catalog::abelian(3).unwrap(),
        ] {
            let pkg = CanonicalPackage::build(alg);
            assert!(verify_theorem21(&pkg).passed());
        }
        let h = CanonicalPackage::build(catalog::heisenberg3());
        assert!(nijenhuis(&h.endo).is_zero());
    }

    #[test]
    fn structural_identities_small() {
        for alg in [
            catalog::so(3).unwrap(),
            catalog::solvable2(),
            catalog::abelian(3).unwrap(),
        ] {
            let pkg = CanonicalPackage::build(alg);
            for r in verify_structural(&pkg) {
                assert!(r.passed(), "{}: {:?}", r.identity, r.witness);
            }
        }
    }

    #[test]
    fn structural_check_catches_a_wrong_field() {
        let mut pkg = CanonicalPackage::build(catalog::solvable2());
        *pkg.endo.entry_mut(0, 0) = x(2, 1);
        let reports = verify_structural(&pkg);
        assert!(reports.iter().any(|r| !r.passed()));
    }

    #[test]
    fn orbit_rank_examples() {
        let so3 = CanonicalPackage::build(catalog::so(3).unwrap());
        let r = orbit_ranks(&so3, &[int(1), int(0), int(0)]).unwrap();
        assert_eq!(r.as_tuple(), (2, 2, 0));
        assert!(r.restriction_image_matches);
        let r0 = orbit_ranks(&so3, &[int(0), int(0), int(0)]).unwrap();
        assert_eq!(r0.as_tuple(), (0, 0, 0));
        let s2 = CanonicalPackage::build(catalog::solvable2());
        assert_eq!(
            orbit_ranks(&s2, &[int(1), int(0)]).unwrap().as_tuple(),
            (1, 1, 0)
        );
        // on solvable2 with x = e2, ad_x has image span(e2) which is also its kernel
        let r = orbit_ranks(&s2, &[int(0), int(1)]).unwrap();
        assert_eq!(r.as_tuple(), (1, 0, 1));
        assert!(r.restriction_image_matches);
        assert!(orbit_ranks(&s2, &[int(1)]).is_err());
    }

    #[test]
    fn probe_vanishes_for_equal_arguments() {
        let so5 = catalog::so(5).unwrap();
        let v = AlgebraVector::new((0..10).map(|i| frac(i - 3, 2)).collect());
        let x = AlgebraVector::new((0..10).map(|i| int((i * 7) % 5 - 2)).collect());
        assert!(integrability_probe(&so5, &x, &v, &v).unwrap().is_zero());
    }
}
