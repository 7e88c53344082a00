//! Polynomial-coefficient tensor fields on the algebra viewed as a manifold.
//!
//! Wedge convention: `(dx^a ^ dx^b)(v, w) = v^a w^b - v^b w^a`, with no 1/2.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{AlgebraVector, LieAlgebra};
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::Rational;

fn mismatch(expected: usize, found: usize) -> Error {
    Error::DimensionMismatch { expected, found }
}

/// Vector field `X^k d_k` with polynomial components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    components: Vec<MultiPoly>,
}

impl PolyVectorField {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        let n = components.len();
        if let Some(p) = components.iter().find(|p| p.nvars() != n) {
            return Err(mismatch(n, p.nvars()));
        }
        Ok(PolyVectorField { components })
    }

    pub fn zero(n: usize) -> Self {
        PolyVectorField {
            components: vec![MultiPoly::zero(n); n],
        }
    }

    /// Liouville field `J = x^i d_i`.
    pub fn liouville(n: usize) -> Self {
        PolyVectorField {
            components: (0..n).map(|i| MultiPoly::var(n, i)).collect(),
        }
    }

    /// Constant field `v~` with components `v^i`.
    pub fn constant(v: &AlgebraVector) -> Self {
        let n = v.dim();
        PolyVectorField {
            components: v
                .components()
                .iter()
                .map(|c| MultiPoly::constant(n, c.clone()))
                .collect(),
        }
    }

    /// Coordinate field `d_{i+1}`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        Self::constant(&AlgebraVector::basis(n, i))
    }

    /// Linear field `x -> M x`.
    pub fn linear(m: &crate::algebra::Matrix) -> Self {
        let n = m.rows();
        PolyVectorField {
            components: (0..n)
                .map(|k| {
                    let row: Vec<Rational> = (0..m.cols()).map(|j| m[(k, j)].clone()).collect();
                    MultiPoly::linear(&row)
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &MultiPoly {
        &self.components[k]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(MultiPoly::is_zero)
    }

    fn check(&self, other: &PolyVectorField) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(mismatch(self.dim(), other.dim()));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolyVectorField {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Pointwise product with a scalar function.
    pub fn mul_poly(&self, f: &MultiPoly) -> Self {
        PolyVectorField {
            components: self.components.iter().map(|p| p * f).collect(),
        }
    }

    /// `X(f) = X^i d_i f`.
    pub fn derivation(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.nvars() != self.dim() {
            return Err(mismatch(self.dim(), f.nvars()));
        }
        Ok(self.derive(f))
    }

    pub(crate) fn derive(&self, f: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(f.nvars());
        for (i, xi) in self.components.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let df = f.d(i);
            if !df.is_zero() {
                out.add_product(xi, &df);
            }
        }
        out
    }

    /// Componentwise directional derivative `X(Y^j) d_j`.
    pub fn derive_field(&self, y: &PolyVectorField) -> Result<PolyVectorField> {
        self.check(y)?;
        Ok(PolyVectorField {
            components: y.components.iter().map(|c| self.derive(c)).collect(),
        })
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<AlgebraVector> {
        if x.len() != self.dim() {
            return Err(mismatch(self.dim(), x.len()));
        }
        self.components
            .iter()
            .map(|p| p.evaluate(x))
            .collect::<Result<Vec<_>>>()
            .map(AlgebraVector::new)
    }

    /// `[X, Y]^j = X^i d_i Y^j - Y^i d_i X^j`.
    pub fn commutator(&self, other: &PolyVectorField) -> Result<PolyVectorField> {
        self.check(other)?;
        Ok(&self.derive_field(other)? - &other.derive_field(self)?)
    }
}

impl std::ops::Add for &PolyVectorField {
    type Output = PolyVectorField;
    fn add(self, rhs: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.dim(), rhs.dim(), "field dimension mismatch");
        PolyVectorField {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &PolyVectorField {
    type Output = PolyVectorField;
    fn sub(self, rhs: &PolyVectorField) -> PolyVectorField {
        assert_eq!(self.dim(), rhs.dim(), "field dimension mismatch");
        PolyVectorField {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &PolyVectorField {
    type Output = PolyVectorField;
    fn neg(self) -> PolyVectorField {
        PolyVectorField {
            components: self.components.iter().map(|p| -p).collect(),
        }
    }
}

/// Formats as `d1: <poly>; d3: <poly>`, skipping zero components; the zero field prints `0`.
impl fmt::Display for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, p)| format!("d{}: {}", k + 1, p))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

/// Field of endomorphisms; entry `(k, j)` is the coefficient of `dx^j (x) d_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoField {
    n: usize,
    entries: Vec<MultiPoly>,
}

impl EndoField {
    pub fn zero(n: usize) -> Self {
        EndoField {
            n,
            entries: vec![MultiPoly::zero(n); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut e = Self::zero(n);
        for i in 0..n {
            e.entries[i * n + i] = MultiPoly::one(n);
        }
        e
    }

    /// Builds from rows of entries (row `k`, column `j`).
    pub fn from_rows(rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(mismatch(n, row.len()));
            }
            for p in row {
                if p.nvars() != n {
                    return Err(mismatch(n, p.nvars()));
                }
                entries.push(p);
            }
        }
        Ok(EndoField { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, k: usize, j: usize) -> &MultiPoly {
        &self.entries[k * self.n + j]
    }

    pub fn entry_mut(&mut self, k: usize, j: usize) -> &mut MultiPoly {
        &mut self.entries[k * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }

    /// Image of the coordinate field `d_{j+1}`, i.e. column `j`.
    pub fn column(&self, j: usize) -> PolyVectorField {
        PolyVectorField {
            components: (0..self.n).map(|k| self.entry(k, j).clone()).collect(),
        }
    }

    /// `(A X)^k = A^k_j X^j`.
    pub fn apply(&self, x: &PolyVectorField) -> Result<PolyVectorField> {
        if x.dim() != self.n {
            return Err(mismatch(self.n, x.dim()));
        }
        let mut out = PolyVectorField::zero(self.n);
        for k in 0..self.n {
            let acc = &mut out.components[k];
            for j in 0..self.n {
                let a = self.entry(k, j);
                let xj = &x.components[j];
                if !a.is_zero() && !xj.is_zero() {
                    acc.add_product(a, xj);
                }
            }
        }
        Ok(out)
    }

    /// Matrix product `self * rhs` of polynomial matrices.
    pub fn compose(&self, rhs: &EndoField) -> Result<EndoField> {
        if rhs.n != self.n {
            return Err(mismatch(self.n, rhs.n));
        }
        let n = self.n;
        let mut out = EndoField::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.entry(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j].add_product(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> EndoField {
        let n = self.n;
        let mut out = EndoField::zero(n);
        for k in 0..n {
            for j in 0..n {
                out.entries[j * n + k] = self.entry(k, j).clone();
            }
        }
        out
    }

    pub fn trace(&self) -> MultiPoly {
        let mut acc = MultiPoly::zero(self.n);
        for i in 0..self.n {
            acc += self.entry(i, i);
        }
        acc
    }

    /// Left multiplication by a constant matrix.
    pub fn left_mul_const(&self, m: &crate::algebra::Matrix) -> EndoField {
        let n = self.n;
        let mut out = EndoField::zero(n);
        for i in 0..n {
            for k in 0..n {
                let c = &m[(i, k)];
                if c.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j].add_scaled(c, self.entry(k, j));
                }
            }
        }
        out
    }

    /// Value at a point as an exact matrix.
    pub fn evaluate(&self, x: &[Rational]) -> Result<crate::algebra::Matrix> {
        let n = self.n;
        let mut m = crate::algebra::Matrix::zeros(n, n);
        for k in 0..n {
            for j in 0..n {
                m[(k, j)] = self.entry(k, j).evaluate(x)?;
            }
        }
        Ok(m)
    }

    /// `(L_X A)^i_j = X^k d_k A^i_j - A^k_j d_k X^i + A^i_k d_j X^k`.
    #[allow(clippy::needless_range_loop)]
    pub fn lie_derivative(&self, x: &PolyVectorField) -> Result<EndoField> {
        if x.dim() != self.n {
            return Err(mismatch(self.n, x.dim()));
        }
        let n = self.n;
        // jac[i][k] = d_k X^i
        let jac: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| (0..n).map(|k| x.components[i].d(k)).collect())
            .collect();
        let mut out = EndoField::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = x.derive(self.entry(i, j));
                for k in 0..n {
                    let akj = self.entry(k, j);
                    if !akj.is_zero() && !jac[i][k].is_zero() {
                        acc -= &(akj * &jac[i][k]);
                    }
                    let aik = self.entry(i, k);
                    if !aik.is_zero() && !jac[k][j].is_zero() {
                        acc.add_product(aik, &jac[k][j]);
                    }
                }
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }
}

impl std::ops::Sub for &EndoField {
    type Output = EndoField;
    fn sub(self, rhs: &EndoField) -> EndoField {
        assert_eq!(self.n, rhs.n);
        EndoField {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Add for &EndoField {
    type Output = EndoField;
    fn add(self, rhs: &EndoField) -> EndoField {
        assert_eq!(self.n, rhs.n);
        EndoField {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl fmt::Display for EndoField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for k in 0..self.n {
            for j in 0..self.n {
                let p = self.entry(k, j);
                if !p.is_zero() {
                    parts.push(format!("({}) dx{} d{}", p, j + 1, k + 1));
                }
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Vector-valued 2-form `sum_{a<b} T^i_{ab} (dx^a ^ dx^b) (x) d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorBiform {
    n: usize,
    components: BTreeMap<(usize, usize, usize), MultiPoly>,
}

impl VectorBiform {
    pub fn zero(n: usize) -> Self {
        VectorBiform {
            n,
            components: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Adds `p` to `T^i_{ab}`, canonicalizing `(a, b)` with the sign flip; `a == b` is ignored.
    pub fn add_component(&mut self, i: usize, a: usize, b: usize, p: &MultiPoly) {
        if a == b || p.is_zero() {
            return;
        }
        let (key, neg) = if a < b {
            ((i, a, b), false)
        } else {
            ((i, b, a), true)
        };
        let slot = self
            .components
            .entry(key)
            .or_insert_with(|| MultiPoly::zero(self.n));
        if neg {
            *slot -= p;
        } else {
            *slot += p;
        }
        if slot.is_zero() {
            self.components.remove(&key);
        }
    }

    /// `T^i_{ab}` for any ordered pair.
    pub fn component(&self, i: usize, a: usize, b: usize) -> MultiPoly {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self
                .components
                .get(&(i, a, b))
                .cloned()
                .unwrap_or_else(|| MultiPoly::zero(self.n)),
            std::cmp::Ordering::Greater => -&self.component(i, b, a),
            std::cmp::Ordering::Equal => MultiPoly::zero(self.n),
        }
    }

    /// Nonzero canonical components keyed `(i, a, b)`, `a < b`.
    pub fn components(&self) -> &BTreeMap<(usize, usize, usize), MultiPoly> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> VectorBiform {
        let mut out = VectorBiform::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (k, p) in &self.components {
            out.components.insert(*k, p.scale(c));
        }
        out
    }

    /// `T(v, w) = sum T^i_{ab} (v^a w^b - v^b w^a) d_i`.
    pub fn evaluate(&self, v: &PolyVectorField, w: &PolyVectorField) -> Result<PolyVectorField> {
        if v.dim() != self.n || w.dim() != self.n {
            return Err(mismatch(self.n, v.dim().max(w.dim())));
        }
        let mut out = PolyVectorField::zero(self.n);
        for (&(i, a, b), t) in &self.components {
            let va = &v.components()[a];
            let vb = &v.components()[b];
            let wa = &w.components()[a];
            let wb = &w.components()[b];
            let pairing = &(va * wb) - &(vb * wa);
            if !pairing.is_zero() {
                out.components[i].add_product(t, &pairing);
            }
        }
        Ok(out)
    }

    /// Listing such as `T^2_{12} = -2*x1`, one line per nonzero component (1-based).
    pub fn listing(&self) -> Vec<String> {
        self.components
            .iter()
            .map(|(&(i, a, b), p)| format!("T^{}_{{{}{}}} = {}", i + 1, a + 1, b + 1, p))
            .collect()
    }
}

impl std::ops::Add for &VectorBiform {
    type Output = VectorBiform;
    fn add(self, rhs: &VectorBiform) -> VectorBiform {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (&(i, a, b), p) in &rhs.components {
            out.add_component(i, a, b, p);
        }
        out
    }
}

impl fmt::Display for VectorBiform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(&(i, a, b), p)| format!("({}) (dx{}^dx{}) d{}", p, a + 1, b + 1, i + 1))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Constant (1,2) tensor `lambda = 1/2 c^k_{ij} dx^i ^ dx^j (x) d_k` carried by an algebra.
#[derive(Clone, Debug)]
pub struct ConstantOneTwoField {
    algebra: Arc<LieAlgebra>,
}

impl ConstantOneTwoField {
    pub fn new(algebra: Arc<LieAlgebra>) -> Self {
        ConstantOneTwoField { algebra }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `v _| lambda`: entry `(k, j) = sum_i v^i c^k_{ij}`.
    pub fn contract_vector(&self, v: &PolyVectorField) -> Result<EndoField> {
        let n = self.dim();
        if v.dim() != n {
            return Err(mismatch(n, v.dim()));
        }
        let mut out = EndoField::zero(n);
        for i in 0..n {
            let vi = v.component(i);
            if vi.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in self.algebra.structure(i, j) {
                    out.entry_mut(*k, j).add_scaled(c, vi);
                }
            }
        }
        Ok(out)
    }

    /// Biform with `T^i_{ab} = sum_p A^i_p c^p_{ab}`: the endomorphism applied to the
    /// bracket slot of lambda.
    pub fn contract_endo(&self, a: &EndoField) -> Result<VectorBiform> {
        let n = self.dim();
        if a.dim() != n {
            return Err(mismatch(n, a.dim()));
        }
        let mut out = VectorBiform::zero(n);
        for (&(p_a, p_b, p), c) in self.algebra.entries() {
            for i in 0..n {
                let aip = a.entry(i, p);
                if !aip.is_zero() {
                    out.add_component(i, p_a, p_b, &aip.scale(c));
                }
            }
        }
        Ok(out)
    }

    /// Pointwise algebra bracket of fields: `[B, C]^m = sum B^i C^j c^m_{ij}`.
    pub fn pointwise_bracket(
        &self,
        b: &PolyVectorField,
        c: &PolyVectorField,
    ) -> Result<PolyVectorField> {
        let n = self.dim();
        if b.dim() != n || c.dim() != n {
            return Err(mismatch(n, b.dim().max(c.dim())));
        }
        let mut out = PolyVectorField::zero(n);
        for (&(i, j, m), cij) in self.algebra.entries() {
            let (bi, bj) = (b.component(i), b.component(j));
            let (ci, cj) = (c.component(i), c.component(j));
            let mut pair = MultiPoly::zero(n);
            if !bi.is_zero() && !cj.is_zero() {
                pair.add_product(bi, cj);
            }
            if !bj.is_zero() && !ci.is_zero() {
                pair -= &(bj * ci);
            }
            out.components[m].add_scaled(cij, &pair);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::int;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn field(comps: Vec<MultiPoly>) -> PolyVectorField {
        PolyVectorField::new(comps).unwrap()
    }

    #[test]
    fn coordinate_fields_commute() {
        let d1 = PolyVectorField::coordinate(2, 0);
        let d2 = PolyVectorField::coordinate(2, 1);
        assert!(d1.commutator(&d2).unwrap().is_zero());
    }

    #[test]
    fn liouville_against_coordinate_field() {
        let j = PolyVectorField::liouville(3);
        let d1 = PolyVectorField::coordinate(3, 0);
        assert_eq!(j.commutator(&d1).unwrap(), -&d1);
    }

    #[test]
    fn commutator_of_shears() {
        let n = 2;
        let a = field(vec![MultiPoly::zero(n), x(n, 0)]);
        let b = field(vec![x(n, 1), MultiPoly::zero(n)]);
        let expected = field(vec![x(n, 0), -&x(n, 1)]);
        assert_eq!(a.commutator(&b).unwrap(), expected);
    }

    #[test]
    fn evaluating_liouville_gives_the_point() {
        let p = [int(3), int(-1), crate::rational::frac(2, 7)];
        let v = PolyVectorField::liouville(3).evaluate(&p).unwrap();
        assert_eq!(v.components(), &p);
    }

    #[test]
    fn identity_is_parallel() {
        let n = 3;
        let xf = field(vec![&x(n, 0) * &x(n, 1), x(n, 2).pow(2), MultiPoly::one(n)]);
        assert!(EndoField::identity(n)
            .lie_derivative(&xf)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn contraction_on_solvable2() {
        let lam = ConstantOneTwoField::new(Arc::new(catalog::solvable2()));
        let a = lam.contract_vector(&PolyVectorField::liouville(2)).unwrap();
        assert_eq!(*a.entry(1, 0), -&x(2, 1));
        assert_eq!(*a.entry(1, 1), x(2, 0));
        assert!(a.entry(0, 0).is_zero() && a.entry(0, 1).is_zero());
        assert!(lam
            .contract_vector(&PolyVectorField::zero(2))
            .unwrap()
            .is_zero());

        let t = lam.contract_endo(&a).unwrap();
        assert_eq!(t.component(1, 0, 1), x(2, 0));
        assert_eq!(t.components().len(), 1);
        assert!(lam.contract_endo(&EndoField::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn contraction_on_abelian_is_zero() {
        let lam = ConstantOneTwoField::new(Arc::new(catalog::abelian(4).unwrap()));
        let a = lam.contract_vector(&PolyVectorField::liouville(4)).unwrap();
        assert!(a.is_zero());
        assert!(lam
            .contract_endo(&EndoField::identity(4))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn biform_canonicalizes_keys() {
        let mut t = VectorBiform::zero(2);
        t.add_component(1, 1, 0, &x(2, 0));
        assert_eq!(t.component(1, 0, 1), -&x(2, 0));
        assert_eq!(t.component(1, 1, 0), x(2, 0));
        t.add_component(1, 0, 1, &x(2, 0));
        assert!(t.is_zero());
        let d1 = PolyVectorField::coordinate(2, 0);
        let d2 = PolyVectorField::coordinate(2, 1);
        t.add_component(0, 0, 1, &MultiPoly::one(2));
        assert_eq!(t.evaluate(&d1, &d2).unwrap(), d1);
        assert_eq!(t.evaluate(&d2, &d1).unwrap(), -&d1);
    }
}
