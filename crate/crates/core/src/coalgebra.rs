//! Lie–Poisson structure on the dual space.
//!
//! Coordinates on the dual are identified with `x1..xn` (index placement is
//! notation only). The bivector has components `Omega^{ij} = x_k c^k_{ij}` and
//! the bracket of functions is `{f, g} = x_k c^k_{ij} d_i f d_j g`.
//! Sign convention for Hamiltonian fields: `X_H(g) = {H, g}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::report::VerificationReport;
use crate::tensor::PolyVectorField;

#[derive(Clone, Debug)]
pub struct PoissonPackage {
    pub algebra: Arc<LieAlgebra>,
    /// `(i, j) -> Omega^{ij}`, `i < j`, nonzero entries only.
    pub bivector: BTreeMap<(usize, usize), MultiPoly>,
}

impl PoissonPackage {
    pub fn new(algebra: Arc<LieAlgebra>) -> Self {
        let n = algebra.dim();
        let mut bivector: BTreeMap<(usize, usize), MultiPoly> = BTreeMap::new();
        for (&(i, j, k), c) in algebra.entries() {
            bivector
                .entry((i, j))
                .or_insert_with(|| MultiPoly::zero(n))
                .add_scaled(c, &MultiPoly::var(n, k));
        }
        bivector.retain(|_, p| !p.is_zero());
        PoissonPackage { algebra, bivector }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    fn check(&self, polys: &[&MultiPoly]) -> Result<()> {
        for p in polys {
            if p.nvars() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: p.nvars(),
                });
            }
        }
        Ok(())
    }

    /// `Omega^{ij}` for any ordered pair.
    pub fn omega(&self, i: usize, j: usize) -> MultiPoly {
        let n = self.dim();
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self
                .bivector
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(|| MultiPoly::zero(n)),
            std::cmp::Ordering::Greater => -&self.omega(j, i),
            std::cmp::Ordering::Equal => MultiPoly::zero(n),
        }
    }

    pub fn poisson_bracket(&self, f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
        self.check(&[f, g])?;
        let n = self.dim();
        let df: Vec<MultiPoly> = (0..n).map(|i| f.d(i)).collect();
        let dg: Vec<MultiPoly> = (0..n).map(|i| g.d(i)).collect();
        let mut out = MultiPoly::zero(n);
        for (&(i, j), w) in &self.bivector {
            // Omega^{ij} (d_i f d_j g - d_j f d_i g)
            let mut pair = MultiPoly::zero(n);
            if !df[i].is_zero() && !dg[j].is_zero() {
                pair.add_product(&df[i], &dg[j]);
            }
            if !df[j].is_zero() && !dg[i].is_zero() {
                pair -= &(&df[j] * &dg[i]);
            }
            if !pair.is_zero() {
                out.add_product(w, &pair);
            }
        }
        Ok(out)
    }

    /// `X_H^j = sum_i Omega^{ij} d_i H`, so that `X_H(g) = {H, g}`.
    pub fn hamiltonian_field(&self, h: &MultiPoly) -> Result<PolyVectorField> {
        self.check(&[h])?;
        let n = self.dim();
        let dh: Vec<MultiPoly> = (0..n).map(|i| h.d(i)).collect();
        let mut comps = vec![MultiPoly::zero(n); n];
        for (&(i, j), w) in &self.bivector {
            if !dh[i].is_zero() {
                comps[j].add_product(w, &dh[i]);
            }
            if !dh[j].is_zero() {
                comps[i] -= &(w * &dh[j]);
            }
        }
        PolyVectorField::new(comps)
    }

    pub fn verify_poisson_jacobi(
        &self,
        f: &MultiPoly,
        g: &MultiPoly,
        h: &MultiPoly,
    ) -> Result<VerificationReport> {
        let br = |a: &MultiPoly, b: &MultiPoly| self.poisson_bracket(a, b);
        let sum = &(&br(f, &br(g, h)?)? + &br(g, &br(h, f)?)?) + &br(h, &br(f, g)?)?;
        let witness = if sum.is_zero() {
            vec![]
        } else {
            vec![format!("cyclic sum = {sum}")]
        };
        Ok(VerificationReport::from_residuals(
            "poisson-jacobi",
            "{f,{g,h}} + {g,{h,f}} + {h,{f,g}} = 0",
            witness,
        ))
    }
}
