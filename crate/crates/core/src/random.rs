//! Seeded random polynomials and fields for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Monomial, MultiPoly};
use crate::rational::{int, Rational};
use crate::tensor::PolyVectorField;

pub struct RandomSource {
    rng: ChaCha8Rng,
    /// Maximum total degree of generated monomials.
    pub max_degree: u32,
    /// Maximum number of terms per polynomial.
    pub max_terms: usize,
    /// Coefficients are drawn from `-max_coeff..=max_coeff`.
    pub max_coeff: i64,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_degree: 2,
            max_terms: 3,
            max_coeff: 3,
        }
    }

    pub fn rational(&mut self) -> Rational {
        int(self.rng.gen_range(-self.max_coeff..=self.max_coeff))
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != int(0) {
                return r;
            }
        }
    }

    /// `p/q` with `|p| <= max_coeff` and `1 <= q <= max_coeff + 2`.
    pub fn fraction(&mut self) -> Rational {
        let q = self.rng.gen_range(1..=self.max_coeff + 2);
        Rational::new(self.rational().to_integer(), q.into())
    }

    pub fn fraction_point(&mut self, n: usize) -> Vec<Rational> {
        (0..n).map(|_| self.fraction()).collect()
    }

    pub fn point(&mut self, n: usize) -> Vec<Rational> {
        (0..n).map(|_| self.rational()).collect()
    }

    pub fn monomial(&mut self, n: usize) -> Monomial {
        let deg = self.rng.gen_range(0..=self.max_degree);
        let mut exps = vec![0u32; n];
        if n > 0 {
            for _ in 0..deg {
                exps[self.rng.gen_range(0..n)] += 1;
            }
        }
        Monomial::from_exponents(exps)
    }

    pub fn poly(&mut self, n: usize) -> MultiPoly {
        let terms = self.rng.gen_range(0..=self.max_terms);
        let mut p = MultiPoly::zero(n);
        for _ in 0..terms {
            let m = self.monomial(n);
            let c = self.nonzero_rational();
            p += &MultiPoly::from_terms(n, [(m, c)]);
        }
        p
    }

    pub fn field(&mut self, n: usize) -> PolyVectorField {
        PolyVectorField::new((0..n).map(|_| self.poly(n)).collect())
            .expect("components share the variable count")
    }
}
