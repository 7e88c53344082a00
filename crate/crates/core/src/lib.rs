//! Exact tensor calculus for the canonical endomorphism field `A` of a
//! finite-dimensional Lie algebra: `A_x = ad_x` viewed as a (1,1)-tensor field
//! with linear polynomial coefficients.
//!
//! Everything symbolic is exact over the rationals; only [`flow`] works in
//! floating point.

pub mod algebra;
pub mod catalog;
pub mod coalgebra;
pub mod endo;
pub mod error;
pub mod fieldlang;
pub mod flow;
pub mod lax;
pub mod poly;
pub mod random;
pub mod rational;
pub mod report;
pub mod tensor;

pub use algebra::{load_algebra, AlgebraVector, LieAlgebra, Matrix};
pub use coalgebra::PoissonPackage;
pub use endo::{casimirs, nijenhuis, CanonicalPackage, CasimirSet};
pub use error::{Error, Result};
pub use fieldlang::{parse_field, parse_params, parse_poly, Params};
pub use flow::{integrate, FlowSpec, Method, Trajectory};
pub use lax::{deformed_bracket, lax_field, LaxSystem};
pub use poly::{Monomial, MultiPoly};
pub use rational::Rational;
pub use report::{Status, VerificationReport};
pub use tensor::{ConstantOneTwoField, EndoField, PolyVectorField, VectorBiform};
