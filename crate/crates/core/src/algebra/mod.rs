//! Scalars, polynomials and small exact linear algebra.

pub mod approx;
pub mod linalg;
pub mod poly;
pub mod scalar;

pub use approx::ApproxComplex;
pub use poly::Poly;
pub use scalar::{pochhammer, GaussianRational, Mode, Scalar};
