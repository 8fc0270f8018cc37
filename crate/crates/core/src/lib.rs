//! Classical orthogonal polynomials from Pearson pairs.

pub mod algebra;
pub mod characterizations;
pub mod classification;
pub mod dual;
pub mod error;
pub mod functional;
pub mod io;
pub mod pearson;
pub mod recurrence;

pub use algebra::{pochhammer, Mode, Poly, Scalar};
pub use error::{Error, Result};
