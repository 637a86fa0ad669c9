//! Numerics for half-integral weight cusp forms: completed L-series, period
//! polynomials, Eichler cocycles on the theta group and the lift systems that
//! relate them to integral weight forms.

pub mod cocycle;
pub mod error;
pub mod forms;
pub mod group;
pub mod kr;
pub mod lift;
pub mod lseries;
pub mod period;
pub mod poly;
pub mod report;
pub mod special;
pub mod suite;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex values are plain `num_complex` doubles.
pub type ComplexValue = Complex64;
