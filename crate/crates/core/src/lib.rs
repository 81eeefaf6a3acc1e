//! Numerical kernels for noncommutative Fourier series on concrete compact
//! groups: coefficient bundles, weighted Schatten-sum algebra norms, their
//! duals, restriction norms, and the scan-style diagnostics built on them.

pub mod coeffs;
pub mod duals;
pub mod error;
pub mod linalg;
pub mod weights;
pub mod matnorm;
pub mod norms;

pub use error::{Error, Result};
