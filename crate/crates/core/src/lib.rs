//! Mandelbrot fractal percolation in one and two dimensions.
//!
//! The crate samples the construction steps `F_n` and their closed complements
//! `C_n`, measures their Minkowski functionals on bit lattices, evaluates the
//! closed-form expectations and rescaled limits of those functionals, and
//! locates the characteristic zeros and minimum of the limit curves.

pub mod analytic;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod montecarlo;
pub mod oracle;
pub mod rng;
pub mod sampler;
pub mod scalar;
pub mod thresholds;

pub use error::{Error, Result};
pub use scalar::{Exact, Scalar};
