//! Orthogonal polynomials on the unit circle and the real line: Verblunsky
//! and Jacobi coefficient sequences, Schur functions, CMV and Jacobi
//! matrices, right limits and reflectionless diagnostics.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cmv;
pub mod coeffs;
pub mod error;
pub mod jacobi;
pub mod moebius;
pub mod polys;
pub mod scalar;
pub mod schur;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex;
pub use scalar::{unit, wrap_angle, Real};

/// Complex `f64`.
pub type C64 = Complex<f64>;
/// Half- or whole-line Verblunsky coefficients over `f64`.
pub type Verblunsky = coeffs::VerblunskyDescriptor<f64>;
/// Half- or whole-line Jacobi parameters over `f64`.
pub type Jacobi = coeffs::JacobiDescriptor<f64>;
