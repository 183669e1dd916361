//! Exact Laurent polynomial matrices over `Z^d` with Gaussian rational
//! coefficients, width/leading-coefficient invariants, explicit lower bounds
//! on the small-`λ` behaviour of spectral density functions, and brute-force
//! torus quadrature to check them numerically.
//!
//! `no_std` with `alloc`. The `parallel` feature evaluates quadrature grids
//! with rayon.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bound;
pub mod density;
pub mod error;
pub mod gaussian;
pub mod jacobi;
pub mod matrix;
pub mod poly;
pub mod torus;
pub mod width;

pub use bound::{
    analyze, best_ordering, matrix_bound, ns_lower_bound, rescale_lambda, scalar_bound, step_bound,
    universal_constant, AlphaLower, AnalyzeOptions, BoundParameters, BoundReport, MinorMode, OrderingMode,
};
pub use density::{
    alpha_fit, default_alpha_window, determinant_reduction_check, gram_matrix, gram_spectrum, log_spaced,
    matrix_density, op_norm_estimate, product_inequality_check, scalar_density, AlphaFit, DensityCurve,
    ViolationReport,
};
pub use error::{BoundError, DensityError, MatrixError, PolyError};
pub use gaussian::GaussianRational;
pub use jacobi::{HermitianMatrix, HermitianSpectrum};
pub use matrix::{MinorCertificate, PolyMatrix};
pub use poly::{Exponent, LaurentPoly, NumericPoly};
pub use torus::{TorusGrid, TorusPoint};
pub use width::{lead_lex, width_profile, WidthProfile};
