//! Hermite spectral calculus and Gaussian singular integrals at desk scale.
//!
//! The crate is organized around the probability measure with density
//! `pi^(-d/2) * exp(-|x|^2)` on R^d and the physicists' Hermite polynomials
//! `H_nu`, which diagonalize the Ornstein-Uhlenbeck operator
//! `L = 1/2 Delta - <x, grad>`. On top of that spectral core it provides
//!
//! * exact polynomial calculus on finite Hermite expansions (`expansion`),
//! * reusable quadrature: adaptive Gauss-Kronrod on the unit interval with
//!   endpoint transforms, tensor Gauss-Hermite rules, and principal-value
//!   integration (`quad`),
//! * pointwise evaluators for the singular integral kernels built from a
//!   mean-zero profile function `F` and an order `m` (`kernels`),
//! * Riesz transforms in spectral and integral form, local/global kernel
//!   splitting, and the scalar calibration tying the two together (`riesz`),
//! * empirical verification experiments producing serializable reports
//!   (`analysis`).
//!
//! # Conventions
//!
//! * Hermite polynomials are the physicists' family: `H_0 = 1`,
//!   `H_1(x) = 2x`, `H_{n+1}(x) = 2x H_n(x) - 2n H_{n-1}(x)`, orthogonal for
//!   the weight `exp(-x^2)` with `||H_n||^2 = 2^n n!` under the normalized
//!   measure.
//! * The Gaussian measure always carries the `pi^(-d/2)` factor, so it is a
//!   probability measure and `L^p` norms are taken against it.
//! * Multi-dimensional polynomials are tensor products indexed by
//!   multi-indices `nu` with `|nu| = sum(nu_i)`.

pub mod analysis;
pub mod error;
pub mod expansion;
pub mod hermite;
pub mod index;
pub mod kernels;
pub mod measure;
pub mod quad;
pub mod riesz;

pub use error::{Error, Result};
pub use expansion::HermiteExpansion;
pub use index::MultiIndex;
pub use kernels::KernelSpec;
pub use measure::GaussianMeasure;
pub use quad::{IntegrationResult, QuadratureConfig};
