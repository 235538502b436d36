//! Reusable numerical integration.
//!
//! Three entry points cover every integral in the crate:
//!
//! * [`integrate_unit`] — adaptive Gauss-Kronrod on (0,1) with logarithmic
//!   endpoint transforms, for the `dr`/`dt` kernel profiles with endpoint
//!   singularities,
//! * [`gauss_hermite`] — tensor Gauss-Hermite rules normalized to the
//!   Gaussian probability measure, exact on polynomials of per-axis degree
//!   `2n - 1`,
//! * [`pv_integrate`] — principal values around a point singularity by
//!   epsilon-truncation and polynomial extrapolation.

mod adaptive;
mod hermite_rule;
mod pv;
mod rule;

pub use adaptive::{
    integrate_blocks, integrate_interval, integrate_unit, integrate_unit_split, BlockStep,
};
pub use hermite_rule::{gauss_hermite, gauss_hermite_rule, gauss_legendre_rule};
pub use pv::{integrate_annulus, pv_integrate, pv_integrate_resolved, pv_integrate_within};

pub(crate) use pv::angular_rule;

use crate::error::{Error, Result};

/// Tolerances, node counts, and principal-value parameters shared by the
/// integration routines.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureConfig {
    /// Absolute tolerance target.
    pub abs_tol: f64,
    /// Relative tolerance target (against the accumulated value).
    pub rel_tol: f64,
    /// Maximum number of panel bisections in one adaptive run.
    pub max_refinements: usize,
    /// Nodes per axis for tensor Gauss-Hermite rules.
    pub gh_nodes_per_axis: usize,
    /// Strictly decreasing truncation radii for principal values.
    pub pv_epsilons: Vec<f64>,
    /// Hard cap on integrand evaluations per top-level integral.
    pub max_evals: usize,
    /// Nodes for the angular rule used by principal-value integration in
    /// dimensions two and three.
    pub sphere_nodes: usize,
    /// Permit kernel evaluation at coincident points (the integral is only
    /// finite there in special cases, so this defaults to off).
    pub allow_coincident: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_refinements: 400,
            gh_nodes_per_axis: 48,
            pv_epsilons: vec![0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125, 0.0015625],
            max_evals: 10_000_000,
            sphere_nodes: 32,
            allow_coincident: false,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tols(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_gh_nodes(mut self, nodes: usize) -> Self {
        self.gh_nodes_per_axis = nodes;
        self
    }

    pub fn with_pv_epsilons(mut self, eps: Vec<f64>) -> Self {
        self.pv_epsilons = eps;
        self
    }

    pub fn with_sphere_nodes(mut self, nodes: usize) -> Self {
        self.sphere_nodes = nodes;
        self
    }

    pub fn with_allow_coincident(mut self, allow: bool) -> Self {
        self.allow_coincident = allow;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if self.pv_epsilons.len() < 3 {
            return Err(Error::InvalidConfig(
                "pv_epsilons needs at least 3 entries".into(),
            ));
        }
        let decreasing = self
            .pv_epsilons
            .windows(2)
            .all(|w| w[0] > w[1] && w[1] > 0.0);
        if !decreasing {
            return Err(Error::InvalidConfig(
                "pv_epsilons must be strictly decreasing and positive".into(),
            ));
        }
        if self.gh_nodes_per_axis < 2 {
            return Err(Error::InvalidConfig("gh_nodes_per_axis < 2".into()));
        }
        Ok(())
    }

    /// Effective tolerance for a value of the given magnitude.
    pub(crate) fn tolerance_for(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude.abs())
    }
}

/// Outcome of a single integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl IntegrationResult {
    pub(crate) fn combine(self, other: IntegrationResult) -> IntegrationResult {
        IntegrationResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    pub(crate) fn zero() -> IntegrationResult {
        IntegrationResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }
}

/// Neville polynomial extrapolation of `(xs, ys)` to `x = 0`.
///
/// The points are used in the order given; callers pass the last few members
/// of a sequence tending to zero.
pub(crate) fn neville_at_zero(xs: &[f64], ys: &[f64]) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let mut table: Vec<f64> = ys.to_vec();
    let n = table.len();
    for level in 1..n {
        for i in 0..n - level {
            let xi = xs[i];
            let xj = xs[i + level];
            table[i] = (xi * table[i + 1] - xj * table[i]) / (xi - xj);
        }
    }
    table[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neville_recovers_polynomial_limits() {
        // y = 3 - 2x + x^2 sampled away from zero
        let xs = [0.4, 0.2, 0.1, 0.05];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x + x * x).collect();
        let lim = neville_at_zero(&xs, &ys);
        assert!((lim - 3.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation_rejects_bad_epsilons() {
        let cfg = QuadratureConfig::default().with_pv_epsilons(vec![0.1, 0.2, 0.05]);
        assert!(cfg.validate().is_err());
        let cfg = QuadratureConfig::default().with_pv_epsilons(vec![0.1, 0.05]);
        assert!(cfg.validate().is_err());
        assert!(QuadratureConfig::default().validate().is_ok());
    }
}
