//! The normalized Gaussian measure on R^d.

use std::f64::consts::PI;

/// Probability measure with density `pi^(-d/2) exp(-|x|^2)` per unit
/// Lebesgue volume.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussianMeasure {
    dimension: usize,
}

impl GaussianMeasure {
    pub fn new(dimension: usize) -> Self {
        GaussianMeasure { dimension }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Density at `x`.
    pub fn density(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        PI.powf(-(self.dimension as f64) / 2.0) * (-norm_sq).exp()
    }

    /// Log-density at `x`; avoids underflow far from the origin.
    pub fn log_density(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        -(self.dimension as f64) / 2.0 * PI.ln() - norm_sq
    }
}
