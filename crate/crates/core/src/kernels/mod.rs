//! Singular integral kernels over the Gaussian measure.
//!
//! A [`KernelSpec`] bundles the profile function `F` (with its gradient),
//! the order `m`, and the dimension. From it the module evaluates
//!
//! * the alternative kernel
//!   `integral_0^1 varphi_m(r) F((x-ry)/sqrt(1-r^2))
//!    exp(-|y-rx|^2/(1-r^2)) (1-r^2)^(-d/2-1) dr`
//!   with `varphi_m(r) = ((-log r)/(1-r^2))^((m-2)/2) r^(d-1)`,
//! * the plain generalized kernel (weight `r^(m-1)`, argument swapped),
//! * the homogeneous convolution approximation `K(z) = Omega(z)/|z|^d`,
//! * the comparison kernels used by the local estimates.

mod admissibility;
mod dump;
mod evaluate;
mod scalar;

pub use admissibility::{growth_probe, orthogonality_check};
pub use dump::{write_kernel_dump, KernelDumpRow};
pub use evaluate::{
    cz_approx_kernel, diagnostic_kernels, kernel_general, kernel_general_alt, kernel_psi_stripped,
};
pub use scalar::{
    b_fun, b_fun_one_minus, geometry, psi_m, psi_m_zero, varphi_m, varphi_m_extended,
    GeometryCache,
};

pub(crate) use evaluate::{kernel_general_alt_raw, kernel_general_raw};
pub(crate) use scalar::psi_with_exponent;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expansion::HermiteExpansion;
use crate::index::MultiIndex;
use crate::quad::QuadratureConfig;

type ProfileFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// The data `(F, m, d)` defining a generalized Gaussian singular integral.
///
/// `F` should integrate to zero against the Gaussian measure and grow
/// slower than `exp(eps |x|^2)` for every positive `eps`;
/// [`orthogonality_check`] and [`growth_probe`] provide the corresponding
/// numerical witnesses.
#[derive(Clone)]
pub struct KernelSpec {
    dimension: usize,
    m: u32,
    f: ProfileFn,
    grad: GradientFn,
    gradient_is_numeric: bool,
    label: String,
}

impl std::fmt::Debug for KernelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelSpec")
            .field("dimension", &self.dimension)
            .field("m", &self.m)
            .field("label", &self.label)
            .field("gradient_is_numeric", &self.gradient_is_numeric)
            .finish()
    }
}

/// Central-difference step for the numeric gradient fallback.
fn numeric_gradient_step(xi: f64) -> f64 {
    f64::EPSILON.cbrt() * (1.0 + xi.abs())
}

impl KernelSpec {
    /// Profile from explicit value and gradient handles.
    pub fn new(
        dimension: usize,
        m: u32,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        label: impl Into<String>,
    ) -> Self {
        KernelSpec {
            dimension,
            m,
            f: Arc::new(f),
            grad: Arc::new(grad),
            gradient_is_numeric: false,
            label: label.into(),
        }
    }

    /// Profile from a value handle only; the gradient falls back to central
    /// differences with step `eps^(1/3) (1 + |x_i|)` and reports itself as
    /// numeric.
    pub fn with_numeric_gradient(
        dimension: usize,
        m: u32,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        label: impl Into<String>,
    ) -> Self {
        let value = Arc::new(f);
        let for_grad = value.clone();
        let grad = move |x: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; x.len()];
            let mut probe = x.to_vec();
            for i in 0..x.len() {
                let h = numeric_gradient_step(x[i]);
                probe[i] = x[i] + h;
                let up = for_grad(&probe);
                probe[i] = x[i] - h;
                let down = for_grad(&probe);
                probe[i] = x[i];
                out[i] = (up - down) / (2.0 * h);
            }
            out
        };
        KernelSpec {
            dimension,
            m,
            f: value,
            grad: Arc::new(grad),
            gradient_is_numeric: true,
            label: label.into(),
        }
    }

    /// Profile `F = scale * H_beta` with `m = |beta|`; value and gradient
    /// are exact through the Hermite recurrences, with an allocation-free
    /// value path (this closure sits in the innermost quadrature loops).
    pub fn hermite(dimension: usize, beta: &MultiIndex, scale: f64) -> Result<Self> {
        if beta.dimension() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                got: beta.dimension(),
            });
        }
        if beta.order() == 0 {
            return Err(Error::InvalidConfig(
                "hermite kernel profile needs |beta| >= 1".into(),
            ));
        }
        let label = format!(
            "hermite:{}",
            beta.entries()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        let orders: Vec<u32> = beta.entries().to_vec();
        let value = move |x: &[f64]| -> f64 {
            let mut prod = scale;
            for (&n, &xi) in orders.iter().zip(x) {
                prod *= crate::hermite::hermite_eval_1d(n, xi);
            }
            prod
        };
        let grad_orders: Vec<u32> = beta.entries().to_vec();
        // d/dx_i H_beta = 2 beta_i H_(beta - e_i) along axis i
        let grad = move |x: &[f64]| -> Vec<f64> {
            (0..x.len())
                .map(|axis| {
                    let bi = grad_orders[axis];
                    if bi == 0 {
                        return 0.0;
                    }
                    let mut prod = scale * 2.0 * bi as f64;
                    for (j, (&n, &xj)) in grad_orders.iter().zip(x).enumerate() {
                        let order = if j == axis { n - 1 } else { n };
                        prod *= crate::hermite::hermite_eval_1d(order, xj);
                    }
                    prod
                })
                .collect()
        };
        Ok(KernelSpec {
            dimension,
            m: beta.order(),
            f: Arc::new(value),
            grad: Arc::new(grad),
            gradient_is_numeric: false,
            label,
        })
    }

    /// Profile from a Hermite expansion, with the exact gradient.
    pub fn from_expansion(
        f: &HermiteExpansion,
        m: u32,
        label: impl Into<String>,
    ) -> Result<Self> {
        let dimension = f.dimension();
        let derivatives: Vec<HermiteExpansion> = (0..dimension)
            .map(|axis| f.derivative(axis))
            .collect::<Result<_>>()?;
        let value_expansion = f.clone();
        let value = move |x: &[f64]| value_expansion.eval(x).unwrap();
        let grad = move |x: &[f64]| -> Vec<f64> {
            derivatives.iter().map(|g| g.eval(x).unwrap()).collect()
        };
        Ok(KernelSpec {
            dimension,
            m,
            f: Arc::new(value),
            grad: Arc::new(grad),
            gradient_is_numeric: false,
            label: label.into(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn gradient_is_numeric(&self) -> bool {
        self.gradient_is_numeric
    }

    pub fn f(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        (self.grad)(x)
    }

    /// A copy with a different kernel order `m` (the profile is unchanged).
    pub fn with_order(mut self, m: u32) -> Self {
        self.m = m;
        self
    }

    /// A copy with the profile multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> Self {
        let f = self.f.clone();
        let grad = self.grad.clone();
        KernelSpec {
            dimension: self.dimension,
            m: self.m,
            f: Arc::new(move |x: &[f64]| scale * f(x)),
            grad: Arc::new(move |x: &[f64]| grad(x).into_iter().map(|g| scale * g).collect()),
            gradient_is_numeric: self.gradient_is_numeric,
            label: self.label.clone(),
        }
    }

    /// Admissibility witnesses: the Gaussian mean of `F` must vanish within
    /// `tol`, and the growth probe must return a finite exponent estimate.
    pub fn validate(&self, cfg: &QuadratureConfig, tol: f64) -> Result<()> {
        let mean = orthogonality_check(self, cfg)?;
        if mean.abs() > tol {
            return Err(Error::InvalidConfig(format!(
                "profile '{}' fails the mean-zero condition: integral F dgamma = {mean:.3e}",
                self.label
            )));
        }
        let eps_hat = growth_probe(self, 6.0, 64);
        if !eps_hat.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "profile '{}' fails the growth probe",
                self.label
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_profile_evaluates_exactly() {
        let spec = KernelSpec::hermite(2, &MultiIndex::new(vec![1, 1]), 1.0).unwrap();
        // H_(1,1)(x) = 2x_0 * 2x_1
        assert_eq!(spec.f(&[0.5, 2.0]), 4.0);
        let g = spec.grad(&[0.5, 2.0]);
        assert_eq!(g, vec![8.0, 2.0]);
        assert!(!spec.gradient_is_numeric());
        assert_eq!(spec.m(), 2);
    }

    #[test]
    fn numeric_gradient_approximates_derivative() {
        let spec =
            KernelSpec::with_numeric_gradient(1, 1, |x: &[f64]| (2.0 * x[0]).sin(), "sinusoid");
        assert!(spec.gradient_is_numeric());
        let g = spec.grad(&[0.4]);
        let exact = 2.0 * (0.8f64).cos();
        assert!((g[0] - exact).abs() < 1e-8);
    }

    #[test]
    fn validation_accepts_mean_zero_and_rejects_constants() {
        let cfg = QuadratureConfig::default();
        let good = KernelSpec::hermite(1, &MultiIndex::new(vec![1]), 1.0).unwrap();
        assert!(good.validate(&cfg, 1e-8).is_ok());
        let bad = KernelSpec::with_numeric_gradient(1, 1, |_| 1.0, "constant");
        assert!(bad.validate(&cfg, 1e-8).is_err());
    }
}
