//! Principal values around a point singularity.
//!
//! The integral over `{|y - x0| > eps}` is computed in polar form around
//! `x0`: the angular average is taken first (which is what makes the
//! radial profile bounded for mean-zero kernels of critical homogeneity),
//! the radial integral is accumulated incrementally over the epsilon
//! shells, and the truncations are extrapolated to `eps = 0` by a
//! second-order Neville scheme.

use super::adaptive::{integrate_blocks_budgeted, integrate_interval_budgeted, BlockStep};
use super::hermite_rule::gauss_legendre_rule;
use super::{neville_at_zero, IntegrationResult, QuadratureConfig};
use crate::error::{Error, Result};

/// Outer radius beyond which nothing integrable against Gaussian tails
/// survives at double precision.
pub(crate) const RADIAL_CAP: f64 = 64.0;

pub(crate) fn angular_rule(d: usize, sphere_nodes: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    match d {
        1 => Ok(vec![(vec![1.0], 1.0), (vec![-1.0], 1.0)]),
        2 => {
            let n = sphere_nodes.max(8);
            let w = 2.0 * std::f64::consts::PI / n as f64;
            Ok((0..n)
                .map(|j| {
                    let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                    (vec![theta.cos(), theta.sin()], w)
                })
                .collect())
        }
        3 => {
            let n_az = sphere_nodes.max(8);
            let n_polar = (sphere_nodes / 2).max(4);
            let polar = gauss_legendre_rule(n_polar);
            let w_az = 2.0 * std::f64::consts::PI / n_az as f64;
            let mut rule = Vec::with_capacity(n_az * n_polar);
            for (c, wc) in polar.0.iter().zip(&polar.1) {
                let sin_theta = (1.0 - c * c).max(0.0).sqrt();
                for j in 0..n_az {
                    let phi = 2.0 * std::f64::consts::PI * j as f64 / n_az as f64;
                    rule.push((
                        vec![sin_theta * phi.cos(), sin_theta * phi.sin(), *c],
                        wc * w_az,
                    ));
                }
            }
            Ok(rule)
        }
        _ => Err(Error::InvalidConfig(format!(
            "principal value integration supports d <= 3, got d = {d}"
        ))),
    }
}

/// Angular average times the polar Jacobian: the bounded radial profile
/// whose integral over `(eps, inf)` is the truncated integral.
struct RadialProfile<'a> {
    rule: Vec<(Vec<f64>, f64)>,
    x0: &'a [f64],
    h: &'a dyn Fn(&[f64]) -> f64,
    buf: Vec<f64>,
}

impl<'a> RadialProfile<'a> {
    fn new(h: &'a dyn Fn(&[f64]) -> f64, x0: &'a [f64], cfg: &QuadratureConfig) -> Result<Self> {
        let rule = angular_rule(x0.len(), cfg.sphere_nodes)?;
        Ok(RadialProfile {
            rule,
            x0,
            h,
            buf: vec![0.0; x0.len()],
        })
    }

    fn angular_count(&self) -> usize {
        self.rule.len()
    }

    fn eval(&mut self, r: f64) -> f64 {
        let d = self.x0.len();
        let mut sum = 0.0;
        for (omega, w) in &self.rule {
            for i in 0..d {
                self.buf[i] = self.x0[i] + r * omega[i];
            }
            sum += w * (self.h)(&self.buf);
        }
        sum * r.powi(d as i32 - 1)
    }
}

/// Principal value of `integral h(y) dy` over `{|y - x0| < outer_radius}`
/// (pass [`f64::INFINITY`] for the whole space; the sweep then stops at the
/// numerical far field).
///
/// Truncated integrals are computed for every radius in `cfg.pv_epsilons`
/// (strictly decreasing; rescaled if the outer radius is smaller than the
/// largest of them) and extrapolated to zero. Convergence means successive
/// extrapolants agree within tolerance; a truncation sequence whose
/// increments fail to decay (no symmetry cancellation at the singularity)
/// is reported as divergent.
pub fn pv_integrate_within(
    h: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    outer_radius: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    cfg.validate()?;
    let mut profile = RadialProfile::new(&h, x0, cfg)?;
    let n_angular = profile.angular_count();
    let mut radial = |r: f64| profile.eval(r);

    // Keep the truncation radii inside the integration region.
    let mut epsilons = cfg.pv_epsilons.clone();
    if outer_radius.is_finite() && epsilons[0] > outer_radius / 2.0 {
        let scale = outer_radius / (2.0 * epsilons[0]);
        for e in &mut epsilons {
            *e *= scale;
        }
    }

    let mut remaining = cfg.max_evals;

    // Outer part: from the largest shell to the boundary (or far field).
    let outer = if outer_radius.is_finite() {
        integrate_interval_budgeted(&mut radial, epsilons[0], outer_radius, cfg, &mut remaining)?
    } else {
        integrate_blocks_budgeted(
            &mut radial,
            epsilons[0],
            BlockStep::Linear(1.0),
            RADIAL_CAP,
            cfg.abs_tol / 8.0,
            cfg,
            &mut remaining,
        )?
    };

    // Shell segments between successive truncation radii, accumulated so
    // that I(eps_k) reuses everything already integrated.
    let mut truncations = vec![outer];
    for k in 1..epsilons.len() {
        let seg = integrate_interval_budgeted(
            &mut radial,
            epsilons[k],
            epsilons[k - 1],
            cfg,
            &mut remaining,
        )?;
        let prev = *truncations.last().unwrap();
        truncations.push(prev.combine(seg));
    }

    let values: Vec<f64> = truncations.iter().map(|t| t.value).collect();
    let pieces_err: f64 = truncations.last().unwrap().error_estimate;
    let pieces_converged = truncations.iter().all(|t| t.converged);
    let evaluations = truncations.last().unwrap().evaluations * n_angular;

    // Divergence heuristic: increments of the truncation sequence must decay.
    let increments: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let last_inc = *increments.last().unwrap();
    let first_inc = increments[0];
    let scale_tol = cfg.tolerance_for(*values.last().unwrap());
    if last_inc >= 0.9 * first_inc && last_inc > 8.0 * scale_tol {
        return Err(Error::PrincipalValueDiverges(format!(
            "truncation increments do not decay: first {first_inc:.3e}, last {last_inc:.3e}"
        )));
    }

    // Extrapolants: linear from the first two points, then quadratic over a
    // sliding window of three.
    let mut extrapolants = vec![neville_at_zero(&epsilons[0..2], &values[0..2])];
    for j in 2..values.len() {
        extrapolants.push(neville_at_zero(&epsilons[j - 2..=j], &values[j - 2..=j]));
    }
    let value = *extrapolants.last().unwrap();
    let prev = extrapolants[extrapolants.len() - 2];
    let extrap_err = (value - prev).abs();

    Ok(IntegrationResult {
        value,
        error_estimate: extrap_err + pieces_err,
        evaluations,
        converged: pieces_converged && extrap_err <= cfg.tolerance_for(value),
    })
}

/// Principal value of `integral h(y) dy` around the singular point `x0`.
pub fn pv_integrate(
    h: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    pv_integrate_within(h, x0, f64::INFINITY, cfg)
}

/// Principal value for integrands whose angular average around `x0` is
/// absolutely integrable at the origin.
///
/// For a kernel of critical homogeneity with mean-zero angular part the
/// polar average `A(r)` grows no faster than `r^(-1/2)`, so after the
/// substitution `r = s^2` the inner region is an ordinary adaptive
/// integral: no epsilon truncation enters and no extrapolation bias of
/// order `sqrt(eps)` is left behind. Integrands without the cancellation
/// make the inner integral diverge, which surfaces as non-convergence and
/// is reported as a divergent principal value.
pub fn pv_integrate_resolved(
    h: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    split_radius: f64,
    outer_radius: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    cfg.validate()?;
    let mut profile = RadialProfile::new(&h, x0, cfg)?;
    let n_angular = profile.angular_count();
    let mut remaining = cfg.max_evals;

    let split = if outer_radius.is_finite() {
        split_radius.min(outer_radius)
    } else {
        split_radius
    };

    let inner = {
        let mut transformed = |s: f64| {
            if s == 0.0 {
                return 0.0;
            }
            profile.eval(s * s) * 2.0 * s
        };
        integrate_interval_budgeted(&mut transformed, 0.0, split.sqrt(), cfg, &mut remaining)?
    };
    if !inner.converged {
        return Err(Error::PrincipalValueDiverges(format!(
            "inner radial integral does not settle: value {:.3e}, estimate {:.3e}",
            inner.value, inner.error_estimate
        )));
    }

    let mut radial = |r: f64| profile.eval(r);
    let outer = if outer_radius.is_finite() {
        integrate_interval_budgeted(&mut radial, split, outer_radius, cfg, &mut remaining)?
    } else {
        integrate_blocks_budgeted(
            &mut radial,
            split,
            BlockStep::Linear(1.0),
            RADIAL_CAP,
            cfg.abs_tol / 8.0,
            cfg,
            &mut remaining,
        )?
    };

    let mut total = inner.combine(outer);
    total.evaluations *= n_angular;
    Ok(total)
}

/// Proper integral of `h` over the annulus `inner_radius < |y - x0| <
/// outer_radius` (no singularity inside), in the same polar form.
pub fn integrate_annulus(
    h: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    inner_radius: f64,
    outer_radius: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    cfg.validate()?;
    let mut profile = RadialProfile::new(&h, x0, cfg)?;
    let n_angular = profile.angular_count();
    let mut radial = |r: f64| profile.eval(r);
    let mut remaining = cfg.max_evals;
    let mut res = if outer_radius.is_finite() {
        integrate_interval_budgeted(&mut radial, inner_radius, outer_radius, cfg, &mut remaining)?
    } else {
        integrate_blocks_budgeted(
            &mut radial,
            inner_radius,
            BlockStep::Linear(1.0),
            RADIAL_CAP,
            cfg.abs_tol / 8.0,
            cfg,
            &mut remaining,
        )?
    };
    res.evaluations *= n_angular;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> QuadratureConfig {
        // second-order epsilon extrapolation resolves generic densities to
        // about eps_last^3; the test tolerances match that
        QuadratureConfig::default().with_tols(1e-6, 1e-6)
    }

    #[test]
    fn odd_symmetry_cancels_exactly() {
        // h odd about x0 and integrable: every truncation vanishes, so the
        // limit equals any of them
        for h in [
            (|z: f64| z * (-z * z).exp()) as fn(f64) -> f64,
            (|z: f64| 1.0 / z * (-z * z).exp()) as fn(f64) -> f64,
        ] {
            let r = pv_integrate(|y: &[f64]| h(y[0] - 0.3), &[0.3], &cfg()).unwrap();
            assert!(r.converged);
            assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn pole_on_bounded_window_is_zero() {
        let x0 = 0.1;
        let r = pv_integrate(
            |y: &[f64]| {
                let z = y[0] - x0;
                if z.abs() < 3.0 {
                    1.0 / z
                } else {
                    0.0
                }
            },
            &[x0],
            &cfg(),
        )
        .unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn hilbert_type_value_matches_taylor_subtraction_oracle() {
        // h(y) = g(y)/(y - x0) with g a Gaussian bump: the principal value
        // equals the integral of the smooth quotient (g(y) - g(x0))/(y - x0).
        let x0 = 0.4;
        let g = |y: f64| (-(y - 0.9) * (y - 0.9)).exp();
        let r = pv_integrate(|y: &[f64]| g(y[0]) / (y[0] - x0), &[x0], &cfg()).unwrap();

        let oracle = crate::quad::integrate_interval(
            |y: f64| {
                let z = y - x0;
                if z.abs() < 1e-8 {
                    // derivative of g at x0
                    -2.0 * (x0 - 0.9) * g(x0)
                } else {
                    (g(y) - g(x0)) / z
                }
            },
            x0 - 30.0,
            x0 + 30.0,
            &cfg(),
        )
        .unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, oracle.value, epsilon = 1e-6);
    }

    #[test]
    fn divergent_absolute_singularity_is_detected() {
        // |y - x0|^(-1) in d = 1 has log-divergent truncations
        let r = pv_integrate(
            |y: &[f64]| {
                let z = (y[0] - 0.0).abs();
                1.0 / z * (-z * z).exp()
            },
            &[0.0],
            &cfg(),
        );
        assert!(matches!(r, Err(Error::PrincipalValueDiverges(_))));
    }

    #[test]
    fn two_dimensional_riesz_style_kernel() {
        // Omega(theta)/|y|^2 * exp(-|y|^2) with mean-zero Omega = cos(theta):
        // angular cancellation makes each truncation equal to the limit.
        let r = pv_integrate(
            |y: &[f64]| {
                let rho_sq = y[0] * y[0] + y[1] * y[1];
                let rho = rho_sq.sqrt();
                let cos_theta = y[0] / rho;
                cos_theta / rho_sq * (-rho_sq).exp()
            },
            &[0.0, 0.0],
            &cfg(),
        )
        .unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn ball_plus_annulus_equals_whole_space() {
        let h = |y: &[f64]| {
            let z = y[0] - 0.2;
            (y[0] * y[0] * -1.0).exp() * if z == 0.0 { 0.0 } else { z.signum() / z.abs().sqrt() }
        };
        let whole = pv_integrate(h, &[0.2], &cfg()).unwrap();
        let ball = pv_integrate_within(h, &[0.2], 0.8, &cfg()).unwrap();
        let shell = integrate_annulus(h, &[0.2], 0.8, f64::INFINITY, &cfg()).unwrap();
        assert_abs_diff_eq!(ball.value + shell.value, whole.value, epsilon = 1e-6);
    }

    #[test]
    fn small_outer_radius_rescales_epsilons() {
        let h = |y: &[f64]| {
            let z = y[0];
            if z == 0.0 {
                0.0
            } else {
                1.0 / z
            }
        };
        // ball of radius 0.05 < default eps0 = 0.2 still works
        let r = pv_integrate_within(h, &[0.0], 0.05, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-10);
    }
}
