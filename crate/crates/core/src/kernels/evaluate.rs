//! Pointwise kernel evaluation by adaptive quadrature in the `t = 1 - r^2`
//! variable.

use super::scalar::{geometry, psi_with_exponent};
use super::KernelSpec;
use crate::error::{Error, Result};
use crate::quad::{
    integrate_blocks, integrate_unit_split, BlockStep, IntegrationResult, QuadratureConfig,
};

/// Which of the two generalized kernels is being evaluated. They share the
/// exponential weight `exp(-u(t))/t^(d/2+1)`; the alternative one carries
/// the profile argument `(x - sqrt(1-t) y)/sqrt(t)` and the weight exponent
/// `d`, the plain one `(y - sqrt(1-t) x)/sqrt(t)` and exponent `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Orientation {
    Alternative,
    General,
}

fn check_points(spec: &KernelSpec, x: &[f64], y: &[f64], cfg: &QuadratureConfig) -> Result<()> {
    if x.len() != spec.dimension() || y.len() != spec.dimension() {
        return Err(Error::DimensionMismatch {
            expected: spec.dimension(),
            got: if x.len() != spec.dimension() {
                x.len()
            } else {
                y.len()
            },
        });
    }
    if x == y && !cfg.allow_coincident {
        return Err(Error::CoincidentPoints);
    }
    Ok(())
}

fn kernel_profile_raw(
    spec: &KernelSpec,
    x: &[f64],
    y: &[f64],
    orientation: Orientation,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    check_points(spec, x, y, cfg)?;
    let d = spec.dimension();
    let geo = geometry(x, y)?;
    let q = match orientation {
        Orientation::Alternative => d as f64,
        Orientation::General => spec.m() as f64,
    };
    let power = d as f64 / 2.0 + 1.0;
    let mut arg = vec![0.0f64; d];

    integrate_unit_split(
        |t: f64, omt: f64| {
            let exponent = -geo.u_split(t, omt) - power * t.ln();
            if !(exponent > -745.0) {
                return 0.0;
            }
            match orientation {
                Orientation::Alternative => geo.fill_arg_alt(t, omt, &mut arg),
                Orientation::General => geo.fill_arg_gen(t, omt, &mut arg),
            }
            0.5 * psi_with_exponent(t, omt, spec.m(), q) * spec.f(&arg) * exponent.exp()
        },
        cfg,
    )
}

fn kernel_profile(
    spec: &KernelSpec,
    x: &[f64],
    y: &[f64],
    orientation: Orientation,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    let result = kernel_profile_raw(spec, x, y, orientation, cfg)?;
    if !result.converged {
        return Err(Error::QuadratureNonConvergence {
            value: result.value,
            error_estimate: result.error_estimate,
        });
    }
    Ok(result)
}

/// The alternative generalized kernel
/// `integral_0^1 varphi_m(r) F((x-ry)/sqrt(1-r^2))
///  exp(-|y-rx|^2/(1-r^2)) (1-r^2)^(-d/2-1) dr`,
/// evaluated in the `t = 1 - r^2` variable with logarithmic endpoint
/// transforms. The singularity of the map `(x,y)` at coincident points is
/// rejected unless `cfg.allow_coincident` is set.
pub fn kernel_general_alt(
    spec: &KernelSpec,
    x: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    kernel_profile(spec, x, y, Orientation::Alternative, cfg)
}

/// [`kernel_general_alt`] without the convergence gate: the flagged value
/// and its estimate are returned as-is. Operator-level quadratures absorb
/// stragglers through their own error budgets.
pub(crate) fn kernel_general_alt_raw(
    spec: &KernelSpec,
    x: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    kernel_profile_raw(spec, x, y, Orientation::Alternative, cfg)
}

/// The plain generalized kernel: weight `r^(m-1)` and profile argument
/// `(y - rx)/sqrt(1-r^2)`.
pub fn kernel_general(
    spec: &KernelSpec,
    x: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    kernel_profile(spec, x, y, Orientation::General, cfg)
}

/// [`kernel_general`] without the convergence gate.
pub(crate) fn kernel_general_raw(
    spec: &KernelSpec,
    x: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    kernel_profile_raw(spec, x, y, Orientation::General, cfg)
}

/// The profile-only comparison kernel
/// `K_1(x,y) = integral_0^1 F((x - sqrt(1-t) y)/sqrt(t))
///  exp(-u(t)) t^(-d/2-1) dt`
/// (no `psi_m` factor, no 1/2 prefactor) entering the local estimates.
pub fn kernel_psi_stripped(
    spec: &KernelSpec,
    x: &[f64],
    y: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    check_points(spec, x, y, cfg)?;
    let d = spec.dimension();
    let geo = geometry(x, y)?;
    let power = d as f64 / 2.0 + 1.0;
    let mut arg = vec![0.0f64; d];
    let result = integrate_unit_split(
        |t: f64, omt: f64| {
            let exponent = -geo.u_split(t, omt) - power * t.ln();
            if !(exponent > -745.0) {
                return 0.0;
            }
            geo.fill_arg_alt(t, omt, &mut arg);
            spec.f(&arg) * exponent.exp()
        },
        cfg,
    )?;
    if !result.converged {
        return Err(Error::QuadratureNonConvergence {
            value: result.value,
            error_estimate: result.error_estimate,
        });
    }
    Ok(result)
}

/// The convolution-type approximation
/// `K(z) = integral_0^inf F(-z/sqrt(t)) exp(-|z|^2/t) t^(-d/2-1) dt
///       = 2 |z|^(-d) integral_0^inf F(-(z/|z|) s) exp(-s^2) s^(d-1) ds`,
/// homogeneous of degree `-d` with mean-zero angular part for admissible
/// profiles.
pub fn cz_approx_kernel(spec: &KernelSpec, z: &[f64], cfg: &QuadratureConfig) -> Result<f64> {
    if z.len() != spec.dimension() {
        return Err(Error::DimensionMismatch {
            expected: spec.dimension(),
            got: z.len(),
        });
    }
    let norm: f64 = z.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let omega: Vec<f64> = z.iter().map(|v| v / norm).collect();
    let d = spec.dimension();
    let mut arg = vec![0.0f64; d];
    let radial = integrate_blocks(
        |s: f64| {
            for i in 0..d {
                arg[i] = -omega[i] * s;
            }
            spec.f(&arg) * (-s * s).exp() * s.powi(d as i32 - 1)
        },
        0.0,
        BlockStep::Linear(2.0),
        64.0,
        cfg.abs_tol / 8.0,
        cfg,
    )?;
    if !radial.converged {
        return Err(Error::QuadratureNonConvergence {
            value: radial.value,
            error_estimate: radial.error_estimate,
        });
    }
    Ok(2.0 * norm.powi(-(d as i32)) * radial.value)
}

/// The two comparison kernels of the local theory:
/// `K_2 = integral_0^1 exp(-delta |x-y|^2/t) t^(-d/2) (1-t)^(-1/2) dt`
/// by quadrature and `K_3 = (1 + |x|^(1/2)) / |x-y|^(d-1/2)` in closed form.
pub fn diagnostic_kernels(
    x: &[f64],
    y: &[f64],
    delta: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if delta <= 0.0 {
        return Err(Error::OutOfDomain {
            name: "delta",
            value: delta,
            domain: "(0, infinity)",
        });
    }
    let dist_sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    if dist_sq == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let d = x.len() as f64;
    let k2 = integrate_unit_split(
        |t: f64, omt: f64| {
            let exponent = -delta * dist_sq / t - (d / 2.0) * t.ln();
            if !(exponent > -745.0) {
                return 0.0;
            }
            exponent.exp() / omt.sqrt()
        },
        cfg,
    )?;
    let x_norm: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let k3 = (1.0 + x_norm.sqrt()) / dist_sq.sqrt().powf(d - 0.5);
    Ok((k2.value, k3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::MultiIndex;
    use approx::assert_abs_diff_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default().with_tols(1e-11, 1e-11)
    }

    #[test]
    fn odd_profile_vanishes_at_origin_pair() {
        // F odd means F(0) = 0, so the integrand vanishes identically at
        // x = y = 0 (allowed through the coincident-point flag).
        let spec = KernelSpec::hermite(1, &MultiIndex::new(vec![1]), 1.0).unwrap();
        let cfg = cfg().with_allow_coincident(true);
        let v = kernel_general_alt(&spec, &[0.0], &[0.0], &cfg).unwrap();
        assert_eq!(v.value, 0.0);
        let v = kernel_general(&spec, &[0.0], &[0.0], &cfg).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn coincident_points_are_rejected_by_default() {
        let spec = KernelSpec::hermite(1, &MultiIndex::new(vec![1]), 1.0).unwrap();
        assert!(matches!(
            kernel_general_alt(&spec, &[0.3], &[0.3], &cfg()),
            Err(Error::CoincidentPoints)
        ));
    }

    #[test]
    fn kernel_is_linear_in_the_profile() {
        let spec = KernelSpec::hermite(1, &MultiIndex::new(vec![1]), 1.0).unwrap();
        let scaled = spec.scaled(2.0);
        let base = kernel_general_alt(&spec, &[1.0], &[2.0], &cfg()).unwrap();
        let twice = kernel_general_alt(&scaled, &[1.0], &[2.0], &cfg()).unwrap();
        assert_abs_diff_eq!(twice.value, 2.0 * base.value, epsilon = 1e-9);
    }

    #[test]
    fn halving_tolerance_stays_within_error_estimate() {
        let spec = KernelSpec::hermite(1, &MultiIndex::new(vec![1]), 1.0).unwrap();
        let coarse_cfg = QuadratureConfig::default().with_tols(1e-8, 1e-8);
        let fine_cfg = QuadratureConfig::default().with_tols(5e-9, 5e-9);
        let coarse = kernel_general_alt(&spec, &[0.4], &[1.1], &coarse_cfg).unwrap();
        let fine = kernel_general_alt(&spec, &[0.4], &[1.1], &fine_cfg).unwrap();
        assert!((coarse.value - fine.value).abs() <= coarse.error_estimate.max(1e-14));
    }

    #[test]
    fn general_and_alternative_agree_on_the_swap_symmetry() {
        // With m = d the weights coincide, and for |x| = |y| the exponential
        // factors match after exchanging the points, so
        // K_general(y, x) = K_alt(x, y).
        let profile = crate::expansion::HermiteExpansion::hermite(MultiIndex::new(vec![2])).unwrap();
        let spec = KernelSpec::from_expansion(&profile, 1, "even-profile").unwrap();
        assert_eq!(spec.m() as usize, spec.dimension());
        let x = [1.3];
        let y = [-1.3];
        let alt = kernel_general_alt(&spec, &x, &y, &cfg()).unwrap();
        let gen = kernel_general(&spec, &y, &x, &cfg()).unwrap();
        assert_abs_diff_eq!(alt.value, gen.value, epsilon = 1e-9);
    }

    #[test]
    fn cz_kernel_closed_form_and_homogeneity() {
        let spec = KernelSpec::hermite(1, &MultiIndex::new(vec![1]), 1.0).unwrap();
        // F = H_1, d = 1, z = 1: K(1) = 2 * integral of -2s e^{-s^2} = -2
        let v = cz_approx_kernel(&spec, &[1.0], &cfg()).unwrap();
        assert_abs_diff_eq!(v, -2.0, epsilon = 1e-10);
        // homogeneity of degree -d
        let v2 = cz_approx_kernel(&spec, &[2.0], &cfg()).unwrap();
        assert_abs_diff_eq!(v2, 0.5 * v, epsilon = 1e-10);
    }

    #[test]
    fn cz_angular_part_has_mean_zero_on_the_circle() {
        let spec = KernelSpec::hermite(2, &MultiIndex::new(vec![2, 0]), 1.0).unwrap();
        let n = 64;
        let mut total = 0.0;
        for j in 0..n {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let omega = [theta.cos(), theta.sin()];
            // Omega(omega) = K(omega) on the unit circle
            total += cz_approx_kernel(&spec, &omega, &cfg()).unwrap();
        }
        total *= 2.0 * std::f64::consts::PI / n as f64;
        assert_abs_diff_eq!(total, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn diagnostic_kernels_basics() {
        let cfg = cfg();
        // K_3(0, y) with |y| = 1 in d = 2
        let (_, k3) = diagnostic_kernels(&[0.0, 0.0], &[0.6, 0.8], 1.0, &cfg).unwrap();
        assert_abs_diff_eq!(k3, 1.0, epsilon = 1e-12);
        // K_2 decreases along |x - y|
        let radii = [0.5, 1.0, 2.0];
        let mut values = Vec::new();
        for r in radii {
            let (k2, _) = diagnostic_kernels(&[0.0], &[r], 1.0, &cfg).unwrap();
            values.push(k2);
        }
        assert!(values[0] > values[1] && values[1] > values[2]);
        assert!(diagnostic_kernels(&[0.1], &[0.1], 1.0, &cfg).is_err());
    }
}
