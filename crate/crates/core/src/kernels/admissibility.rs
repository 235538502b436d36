//! Numerical witnesses for the admissibility conditions on the profile:
//! the Gaussian mean of `F` and the sub-Gaussian growth exponent.

use super::KernelSpec;
use crate::error::Result;
use crate::quad::{gauss_hermite, QuadratureConfig};

/// `integral F dgamma_d` by tensor Gauss-Hermite quadrature; the caller
/// compares the result against its tolerance.
pub fn orthogonality_check(spec: &KernelSpec, cfg: &QuadratureConfig) -> Result<f64> {
    let res = gauss_hermite(|x: &[f64]| spec.f(x), spec.dimension(), cfg)?;
    Ok(res.value)
}

fn probe_directions(d: usize) -> Vec<Vec<f64>> {
    match d {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..16)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / 16.0;
                vec![theta.cos(), theta.sin()]
            })
            .collect(),
        _ => {
            // coordinate axes, face diagonals, and space diagonals
            let mut dirs = Vec::new();
            for axis in 0..d {
                for sign in [1.0, -1.0] {
                    let mut v = vec![0.0; d];
                    v[axis] = sign;
                    dirs.push(v);
                }
            }
            for i in 0..d {
                for j in (i + 1)..d {
                    for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                        let mut v = vec![0.0; d];
                        v[i] = si / 2f64.sqrt();
                        v[j] = sj / 2f64.sqrt();
                        dirs.push(v);
                    }
                }
            }
            let diag = 1.0 / (d as f64).sqrt();
            for sign in [1.0, -1.0] {
                dirs.push(vec![sign * diag; d]);
            }
            dirs
        }
    }
}

/// Least epsilon-hat such that `|F| <= C exp(eps |x|^2)` and
/// `|grad F| <= C' exp(eps |x|^2)` describe the sampled growth along a
/// radial grid up to `radius`.
///
/// The estimate is the tail slope of `log G` against `r^2`, where `G` is
/// the running maximum of the sampled magnitudes over a set of directions:
/// polynomials give a slope of order `deg / (2 radius^2)` that vanishes as
/// the radius grows, while genuinely square-exponential profiles saturate
/// at their exponent. Heuristic by construction; returns `+inf` when the
/// samples are not finite.
pub fn growth_probe(spec: &KernelSpec, radius: f64, grid: usize) -> f64 {
    let grid = grid.max(8);
    let dirs = probe_directions(spec.dimension());
    let mut envelope_f = Vec::with_capacity(grid);
    let mut envelope_g = Vec::with_capacity(grid);
    let mut rs = Vec::with_capacity(grid);
    let mut running_f = 0.0f64;
    let mut running_g = 0.0f64;
    for j in 1..=grid {
        let r = radius * j as f64 / grid as f64;
        for dir in &dirs {
            let x: Vec<f64> = dir.iter().map(|v| v * r).collect();
            let fv = spec.f(&x).abs();
            let gv = spec
                .grad(&x)
                .iter()
                .map(|g| g.abs())
                .fold(0.0f64, f64::max);
            if !fv.is_finite() || !gv.is_finite() {
                return f64::INFINITY;
            }
            running_f = running_f.max(fv);
            running_g = running_g.max(gv);
        }
        rs.push(r);
        envelope_f.push(running_f);
        envelope_g.push(running_g);
    }

    let tail = grid / 16;
    let tail = tail.max(4).min(grid);
    let slope = |env: &[f64]| -> f64 {
        let n = env.len();
        let zs: Vec<f64> = rs[n - tail..].iter().map(|r| r * r).collect();
        let ys: Vec<f64> = env[n - tail..]
            .iter()
            .map(|&v| v.max(f64::MIN_POSITIVE).ln())
            .collect();
        // least squares of y against z
        let zbar = zs.iter().sum::<f64>() / tail as f64;
        let ybar = ys.iter().sum::<f64>() / tail as f64;
        let mut cov = 0.0;
        let mut var = 0.0;
        for (z, y) in zs.iter().zip(&ys) {
            cov += (z - zbar) * (y - ybar);
            var += (z - zbar) * (z - zbar);
        }
        if var == 0.0 {
            return f64::INFINITY;
        }
        cov / var
    };

    let eps_hat = slope(&envelope_f).max(slope(&envelope_g)).max(0.0);
    if eps_hat.is_nan() {
        f64::INFINITY
    } else {
        eps_hat
    }
}
