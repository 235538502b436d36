//! Weak (1,1) probe: level-set mass of the operator applied to shrinking
//! normalized bumps.

use rayon::prelude::*;

use super::report::{detail_row, num, ExperimentReport};
use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::quad::{gauss_legendre_rule, QuadratureConfig};
use crate::riesz::apply_integral;

/// A Gaussian bump normalized to unit mass against the Gaussian measure.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBump {
    center: Vec<f64>,
    sigma: f64,
    amplitude: f64,
}

impl GaussianBump {
    /// Bump `A exp(-|y - center|^2 / (2 sigma^2))` with `A` chosen in
    /// closed form so the integral against the Gaussian measure is one.
    pub fn normalized(center: Vec<f64>, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::OutOfDomain {
                name: "sigma",
                value: sigma,
                domain: "(0, infinity)",
            });
        }
        let b = 1.0 / (2.0 * sigma * sigma);
        let mut amplitude = 1.0;
        for &c in &center {
            amplitude *= (1.0 + b).sqrt() * (b * c * c / (1.0 + b)).exp();
        }
        Ok(GaussianBump {
            center,
            sigma,
            amplitude,
        })
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        let dist_sq: f64 = self
            .center
            .iter()
            .zip(y)
            .map(|(c, v)| (c - v) * (c - v))
            .sum();
        self.amplitude * (-dist_sq / (2.0 * self.sigma * self.sigma)).exp()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }
}

/// A cell of the evaluation grid: representative point and Gaussian mass.
struct Cell {
    point: Vec<f64>,
    mass: f64,
}

/// Polar evaluation grid around the bump center: log-spaced radii from
/// `sigma/8` out to the numerical support of the measure, so the grid
/// refines automatically with the bump. Cell masses are integrated with a
/// small fixed Gauss rule.
fn polar_cells(center: &[f64], sigma: f64, n_r: usize, n_theta: usize) -> Vec<Cell> {
    let d = center.len();
    let r_min = sigma / 8.0;
    let r_max = 6.5;
    let radii: Vec<f64> = (0..=n_r)
        .map(|i| r_min * (r_max / r_min).powf(i as f64 / n_r as f64))
        .collect();
    let gl = gauss_legendre_rule(3);
    let density = |y: &[f64]| {
        let norm_sq: f64 = y.iter().map(|v| v * v).sum();
        std::f64::consts::PI.powf(-(d as f64) / 2.0) * (-norm_sq).exp()
    };

    let mut cells = Vec::new();
    match d {
        1 => {
            // the inner interval around the center, then shells on both sides
            let inner_mass = 2.0 * r_min * density(center);
            cells.push(Cell {
                point: center.to_vec(),
                mass: inner_mass,
            });
            for w in radii.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                let mid = (lo * hi).sqrt();
                for side in [-1.0, 1.0] {
                    let mut mass = 0.0;
                    for (&node, &weight) in gl.0.iter().zip(&gl.1) {
                        let r = 0.5 * (hi + lo) + 0.5 * (hi - lo) * node;
                        mass += 0.5 * (hi - lo) * weight * density(&[center[0] + side * r]);
                    }
                    cells.push(Cell {
                        point: vec![center[0] + side * mid],
                        mass,
                    });
                }
            }
        }
        2 => {
            // disc area times the density at the center
            let inner_mass = std::f64::consts::PI * r_min * r_min * density(center);
            cells.push(Cell {
                point: center.to_vec(),
                mass: inner_mass,
            });
            let two_pi = 2.0 * std::f64::consts::PI;
            for w in radii.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                let mid_r = (lo * hi).sqrt();
                for j in 0..n_theta {
                    let th_lo = two_pi * j as f64 / n_theta as f64;
                    let th_hi = two_pi * (j + 1) as f64 / n_theta as f64;
                    let th_mid = 0.5 * (th_lo + th_hi);
                    let mut mass = 0.0;
                    for (&nr, &wr) in gl.0.iter().zip(&gl.1) {
                        let r = 0.5 * (hi + lo) + 0.5 * (hi - lo) * nr;
                        for (&nt, &wt) in gl.0.iter().zip(&gl.1) {
                            let th = 0.5 * (th_hi + th_lo) + 0.5 * (th_hi - th_lo) * nt;
                            let y = [center[0] + r * th.cos(), center[1] + r * th.sin()];
                            mass += 0.25 * (hi - lo) * (th_hi - th_lo) * wr * wt * r * density(&y);
                        }
                    }
                    cells.push(Cell {
                        point: vec![
                            center[0] + mid_r * th_mid.cos(),
                            center[1] + mid_r * th_mid.sin(),
                        ],
                        mass,
                    });
                }
            }
        }
        _ => unreachable!("weak-type probe is restricted to d <= 2"),
    }
    cells
}

/// `sup_lambda lambda * gamma({|T f| > lambda})` from evaluated cells; if
/// `lambda_grid` is empty the sweep runs over the observed values.
fn weak_statistic(values: &[f64], masses: &[f64], lambda_grid: &[f64]) -> (f64, f64) {
    let mut pairs: Vec<(f64, f64)> = values
        .iter()
        .zip(masses)
        .map(|(&v, &m)| (v.abs(), m))
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    if lambda_grid.is_empty() {
        let mut cum_mass = 0.0;
        let mut best = (0.0f64, 0.0f64);
        for &(v, m) in &pairs {
            cum_mass += m;
            let stat = v * cum_mass;
            if stat > best.0 {
                best = (stat, v);
            }
        }
        best
    } else {
        let mut best = (0.0f64, 0.0f64);
        for &lambda in lambda_grid {
            let mass: f64 = pairs
                .iter()
                .filter(|(v, _)| *v > lambda)
                .map(|(_, m)| m)
                .sum();
            let stat = lambda * mass;
            if stat > best.0 {
                best = (stat, lambda);
            }
        }
        best
    }
}

/// Weak (1,1) statistic across a family of shrinking bumps.
///
/// For each scale `sigma` the bump at `y0` is normalized to unit Gaussian
/// `L^1` mass, the operator is evaluated over a bump-adapted polar grid,
/// and `sup_lambda lambda gamma(|T f| > lambda)` is estimated from the cell
/// masses. Pass means the statistic does not grow as the bump sharpens
/// (successive ratios at most 1.25).
pub fn estimate_weak11(
    spec: &KernelSpec,
    bump_scales: &[f64],
    lambda_grid: &[f64],
    y0: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ExperimentReport> {
    const RATIO_LIMIT: f64 = 1.25;
    let d = spec.dimension();
    if d > 2 {
        return Err(Error::InvalidConfig(
            "weak-type probe is restricted to d <= 2".into(),
        ));
    }
    if bump_scales.len() < 2 {
        return Err(Error::InvalidConfig("need at least two bump scales".into()));
    }
    let mut scales = bump_scales.to_vec();
    scales.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let mut report = ExperimentReport::new("weak11", 0);
    report.set_parameter("d", d as u64);
    report.set_parameter("profile", spec.label());
    report.set_parameter("y0", y0.iter().map(|&v| num(v)).collect::<Vec<_>>());
    report.set_parameter(
        "bump_scales",
        scales.iter().map(|&s| num(s)).collect::<Vec<_>>(),
    );

    let (n_r, n_theta) = if d == 1 { (56, 0) } else { (36, 24) };

    let mut stats = Vec::new();
    for &sigma in &scales {
        let bump = GaussianBump::normalized(y0.to_vec(), sigma)?;
        let cells = polar_cells(y0, sigma, n_r, n_theta);
        // resolution witness: the innermost shell must resolve the bump
        let resolution_ok = sigma / 8.0 <= sigma / 2.0;

        let values: Vec<f64> = cells
            .par_iter()
            .map(|cell| {
                let f = |y: &[f64]| bump.eval(y);
                apply_integral(spec, &f, &cell.point, cfg)
            })
            .collect::<Result<Vec<f64>>>()?;
        let masses: Vec<f64> = cells.iter().map(|c| c.mass).collect();
        let total_mass: f64 = masses.iter().sum();
        let (stat, lambda_at) = weak_statistic(&values, &masses, lambda_grid);
        let tf_max = values.iter().fold(0.0f64, |a, &b| a.max(b.abs()));

        report.push_detail(detail_row(&[
            ("sigma", num(sigma)),
            ("statistic", num(stat)),
            ("lambda_at_sup", num(lambda_at)),
            ("tf_max", num(tf_max)),
            ("grid_cells", (cells.len() as u64).into()),
            ("grid_mass", num(total_mass)),
            ("resolution_ok", resolution_ok.into()),
        ]));
        report.samples += cells.len();
        if !resolution_ok {
            report.finalize(f64::INFINITY, Some(RATIO_LIMIT));
            return Ok(report);
        }
        stats.push(stat);
    }

    let worst_ratio = stats
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold(0.0f64, f64::max);
    report.finalize(worst_ratio, Some(RATIO_LIMIT));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_hermite;

    #[test]
    fn bump_normalization_is_exact() {
        let cfg = QuadratureConfig::default().with_gh_nodes(90);
        for d in 1..=2usize {
            let center = vec![0.7; d];
            let bump = GaussianBump::normalized(center, 0.8).unwrap();
            let mass = gauss_hermite(|y: &[f64]| bump.eval(y), d, &cfg).unwrap();
            assert!(
                (mass.value - 1.0).abs() < 1e-10,
                "d={d}: mass {}",
                mass.value
            );
        }
    }

    #[test]
    fn weak_statistic_tail_vanishes() {
        // lambda beyond the max value has empty level set
        let values = [1.0, 0.5, 0.25];
        let masses = [0.1, 0.2, 0.3];
        let (stat, _) = weak_statistic(&values, &masses, &[2.0, 5.0, 100.0]);
        assert_eq!(stat, 0.0);
    }

    #[test]
    fn weak_statistic_sweeps_observed_values() {
        let values = [2.0, 1.0];
        let masses = [0.25, 0.5];
        // candidates: 2.0 * 0.25 = 0.5 and 1.0 * 0.75 = 0.75
        let (stat, lambda) = weak_statistic(&values, &masses, &[]);
        assert!((stat - 0.75).abs() < 1e-12);
        assert!((lambda - 1.0).abs() < 1e-12);
    }
}
