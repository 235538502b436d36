//! Empirical verification of the local approximation claim: on the
//! admissible ball, the profile-only kernel differs from the homogeneous
//! convolution kernel by at most a multiple of
//! `(1 + |x|^(1/2)) / |x-y|^(d-1/2)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::report::{detail_row, num, ExperimentReport};
use super::sampling::sample_local_pairs;
use crate::error::Result;
use crate::kernels::{cz_approx_kernel, diagnostic_kernels, kernel_psi_stripped, KernelSpec};
use crate::quad::QuadratureConfig;

/// `sup |K_1(x,y) - K(y-x)| / K_3(x,y)` over local-region samples, with
/// stability under sample doubling.
///
/// The convolution kernel is evaluated at `y - x`: expanding the profile
/// argument `(x - sqrt(1-t) y)/sqrt(t)` at small `t` gives
/// `(x - y)/sqrt(t)`, which is the argument `K` carries at `y - x`; that
/// orientation is the one whose singular parts cancel in the difference.
pub fn verify_local_claim(
    spec: &KernelSpec,
    samples: usize,
    c_d: f64,
    seed: u64,
    cfg: &QuadratureConfig,
) -> Result<ExperimentReport> {
    const STABILITY: f64 = 1.25;

    let mut report = ExperimentReport::new("local_claim", seed);
    report.set_parameter("d", spec.dimension() as u64);
    report.set_parameter("m", spec.m() as u64);
    report.set_parameter("profile", spec.label());
    report.set_parameter("c_d", num(c_d));
    report.set_parameter("samples", samples as u64);
    report.samples = samples;

    let d = spec.dimension();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = sample_local_pairs(&mut rng, d, c_d, samples * 2)?;

    let ratios: Vec<Option<f64>> = pairs
        .par_iter()
        .map(|(x, y)| {
            let k1 = kernel_psi_stripped(spec, x, y, cfg).ok()?;
            let z: Vec<f64> = y.iter().zip(x).map(|(yi, xi)| yi - xi).collect();
            let k = cz_approx_kernel(spec, &z, cfg).ok()?;
            let (_, k3) = diagnostic_kernels(x, y, 1.0, cfg).ok()?;
            Some((k1.value - k).abs() / k3)
        })
        .collect();

    let sup_half = ratios[..samples]
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let sup_full = ratios
        .iter()
        .flatten()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let excluded = ratios.iter().filter(|r| r.is_none()).count();
    let stability = (sup_full / sup_half).max(sup_half / sup_full);
    let score = if sup_full.is_finite() && sup_full > 0.0 {
        stability / STABILITY
    } else {
        f64::INFINITY
    };

    report.push_detail(detail_row(&[
        ("sup_ratio", num(sup_full)),
        ("sup_ratio_half", num(sup_half)),
        ("stability", num(stability)),
        ("excluded", (excluded as u64).into()),
    ]));
    report.finalize(score, Some(1.0));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::MultiIndex;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default().with_tols(1e-9, 1e-8)
    }

    #[test]
    fn ratio_bounded_for_first_hermite_profile() {
        // the sup statistic needs a couple hundred samples before the
        // admissible-ball boundary is covered well enough to saturate
        let spec = KernelSpec::hermite(2, &MultiIndex::new(vec![1, 0]), 1.0).unwrap();
        let report = verify_local_claim(&spec, 200, 1.0, 5, &cfg()).unwrap();
        assert!(report.passed, "statistic {}", report.statistic);
        let sup = report.details[0]["sup_ratio"].as_f64().unwrap();
        assert!(sup.is_finite() && sup > 0.0);
    }

    #[test]
    fn opposite_orientation_blows_up_for_odd_profiles() {
        // Subtracting K(x - y) instead of K(y - x) leaves the full
        // singularity in place for odd F: the ratio grows like
        // |x - y|^(-1/2) as the pair tightens, while the correct
        // orientation stays bounded.
        let spec = KernelSpec::hermite(1, &MultiIndex::new(vec![1]), 1.0).unwrap();
        let cfg = cfg();
        let x = [0.4];
        let mut wrong_prev = 0.0;
        for (i, dist) in [1e-2, 1e-3, 1e-4].into_iter().enumerate() {
            let y = [x[0] + dist];
            let k1 = kernel_psi_stripped(&spec, &x, &y, &cfg).unwrap().value;
            let forward: Vec<f64> = vec![y[0] - x[0]];
            let backward: Vec<f64> = vec![x[0] - y[0]];
            let k_good = cz_approx_kernel(&spec, &forward, &cfg).unwrap();
            let k_bad = cz_approx_kernel(&spec, &backward, &cfg).unwrap();
            let (_, k3) = diagnostic_kernels(&x, &y, 1.0, &cfg).unwrap();
            let good = (k1 - k_good).abs() / k3;
            let wrong = (k1 - k_bad).abs() / k3;
            assert!(good < 10.0, "cancelling orientation stays bounded: {good}");
            if i > 0 {
                assert!(wrong > 2.0 * wrong_prev, "wrong orientation grows: {wrong}");
            }
            wrong_prev = wrong;
        }
    }
}
