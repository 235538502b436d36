//! Seeded sampling against the Gaussian measure and the region
//! conditioning used by the kernel experiments.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::riesz::admissibility_radius;

/// One point distributed as the normalized Gaussian measure (each
/// coordinate is `N(0, 1/2)`).
pub fn sample_gamma_point(rng: &mut impl Rng, d: usize) -> Vec<f64> {
    (0..d)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            z * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect()
}

/// Pairs `(x, y)` drawn from the product Gaussian, conditioned by rejection
/// on the global region with positive correlation:
/// `<x, y> > 0` and `|x - y| > C_d m(x)`.
pub fn sample_global_pairs(
    rng: &mut impl Rng,
    d: usize,
    c_d: f64,
    count: usize,
) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let cap = count.saturating_mul(200_000).max(1_000_000);
    while out.len() < count {
        attempts += 1;
        if attempts > cap {
            return Err(Error::Experiment(format!(
                "global-region rejection sampling stalled after {attempts} attempts"
            )));
        }
        let x = sample_gamma_point(rng, d);
        let y = sample_gamma_point(rng, d);
        let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        if dot <= 0.0 {
            continue;
        }
        let dist: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if dist > c_d * admissibility_radius(&x) {
            out.push((x, y));
        }
    }
    Ok(out)
}

/// Pairs conditioned on the local region `0 < |x - y| < C_d m(x)`.
pub fn sample_local_pairs(
    rng: &mut impl Rng,
    d: usize,
    c_d: f64,
    count: usize,
) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let cap = count.saturating_mul(2_000_000).max(10_000_000);
    while out.len() < count {
        attempts += 1;
        if attempts > cap {
            return Err(Error::Experiment(format!(
                "local-region rejection sampling stalled after {attempts} attempts"
            )));
        }
        let x = sample_gamma_point(rng, d);
        let y = sample_gamma_point(rng, d);
        let dist: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if dist > 0.0 && dist < c_d * admissibility_radius(&x) {
            out.push((x, y));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gamma_samples_have_half_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 40_000;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let x = sample_gamma_point(&mut rng, 1);
            sum_sq += x[0] * x[0];
        }
        let var = sum_sq / n as f64;
        assert!((var - 0.5).abs() < 0.02, "sample variance {var}");
    }

    #[test]
    fn region_conditioning_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (x, y) in sample_global_pairs(&mut rng, 2, 1.0, 50).unwrap() {
            let dot: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
            assert!(dot > 0.0);
            let dist: f64 = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(dist > admissibility_radius(&x));
        }
        for (x, y) in sample_local_pairs(&mut rng, 2, 1.0, 50).unwrap() {
            let dist: f64 = x
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!(dist > 0.0 && dist < admissibility_radius(&x));
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_global_pairs(&mut ChaCha8Rng::seed_from_u64(3), 2, 1.0, 10).unwrap();
        let b = sample_global_pairs(&mut ChaCha8Rng::seed_from_u64(3), 2, 1.0, 10).unwrap();
        assert_eq!(a, b);
    }
}
