//! Gauss-Hermite and Gauss-Legendre rules through the Golub-Welsch
//! algorithm, plus the tensor-product integrator against the Gaussian
//! probability measure.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use nalgebra::DMatrix;

use super::{IntegrationResult, QuadratureConfig};
use crate::error::{Error, Result};

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

fn rule_cache() -> &'static RwLock<HashMap<(u8, usize), Rule>> {
    static CACHE: std::sync::OnceLock<RwLock<HashMap<(u8, usize), Rule>>> =
        std::sync::OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Nodes and weights from the symmetric tridiagonal Jacobi matrix with the
/// given off-diagonal; weights are `mu0 * (first eigenvector component)^2`.
fn golub_welsch(n: usize, off_diag: impl Fn(usize) -> f64, mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = off_diag(k);
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eigen = jacobi.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let node = eigen.eigenvalues[j];
            let v0 = eigen.eigenvectors[(0, j)];
            (node, mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// `n`-node Gauss-Hermite rule normalized to the Gaussian probability
/// measure on the line: `integral f dgamma_1 ~ sum w_k f(x_k)` with
/// `sum w_k = 1`. Exact for polynomials of degree `2n - 1`.
pub fn gauss_hermite_rule(n: usize) -> Rule {
    if let Some(rule) = rule_cache().read().unwrap().get(&(0, n)) {
        return rule.clone();
    }
    // Physicists' recurrence: off-diagonal sqrt(k/2); mu0 = 1 after
    // normalizing the weight exp(-x^2) by sqrt(pi).
    let rule = Arc::new(golub_welsch(n, |k| (k as f64 / 2.0).sqrt(), 1.0));
    rule_cache().write().unwrap().insert((0, n), rule.clone());
    rule
}

/// `n`-node Gauss-Legendre rule on [-1, 1] (weights sum to 2).
pub fn gauss_legendre_rule(n: usize) -> Rule {
    if let Some(rule) = rule_cache().read().unwrap().get(&(1, n)) {
        return rule.clone();
    }
    let rule = Arc::new(golub_welsch(
        n,
        |k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        },
        2.0,
    ));
    rule_cache().write().unwrap().insert((1, n), rule.clone());
    rule
}

/// Tensor Gauss-Hermite integration of `g` against the Gaussian probability
/// measure on R^d, using `cfg.gh_nodes_per_axis` nodes per axis.
pub fn gauss_hermite(
    g: impl Fn(&[f64]) -> f64,
    d: usize,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    let n = cfg.gh_nodes_per_axis;
    let total = n.checked_pow(d as u32).unwrap_or(usize::MAX);
    if total > cfg.max_evals {
        return Err(Error::BudgetExhausted {
            budget: cfg.max_evals,
        });
    }
    let rule = gauss_hermite_rule(n);
    let (nodes, weights) = (&rule.0, &rule.1);

    let mut idx = vec![0usize; d];
    let mut x = vec![0.0f64; d];
    let mut sum = 0.0;
    let mut evaluations = 0usize;
    loop {
        let mut w = 1.0;
        for (axis, &i) in idx.iter().enumerate() {
            x[axis] = nodes[i];
            w *= weights[i];
        }
        sum += w * g(&x);
        evaluations += 1;

        // odometer increment over the d-fold index set
        let mut axis = 0;
        loop {
            if axis == d {
                return Ok(IntegrationResult {
                    value: sum,
                    error_estimate: 0.0,
                    evaluations,
                    converged: true,
                });
            }
            idx[axis] += 1;
            if idx[axis] < n {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn probability_weights_sum_to_one() {
        for n in [2, 7, 21, 48] {
            let rule = gauss_hermite_rule(n);
            let total: f64 = rule.1.iter().sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn second_moment_is_one_half() {
        let cfg = QuadratureConfig::default();
        let r = gauss_hermite(|x: &[f64]| x[0] * x[0], 1, &cfg).unwrap();
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-13);
    }

    #[test]
    fn constant_has_unit_mass() {
        let cfg = QuadratureConfig::default();
        for d in 1..=3 {
            let r = gauss_hermite(|_: &[f64]| 1.0, d, &cfg).unwrap();
            assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn hermite_square_norms() {
        // integral H_2^2 dgamma = 2^2 2! = 8
        let cfg = QuadratureConfig::default();
        let r = gauss_hermite(
            |x: &[f64]| {
                let h2 = 4.0 * x[0] * x[0] - 2.0;
                h2 * h2
            },
            1,
            &cfg,
        )
        .unwrap();
        assert_abs_diff_eq!(r.value, 8.0, epsilon = 1e-11);
    }

    #[test]
    fn budget_guards_tensor_blowup() {
        let cfg = QuadratureConfig {
            gh_nodes_per_axis: 300,
            max_evals: 1_000_000,
            ..QuadratureConfig::default()
        };
        assert!(matches!(
            gauss_hermite(|_: &[f64]| 1.0, 3, &cfg),
            Err(Error::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = gauss_legendre_rule(8);
        // integral over [-1,1] of x^6 = 2/7
        let v: f64 = rule
            .0
            .iter()
            .zip(&rule.1)
            .map(|(&x, &w)| w * x.powi(6))
            .sum();
        assert_abs_diff_eq!(v, 2.0 / 7.0, epsilon = 1e-13);
    }
}
