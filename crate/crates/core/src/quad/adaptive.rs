//! Adaptive bisection with the embedded rule pair, plus the endpoint
//! transforms used for the unit interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::rule::qk15;
use super::{IntegrationResult, QuadratureConfig};
use crate::error::{Error, Result};

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
///
/// Bisection is driven by the panel with the largest error estimate until
/// the summed estimate meets `abs_tol`/`rel_tol`, the refinement count is
/// exhausted (the result is then flagged, not discarded), or the evaluation
/// budget trips (a hard error).
pub fn integrate_interval(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    let mut remaining = cfg.max_evals;
    integrate_interval_budgeted(&mut f, a, b, cfg, &mut remaining)
}

/// Same as [`integrate_interval`] with an externally shared budget counter.
pub(crate) fn integrate_interval_budgeted(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
    remaining: &mut usize,
) -> Result<IntegrationResult> {
    if a == b {
        return Ok(IntegrationResult::zero());
    }
    let mut used = 0usize;

    let take = |used: &mut usize, remaining: &mut usize, n: usize| -> bool {
        if *remaining < n {
            return false;
        }
        *remaining -= n;
        *used += n;
        true
    };

    if !take(&mut used, remaining, 15) {
        return Err(Error::BudgetExhausted {
            budget: cfg.max_evals,
        });
    }
    let (v, e) = qk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: v,
        err: e,
    });
    let mut total_value = v;
    let mut total_err = e;
    let mut refinements = 0usize;

    while total_err > cfg.tolerance_for(total_value) && refinements < cfg.max_refinements {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at floating point resolution; keep as is
            heap.push(worst);
            break;
        }
        if !take(&mut used, remaining, 30) {
            return Err(Error::BudgetExhausted {
                budget: cfg.max_evals,
            });
        }
        total_value -= worst.value;
        total_err -= worst.err;
        let (v1, e1) = qk15(f, worst.a, mid);
        let (v2, e2) = qk15(f, mid, worst.b);
        total_value += v1 + v2;
        total_err += e1 + e2;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            err: e2,
        });
        refinements += 1;
    }

    // Re-sum from panels in interval order for a total independent of the
    // heap's pop history.
    let panels: Vec<Panel> = heap.into_vec();
    let mut ordered: Vec<&Panel> = panels.iter().collect();
    ordered.sort_by(|p, q| p.a.partial_cmp(&q.a).unwrap());
    let mut value = 0.0;
    let mut err = 0.0;
    for p in ordered {
        value += p.value;
        err += p.err;
    }
    Ok(IntegrationResult {
        value,
        error_estimate: err,
        evaluations: used,
        converged: err <= cfg.tolerance_for(value),
    })
}

/// How consecutive blocks of a semi-infinite sweep are generated.
#[derive(Debug, Clone, Copy)]
pub enum BlockStep {
    /// Fixed-width blocks `[x, x + w]`.
    Linear(f64),
    /// Geometric blocks `[x, x * q]`.
    Geometric(f64),
}

/// Integrate `f` from `start` towards infinity in blocks, stopping once two
/// consecutive blocks contribute less than `tail_tol` or the sweep reaches
/// `cap` (the result is flagged unconverged if mass remains there).
pub fn integrate_blocks(
    mut f: impl FnMut(f64) -> f64,
    start: f64,
    step: BlockStep,
    cap: f64,
    tail_tol: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    let mut remaining = cfg.max_evals;
    integrate_blocks_budgeted(&mut f, start, step, cap, tail_tol, cfg, &mut remaining)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn integrate_blocks_budgeted(
    f: &mut dyn FnMut(f64) -> f64,
    start: f64,
    step: BlockStep,
    cap: f64,
    tail_tol: f64,
    cfg: &QuadratureConfig,
    remaining: &mut usize,
) -> Result<IntegrationResult> {
    let mut total = IntegrationResult::zero();
    let mut a = start;
    let mut tiny_streak = 0usize;
    while a < cap {
        let b = match step {
            BlockStep::Linear(w) => (a + w).min(cap),
            BlockStep::Geometric(q) => (a * q).min(cap),
        };
        let block = integrate_interval_budgeted(f, a, b, cfg, remaining)?;
        let block_size = block.value.abs() + block.error_estimate;
        total = total.combine(block);
        a = b;
        if block_size <= tail_tol {
            tiny_streak += 1;
            if tiny_streak >= 2 {
                return Ok(total);
            }
        } else {
            tiny_streak = 0;
        }
    }
    // reached the cap; trust the result only if the tail had already decayed
    total.converged = total.converged && tiny_streak >= 1;
    Ok(total)
}

/// Furthest the logarithmic endpoint sweeps reach; `exp(-700)` underflows
/// most integrands of interest to an exact zero well before this.
const LOG_SWEEP_CAP: f64 = 700.0;

/// Adaptive integration over the open unit interval, with the integrand
/// receiving both `t` and `1 - t` at full precision.
///
/// The interval is split at 1/4 and 3/4; the outer pieces are mapped by
/// `t = exp(-s)` and `1 - t = exp(-s)` onto semi-infinite panels, which
/// turns integrable endpoint singularities (poles weaker than first order,
/// log factors, boundary layers like `exp(-c/t)`) into smooth decaying
/// tails. Passing `1 - t` separately matters on the right sweep, where
/// `t` itself saturates at floating point resolution long before the
/// leftover mass is negligible for singular integrands.
pub fn integrate_unit_split(
    mut f: impl FnMut(f64, f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    let piece_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / 4.0,
        rel_tol: cfg.rel_tol / 4.0,
        ..cfg.clone()
    };
    let s0 = 4f64.ln();
    let mut remaining = cfg.max_evals;

    let mid = integrate_interval_budgeted(
        &mut |t: f64| f(t, 1.0 - t),
        0.25,
        0.75,
        &piece_cfg,
        &mut remaining,
    )?;

    let left = integrate_blocks_budgeted(
        &mut |s: f64| {
            let t = (-s).exp();
            if t == 0.0 {
                return 0.0;
            }
            f(t, 1.0 - t) * t
        },
        s0,
        BlockStep::Linear(6.0),
        LOG_SWEEP_CAP,
        piece_cfg.abs_tol / 8.0,
        &piece_cfg,
        &mut remaining,
    )?;

    let right = integrate_blocks_budgeted(
        &mut |s: f64| {
            let e = (-s).exp();
            if e == 0.0 {
                return 0.0;
            }
            f(1.0 - e, e) * e
        },
        s0,
        BlockStep::Linear(6.0),
        LOG_SWEEP_CAP,
        piece_cfg.abs_tol / 8.0,
        &piece_cfg,
        &mut remaining,
    )?;

    Ok(mid.combine(left).combine(right))
}

/// Adaptive integration over the open unit interval for integrands given
/// by `t` alone.
///
/// The right sweep cannot resolve points closer to 1 than machine epsilon
/// with this signature; such points are skipped, truncating mass within
/// `2^-52` of the endpoint. Integrands with singularities stronger than
/// logarithmic at `t = 1` should use [`integrate_unit_split`] and read the
/// exact `1 - t`.
pub fn integrate_unit(
    mut f: impl FnMut(f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<IntegrationResult> {
    integrate_unit_split(
        |t, _one_minus_t| {
            if t >= 1.0 {
                return 0.0;
            }
            f(t)
        },
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn constant_integrates_to_one() {
        let r = integrate_unit(|_| 1.0, &cfg()).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn inverse_sqrt_endpoint_singularity() {
        let r = integrate_unit(|t| t.powf(-0.5), &cfg()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn singularities_at_both_endpoints() {
        // integral of (t(1-t))^(-1/2) = pi; the right-endpoint pole needs
        // the split form to stay resolvable near t = 1
        let r = integrate_unit_split(|t, omt| 1.0 / (t * omt).sqrt(), &cfg()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, std::f64::consts::PI, epsilon = 1e-9);
        // the plain form truncates at resolution but still lands within
        // a few parts in 1e8
        let plain = integrate_unit(|t| 1.0 / (t * (1.0 - t)).sqrt(), &cfg()).unwrap();
        assert_abs_diff_eq!(plain.value, std::f64::consts::PI, epsilon = 1e-7);
    }

    #[test]
    fn budget_exhaustion_is_a_hard_error() {
        let tight = QuadratureConfig {
            max_evals: 40,
            ..cfg()
        };
        let r = integrate_unit(|t| t.powf(-0.5), &tight);
        assert!(matches!(r, Err(Error::BudgetExhausted { .. })));
    }

    #[test]
    fn non_convergence_is_flagged_not_fatal() {
        let impossible = QuadratureConfig {
            abs_tol: 1e-300,
            rel_tol: 1e-300,
            max_refinements: 3,
            ..cfg()
        };
        let r =
            integrate_interval(|t: f64| (1.0 / (t + 1e-4)).sin(), 0.0, 1.0, &impossible).unwrap();
        assert!(!r.converged);
        assert!(r.value.is_finite());
    }

    #[test]
    fn interval_handles_smooth_oscillation() {
        let r = integrate_interval(|x: f64| (20.0 * x).cos(), 0.0, 2.0, &cfg()).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 40f64.sin() / 20.0, epsilon = 1e-11);
    }

    #[test]
    fn blocks_reach_gaussian_tails() {
        // integral of 2 s exp(-s^2) over (0, inf) = 1
        let r = integrate_blocks(
            |s: f64| 2.0 * s * (-s * s).exp(),
            0.0,
            BlockStep::Linear(2.0),
            64.0,
            1e-13,
            &cfg(),
        )
        .unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-11);
    }
}
