//! Exact-identity checks: eigenvalue relations, the factorization of the
//! Ornstein-Uhlenbeck operator through the Gaussian derivatives, and the
//! agreement of the spectral multiplier formulas with their definitional
//! compositions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::report::{detail_row, num, ExperimentReport};
use crate::error::Result;
use crate::expansion::{
    alt_ou_apply, gauss_derivative, gauss_derivative_adjoint, ou_apply, ou_apply_calculus,
    HermiteExpansion,
};
use crate::index::MultiIndex;
use crate::riesz::{apply_spectral, OperatorKind, SpectralOperator};

/// Largest absolute coefficient of `a - b`.
pub fn max_coefficient_deviation(a: &HermiteExpansion, b: &HermiteExpansion) -> Result<f64> {
    let diff = a.sub(b)?;
    Ok(diff.terms().map(|(_, &c)| c.abs()).fold(0.0, f64::max))
}

/// Apply the operator through its definition instead of the multiplier
/// formula: the inverse square-root power of the (shifted) number operator
/// followed by the Gaussian derivatives (plain or adjoint, `beta_i` times
/// along each axis). Serves as the independent route for testing
/// [`apply_spectral`].
pub fn riesz_via_definition(
    op: &SpectralOperator,
    f: &HermiteExpansion,
) -> Result<HermiteExpansion> {
    let beta = op.beta();
    let order = beta.order() as f64;
    let d = op.dimension() as f64;
    // multiplier (-L)^(-|beta|/2) or (-L + d)^(-|beta|/2), termwise
    let resolved = match op.kind() {
        OperatorKind::Riesz | OperatorKind::HigherRiesz => f.map_coefficients(|nu, c| {
            if nu.order() == 0 {
                0.0
            } else {
                c * (nu.order() as f64).powf(-order / 2.0)
            }
        }),
        OperatorKind::AltRiesz => {
            f.map_coefficients(|nu, c| c * (nu.order() as f64 + d).powf(-order / 2.0))
        }
    };
    // derivative part
    let mut out = resolved;
    for (axis, &b) in beta.entries().iter().enumerate() {
        for _ in 0..b {
            out = match op.kind() {
                OperatorKind::Riesz | OperatorKind::HigherRiesz => gauss_derivative(axis, &out)?,
                OperatorKind::AltRiesz => gauss_derivative_adjoint(axis, &out)?,
            };
        }
    }
    Ok(out)
}

fn random_expansion(rng: &mut impl Rng, d: usize, degree: u32) -> HermiteExpansion {
    let mut f = HermiteExpansion::zero(d);
    for nu in MultiIndex::all_up_to_order(d, degree) {
        let c: f64 = rng.sample(StandardNormal);
        f.add_term(nu, c).expect("degree within cap");
    }
    f
}

/// The exact-identity suite: eigen-relations of both operators through the
/// calculus route, the factorization `-L = sum_i adj_i d_i`, the shift
/// identity, and the Riesz multipliers against their definitional
/// compositions. Statistic: worst absolute coefficient deviation.
pub fn spectral_suite(d_range: &[usize], max_order: u32, seed: u64) -> Result<ExperimentReport> {
    const TOL: f64 = 1e-12;
    let mut report = ExperimentReport::new("spectral_identities", seed);
    report.set_parameter(
        "d_range",
        d_range.iter().map(|&d| d as u64).collect::<Vec<_>>(),
    );
    report.set_parameter("max_order", max_order as u64);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut checks = 0usize;

    for &d in d_range {
        // eigen-relations on every H_nu up to the order cap
        let mut eigen_dev: f64 = 0.0;
        for nu in MultiIndex::all_up_to_order(d, max_order) {
            let f = HermiteExpansion::hermite(nu.clone())?;
            let lhs = ou_apply_calculus(&f)?;
            let rhs = f.scaled(-(nu.order() as f64));
            eigen_dev = eigen_dev.max(max_coefficient_deviation(&lhs, &rhs)?);

            let alt_lhs = alt_ou_apply(&f);
            let alt_rhs = f.scaled(-(nu.order() as f64 + d as f64));
            eigen_dev = eigen_dev.max(max_coefficient_deviation(&alt_lhs, &alt_rhs)?);
            checks += 2;
        }

        // factorization and shift identity on random expansions
        let mut factor_dev: f64 = 0.0;
        for _ in 0..5 {
            let f = random_expansion(&mut rng, d, max_order.min(6));
            let mut composed = HermiteExpansion::zero(d);
            for axis in 0..d {
                let step = gauss_derivative_adjoint(axis, &gauss_derivative(axis, &f)?)?;
                composed = composed.add(&step)?;
            }
            factor_dev =
                factor_dev.max(max_coefficient_deviation(&composed, &ou_apply(&f).scaled(-1.0))?);

            let shift = ou_apply(&f).sub(&f.scaled(d as f64))?;
            factor_dev = factor_dev.max(max_coefficient_deviation(&alt_ou_apply(&f), &shift)?);
            checks += 2;
        }

        // multiplier formulas against definitional compositions
        let mut riesz_dev: f64 = 0.0;
        for beta in MultiIndex::all_up_to_order(d, 3) {
            if beta.order() == 0 {
                continue;
            }
            for kind in [OperatorKind::HigherRiesz, OperatorKind::AltRiesz] {
                let op = match kind {
                    OperatorKind::HigherRiesz => SpectralOperator::higher_riesz(d, beta.clone())?,
                    _ => SpectralOperator::alt_riesz(d, beta.clone())?,
                };
                for nu in MultiIndex::all_up_to_order(d, 4) {
                    let f = HermiteExpansion::hermite(nu.clone())?;
                    let formula = apply_spectral(&op, &f)?;
                    let definition = riesz_via_definition(&op, &f)?;
                    riesz_dev =
                        riesz_dev.max(max_coefficient_deviation(&formula, &definition)?);
                    checks += 1;
                }
            }
        }

        worst = worst.max(eigen_dev).max(factor_dev).max(riesz_dev);
        report.push_detail(detail_row(&[
            ("d", (d as u64).into()),
            ("eigen_deviation", num(eigen_dev)),
            ("factorization_deviation", num(factor_dev)),
            ("riesz_deviation", num(riesz_dev)),
        ]));
    }
    report.samples = checks;
    report.finalize(worst, Some(TOL));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_at_machine_precision() {
        let report = spectral_suite(&[1, 2], 6, 13).unwrap();
        assert!(report.passed, "worst deviation {}", report.statistic);
    }

    #[test]
    fn definitional_route_matches_formula_for_first_order() {
        let op = SpectralOperator::riesz(2, 0).unwrap();
        let f = HermiteExpansion::hermite(MultiIndex::new(vec![2, 1])).unwrap();
        let a = apply_spectral(&op, &f).unwrap();
        let b = riesz_via_definition(&op, &f).unwrap();
        assert!(max_coefficient_deviation(&a, &b).unwrap() < 1e-13);
    }
}
