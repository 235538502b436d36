//! Finite Hermite expansions and the exact operator calculus on them.
//!
//! An expansion is a sparse map `nu -> c_nu` representing
//! `f = sum c_nu H_nu`. Products with coordinates and derivatives are done
//! through the Hermite recurrences
//!
//! * `H_n'(x) = 2n H_{n-1}(x)`
//! * `x H_n(x) = 1/2 H_{n+1}(x) + n H_{n-1}(x)`
//!
//! and never through monomial conversion, which cancels catastrophically
//! above degree ten. Every operation returns a new value; nothing here is
//! mutated after construction, so all types are safe to share across
//! threads.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hermite::hermite_eval_1d_all;
use crate::index::MultiIndex;
use crate::quad::{gauss_hermite, QuadratureConfig};

/// Default cap on the total degree of an expansion.
pub const DEFAULT_DEGREE_CAP: usize = 16;

/// A finite linear combination of tensor Hermite polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    dimension: usize,
    terms: BTreeMap<MultiIndex, f64>,
    cap: usize,
}

impl HermiteExpansion {
    /// The zero expansion in dimension `d`.
    pub fn zero(d: usize) -> Self {
        HermiteExpansion {
            dimension: d,
            terms: BTreeMap::new(),
            cap: DEFAULT_DEGREE_CAP,
        }
    }

    /// The single term `c * H_nu`.
    pub fn single(nu: MultiIndex, c: f64) -> Result<Self> {
        let mut f = HermiteExpansion::zero(nu.dimension());
        f.add_term(nu, c)?;
        Ok(f)
    }

    /// `H_nu` itself.
    pub fn hermite(nu: MultiIndex) -> Result<Self> {
        HermiteExpansion::single(nu, 1.0)
    }

    /// The normalized polynomial `h_nu = H_nu / sqrt(2^|nu| nu!)`.
    pub fn hermite_normalized(nu: MultiIndex) -> Result<Self> {
        let scale = (2f64.powi(nu.order() as i32) * nu.factorial()).sqrt();
        HermiteExpansion::single(nu, 1.0 / scale)
    }

    /// The constant function 1 (= `H_0`).
    pub fn one(d: usize) -> Self {
        HermiteExpansion::single(MultiIndex::zero(d), 1.0).expect("degree 0 is below any cap")
    }

    /// Replace the degree cap (default [`DEFAULT_DEGREE_CAP`]).
    pub fn with_degree_cap(mut self, cap: usize) -> Result<Self> {
        if self.degree() as usize > cap {
            return Err(Error::DegreeCapExceeded {
                degree: self.degree() as usize,
                cap,
            });
        }
        self.cap = cap;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree_cap(&self) -> usize {
        self.cap
    }

    /// Maximum `|nu|` over the nonzero terms; 0 for the zero expansion.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|nu| nu.order()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &f64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, nu: &MultiIndex) -> f64 {
        self.terms.get(nu).copied().unwrap_or(0.0)
    }

    /// Accumulate `c * H_nu` into the expansion.
    pub fn add_term(&mut self, nu: MultiIndex, c: f64) -> Result<()> {
        if nu.dimension() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: nu.dimension(),
            });
        }
        if nu.order() as usize > self.cap {
            return Err(Error::DegreeCapExceeded {
                degree: nu.order() as usize,
                cap: self.cap,
            });
        }
        let slot = self.terms.entry(nu).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            // keep the representation canonical for coefficientwise tests
            let key = self
                .terms
                .iter()
                .find(|(_, &v)| v == 0.0)
                .map(|(k, _)| k.clone());
            if let Some(key) = key {
                self.terms.remove(&key);
            }
        }
        Ok(())
    }

    /// Map every coefficient through `map`, dropping exact zeros.
    pub fn map_coefficients(&self, mut map: impl FnMut(&MultiIndex, f64) -> f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(nu, &c)| (nu.clone(), map(nu, c)))
            .filter(|(_, c)| *c != 0.0)
            .collect();
        HermiteExpansion {
            dimension: self.dimension,
            terms,
            cap: self.cap,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map_coefficients(|_, c| c * s)
    }

    pub fn add(&self, other: &HermiteExpansion) -> Result<Self> {
        if other.dimension != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: other.dimension,
            });
        }
        let mut out = self.clone();
        out.cap = self.cap.max(other.cap);
        for (nu, &c) in &other.terms {
            out.add_term(nu.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &HermiteExpansion) -> Result<Self> {
        self.add(&other.scaled(-1.0))
    }

    /// Evaluate at `x` by summing `c_nu H_nu(x)` with one recurrence sweep
    /// per axis.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        if self.terms.is_empty() {
            return Ok(0.0);
        }
        let max_per_axis: Vec<u32> = (0..self.dimension)
            .map(|i| self.terms.keys().map(|nu| nu.entry(i)).max().unwrap_or(0))
            .collect();
        let tables: Vec<Vec<f64>> = max_per_axis
            .iter()
            .zip(x)
            .map(|(&m, &xi)| hermite_eval_1d_all(m, xi))
            .collect();
        let mut sum = 0.0;
        for (nu, &c) in &self.terms {
            let mut prod = c;
            for (i, &n) in nu.entries().iter().enumerate() {
                prod *= tables[i][n as usize];
            }
            sum += prod;
        }
        Ok(sum)
    }

    /// Plain partial derivative `d/dx_i` via `H_n' = 2n H_{n-1}`.
    pub fn derivative(&self, axis: usize) -> Result<Self> {
        self.check_axis(axis)?;
        let mut out = HermiteExpansion::zero(self.dimension);
        out.cap = self.cap;
        for (nu, &c) in &self.terms {
            if let Some(lower) = nu.lowered(axis) {
                out.add_term(lower, 2.0 * nu.entry(axis) as f64 * c)?;
            }
        }
        Ok(out)
    }

    /// Multiplication by the coordinate `x_i` via
    /// `x H_n = 1/2 H_{n+1} + n H_{n-1}`. Raises the degree by one, so it can
    /// hit the degree cap.
    pub fn mul_coordinate(&self, axis: usize) -> Result<Self> {
        self.check_axis(axis)?;
        let mut out = HermiteExpansion::zero(self.dimension);
        out.cap = self.cap;
        for (nu, &c) in &self.terms {
            out.add_term(nu.raised(axis), 0.5 * c)?;
            if let Some(lower) = nu.lowered(axis) {
                out.add_term(lower, nu.entry(axis) as f64 * c)?;
            }
        }
        Ok(out)
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis >= self.dimension {
            return Err(Error::AxisOutOfRange {
                axis,
                dimension: self.dimension,
            });
        }
        Ok(())
    }

    /// Exact inner product against the normalized Gaussian measure, using
    /// the orthogonality relation `<H_nu, H_mu> = delta 2^|nu| nu!`.
    pub fn inner_product_exact(&self, other: &HermiteExpansion) -> Result<f64> {
        if other.dimension != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: other.dimension,
            });
        }
        let mut sum = 0.0;
        for (nu, &c) in &self.terms {
            let oc = other.coefficient(nu);
            if oc != 0.0 {
                sum += c * oc * 2f64.powi(nu.order() as i32) * nu.factorial();
            }
        }
        Ok(sum)
    }

    /// Exact `L^2` norm against the normalized Gaussian measure.
    pub fn l2_norm_exact(&self) -> f64 {
        self.inner_product_exact(self)
            .expect("same dimension")
            .sqrt()
    }

    /// Inner product by degree-exact tensor Gauss-Hermite quadrature.
    pub fn inner_product_quadrature(
        &self,
        other: &HermiteExpansion,
        cfg: &QuadratureConfig,
    ) -> Result<f64> {
        if other.dimension != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: other.dimension,
            });
        }
        let needed = ((self.degree() + other.degree()) as usize / 2 + 1).max(2);
        let cfg = cfg.clone().with_gh_nodes(cfg.gh_nodes_per_axis.max(needed));
        let res = gauss_hermite(
            |x: &[f64]| self.eval(x).unwrap() * other.eval(x).unwrap(),
            self.dimension,
            &cfg,
        )?;
        Ok(res.value)
    }
}

/// Apply the Ornstein-Uhlenbeck operator `L = 1/2 Delta - <x, grad>`
/// spectrally: `c_nu -> -|nu| c_nu`.
pub fn ou_apply(f: &HermiteExpansion) -> HermiteExpansion {
    f.map_coefficients(|nu, c| -(nu.order() as f64) * c)
}

/// Apply `L` through exact polynomial calculus, `1/2 Delta f - x . grad f`.
/// Cross-validates the spectral route in tests.
pub fn ou_apply_calculus(f: &HermiteExpansion) -> Result<HermiteExpansion> {
    let mut out = HermiteExpansion::zero(f.dimension());
    for axis in 0..f.dimension() {
        let di = f.derivative(axis)?;
        out = out.add(&di.derivative(axis)?.scaled(0.5))?;
        out = out.sub(&di.mul_coordinate(axis)?)?;
    }
    Ok(out)
}

/// Apply the companion operator `L - d I`; coefficients become
/// `-|nu| c - d c`, which keeps the shift identity against [`ou_apply`]
/// bit-exact.
pub fn alt_ou_apply(f: &HermiteExpansion) -> HermiteExpansion {
    let d = f.dimension() as f64;
    f.map_coefficients(|nu, c| -(nu.order() as f64) * c - d * c)
}

/// The Gaussian derivative `(1/sqrt(2)) d/dx_i`.
pub fn gauss_derivative(axis: usize, f: &HermiteExpansion) -> Result<HermiteExpansion> {
    Ok(f.derivative(axis)?.scaled(std::f64::consts::FRAC_1_SQRT_2))
}

/// Its formal adjoint in `L^2` of the Gaussian measure,
/// `sqrt(2) x_i f - (1/sqrt(2)) df/dx_i`.
pub fn gauss_derivative_adjoint(axis: usize, f: &HermiteExpansion) -> Result<HermiteExpansion> {
    let xi_f = f.mul_coordinate(axis)?.scaled(std::f64::consts::SQRT_2);
    let df = f.derivative(axis)?.scaled(std::f64::consts::FRAC_1_SQRT_2);
    xi_f.sub(&df)
}

/// `(integral |f|^p dgamma)^(1/p)` by tensor Gauss-Hermite quadrature.
///
/// Exact (up to roundoff) whenever `p` is an even integer and the node count
/// exceeds `p * deg(f) / 2`. For other `p` the rule is re-evaluated at a
/// higher node count and the result is rejected if the two disagree beyond
/// the configured relative tolerance.
pub fn lp_norm(f: &HermiteExpansion, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::OutOfDomain {
            name: "p",
            value: p,
            domain: "[1, infinity)",
        });
    }
    let even = p.fract() == 0.0 && (p as u64) % 2 == 0;
    let needed = (p * f.degree() as f64 / 2.0).floor() as usize + 1;
    let nodes = cfg.gh_nodes_per_axis.max(needed.min(220));
    let cfg_hi = cfg.clone().with_gh_nodes(nodes);
    let integrand = |x: &[f64]| f.eval(x).unwrap().abs().powf(p);
    let base = gauss_hermite(integrand, f.dimension(), &cfg_hi)?;
    let value = base.value.powf(1.0 / p);
    if !even {
        let cfg_hi2 = cfg.clone().with_gh_nodes(nodes + 12);
        let check = gauss_hermite(integrand, f.dimension(), &cfg_hi2)?;
        let check_value = check.value.powf(1.0 / p);
        let scale = value.abs().max(check_value.abs()).max(1e-300);
        if (value - check_value).abs() / scale > cfg.rel_tol.max(1e-9) * 100.0 {
            return Err(Error::QuadratureNonConvergence {
                value,
                error_estimate: (value - check_value).abs(),
            });
        }
        return Ok(0.5 * (value + check_value));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn h(entries: Vec<u32>) -> HermiteExpansion {
        HermiteExpansion::hermite(MultiIndex::new(entries)).unwrap()
    }

    fn assert_coeff_close(a: &HermiteExpansion, b: &HermiteExpansion, tol: f64) {
        let diff = a.sub(b).unwrap();
        for (nu, &c) in diff.terms() {
            assert!(c.abs() <= tol, "coefficient at {nu} differs by {c:e}");
        }
    }

    #[test]
    fn ou_eigenvalues() {
        // L H_2 = -2 H_2 in d = 1
        let f = h(vec![2]);
        assert_coeff_close(&ou_apply(&f), &f.scaled(-2.0), 0.0);
        // constants are killed
        assert!(ou_apply(&h(vec![0])).is_zero());
        // mixed expansion through the calculus path
        let mixed = h(vec![1]).scaled(3.0).add(&h(vec![3])).unwrap();
        let expect = h(vec![1]).scaled(-3.0).add(&h(vec![3]).scaled(-3.0)).unwrap();
        assert_coeff_close(&ou_apply_calculus(&mixed).unwrap(), &expect, 1e-12);
    }

    #[test]
    fn calculus_path_matches_spectral_path() {
        for d in 1..=3usize {
            for nu in MultiIndex::all_up_to_order(d, 8) {
                let f = HermiteExpansion::hermite(nu.clone()).unwrap();
                let lhs = ou_apply_calculus(&f).unwrap();
                let rhs = f.scaled(-(nu.order() as f64));
                assert_coeff_close(&lhs, &rhs, 1e-12);
            }
        }
    }

    #[test]
    fn alt_ou_shift_identity_is_exact() {
        let f = h(vec![2, 1])
            .scaled(0.37)
            .add(&h(vec![0, 3]).scaled(-1.4))
            .unwrap();
        let shifted = ou_apply(&f).sub(&f.scaled(2.0)).unwrap();
        let alt = alt_ou_apply(&f);
        assert_eq!(alt, shifted);
        // eigenvalue -(|nu| + d) on H_0 in d = 2 and H_1 in d = 1
        assert_coeff_close(&alt_ou_apply(&h(vec![0, 0])), &h(vec![0, 0]).scaled(-2.0), 0.0);
        assert_coeff_close(&alt_ou_apply(&h(vec![1])), &h(vec![1]).scaled(-2.0), 0.0);
        assert!(alt_ou_apply(&HermiteExpansion::zero(2)).is_zero());
    }

    #[test]
    fn gauss_derivative_examples() {
        let sqrt2 = std::f64::consts::SQRT_2;
        assert_coeff_close(
            &gauss_derivative(0, &h(vec![1])).unwrap(),
            &h(vec![0]).scaled(sqrt2),
            1e-15,
        );
        assert!(gauss_derivative(0, &h(vec![0])).unwrap().is_zero());
        assert_coeff_close(
            &gauss_derivative(0, &h(vec![2])).unwrap(),
            &h(vec![1]).scaled(2.0 * sqrt2),
            1e-15,
        );
        assert!(gauss_derivative(1, &h(vec![1])).is_err());
    }

    #[test]
    fn adjoint_raises_h0_to_h1() {
        let got = gauss_derivative_adjoint(0, &h(vec![0])).unwrap();
        assert_coeff_close(&got, &h(vec![1]).scaled(std::f64::consts::FRAC_1_SQRT_2), 1e-15);
    }

    #[test]
    fn adjoint_duality_via_quadrature() {
        // <d_gamma f, g> = <f, d_gamma* g> for degree <= 6 pairs, judged
        // relative to the norm scale of the pairing
        let cfg = QuadratureConfig::default();
        let pairs = [
            (h(vec![1]), h(vec![0])),
            (h(vec![3]), h(vec![4])),
            (
                h(vec![2]).add(&h(vec![5]).scaled(0.3)).unwrap(),
                h(vec![1]).add(&h(vec![6]).scaled(-2.0)).unwrap(),
            ),
        ];
        for (f, g) in pairs {
            let lhs = gauss_derivative(0, &f)
                .unwrap()
                .inner_product_quadrature(&g, &cfg)
                .unwrap();
            let rhs = f
                .inner_product_quadrature(&gauss_derivative_adjoint(0, &g).unwrap(), &cfg)
                .unwrap();
            let scale = (f.l2_norm_exact() * g.l2_norm_exact()).max(1.0);
            assert_abs_diff_eq!(lhs / scale, rhs / scale, epsilon = 1e-12);
        }
    }

    #[test]
    fn factorization_reproduces_minus_ou() {
        // sum_i adj_i(d_i f) = -L f coefficientwise
        let f = h(vec![2, 1])
            .scaled(1.3)
            .add(&h(vec![0, 4]).scaled(-0.7))
            .unwrap()
            .add(&h(vec![3, 3]).scaled(0.11))
            .unwrap();
        let mut sum = HermiteExpansion::zero(2);
        for axis in 0..2 {
            let step = gauss_derivative_adjoint(axis, &gauss_derivative(axis, &f).unwrap()).unwrap();
            sum = sum.add(&step).unwrap();
        }
        assert_coeff_close(&sum, &ou_apply(&f).scaled(-1.0), 1e-12);
    }

    #[test]
    fn ou_decomposition_on_h1() {
        // (adj . d) H_1 = -L H_1 = H_1
        let f = h(vec![1]);
        let composed = gauss_derivative_adjoint(0, &gauss_derivative(0, &f).unwrap()).unwrap();
        assert_coeff_close(&composed, &f, 1e-12);
    }

    #[test]
    fn lp_norms_of_low_hermites() {
        let cfg = QuadratureConfig::default();
        assert_abs_diff_eq!(lp_norm(&h(vec![0]), 3.7, &cfg).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(
            lp_norm(&h(vec![1]), 2.0, &cfg).unwrap(),
            std::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            lp_norm(&h(vec![2]), 2.0, &cfg).unwrap(),
            8f64.sqrt(),
            epsilon = 1e-12
        );
        assert!(lp_norm(&h(vec![1]), 0.5, &cfg).is_err());
    }

    #[test]
    fn orthogonality_exact_and_by_quadrature() {
        let cfg = QuadratureConfig::default();
        for d in 1..=2usize {
            let max = if d == 1 { 8 } else { 5 };
            let all = MultiIndex::all_up_to_order(d, max);
            for nu in &all {
                for mu in &all {
                    let f = HermiteExpansion::hermite(nu.clone()).unwrap();
                    let g = HermiteExpansion::hermite(mu.clone()).unwrap();
                    let exact = if nu == mu { f.inner_product_exact(&f).unwrap() } else { 0.0 };
                    let quad = f.inner_product_quadrature(&g, &cfg).unwrap();
                    let scale = (f.inner_product_exact(&f).unwrap()
                        * g.inner_product_exact(&g).unwrap())
                    .sqrt();
                    assert!(
                        (quad - exact).abs() / scale <= 1e-10,
                        "nu={nu} mu={mu}: {quad} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let mut f = HermiteExpansion::zero(1);
        assert!(f.add_term(MultiIndex::new(vec![16]), 1.0).is_ok());
        assert!(matches!(
            f.add_term(MultiIndex::new(vec![17]), 1.0),
            Err(Error::DegreeCapExceeded { .. })
        ));
        // mul_coordinate at the cap must also refuse
        let top = HermiteExpansion::hermite(MultiIndex::new(vec![16])).unwrap();
        assert!(top.mul_coordinate(0).is_err());
        let lifted = top.with_degree_cap(32).unwrap();
        assert!(lifted.mul_coordinate(0).is_ok());
    }

    #[test]
    fn eval_sums_terms() {
        let f = h(vec![2]).scaled(2.0).add(&h(vec![1]).scaled(-1.0)).unwrap();
        // 2 H_2(x) - H_1(x) at x = 0.5: 2(4*0.25-2) - 2*0.5 = -2 - 1
        assert_abs_diff_eq!(f.eval(&[0.5]).unwrap(), -3.0, epsilon = 1e-14);
    }
}
