//! Physicists' Hermite polynomials: evaluation and the Rodrigues oracle.
//!
//! The family is fixed by `H_0 = 1`, `H_1(x) = 2x` and the three-term
//! recurrence `H_{n+1}(x) = 2x H_n(x) - 2n H_{n-1}(x)`; it is orthogonal for
//! the weight `exp(-x^2)`. Tensor products `H_nu(x) = prod_i H_{nu_i}(x_i)`
//! are the eigenfunctions used throughout the crate.

use crate::error::{Error, Result};
use crate::index::MultiIndex;

/// Evaluate the one-dimensional `H_n(x)` by the three-term recurrence.
pub fn hermite_eval_1d(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * (k as f64) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Values `H_0(x), ..., H_max(x)` in one sweep of the recurrence.
pub fn hermite_eval_1d_all(max: u32, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(1.0);
    if max == 0 {
        return out;
    }
    out.push(2.0 * x);
    for k in 1..max {
        let next = 2.0 * x * out[k as usize] - 2.0 * (k as f64) * out[(k - 1) as usize];
        out.push(next);
    }
    out
}

/// Evaluate the tensor polynomial `H_nu(x) = prod_i H_{nu_i}(x_i)`.
pub fn hermite_eval(nu: &MultiIndex, x: &[f64]) -> Result<f64> {
    if nu.dimension() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: nu.dimension(),
            got: x.len(),
        });
    }
    Ok(nu
        .entries()
        .iter()
        .zip(x)
        .map(|(&n, &xi)| hermite_eval_1d(n, xi))
        .product())
}

/// A tensor Hermite polynomial, i.e. the pair (index, dimension).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitePolynomial {
    index: MultiIndex,
}

impl HermitePolynomial {
    pub fn new(index: MultiIndex) -> Self {
        HermitePolynomial { index }
    }

    pub fn index(&self) -> &MultiIndex {
        &self.index
    }

    pub fn dimension(&self) -> usize {
        self.index.dimension()
    }

    pub fn degree(&self) -> u32 {
        self.index.order()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        hermite_eval(&self.index, x)
    }

    /// Squared norm `2^|nu| nu!` against the normalized Gaussian measure.
    pub fn norm_sq(&self) -> f64 {
        2f64.powi(self.index.order() as i32) * self.index.factorial()
    }
}

/// Largest degree the Rodrigues oracle accepts.
pub const RODRIGUES_MAX_DEGREE: usize = 12;

/// Independent evaluation of `H_n(x)` through Rodrigues' formula
/// `H_n(x) = (-1)^n exp(x^2) d^n/dx^n exp(-x^2)`.
///
/// The n-th derivative of `exp(-x^2)` is `P_n(x) exp(-x^2)` with
/// `P_{k+1} = P_k' - 2x P_k`; the monomial coefficients of `P_n` are built
/// with exact integer arithmetic, so this is a brute-force reference path
/// sharing nothing with the recurrence in [`hermite_eval_1d`]. Intended for
/// tests only; degrees are capped at [`RODRIGUES_MAX_DEGREE`].
pub fn rodrigues_oracle(n: usize, x: f64) -> Result<f64> {
    if n > RODRIGUES_MAX_DEGREE {
        return Err(Error::OracleRange(n));
    }
    // coeffs[k] = coefficient of x^k in P_n, exact in i64 for n <= 12.
    let mut coeffs: Vec<i64> = vec![1];
    for _ in 0..n {
        let mut next = vec![0i64; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            if k >= 1 {
                next[k - 1] += c * k as i64; // derivative of c x^k
            }
            next[k + 1] -= 2 * c; // -2x * c x^k
        }
        coeffs = next;
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut value = 0.0;
    for &c in coeffs.iter().rev() {
        value = value * x + c as f64;
    }
    Ok(sign * value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_polynomial_is_one() {
        assert_eq!(hermite_eval(&MultiIndex::new(vec![0]), &[0.7]).unwrap(), 1.0);
    }

    #[test]
    fn first_degrees_match_closed_forms() {
        // H_1(x) = 2x, H_2(x) = 4x^2 - 2
        assert_eq!(hermite_eval(&MultiIndex::new(vec![1]), &[0.5]).unwrap(), 1.0);
        assert_eq!(hermite_eval(&MultiIndex::new(vec![2]), &[1.0]).unwrap(), 2.0);
    }

    #[test]
    fn rodrigues_reference_values() {
        assert_eq!(rodrigues_oracle(0, 2.0).unwrap(), 1.0);
        assert_eq!(rodrigues_oracle(3, 1.0).unwrap(), -4.0);
        assert_eq!(rodrigues_oracle(1, 0.0).unwrap(), 0.0);
        assert!(rodrigues_oracle(13, 0.0).is_err());
    }

    #[test]
    fn recurrence_agrees_with_rodrigues_up_to_cap() {
        for n in 0..=RODRIGUES_MAX_DEGREE {
            for &x in &[-2.5, -1.0, -0.3, 0.0, 0.41, 1.7, 3.0] {
                let viarec = hermite_eval_1d(n as u32, x);
                let viarod = rodrigues_oracle(n, x).unwrap();
                let scale = viarod.abs().max(1.0);
                assert_abs_diff_eq!(viarec / scale, viarod / scale, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn tensor_product_factorizes() {
        let nu = MultiIndex::new(vec![2, 3]);
        let x = [0.8, -1.1];
        let direct = hermite_eval(&nu, &x).unwrap();
        let product = hermite_eval_1d(2, 0.8) * hermite_eval_1d(3, -1.1);
        assert_eq!(direct, product);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(hermite_eval(&MultiIndex::new(vec![1, 1]), &[0.0]).is_err());
    }

    #[test]
    fn batch_evaluation_matches_single() {
        let all = hermite_eval_1d_all(9, 0.37);
        for (n, &v) in all.iter().enumerate() {
            assert_eq!(v, hermite_eval_1d(n as u32, 0.37));
        }
    }
}
