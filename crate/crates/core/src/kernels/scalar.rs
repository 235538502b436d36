//! Scalar profile functions and the point-pair geometry entering every
//! kernel: `varphi_m`, `psi_m`, the difference quotient `B(t)`, and the
//! quantities `a`, `b`, `t0`, `u0`, `u(t)`.

use crate::error::{Error, Result};

/// `(-log sqrt(1-t)) / t`, the base raised to `(m-2)/2` inside `psi_m`.
/// Tends to 1/2 as `t -> 0`. Takes `1 - t` separately so the logarithm
/// stays accurate at both endpoints.
#[inline]
pub(crate) fn log_ratio(t: f64, one_minus_t: f64) -> f64 {
    if t == 0.0 {
        0.5
    } else if t <= 0.5 {
        -0.5 * (-t).ln_1p() / t
    } else {
        -0.5 * one_minus_t.ln() / t
    }
}

/// `varphi_m(r) = ((-log r)/(1-r^2))^((m-2)/2) r^(d-1)` on the open
/// interval `0 < r < 1`.
pub fn varphi_m(r: f64, m: u32, d: usize) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfDomain {
            name: "r",
            value: r,
            domain: "(0, 1)",
        });
    }
    let ratio = -(r - 1.0).ln_1p() / ((1.0 - r) * (1.0 + r));
    Ok(ratio.powf((m as f64 - 2.0) / 2.0) * r.powi(d as i32 - 1))
}

/// [`varphi_m`] with the continuous extension at the endpoints:
/// the limit at `r = 1` is `2^(-(m-2)/2)`; at `r = 0` it is zero for
/// `d > 1`, while for `d = 1` it is zero, one, or infinite as `m` is below,
/// at, or above two.
pub fn varphi_m_extended(r: f64, m: u32, d: usize) -> Result<f64> {
    if r == 1.0 {
        return Ok(2f64.powf(-((m as f64) - 2.0) / 2.0));
    }
    if r == 0.0 {
        if d > 1 || m < 2 {
            return Ok(0.0);
        }
        if m == 2 {
            return Ok(1.0);
        }
        return Ok(f64::INFINITY);
    }
    varphi_m(r, m, d)
}

/// `psi` with a general weight exponent `q`:
/// `((-log sqrt(1-t))/t)^((m-2)/2) (sqrt(1-t))^(q-2)`. The alternative
/// kernels take `q = d`, the plain generalized kernels take `q = m`.
/// `one_minus_t` is taken separately for accuracy near `t = 1`.
pub(crate) fn psi_with_exponent(t: f64, one_minus_t: f64, m: u32, q: f64) -> f64 {
    let ratio = log_ratio(t, one_minus_t);
    ratio.powf((m as f64 - 2.0) / 2.0) * one_minus_t.powf((q - 2.0) / 2.0)
}

/// `psi_m(t) = varphi_m(sqrt(1-t))/sqrt(1-t)`, with the continuous
/// extension `psi_m(0) = 2^(-(m-2)/2)` installed as a constant.
pub fn psi_m(t: f64, m: u32, d: usize) -> Result<f64> {
    if t == 0.0 {
        return Ok(psi_m_zero(m));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::OutOfDomain {
            name: "t",
            value: t,
            domain: "[0, 1)",
        });
    }
    Ok(psi_with_exponent(t, 1.0 - t, m, d as f64))
}

/// The endpoint value `psi_m(0+) = 2^(-(m-2)/2)`.
pub fn psi_m_zero(m: u32) -> f64 {
    2f64.powf(-((m as f64) - 2.0) / 2.0)
}

/// The difference quotient
/// `B(t) = (((-log sqrt(1-t))/t)^((m-2)/2) (1-t)^((d-1)/2)
///          - (1/2)^((m-2)/2) sqrt(1-t)) / t`,
/// so that `|psi_m(t) - psi_m(0)| = |B(t)| t / sqrt(1-t)`.
pub fn b_fun(t: f64, m: u32, d: usize) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::OutOfDomain {
            name: "t",
            value: t,
            domain: "(0, 1)",
        });
    }
    Ok(b_fun_split(t, 1.0 - t, m, d))
}

/// [`b_fun`] evaluated at `t = 1 - h` with the distance `h` supplied
/// exactly; the right-endpoint limit runs through values of `h` far below
/// machine epsilon relative to 1.
pub fn b_fun_one_minus(h: f64, m: u32, d: usize) -> Result<f64> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::OutOfDomain {
            name: "h",
            value: h,
            domain: "(0, 1)",
        });
    }
    Ok(b_fun_split(1.0 - h, h, m, d))
}

fn b_fun_split(t: f64, one_minus_t: f64, m: u32, d: usize) -> f64 {
    let ratio = log_ratio(t, one_minus_t);
    let lead = ratio.powf((m as f64 - 2.0) / 2.0) * one_minus_t.powf((d as f64 - 1.0) / 2.0);
    let sub = psi_m_zero(m) * one_minus_t.sqrt();
    (lead - sub) / t
}

/// Cached geometry of a point pair `(x, y)`:
/// `a = |x|^2 + |y|^2`, `b = 2 <x,y>`, the critical time `t0` of
/// `u(t) = |y - sqrt(1-t) x|^2 / t`, and `u0 = u(t0)`.
#[derive(Debug, Clone)]
pub struct GeometryCache {
    x: Vec<f64>,
    y: Vec<f64>,
    a: f64,
    b: f64,
    t0: f64,
    u0: f64,
    x_norm_sq: f64,
    y_norm_sq: f64,
}

/// Build the [`GeometryCache`] for `(x, y)`.
///
/// `t0` and `u0` are computed from `|x - y| |x + y| = sqrt(a^2 - b^2)`,
/// which avoids the cancellation of `a^2 - b^2` for nearby points. At
/// `x = y` the continuous extension `t0 = 0` is used.
pub fn geometry(x: &[f64], y: &[f64]) -> Result<GeometryCache> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let x_norm_sq: f64 = x.iter().map(|v| v * v).sum();
    let y_norm_sq: f64 = y.iter().map(|v| v * v).sum();
    let a = x_norm_sq + y_norm_sq;
    let b = 2.0 * x.iter().zip(y).map(|(xi, yi)| xi * yi).sum::<f64>();
    let diff_norm: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (xi - yi) * (xi - yi))
        .sum::<f64>()
        .sqrt();
    let sum_norm: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (xi + yi) * (xi + yi))
        .sum::<f64>()
        .sqrt();
    let root = diff_norm * sum_norm; // sqrt(a^2 - b^2)
    let t0 = if a + root > 0.0 { 2.0 * root / (a + root) } else { 0.0 };
    let u0 = 0.5 * (y_norm_sq - x_norm_sq) + 0.5 * root;
    Ok(GeometryCache {
        x: x.to_vec(),
        y: y.to_vec(),
        a,
        b,
        t0,
        u0,
        x_norm_sq,
        y_norm_sq,
    })
}

impl GeometryCache {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn dimension(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn x_norm_sq(&self) -> f64 {
        self.x_norm_sq
    }

    pub fn y_norm_sq(&self) -> f64 {
        self.y_norm_sq
    }

    /// `u(t) = |y - sqrt(1-t) x|^2 / t`, evaluated componentwise so nearby
    /// pairs do not lose accuracy to the `a/t - sqrt(1-t) b/t` form.
    pub fn u(&self, t: f64) -> f64 {
        self.u_split(t, 1.0 - t)
    }

    /// [`Self::u`] with `1 - t` supplied exactly (the quadrature sweeps
    /// reach `1 - t` far below machine epsilon relative to 1).
    pub(crate) fn u_split(&self, t: f64, one_minus_t: f64) -> f64 {
        let s = one_minus_t.sqrt();
        let mut norm_sq = 0.0;
        for (xi, yi) in self.x.iter().zip(&self.y) {
            let z = yi - s * xi;
            norm_sq += z * z;
        }
        norm_sq / t
    }

    /// `v(t) = |x - sqrt(1-t) y|^2 / t`; satisfies `v(t) - u(t) = |x|^2 - |y|^2`.
    pub fn v(&self, t: f64) -> f64 {
        let s = (1.0 - t).sqrt();
        let mut norm_sq = 0.0;
        for (xi, yi) in self.x.iter().zip(&self.y) {
            let w = xi - s * yi;
            norm_sq += w * w;
        }
        norm_sq / t
    }

    /// Fill `buf` with `(x - sqrt(1-t) y)/sqrt(t)` (alternative orientation).
    pub(crate) fn fill_arg_alt(&self, t: f64, one_minus_t: f64, buf: &mut [f64]) {
        let s = one_minus_t.sqrt();
        let inv = 1.0 / t.sqrt();
        for i in 0..buf.len() {
            buf[i] = (self.x[i] - s * self.y[i]) * inv;
        }
    }

    /// Fill `buf` with `(y - sqrt(1-t) x)/sqrt(t)` (plain orientation).
    pub(crate) fn fill_arg_gen(&self, t: f64, one_minus_t: f64, buf: &mut [f64]) {
        let s = one_minus_t.sqrt();
        let inv = 1.0 / t.sqrt();
        for i in 0..buf.len() {
            buf[i] = (self.y[i] - s * self.x[i]) * inv;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn varphi_endpoint_limits() {
        for m in 1..=6u32 {
            let expect = 2f64.powf(-((m as f64) - 2.0) / 2.0);
            let near_one = varphi_m(1.0 - 1e-13, m, 2).unwrap();
            assert_abs_diff_eq!(near_one, expect, epsilon = 1e-10);
            assert_eq!(varphi_m_extended(1.0, m, 2).unwrap(), expect);
            // d > 1 kills the r -> 0 limit
            assert!(varphi_m(1e-14, m, 3).unwrap().abs() < 1e-10);
        }
        // vanishing exponents: m = 2, d = 1
        assert_abs_diff_eq!(varphi_m(0.5, 2, 1).unwrap(), 1.0, epsilon = 1e-15);
        assert!(varphi_m(0.0, 2, 1).is_err());
        assert!(varphi_m(1.0, 2, 1).is_err());
    }

    #[test]
    fn psi_limits_and_samples() {
        for m in 1..=6u32 {
            assert_eq!(psi_m(0.0, m, 2).unwrap(), psi_m_zero(m));
            let near = psi_m(1e-9, m, 2).unwrap();
            assert_abs_diff_eq!(near, psi_m_zero(m), epsilon = 1e-7);
        }
        // m = 2 reduces to (sqrt(1-t))^(d-2); identically one at d = 2
        for t in [0.1, 0.4, 0.9] {
            assert_abs_diff_eq!(psi_m(t, 2, 2).unwrap(), 1.0, epsilon = 1e-15);
        }
        // direct formula check: m = 4, d = 2, t = 1/2 gives log 2
        assert_abs_diff_eq!(
            psi_m(0.5, 4, 2).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-14
        );
        assert!(psi_m(1.0, 3, 2).is_err());
    }

    #[test]
    fn psi_matches_varphi_substitution() {
        // psi_m(t) = varphi_m(sqrt(1-t)) / sqrt(1-t)
        for m in 1..=5u32 {
            for d in 2..=3usize {
                for t in [0.05f64, 0.3, 0.77] {
                    let r = (1.0 - t).sqrt();
                    let via_phi = varphi_m(r, m, d).unwrap() / r;
                    assert_abs_diff_eq!(psi_m(t, m, d).unwrap(), via_phi, epsilon = 1e-13);
                }
            }
        }
    }

    #[test]
    fn geometry_examples() {
        // orthogonal pair: b = 0 forces t0 = 1 and u0 = |y|^2
        let g = geometry(&[1.0, 0.0], &[0.0, 2.0]).unwrap();
        assert_abs_diff_eq!(g.t0(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.u0(), 4.0, epsilon = 1e-12);

        // coincident points: a = b collapses t0
        let g = geometry(&[0.7], &[0.7]).unwrap();
        assert_eq!(g.t0(), 0.0);

        // worked pair x = 1, y = 2
        let g = geometry(&[1.0], &[2.0]).unwrap();
        assert_abs_diff_eq!(g.a(), 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.b(), 4.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g.t0(), 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(g.u0(), 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(g.u(0.75), 3.0, epsilon = 1e-13);
    }

    #[test]
    fn u_is_minimized_at_t0_for_positive_b() {
        let g = geometry(&[0.4, -0.2], &[1.1, 0.3]).unwrap();
        assert!(g.b() > 0.0);
        let u0 = g.u(g.t0());
        assert_abs_diff_eq!(u0, g.u0(), epsilon = 1e-12);
        for t in [0.05, 0.2, 0.5, 0.9, 0.99] {
            assert!(g.u(t) >= u0 - 1e-12);
        }
    }

    #[test]
    fn v_minus_u_identity() {
        let g = geometry(&[0.9, 1.4], &[-0.3, 0.8]).unwrap();
        for t in [0.1, 0.5, 0.93] {
            let lhs = g.v(t) - g.u(t);
            let rhs = g.x_norm_sq() - g.y_norm_sq();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }
}
