//! Odd polynomial approximation of the sign function in the Chebyshev basis.
//!
//! Construction: a base polynomial `P` approximates sign on `[−2, 2]` outside
//! `(−δ, δ)` (Chebyshev interpolation of a scaled error function whose width
//! is chosen so the erf tail is within budget at ±δ), then the shifted
//! combination
//!
//! ```text
//! Q(x) = (1−ε) · (P(x + 2δ) − P(−x + 2δ)) / 2
//! ```
//!
//! is odd, bounded by 1 on `[−1, 1]`, within `2ε` of sign outside
//! `[−3δ, 3δ]`, and at most `2ε` in magnitude on `[−δ, δ]`. Every property is
//! certified on a dense grid rather than assumed; the degree escalates
//! (doubling) until certification passes or the cap is hit.

use crate::error::{CoreError, Result};

/// Points in the certification grid.
pub const SIGN_CERT_GRID: usize = 10_000;

/// Degree cap for the escalation ladder.
pub const MAX_SIGN_DEGREE: usize = 4096;

/// An odd, grid-certified polynomial in the Chebyshev basis on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct QsvtPolynomial {
    /// Coefficient of `T_k`; even entries are exactly zero.
    pub cheb_coeffs: Vec<f64>,
    pub degree: usize,
    /// Transition half-width δ of the certified sign approximation.
    pub delta: f64,
    /// Sup-norm budget ε: `|Q − sign| ≤ 2ε` outside `[−3δ, 3δ]`.
    pub eps: f64,
}

impl QsvtPolynomial {
    /// Clenshaw evaluation at `x ∈ [−1, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.cheb_coeffs, x)
    }

    /// Achieved degree relative to the `(1/δ)·ln(1/ε)` scale.
    pub fn degree_constant(&self) -> f64 {
        let base = ((1.0 / self.delta) * (1.0 / self.eps).ln()).ceil();
        self.degree as f64 / base
    }
}

fn clenshaw(coeffs: &[f64], t: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let next = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = next;
    }
    t * b1 - b2 + coeffs.first().copied().unwrap_or(0.0)
}

/// Chebyshev interpolation coefficients from `n` nodes on `[−1, 1]`.
fn chebyshev_fit(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let values: Vec<f64> = (0..n)
        .map(|j| f((std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos()))
        .collect();
    (0..n)
        .map(|k| {
            let sum: f64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    v * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / n as f64).cos()
                })
                .sum();
            let scale = if k == 0 { 1.0 } else { 2.0 };
            scale * sum / n as f64
        })
        .collect()
}

fn zero_even_coefficients(coeffs: &mut [f64]) {
    for (k, c) in coeffs.iter_mut().enumerate() {
        if k % 2 == 0 {
            *c = 0.0;
        }
    }
}

/// Base approximant on `[−2, 2]`, stored as Chebyshev coefficients in
/// `t = y/2`.
struct BasePoly {
    coeffs: Vec<f64>,
}

impl BasePoly {
    fn eval(&self, y: f64) -> f64 {
        clenshaw(&self.coeffs, y / 2.0)
    }
}

fn certify_base(p: &BasePoly, delta: f64, eps: f64) -> bool {
    for i in 0..=SIGN_CERT_GRID {
        let y = -2.0 + 4.0 * i as f64 / SIGN_CERT_GRID as f64;
        let v = p.eval(y);
        if v.abs() > 1.0 {
            return false;
        }
        if y.abs() >= delta && (v - y.signum()).abs() > eps {
            return false;
        }
    }
    true
}

fn certify_sign(q: &QsvtPolynomial) -> std::result::Result<(), String> {
    let (delta, eps) = (q.delta, q.eps);
    for i in 0..=SIGN_CERT_GRID {
        let x = -1.0 + 2.0 * i as f64 / SIGN_CERT_GRID as f64;
        let v = q.eval(x);
        if v.abs() > 1.0 {
            return Err(format!("|Q({x})| = {} exceeds 1", v.abs()));
        }
        if x.abs() >= 3.0 * delta && (v - x.signum()).abs() > 2.0 * eps {
            return Err(format!(
                "|Q({x}) − sign| = {} exceeds 2ε = {}",
                (v - x.signum()).abs(),
                2.0 * eps
            ));
        }
        if x.abs() <= delta && v.abs() > 2.0 * eps {
            return Err(format!(
                "|Q({x})| = {} exceeds 2ε = {} inside the transition",
                v.abs(),
                2.0 * eps
            ));
        }
    }
    Ok(())
}

/// Builds the grid-certified odd sign approximant for
/// `delta ∈ (0, 1/6)`, `eps ∈ (0, 1/2)`.
pub fn build_sign_polynomial(delta: f64, eps: f64) -> Result<QsvtPolynomial> {
    if !(delta > 0.0 && delta < 1.0 / 6.0) {
        return Err(CoreError::param(
            "delta",
            format!("{delta} outside (0, 1/6)"),
        ));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(CoreError::param("eps", format!("{eps} outside (0, 1/2)")));
    }

    // erf(y / (√2 w)) is within ε/4 of sign(y) for |y| ≥ δ when
    // √2·w = δ / √(ln(4/ε)); the extra (1 − ε/4) headroom absorbs the
    // interpolation error without breaching |P| ≤ 1.
    let z = (4.0 / eps).ln().sqrt();
    let sqrt2_w = delta / z;
    let target = |y: f64| (1.0 - eps / 4.0) * libm::erf(y / sqrt2_w);

    let attempt = |degree: usize| -> std::result::Result<QsvtPolynomial, String> {
        let mut coeffs = chebyshev_fit(|t| target(2.0 * t), degree + 1);
        zero_even_coefficients(&mut coeffs);
        let p = BasePoly { coeffs };
        if !certify_base(&p, delta, eps) {
            return Err("base approximant failed certification".into());
        }
        // Re-expand the shifted combination on [−1, 1] at the same degree.
        let scale = 1.0 - eps;
        let mut q_coeffs = chebyshev_fit(
            |x| scale * (p.eval(x + 2.0 * delta) - p.eval(-x + 2.0 * delta)) / 2.0,
            degree + 1,
        );
        zero_even_coefficients(&mut q_coeffs);
        let q = QsvtPolynomial {
            cheb_coeffs: q_coeffs,
            degree,
            delta,
            eps,
        };
        certify_sign(&q)?;
        Ok(q)
    };

    let mut degree =
        (((2.0 / delta) * (4.0 / eps).ln()).ceil() as usize).clamp(16, MAX_SIGN_DEGREE);
    loop {
        match attempt(degree) {
            Ok(q) => return Ok(q),
            Err(reason) if degree >= MAX_SIGN_DEGREE => {
                return Err(CoreError::PolynomialConstruction(format!(
                    "degree cap {MAX_SIGN_DEGREE} reached for delta={delta}, eps={eps}: {reason}"
                )));
            }
            Err(_) => degree = (degree * 2).min(MAX_SIGN_DEGREE),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_polynomial_vanishes_at_zero() {
        let q = build_sign_polynomial(0.1, 0.01).unwrap();
        assert_eq!(q.eval(0.0), 0.0);
        for (k, c) in q.cheb_coeffs.iter().enumerate() {
            if k % 2 == 0 {
                assert_eq!(*c, 0.0);
            }
        }
    }

    #[test]
    fn plateau_value_within_two_eps() {
        let q = build_sign_polynomial(0.1, 0.01).unwrap();
        let v = q.eval(0.9);
        assert!((0.98..=1.0).contains(&v), "Q(0.9) = {v}");
    }

    #[test]
    fn bounded_by_one_on_grid() {
        let q = build_sign_polynomial(0.1, 0.01).unwrap();
        let max = (0..=10_000)
            .map(|i| q.eval(-1.0 + 2.0 * i as f64 / 10_000.0).abs())
            .fold(0.0f64, f64::max);
        assert!(max <= 1.0, "max |Q| = {max}");
    }

    #[test]
    fn transition_region_is_suppressed() {
        let q = build_sign_polynomial(0.05, 0.001).unwrap();
        for i in 0..=100 {
            let x = -0.05 + 0.1 * i as f64 / 100.0;
            assert!(q.eval(x).abs() <= 0.002);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(build_sign_polynomial(0.2, 0.01).is_err());
        assert!(build_sign_polynomial(0.0, 0.01).is_err());
        assert!(build_sign_polynomial(0.1, 0.5).is_err());
        assert!(build_sign_polynomial(0.1, 0.0).is_err());
    }

    #[test]
    fn degree_constant_is_reported() {
        let q = build_sign_polynomial(0.08, 0.01).unwrap();
        let c = q.degree_constant();
        assert!(c > 0.0 && c.is_finite());
    }
}
