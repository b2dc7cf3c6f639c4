//! Floating-point q-Pochhammer symbols, theta functions and the bilateral
//! summation closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default truncation tolerance for infinite products.
pub const PRODUCT_TOL: f64 = 1e-17;

fn check_q(q: Complex64) -> Result<()> {
    if !(q.norm() < 1.0) {
        return Err(Error::invalid(format!(
            "|q| < 1 required, got |q| = {}",
            q.norm()
        )));
    }
    Ok(())
}

/// Number of factors `J` after which `|a| |q|^J / (1 - |q|) <= tol`.
pub fn product_cutoff(a_abs: f64, q_abs: f64, tol: f64) -> usize {
    if a_abs == 0.0 || q_abs == 0.0 {
        return 1;
    }
    let j = ((tol * (1.0 - q_abs) / a_abs).ln() / q_abs.ln()).ceil();
    if j.is_finite() && j > 0.0 {
        j as usize + 1
    } else {
        1
    }
}

/// `(a;q)_∞` with the tail truncated once `|a||q|^J/(1-|q|) < tol`.
pub fn qpoch_inf_tol(a: Complex64, q: Complex64, tol: f64) -> Result<Complex64> {
    check_q(q)?;
    let n = product_cutoff(a.norm(), q.norm(), tol);
    let mut acc = Complex64::new(1.0, 0.0);
    let mut aq = a;
    for _ in 0..n {
        acc *= Complex64::new(1.0, 0.0) - aq;
        aq *= q;
    }
    Ok(acc)
}

pub fn qpoch_inf(a: Complex64, q: Complex64) -> Result<Complex64> {
    qpoch_inf_tol(a, q, PRODUCT_TOL)
}

/// Real-argument `(a;q)_∞` for `0 <= q < 1`.
pub fn qpoch_inf_real(a: f64, q: f64) -> f64 {
    let n = product_cutoff(a.abs(), q.abs(), PRODUCT_TOL);
    let mut acc = 1.0;
    let mut aq = a;
    for _ in 0..n {
        acc *= 1.0 - aq;
        aq *= q;
    }
    acc
}

/// `Σ_j ln(1 - a q^j)` on the principal branch; `exp` of it is `(a;q)_∞`.
/// Stays finite where the product itself would overflow. Zero factors
/// give `-∞` real part.
pub fn log_qpoch_inf(a: Complex64, q: f64) -> Complex64 {
    let n = product_cutoff(a.norm(), q.abs(), PRODUCT_TOL);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut aq = a;
    for _ in 0..n {
        acc += (Complex64::new(1.0, 0.0) - aq).ln();
        aq *= q;
    }
    acc
}

/// `(a;q)_n`; for `n = -m < 0` the product `∏_{j=1}^m (1 - a/q^j)`.
pub fn qpoch_n(a: Complex64, q: Complex64, n: i64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if n >= 0 {
        let mut acc = one;
        let mut aq = a;
        for _ in 0..n {
            acc *= one - aq;
            aq *= q;
        }
        acc
    } else {
        let mut acc = one;
        let mut aq = a / q;
        for _ in 0..(-n) {
            acc *= one - aq;
            aq /= q;
        }
        acc
    }
}

/// `(q;q)_n` for real `q`, `n >= 0`.
pub fn qfactorial(q: f64, n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, j| acc * (1.0 - q.powi(j as i32)))
}

/// `1/(q;q)_n` with the convention `1/(q;q)_{-m} = 0` for `m > 0`.
pub fn inv_qfactorial(q: f64, n: i64) -> f64 {
    if n < 0 {
        0.0
    } else {
        1.0 / qfactorial(q, n as usize)
    }
}

/// `θ(x) = (x;q)_∞ (q/x;q)_∞`.
pub fn theta(x: Complex64, q: Complex64) -> Result<Complex64> {
    if x.norm() == 0.0 {
        return Err(Error::invalid("theta(x) requires x != 0"));
    }
    Ok(qpoch_inf(x, q)? * qpoch_inf(q / x, q)?)
}

pub fn theta_real(x: f64, q: f64) -> f64 {
    qpoch_inf_real(x, q) * qpoch_inf_real(q / x, q)
}

/// Closed form of `Σ_{n∈ℤ} t qⁿ w^{-n} / (1 + t qⁿ)`:
/// `θ(-w/t) (q;q)_∞² / (θ(-1/t) θ(w))`, valid for `|q| < |w| < 1`.
pub fn ramanujan_theta_ratio(w: Complex64, t: Complex64, q: Complex64) -> Result<Complex64> {
    check_q(q)?;
    if t.norm() == 0.0 {
        return Err(Error::invalid("t != 0 required"));
    }
    let wn = w.norm();
    if !(q.norm() < wn && wn < 1.0) {
        return Err(Error::invalid(format!(
            "|q| < |w| < 1 required, got |w| = {wn}, |q| = {}",
            q.norm()
        )));
    }
    let th_w = theta(w, q)?;
    if th_w.norm() == 0.0 {
        return Err(Error::Pole(format!("theta(w) = 0 at w = {w}")));
    }
    let qq = qpoch_inf(q, q)?;
    Ok(theta(-w / t, q)? * qq * qq / (theta(-Complex64::new(1.0, 0.0) / t, q)? * th_w))
}

/// The same closed form without the annulus check, for use on contours
/// where the expression is continued analytically.
pub fn ramanujan_theta_ratio_unchecked(w: Complex64, t: Complex64, q: f64) -> Complex64 {
    let qc = Complex64::new(q, 0.0);
    let th = |x: Complex64| qpoch_inf(x, qc).unwrap() * qpoch_inf(qc / x, qc).unwrap();
    let qq = qpoch_inf_real(q, q);
    th(-w / t) * qq * qq / (th(-Complex64::new(1.0, 0.0) / t) * th(w))
}

/// Constants of the lower bound `|(z;q)_∞| >= c1 exp(c2 ln²|·|)`:
/// `c1 = (q;q)_∞` and `c2 = 1/(2 ln(1/q))`.
pub fn pochhammer_lower_bound_constants(q: f64) -> Result<(f64, f64)> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid(format!("0 < q < 1 required, got {q}")));
    }
    Ok((qpoch_inf_real(q, q), 1.0 / (2.0 * (1.0 / q).ln())))
}

/// Decomposes `x > 1` as `x = q^{α - J}` with `α ∈ [0, 1)`, `J >= 1`.
pub fn log_q_split(x: f64, q: f64) -> (f64, i64) {
    let l = x.ln() / (1.0 / q).ln(); // log_{1/q} x = J - α
    let j = l.ceil();
    let mut alpha = j - l;
    if alpha >= 1.0 {
        alpha = 0.0;
    }
    (alpha, j as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn trivial_products() {
        assert_eq!(qpoch_inf(c(0.0), c(0.5)).unwrap(), c(1.0));
        assert_eq!(qpoch_inf(c(1.0), c(0.5)).unwrap(), c(0.0));
        assert!(qpoch_inf(c(0.5), c(1.0)).is_err());
        assert_eq!(qpoch_n(c(0.3), c(0.5), 0), c(1.0));
        let a = c(0.3);
        let q = c(0.5);
        assert_relative_eq!(
            qpoch_n(a, q, 2).re,
            (1.0 - 0.3) * (1.0 - 0.15),
            epsilon = 1e-15
        );
        assert_relative_eq!(qpoch_n(a, q, -1).re, 1.0 - 0.6, epsilon = 1e-15);
    }

    #[test]
    fn finite_times_shifted_tail_is_infinite_product() {
        let (a, q) = (c(0.7), c(0.45));
        for n in 0..6 {
            let lhs = qpoch_inf(a, q).unwrap();
            let rhs = qpoch_n(a, q, n) * qpoch_inf(a * q.powi(n as i32), q).unwrap();
            assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-14);
        }
    }

    #[test]
    fn theta_zeros_and_symmetry() {
        let q = c(0.3);
        assert_eq!(theta(c(1.0), q).unwrap().norm(), 0.0);
        assert!(theta(q, q).unwrap().norm() < 1e-16);
        let x = c(0.7);
        let a = theta(x, q).unwrap();
        let b = theta(q / x, q).unwrap();
        assert_relative_eq!(a.re, b.re, max_relative = 1e-13);
        assert!(theta(c(0.0), q).is_err());
    }

    #[test]
    fn theta_quasi_periodicity() {
        // θ(qx) = -x^{-1} θ(x)
        for (i, &qv) in [0.1, 0.3, 0.5, 0.7].iter().enumerate() {
            for k in 0..5 {
                let x = Complex64::from_polar(0.4 + 0.3 * k as f64, 0.2 + i as f64);
                let q = c(qv);
                let lhs = theta(q * x, q).unwrap();
                let rhs = -theta(x, q).unwrap() / x;
                assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn log_product_matches_product() {
        let a = Complex64::new(-1.3, 0.4);
        let got = log_qpoch_inf(a, 0.35).exp();
        let want = qpoch_inf(a, c(0.35)).unwrap();
        assert_relative_eq!(got.re, want.re, max_relative = 1e-13);
        assert_relative_eq!(got.im, want.im, max_relative = 1e-13);
    }

    #[test]
    fn ramanujan_rejects_outside_annulus() {
        assert!(ramanujan_theta_ratio(c(0.2), c(1.0), c(0.3)).is_err());
        assert!(ramanujan_theta_ratio(c(1.2), c(1.0), c(0.3)).is_err());
        assert!(ramanujan_theta_ratio(c(0.5), c(0.0), c(0.3)).is_err());
    }

    #[test]
    fn lower_bound_constants() {
        let (c1, c2) = pochhammer_lower_bound_constants(0.5).unwrap();
        assert_relative_eq!(c1, qpoch_inf_real(0.5, 0.5), max_relative = 1e-15);
        assert_relative_eq!(c2, 1.0 / (2.0 * 2f64.ln()), max_relative = 1e-15);
        let (c1, c2) = pochhammer_lower_bound_constants(0.3).unwrap();
        assert_relative_eq!(
            c1,
            qpoch_inf(c(0.3), c(0.3)).unwrap().re,
            max_relative = 1e-15
        );
        assert!(c2 > 0.0);
        assert!(pochhammer_lower_bound_constants(1.0).is_err());
    }

    #[test]
    fn split_recovers_x() {
        for &x in &[1.5, 2.0, 7.3, 100.0] {
            let q = 0.3;
            let (alpha, j) = log_q_split(x, q);
            assert!((0.0..1.0).contains(&alpha) && j >= 1);
            assert_relative_eq!(q.powf(alpha - j as f64), x, max_relative = 1e-12);
        }
    }
}
