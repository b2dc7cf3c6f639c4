use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qcauchy::qseries::numeric::{
    log_q_split, pochhammer_lower_bound_constants, qpoch_inf, qpoch_n, ramanujan_theta_ratio, theta,
};
use qcauchy::qseries::{ratio, QSeries};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn qbinomial_partial(a: Complex64, z: Complex64, q: f64, terms: usize) -> Complex64 {
    let qc = c(q);
    (0..terms)
        .map(|n| qpoch_n(a, qc, n as i64) / qpoch_n(qc, qc, n as i64) * z.powi(n as i32))
        .sum()
}

fn z_grid() -> Vec<Complex64> {
    let mut out = vec![];
    for &r in &[0.1, 0.4, 0.7] {
        for k in 0..6 {
            out.push(Complex64::from_polar(
                r,
                k as f64 * std::f64::consts::PI / 3.0 + 0.2,
            ));
        }
    }
    out
}

#[test]
fn q_binomial_theorem_numeric() {
    let q = 0.3;
    let qc = c(q);
    for &a in &[0.0, 0.5, -1.0] {
        for z in z_grid() {
            let lhs = qbinomial_partial(c(a), z, q, 200);
            let rhs = qpoch_inf(z * a, qc).unwrap() / qpoch_inf(z, qc).unwrap();
            assert!((lhs - rhs).norm() < 1e-10, "a={a} z={z}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn euler_special_cases() {
    let q = 0.3;
    let qc = c(q);
    for z in z_grid() {
        let s: Complex64 = (0..200)
            .map(|n| z.powi(n) / qpoch_n(qc, qc, n as i64))
            .sum();
        assert!((s - 1.0 / qpoch_inf(z, qc).unwrap()).norm() < 1e-10);
    }
    for z in z_grid()
        .into_iter()
        .chain([c(3.0), c(-7.5), Complex64::new(2.0, 5.0)])
    {
        let s: Complex64 = (0..120)
            .map(|n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                z.powi(n) * sign * q.powi(n * (n - 1) / 2) / qpoch_n(qc, qc, n as i64)
            })
            .sum();
        let want = qpoch_inf(z, qc).unwrap();
        assert!((s - want).norm() < 1e-10 * want.norm().max(1.0), "z={z}");
    }
}

#[test]
fn q_binomial_theorem_series_mode() {
    // z = c·q keeps every term inside the truncation.
    let order = 11;
    for (a, cz) in [
        (ratio(1, 2), ratio(1, 3)),
        (ratio(-1, 1), ratio(2, 5)),
        (ratio(0, 1), ratio(3, 4)),
    ] {
        let z = QSeries::monomial(cz.clone(), 1, order);
        let q = QSeries::var(order);
        let mut lhs = QSeries::zero(order);
        let mut a_n = QSeries::one(order);
        let mut q_n = QSeries::one(order);
        let mut z_n = QSeries::one(order);
        for n in 0..=order {
            lhs = &lhs + &(&(&a_n * &z_n) * &q_n.inv().unwrap());
            let qn = q.pow(n);
            a_n = &a_n * &(&QSeries::one(order) - &qn.scale(&a));
            q_n = &q_n * &(&QSeries::one(order) - &(&qn * &q));
            z_n = &z_n * &z;
        }
        let rhs = &QSeries::qpoch_inf(&z.scale(&a)) * &QSeries::qpoch_inf(&z).inv().unwrap();
        assert_eq!(lhs, rhs, "a = {a}, z = {cz} q");
    }
}

#[test]
fn ramanujan_bilateral_sum() {
    for &(q, t, w) in &[
        (0.3f64, 1.0f64, 0.6f64),
        (0.3, 2.0, 0.5),
        (0.5, 0.7, 0.8),
        (0.2, 3.0, 0.25),
    ] {
        let partial: f64 = (-400i32..=400)
            .map(|n| t * q.powi(n) * w.powi(-n) / (1.0 + t * q.powi(n)))
            .sum();
        let closed = ramanujan_theta_ratio(c(w), c(t), c(q)).unwrap();
        assert!((partial - closed.re).abs() < 1e-12, "q={q} t={t} w={w}");
        assert!(closed.im.abs() < 1e-14);
    }
}

/// `Σ_n (a;q)_n/(b;q)_n zⁿ` with `(a;q)_n = (a;q)_∞ / (a qⁿ;q)_∞` for all
/// integers `n`; terms are built as running products to avoid overflow.
fn bilateral(a: f64, b: f64, z: f64, q: f64, terms: usize) -> f64 {
    let mut s = 1.0;
    let mut t = 1.0;
    for n in 0..terms {
        let qn = q.powi(n as i32);
        t *= (1.0 - a * qn) / (1.0 - b * qn) * z;
        s += t;
    }
    t = 1.0;
    for m in 1..=terms {
        let qm = q.powi(-(m as i32));
        t *= (1.0 - b * qm) / (1.0 - a * qm) / z;
        s += t;
    }
    s
}

#[test]
fn ramanujan_general_form() {
    for &(a, b, z, q) in &[
        (0.5f64, 0.2f64, 0.55f64, 0.3f64),
        (-2.0, 0.3, 0.5, 0.4),
        (3.0, -0.9, 0.45, 0.25),
    ] {
        let s = bilateral(a, b, z, q, 300);
        let p = |x: f64| qpoch_inf(c(x), c(q)).unwrap().re;
        let closed =
            p(a * z) * p(q / (a * z)) * p(q) * p(b / a) / (p(z) * p(q / a) * p(b) * p(b / (a * z)));
        assert!(
            (s - closed).abs() < 1e-10 * closed.abs().max(1.0),
            "a={a} b={b} z={z}: {s} vs {closed}"
        );
    }
}

#[test]
fn theta_quasi_periodicity() {
    let mut k = 0;
    for &q in &[0.2, 0.45, 0.7, 0.9] {
        for &x in &[0.3, 1.7, -0.8, 2.5, 0.05] {
            let x = Complex64::new(x, 0.1 * k as f64);
            k += 1;
            let lhs = theta(x * q, c(q)).unwrap();
            let rhs = -theta(x, c(q)).unwrap() / x;
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm(), "x={x} q={q}");
        }
    }
    assert_eq!(k, 20);
}

#[test]
fn pochhammer_lower_bound_part_i_with_proof_constants() {
    for &q in &[0.3, 0.5, 0.8] {
        let (c1, c2) = pochhammer_lower_bound_constants(q).unwrap();
        for &a in &[-1.0f64, -2.0, -10.0, -100.0] {
            for &b in &[0.0, 1.0, 10.0] {
                let v = qpoch_inf(Complex64::new(a, b), c(q)).unwrap().norm();
                assert!(
                    v >= c1 * (c2 * a.abs().ln().powi(2)).exp(),
                    "q={q} a={a} b={b}"
                );
            }
        }
    }
}

#[test]
fn pochhammer_lower_bound_part_ii_with_proof_constants() {
    for &q in &[0.3, 0.5, 0.8] {
        let (c1, c2) = pochhammer_lower_bound_constants(q).unwrap();
        for &a in &[0.9, 0.5, 0.0, -1.0, -10.0] {
            for &b in &[1.5f64, 2.0, 10.0, 100.0, -10.0] {
                let v = qpoch_inf(Complex64::new(a, b), c(q)).unwrap().norm();
                assert!(
                    v >= c1 * (c2 * b.abs().ln().powi(2)).exp(),
                    "q={q} a={a} b={b}"
                );
            }
        }
    }
}

/// The product bound the part (iii) argument actually establishes:
/// `|(z;q)_∞| >= q^{α(J-1) - J(J+1)/2 + 2J} (1-q)^J b² (q;q)_∞` for
/// `a = q^{α-J} > 1`.
#[test]
fn pochhammer_lower_bound_part_iii_intermediate_product_bound() {
    for &q in &[0.3, 0.5, 0.8] {
        let qq = qpoch_inf(c(q), c(q)).unwrap().re;
        for &a in &[1.5, 2.0, 10.0, 100.0] {
            let (alpha, j) = log_q_split(a, q);
            let jf = j as f64;
            for &b in &[0.0f64, 0.5, 1.0, 10.0] {
                let v = qpoch_inf(Complex64::new(a, b), c(q)).unwrap().norm();
                let bound = q.powf(alpha * (jf - 1.0) - jf * (jf + 1.0) / 2.0 + 2.0 * jf)
                    * (1.0 - q).powi(j as i32)
                    * b
                    * b
                    * qq;
                assert!(
                    v >= bound * (1.0 - 1e-12),
                    "q={q} a={a} b={b}: {v} < {bound}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn series_inverse_is_inverse(c0 in 1i64..5, c1 in -5i64..5, c2 in -5i64..5, order in 0usize..10) {
        let s = QSeries::from_coeffs(vec![ratio(c0, 1), ratio(c1, 2), ratio(c2, 3)], order);
        let prod = &s * &s.inv().unwrap();
        prop_assert_eq!(prod, QSeries::one(order));
    }

    #[test]
    fn theta_symmetry(x in 0.05f64..3.0, q in 0.05f64..0.9) {
        let a = theta(c(x), c(q)).unwrap();
        let b = theta(c(q / x), c(q)).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn qpoch_n_splits_infinite_product(a in -2.0f64..0.9, q in 0.05f64..0.9, n in 0i64..20) {
        let qc = c(q);
        let whole = qpoch_inf(c(a), qc).unwrap();
        let split = qpoch_n(c(a), qc, n) * qpoch_inf(c(a * q.powi(n as i32)), qc).unwrap();
        prop_assert!((whole - split).norm() <= 1e-12 * whole.norm().max(1.0));
    }
}

#[test]
fn series_pentagonal_numbers() {
    let e = QSeries::qpoch_inf(&QSeries::var(12));
    assert_eq!(
        e.coeffs_i64(),
        vec![1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]
    );
    assert!(QSeries::one(3).coeff(0).is_one());
    assert!(QSeries::zero(3).coeff(1).is_zero());
}
