use num_rational::BigRational;
use proptest::prelude::*;
use qcauchy::measures::{
    chi_cdf, chi_plus_shift_cdf, chi_plus_shift_cdf_convolution, chi_pmf, restricted_qw_sum,
    restricted_skew_sum, shift_convolve, shift_pmf, verify_restricted_cauchy, Ensemble, ParamSet,
    TruncationPolicy,
};
use qcauchy::partitions::{enumerate_by_weight, superpartitions};
use qcauchy::qseries::{ratio, rational_to_string};
use qcauchy::scalar::{parse_rational, RationalRing};
use qcauchy::symfunc::skew_schur;

fn sets() -> Vec<ParamSet> {
    vec![
        ParamSet::new(vec![0.2, 0.15], vec![0.3, 0.25], 0.4, 1.0, 0).unwrap(),
        ParamSet::new(vec![0.30, 0.28], vec![0.25, 0.20], 0.15, 1.0, 0).unwrap(),
        ParamSet::new(vec![0.35], vec![0.4], 0.5, 2.0, 0).unwrap(),
    ]
}

fn trunc() -> TruncationPolicy {
    TruncationPolicy {
        weight_cutoff: 20,
        ..Default::default()
    }
}

#[test]
fn first_row_identity_chain() {
    for p in sets() {
        let ens = Ensemble::build(&p, &trunc()).unwrap();
        for n in 0..=3 {
            let lhs = ens.mu1_plus_chi_cdf(n);
            let rhs = ens.lambda1_cdf(n);
            let tol = lhs.residual + rhs.residual + 1e-12;
            assert!(
                (lhs.value - rhs.value).abs() <= tol,
                "{p:?} n={n}: {lhs:?} vs {rhs:?}"
            );
            // the same quantity assembled from the μ₁ marginal
            let conv: f64 = (0..=n)
                .map(|m| {
                    let pm = ens.mu1_cdf(m).value - ens.mu1_cdf(m - 1).value;
                    pm * chi_cdf(n - m, p.q)
                })
                .sum();
            assert!((conv - lhs.value).abs() < 1e-13);
        }
    }
}

#[test]
fn shifted_identity_chain() {
    for p in sets() {
        let ens = Ensemble::build(&p, &trunc()).unwrap();
        for n in -2..=3 {
            let a = ens.mu1_chi_shift_cdf(n);
            let b = ens.lambda1_shift_cdf(n);
            let c = ens.qlaplace(p.with_k(n).zeta()).unwrap();
            let tol = a.residual + b.residual + 1e-12;
            assert!((a.value - b.value).abs() <= tol, "n={n}");
            assert!(
                (c.value - b.value).abs() <= c.residual + b.residual + 1e-12,
                "n={n}"
            );
        }
    }
}

#[test]
fn chi_plus_shift_closed_form_grid() {
    for &q in &[0.3, 0.5, 0.8] {
        for &t in &[0.5, 1.0, 2.0] {
            let p = ParamSet::new(vec![0.1], vec![0.1], q, t, 0).unwrap();
            for n in -5..=5 {
                let a = chi_plus_shift_cdf(n, &p);
                let b = chi_plus_shift_cdf_convolution(n, &p);
                assert!((a - b).abs() < 1e-10, "q={q} t={t} n={n}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn normalization_example() {
    let p = ParamSet::new(vec![0.2, 0.15], vec![0.3, 0.25], 0.4, 1.0, 0).unwrap();
    let ens = Ensemble::build(
        &p,
        &TruncationPolicy {
            weight_cutoff: 14,
            ..Default::default()
        },
    )
    .unwrap();
    let qw: f64 = ens.qw.iter().map(|x| x.1).sum();
    assert!((qw - 1.0).abs() < 1e-8);
    let p = ParamSet::new(vec![0.30, 0.28], vec![0.25, 0.20], 0.15, 1.0, 0).unwrap();
    let trunc = TruncationPolicy::default();
    let ens = Ensemble::build(&p, &trunc).unwrap();
    let ps: f64 = ens.ps.iter().map(|x| x.1).sum();
    assert!((ps - 1.0).abs() < trunc.float_tail_tol);
}

#[test]
fn truncation_self_consistency() {
    for p in sets() {
        let small = Ensemble::build(
            &p,
            &TruncationPolicy {
                weight_cutoff: 10,
                ..Default::default()
            },
        )
        .unwrap();
        let big = Ensemble::build(
            &p,
            &TruncationPolicy {
                weight_cutoff: 20,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(big.qw_residual <= small.qw_residual);
        for n in 0..=3 {
            let s = small.lambda1_cdf(n);
            let b = big.lambda1_cdf(n);
            assert!((s.value - b.value).abs() <= s.residual + 1e-15, "n={n}");
            let s = small.mu1_plus_chi_cdf(n);
            let b = big.mu1_plus_chi_cdf(n);
            assert!((s.value - b.value).abs() <= s.residual + 1e-15, "n={n}");
        }
    }
    let a = [ratio(1, 3), ratio(1, 5)];
    let b = [ratio(1, 4), ratio(1, 7)];
    let lo = restricted_skew_sum(2, &a, &b, 4);
    let hi = restricted_skew_sum(2, &a, &b, 8);
    assert_eq!(lo, hi.truncate(4));
}

#[test]
fn golden_restricted_cauchy_coefficients() {
    let text = include_str!("golden/restricted_cauchy_n2.json");
    let g: serde_json::Value = serde_json::from_str(text).unwrap();
    let parse = |k: &str| -> Vec<BigRational> {
        g[k].as_array()
            .unwrap()
            .iter()
            .map(|s| parse_rational(s.as_str().unwrap()).unwrap())
            .collect()
    };
    let (a, b) = (parse("a"), parse("b"));
    let r = verify_restricted_cauchy(2, &a, &b, 6).unwrap();
    assert!(r.equal);
    let want: Vec<String> = parse("coeffs").iter().map(rational_to_string).collect();
    assert_eq!(r.lhs_coeffs, want);
    assert_eq!(r.rhs_coeffs, want);
}

/// The right-hand side summed with `λ` outermost and in reverse
/// enumeration order.
fn rhs_reordered(n: usize, a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    let ring = RationalRing {
        q: BigRational::from_integer(0.into()),
    };
    let nmin = a.len().min(b.len());
    let mut c = vec![BigRational::from_integer(0.into()); order + 1];
    let mut rhos = enumerate_by_weight(order, Some(n), None);
    rhos.reverse();
    for rho in rhos {
        let mut lams = superpartitions(&rho, n, rho.len() + nmin);
        lams.reverse();
        for lam in lams {
            c[rho.weight()] += skew_schur(&ring, &lam, &rho, a) * skew_schur(&ring, &lam, &rho, b);
        }
    }
    c
}

#[test]
fn exact_sums_ignore_summation_order() {
    let a = [ratio(1, 3), ratio(1, 5)];
    let b = [ratio(1, 4), ratio(1, 7), ratio(2, 9)];
    for n in 0..=3 {
        let direct = restricted_skew_sum(n, &a, &b, 6);
        assert_eq!(direct.coeffs().to_vec(), rhs_reordered(n, &a, &b, 6));
        let (ar, br): (Vec<_>, Vec<_>) = (
            a.iter().rev().cloned().collect(),
            b.iter().rev().cloned().collect(),
        );
        assert_eq!(
            restricted_qw_sum(n, &a, &b, 6),
            restricted_qw_sum(n, &ar, &br, 6)
        );
        assert_eq!(direct, restricted_skew_sum(n, &ar, &br, 6));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pmfs_nonnegative_cdfs_monotone(q in 0.05f64..0.95, t in 0.2f64..5.0, n in -10i64..10) {
        let p = ParamSet::new(vec![0.1], vec![0.1], q, t, 0).unwrap();
        prop_assert!(chi_pmf(n, q) >= 0.0);
        prop_assert!(shift_pmf(n, &p) >= 0.0);
        prop_assert!(chi_cdf(n, q) <= chi_cdf(n + 1, q));
        prop_assert!(chi_plus_shift_cdf(n, &p) <= chi_plus_shift_cdf(n + 1, &p));
        let f = |m| shift_convolve(m, &p, |k| chi_cdf(k, q));
        prop_assert!(f(n) <= f(n + 1) + 1e-15);
    }

    #[test]
    fn measure_cdfs_monotone(a in 0.05f64..0.5, b in 0.05f64..0.5, q in 0.1f64..0.6, n in -1i64..5) {
        let p = ParamSet::new(vec![a], vec![b], q, 1.0, 0).unwrap();
        let ens = Ensemble::build(&p, &TruncationPolicy { weight_cutoff: 10, ..Default::default() }).unwrap();
        prop_assert!(ens.qw.iter().chain(&ens.ps).all(|x| x.1 >= 0.0));
        prop_assert!(ens.lambda1_cdf(n).value <= ens.lambda1_cdf(n + 1).value);
        prop_assert!(ens.mu1_plus_chi_cdf(n).value <= ens.mu1_plus_chi_cdf(n + 1).value);
    }
}
