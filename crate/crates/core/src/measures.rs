//! The q-Whittaker and periodic Schur measures, the auxiliary variables
//! `χ` and `S`, and brute-force evaluation of the distribution identities.
//!
//! Float quantities are enumeration sums truncated at a weight cutoff. Every
//! weight is nonnegative and the normalizations are known in closed form, so
//! `1 - (summed mass)` bounds the error of every truncated probability.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::partitions::{
    enumerate, enumerate_by_weight, subpartitions, superpartitions, Partition,
};
use crate::qseries::numeric::{qpoch_inf, qpoch_inf_real, theta_real};
use crate::qseries::{rational_to_string, QSeries};
use crate::scalar::{FloatRing, RationalRing, SeriesRing};
use crate::symfunc::{skew_schur_with, QWhittaker, SchurTables};

/// A specialization `(a; b; q, t, k)` shared by measures and kernels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSet {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub q: f64,
    pub t: f64,
    /// Threshold `k` (or `n`) in the distribution functions.
    pub k: i64,
}

/// Which sets of hypotheses a parameter set satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    /// `a_i, b_j > 0`, `a_max b_max < 1`, `0 < q < 1`, `t > 0`.
    pub measure: bool,
    /// Distinct `a`'s with `q a_max < a_min`.
    pub determinant_formula: bool,
    /// Distinct `a`'s with `a_max / a_min < q^{-1/2 + ε}`.
    pub contour_shift: bool,
}

impl ParamSet {
    /// Validates the measure invariants.
    pub fn new(a: Vec<f64>, b: Vec<f64>, q: f64, t: f64, k: i64) -> Result<Self> {
        let p = ParamSet { a, b, q, t, k };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.is_empty() || self.b.is_empty() {
            return Err(Error::invalid("a and b must be nonempty"));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::invalid(format!(
                "0 < q < 1 required, got q = {}",
                self.q
            )));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::invalid(format!(
                "t > 0 required, got t = {}",
                self.t
            )));
        }
        for (name, v) in [("a", &self.a), ("b", &self.b)] {
            if let Some(x) = v.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
                return Err(Error::invalid(format!(
                    "{name} values must be positive, got {x}"
                )));
            }
        }
        if self.a_max() * self.b_max() >= 1.0 {
            return Err(Error::invalid(format!(
                "a_max*b_max < 1 required, got {}",
                self.a_max() * self.b_max()
            )));
        }
        Ok(())
    }

    pub fn n_a(&self) -> usize {
        self.a.len()
    }

    pub fn n_b(&self) -> usize {
        self.b.len()
    }

    pub fn a_max(&self) -> f64 {
        self.a.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn a_min(&self) -> f64 {
        self.a.iter().cloned().fold(f64::MAX, f64::min)
    }

    pub fn b_max(&self) -> f64 {
        self.b.iter().cloned().fold(f64::MIN, f64::max)
    }

    pub fn with_k(&self, k: i64) -> Self {
        ParamSet { k, ..self.clone() }
    }

    /// `ζ = -t q^{1/2 + k}`.
    pub fn zeta(&self) -> Complex64 {
        Complex64::new(-self.t * self.q.powf(0.5 + self.k as f64), 0.0)
    }

    fn a_distinct(&self) -> bool {
        let mut s = self.a.clone();
        s.sort_by(|x, y| y.partial_cmp(x).unwrap());
        s.windows(2).all(|w| w[0] > w[1])
    }

    pub fn hypotheses(&self, eps: f64) -> Hypotheses {
        let measure = self.validate().is_ok();
        let distinct = self.a_distinct();
        Hypotheses {
            measure,
            determinant_formula: measure && distinct && self.q * self.a_max() < self.a_min(),
            contour_shift: measure
                && distinct
                && self.a_max() / self.a_min() < self.q.powf(-0.5 + eps),
        }
    }

    /// `∏_{i,j} (a_i b_j; q)_∞ = 1 / Z_qW`.
    pub fn inv_z_qw(&self) -> f64 {
        let mut acc = 1.0;
        for a in &self.a {
            for b in &self.b {
                acc *= qpoch_inf_real(a * b, self.q);
            }
        }
        acc
    }

    /// `(q;q)_∞ ∏_{i,j} (a_i b_j; q)_∞ = 1 / Z_pS`.
    pub fn inv_z_ps(&self) -> f64 {
        self.inv_z_qw() * qpoch_inf_real(self.q, self.q)
    }
}

/// Enumeration and tolerance controls for brute-force sums.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Largest `|μ|` (resp. `|λ|`) summed.
    pub weight_cutoff: usize,
    pub series_order: usize,
    pub float_tail_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            weight_cutoff: 16,
            series_order: 8,
            float_tail_tol: 1e-6,
        }
    }
}

/// A truncated sum together with a bound on the omitted part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncated {
    pub value: f64,
    pub residual: f64,
}

impl Truncated {
    fn check(self, tol: f64) -> Result<Self> {
        if self.residual > tol {
            Err(Error::Truncation {
                residual: self.residual,
                tol,
            })
        } else {
            Ok(self)
        }
    }
}

/// `P_μ(a) Q_μ(b) / Z_qW`.
pub fn qw_weight(mu: &Partition, p: &ParamSet) -> f64 {
    let ring = FloatRing { q: p.q };
    let pa = QWhittaker::new(&ring, &p.a).p(mu);
    if pa == 0.0 {
        return 0.0;
    }
    pa * QWhittaker::new(&ring, &p.b).q_dual(mu) * p.inv_z_qw()
}

/// `Σ_{ρ ⊂ λ} q^{|ρ|} s_{λ/ρ}(a) s_{λ/ρ}(b) / Z_pS`.
pub fn ps_weight(lambda: &Partition, p: &ParamSet) -> f64 {
    let ring = FloatRing { q: p.q };
    let deg = lambda.weight() + 1;
    let ta = SchurTables::new(&ring, &p.a, deg);
    let tb = SchurTables::new(&ring, &p.b, deg);
    ps_unnormalized(lambda, p, &ta, &tb) * p.inv_z_ps()
}

/// Columns of `λ/ρ` longer than `n` force `s_{λ/ρ}` in `n` variables to vanish.
fn column_bound_ok(lambda: &Partition, rho: &Partition, n: usize) -> bool {
    let lc = lambda.conjugate();
    let rc = rho.conjugate();
    (0..lc.len()).all(|j| lc.part(j) - rc.part(j) <= n)
}

fn ps_unnormalized(
    lambda: &Partition,
    p: &ParamSet,
    ta: &SchurTables<f64>,
    tb: &SchurTables<f64>,
) -> f64 {
    let ring = FloatRing { q: p.q };
    let nmin = p.n_a().min(p.n_b());
    par::compensated_sum(subpartitions(lambda).into_iter().filter_map(|rho| {
        if !column_bound_ok(lambda, &rho, nmin) {
            return None;
        }
        let sa = skew_schur_with(&ring, lambda, &rho, ta);
        let sb = skew_schur_with(&ring, lambda, &rho, tb);
        Some(p.q.powi(rho.weight() as i32) * sa * sb)
    }))
}

/// `P(χ = n) = q^n (q;q)_∞ / (q;q)_n`.
pub fn chi_pmf(n: i64, q: f64) -> f64 {
    if n < 0 {
        return 0.0;
    }
    let mut v = qpoch_inf_real(q, q);
    for j in 1..=n {
        v *= q / (1.0 - q.powi(j as i32));
    }
    v
}

/// `P(χ <= m) = (q;q)_∞ / (q;q)_m`, zero for `m < 0`.
pub fn chi_cdf(m: i64, q: f64) -> f64 {
    if m < 0 {
        return 0.0;
    }
    let mut v = qpoch_inf_real(q, q);
    for j in 1..=m {
        let f = 1.0 - q.powi(j as i32);
        if f == 1.0 {
            break;
        }
        v /= f;
    }
    v
}

fn log_shift_norm(p: &ParamSet) -> f64 {
    let s = p.t * p.q.sqrt();
    (qpoch_inf_real(p.q, p.q) * theta_real(-s, p.q)).ln()
}

/// `P(S = ℓ) = t^ℓ q^{ℓ²/2} / ((q;q)_∞ θ(-t q^{1/2}))`.
pub fn shift_pmf(l: i64, p: &ParamSet) -> f64 {
    let lf = l as f64;
    (lf * p.t.ln() + 0.5 * lf * lf * p.q.ln() - log_shift_norm(p)).exp()
}

/// Integer range outside which `P(S = ℓ) < e^{-60}` times the mode.
pub fn shift_support(p: &ParamSet) -> (i64, i64) {
    let lq = p.q.ln();
    let mode = -p.t.ln() / lq;
    let half = (120.0 / -lq).sqrt().ceil() + 2.0;
    ((mode - half).floor() as i64, (mode + half).ceil() as i64)
}

/// `P(χ + S <= n) = 1 / (-t q^{1/2+n}; q)_∞`.
pub fn chi_plus_shift_cdf(n: i64, p: &ParamSet) -> f64 {
    1.0 / qpoch_inf_real(-p.t * p.q.powf(0.5 + n as f64), p.q)
}

/// The same probability as the convolution `Σ_ℓ P(S = ℓ) P(χ <= n - ℓ)`.
pub fn chi_plus_shift_cdf_convolution(n: i64, p: &ParamSet) -> f64 {
    shift_convolve(n, p, |m| chi_cdf(m, p.q))
}

/// `Σ_ℓ P(S = ℓ) F(n - ℓ)` for a cdf `F`.
pub fn shift_convolve<F: Fn(i64) -> f64>(n: i64, p: &ParamSet, cdf: F) -> f64 {
    let (lo, hi) = shift_support(p);
    par::compensated_sum((lo..=hi.min(n)).map(|l| shift_pmf(l, p) * cdf(n - l)))
}

/// `f_ζ`-free integrand `1 / (ζ q^{-μ₁}; q)_∞` of the q-Laplace transform.
pub fn qlaplace_integrand(zeta: Complex64, mu1: usize, q: f64) -> Result<Complex64> {
    let x = zeta * q.powi(-(mu1 as i32));
    let v = qpoch_inf(x, Complex64::new(q, 0.0))?;
    if v.norm() == 0.0 {
        return Err(Error::Pole(format!("(ζ q^-{mu1}; q)_∞ = 0 at ζ = {zeta}")));
    }
    Ok(1.0 / v)
}

/// Enumerated supports of both measures with their weights.
#[derive(Clone, Debug)]
pub struct Ensemble {
    pub params: ParamSet,
    pub qw: Vec<(Partition, f64)>,
    pub ps: Vec<(Partition, f64)>,
    /// `1 - Σ qW weights` over the enumerated support.
    pub qw_residual: f64,
    /// `1 - Σ pS weights` over the enumerated support.
    pub ps_residual: f64,
}

impl Ensemble {
    pub fn build(p: &ParamSet, trunc: &TruncationPolicy) -> Result<Self> {
        p.validate()?;
        let ring = FloatRing { q: p.q };
        let cutoff = trunc.weight_cutoff;
        let nmin = p.n_a().min(p.n_b());

        let mus = enumerate_by_weight(cutoff, None, Some(nmin));
        let mut pa = QWhittaker::new(&ring, &p.a);
        let mut qb = QWhittaker::new(&ring, &p.b);
        let z = p.inv_z_qw();
        let qw: Vec<(Partition, f64)> = mus
            .into_iter()
            .map(|mu| {
                let w = pa.p(&mu) * qb.q_dual(&mu) * z;
                (mu, w)
            })
            .collect();

        let lambdas = enumerate_by_weight(cutoff, None, None);
        let ta = SchurTables::new(&ring, &p.a, cutoff + 1);
        let tb = SchurTables::new(&ring, &p.b, cutoff + 1);
        let zps = p.inv_z_ps();
        let ws = par::map(&lambdas, |l| ps_unnormalized(l, p, &ta, &tb) * zps);
        let ps: Vec<(Partition, f64)> = lambdas.into_iter().zip(ws).collect();

        let qw_mass = par::compensated_sum(qw.iter().map(|x| x.1));
        let ps_mass = par::compensated_sum(ps.iter().map(|x| x.1));
        let out = Ensemble {
            params: p.clone(),
            qw,
            ps,
            qw_residual: (1.0 - qw_mass).max(0.0),
            ps_residual: (1.0 - ps_mass).max(0.0),
        };
        for (name, w) in out.qw.iter().chain(&out.ps).map(|(l, w)| (l, *w)) {
            if !w.is_finite() || w < -1e-14 {
                return Err(Error::NonFinite(format!("measure weight at {name}: {w}")));
            }
        }
        Ok(out)
    }

    /// `P(μ₁ <= n)`.
    pub fn mu1_cdf(&self, n: i64) -> Truncated {
        self.qw_sum(|mu| if mu.first() as i64 <= n { 1.0 } else { 0.0 })
    }

    /// `P(μ₁ + χ <= n)`.
    pub fn mu1_plus_chi_cdf(&self, n: i64) -> Truncated {
        let q = self.params.q;
        self.qw_sum(|mu| chi_cdf(n - mu.first() as i64, q))
    }

    /// `P(λ₁ <= n)`.
    pub fn lambda1_cdf(&self, n: i64) -> Truncated {
        let v = par::compensated_sum(
            self.ps
                .iter()
                .filter(|(l, _)| l.first() as i64 <= n)
                .map(|x| x.1),
        );
        Truncated {
            value: v,
            residual: self.ps_residual,
        }
    }

    /// `P(λ₁ + S <= n)`.
    pub fn lambda1_shift_cdf(&self, n: i64) -> Truncated {
        let v = shift_convolve(n, &self.params, |m| self.lambda1_cdf(m).value);
        Truncated {
            value: v,
            residual: self.ps_residual,
        }
    }

    /// `P(μ₁ + χ + S <= n)`.
    pub fn mu1_chi_shift_cdf(&self, n: i64) -> Truncated {
        let v = shift_convolve(n, &self.params, |m| self.mu1_plus_chi_cdf(m).value);
        Truncated {
            value: v,
            residual: self.qw_residual,
        }
    }

    /// `E[1 / (ζ q^{-μ₁}; q)_∞]`. The residual is the unsummed mass times
    /// the largest integrand seen, which is a bound whenever the integrand
    /// is bounded by its values on the support (e.g. `ζ <= 0`, where it
    /// lies in `(0, 1]`).
    pub fn qlaplace(&self, zeta: Complex64) -> Result<Truncated> {
        let q = self.params.q;
        let vals: Vec<f64> = self
            .qw
            .iter()
            .map(|(mu, w)| qlaplace_integrand(zeta, mu.first(), q).map(|v| (v * *w).re))
            .collect::<Result<_>>()?;
        let sup = self
            .qw
            .iter()
            .map(|(mu, _)| qlaplace_integrand(zeta, mu.first(), q).map(|v| v.norm()))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(1.0f64, f64::max);
        Ok(Truncated {
            value: par::compensated_sum(vals),
            residual: self.qw_residual * sup,
        })
    }

    fn qw_sum<F: Fn(&Partition) -> f64>(&self, f: F) -> Truncated {
        Truncated {
            value: par::compensated_sum(self.qw.iter().map(|(mu, w)| w * f(mu))),
            residual: self.qw_residual,
        }
    }
}

/// Brute-force `E[1/(ζ q^{-μ₁};q)_∞]` at `ζ = -t q^{1/2+k}`; fails when the
/// truncation residual exceeds the policy tolerance.
pub fn qlaplace_lhs(p: &ParamSet, trunc: &TruncationPolicy) -> Result<Truncated> {
    Ensemble::build(p, trunc)?
        .qlaplace(p.zeta())?
        .check(trunc.float_tail_tol)
}

/// Brute-force `P(λ₁ + S <= k)`; fails when the truncation residual exceeds
/// the policy tolerance.
pub fn lambda1_shift_cdf(k: i64, p: &ParamSet, trunc: &TruncationPolicy) -> Result<Truncated> {
    Ensemble::build(p, trunc)?
        .lambda1_shift_cdf(k)
        .check(trunc.float_tail_tol)
}

/// One row of the distribution comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistributionRow {
    pub n: i64,
    pub mu1_plus_chi: f64,
    pub lambda1: f64,
    pub qlaplace: f64,
    pub lambda1_plus_shift: f64,
    pub mu1_plus_chi_plus_shift: f64,
    /// `|P(μ₁+χ<=n) - P(λ₁<=n)|`.
    pub gap_first_row: f64,
    /// `|E[...] - P(λ₁+S<=n)|`.
    pub gap_shifted: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistributionReport {
    pub params: ParamSet,
    pub truncation: TruncationPolicy,
    pub qw_residual: f64,
    pub ps_residual: f64,
    pub rows: Vec<DistributionRow>,
    pub max_gap: f64,
    pub worst_n: Option<i64>,
}

/// Tabulates both sides of the first-row and shifted identities over `ns`.
pub fn compare_distributions(
    p: &ParamSet,
    trunc: &TruncationPolicy,
    ns: &[i64],
) -> Result<DistributionReport> {
    let ens = Ensemble::build(p, trunc)?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let a = ens.mu1_plus_chi_cdf(n).value;
        let b = ens.lambda1_cdf(n).value;
        let c = ens.qlaplace(p.with_k(n).zeta())?.value;
        let d = ens.lambda1_shift_cdf(n).value;
        let e = ens.mu1_chi_shift_cdf(n).value;
        rows.push(DistributionRow {
            n,
            mu1_plus_chi: a,
            lambda1: b,
            qlaplace: c,
            lambda1_plus_shift: d,
            mu1_plus_chi_plus_shift: e,
            gap_first_row: (a - b).abs(),
            gap_shifted: (c - d).abs(),
        });
    }
    let (max_gap, worst_n) = rows.iter().fold((0.0f64, None), |acc, r| {
        let g = r.gap_first_row.max(r.gap_shifted);
        if g > acc.0 {
            (g, Some(r.n))
        } else {
            acc
        }
    });
    Ok(DistributionReport {
        params: p.clone(),
        truncation: *trunc,
        qw_residual: ens.qw_residual,
        ps_residual: ens.ps_residual,
        rows,
        max_gap,
        worst_n,
    })
}

/// Both sides of the restricted Cauchy identity as exact truncated series.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityReport {
    pub n: usize,
    pub order: usize,
    pub lhs_coeffs: Vec<String>,
    pub rhs_coeffs: Vec<String>,
    pub equal: bool,
    pub first_mismatch: Option<usize>,
    /// `lhs - rhs` per coefficient.
    pub residuals: Vec<String>,
}

/// `Σ_{μ₁ <= n} P_μ(a) Q_μ(b) / (q;q)_{n-μ₁}` mod `q^{order+1}`.
pub fn restricted_qw_sum(n: usize, a: &[BigRational], b: &[BigRational], order: usize) -> QSeries {
    let ring = SeriesRing { order };
    let av: Vec<QSeries> = a.iter().map(|x| ring.constant(x.clone())).collect();
    let bv: Vec<QSeries> = b.iter().map(|x| ring.constant(x.clone())).collect();
    let mut pa = QWhittaker::new(&ring, &av);
    let mut qb = QWhittaker::new(&ring, &bv);
    let q = QSeries::var(order);
    let inv_fact: Vec<QSeries> = (0..=n)
        .map(|j| {
            QSeries::qpoch_n(&q, j as i64)
                .and_then(|s| s.inv())
                .expect("(q;q)_j is a unit")
        })
        .collect();
    let mut acc = QSeries::zero(order);
    for mu in enumerate(n, a.len().min(b.len())) {
        let pm = pa.p(&mu);
        if pm.is_zero() {
            continue;
        }
        let term = &(&pm * &qb.q_dual(&mu)) * &inv_fact[n - mu.first()];
        acc = &acc + &term;
    }
    acc
}

/// `Σ_{λ₁ <= n} Σ_{ρ ⊂ λ} q^{|ρ|} s_{λ/ρ}(a) s_{λ/ρ}(b)` mod `q^{order+1}`.
///
/// The coefficient of `q^m` only involves `|ρ| = m`. For fixed `ρ`, a row
/// of `λ` below `ℓ(ρ) + min(N, M)` would put more than `min(N, M)` boxes of
/// `λ/ρ` in its first column, killing one of the two skew Schur factors, so
/// `ℓ(λ) <= ℓ(ρ) + min(N, M)` makes each coefficient a finite sum.
pub fn restricted_skew_sum(
    n: usize,
    a: &[BigRational],
    b: &[BigRational],
    order: usize,
) -> QSeries {
    let ring = RationalRing {
        q: BigRational::zero(),
    };
    let nmin = a.len().min(b.len());
    let rhos = enumerate_by_weight(order, Some(n), None);
    let max_deg = n + order + nmin + 1;
    let ta = SchurTables::new(&ring, a, max_deg);
    let tb = SchurTables::new(&ring, b, max_deg);
    let parts: Vec<(usize, BigRational)> = par::map(&rhos, |rho| {
        let mut c = BigRational::zero();
        for lambda in superpartitions(rho, n, rho.len() + nmin) {
            if !column_bound_ok(&lambda, rho, nmin) {
                continue;
            }
            let sa = skew_schur_with(&ring, &lambda, rho, &ta);
            if sa.is_zero() {
                continue;
            }
            c += sa * skew_schur_with(&ring, &lambda, rho, &tb);
        }
        (rho.weight(), c)
    });
    let mut coeffs = vec![BigRational::zero(); order + 1];
    for (w, c) in parts {
        coeffs[w] += c;
    }
    QSeries::from_coeffs(coeffs, order)
}

/// Exact coefficientwise comparison of both sides at threshold `n`.
pub fn verify_restricted_cauchy(
    n: usize,
    a: &[BigRational],
    b: &[BigRational],
    order: usize,
) -> Result<IdentityReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("a and b must be nonempty"));
    }
    let lhs = restricted_qw_sum(n, a, b, order);
    let rhs = restricted_skew_sum(n, a, b, order);
    let diff = &lhs - &rhs;
    let first_mismatch = (0..=order).find(|&i| !diff.coeff(i).is_zero());
    let strs = |s: &QSeries| {
        s.coeffs()
            .iter()
            .map(rational_to_string)
            .collect::<Vec<_>>()
    };
    Ok(IdentityReport {
        n,
        order,
        lhs_coeffs: strs(&lhs),
        rhs_coeffs: strs(&rhs),
        equal: first_mismatch.is_none(),
        first_mismatch,
        residuals: strs(&diff),
    })
}
