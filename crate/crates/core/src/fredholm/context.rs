use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ContourSpec, LContours};
use crate::error::{Error, Result};
use crate::measures::ParamSet;
use crate::par;
use crate::qseries::numeric::{
    product_cutoff, qpoch_inf, ramanujan_theta_ratio_unchecked, PRODUCT_TOL,
};

/// Numerical controls shared by all kernel evaluations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// `ε` of the conjugator `τ`.
    pub eps: f64,
    /// `ω` of the conjugator `σ`.
    pub omega: f64,
    /// Trapezoid nodes per circle.
    pub nodes: usize,
    /// Tail tolerance for the residue series of `K_∞`.
    pub tail_tol: f64,
    /// Largest pole index summed for `K_∞`.
    pub max_poles: usize,
    /// Fixed window `[lo, hi]`; chosen adaptively when absent.
    pub window: Option<(i64, i64)>,
    /// Adaptive windows stop where the per-index weight drops below this.
    pub window_tol: f64,
    /// `(r', r)` for the `L` contours; [`LContours::default_for`] when absent.
    pub l_radii: Option<(f64, f64)>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            eps: 0.25,
            omega: 0.1,
            nodes: 256,
            tail_tol: 1e-15,
            max_poles: 400,
            window: None,
            window_tol: 1e-17,
            l_radii: None,
        }
    }
}

/// `r = uN + k` with `k ∈ 1..=N`, `u >= 0`, and `ã_r = a_k q^u`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleIndex {
    pub r: usize,
    pub k: usize,
    pub u: usize,
    pub value: f64,
}

/// A nonzero complex number stored as `ln|v|` and `v/|v|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    pub ln_abs: f64,
    pub phase: Complex64,
}

impl LogComplex {
    pub fn zero() -> Self {
        LogComplex {
            ln_abs: f64::NEG_INFINITY,
            phase: Complex64::new(0.0, 0.0),
        }
    }

    /// `v · e^{log_scale}`.
    pub fn scaled(&self, log_scale: f64) -> Complex64 {
        if self.ln_abs == f64::NEG_INFINITY {
            return Complex64::new(0.0, 0.0);
        }
        self.phase * (self.ln_abs + log_scale).exp()
    }

    pub fn value(&self) -> Complex64 {
        self.scaled(0.0)
    }
}

/// Parameters, sorted `a`'s and cached scalars for kernel evaluation.
#[derive(Clone, Debug)]
pub struct Context {
    pub params: ParamSet,
    pub config: Config,
    n: usize,
    ln_q: f64,
    /// `t q^{1/2 + k}`.
    t_prime: f64,
    r_c: f64,
}

fn sum_ln_one_minus(c: Complex64, q: f64, min_terms: usize) -> Complex64 {
    let j = product_cutoff(c.norm(), q, PRODUCT_TOL).max(min_terms);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut x = c;
    for _ in 0..j {
        acc += (Complex64::new(1.0, 0.0) - x).ln();
        x *= q;
    }
    acc
}

/// `Σ_j ln(1 + c q^j)` for `c >= 0`.
fn ln_qpoch_neg(c: f64, q: f64) -> f64 {
    let j = product_cutoff(c, q, PRODUCT_TOL);
    let mut acc = 0.0;
    let mut x = c;
    for _ in 0..j {
        acc += x.ln_1p();
        x *= q;
    }
    acc
}

/// `Σ_j ln(1 - c q^j)` for `0 <= c < 1`.
fn ln_qpoch_pos(c: f64, q: f64) -> f64 {
    let j = product_cutoff(c, q, PRODUCT_TOL);
    let mut acc = 0.0;
    let mut x = c;
    for _ in 0..j {
        acc += (-x).ln_1p();
        x *= q;
    }
    acc
}

/// Log-space mean of `exp(terms)`, returned as a [`LogComplex`].
fn log_mean(terms: &[Complex64]) -> LogComplex {
    let m = terms
        .iter()
        .map(|t| t.re)
        .filter(|x| x.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return LogComplex::zero();
    }
    let s: Complex64 = terms
        .iter()
        .filter(|t| t.re.is_finite())
        .map(|t| (t - m).exp())
        .sum::<Complex64>()
        / terms.len() as f64;
    if s.norm() == 0.0 {
        return LogComplex::zero();
    }
    LogComplex {
        ln_abs: m + s.norm().ln(),
        phase: s / s.norm(),
    }
}

impl Context {
    /// Sorts the `a`'s decreasingly and checks the measure invariants,
    /// distinctness, and the ranges of `ε` and `ω`.
    pub fn new(params: &ParamSet, config: Config) -> Result<Self> {
        params.validate()?;
        let mut p = params.clone();
        p.a.sort_by(|x, y| y.partial_cmp(x).unwrap());
        if p.a.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("the a's must be distinct (simple poles)"));
        }
        if !(config.eps > 0.0 && config.eps < 0.5) {
            return Err(Error::invalid(format!(
                "eps must lie in (0, 1/2), got {}",
                config.eps
            )));
        }
        if !(config.omega > 0.0 && config.omega < 0.5 - config.eps) {
            return Err(Error::invalid(format!(
                "omega must lie in (0, 1/2 - eps), got {}",
                config.omega
            )));
        }
        if config.nodes < 8 {
            return Err(Error::invalid("at least 8 quadrature nodes required"));
        }
        if let Some((lo, hi)) = config.window {
            if lo > hi {
                return Err(Error::invalid(format!("empty window [{lo}, {hi}]")));
            }
        }
        if let Some((rz, rw)) = config.l_radii {
            LContours::new(rz, rw, config.nodes, &p)?;
        }
        let n = p.a.len();
        let ln_q = p.q.ln();
        let t_prime = p.t * p.q.powf(0.5 + p.k as f64);
        let r_c = (p.b_max() / p.a_max()).sqrt();
        Ok(Context {
            params: p,
            config,
            n,
            ln_q,
            t_prime,
            r_c,
        })
    }

    pub fn with_nodes(&self, nodes: usize) -> Self {
        let mut c = self.clone();
        c.config.nodes = nodes;
        c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> f64 {
        self.params.q
    }

    /// Radius of the default `z`-contour `C`.
    pub fn c_radius(&self) -> f64 {
        self.r_c
    }

    /// Fails unless `a_1 / a_N < q^{-1/2 + ε}`.
    pub fn require_contour_shift(&self) -> Result<()> {
        let p = &self.params;
        let ratio = p.a[0] / p.a[self.n - 1];
        let bound = p.q.powf(-0.5 + self.config.eps);
        if ratio >= bound {
            return Err(Error::invalid(format!(
                "a1/aN >= q^(-1/2+eps): {ratio} >= {bound}"
            )));
        }
        Ok(())
    }

    /// Fails unless `q a_max < a_min`.
    pub fn require_determinant_formula(&self) -> Result<()> {
        let p = &self.params;
        if p.q * p.a_max() >= p.a_min() {
            return Err(Error::invalid(format!(
                "q*a_max >= a_min: {} >= {}",
                p.q * p.a_max(),
                p.a_min()
            )));
        }
        Ok(())
    }

    pub fn pole(&self, r: usize) -> PoleIndex {
        assert!(r >= 1, "pole indices start at 1");
        let u = (r - 1) / self.n;
        let k = (r - 1) % self.n + 1;
        PoleIndex {
            r,
            k,
            u,
            value: self.params.a[k - 1] * self.params.q.powi(u as i32),
        }
    }

    fn ln_pole(&self, r: usize) -> f64 {
        let pi = self.pole(r);
        self.params.a[pi.k - 1].ln() + pi.u as f64 * self.ln_q
    }

    /// `ln|ρ_r|` and the sign of `ρ_r = Res_{w = 1/ã_r} ∏ (b_j/w;q)_∞ / ∏ (a_i w;q)_∞`.
    pub fn log_residue(&self, r: usize) -> (f64, f64) {
        let p = &self.params;
        let q = p.q;
        let pi = self.pole(r);
        let at = pi.value;
        let mut ln_abs = -at.ln();
        let mut sign = -1.0;
        for &b in &p.b {
            ln_abs += ln_qpoch_pos(b * at, q);
        }
        for (i, &a) in p.a.iter().enumerate() {
            let c = a / at;
            let terms = if i + 1 == pi.k {
                product_cutoff(c, q, PRODUCT_TOL).max(pi.u + 1)
            } else {
                product_cutoff(c, q, PRODUCT_TOL)
            };
            let mut x = c;
            for j in 0..terms {
                if !(i + 1 == pi.k && j == pi.u) {
                    let f = 1.0 - x;
                    ln_abs -= f.abs().ln();
                    if f < 0.0 {
                        sign = -sign;
                    }
                }
                x *= q;
            }
        }
        (ln_abs, sign)
    }

    pub fn residue(&self, r: usize) -> f64 {
        let (l, s) = self.log_residue(r);
        s * l.exp()
    }

    /// `ln f(m)` with `f(m) = t' q^m / (1 + t' q^m)`, `t' = t q^{1/2+k}`.
    pub fn log_fermi(&self, m: i64) -> f64 {
        let x = self.t_prime.ln() + m as f64 * self.ln_q;
        // -ln(1 + e^{-x})
        if x > 0.0 {
            -(-x).exp().ln_1p()
        } else {
            x - x.exp().ln_1p()
        }
    }

    pub fn fermi(&self, m: i64) -> f64 {
        self.log_fermi(m).exp()
    }

    /// `t' = t q^{1/2 + k}`.
    pub fn t_prime(&self) -> f64 {
        self.t_prime
    }

    /// `ln τ(m)`, `τ(m) = a_1^{-m} q^{-m²/(2N) - m/2 + εm}` for `m >= 0`, else 0.
    pub fn log_tau(&self, m: i64) -> f64 {
        if m < 0 {
            return 0.0;
        }
        let mf = m as f64;
        let e = -mf * mf / (2.0 * self.n as f64) - mf / 2.0 + self.config.eps * mf;
        -mf * self.params.a[0].ln() + e * self.ln_q
    }

    /// `(τ(m), σ(r))` with `σ(r) = q^{-(1-ω)u}` for `m >= 0` and `1` otherwise.
    /// `τ` may be infinite in `f64` for large `m`; kernels use [`Self::log_tau`].
    pub fn conjugators(&self, m: i64, r: usize) -> (f64, f64) {
        let tau = self.log_tau(m).exp();
        let sigma = if m >= 0 {
            self.params
                .q
                .powf(-(1.0 - self.config.omega) * self.pole(r).u as f64)
        } else {
            1.0
        };
        (tau, sigma)
    }

    /// `Φ(z) = ∏ (a_i z;q)_∞ / ∏ (b_j/z;q)_∞`.
    pub fn phi(&self, z: Complex64) -> Complex64 {
        let qc = Complex64::new(self.params.q, 0.0);
        let mut v = Complex64::new(1.0, 0.0);
        for &a in &self.params.a {
            v *= qpoch_inf(z * a, qc).unwrap();
        }
        for &b in &self.params.b {
            v /= qpoch_inf(b / z, qc).unwrap();
        }
        v
    }

    /// `R(w) = ∏ (b_j/w;q)_∞ / ∏ (a_i w;q)_∞`.
    pub fn r_fun(&self, w: Complex64) -> Complex64 {
        let qc = Complex64::new(self.params.q, 0.0);
        let mut v = Complex64::new(1.0, 0.0);
        for &b in &self.params.b {
            v *= qpoch_inf(b / w, qc).unwrap();
        }
        for &a in &self.params.a {
            v /= qpoch_inf(w * a, qc).unwrap();
        }
        v
    }

    /// `ln Φ(z)` as a sum of principal logs, with at least `min_terms`
    /// factors of each `(a_i z;q)_∞` so that any of them can be removed.
    fn log_phi(&self, z: Complex64, min_terms: usize) -> Complex64 {
        let q = self.params.q;
        let mut acc = Complex64::new(0.0, 0.0);
        for &a in &self.params.a {
            acc += sum_ln_one_minus(z * a, q, min_terms);
        }
        for &b in &self.params.b {
            acc -= sum_ln_one_minus(b / z, q, 0);
        }
        acc
    }

    fn ln_factor(&self, r: usize, z: Complex64) -> Complex64 {
        let pi = self.pole(r);
        let x = z * self.params.a[pi.k - 1] * self.params.q.powi(pi.u as i32);
        (Complex64::new(1.0, 0.0) - x).ln()
    }

    /// Contour radius used for `A(m; ·)`: the default `C` for `m < 0`, and
    /// for `m >= 0` the minimizer over `R >= |C|` of the majorant
    /// `R^{-m} ∏ (-a_i R;q)_∞ / ∏ (b_j/R;q)_∞` of the integrand.
    pub fn radius_for(&self, m: i64) -> f64 {
        if m < 0 {
            return self.r_c;
        }
        let p = &self.params;
        let q = p.q;
        let mf = m as f64;
        let h = |x: f64| {
            let rr = x.exp();
            let mut v = -mf * x;
            for &a in &p.a {
                v += ln_qpoch_neg(a * rr, q);
            }
            for &b in &p.b {
                v -= ln_qpoch_pos(b / rr, q);
            }
            v
        };
        let mut lo = self.r_c.ln();
        let mut hi = (1.0 / p.a_min()).ln() + (mf / self.n as f64 + 2.0) * (-self.ln_q);
        if hi <= lo {
            return self.r_c;
        }
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (h(x1), h(x2));
        for _ in 0..100 {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = h(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = h(x2);
            }
        }
        (0.5 * (lo + hi)).exp()
    }

    /// `A0(m; r) = ∮ dz z^{-m-1} Φ(z) / (z - 1/ã_r)` for `r = 1..=rmax`
    /// (the factor `f(m)` excluded), in log form. Uses
    /// `Φ(z)/(z - 1/ã_r) = -ã_r Φ(z)/(1 - ã_r z)`, which is analytic for
    /// `|z| > b_max`, so the radius is free and chosen by [`Self::radius_for`].
    pub fn a0_row(&self, m: i64, rmax: usize) -> Vec<LogComplex> {
        let mut radius = self.radius_for(m);
        for _attempt in 0..4 {
            if let Some(row) = self.a0_row_on(m, rmax, radius) {
                return row;
            }
            // A node hit a zero of Φ exactly; nudge the circle.
            radius *= 1.0 + 1e-7;
        }
        vec![LogComplex::zero(); rmax]
    }

    fn a0_row_on(&self, m: i64, rmax: usize, radius: f64) -> Option<Vec<LogComplex>> {
        let contour = ContourSpec::circle(radius, self.config.nodes);
        let umax = if rmax == 0 { 0 } else { self.pole(rmax).u };
        let pts: Vec<(Complex64, Complex64)> = (0..contour.points)
            .map(|p| {
                let z = contour.node(p);
                (z, self.log_phi(z, umax + 1) - z.ln() * m as f64)
            })
            .collect();
        let mut out = Vec::with_capacity(rmax);
        for r in 1..=rmax {
            let terms: Vec<Complex64> =
                pts.iter().map(|(z, l)| l - self.ln_factor(r, *z)).collect();
            if terms.iter().any(|t| t.re.is_nan()) {
                return None;
            }
            let mean = log_mean(&terms);
            out.push(LogComplex {
                ln_abs: mean.ln_abs + self.ln_pole(r),
                phase: -mean.phase,
            });
        }
        Some(out)
    }

    /// `A(m; r) = f(m) A0(m; r)`.
    pub fn matrix_a(&self, m: i64, r: usize) -> Complex64 {
        self.a0_row(m, r)[r - 1].scaled(self.log_fermi(m))
    }

    /// `A(m; r)` by plain trapezoid quadrature of the defining integrand on
    /// a fixed contour (no cancellation, no log scaling).
    pub fn matrix_a_on(&self, m: i64, r: usize, contour: &ContourSpec) -> Complex64 {
        let w = 1.0 / self.pole(r).value;
        let v = contour.mean(|z| z.powi(-(m as i32)) * self.phi(z) / (z - w));
        v * self.fermi(m)
    }

    /// `ln|B(r; m)|` and its sign, `B(r;m) = ã_r^{-m} ρ_r`.
    pub fn log_b(&self, r: usize, m: i64) -> (f64, f64) {
        let (l, s) = self.log_residue(r);
        (l - m as f64 * self.ln_pole(r), s)
    }

    pub fn matrix_b(&self, r: usize, m: i64) -> f64 {
        let (l, s) = self.log_b(r, m);
        s * l.exp()
    }

    /// `K_ℓ(m1, m2) = Σ_{r <= N(ℓ+1)} A0(m1; r) B(r; m2)`.
    pub fn kernel_k_ell(&self, m1: i64, m2: i64, ell: usize) -> Complex64 {
        let rmax = self.n * (ell + 1);
        let row = self.a0_row(m1, rmax);
        (1..=rmax)
            .map(|r| {
                let (lb, sb) = self.log_b(r, m2);
                row[r - 1].scaled(lb) * sb
            })
            .sum()
    }

    pub fn kernel_k(&self, m1: i64, m2: i64) -> Complex64 {
        self.kernel_k_ell(m1, m2, 0)
    }

    /// `K_∞(m1, m2)`: the residue series summed in blocks of `N` poles until
    /// the geometric majorant of the remaining blocks drops below
    /// `tail_tol · max(1, |partial sum|)`.
    pub fn kernel_k_inf(&self, m1: i64, m2: i64) -> Result<Complex64> {
        let ratio = self.params.q.powf(0.5 - self.config.eps);
        let mut rmax = self.n * 8;
        loop {
            let row = self.a0_row(m1, rmax);
            let mut sum = Complex64::new(0.0, 0.0);
            let mut block = 0.0f64;
            for r in 1..=rmax {
                let (lb, sb) = self.log_b(r, m2);
                let term = row[r - 1].scaled(lb) * sb;
                sum += term;
                if self.pole(r).u == (rmax - 1) / self.n {
                    block = block.max(term.norm());
                }
            }
            if block / (1.0 - ratio) <= self.config.tail_tol * sum.norm().max(1.0) {
                return Ok(sum);
            }
            if rmax >= self.config.max_poles {
                return Err(Error::TailBound(format!(
                    "K_inf({m1},{m2}) tail {block:e} after {rmax} poles"
                )));
            }
            rmax = (rmax * 2).min(self.config.max_poles);
        }
    }

    /// `K_ℓ(m1, m2)` by direct quadrature of
    /// `z^{-m1} Φ(z) Σ_r ã_r^{-m2} ρ_r / (z - 1/ã_r)` on a fixed circle,
    /// without factorizing through `A` and `B`.
    pub fn kernel_k_ell_quadrature(
        &self,
        m1: i64,
        m2: i64,
        ell: usize,
        contour: &ContourSpec,
    ) -> Complex64 {
        let rmax = self.n * (ell + 1);
        let coeffs: Vec<(f64, f64)> = (1..=rmax)
            .map(|r| (1.0 / self.pole(r).value, self.matrix_b(r, m2)))
            .collect();
        contour.mean(|z| {
            let s: Complex64 = coeffs.iter().map(|(w, c)| *c / (z - *w)).sum();
            z.powi(-(m1 as i32)) * self.phi(z) * s
        })
    }

    /// Contour pair for `L`: the configured radii, else the default pair.
    pub fn l_contours(&self) -> Result<LContours> {
        match self.config.l_radii {
            Some((rz, rw)) => LContours::new(rz, rw, self.config.nodes, &self.params),
            None => Ok(LContours::default_for(&self.params, self.config.nodes)),
        }
    }

    /// `L(m1, m2) = ∮ dz/z ∮ dw/w g(z, w; m1, m2)` by double trapezoid rule.
    pub fn kernel_l(&self, m1: i64, m2: i64, lc: &LContours) -> Complex64 {
        let zs: Vec<Complex64> = (0..lc.z.points).map(|p| lc.z.node(p)).collect();
        let ws: Vec<Complex64> = (0..lc.w.points).map(|p| lc.w.node(p)).collect();
        let wv: Vec<Complex64> = ws
            .iter()
            .map(|w| w.powi(m2 as i32) * self.r_fun(*w))
            .collect();
        let total: Complex64 = zs
            .iter()
            .map(|z| {
                let u = z.powi(-(m1 as i32)) * self.phi(*z);
                let inner: Complex64 = ws.iter().zip(&wv).map(|(w, v)| v * w / (z - w)).sum();
                u * inner
            })
            .sum();
        total / (zs.len() * ws.len()) as f64
    }

    /// `f(m1) L(m1, m2)` on `window × window` through the factorization
    /// `U · C · V` of the double trapezoid sum.
    pub fn l_block(&self, ms: &[i64], lc: &LContours) -> Vec<Vec<Complex64>> {
        let zs: Vec<Complex64> = (0..lc.z.points).map(|p| lc.z.node(p)).collect();
        let ws: Vec<Complex64> = (0..lc.w.points).map(|p| lc.w.node(p)).collect();
        let phis: Vec<Complex64> = zs.iter().map(|z| self.phi(*z)).collect();
        let rs: Vec<Complex64> = ws.iter().map(|w| self.r_fun(*w)).collect();
        let norm = (zs.len() * ws.len()) as f64;
        // (U C)(m1, q) = Σ_p z_p^{-m1} Φ(z_p) w_q / (z_p - w_q)
        let uc: Vec<Vec<Complex64>> = par::map(ms, |&m1| {
            let f = self.fermi(m1);
            let u: Vec<Complex64> = zs
                .iter()
                .zip(&phis)
                .map(|(z, ph)| z.powi(-(m1 as i32)) * ph * f)
                .collect();
            ws.iter()
                .map(|w| {
                    zs.iter()
                        .zip(&u)
                        .map(|(z, uz)| uz * w / (z - w))
                        .sum::<Complex64>()
                })
                .collect()
        });
        let v: Vec<Vec<Complex64>> = ms
            .iter()
            .map(|&m2| {
                ws.iter()
                    .zip(&rs)
                    .map(|(w, r)| w.powi(m2 as i32) * r)
                    .collect()
            })
            .collect();
        uc.iter()
            .map(|row| {
                v.iter()
                    .map(|col| row.iter().zip(col).map(|(a, b)| a * b).sum::<Complex64>() / norm)
                    .collect()
            })
            .collect()
    }

    /// Row `n` of the finite-rank matrix `W`, entries `n' = 1..=size`:
    /// `W_{n,n'} = -ρ_n ∮ dz/z Φ(z)/(z - 1/ã_{n'}) Θ_n(z)` on `|z| = radius`,
    /// `Θ_n(z) = θ(-ã_n z/t') (q;q)²_∞ / (θ(-1/t') θ(ã_n z))`.
    pub fn w_row(&self, n: usize, size: usize, radius: f64) -> Vec<Complex64> {
        let contour = ContourSpec::circle(radius, self.config.nodes);
        let umax = self.pole(size.max(n)).u;
        let an = self.pole(n).value;
        let tp = Complex64::new(self.t_prime, 0.0);
        let (lrho, srho) = self.log_residue(n);
        let pts: Vec<(Complex64, Complex64)> = (0..contour.points)
            .map(|p| {
                let z = contour.node(p);
                let theta = ramanujan_theta_ratio_unchecked(z * an, tp, self.params.q);
                (z, self.log_phi(z, umax + 1) + theta.ln())
            })
            .collect();
        (1..=size)
            .map(|np| {
                let terms: Vec<Complex64> = pts
                    .iter()
                    .map(|(z, l)| l - self.ln_factor(np, *z))
                    .collect();
                // -ρ_n · (-ã_{n'}) · mean(Φ_skip Θ)
                log_mean(&terms).scaled(lrho + self.ln_pole(np)) * srho
            })
            .collect()
    }

    /// The finite-rank matrix `W` of size `N(ℓ+1)` on the default circles
    /// `|z| = q^{-1/2}/ã_n`.
    pub fn w_matrix(&self, ell: usize) -> Vec<Vec<Complex64>> {
        let size = self.n * (ell + 1);
        let rows: Vec<usize> = (1..=size).collect();
        par::map(&rows, |&n| {
            let radius = self.params.q.powf(-0.5) / self.pole(n).value;
            self.w_row(n, size, radius)
        })
    }
}
