//! Kernels `K`, `K_ℓ`, `K_∞`, `L` on `ℓ²(ℤ)`, their factorization through
//! the matrices `A` and `B`, and finite-section / finite-rank evaluation of
//! the Fredholm determinants `det(1 - fK)` and `det(1 + fL)`.
//!
//! Contour integrals omit the factor `1/(2πi)` throughout, so
//! `∮ dz/z F(z)` on a circle is the mean of `F` over the circle and is
//! evaluated with the trapezoid rule.

mod context;
mod det;
mod verify;

pub use context::{Config, Context, LogComplex, PoleIndex};
pub use det::{det_complex, FiniteRank, KernelKind, KernelMatrix, WindowDet};
pub use verify::{verify_fredholm_identity, ConvergenceRow, FredholmReport, Gaps};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::ParamSet;
use crate::qseries::numeric::qpoch_inf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Counterclockwise,
    Clockwise,
}

/// A circle with trapezoid nodes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub center: Complex64,
    pub radius: f64,
    pub orientation: Orientation,
    pub points: usize,
}

impl ContourSpec {
    pub fn circle(radius: f64, points: usize) -> Self {
        ContourSpec {
            center: Complex64::new(0.0, 0.0),
            radius,
            orientation: Orientation::Counterclockwise,
            points,
        }
    }

    /// Node `p` of `points` equally spaced nodes.
    pub fn node(&self, p: usize) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * p as f64 / self.points as f64;
        let s = match self.orientation {
            Orientation::Counterclockwise => 1.0,
            Orientation::Clockwise => -1.0,
        };
        self.center + Complex64::from_polar(self.radius, s * theta)
    }

    /// `∮ F(z) dz / z` (without `1/(2πi)`) for contours centred at 0.
    pub fn mean<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Complex64 {
        let s = match self.orientation {
            Orientation::Counterclockwise => 1.0,
            Orientation::Clockwise => -1.0,
        };
        let sum: Complex64 = (0..self.points).map(|p| f(self.node(p))).sum();
        sum * s / self.points as f64
    }

    /// The `z`-contour `C`: origin-centred, `b_max < radius < 1/a_max`.
    pub fn validate_c(&self, p: &ParamSet) -> Result<()> {
        if self.center.norm() != 0.0 {
            return Err(Error::invalid("contour C must be centred at the origin"));
        }
        if !(p.b_max() < self.radius && self.radius < 1.0 / p.a_max()) {
            return Err(Error::invalid(format!(
                "contour radius must satisfy b_max < r < 1/a_max, got b_max = {}, r = {}, 1/a_max = {}",
                p.b_max(),
                self.radius,
                1.0 / p.a_max()
            )));
        }
        if self.points < 2 {
            return Err(Error::invalid("contour needs at least 2 quadrature points"));
        }
        Ok(())
    }

    /// Default `C`: the geometric midpoint `sqrt(b_max / a_max)`.
    pub fn default_c(p: &ParamSet, points: usize) -> Self {
        ContourSpec::circle((p.b_max() / p.a_max()).sqrt(), points)
    }
}

/// The pair `(|z| = r', |w| = r)` used by `L`. Both radii lie in
/// `(b_max, 1/a_max)` and `1 < r/r' < 1/q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LContours {
    pub z: ContourSpec,
    pub w: ContourSpec,
}

impl LContours {
    pub fn new(z_radius: f64, w_radius: f64, points: usize, p: &ParamSet) -> Result<Self> {
        let out = LContours {
            z: ContourSpec::circle(z_radius, points),
            w: ContourSpec::circle(w_radius, points),
        };
        out.validate(p)?;
        Ok(out)
    }

    /// Places both circles symmetrically (in log scale) about the
    /// geometric midpoint of `(b_max, 1/a_max)`, with ratio
    /// `min(q^{-1/2}, sqrt(1/(a_max b_max)))`.
    pub fn default_for(p: &ParamSet, points: usize) -> Self {
        let lo = p.b_max();
        let hi = 1.0 / p.a_max();
        let mid = (lo * hi).sqrt();
        let ratio = p.q.powf(-0.5).min((hi / lo).sqrt());
        LContours {
            z: ContourSpec::circle(mid / ratio.sqrt(), points),
            w: ContourSpec::circle(mid * ratio.sqrt(), points),
        }
    }

    pub fn validate(&self, p: &ParamSet) -> Result<()> {
        let (rz, rw) = (self.z.radius, self.w.radius);
        for r in [rz, rw] {
            if !(p.b_max() < r && r < 1.0 / p.a_max()) {
                return Err(Error::invalid(format!(
                    "L radii must satisfy b_max < r', r < 1/a_max, got {r}"
                )));
            }
        }
        let ratio = rw / rz;
        if !(1.0 < ratio && ratio < 1.0 / p.q) {
            return Err(Error::invalid(format!(
                "L radii must satisfy 1 < r/r' < 1/q, got r/r' = {ratio}, 1/q = {}",
                1.0 / p.q
            )));
        }
        Ok(())
    }
}

/// `f_ζ(m) = -ζ q^m / (1 - ζ q^m)`.
pub fn f_zeta(m: i64, zeta: Complex64, q: f64) -> Result<Complex64> {
    let x = zeta * q.powi(m as i32);
    let d = Complex64::new(1.0, 0.0) - x;
    if d.norm() <= 1e-300 || d.norm() < 1e-14 * x.norm() {
        return Err(Error::Pole(format!("ζ q^m = 1 at m = {m}")));
    }
    Ok(-x / d)
}

/// The integrand
/// `w^{m2}/z^{m1} · w/(z - w) · ∏ (a_i z;q)_∞/(a_i w;q)_∞ · ∏ (b_j/w;q)_∞/(b_j/z;q)_∞`.
pub fn g_ab(z: Complex64, w: Complex64, m1: i64, m2: i64, p: &ParamSet) -> Result<Complex64> {
    if (z - w).norm() == 0.0 {
        return Err(Error::Pole("g_ab requires z != w".into()));
    }
    let qc = Complex64::new(p.q, 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    for &a in &p.a {
        prod *= qpoch_inf(z * a, qc)? / qpoch_inf(w * a, qc)?;
    }
    for &b in &p.b {
        prod *= qpoch_inf(b / w, qc)? / qpoch_inf(b / z, qc)?;
    }
    let v = w.powi(m2 as i32) / z.powi(m1 as i32) * w / (z - w) * prod;
    if !v.is_finite() {
        return Err(Error::NonFinite(format!("g_ab at z = {z}, w = {w}")));
    }
    Ok(v)
}
