use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::context::{Context, LogComplex};
use crate::error::{Error, Result};
use crate::par;

/// Determinant by LU with partial pivoting.
pub fn det_complex(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let piv = (c..n)
            .max_by(|&i, &j| a[i][c].norm().partial_cmp(&a[j][c].norm()).unwrap())
            .unwrap();
        if a[piv][c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        let p = a[c][c];
        det *= p;
        for i in c + 1..n {
            let f = a[i][c] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for j in c..n {
                let v = a[c][j];
                a[i][j] -= f * v;
            }
        }
    }
    det
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    K,
    L,
    KEll(usize),
    KInf,
}

impl KernelKind {
    /// `-1` for `det(1 - fK)`, `+1` for `det(1 + fL)`.
    fn sign(self) -> f64 {
        match self {
            KernelKind::L => 1.0,
            _ => -1.0,
        }
    }
}

/// `f(m1) Kernel(m1, m2)` over `window × window`, optionally conjugated
/// by `τ`: `entries[i][j] = τ(m_i) f(m_i) Kernel(m_i, m_j) / τ(m_j)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelMatrix {
    pub kind: KernelKind,
    pub window: (i64, i64),
    pub entries: Vec<Vec<Complex64>>,
    /// `ln τ(m)` per row when conjugated.
    pub log_conjugator: Option<Vec<f64>>,
}

impl KernelMatrix {
    pub fn indices(&self) -> Vec<i64> {
        (self.window.0..=self.window.1).collect()
    }

    /// `det(I ∓ entries)`.
    pub fn fredholm_det(&self) -> Complex64 {
        let s = self.kind.sign();
        let n = self.entries.len();
        let m: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j { 1.0 } else { 0.0 };
                        Complex64::new(d, 0.0) + self.entries[i][j] * s
                    })
                    .collect()
            })
            .collect();
        det_complex(&m)
    }

    /// Undo the conjugation.
    pub fn unconjugated(&self) -> Vec<Vec<Complex64>> {
        match &self.log_conjugator {
            None => self.entries.clone(),
            Some(lt) => self
                .entries
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, v)| v * (lt[j] - lt[i]).exp())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }
}

/// A windowed determinant with its window-extension drift.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WindowDet {
    pub kind: KernelKind,
    pub window: (i64, i64),
    pub value: f64,
    pub imag: f64,
    /// `|det(extended window) - det(window)|`, the window extended by half
    /// its length on each side.
    pub drift: f64,
}

/// `det W` for the `N(ℓ+1) × N(ℓ+1)` matrix `W`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FiniteRank {
    pub ell: usize,
    pub size: usize,
    pub value: f64,
    pub imag: f64,
}

/// Largest `|m|` scanned when choosing a window.
const WINDOW_CAP: i64 = 400;

impl Context {
    fn pole_count(&self, kind: KernelKind) -> usize {
        match kind {
            KernelKind::K => self.n(),
            KernelKind::KEll(l) => self.n() * (l + 1),
            KernelKind::L | KernelKind::KInf => self.n() * 8,
        }
    }

    /// `ln max_{r, r'} |f(m) A0(m; r) B(r'; m)|`, which is invariant under
    /// conjugation by any diagonal weight.
    fn log_index_weight(&self, m: i64, rmax: usize) -> f64 {
        let row = self.a0_row(m, rmax);
        let la = row
            .iter()
            .map(|v| v.ln_abs)
            .fold(f64::NEG_INFINITY, f64::max);
        let lb = (1..=rmax)
            .map(|r| self.log_b(r, m).0)
            .fold(f64::NEG_INFINITY, f64::max);
        self.log_fermi(m) + la + lb
    }

    /// Smallest window outside which three consecutive index weights
    /// stay below `window_tol`, scanning outward from `0`, or the fixed
    /// window from the config.
    pub fn window(&self) -> Result<(i64, i64)> {
        if let Some(w) = self.config.window {
            return Ok(w);
        }
        let rmax = self.n() * 8;
        let tol = self.config.window_tol.ln();
        let scan = |dir: i64| -> Result<i64> {
            let mut m = if dir > 0 { 0 } else { -1 };
            let mut quiet = 0;
            let mut last_loud = m - dir;
            while m.abs() <= WINDOW_CAP {
                if self.log_index_weight(m, rmax) < tol {
                    quiet += 1;
                    if quiet == 3 {
                        return Ok(last_loud);
                    }
                } else {
                    quiet = 0;
                    last_loud = m;
                }
                m += dir;
            }
            Err(Error::TailBound(format!(
                "kernel weight still above {:e} at |m| = {WINDOW_CAP}",
                self.config.window_tol
            )))
        };
        let hi = scan(1)?.max(0);
        let lo = scan(-1)?.min(-1);
        Ok((lo, hi))
    }

    /// The window matrix of `kind`. `K`-type kernels are conjugated by `τ`
    /// and assembled from log-form `A` and `B`; `L` is left unconjugated.
    pub fn kernel_matrix(&self, kind: KernelKind, window: (i64, i64)) -> Result<KernelMatrix> {
        let ms: Vec<i64> = (window.0..=window.1).collect();
        let entries = match kind {
            KernelKind::L => {
                let lc = self.l_contours()?;
                self.l_block(&ms, &lc)
            }
            KernelKind::K | KernelKind::KEll(_) => {
                self.conjugated_block(&ms, self.pole_count(kind))
            }
            KernelKind::KInf => self.k_inf_block(&ms)?,
        };
        if entries.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "{kind:?} entries on window {window:?}"
            )));
        }
        let log_conjugator = match kind {
            KernelKind::L => None,
            _ => Some(ms.iter().map(|&m| self.log_tau(m)).collect()),
        };
        Ok(KernelMatrix {
            kind,
            window,
            entries,
            log_conjugator,
        })
    }

    fn scaled_a_rows(&self, ms: &[i64], rmax: usize) -> Vec<Vec<LogComplex>> {
        par::map(ms, |&m| self.a0_row(m, rmax))
    }

    /// `ln|B̃(r; m)|` and sign, `B̃(r; m) = B(r; m) / τ(m)`.
    fn log_b_tilde(&self, r: usize, m: i64) -> (f64, f64) {
        let (l, s) = self.log_b(r, m);
        (l - self.log_tau(m), s)
    }

    /// `Σ_{r <= rmax} Ã(m1; r) B̃(r; m2)` with `Ã = τ f A0`.
    fn conjugated_block(&self, ms: &[i64], rmax: usize) -> Vec<Vec<Complex64>> {
        let rows = self.scaled_a_rows(ms, rmax);
        self.contract(ms, &rows, 1, rmax)
    }

    fn contract(
        &self,
        ms: &[i64],
        rows: &[Vec<LogComplex>],
        r0: usize,
        r1: usize,
    ) -> Vec<Vec<Complex64>> {
        let bt: Vec<Vec<(f64, f64)>> = ms
            .iter()
            .map(|&m2| (r0..=r1).map(|r| self.log_b_tilde(r, m2)).collect())
            .collect();
        ms.iter()
            .zip(rows)
            .map(|(&m1, row)| {
                let la = self.log_tau(m1) + self.log_fermi(m1);
                bt.iter()
                    .map(|col| {
                        (r0..=r1)
                            .zip(col)
                            .map(|(r, (lb, sb))| row[r - 1].scaled(la + lb) * *sb)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// `K_∞` on the window: pole blocks are added until the largest
    /// conjugated entry of the last block, times `1/(1 - q^{1/2-ε})`,
    /// drops below `tail_tol`.
    fn k_inf_block(&self, ms: &[i64]) -> Result<Vec<Vec<Complex64>>> {
        let ratio = self.q().powf(0.5 - self.config.eps);
        let n = self.n();
        let mut rmax = n * 8;
        loop {
            let rows = self.scaled_a_rows(ms, rmax);
            let last = self.contract(ms, &rows, rmax - n + 1, rmax);
            let block = last.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
            if block / (1.0 - ratio) < self.config.tail_tol {
                return Ok(self.contract(ms, &rows, 1, rmax));
            }
            if rmax >= self.config.max_poles {
                return Err(Error::TailBound(format!(
                    "K_inf residue tail {block:e} after {rmax} poles exceeds {:e}",
                    self.config.tail_tol
                )));
            }
            rmax = (rmax * 2).min(self.config.max_poles);
        }
    }

    /// `det(1 ∓ f Kernel)` on `window` (or the adaptive window) with the
    /// drift against the window extended by half its length on each side.
    pub fn fredholm_det_window(
        &self,
        kind: KernelKind,
        window: Option<(i64, i64)>,
    ) -> Result<WindowDet> {
        let w = match window {
            Some(w) => w,
            None => self.window()?,
        };
        let half = ((w.1 - w.0 + 1) / 2).max(1);
        let ext = (w.0 - half, w.1 + half);
        let d = self.kernel_matrix(kind, w)?.fredholm_det();
        let d_ext = self.kernel_matrix(kind, ext)?.fredholm_det();
        if !d.is_finite() || !d_ext.is_finite() {
            return Err(Error::NonFinite(format!("{kind:?} determinant on {w:?}")));
        }
        Ok(WindowDet {
            kind,
            window: w,
            value: d.re,
            imag: d.im,
            drift: (d_ext - d).norm(),
        })
    }

    /// `F_ℓ = det W` with `W` the finite-rank matrix of size `N(ℓ+1)`.
    pub fn fredholm_det_finite_rank(&self, ell: usize) -> Result<FiniteRank> {
        let w = self.w_matrix(ell);
        if w.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!(
                "finite-rank matrix at ell = {ell}"
            )));
        }
        let d = det_complex(&w);
        Ok(FiniteRank {
            ell,
            size: w.len(),
            value: d.re,
            imag: d.im,
        })
    }

    /// Largest conjugated entry gap `sup |τ f (K_ℓ - K_∞) τ⁻¹|` on `window`.
    pub fn kernel_gap(&self, ell: usize, window: (i64, i64)) -> Result<f64> {
        let a = self.kernel_matrix(KernelKind::KEll(ell), window)?;
        let b = self.kernel_matrix(KernelKind::KInf, window)?;
        Ok(a.entries
            .iter()
            .flatten()
            .zip(b.entries.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }
}
