use serde::{Deserialize, Serialize};

use super::context::{Config, Context};
use super::det::{FiniteRank, KernelKind, WindowDet};
use crate::error::Result;
use crate::measures::{Hypotheses, ParamSet};

/// One row of the `F_ℓ → F_∞` table.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub ell: usize,
    pub f_ell: f64,
    pub gap_to_f_inf: f64,
    /// `sup |τ f (K_ℓ - K_∞) τ⁻¹|` on the window.
    pub kernel_gap: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Gaps {
    pub k_vs_l: f64,
    pub k_vs_rank0: f64,
    pub k_vs_k_inf: f64,
    pub k_inf_vs_l: f64,
    /// `max_ℓ |F_ℓ - F_0|` over the finite-rank values.
    pub rank_spread: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FredholmReport {
    pub params: ParamSet,
    pub hypotheses: Hypotheses,
    pub config: Config,
    pub window: (i64, i64),
    #[serde(rename = "F_window_K")]
    pub f_window_k: WindowDet,
    #[serde(rename = "F_rank")]
    pub f_rank: Vec<FiniteRank>,
    #[serde(rename = "F_K_inf")]
    pub f_k_inf: WindowDet,
    #[serde(rename = "F_L")]
    pub f_l: WindowDet,
    pub gaps: Gaps,
    pub convergence: Vec<ConvergenceRow>,
    pub tol: f64,
    pub pass: bool,
}

/// `det(1 - fK)` on a window, by finite rank for `ℓ = 0..=ell_max`, and with
/// `K_∞`, against `det(1 + fL)`. Passes when every pairwise gap and every
/// window drift is below `tol`.
pub fn verify_fredholm_identity(
    p: &ParamSet,
    config: Config,
    ell_max: usize,
    tol: f64,
) -> Result<FredholmReport> {
    let ctx = Context::new(p, config)?;
    ctx.require_determinant_formula()?;
    ctx.require_contour_shift()?;
    let window = ctx.window()?;
    let f_window_k = ctx.fredholm_det_window(KernelKind::K, Some(window))?;
    let f_k_inf = ctx.fredholm_det_window(KernelKind::KInf, Some(window))?;
    let f_l = ctx.fredholm_det_window(KernelKind::L, Some(window))?;
    let f_rank = (0..=ell_max)
        .map(|l| ctx.fredholm_det_finite_rank(l))
        .collect::<Result<Vec<_>>>()?;
    let convergence = f_rank
        .iter()
        .map(|fr| {
            Ok(ConvergenceRow {
                ell: fr.ell,
                f_ell: fr.value,
                gap_to_f_inf: (fr.value - f_k_inf.value).abs(),
                kernel_gap: ctx.kernel_gap(fr.ell, window)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gaps = Gaps {
        k_vs_l: (f_window_k.value - f_l.value).abs(),
        k_vs_rank0: (f_window_k.value - f_rank[0].value).abs(),
        k_vs_k_inf: (f_window_k.value - f_k_inf.value).abs(),
        k_inf_vs_l: (f_k_inf.value - f_l.value).abs(),
        rank_spread: f_rank
            .iter()
            .map(|fr| (fr.value - f_rank[0].value).abs())
            .fold(0.0, f64::max),
    };
    let pass = [
        gaps.k_vs_l,
        gaps.k_vs_rank0,
        gaps.k_vs_k_inf,
        gaps.k_inf_vs_l,
        gaps.rank_spread,
        f_window_k.drift,
        f_k_inf.drift,
        f_l.drift,
    ]
    .iter()
    .all(|g| *g < tol);
    Ok(FredholmReport {
        params: ctx.params.clone(),
        hypotheses: ctx.params.hypotheses(config.eps),
        config,
        window,
        f_window_k,
        f_rank,
        f_k_inf,
        f_l,
        gaps,
        convergence,
        tol,
        pass,
    })
}
