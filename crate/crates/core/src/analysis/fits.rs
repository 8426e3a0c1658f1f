//! Fidelity scaling fits.
//!
//! Every model is linear in one parameter after taking logs, so each fit is a
//! weighted least-squares slope through the origin. Weights are inverse
//! variances propagated to log space with the delta method,
//! `var(ln F) ≈ (σ_F / F)²`.

use super::{FitModel, FitResult, ScalingPoint};
use crate::error::{Error, Result};
use crate::units::H_OVER_KB_MK_PER_GHZ;

/// `f^n`, evaluated in log space.
pub fn predict_global_fidelity(f: f64, n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    if f <= 0.0 {
        return 0.0;
    }
    (n as f64 * f.ln()).exp()
}

struct Slope {
    slope: f64,
    stderr: f64,
    residual_norm: f64,
}

/// Least-squares `y = b·x` with per-point variances.
///
/// Points with zero variance would get infinite weight; they receive the
/// largest finite weight instead. When no point has a positive variance the
/// fit is unweighted and the slope error comes from the residual scatter.
fn origin_slope(xs: &[f64], ys: &[f64], vars: &[f64]) -> Result<Slope> {
    let max_w = vars
        .iter()
        .filter(|&&v| v > 0.0 && v.is_finite())
        .map(|v| 1.0 / v)
        .fold(f64::NAN, f64::max);
    let weighted = max_w.is_finite();
    let weights: Vec<f64> = vars
        .iter()
        .map(|&v| if !weighted { 1.0 } else if v > 0.0 && v.is_finite() { 1.0 / v } else { max_w })
        .collect();

    let sxx: f64 = xs.iter().zip(&weights).map(|(x, w)| w * x * x).sum();
    if sxx <= 0.0 {
        return Err(Error::Degenerate("regressor is identically zero".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).zip(&weights).map(|((x, y), w)| w * x * y).sum();
    let slope = sxy / sxx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x).powi(2)).sum();
    let stderr = if weighted {
        (1.0 / sxx).sqrt()
    } else if xs.len() > 1 {
        (rss / (xs.len() - 1) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    Ok(Slope { slope, stderr, residual_norm: rss.sqrt() })
}

fn log_fidelity_slope(points: &[ScalingPoint]) -> Result<Slope> {
    if points.is_empty() {
        return Err(Error::invalid("fit needs at least one scaling point"));
    }
    for (row, p) in points.iter().enumerate() {
        if !(p.fidelity > 0.0) {
            return Err(Error::Degenerate(format!(
                "row {row} (N = {}): fidelity {} has no logarithm",
                p.n_qubits, p.fidelity
            )));
        }
        if p.fidelity > 1.0 || p.stderr < 0.0 || p.n_qubits == 0 {
            return Err(Error::invalid(format!(
                "row {row}: need N >= 1, fidelity in (0, 1] and stderr >= 0"
            )));
        }
    }
    let xs: Vec<f64> = points.iter().map(|p| p.n_qubits as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.fidelity.ln()).collect();
    let vars: Vec<f64> = points.iter().map(|p| (p.stderr / p.fidelity).powi(2)).collect();
    let fit = origin_slope(&xs, &ys, &vars)?;
    if fit.slope >= 0.0 {
        return Err(Error::Degenerate(
            "fidelity does not decay with N (all points at F = 1?)".into(),
        ));
    }
    Ok(fit)
}

/// `α` in `F = (1 − α)^N`.
pub fn fit_alpha(points: &[ScalingPoint]) -> Result<FitResult> {
    let fit = log_fidelity_slope(points)?;
    let alpha = -fit.slope.exp_m1();
    Ok(FitResult::new(FitModel::PowerLawFn, fit.residual_norm).with(
        "alpha",
        alpha,
        fit.slope.exp() * fit.stderr,
    ))
}

/// `x = βΔE` in `F = (1 + e^{−x})^{−N}`, reported with `β` (GHz⁻¹) and the
/// temperature in mK for the given level splitting `delta_e` (GHz).
pub fn fit_effective_temperature(points: &[ScalingPoint], delta_e: f64) -> Result<FitResult> {
    if !(delta_e > 0.0 && delta_e.is_finite()) {
        return Err(Error::invalid(format!("delta_e must be positive, got {delta_e}")));
    }
    let fit = log_fidelity_slope(points)?;
    // slope = −ln(1 + e^{−x})  ⇒  x = −ln(e^{−slope} − 1)
    let em1 = (-fit.slope).exp_m1();
    let x = -em1.ln();
    let x_err = fit.stderr * (-fit.slope).exp() / em1;
    let beta = x / delta_e;
    let temperature = H_OVER_KB_MK_PER_GHZ / beta;
    Ok(FitResult::new(FitModel::EffectiveTemp, fit.residual_norm)
        .with("x", x, x_err)
        .with("beta", beta, x_err / delta_e)
        .with("temperature_mk", temperature, (temperature * x_err / x).abs())
        .with("delta_e", delta_e, 0.0))
}

/// `α̂` in the single-qubit law `f(N) = 1 − α̂/N`; `points` carry single-qubit
/// fidelities.
pub fn fit_inverse_n_model(points: &[ScalingPoint]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::invalid("inverse-N fit needs at least two points"));
    }
    if points.iter().any(|p| p.n_qubits == 0 || p.stderr < 0.0 || !(0.0..=1.0).contains(&p.fidelity)) {
        return Err(Error::invalid("need N >= 1, fidelity in [0, 1] and stderr >= 0"));
    }
    if points.iter().all(|p| p.n_qubits == points[0].n_qubits) {
        return Err(Error::Degenerate("all points have the same N".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| 1.0 / p.n_qubits as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| 1.0 - p.fidelity).collect();
    let vars: Vec<f64> = points.iter().map(|p| p.stderr * p.stderr).collect();
    let fit = origin_slope(&xs, &ys, &vars)?;
    Ok(FitResult::new(FitModel::InverseN, fit.residual_norm).with("alpha_hat", fit.slope, fit.stderr))
}

/// `N₀` in `F = (1 − α)^{N/N₀}` for a given per-qubit error `alpha`.
pub fn fit_n0_model(points: &[ScalingPoint], alpha: f64) -> Result<FitResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let fit = log_fidelity_slope(points)?;
    let log_f = (-alpha).ln_1p();
    let n0 = log_f / fit.slope;
    Ok(FitResult::new(FitModel::N0Scaling, fit.residual_norm)
        .with("n0", n0, (n0 * fit.stderr / fit.slope).abs())
        .with("alpha", alpha, 0.0))
}
