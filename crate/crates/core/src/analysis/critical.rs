//! Locating the ordering transition in a coupling sweep.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{square_lattice_critical_coupling, H_OVER_KB_MK_PER_GHZ};

/// Per-shot magnetizations `m = Σσ/N` measured at one coupling strength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingSamples {
    pub coupling: f64,
    pub magnetizations: Vec<f64>,
}

/// Order-parameter statistics at one coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalRow {
    pub coupling: f64,
    pub mean_abs_m: f64,
    /// `N (⟨m²⟩ − ⟨|m|⟩²)`
    pub susceptibility: f64,
    /// `1 − ⟨m⁴⟩ / (3⟨m²⟩²)`, zero when `⟨m²⟩ = 0`.
    pub binder: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub coupling: f64,
    pub uncertainty: f64,
    pub rows: Vec<CriticalRow>,
}

fn row(coupling: f64, ms: &[f64], n_spins: usize) -> CriticalRow {
    let k = ms.len() as f64;
    let abs = ms.iter().map(|m| m.abs()).sum::<f64>() / k;
    let m2 = ms.iter().map(|m| m * m).sum::<f64>() / k;
    let m4 = ms.iter().map(|m| m.powi(4)).sum::<f64>() / k;
    CriticalRow {
        coupling,
        mean_abs_m: abs,
        susceptibility: n_spins as f64 * (m2 - abs * abs).max(0.0),
        binder: if m2 > 0.0 { 1.0 - m4 / (3.0 * m2 * m2) } else { 0.0 },
    }
}

/// Coupling at the interior peak of the susceptibility, refined by a
/// parabola through the peak and its two neighbours.
///
/// The reported uncertainty is half the local grid spacing plus the shift
/// the parabola applied to the grid maximum.
pub fn locate_critical_coupling(curve: &[CouplingSamples], n_spins: usize) -> Result<CriticalPoint> {
    if curve.len() < 5 {
        return Err(Error::invalid(format!("need at least 5 couplings, got {}", curve.len())));
    }
    if n_spins == 0 {
        return Err(Error::invalid("n_spins must be >= 1"));
    }
    let mut sorted: Vec<&CouplingSamples> = curve.iter().collect();
    sorted.sort_by(|a, b| a.coupling.total_cmp(&b.coupling));
    for (i, c) in sorted.iter().enumerate() {
        if c.magnetizations.is_empty() {
            return Err(Error::invalid(format!("coupling {} has no samples", c.coupling)));
        }
        if i > 0 && c.coupling <= sorted[i - 1].coupling {
            return Err(Error::invalid(format!("coupling {} appears twice", c.coupling)));
        }
    }
    let rows: Vec<CriticalRow> = sorted.iter().map(|c| row(c.coupling, &c.magnetizations, n_spins)).collect();

    let chi: Vec<f64> = rows.iter().map(|r| r.susceptibility).collect();
    let peak = chi
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > chi[best] { i } else { best });
    let last = rows.len() - 1;
    if peak == 0 || peak == last || !(chi[peak] > chi[0] && chi[peak] > chi[last]) {
        return Err(Error::NoTransition(format!(
            "susceptibility has no interior maximum on [{}, {}]",
            rows[0].coupling, rows[last].coupling
        )));
    }

    let (x0, x1, x2) = (rows[peak - 1].coupling, rows[peak].coupling, rows[peak + 1].coupling);
    let (y0, y1, y2) = (chi[peak - 1], chi[peak], chi[peak + 1]);
    let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    let vertex = if den.abs() > 0.0 { (x1 - 0.5 * num / den).clamp(x0, x2) } else { x1 };
    let uncertainty = 0.25 * (x2 - x0) + (vertex - x1).abs();

    Ok(CriticalPoint { coupling: vertex, uncertainty, rows })
}

/// Temperature (mK) at which a square-lattice ferromagnet with coupling
/// energy `(b/2)·j_c` GHz sits at its critical point.
pub fn coupling_to_temperature(j_c: f64, b: f64) -> Result<f64> {
    if !(j_c > 0.0 && b > 0.0) {
        return Err(Error::invalid(format!("need j_c > 0 and b > 0, got {j_c}, {b}")));
    }
    Ok(H_OVER_KB_MK_PER_GHZ * 0.5 * b * j_c / square_lattice_critical_coupling())
}
