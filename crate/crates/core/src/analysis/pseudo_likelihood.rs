//! Inverse temperature from classical spin samples.
//!
//! For a classical Ising energy the conditional law of one spin given the
//! rest is `P(σ_i | σ_¬i) = 1 / (1 + e^{2βσ_i h_i})`, with `h_i` the local
//! field. The pseudo-log-likelihood `ℓ(β) = Σ_shots Σ_i ln P(σ_i | σ_¬i)` is
//! concave in `β`, so a bracketing golden-section search finds its maximum.

use crate::dynamics::{local_field, ShotSet};
use crate::error::{Error, Result};
use crate::schedule::{HamiltonianParams, CLASSICAL_TOLERANCE_GHZ};
use crate::topology::Topology;
use crate::units::H_OVER_KB_MK_PER_GHZ;

use super::{FitModel, FitResult};

/// Initial search bracket for `β` (GHz⁻¹).
pub const BETA_BRACKET_GHZ_INV: (f64, f64) = (0.0, 100.0);
pub const GOLDEN_TOLERANCE: f64 = 1e-6;
const MAX_BETA: f64 = 1e6;
const MIN_SAMPLES: usize = 100;

/// `a = −2σh`, so each spin contributes `ln σ(aβ)` to `ℓ(β)`.
struct Terms(Vec<(f64, f64)>);

impl Terms {
    fn new(samples: &ShotSet, topo: &Topology, params: &HamiltonianParams) -> Self {
        let mut counts: std::collections::BTreeMap<u64, (f64, f64)> = Default::default();
        for shot in samples.shots() {
            let spins = shot.spins();
            for (i, &s) in spins.iter().enumerate() {
                let a = -2.0 * s as f64 * local_field(spins, topo, i, params.bz, params.jz);
                counts.entry(a.to_bits()).or_insert((a, 0.0)).1 += 1.0;
            }
        }
        Terms(counts.into_values().collect())
    }

    fn value(&self, beta: f64) -> f64 {
        // ln σ(x) = −ln(1 + e^{−x})
        self.0
            .iter()
            .map(|&(a, c)| {
                let x = a * beta;
                let ln_sig = if x >= 0.0 { -(-x).exp().ln_1p() } else { x - x.exp().ln_1p() };
                c * ln_sig
            })
            .sum()
    }

    fn slope(&self, beta: f64) -> f64 {
        self.0.iter().map(|&(a, c)| c * a * logistic(-a * beta)).sum()
    }

    fn curvature(&self, beta: f64) -> f64 {
        -self
            .0
            .iter()
            .map(|&(a, c)| {
                let p = logistic(a * beta);
                c * a * a * p * (1.0 - p)
            })
            .sum::<f64>()
    }
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > tol * (1.0 + c.abs()) {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - r * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + r * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Maximum pseudo-likelihood `β` (GHz⁻¹) for samples of the classical
/// Hamiltonian `params` (which must have no transverse field).
///
/// The result carries `beta` and the equivalent `temperature_mk`, with
/// standard errors from the curvature of `ℓ`. Samples that are perfectly
/// explained at any `β` (for example all spins aligned with their fields)
/// make `ℓ` increase without bound and yield [`Error::UnboundedEstimate`].
pub fn pseudo_likelihood_beta(
    samples: &ShotSet,
    topo: &Topology,
    params: &HamiltonianParams,
) -> Result<FitResult> {
    if samples.len() < MIN_SAMPLES {
        return Err(Error::invalid(format!(
            "need at least {MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    if samples.n_qubits() != topo.n() {
        return Err(Error::invalid(format!(
            "samples have {} spins, topology has {}",
            samples.n_qubits(),
            topo.n()
        )));
    }
    if params.bx.abs() > CLASSICAL_TOLERANCE_GHZ {
        return Err(Error::EngineMismatch(
            "pseudo-likelihood needs a classical Hamiltonian (bx = 0)".into(),
        ));
    }
    let terms = Terms::new(samples, topo, params);
    if terms.0.iter().all(|&(a, _)| a == 0.0) {
        return Err(Error::Degenerate("every spin sees zero local field".into()));
    }
    // ℓ is bounded above only if some spin opposes its local field.
    if terms.0.iter().all(|&(a, _)| a >= 0.0) {
        return Err(Error::UnboundedEstimate(
            "every spin is aligned with its local field; beta diverges".into(),
        ));
    }

    let (lo, mut hi) = BETA_BRACKET_GHZ_INV;
    let beta = if terms.slope(lo) <= 0.0 {
        lo
    } else {
        while terms.slope(hi) > 0.0 {
            hi *= 2.0;
            if hi > MAX_BETA {
                return Err(Error::UnboundedEstimate(
                    "pseudo-likelihood increases without bound in beta".into(),
                ));
            }
        }
        golden_max(|b| terms.value(b), lo, hi, GOLDEN_TOLERANCE)
    };

    let info = -terms.curvature(beta);
    let beta_err = if info > 0.0 { info.sqrt().recip() } else { f64::INFINITY };
    let temperature = if beta > 0.0 { H_OVER_KB_MK_PER_GHZ / beta } else { f64::INFINITY };
    let mut fit = FitResult::new(FitModel::PseudoLikelihood, 0.0)
        .with("beta", beta, beta_err)
        .with("temperature_mk", temperature, temperature * beta_err / beta);
    fit.residual_norm = -terms.value(beta);
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::SpinConfiguration;
    use crate::topology::build_individual;

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let x = golden_max(|x| -(x - 3.7).powi(2), 0.0, 10.0, 1e-9);
        assert!((x - 3.7).abs() < 1e-7);
    }

    #[test]
    fn aligned_samples_are_unbounded() {
        let topo = build_individual(4).unwrap();
        let shots = ShotSet::from_configurations(vec![SpinConfiguration::all_zero(4); 200]).unwrap();
        let params = HamiltonianParams::new(0.0, 1.0, 0.0);
        assert!(matches!(
            pseudo_likelihood_beta(&shots, &topo, &params),
            Err(Error::UnboundedEstimate(_))
        ));
    }

    #[test]
    fn free_spins_match_closed_form() {
        // With only a field, ℓ is maximised where tanh(βh) equals the observed
        // bias toward the field.
        let topo = build_individual(1).unwrap();
        let mut shots = vec![SpinConfiguration::all_zero(1); 150];
        shots.extend(vec![SpinConfiguration::uniform(1, 1); 50]);
        let shots = ShotSet::from_configurations(shots).unwrap();
        let h = 0.5;
        let fit = pseudo_likelihood_beta(&shots, &topo, &HamiltonianParams::new(0.0, h, 0.0)).unwrap();
        let expected = 0.5f64.atanh() / h;
        assert!((fit.param("beta").unwrap() - expected).abs() < 1e-5);
    }

    #[test]
    fn needs_enough_samples_and_no_transverse_field() {
        let topo = build_individual(2).unwrap();
        let few = ShotSet::from_configurations(vec![SpinConfiguration::all_zero(2); 10]).unwrap();
        assert!(pseudo_likelihood_beta(&few, &topo, &HamiltonianParams::new(0.0, 1.0, 0.0)).is_err());
        let many = ShotSet::from_configurations(vec![SpinConfiguration::all_zero(2); 100]).unwrap();
        assert!(pseudo_likelihood_beta(&many, &topo, &HamiltonianParams::new(0.5, 1.0, 0.0)).is_err());
    }
}
