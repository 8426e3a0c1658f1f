//! Scaling models for register fidelity, critical-coupling location and
//! temperature estimation.

mod critical;
mod fits;
mod pseudo_likelihood;

pub use critical::{
    coupling_to_temperature, locate_critical_coupling, CouplingSamples, CriticalPoint, CriticalRow,
};
pub use fits::{
    fit_alpha, fit_effective_temperature, fit_inverse_n_model, fit_n0_model, predict_global_fidelity,
};
pub use pseudo_likelihood::{pseudo_likelihood_beta, BETA_BRACKET_GHZ_INV, GOLDEN_TOLERANCE};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Measured fidelity of an `n_qubits` register.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n_qubits: usize,
    pub fidelity: f64,
    pub stderr: f64,
}

impl ScalingPoint {
    pub fn new(n_qubits: usize, fidelity: f64, stderr: f64) -> Self {
        ScalingPoint { n_qubits, fidelity, stderr }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `F = (1 − α)^N`
    PowerLawFn,
    /// `F = (1 + e^{−βΔE})^{−N}`
    EffectiveTemp,
    /// `f(N) = 1 − α̂/N`
    InverseN,
    /// `F = (1 − α)^{N/N₀}`
    N0Scaling,
    /// Inverse temperature from spin samples.
    PseudoLikelihood,
}

/// Fitted parameters with standard errors, keyed by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    pub params: BTreeMap<String, f64>,
    pub stderrs: BTreeMap<String, f64>,
    pub residual_norm: f64,
}

impl FitResult {
    fn new(model: FitModel, residual_norm: f64) -> Self {
        FitResult { model, params: BTreeMap::new(), stderrs: BTreeMap::new(), residual_norm }
    }

    fn with(mut self, name: &str, value: f64, stderr: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self.stderrs.insert(name.to_string(), stderr);
        self
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied()
    }

    pub fn stderr(&self, name: &str) -> Option<f64> {
        self.stderrs.get(name).copied()
    }

    /// Model prediction at register size `n` (global fidelity, or single-qubit
    /// fidelity for [`FitModel::InverseN`]).
    pub fn predict(&self, n: usize) -> Result<f64> {
        let get = |k: &str| {
            self.param(k)
                .ok_or_else(|| Error::invalid(format!("fit result lacks parameter `{k}`")))
        };
        let n = n as f64;
        Ok(match self.model {
            FitModel::PowerLawFn => (n * (-get("alpha")?).ln_1p()).exp(),
            FitModel::EffectiveTemp => (-n * (-get("x")?).exp().ln_1p()).exp(),
            FitModel::InverseN => 1.0 - get("alpha_hat")? / n,
            FitModel::N0Scaling => (n / get("n0")? * (-get("alpha")?).ln_1p()).exp(),
            FitModel::PseudoLikelihood => {
                return Err(Error::invalid("pseudo-likelihood fits have no size scaling"))
            }
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fit result serializes")
    }
}
