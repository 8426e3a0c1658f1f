//! Thermal dynamics of the register.
//!
//! Two Monte Carlo engines share one energy convention (see
//! [`crate::schedule`]): single-spin-flip Metropolis for classical protocols
//! and path-integral (Suzuki–Trotter) Metropolis for protocols with a
//! transverse field. A dense exact Gibbs-state oracle validates both on small
//! systems.

mod classical;
mod oracle;
mod pimc;
mod protocol;
mod shots;

pub use classical::{classical_sweep, local_field};
pub use oracle::{exact_thermal_oracle, ThermalState, ORACLE_MAX_SPINS};
pub use pimc::{effective_trotter_slices, pimc_sweep, PimcConfiguration};
pub use protocol::{
    equilibrate, equilibrate_with, run_protocol, run_protocol_with, EquilibrationPlan, Engine,
};
pub use shots::{ShotMetadata, ShotSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Spin value read out as the computational `|0⟩` state.
pub const ZERO_SPIN: i8 = -1;

/// `N` spins with values in `{−1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfiguration(Vec<i8>);

impl SpinConfiguration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.is_empty() {
            return Err(Error::invalid("spin configuration must not be empty"));
        }
        if let Some(p) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::invalid(format!("spin {p} is {}, expected ±1", spins[p])));
        }
        Ok(SpinConfiguration(spins))
    }

    /// Every qubit in `|0⟩`.
    pub fn all_zero(n: usize) -> Self {
        SpinConfiguration(vec![ZERO_SPIN; n])
    }

    pub fn uniform(n: usize, spin: i8) -> Self {
        assert!(spin == 1 || spin == -1);
        SpinConfiguration(vec![spin; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub(crate) fn spins_mut(&mut self) -> &mut [i8] {
        &mut self.0
    }

    pub fn magnetization(&self) -> f64 {
        self.0.iter().map(|&s| s as i64).sum::<i64>() as f64 / self.0.len() as f64
    }

    /// Readout string, `'0'` for `|0⟩` and `'1'` for `|1⟩`.
    pub fn to_bits(&self) -> String {
        self.0.iter().map(|&s| if s == ZERO_SPIN { '0' } else { '1' }).collect()
    }

    pub fn from_bits(bits: &str) -> Result<Self> {
        let spins = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(ZERO_SPIN),
                '1' => Ok(-ZERO_SPIN),
                other => Err(Error::invalid(format!("readout character `{other}` is not 0/1"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        SpinConfiguration::new(spins)
    }

    /// Basis-state index with bit `i` set when spin `i` is `+1`.
    pub fn state_index(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 1)
            .fold(0usize, |acc, (i, _)| acc | (1 << i))
    }

    pub fn from_state_index(n: usize, index: usize) -> Self {
        SpinConfiguration((0..n).map(|i| if index >> i & 1 == 1 { 1 } else { -1 }).collect())
    }

    /// Same configuration with every spin reversed.
    pub fn flipped(&self) -> Self {
        SpinConfiguration(self.0.iter().map(|&s| -s).collect())
    }
}

/// Independent fair ±1 spins.
pub fn random_initial_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<SpinConfiguration> {
    if n == 0 {
        return Err(Error::invalid("register needs at least one spin"));
    }
    Ok(SpinConfiguration((0..n).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect()))
}

/// Environment the register is immersed in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathParameters {
    pub temperature_mk: f64,
    /// Monte Carlo sweeps per microsecond of protocol time.
    #[serde(default = "BathParameters::default_sweeps_per_us")]
    pub sweeps_per_microsecond: f64,
    #[serde(default = "BathParameters::default_trotter_slices")]
    pub trotter_slices: usize,
}

impl BathParameters {
    pub const DEFAULT_SWEEPS_PER_US: f64 = 100.0;
    pub const DEFAULT_TROTTER_SLICES: usize = 32;

    fn default_sweeps_per_us() -> f64 {
        Self::DEFAULT_SWEEPS_PER_US
    }

    fn default_trotter_slices() -> usize {
        Self::DEFAULT_TROTTER_SLICES
    }

    pub fn new(temperature_mk: f64) -> Self {
        BathParameters {
            temperature_mk,
            sweeps_per_microsecond: Self::DEFAULT_SWEEPS_PER_US,
            trotter_slices: Self::DEFAULT_TROTTER_SLICES,
        }
    }

    pub fn with_sweeps_per_microsecond(mut self, rate: f64) -> Self {
        self.sweeps_per_microsecond = rate;
        self
    }

    pub fn with_trotter_slices(mut self, slices: usize) -> Self {
        self.trotter_slices = slices;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature_mk > 0.0 && self.temperature_mk.is_finite()) {
            return Err(Error::invalid(format!(
                "temperature_mk must be positive, got {}",
                self.temperature_mk
            )));
        }
        if !(self.sweeps_per_microsecond > 0.0 && self.sweeps_per_microsecond.is_finite()) {
            return Err(Error::invalid(format!(
                "sweeps_per_microsecond must be positive, got {}",
                self.sweeps_per_microsecond
            )));
        }
        if self.trotter_slices < 2 || !self.trotter_slices.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "trotter_slices must be even and >= 2, got {}",
                self.trotter_slices
            )));
        }
        Ok(())
    }

    pub fn beta(&self) -> f64 {
        crate::units::beta_from_mk(self.temperature_mk)
    }
}

pub(crate) fn check_temperature(temperature_mk: f64) -> Result<f64> {
    if !(temperature_mk > 0.0 && temperature_mk.is_finite()) {
        return Err(Error::invalid(format!("temperature must be positive, got {temperature_mk} mK")));
    }
    Ok(crate::units::beta_from_mk(temperature_mk))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;

    #[test]
    fn bits_round_trip_and_convention() {
        let c = SpinConfiguration::new(vec![-1, 1, -1]).unwrap();
        assert_eq!(c.to_bits(), "010");
        assert_eq!(SpinConfiguration::from_bits("010").unwrap(), c);
        assert_eq!(SpinConfiguration::all_zero(3).to_bits(), "000");
        assert!(SpinConfiguration::from_bits("012").is_err());
        assert!(SpinConfiguration::new(vec![0, 1]).is_err());
        assert_eq!(c.state_index(), 0b010);
        assert_eq!(SpinConfiguration::from_state_index(3, 0b010), c);
    }

    #[test]
    fn single_spin_initial_state_is_fair() {
        let mut rng = rng_from_seed(11);
        let draws = 10_000;
        let ups = (0..draws)
            .filter(|_| random_initial_state(1, &mut rng).unwrap().spins()[0] == 1)
            .count() as f64;
        let sigma = (draws as f64 * 0.25).sqrt();
        assert!((ups - draws as f64 / 2.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn large_initial_state_is_unmagnetized() {
        let mut rng = rng_from_seed(12);
        let c = random_initial_state(10_000, &mut rng).unwrap();
        assert!(c.magnetization().abs() < 0.05);
    }

    #[test]
    fn initial_state_replays_with_seed() {
        let a = random_initial_state(500, &mut rng_from_seed(3)).unwrap();
        let b = random_initial_state(500, &mut rng_from_seed(3)).unwrap();
        assert_eq!(a, b);
        assert!(random_initial_state(0, &mut rng_from_seed(3)).is_err());
    }

    #[test]
    fn bath_validation() {
        assert!(BathParameters::new(33.0).validate().is_ok());
        assert!(BathParameters::new(0.0).validate().is_err());
        assert!(BathParameters::new(33.0).with_trotter_slices(3).validate().is_err());
        assert!(BathParameters::new(33.0).with_sweeps_per_microsecond(0.0).validate().is_err());
    }
}
