//! Fidelity and magnetization statistics over shot sets.

use serde::{Deserialize, Serialize};

use crate::dynamics::{ShotSet, SpinConfiguration};
use crate::error::{Error, Result};

/// Outcome frequency with a binomial (Wald) standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_qubits: usize,
    pub n_shots: usize,
}

impl FidelityEstimate {
    fn from_counts(successes: u64, trials: u64, n_qubits: usize, n_shots: usize) -> Self {
        let value = successes as f64 / trials as f64;
        FidelityEstimate {
            value,
            stderr: (value * (1.0 - value) / trials as f64).sqrt(),
            n_qubits,
            n_shots,
        }
    }

    /// Wilson score interval at `z` standard deviations, over the same trials
    /// the estimate was computed from. Better behaved than `value ± z·stderr`
    /// when the count is small or the value sits near 0 or 1.
    pub fn wilson_interval(&self, z: f64, trials: u64) -> (f64, f64) {
        let n = trials as f64;
        let p = self.value;
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let centre = (p + z2 / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        ((centre - half).max(0.0), (centre + half).min(1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnetizationEstimate {
    pub mean: f64,
    pub std: f64,
}

fn check(shots: &ShotSet, target: Option<&SpinConfiguration>) -> Result<()> {
    if shots.is_empty() {
        return Err(Error::invalid("shot set is empty"));
    }
    if let Some(t) = target {
        if t.len() != shots.n_qubits() {
            return Err(Error::invalid(format!(
                "target has {} qubits, shots have {}",
                t.len(),
                shots.n_qubits()
            )));
        }
    }
    Ok(())
}

/// Fraction of shots in which every qubit matches `target`.
pub fn global_fidelity(shots: &ShotSet, target: &SpinConfiguration) -> Result<FidelityEstimate> {
    check(shots, Some(target))?;
    let hits = shots.shots().iter().filter(|s| *s == target).count() as u64;
    Ok(FidelityEstimate::from_counts(hits, shots.len() as u64, shots.n_qubits(), shots.len()))
}

/// Fraction of all (shot, qubit) readings matching `target`. The standard
/// error treats the `𝒩·N` readings as independent trials.
pub fn single_qubit_fidelity(shots: &ShotSet, target: &SpinConfiguration) -> Result<FidelityEstimate> {
    check(shots, Some(target))?;
    let hits: u64 = shots
        .shots()
        .iter()
        .map(|s| s.spins().iter().zip(target.spins()).filter(|(a, b)| a == b).count() as u64)
        .sum();
    let trials = (shots.len() * shots.n_qubits()) as u64;
    Ok(FidelityEstimate::from_counts(hits, trials, shots.n_qubits(), shots.len()))
}

fn mean_and_std(values: impl Iterator<Item = f64>) -> MagnetizationEstimate {
    let v: Vec<f64> = values.collect();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let std = if v.len() > 1 {
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    MagnetizationEstimate { mean, std }
}

/// Mean and sample standard deviation of the per-shot `m = Σ σᶻ_i / N`.
pub fn average_magnetization(shots: &ShotSet) -> Result<MagnetizationEstimate> {
    check(shots, None)?;
    Ok(mean_and_std(shots.shots().iter().map(SpinConfiguration::magnetization)))
}

/// Like [`average_magnetization`] but with each spin projected on `target`,
/// so `+1` means every qubit reads the target state.
pub fn target_alignment(shots: &ShotSet, target: &SpinConfiguration) -> Result<MagnetizationEstimate> {
    check(shots, Some(target))?;
    let n = shots.n_qubits() as f64;
    Ok(mean_and_std(shots.shots().iter().map(|s| {
        s.spins()
            .iter()
            .zip(target.spins())
            .map(|(&a, &b)| (a * b) as f64)
            .sum::<f64>()
            / n
    })))
}

/// Per-qubit frequency of matching `target`.
pub fn per_qubit_zero_frequency(shots: &ShotSet, target: &SpinConfiguration) -> Result<Vec<f64>> {
    check(shots, Some(target))?;
    let mut counts = vec![0u64; shots.n_qubits()];
    for s in shots.shots() {
        for ((c, a), b) in counts.iter_mut().zip(s.spins()).zip(target.spins()) {
            if a == b {
                *c += 1;
            }
        }
    }
    let total = shots.len() as f64;
    Ok(counts.into_iter().map(|c| c as f64 / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(bits: &[&str]) -> ShotSet {
        ShotSet::from_configurations(bits.iter().map(|b| SpinConfiguration::from_bits(b).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn global_fidelity_counts() {
        let zero = SpinConfiguration::all_zero(2);
        let f = global_fidelity(&set(&["00", "00"]), &zero).unwrap();
        assert_eq!(f.value, 1.0);
        assert_eq!(f.stderr, 0.0);
        let f = global_fidelity(&set(&["00", "01", "00", "00"]), &zero).unwrap();
        assert_eq!(f.value, 0.75);
        assert!((f.stderr - 0.2165).abs() < 1e-4);
        assert_eq!((f.n_qubits, f.n_shots), (2, 4));
    }

    #[test]
    fn single_qubit_counts() {
        let zero = SpinConfiguration::all_zero(2);
        assert_eq!(single_qubit_fidelity(&set(&["00", "00"]), &zero).unwrap().value, 1.0);
        let f = single_qubit_fidelity(&set(&["00", "01"]), &zero).unwrap();
        assert_eq!(f.value, 0.75);
        assert!((f.stderr - (0.75f64 * 0.25 / 4.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn per_qubit_frequencies() {
        let zero = SpinConfiguration::all_zero(2);
        assert_eq!(per_qubit_zero_frequency(&set(&["00", "01"]), &zero).unwrap(), vec![1.0, 0.5]);
        let uniform = per_qubit_zero_frequency(&set(&["01", "10"]), &zero).unwrap();
        assert_eq!(uniform[0], uniform[1]);
    }

    #[test]
    fn magnetization_examples() {
        let up = set(&["11", "11", "11"]);
        let m = average_magnetization(&up).unwrap();
        assert_eq!((m.mean, m.std), (1.0, 0.0));
        let balanced = ShotSet::from_configurations(vec![SpinConfiguration::new(vec![1, 1, -1, -1]).unwrap()]).unwrap();
        assert_eq!(average_magnetization(&balanced).unwrap().mean, 0.0);
        let toward = target_alignment(&set(&["00", "01"]), &SpinConfiguration::all_zero(2)).unwrap();
        assert_eq!(toward.mean, 0.5);
    }

    #[test]
    fn errors_on_empty_or_mismatched() {
        let empty = ShotSet::from_configurations(Vec::new()).unwrap();
        let zero = SpinConfiguration::all_zero(2);
        assert!(global_fidelity(&empty, &zero).is_err());
        assert!(single_qubit_fidelity(&empty, &zero).is_err());
        assert!(average_magnetization(&empty).is_err());
        assert!(per_qubit_zero_frequency(&empty, &zero).is_err());
        assert!(global_fidelity(&set(&["000"]), &zero).is_err());
    }

    #[test]
    fn wilson_interval_contains_estimate() {
        let f = global_fidelity(&set(&["00", "00", "00", "01"]), &SpinConfiguration::all_zero(2)).unwrap();
        let (lo, hi) = f.wilson_interval(1.96, 4);
        assert!(lo < f.value && f.value < hi);
        assert!(lo >= 0.0 && hi <= 1.0);
    }
}
