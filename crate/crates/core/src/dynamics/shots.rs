use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{BathParameters, SpinConfiguration};
use crate::error::{Error, Result};
use crate::schedule::ScheduleVariant;

/// Provenance of a [`ShotSet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShotMetadata {
    pub topology_fingerprint: String,
    /// Fingerprint of the schedule, or of the fixed Hamiltonian for
    /// equilibrium samples.
    pub schedule_fingerprint: String,
    pub schedule_variant: Option<ScheduleVariant>,
    pub bath: BathParameters,
    pub engine: String,
    /// Trotter slices actually used (absent for the classical engine).
    pub trotter_slices: Option<usize>,
    pub master_seed: u64,
    pub shot_count: usize,
    pub n_qubits: usize,
}

/// Final readouts of repeated runs, in shot-index order.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotSet {
    shots: Vec<SpinConfiguration>,
    metadata: ShotMetadata,
}

impl ShotSet {
    pub fn new(shots: Vec<SpinConfiguration>, metadata: ShotMetadata) -> Result<Self> {
        if let Some(first) = shots.first() {
            if shots.iter().any(|s| s.len() != first.len()) {
                return Err(Error::invalid("all shots must have the same length"));
            }
            if first.len() != metadata.n_qubits {
                return Err(Error::invalid(format!(
                    "shots have {} qubits, metadata says {}",
                    first.len(),
                    metadata.n_qubits
                )));
            }
        }
        if shots.len() != metadata.shot_count {
            return Err(Error::invalid(format!(
                "{} shots but metadata says {}",
                shots.len(),
                metadata.shot_count
            )));
        }
        Ok(ShotSet { shots, metadata })
    }

    /// Shot set with placeholder metadata, for analysing externally produced
    /// readouts.
    pub fn from_configurations(shots: Vec<SpinConfiguration>) -> Result<Self> {
        let n = shots.first().map(SpinConfiguration::len).unwrap_or(0);
        let metadata = ShotMetadata {
            topology_fingerprint: String::new(),
            schedule_fingerprint: String::new(),
            schedule_variant: None,
            bath: BathParameters::new(1.0),
            engine: "external".into(),
            trotter_slices: None,
            master_seed: 0,
            shot_count: shots.len(),
            n_qubits: n,
        };
        ShotSet::new(shots, metadata)
    }

    pub fn shots(&self) -> &[SpinConfiguration] {
        &self.shots
    }

    pub fn metadata(&self) -> &ShotMetadata {
        &self.metadata
    }

    pub fn len(&self) -> usize {
        self.shots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shots.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.metadata.n_qubits
    }

    /// This set followed by `other`'s shots.
    pub fn concat(&self, other: &ShotSet) -> Result<ShotSet> {
        let mut shots = self.shots.clone();
        shots.extend(other.shots.iter().cloned());
        let metadata = ShotMetadata { shot_count: shots.len(), ..self.metadata.clone() };
        ShotSet::new(shots, metadata)
    }

    /// CSV with header `shot_index,spins`; spins as a `0`/`1` readout string.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.shots.len() * (self.n_qubits() + 8) + 16);
        out.push_str("shot_index,spins\n");
        for (i, s) in self.shots.iter().enumerate() {
            let _ = writeln!(out, "{i},{}", s.to_bits());
        }
        out
    }

    pub fn metadata_json(&self) -> String {
        serde_json::to_string_pretty(&self.metadata).expect("metadata serializes")
    }

    pub fn from_csv(csv: &str, metadata_json: &str) -> Result<ShotSet> {
        let metadata: ShotMetadata = serde_json::from_str(metadata_json)?;
        let mut lines = csv.lines().enumerate();
        match lines.next() {
            Some((_, "shot_index,spins")) => {}
            _ => return Err(Error::parse(1, "expected header `shot_index,spins`")),
        }
        let mut shots = Vec::new();
        for (idx, line) in lines {
            if line.is_empty() {
                continue;
            }
            let (index, bits) = line
                .split_once(',')
                .ok_or_else(|| Error::parse(idx + 1, "expected `shot_index,spins`"))?;
            let index: usize = index.parse().map_err(|_| Error::parse(idx + 1, "bad shot index"))?;
            if index != shots.len() {
                return Err(Error::parse(idx + 1, format!("shot index {index} out of order")));
            }
            shots.push(SpinConfiguration::from_bits(bits).map_err(|e| Error::parse(idx + 1, e.to_string()))?);
        }
        ShotSet::new(shots, metadata)
    }
}
