//! Experiment configuration files.
//!
//! Configs are JSON objects; unknown keys anywhere are rejected. Relative
//! paths are resolved against the config file's directory at parse time, and
//! [`ExperimentConfig::to_canonical_json`] emits the fully resolved config with
//! sorted keys, which re-parses to an identical value.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cqie_core::dynamics::BathParameters;
use cqie_core::schedule::{
    linear_energy_scales, make_original_protocol, make_quench_protocol, EnergyScales, PiecewiseLinear,
    ProtocolSchedule, ScheduleVariant,
};
use cqie_core::topology::{
    build_individual, build_pegasus, build_random_regular, build_square_lattice, pegasus_working_graph,
    sample_patch, Topology,
};

use crate::error::{as_config, CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TopologySpec {
    Individual {
        n: usize,
    },
    SquareLattice {
        size: usize,
        #[serde(default)]
        periodic: bool,
    },
    Pegasus {
        m: usize,
        #[serde(default = "yes")]
        trimmed: bool,
    },
    /// Connected patch of the 5612-qubit working graph; `seed` picks both the
    /// dead qubits and the patch start.
    PegasusPatch {
        n: usize,
        seed: u64,
    },
    RandomRegular {
        n: usize,
        degree: usize,
        seed: u64,
    },
    EdgeList {
        path: PathBuf,
    },
}

fn yes() -> bool {
    true
}

impl TopologySpec {
    pub fn build(&self) -> Result<Topology> {
        let topo = match self {
            TopologySpec::Individual { n } => build_individual(*n),
            TopologySpec::SquareLattice { size, periodic } => build_square_lattice(*size, *periodic),
            TopologySpec::Pegasus { m, trimmed } => build_pegasus(*m, *trimmed),
            TopologySpec::PegasusPatch { n, seed } => {
                pegasus_working_graph(*seed).and_then(|chip| sample_patch(&chip, *n, *seed))
            }
            TopologySpec::RandomRegular { n, degree, seed } => build_random_regular(*n, *degree, *seed),
            TopologySpec::EdgeList { path } => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                Topology::from_edge_list(&text)
            }
        };
        topo.map_err(as_config)
    }

    /// Same family with `n` spins.
    pub fn with_size(&self, n: usize) -> Result<TopologySpec> {
        Ok(match self {
            TopologySpec::Individual { .. } => TopologySpec::Individual { n },
            TopologySpec::SquareLattice { periodic, .. } => {
                let size = (n as f64).sqrt().round() as usize;
                if size * size != n {
                    return Err(CliError::config(format!("square lattice needs a square n_qubits, got {n}")));
                }
                TopologySpec::SquareLattice { size, periodic: *periodic }
            }
            TopologySpec::PegasusPatch { seed, .. } => TopologySpec::PegasusPatch { n, seed: *seed },
            TopologySpec::RandomRegular { degree, seed, .. } => {
                TopologySpec::RandomRegular { n, degree: *degree, seed: *seed }
            }
            TopologySpec::Pegasus { .. } | TopologySpec::EdgeList { .. } => {
                return Err(CliError::config("n_qubits cannot be swept for pegasus or edge_list topologies"))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSpec {
    pub variant: ScheduleVariant,
    pub s_bar: f64,
    pub h_bar: f64,
    pub j_coupling: f64,
    /// Breakpoints `[t_us, s]`; custom schedules only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_of_t: Option<PiecewiseLinear>,
    /// Breakpoints `[t_us, g]`; custom schedules only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_of_t: Option<PiecewiseLinear>,
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<ProtocolSchedule> {
        let curves = (self.s_of_t.clone(), self.g_of_t.clone());
        let sched = match (self.variant, curves) {
            (ScheduleVariant::Original, (None, None)) => make_original_protocol(self.s_bar, self.h_bar, self.j_coupling),
            (ScheduleVariant::Quench, (None, None)) => make_quench_protocol(self.s_bar, self.h_bar, self.j_coupling),
            (ScheduleVariant::Custom, (Some(s), Some(g))) => {
                ProtocolSchedule::custom(s, g, self.s_bar, self.h_bar, self.j_coupling)
            }
            (ScheduleVariant::Custom, _) => {
                return Err(CliError::config("custom schedules need both s_of_t and g_of_t"))
            }
            _ => return Err(CliError::config("s_of_t/g_of_t are only allowed with variant \"custom\"")),
        };
        sched.map_err(as_config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnergyScalesSpec {
    /// `A = a_max(1−s)`, `B = b_max·s`, with `A` switched off for
    /// `s >= a_cutoff` (`null` disables the cutoff).
    Linear {
        a_max: f64,
        b_max: f64,
        #[serde(default = "default_cutoff")]
        a_cutoff: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b_floor: Option<f64>,
    },
    /// Tabulated curves, header `s,A_GHz,B_GHz`.
    Csv {
        path: PathBuf,
        #[serde(default)]
        a_cutoff: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b_floor: Option<f64>,
    },
}

fn default_cutoff() -> Option<f64> {
    Some(EnergyScales::DEFAULT_A_CUTOFF)
}

impl Default for EnergyScalesSpec {
    fn default() -> Self {
        EnergyScalesSpec::Linear {
            a_max: EnergyScales::DEFAULT_A_MAX_GHZ,
            b_max: EnergyScales::DEFAULT_B_MAX_GHZ,
            a_cutoff: default_cutoff(),
            b_floor: None,
        }
    }
}

impl EnergyScalesSpec {
    pub fn build(&self) -> Result<EnergyScales> {
        let (base, cutoff, floor) = match self {
            EnergyScalesSpec::Linear { a_max, b_max, a_cutoff, b_floor } => {
                (linear_energy_scales(*a_max, *b_max), *a_cutoff, *b_floor)
            }
            EnergyScalesSpec::Csv { path, a_cutoff, b_floor } => {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                (EnergyScales::from_csv(&text), *a_cutoff, *b_floor)
            }
        };
        let mut scales = base.map_err(as_config)?;
        if let Some(c) = cutoff {
            scales = scales.with_transverse_cutoff(c).map_err(as_config)?;
        }
        if let Some(f) = floor {
            scales = scales.with_b_floor(f).map_err(as_config)?;
        }
        Ok(scales)
    }
}

/// Fixed-parameter sampling used by `locate-critical`; the sample count is
/// the config's `shots`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibrationSpec {
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    #[serde(default = "default_thinning")]
    pub thinning: usize,
}

fn default_burn_in() -> usize {
    2000
}

fn default_thinning() -> usize {
    1
}

impl Default for EquilibrationSpec {
    fn default() -> Self {
        EquilibrationSpec { burn_in: default_burn_in(), thinning: default_thinning() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub topology: TopologySpec,
    pub schedule: ScheduleSpec,
    #[serde(default)]
    pub energy_scales: EnergyScalesSpec,
    pub bath: BathParameters,
    pub shots: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub equilibration: EquilibrationSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// Config with all of its objects constructed and validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub topology: Topology,
    pub schedule: ProtocolSchedule,
    pub scales: EnergyScales,
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str, base_dir: &Path) -> Result<Self> {
        let mut config: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        config.resolve_paths(base_dir);
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_json_str(&text, base).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let TopologySpec::EdgeList { path } = &mut self.topology {
            fix(path);
        }
        if let EnergyScalesSpec::Csv { path, .. } = &mut self.energy_scales {
            fix(path);
        }
    }

    /// Checks every domain constraint and that referenced files exist.
    pub fn validate(&self) -> Result<()> {
        for path in self.referenced_files() {
            if !path.is_file() {
                return Err(CliError::config(format!("referenced file {} does not exist", path.display())));
            }
        }
        if self.shots == 0 {
            return Err(CliError::config("shots must be >= 1"));
        }
        if self.equilibration.burn_in == 0 || self.equilibration.thinning == 0 {
            return Err(CliError::config("equilibration burn_in and thinning must be >= 1"));
        }
        self.bath.validate().map_err(as_config)?;
        self.schedule.build()?;
        self.energy_scales.build()?;
        Ok(())
    }

    fn referenced_files(&self) -> Vec<&Path> {
        let mut out = Vec::new();
        if let TopologySpec::EdgeList { path } = &self.topology {
            out.push(path.as_path());
        }
        if let EnergyScalesSpec::Csv { path, .. } = &self.energy_scales {
            out.push(path.as_path());
        }
        out
    }

    pub fn resolve(&self) -> Result<Resolved> {
        Ok(Resolved {
            config: self.clone(),
            topology: self.topology.build()?,
            schedule: self.schedule.build()?,
            scales: self.energy_scales.build()?,
        })
    }

    /// Sorted-key, pretty-printed JSON.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "topology": {"kind": "individual", "n": 4},
        "schedule": {"variant": "quench", "s_bar": 0.6, "h_bar": 1.0, "j_coupling": 0.0},
        "bath": {"temperature_mk": 33.0},
        "shots": 10,
        "master_seed": 1
    }"#;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        ExperimentConfig::from_json_str(text, Path::new("."))
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse(MINIMAL).unwrap();
        assert_eq!(c.bath.trotter_slices, 32);
        assert_eq!(c.bath.sweeps_per_microsecond, 100.0);
        assert_eq!(c.energy_scales, EnergyScalesSpec::default());
        assert_eq!(c.equilibration, EquilibrationSpec::default());
    }

    #[test]
    fn canonical_round_trip() {
        let c = parse(MINIMAL).unwrap();
        let text = c.to_canonical_json();
        let back = parse(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_canonical_json(), text);
    }

    #[test]
    fn typo_and_domain_errors_name_the_key() {
        let typo = MINIMAL.replace("\"s_bar\": 0.6", "\"sbar\": 1.5");
        let err = parse(&typo).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("s_bar"), "{err}");

        let domain = MINIMAL.replace("\"s_bar\": 0.6", "\"s_bar\": 1.5");
        let err = parse(&domain).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("s_bar"), "{err}");
    }

    #[test]
    fn unknown_nested_keys_are_rejected() {
        let bad = MINIMAL.replace("\"n\": 4", "\"n\": 4, \"periodic\": true");
        assert!(parse(&bad).is_err());
        let bad = MINIMAL.replace("\"temperature_mk\": 33.0", "\"temperature_mk\": 33.0, \"temp\": 1");
        assert!(parse(&bad).is_err());
    }

    #[test]
    fn missing_file_is_a_config_error() {
        let bad = MINIMAL.replace(r#"{"kind": "individual", "n": 4}"#, r#"{"kind": "edge_list", "path": "nope.edges"}"#);
        assert_eq!(parse(&bad).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn lattice_size_from_n_qubits() {
        let spec = TopologySpec::SquareLattice { size: 4, periodic: true };
        assert_eq!(spec.with_size(144).unwrap(), TopologySpec::SquareLattice { size: 12, periodic: true });
        assert!(spec.with_size(150).is_err());
    }
}
