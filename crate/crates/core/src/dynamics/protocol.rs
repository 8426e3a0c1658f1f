use serde::{Deserialize, Serialize};

use super::classical::metropolis_sweep;
use super::pimc::{effective_trotter_slices, pimc_sweep, PimcConfiguration};
use super::{check_temperature, random_initial_state, BathParameters, ShotMetadata, ShotSet, SpinConfiguration};
use crate::error::{Error, Result};
use crate::par::{map_indexed, Execution};
use crate::schedule::{
    classical_flag, instantaneous_params, max_transverse_field, EnergyScales, HamiltonianParams,
    ProtocolSchedule, CLASSICAL_TOLERANCE_GHZ,
};
use crate::seed::{fingerprint, rng_from_seed, stream_rng};
use crate::topology::Topology;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Classical,
    Pimc,
}

impl Engine {
    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::Classical => "classical",
            Engine::Pimc => "pimc",
        }
    }
}

/// Sweep times `k·Δt < duration`, `Δt = 1/rate`. Each sweep uses the
/// parameters at the start of its step; readout happens at `duration`.
fn step_times(duration: f64, rate: f64) -> Vec<f64> {
    let dt = 1.0 / rate;
    let steps = ((duration * rate) - 1e-9).ceil().max(1.0) as usize;
    (0..steps).map(|k| (k as f64 * dt).min(duration)).collect()
}

/// Runs `shots` independent erasure cycles and reads out the final register.
///
/// Shot `i` draws its initial state and all Monte Carlo moves from a stream
/// seeded by `(master_seed, i)`, so the result does not depend on how shots
/// are distributed over workers.
pub fn run_protocol(
    topo: &Topology,
    sched: &ProtocolSchedule,
    scales: &EnergyScales,
    bath: &BathParameters,
    shots: usize,
    master_seed: u64,
) -> Result<ShotSet> {
    run_protocol_with(topo, sched, scales, bath, shots, master_seed, Execution::default())
}

pub fn run_protocol_with(
    topo: &Topology,
    sched: &ProtocolSchedule,
    scales: &EnergyScales,
    bath: &BathParameters,
    shots: usize,
    master_seed: u64,
    exec: Execution,
) -> Result<ShotSet> {
    if shots == 0 {
        return Err(Error::invalid("shot count must be >= 1"));
    }
    bath.validate()?;
    let beta = bath.beta();
    let times = step_times(sched.duration(), bath.sweeps_per_microsecond);
    let params: Vec<HamiltonianParams> = times
        .iter()
        .map(|&t| instantaneous_params(sched, scales, t))
        .collect::<Result<_>>()?;

    let engine = if classical_flag(sched, scales) { Engine::Classical } else { Engine::Pimc };
    let slices = match engine {
        Engine::Classical => None,
        Engine::Pimc => Some(effective_trotter_slices(
            bath.trotter_slices,
            beta,
            max_transverse_field(sched, scales),
        )),
    };

    let n = topo.n();
    let results = map_indexed(shots, exec, |shot| -> Result<SpinConfiguration> {
        let mut rng = stream_rng(master_seed, shot as u64);
        let initial = random_initial_state(n, &mut rng)?;
        match slices {
            None => {
                let mut config = initial;
                for p in &params {
                    if p.bx.abs() > CLASSICAL_TOLERANCE_GHZ {
                        return Err(Error::EngineMismatch("transverse field in classical run".into()));
                    }
                    metropolis_sweep(config.spins_mut(), topo, p.bz, p.jz, beta, &mut rng);
                }
                Ok(config)
            }
            Some(p_slices) => {
                let mut config = PimcConfiguration::replicated(&initial, p_slices)?;
                for p in &params {
                    pimc_sweep(&mut config, topo, p, bath.temperature_mk, &mut rng)?;
                }
                Ok(config.slice(0))
            }
        }
    });
    let shots_out = results.into_iter().collect::<Result<Vec<_>>>()?;

    let metadata = ShotMetadata {
        topology_fingerprint: topo.fingerprint(),
        schedule_fingerprint: sched.fingerprint(),
        schedule_variant: Some(sched.variant()),
        bath: *bath,
        engine: engine.as_str().into(),
        trotter_slices: slices,
        master_seed,
        shot_count: shots,
        n_qubits: n,
    };
    ShotSet::new(shots_out, metadata)
}

/// Burn-in, sample count and thinning for fixed-parameter sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquilibrationPlan {
    pub burn_in: usize,
    pub samples: usize,
    pub thinning: usize,
}

impl EquilibrationPlan {
    pub fn new(burn_in: usize, samples: usize, thinning: usize) -> Self {
        EquilibrationPlan { burn_in, samples, thinning }
    }
}

/// Samples the Gibbs state of a fixed Hamiltonian with one Markov chain.
///
/// Uses the classical engine when `bx = 0` and PIMC otherwise (readout from
/// slice 0). The chain starts from a random state.
pub fn equilibrate(
    topo: &Topology,
    params: &HamiltonianParams,
    temperature_mk: f64,
    trotter_slices: usize,
    plan: EquilibrationPlan,
    seed: u64,
) -> Result<ShotSet> {
    equilibrate_with(topo, params, temperature_mk, trotter_slices, plan, seed, |_| {})
}

/// [`equilibrate`] that also hands every recorded PIMC state to `observe`
/// (never called for the classical engine), e.g. to accumulate slice-averaged
/// estimators.
pub fn equilibrate_with<F: FnMut(&PimcConfiguration)>(
    topo: &Topology,
    params: &HamiltonianParams,
    temperature_mk: f64,
    trotter_slices: usize,
    plan: EquilibrationPlan,
    seed: u64,
    mut observe: F,
) -> Result<ShotSet> {
    if plan.burn_in == 0 || plan.thinning == 0 {
        return Err(Error::invalid("burn_in and thinning must be >= 1"));
    }
    let beta = check_temperature(temperature_mk)?;
    let mut rng = rng_from_seed(seed);
    let initial = random_initial_state(topo.n(), &mut rng)?;
    let mut samples = Vec::with_capacity(plan.samples);

    let slices = if params.bx.abs() <= CLASSICAL_TOLERANCE_GHZ {
        let mut config = initial;
        for _ in 0..plan.burn_in {
            metropolis_sweep(config.spins_mut(), topo, params.bz, params.jz, beta, &mut rng);
        }
        for _ in 0..plan.samples {
            for _ in 0..plan.thinning {
                metropolis_sweep(config.spins_mut(), topo, params.bz, params.jz, beta, &mut rng);
            }
            samples.push(config.clone());
        }
        None
    } else {
        let p = effective_trotter_slices(trotter_slices, beta, params.bx);
        let mut config = PimcConfiguration::replicated(&initial, p)?;
        for _ in 0..plan.burn_in {
            pimc_sweep(&mut config, topo, params, temperature_mk, &mut rng)?;
        }
        for _ in 0..plan.samples {
            for _ in 0..plan.thinning {
                pimc_sweep(&mut config, topo, params, temperature_mk, &mut rng)?;
            }
            observe(&config);
            samples.push(config.slice(0));
        }
        Some(p)
    };

    let engine = if slices.is_some() { Engine::Pimc } else { Engine::Classical };
    let bath = BathParameters {
        temperature_mk,
        sweeps_per_microsecond: BathParameters::DEFAULT_SWEEPS_PER_US,
        trotter_slices: slices.unwrap_or(trotter_slices),
    };
    let metadata = ShotMetadata {
        topology_fingerprint: topo.fingerprint(),
        schedule_fingerprint: fingerprint(serde_json::to_string(params)?.as_bytes()),
        schedule_variant: None,
        bath,
        engine: engine.as_str().into(),
        trotter_slices: slices,
        master_seed: seed,
        shot_count: plan.samples,
        n_qubits: topo.n(),
    };
    ShotSet::new(samples, metadata)
}
