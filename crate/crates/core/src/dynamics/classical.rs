use rand::Rng;

use super::{check_temperature, SpinConfiguration};
use crate::error::{Error, Result};
use crate::schedule::{HamiltonianParams, CLASSICAL_TOLERANCE_GHZ};
use crate::topology::Topology;

/// Energy (GHz) per unit of `σ_i`: `bz − jz Σ_j α_ij σ_j`. Flipping `σ_i`
/// changes the energy by `−2 σ_i h_i`.
#[inline]
pub fn local_field(spins: &[i8], topo: &Topology, site: usize, bz: f64, jz: f64) -> f64 {
    let mut coupled = 0.0;
    for (&j, &w) in topo.neighbor_indices(site).iter().zip(topo.neighbor_weights(site)) {
        coupled += w * spins[j as usize] as f64;
    }
    bz - jz * coupled
}

/// `N` Metropolis proposals at uniform random sites.
pub(crate) fn metropolis_sweep<R: Rng + ?Sized>(
    spins: &mut [i8],
    topo: &Topology,
    bz: f64,
    jz: f64,
    beta: f64,
    rng: &mut R,
) -> usize {
    let n = spins.len();
    let mut accepted = 0;
    for _ in 0..n {
        let site = rng.random_range(0..n);
        let s = spins[site] as f64;
        let delta = -2.0 * s * local_field(spins, topo, site, bz, jz);
        if delta <= 0.0 || rng.random::<f64>() < (-beta * delta).exp() {
            spins[site] = -spins[site];
            accepted += 1;
        }
    }
    accepted
}

/// One single-spin-flip Metropolis sweep at temperature `temperature_mk`.
/// Returns the number of accepted flips.
///
/// The classical engine has no transverse field; `params.bx` must be zero.
pub fn classical_sweep<R: Rng + ?Sized>(
    config: &mut SpinConfiguration,
    topo: &Topology,
    params: &HamiltonianParams,
    temperature_mk: f64,
    rng: &mut R,
) -> Result<usize> {
    if params.bx.abs() > CLASSICAL_TOLERANCE_GHZ {
        return Err(Error::EngineMismatch(format!(
            "classical engine cannot apply a transverse field (bx = {} GHz)",
            params.bx
        )));
    }
    if config.len() != topo.n() {
        return Err(Error::invalid(format!(
            "configuration has {} spins, topology {}",
            config.len(),
            topo.n()
        )));
    }
    let beta = check_temperature(temperature_mk)?;
    Ok(metropolis_sweep(config.spins_mut(), topo, params.bz, params.jz, beta, rng))
}
