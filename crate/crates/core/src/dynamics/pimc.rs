//! Path-integral Monte Carlo for the transverse-field register.
//!
//! The quantum partition function is mapped onto `P` classical replicas
//! (Trotter slices). Within a slice, couplings and fields enter at `β/P`;
//! copies of the same spin in neighbouring slices (periodic) couple
//! ferromagnetically with `K⊥ = −½ ln tanh(β·bx/P)`.

use rand::Rng;

use super::classical::{local_field, metropolis_sweep};
use super::{check_temperature, SpinConfiguration};
use crate::error::{Error, Result};
use crate::schedule::{HamiltonianParams, CLASSICAL_TOLERANCE_GHZ};
use crate::topology::Topology;

/// `P` replicas of an `N`-spin configuration, stored slice-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PimcConfiguration {
    n: usize,
    slices: usize,
    spins: Vec<i8>,
}

impl PimcConfiguration {
    /// Every slice starts as a copy of `initial`.
    pub fn replicated(initial: &SpinConfiguration, slices: usize) -> Result<Self> {
        if slices < 2 || !slices.is_multiple_of(2) {
            return Err(Error::invalid(format!("Trotter slice count must be even and >= 2, got {slices}")));
        }
        let mut spins = Vec::with_capacity(initial.len() * slices);
        for _ in 0..slices {
            spins.extend_from_slice(initial.spins());
        }
        Ok(PimcConfiguration { n: initial.len(), slices, spins })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slices(&self) -> usize {
        self.slices
    }

    pub fn slice_spins(&self, k: usize) -> &[i8] {
        &self.spins[k * self.n..(k + 1) * self.n]
    }

    pub fn slice(&self, k: usize) -> SpinConfiguration {
        SpinConfiguration(self.slice_spins(k).to_vec())
    }

    /// Magnetization averaged over all slices.
    pub fn magnetization(&self) -> f64 {
        self.spins.iter().map(|&s| s as i64).sum::<i64>() as f64 / self.spins.len() as f64
    }

    /// Per-site `σᶻ` averaged over slices.
    pub fn site_sz(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for k in 0..self.slices {
            for (o, &s) in out.iter_mut().zip(self.slice_spins(k)) {
                *o += s as f64;
            }
        }
        out.iter_mut().for_each(|o| *o /= self.slices as f64);
        out
    }

    /// Imaginary-time estimator of `⟨σˣ⟩` averaged over sites: each bond
    /// between neighbouring slices contributes `tanh ε` if the two copies agree
    /// and `coth ε` if they differ, with `ε = β·bx/P`.
    pub fn sigma_x_estimate(&self, bx: f64, beta: f64) -> f64 {
        let eps = beta * bx / self.slices as f64;
        if eps <= 0.0 {
            return 0.0;
        }
        let (t, ct) = (eps.tanh(), 1.0 / eps.tanh());
        let mut acc = 0.0;
        for k in 0..self.slices {
            let next = (k + 1) % self.slices;
            for (&a, &b) in self.slice_spins(k).iter().zip(self.slice_spins(next)) {
                acc += if a == b { t } else { ct };
            }
        }
        acc / self.spins.len() as f64
    }
}

/// Slice count actually used: `base` doubled until `β·bx_max/P <= 1`.
pub fn effective_trotter_slices(base: usize, beta: f64, bx_max: f64) -> usize {
    let mut p = base.max(2);
    while beta * bx_max / p as f64 > 1.0 {
        p *= 2;
    }
    p
}

/// One sweep of `N·P` Metropolis proposals at uniform random (site, slice).
/// Returns the number of accepted flips.
///
/// With a vanishing transverse field the slices decouple and each one gets a
/// classical sweep at the full `β`.
pub fn pimc_sweep<R: Rng + ?Sized>(
    config: &mut PimcConfiguration,
    topo: &Topology,
    params: &HamiltonianParams,
    temperature_mk: f64,
    rng: &mut R,
) -> Result<usize> {
    if config.n != topo.n() {
        return Err(Error::invalid(format!(
            "configuration has {} spins, topology {}",
            config.n,
            topo.n()
        )));
    }
    if params.bx < 0.0 {
        return Err(Error::invalid(format!("transverse field must be >= 0, got {}", params.bx)));
    }
    let beta = check_temperature(temperature_mk)?;
    let (n, p) = (config.n, config.slices);

    if params.bx <= CLASSICAL_TOLERANCE_GHZ {
        let mut accepted = 0;
        for slice in config.spins.chunks_mut(n) {
            accepted += metropolis_sweep(slice, topo, params.bz, params.jz, beta, rng);
        }
        return Ok(accepted);
    }

    let beta_slice = beta / p as f64;
    let k_perp = -0.5 * (beta_slice * params.bx).tanh().ln();
    let mut accepted = 0;
    for _ in 0..n * p {
        let idx = rng.random_range(0..n * p);
        let (k, site) = (idx / n, idx % n);
        let up = if k == 0 { p - 1 } else { k - 1 };
        let down = if k + 1 == p { 0 } else { k + 1 };
        let s = config.spins[idx] as f64;
        let h = local_field(&config.spins[k * n..(k + 1) * n], topo, site, params.bz, params.jz);
        let tau = (config.spins[up * n + site] + config.spins[down * n + site]) as f64;
        let delta = beta_slice * (-2.0 * s * h) + 2.0 * k_perp * s * tau;
        if delta <= 0.0 || rng.random::<f64>() < (-delta).exp() {
            config.spins[idx] = -config.spins[idx];
            accepted += 1;
        }
    }
    Ok(accepted)
}
