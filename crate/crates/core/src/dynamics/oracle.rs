//! Exact Gibbs state of a small register, by dense diagonalization.

use nalgebra::{DMatrix, SymmetricEigen};

use super::check_temperature;
use crate::error::{Error, Result};
use crate::schedule::HamiltonianParams;
use crate::topology::Topology;

/// Largest register the dense oracle accepts.
pub const ORACLE_MAX_SPINS: usize = 14;

/// Thermal expectation values. `state_probs[z]` is the probability of reading
/// out basis state `z` (bit `i` set when spin `i` is `+1`).
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalState {
    pub mean_magnetization: f64,
    pub site_sz: Vec<f64>,
    pub site_sx: Vec<f64>,
    pub state_probs: Vec<f64>,
}

fn diagonal_energy(topo: &Topology, params: &HamiltonianParams, z: usize) -> f64 {
    let spin = |i: usize| if z >> i & 1 == 1 { 1.0 } else { -1.0 };
    let field: f64 = (0..topo.n()).map(spin).sum::<f64>() * params.bz;
    let coupling: f64 = topo.edges().iter().map(|e| e.weight * spin(e.i) * spin(e.j)).sum();
    field - params.jz * coupling
}

pub fn exact_thermal_oracle(
    topo: &Topology,
    params: &HamiltonianParams,
    temperature_mk: f64,
) -> Result<ThermalState> {
    let n = topo.n();
    if n > ORACLE_MAX_SPINS {
        return Err(Error::SizeLimit { n, limit: ORACLE_MAX_SPINS });
    }
    let beta = check_temperature(temperature_mk)?;
    let dim = 1usize << n;
    let diag: Vec<f64> = (0..dim).map(|z| diagonal_energy(topo, params, z)).collect();

    let (state_probs, site_sx) = if params.bx == 0.0 {
        let e_min = diag.iter().copied().fold(f64::INFINITY, f64::min);
        let weights: Vec<f64> = diag.iter().map(|&e| (-beta * (e - e_min)).exp()).collect();
        let z: f64 = weights.iter().sum();
        (weights.iter().map(|w| w / z).collect::<Vec<_>>(), vec![0.0; n])
    } else {
        let mut h = DMatrix::<f64>::from_diagonal(&nalgebra::DVector::from_vec(diag));
        for z in 0..dim {
            for i in 0..n {
                h[(z, z ^ (1 << i))] = -params.bx;
            }
        }
        let eig = SymmetricEigen::new(h);
        let e_min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let boltz: Vec<f64> = eig.eigenvalues.iter().map(|&e| (-beta * (e - e_min)).exp()).collect();
        let z_part: f64 = boltz.iter().sum();
        let mut probs = vec![0.0; dim];
        let mut sx = vec![0.0; n];
        for (k, &w) in boltz.iter().enumerate() {
            let w = w / z_part;
            if w < 1e-300 {
                continue;
            }
            let v = eig.eigenvectors.column(k);
            for z in 0..dim {
                probs[z] += w * v[z] * v[z];
                for (i, s) in sx.iter_mut().enumerate() {
                    *s += w * v[z] * v[z ^ (1 << i)];
                }
            }
        }
        (probs, sx)
    };

    let mut site_sz = vec![0.0; n];
    for (z, &p) in state_probs.iter().enumerate() {
        for (i, s) in site_sz.iter_mut().enumerate() {
            *s += if z >> i & 1 == 1 { p } else { -p };
        }
    }
    let mean_magnetization = site_sz.iter().sum::<f64>() / n as f64;
    Ok(ThermalState { mean_magnetization, site_sz, site_sx, state_probs })
}
