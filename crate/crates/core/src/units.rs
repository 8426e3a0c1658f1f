//! Physical constants and unit conversions.
//!
//! Energies are expressed as frequencies (GHz, i.e. `E/h`) and temperatures in
//! millikelvin, so the only conversion needed is `h/k_B`.

/// Planck constant over Boltzmann constant, in mK per GHz.
pub const H_OVER_KB_MK_PER_GHZ: f64 = 47.9924;

/// Dimensionless critical coupling of the square-lattice Ising model,
/// `ln(1 + sqrt 2) / 2`.
pub fn square_lattice_critical_coupling() -> f64 {
    (1.0 + std::f64::consts::SQRT_2).ln() / 2.0
}

/// Inverse temperature in GHz⁻¹ for a temperature in mK.
pub fn beta_from_mk(temperature_mk: f64) -> f64 {
    H_OVER_KB_MK_PER_GHZ / temperature_mk
}

/// Temperature in mK for an inverse temperature in GHz⁻¹.
pub fn mk_from_beta(beta: f64) -> f64 {
    H_OVER_KB_MK_PER_GHZ / beta
}
