//! Counter-based seed derivation.
//!
//! Every independent stream (a shot, a sweep point, a replication) gets its
//! seed as a pure function of the master seed and its coordinates, so results
//! never depend on scheduling order or worker count.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use sha2::{Digest, Sha256};

/// Random number generator used by all simulation engines.
pub type SpinRng = Xoshiro256PlusPlus;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for stream `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// Seed for a labelled stream, e.g. a sweep point `("h_bar", "0.25")`.
pub fn derive_labeled_seed(master: u64, label: &str, value: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    hasher.update(value.as_bytes());
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn rng_from_seed(seed: u64) -> SpinRng {
    SpinRng::seed_from_u64(seed)
}

/// Rng for stream `index` under `master`.
pub fn stream_rng(master: u64, index: u64) -> SpinRng {
    rng_from_seed(derive_seed(master, index))
}

/// Short hex digest used to fingerprint topologies and schedules.
pub fn fingerprint(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}
