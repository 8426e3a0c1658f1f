//! Simulation and analysis toolkit for cooperative reset of qubit registers.
//!
//! A register is a spin network ([`topology`]) driven through a control cycle
//! ([`schedule`]) while in contact with a thermal bath ([`dynamics`]). Final
//! readouts are reduced to fidelities and magnetizations ([`measurement`]) and
//! fitted against scaling models ([`analysis`]).

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod measurement;
pub mod par;
pub mod schedule;
pub mod seed;
pub mod topology;
pub mod units;

pub use error::{Error, Result};
