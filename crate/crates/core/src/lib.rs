//! Simulation and pulse compilation for globally driven qubit arrays with
//! always-on ZZ coupling and auxiliary quantum actuators.
//!
//! The crate is layered bottom-up:
//!
//! - [`statevec`]: dense state vectors, operators, rotations and comparison metrics.
//! - [`architecture`]: species-coloured coupling graphs, builders and the JSON file format.
//! - [`effective`]: the ideal blockade-limit gate algebra (conditional rotations, species pulses,
//!   actuator control, logical encodings and transport contracts).
//! - [`exact`]: rotating-frame Hamiltonian dynamics used as a physics oracle for the effective model.
//! - [`sequencer`]: a small instruction set, a gate compiler, a sequence library and a
//!   breadth-first sequence search.
//!
//! Units: hbar = 1 and every frequency is angular (rad/s).

pub mod architecture;
pub mod effective;
mod error;
pub mod exact;
pub mod sequencer;
pub mod statevec;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
