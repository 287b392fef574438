use std::f64::consts::PI;

use crate::architecture::{ArchitectureGraph, Role};
use crate::statevec::{RotationSpec, StateVector};
use crate::{Error, Result};

/// Populations below this are treated as zero when checking actuator levels.
pub const LEVEL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Ground,
    Excited,
}

/// How an actuator flip is driven.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChargeMode {
    /// A single resonant pi pulse; fails if any neighbour is excited because
    /// the transition is then shifted out of resonance.
    Resonant,
    /// A multi-tone pi pulse covering every neighbour-excitation manifold, so
    /// the flip is unconditional.
    Compensated,
}

fn require_actuator(graph: &ArchitectureGraph, actuator: usize) -> Result<()> {
    if graph.node(actuator)?.role != Role::Actuator {
        return Err(Error::NotAnActuator(actuator));
    }
    Ok(())
}

/// Population of amplitudes in which some neighbour of `q` is excited.
fn blocked_weight(graph: &ArchitectureGraph, q: usize, state: &StateVector) -> f64 {
    let n = graph.n_qubits();
    let mask = graph
        .neighbors(q)
        .iter()
        .fold(0usize, |acc, &j| acc | crate::statevec::qubit_mask(n, j));
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| i & mask != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Drives `actuator` to `level` with a pi pulse about x. A request for the
/// level the actuator already occupies is a no-op.
pub fn actuator_set(
    graph: &ArchitectureGraph,
    actuator: usize,
    level: Level,
    mode: ChargeMode,
    state: &StateVector,
) -> Result<StateVector> {
    require_actuator(graph, actuator)?;
    if state.n_qubits() != graph.n_qubits() {
        return Err(Error::DimensionMismatch(state.n_qubits(), graph.n_qubits()));
    }
    let pe = state.excited_population(actuator)?;
    let (here, there) = match level {
        Level::Excited => (pe, 1.0 - pe),
        Level::Ground => (1.0 - pe, pe),
    };
    if here >= 1.0 - LEVEL_TOLERANCE {
        return Ok(state.clone());
    }
    if there < 1.0 - LEVEL_TOLERANCE {
        return Err(Error::ActuatorLevel(
            actuator,
            format!("excited population {pe:.3e}"),
        ));
    }
    let mut out = state.clone();
    let flip = RotationSpec::x(PI);
    match mode {
        ChargeMode::Resonant => {
            if blocked_weight(graph, actuator, state) > LEVEL_TOLERANCE {
                return Err(Error::BlockedCharge(actuator));
            }
            out.apply_controlled_rotation(actuator, graph.neighbors(actuator), &flip)?;
        }
        ChargeMode::Compensated => out.apply_single(actuator, &flip.matrix())?,
    }
    Ok(out)
}

/// `<H_QA> = omega_QA (p_e - 1/2)` for the two-level actuator Hamiltonian.
pub fn actuator_energy(
    graph: &ArchitectureGraph,
    actuator: usize,
    state: &StateVector,
) -> Result<f64> {
    require_actuator(graph, actuator)?;
    let pe = state.excited_population(actuator)?;
    Ok(graph.node(actuator)?.transition_frequency * (pe - 0.5))
}
