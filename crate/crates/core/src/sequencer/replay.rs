use super::contract::{contract_basis, contract_superposition, expected_output};
use super::ir::{Instruction, ScheduleIR};
use super::request::GateRequest;
use crate::architecture::ArchitectureGraph;
use crate::effective::{actuator_set, apply_species_pulse, Level};
use crate::exact::{
    actuator_flip_drive, propagate_report, schedule_for_pulses, DriveSchedule, PropagationStats,
    Segment, SimParams,
};
use crate::statevec::{state_fidelity, StateVector};
use crate::Result;

/// Which model executes an IR.
#[derive(Debug, Clone, PartialEq)]
pub enum Engine {
    /// Ideal blockade-limit operators.
    Effective,
    /// Calibrated drives integrated under the rotating-frame Hamiltonian.
    Exact(SimParams),
}

/// Translates an IR into drives. Charges and discharges both become one
/// actuator flip; the IR is responsible for requesting only flips that change
/// the actuator level, as compiled IRs do.
pub fn lower_to_schedule(
    graph: &ArchitectureGraph,
    ir: &ScheduleIR,
    params: &SimParams,
) -> Result<DriveSchedule> {
    let mut schedule = DriveSchedule::new();
    for op in &ir.ops {
        match op {
            Instruction::Pulse(p) => {
                schedule.extend(schedule_for_pulses(graph, std::slice::from_ref(p), params)?)
            }
            Instruction::Charge { actuator, mode } | Instruction::Discharge { actuator, mode } => {
                schedule.push(Segment::single(actuator_flip_drive(
                    graph, *actuator, *mode, params,
                )?));
            }
            Instruction::Barrier => {}
        }
    }
    Ok(schedule)
}

/// Runs `ir` on `state`. The exact engine also returns integration statistics.
pub fn replay_report(
    graph: &ArchitectureGraph,
    ir: &ScheduleIR,
    state: &StateVector,
    engine: &Engine,
) -> Result<(StateVector, Option<PropagationStats>)> {
    ir.check(graph)?;
    match engine {
        Engine::Effective => {
            let mut s = state.clone();
            for op in &ir.ops {
                match op {
                    Instruction::Pulse(p) => apply_species_pulse(graph, p, &mut s)?,
                    Instruction::Charge { actuator, mode } => {
                        s = actuator_set(graph, *actuator, Level::Excited, *mode, &s)?
                    }
                    Instruction::Discharge { actuator, mode } => {
                        s = actuator_set(graph, *actuator, Level::Ground, *mode, &s)?
                    }
                    Instruction::Barrier => {}
                }
            }
            Ok((s, None))
        }
        Engine::Exact(params) => {
            let schedule = lower_to_schedule(graph, ir, params)?;
            let (s, stats) = propagate_report(graph, &schedule, params, state)?;
            Ok((s, Some(stats)))
        }
    }
}

pub fn replay(
    graph: &ArchitectureGraph,
    ir: &ScheduleIR,
    state: &StateVector,
    engine: &Engine,
) -> Result<StateVector> {
    Ok(replay_report(graph, ir, state, engine)?.0)
}

/// Smallest fidelity between the replayed IR and the gate contract over
/// `inputs`, or over every contract basis state plus their uniform
/// superposition when `inputs` is `None`.
pub fn contract_fidelity(
    graph: &ArchitectureGraph,
    req: &GateRequest,
    ir: &ScheduleIR,
    engine: &Engine,
    inputs: Option<&[StateVector]>,
) -> Result<f64> {
    let default_inputs;
    let inputs = match inputs {
        Some(s) => s,
        None => {
            let n = graph.n_qubits();
            let mut all = contract_basis(graph, req)?
                .into_iter()
                .map(|i| StateVector::basis(n, i))
                .collect::<Result<Vec<_>>>()?;
            all.push(contract_superposition(graph, req)?);
            default_inputs = all;
            &default_inputs
        }
    };
    let mut worst = 1.0f64;
    for input in inputs {
        let want = expected_output(graph, req, input)?;
        let got = replay(graph, ir, input, engine)?;
        worst = worst.min(state_fidelity(&want, &got)?);
    }
    Ok(worst)
}
