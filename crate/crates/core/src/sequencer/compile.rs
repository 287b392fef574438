use std::f64::consts::PI;

use super::ir::{Instruction, ScheduleIR};
use super::library::library;
use super::request::{resolve, GateName, GateRequest, Resolved};
use crate::architecture::ArchitectureGraph;
use crate::effective::{negated_control_cnot_pulses, ChargeMode, SpeciesPulse};
use crate::statevec::RotationSpec;
use crate::{Error, Result};

fn library_ir(graph: &ArchitectureGraph, gate: GateName) -> Result<ScheduleIR> {
    let entry = library()?.lookup(gate, graph).ok_or_else(|| {
        let variant = graph
            .geometry()
            .map_or_else(|| "unknown geometry".to_string(), |g| g.variant.clone());
        Error::NoLibrarySequence(format!("{} on {variant}", gate.as_str()))
    })?;
    Ok(entry.ir.clone())
}

/// Compiles a request into an IR whose effective replay meets the gate's
/// contract (see [`super::expected_output`]).
///
/// `cz` and `ccz` are a single full turn on the mediator's class. Every other
/// member of that class turns too, so their neighbourhoods pick up the same
/// phase; the contract includes this. `cnot` refuses mediators that share
/// their class. `modular_swap` expects the bridge charged on entry and leaves
/// it charged.
pub fn compile(graph: &ArchitectureGraph, req: &GateRequest) -> Result<ScheduleIR> {
    let resolved = resolve(graph, req)?;
    let mut body = ScheduleIR::new(req.name.as_str());
    match &resolved {
        Resolved::Phase { mediator, .. } => {
            let node = &graph.nodes()[*mediator];
            body.push(Instruction::Barrier);
            body.push(Instruction::Pulse(SpeciesPulse::on_class(
                node.species.clone(),
                node.class,
                RotationSpec::x(2.0 * PI),
            )));
            body.push(Instruction::Barrier);
        }
        Resolved::Cnot {
            mediator,
            control,
            target,
        } => {
            body.push(Instruction::Barrier);
            body.ops.extend(
                negated_control_cnot_pulses(graph, *mediator, *control, *target)?
                    .into_iter()
                    .map(Instruction::Pulse),
            );
            body.push(Instruction::Barrier);
        }
        Resolved::SwapStep { .. } => {
            let step = library_ir(graph, GateName::SwapStep)?;
            // the reverse parity is the inverse sequence; repetitions alternate
            let (first, second) = if req.reverse {
                (step.inverse(), step)
            } else {
                (step.clone(), step.inverse())
            };
            let mut out = ScheduleIR::new(req.name.as_str());
            for i in 0..req.repetitions {
                out.extend(if i % 2 == 0 { &first } else { &second });
                out.push(Instruction::Barrier);
            }
            return Ok(out);
        }
        Resolved::IccShift { .. } => {
            let step = library_ir(graph, GateName::IccShift)?;
            let step = if req.reverse { step.inverse() } else { step };
            let mut out = ScheduleIR::new(req.name.as_str());
            for _ in 0..req.repetitions {
                out.extend(&step);
                out.push(Instruction::Barrier);
            }
            return Ok(out);
        }
        Resolved::ModularSwap {
            bridge,
            left,
            right,
        } => {
            let mode = ChargeMode::Compensated;
            body.push(Instruction::Discharge {
                actuator: *bridge,
                mode,
            });
            body.push(Instruction::Barrier);
            for (c, t) in [(*left, *right), (*right, *left), (*left, *right)] {
                body.ops.extend(
                    negated_control_cnot_pulses(graph, *bridge, c, t)?
                        .into_iter()
                        .map(Instruction::Pulse),
                );
                body.push(Instruction::Barrier);
            }
            body.push(Instruction::Charge {
                actuator: *bridge,
                mode,
            });
        }
        Resolved::Region { actuators, .. } => {
            let mode = ChargeMode::Compensated;
            for &a in actuators {
                body.push(if req.name == GateName::FreezeRegion {
                    Instruction::Charge { actuator: a, mode }
                } else {
                    Instruction::Discharge { actuator: a, mode }
                });
            }
            body.push(Instruction::Barrier);
            // repeating a level change is a no-op
            return Ok(body);
        }
    }
    let mut out = ScheduleIR::new(req.name.as_str());
    for _ in 0..req.repetitions {
        out.extend(&body);
    }
    Ok(out)
}
