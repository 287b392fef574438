use std::f64::consts::PI;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::propagate::{propagator, SimParams};
use super::schedule::schedule_for_pulses;
use crate::architecture::{ArchitectureGraph, Role};
use crate::effective::{species_pulse, SpeciesPulse};
use crate::statevec::{
    average_gate_fidelity_block, phase_insensitive_distance_general, qubit_mask, RotationSpec,
};
use crate::{Error, Result, C64};

/// Operations whose exact and blockade-limit forms can be compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepOp {
    /// Full turn of a two-neighbour mediator.
    Cz,
    /// Full turn of a three-neighbour mediator.
    Ccz,
    /// Pi pulse on a qubit whose actuator partner is excited.
    Freeze,
    /// Pi pulse on a qubit whose actuator partner is in the ground state.
    PiPulse,
}

impl SweepOp {
    pub const ALL: [SweepOp; 4] = [SweepOp::Cz, SweepOp::Ccz, SweepOp::Freeze, SweepOp::PiPulse];

    pub fn as_str(self) -> &'static str {
        match self {
            SweepOp::Cz => "cz",
            SweepOp::Ccz => "ccz",
            SweepOp::Freeze => "freeze",
            SweepOp::PiPulse => "pi_pulse",
        }
    }
}

impl FromStr for SweepOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepOp::ALL
            .into_iter()
            .find(|op| op.as_str() == s)
            .ok_or_else(|| Error::UnsupportedOp(s.to_string()))
    }
}

/// One row of an exact-versus-effective sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub op: SweepOp,
    pub eta: f64,
    /// Phase-insensitive spectral distance on the compared subspace.
    pub distance: f64,
    pub avg_gate_fidelity: f64,
    /// Worst population lost from the ideal output over compared basis inputs.
    pub leakage: f64,
    /// Wall-clock seconds; zero unless timings were requested.
    pub runtime_s: f64,
    pub unitarity_defect: f64,
}

/// Metrics of an actual block `exact` against an ideal block `ideal`, both
/// restricted to the same basis inputs. `ideal_cols` and `exact_cols` are
/// full-space output columns used for the leakage figure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub distance: f64,
    pub avg_gate_fidelity: f64,
    pub leakage: f64,
}

/// Compares two operators given as matching column sets; the rows listed in
/// `block` define the compared subspace.
pub fn compare_operators(
    ideal: &DMatrix<C64>,
    exact: &DMatrix<C64>,
    block: &[usize],
) -> Result<Comparison> {
    if ideal.shape() != exact.shape() {
        return Err(Error::DimensionMismatch(ideal.nrows(), exact.nrows()));
    }
    let pick = |m: &DMatrix<C64>| {
        DMatrix::from_fn(block.len(), block.len(), |i, j| m[(block[i], block[j])])
    };
    let (e, x) = (pick(ideal), pick(exact));
    let distance = phase_insensitive_distance_general(&e, &x)?;
    let avg_gate_fidelity = average_gate_fidelity_block(&e, &x)?;
    let leakage = block
        .iter()
        .map(|&j| {
            let overlap: C64 = ideal
                .column(j)
                .iter()
                .zip(exact.column(j).iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            (1.0 - overlap.norm_sqr()).max(0.0)
        })
        .fold(0.0, f64::max);
    Ok(Comparison {
        distance,
        avg_gate_fidelity,
        leakage,
    })
}

struct Setup {
    pulse: SpeciesPulse,
    block: Vec<usize>,
}

fn setup(graph: &ArchitectureGraph, op: SweepOp) -> Result<Setup> {
    let n = graph.n_qubits();
    match op {
        SweepOp::Cz | SweepOp::Ccz => {
            let m = if op == SweepOp::Cz { 2 } else { 3 };
            let mediator = graph
                .actuators()
                .into_iter()
                .find(|&a| graph.neighbors(a).len() == m)
                .or_else(|| {
                    (0..n).find(|&i| {
                        graph.nodes()[i].role == Role::Coupler && graph.neighbors(i).len() == m
                    })
                })
                .ok_or_else(|| {
                    Error::UnsupportedOp(format!(
                        "{}: no mediator with {m} neighbours",
                        op.as_str()
                    ))
                })?;
            let node = &graph.nodes()[mediator];
            Ok(Setup {
                pulse: SpeciesPulse::on_class(
                    node.species.clone(),
                    node.class,
                    RotationSpec::x(2.0 * PI),
                ),
                block: (0..1usize << n).collect(),
            })
        }
        SweepOp::Freeze | SweepOp::PiPulse => {
            let (target, partner) = (0..n)
                .filter(|&i| graph.nodes()[i].role != Role::Actuator)
                .find_map(|i| graph.actuator_partners(i).first().map(|&a| (i, a)))
                .ok_or_else(|| {
                    Error::UnsupportedOp(format!(
                        "{}: no qubit with an actuator partner",
                        op.as_str()
                    ))
                })?;
            let node = &graph.nodes()[target];
            let base = if op == SweepOp::Freeze {
                qubit_mask(n, partner)
            } else {
                0
            };
            Ok(Setup {
                pulse: SpeciesPulse::on_class(
                    node.species.clone(),
                    node.class,
                    RotationSpec::x(PI),
                ),
                block: vec![base, base | qubit_mask(n, target)],
            })
        }
    }
}

fn sweep_point(
    graph: &ArchitectureGraph,
    op: SweepOp,
    s: &Setup,
    params: &SimParams,
    timings: bool,
) -> Result<SweepRow> {
    // the clock is only read on request: wasm32-unknown-unknown has none
    let clock = timings.then(Instant::now);
    let ideal = species_pulse(graph, &s.pulse)?;
    let schedule = schedule_for_pulses(graph, std::slice::from_ref(&s.pulse), params)?;
    let (exact, stats) = propagator(graph, &schedule, params)?;
    let cmp = compare_operators(ideal.matrix(), exact.matrix(), &s.block)?;
    Ok(SweepRow {
        op,
        eta: params.eta(),
        distance: cmp.distance,
        avg_gate_fidelity: cmp.avg_gate_fidelity,
        leakage: cmp.leakage,
        runtime_s: clock.map_or(0.0, |c| c.elapsed().as_secs_f64()),
        unitarity_defect: stats.unitarity_defect,
    })
}

/// Compares the exact propagator of `op`'s calibrated pulse with its
/// blockade-limit operator at each blockade ratio. Rows come back sorted by
/// `eta`; points run in parallel but results do not depend on scheduling.
///
/// `cz` and `ccz` compare the whole register; `freeze` and `pi_pulse` compare
/// the two-dimensional block of the target qubit with its partner excited or
/// in the ground state and every other qubit in `|g>`.
pub fn effective_vs_exact(
    graph: &ArchitectureGraph,
    op: SweepOp,
    etas: &[f64],
    base: &SimParams,
    timings: bool,
) -> Result<Vec<SweepRow>> {
    let s = setup(graph, op)?;
    let mut sorted = etas.to_vec();
    if let Some(bad) = sorted.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::InvalidSimParams(format!("blockade ratio {bad}")));
    }
    sorted.sort_by(f64::total_cmp);
    sorted
        .par_iter()
        .map(|&eta| {
            let params = base.with_eta(eta)?;
            sweep_point(graph, op, &s, &params, timings)
        })
        .collect()
}
