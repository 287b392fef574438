use std::f64::consts::PI;

use super::pulse::{conditional_rotation, SpeciesPulse};
use crate::architecture::ArchitectureGraph;
use crate::statevec::{qubit_mask, DenseOperator, RotationSpec};
use crate::{Error, Result, C64};

/// Full-turn conditional rotation of the mediator: `-1` on the subspace where
/// every neighbour is `|g>` and `+1` elsewhere, identity on the mediator itself.
pub fn native_controlled_phase(
    graph: &ArchitectureGraph,
    mediator: usize,
) -> Result<DenseOperator> {
    graph.node(mediator)?;
    if graph.neighbors(mediator).is_empty() {
        return Err(Error::InvalidParameter(format!(
            "node {mediator} has no neighbours"
        )));
    }
    conditional_rotation(graph, mediator, &RotationSpec::x(2.0 * PI))
}

/// The native phase gate as a `2^m x 2^m` matrix on the mediator's `m`
/// neighbours (all other qubits in `|g>`), ordered by increasing node index.
pub fn neighbor_phase_block(graph: &ArchitectureGraph, mediator: usize) -> Result<DenseOperator> {
    let full = native_controlled_phase(graph, mediator)?;
    let nbrs = graph.neighbors(mediator);
    let n = graph.n_qubits();
    let m = nbrs.len();
    let index_of = |s: usize| -> usize {
        (0..m)
            .filter(|b| s & (1 << (m - 1 - b)) != 0)
            .fold(0, |acc, b| acc | qubit_mask(n, nbrs[b]))
    };
    let basis: Vec<usize> = (0..1usize << m).map(index_of).collect();
    DenseOperator::from_matrix(m, full.compress(&basis))
}

/// Canonical form of the native phase gate: relabelling `g <-> e` on every
/// neighbour (a local X on each) turns `-P + Q` into `diag(1, ..., 1, -1)`.
///
/// A Z-only correction exists for two neighbours (`-(Z (x) Z)(-P + Q) = CZ`)
/// but not for three or more, where the native gate differs from CCZ by
/// two-qubit phases; the X relabelling works for every neighbour count.
pub fn canonical_phase_gate(graph: &ArchitectureGraph, mediator: usize) -> Result<DenseOperator> {
    let block = neighbor_phase_block(graph, mediator)?;
    let m = block.n_qubits();
    let flip = (1usize << m) - 1;
    let d = 1usize << m;
    let relabelled = nalgebra::DMatrix::from_fn(d, d, |i, j| block.get(i ^ flip, j ^ flip));
    DenseOperator::from_matrix(m, relabelled)
}

/// `-(Z (x) Z)` applied to the two-neighbour phase block.
pub fn z_corrected_phase_gate(graph: &ArchitectureGraph, mediator: usize) -> Result<DenseOperator> {
    let block = neighbor_phase_block(graph, mediator)?;
    if block.n_qubits() != 2 {
        return Err(Error::InvalidParameter(
            "Z correction is defined for two neighbours only".into(),
        ));
    }
    let zz = DenseOperator::diagonal(
        2,
        &[
            C64::new(-1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
        ],
    )?;
    zz.mul(&block)
}

/// Pulses realising a CNOT whose control is active on `|g>`: the target flips
/// exactly when the other mediator neighbour is in `|g>`.
///
/// The target's class on its drive line is rotated by `R_y(+pi/2)`, the
/// mediator receives a full turn, and the rotation is undone. Other members
/// of the target's class are rotated back and forth around a diagonal
/// operator and therefore return to where they started.
pub fn negated_control_cnot_pulses(
    graph: &ArchitectureGraph,
    mediator: usize,
    control: usize,
    target: usize,
) -> Result<Vec<SpeciesPulse>> {
    let nbrs = graph.neighbors(mediator);
    if nbrs.len() != 2 || !nbrs.contains(&control) || !nbrs.contains(&target) || control == target {
        return Err(Error::InvalidParameter(format!(
            "mediator {mediator} must couple exactly to control {control} and target {target}"
        )));
    }
    let t = graph.node(target)?;
    let m = graph.node(mediator)?;
    Ok(vec![
        SpeciesPulse::on_class(t.species.clone(), t.class, RotationSpec::y(PI / 2.0)),
        SpeciesPulse::on_class(m.species.clone(), m.class, RotationSpec::x(2.0 * PI)),
        SpeciesPulse::on_class(t.species.clone(), t.class, RotationSpec::y(-PI / 2.0)),
    ])
}
