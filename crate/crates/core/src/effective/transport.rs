use super::actuator::{actuator_set, ChargeMode, Level, LEVEL_TOLERANCE};
use super::encoding::{code_basis, logical_count, EncodingKind};
use super::gates::negated_control_cnot_pulses;
use super::pulse::apply_sequence;
use crate::architecture::{ArchitectureGraph, Role};
use crate::statevec::{DenseOperator, StateVector};
use crate::{Error, Result, C64};

/// Direction of a conveyor swap step. `Forward` exchanges the contents of the
/// pairs `(Q2,Q3), (Q4,Q5), ..., (QN,Q1)` (even sites move clockwise, odd
/// sites anticlockwise); `Reverse` is its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapParity {
    Forward,
    Reverse,
}

impl SwapParity {
    pub fn flipped(self) -> Self {
        match self {
            Self::Forward => Self::Reverse,
            Self::Reverse => Self::Forward,
        }
    }
}

/// `perm[p]` is the logical position whose content ends up at position `p`
/// (zero-based) after one swap step.
pub fn swap_step_permutation(n_logical: usize, _parity: SwapParity) -> Vec<usize> {
    // Each step is a product of disjoint transpositions, so it is its own inverse
    // and both parities share one permutation.
    let mut perm: Vec<usize> = (0..n_logical).collect();
    for i in (1..n_logical).step_by(2) {
        let j = (i + 1) % n_logical;
        perm.swap(i, j);
    }
    perm
}

/// Applies a logical position permutation to a logical basis index.
pub fn permute_logical_index(x: usize, n_logical: usize, perm: &[usize]) -> usize {
    (0..n_logical).fold(0, |acc, p| {
        let bit = (x >> (n_logical - 1 - perm[p])) & 1;
        acc | (bit << (n_logical - 1 - p))
    })
}

/// A permutation of selected basis states, identity on all others.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisPermutation {
    n_qubits: usize,
    /// `(from, to)` pairs; the `from` and `to` sets coincide.
    moves: Vec<(usize, usize)>,
}

impl BasisPermutation {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn moves(&self) -> &[(usize, usize)] {
        &self.moves
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch(state.n_qubits(), self.n_qubits));
        }
        let src = state.amplitudes();
        let mut amps = src.to_vec();
        for &(from, to) in &self.moves {
            amps[to] = src[from];
        }
        StateVector::from_amplitudes(self.n_qubits, amps)
    }

    pub fn inverse(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            moves: self.moves.iter().map(|&(a, b)| (b, a)).collect(),
        }
    }

    /// Explicit matrix (small registers only).
    pub fn to_dense(&self) -> Result<DenseOperator> {
        let mut op = DenseOperator::identity(self.n_qubits)?;
        let mut m = op.clone().into_matrix();
        for &(from, _) in &self.moves {
            m[(from, from)] = C64::new(0.0, 0.0);
        }
        for &(from, to) in &self.moves {
            m[(to, from)] = C64::new(1.0, 0.0);
        }
        op = DenseOperator::from_matrix(self.n_qubits, m)?;
        Ok(op)
    }
}

/// The swap-step contract on a conveyor belt: encoded basis states are
/// permuted according to [`swap_step_permutation`]; every other basis state
/// is left alone.
pub fn global_swap_step(graph: &ArchitectureGraph, parity: SwapParity) -> Result<BasisPermutation> {
    let nl = logical_count(graph, EncodingKind::Ics)?;
    let basis = code_basis(graph, EncodingKind::Ics, 0)?;
    let perm = swap_step_permutation(nl, parity);
    let moves = (0..basis.len())
        .map(|x| (basis[x], basis[permute_logical_index(x, nl, &perm)]))
        .collect();
    Ok(BasisPermutation {
        n_qubits: graph.n_qubits(),
        moves,
    })
}

/// Exchanges the contents of the boundary qubits `ql` and `qr` of two bridged
/// modules with three negated-control CNOTs through the bridge actuator, then
/// re-excites the bridge with a compensated pi pulse to isolate the modules.
pub fn modular_swap(
    graph: &ArchitectureGraph,
    bridge: usize,
    ql: usize,
    qr: usize,
    state: &StateVector,
) -> Result<StateVector> {
    if graph.node(bridge)?.role != Role::Actuator {
        return Err(Error::NotAnActuator(bridge));
    }
    if state.excited_population(bridge)? > LEVEL_TOLERANCE {
        return Err(Error::BridgeClosed(bridge));
    }
    let mut pulses = negated_control_cnot_pulses(graph, bridge, ql, qr)?;
    pulses.extend(negated_control_cnot_pulses(graph, bridge, qr, ql)?);
    pulses.extend(negated_control_cnot_pulses(graph, bridge, ql, qr)?);
    let swapped = apply_sequence(graph, &pulses, state)?;
    actuator_set(
        graph,
        bridge,
        Level::Excited,
        ChargeMode::Compensated,
        &swapped,
    )
}

/// Dense SWAP on two qubits, used as the reference for [`modular_swap`].
pub fn swap_matrix() -> Vec<Vec<C64>> {
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    vec![
        vec![o, z, z, z],
        vec![z, z, o, z],
        vec![z, o, z, z],
        vec![z, z, z, o],
    ]
}
