//! Gate postconditions stated without reference to any pulse sequence.

use rand::Rng;
use rand_distr::StandardNormal;

use super::request::{resolve, GateName, GateRequest, Resolved};
use crate::architecture::ArchitectureGraph;
use crate::effective::{code_basis, global_swap_step, swap_matrix, EncodingKind};
use crate::statevec::{qubit_mask, RotationSpec, StateVector};
use crate::{Error, Result, C64};

fn all_ground(graph: &ArchitectureGraph, state: &StateVector, qubits: &[usize]) -> Vec<bool> {
    let n = graph.n_qubits();
    let mask = qubits.iter().fold(0usize, |acc, &q| acc | qubit_mask(n, q));
    (0..state.dim()).map(|i| i & mask == 0).collect()
}

/// The state `req` must produce from `input`, computed directly from the
/// gate's definition. Global phases are not part of the contract.
pub fn expected_output(
    graph: &ArchitectureGraph,
    req: &GateRequest,
    input: &StateVector,
) -> Result<StateVector> {
    if input.n_qubits() != graph.n_qubits() {
        return Err(Error::DimensionMismatch(input.n_qubits(), graph.n_qubits()));
    }
    let n = graph.n_qubits();
    let mut state = input.clone();
    match resolve(graph, req)? {
        Resolved::Phase {
            class_mediators, ..
        } => {
            for _ in 0..req.repetitions {
                let mut amps = state.into_amplitudes();
                for &m in &class_mediators {
                    let open = all_ground(graph, input, graph.neighbors(m));
                    for (a, ok) in amps.iter_mut().zip(open) {
                        if ok {
                            *a = -*a;
                        }
                    }
                }
                state = StateVector::from_amplitudes(n, amps)?;
            }
        }
        Resolved::Cnot {
            control, target, ..
        } => {
            let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
            let x = [[z, o], [o, z]];
            for _ in 0..req.repetitions {
                state.apply_conditional_matrix(target, &[control], &x)?;
            }
        }
        Resolved::SwapStep { .. } => {
            let mut parity = req.parity();
            for _ in 0..req.repetitions {
                state = global_swap_step(graph, parity)?.apply(&state)?;
                parity = parity.flipped();
            }
        }
        Resolved::IccShift { from, to, .. } => {
            let src = code_basis(graph, EncodingKind::Icc, from)?;
            let dst = code_basis(graph, EncodingKind::Icc, to)?;
            // the contract only covers the code space at `from`
            let mut out = vec![C64::new(0.0, 0.0); state.dim()];
            for (&i, &j) in src.iter().zip(&dst) {
                out[j] = state.amplitudes()[i];
            }
            state = StateVector::from_amplitudes(n, out)?;
        }
        Resolved::ModularSwap { left, right, .. } => {
            let swap = swap_matrix();
            for _ in 0..req.repetitions {
                state.apply_on_qubits(&[left, right], &swap)?;
            }
        }
        Resolved::Region { actuators, .. } => {
            let flip = RotationSpec::x(std::f64::consts::PI).matrix();
            let want_excited = req.name == GateName::FreezeRegion;
            for &a in &actuators {
                let pe = state.excited_population(a)?;
                if (pe > 0.5) != want_excited {
                    state.apply_single(a, &flip)?;
                }
            }
        }
    }
    Ok(state)
}

fn random_amplitudes<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<C64> {
    (0..len)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

fn random_code_state<R: Rng + ?Sized>(
    graph: &ArchitectureGraph,
    kind: EncodingKind,
    position: usize,
    rng: &mut R,
) -> Result<StateVector> {
    let basis = code_basis(graph, kind, position)?;
    let mut amps = vec![C64::new(0.0, 0.0); 1usize << graph.n_qubits()];
    for (&i, a) in basis.iter().zip(random_amplitudes(basis.len(), rng)) {
        amps[i] = a;
    }
    StateVector::from_amplitudes(graph.n_qubits(), amps)
}

/// Code-space basis states on which `req` is specified, one per logical or
/// operand basis state. Background qubits are fixed as the gate requires.
pub fn contract_basis(graph: &ArchitectureGraph, req: &GateRequest) -> Result<Vec<usize>> {
    let n = graph.n_qubits();
    let subsets = |active: &[usize], background: usize| -> Vec<usize> {
        (0..1usize << active.len())
            .map(|s| {
                active.iter().enumerate().fold(background, |idx, (b, &q)| {
                    if s & (1 << (active.len() - 1 - b)) != 0 {
                        idx | qubit_mask(n, q)
                    } else {
                        idx
                    }
                })
            })
            .collect()
    };
    Ok(match resolve(graph, req)? {
        Resolved::Phase { mediator, .. } => subsets(graph.neighbors(mediator), 0),
        Resolved::Cnot {
            control, target, ..
        } => subsets(&[control, target], 0),
        Resolved::SwapStep { .. } => code_basis(graph, EncodingKind::Ics, 0)?,
        Resolved::IccShift { from, .. } => code_basis(graph, EncodingKind::Icc, from)?,
        Resolved::ModularSwap {
            bridge,
            left,
            right,
        } => subsets(&[left, right], qubit_mask(n, bridge)),
        Resolved::Region { members, actuators } => {
            let background = if req.name == GateName::UnfreezeRegion {
                actuators.iter().fold(0, |acc, &a| acc | qubit_mask(n, a))
            } else {
                0
            };
            subsets(&members, background)
        }
    })
}

/// `count` seeded random inputs spanning the contract's basis states.
pub fn contract_inputs<R: Rng + ?Sized>(
    graph: &ArchitectureGraph,
    req: &GateRequest,
    count: usize,
    rng: &mut R,
) -> Result<Vec<StateVector>> {
    let n = graph.n_qubits();
    let resolved = resolve(graph, req)?;
    (0..count)
        .map(|_| match &resolved {
            Resolved::SwapStep { .. } => random_code_state(graph, EncodingKind::Ics, 0, rng),
            Resolved::IccShift { from, .. } => {
                random_code_state(graph, EncodingKind::Icc, *from, rng)
            }
            _ => {
                let basis = contract_basis(graph, req)?;
                let mut amps = vec![C64::new(0.0, 0.0); 1usize << n];
                for (&i, a) in basis.iter().zip(random_amplitudes(basis.len(), rng)) {
                    amps[i] = a;
                }
                StateVector::from_amplitudes(n, amps)
            }
        })
        .collect()
}

/// Uniform superposition of the contract basis; catches relative phases that
/// single basis inputs cannot see.
pub fn contract_superposition(graph: &ArchitectureGraph, req: &GateRequest) -> Result<StateVector> {
    let basis = contract_basis(graph, req)?;
    let mut amps = vec![C64::new(0.0, 0.0); 1usize << graph.n_qubits()];
    for &i in &basis {
        amps[i] = C64::new(1.0, 0.0);
    }
    StateVector::from_amplitudes(graph.n_qubits(), amps)
}
