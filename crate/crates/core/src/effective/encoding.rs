//! Logical encodings.
//!
//! ICC (ladder): logical qubit `r` lives in row `r` at column `c = 2k`.
//! Columns left of `c` hold a Neel pattern whose site `c-1` is `|g>`, columns
//! right of `c` are `|g>`, and junction nodes are `|g>`.
//!
//! ICS (conveyor belt): logical qubit `i` lives on `Q_i`. Single-site
//! registers are `|g>`. Three-site registers alternate `|F> = |ggg>` and
//! `|N> = |geg>`, starting with `|F>` on `S_12`. The off-loop node is `|g>`.
//!
//! Logical basis index `x` uses the same convention as physical indices:
//! logical qubit 1 (row 0) is the most significant bit.

use crate::architecture::{ArchitectureGraph, Geometry, GeometryKind};
use crate::statevec::{qubit_mask, StateVector};
use crate::{Error, Result, C64};

/// Leakage above this weight makes [`decode`] fail.
pub const DECODE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum EncodingKind {
    Icc,
    Ics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedState {
    pub kind: EncodingKind,
    /// Column index `k` of the carrier (ICC only; zero for ICS).
    pub position: usize,
    pub amplitudes: Vec<C64>,
    pub n_logical: usize,
}

impl EncodedState {
    pub fn icc(position: usize, n_logical: usize, amplitudes: Vec<C64>) -> Self {
        Self {
            kind: EncodingKind::Icc,
            position,
            amplitudes,
            n_logical,
        }
    }

    pub fn ics(n_logical: usize, amplitudes: Vec<C64>) -> Self {
        Self {
            kind: EncodingKind::Ics,
            position: 0,
            amplitudes,
            n_logical,
        }
    }

    /// Logical computational basis state `|x>`.
    pub fn basis(kind: EncodingKind, position: usize, n_logical: usize, x: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_logical];
        amplitudes[x] = C64::new(1.0, 0.0);
        Self {
            kind,
            position,
            amplitudes,
            n_logical,
        }
    }
}

fn geometry_for(graph: &ArchitectureGraph, kind: EncodingKind) -> Result<&Geometry> {
    let geometry = graph
        .geometry()
        .ok_or_else(|| Error::GeometryMismatch("graph has no recorded geometry".into()))?;
    match (kind, geometry.kind) {
        (EncodingKind::Icc, GeometryKind::Ladder) | (EncodingKind::Ics, GeometryKind::Conveyor) => {
            Ok(geometry)
        }
        _ => Err(Error::GeometryMismatch(format!(
            "{kind:?} encoding on a {:?} graph",
            geometry.kind
        ))),
    }
}

fn logical_bit(x: usize, n_logical: usize, i: usize) -> bool {
    x & (1 << (n_logical - 1 - i)) != 0
}

/// Number of logical qubits the graph's geometry carries for `kind`.
pub fn logical_count(graph: &ArchitectureGraph, kind: EncodingKind) -> Result<usize> {
    Ok(geometry_for(graph, kind)?.n)
}

/// Physical basis index of every logical basis state, indexed by `x`.
pub fn code_basis(
    graph: &ArchitectureGraph,
    kind: EncodingKind,
    position: usize,
) -> Result<Vec<usize>> {
    let g = geometry_for(graph, kind)?;
    let n = graph.n_qubits();
    let nl = g.n;
    let set = |idx: &mut usize, q: usize| *idx |= qubit_mask(n, q);
    match kind {
        EncodingKind::Icc => {
            if position > nl {
                return Err(Error::PositionOutOfRange {
                    k: position,
                    max: nl,
                });
            }
            let c = 2 * position;
            let mut background = 0usize;
            for row in 0..nl {
                for j in 0..c {
                    if (c - 1 - j) % 2 == 1 {
                        set(&mut background, g.ladder_site(row, j));
                    }
                }
            }
            Ok((0..1usize << nl)
                .map(|x| {
                    let mut idx = background;
                    for row in 0..nl {
                        if logical_bit(x, nl, row) {
                            set(&mut idx, g.ladder_site(row, c));
                        }
                    }
                    idx
                })
                .collect())
        }
        EncodingKind::Ics => {
            let mut background = 0usize;
            let variant = g
                .conveyor_variant()
                .ok_or_else(|| Error::GeometryMismatch(g.variant.clone()))?;
            if variant.block_len() == 3 {
                for i in (2..=nl).step_by(2) {
                    set(&mut background, g.conveyor_block(i)[1]);
                }
            }
            Ok((0..1usize << nl)
                .map(|x| {
                    let mut idx = background;
                    for i in 1..=nl {
                        if logical_bit(x, nl, i - 1) {
                            set(&mut idx, g.conveyor_q(i));
                        }
                    }
                    idx
                })
                .collect())
        }
    }
}

/// Physical state for a logical encoding.
pub fn encode(graph: &ArchitectureGraph, enc: &EncodedState) -> Result<StateVector> {
    let nl = logical_count(graph, enc.kind)?;
    if enc.n_logical != nl || enc.amplitudes.len() != 1 << nl {
        return Err(Error::LogicalLength {
            got: enc.amplitudes.len(),
            expected: 1 << nl,
        });
    }
    let norm: f64 = enc
        .amplitudes
        .iter()
        .map(|a| a.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "logical amplitudes have norm {norm}"
        )));
    }
    let basis = code_basis(graph, enc.kind, enc.position)?;
    let mut amps = vec![C64::new(0.0, 0.0); 1usize << graph.n_qubits()];
    for (x, &idx) in basis.iter().enumerate() {
        amps[idx] = enc.amplitudes[x];
    }
    StateVector::from_amplitudes(graph.n_qubits(), amps)
}

/// Result of [`decode`].
#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub state: EncodedState,
    /// Weight of the physical state outside the code space.
    pub leakage: f64,
}

/// Projects a physical state onto the code space of `(kind, position)`.
pub fn decode(
    graph: &ArchitectureGraph,
    state: &StateVector,
    kind: EncodingKind,
    position: usize,
) -> Result<Decoded> {
    if state.n_qubits() != graph.n_qubits() {
        return Err(Error::DimensionMismatch(state.n_qubits(), graph.n_qubits()));
    }
    let basis = code_basis(graph, kind, position)?;
    let amplitudes: Vec<C64> = basis.iter().map(|&i| state.amplitudes()[i]).collect();
    let kept: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    let leakage = (1.0 - kept).max(0.0);
    if leakage > DECODE_TOLERANCE {
        return Err(Error::Leakage(leakage));
    }
    let norm = kept.sqrt();
    let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
    let n_logical = basis.len().trailing_zeros() as usize;
    Ok(Decoded {
        state: EncodedState {
            kind,
            position,
            amplitudes,
            n_logical,
        },
        leakage,
    })
}
