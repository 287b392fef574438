use serde::Serialize;
use std::collections::{BTreeSet, HashSet};

use super::graph::{ArchitectureGraph, MaskKind};

/// Relative tolerance for the detuning rule; builders and the JSON loader
/// reproduce the derived value bit for bit, so this only absorbs hand edits.
const DETUNING_RELATIVE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// An edge joins two qubits on the same drive line.
    SameSpecies {
        edge: (usize, usize),
        species: String,
    },
    /// Transition frequency differs from drive frequency plus coordination times zeta.
    Detuning {
        node: usize,
        expected: f64,
        actual: f64,
    },
    SelfLoop {
        edge: (usize, usize),
    },
    DuplicateEdge {
        edge: (usize, usize),
    },
    EdgeOutOfRange {
        edge: (usize, usize),
    },
    NodeIndex {
        position: usize,
        index: usize,
    },
    UnknownSpecies {
        node: usize,
        species: String,
    },
    DuplicateSpecies {
        id: String,
    },
    MaskMemberOutOfRange {
        mask: String,
        member: usize,
    },
    UnpairedFreezeMember {
        mask: String,
        member: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Lists every structural and physical violation. Never fails.
pub fn validate(graph: &ArchitectureGraph) -> ValidationReport {
    let mut v = Vec::new();
    let n = graph.n_qubits();

    let mut seen_species = HashSet::new();
    for s in graph.species() {
        if !seen_species.insert(s.id.as_str()) {
            v.push(Violation::DuplicateSpecies { id: s.id.clone() });
        }
    }
    for (pos, node) in graph.nodes().iter().enumerate() {
        if node.index != pos {
            v.push(Violation::NodeIndex {
                position: pos,
                index: node.index,
            });
        }
        if !graph.has_species(&node.species) {
            v.push(Violation::UnknownSpecies {
                node: pos,
                species: node.species.clone(),
            });
        }
    }

    let mut seen_edges = BTreeSet::new();
    for &(a, b) in graph.edges() {
        let edge = (a, b);
        if a >= n || b >= n {
            v.push(Violation::EdgeOutOfRange { edge });
            continue;
        }
        if a == b {
            v.push(Violation::SelfLoop { edge });
            continue;
        }
        if !seen_edges.insert((a.min(b), a.max(b))) {
            v.push(Violation::DuplicateEdge { edge });
            continue;
        }
        let (sa, sb) = (&graph.nodes()[a].species, &graph.nodes()[b].species);
        if sa == sb {
            v.push(Violation::SameSpecies {
                edge,
                species: sa.clone(),
            });
        }
    }

    for (i, node) in graph.nodes().iter().enumerate() {
        if let Some(expected) = graph.derived_transition_frequency(i) {
            let actual = node.transition_frequency;
            let scale = expected.abs().max(1.0);
            if !((actual - expected).abs() <= DETUNING_RELATIVE_TOLERANCE * scale) {
                v.push(Violation::Detuning {
                    node: i,
                    expected,
                    actual,
                });
            }
        }
    }

    for mask in graph.masks() {
        for &m in &mask.members {
            if m >= n {
                v.push(Violation::MaskMemberOutOfRange {
                    mask: mask.name.clone(),
                    member: m,
                });
            } else if mask.kind == MaskKind::FreezeRegion && graph.actuator_partners(m).is_empty() {
                v.push(Violation::UnpairedFreezeMember {
                    mask: mask.name.clone(),
                    member: m,
                });
            }
        }
    }

    ValidationReport {
        ok: v.is_empty(),
        violations: v,
    }
}
