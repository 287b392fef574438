use std::collections::BTreeSet;
use std::str::FromStr;

use serde::Serialize;

use crate::architecture::{ArchitectureGraph, GeometryKind, MaskKind, Role};
use crate::effective::{logical_count, EncodingKind, SwapParity};
use crate::{Error, Result};

/// Operations the compiler knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateName {
    Cz,
    Ccz,
    Cnot,
    SwapStep,
    IccShift,
    ModularSwap,
    FreezeRegion,
    UnfreezeRegion,
}

impl GateName {
    pub const ALL: [GateName; 8] = [
        GateName::Cz,
        GateName::Ccz,
        GateName::Cnot,
        GateName::SwapStep,
        GateName::IccShift,
        GateName::ModularSwap,
        GateName::FreezeRegion,
        GateName::UnfreezeRegion,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GateName::Cz => "cz",
            GateName::Ccz => "ccz",
            GateName::Cnot => "cnot",
            GateName::SwapStep => "swap_step",
            GateName::IccShift => "icc_shift",
            GateName::ModularSwap => "modular_swap",
            GateName::FreezeRegion => "freeze_region",
            GateName::UnfreezeRegion => "unfreeze_region",
        }
    }
}

impl FromStr for GateName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GateName::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| Error::UnsupportedOp(s.to_string()))
    }
}

/// A named operation with its operands.
///
/// Operand meaning by gate:
///
/// * `cz`, `ccz`: `qubits` is either the mediator alone or its two (three)
///   neighbours.
/// * `cnot`: `qubits = [control, target]`; the control is negated, so the
///   target flips when the control is in `|g>`.
/// * `swap_step`: no qubits; `reverse` selects the reverse parity and
///   repetitions alternate parity.
/// * `icc_shift`: `position` is the starting column index `k`; `reverse`
///   shifts towards column 0.
/// * `modular_swap`: `qubits = [left, right]`, the two boundary qubits of a
///   bridge.
/// * `freeze_region`, `unfreeze_region`: `region` names a mask, or `qubits`
///   lists the region directly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateRequest {
    pub name: GateName,
    pub qubits: Vec<usize>,
    pub region: Option<String>,
    pub position: usize,
    pub reverse: bool,
    pub repetitions: usize,
}

impl GateRequest {
    pub fn new(name: GateName) -> Self {
        Self {
            name,
            qubits: Vec::new(),
            region: None,
            position: 0,
            reverse: false,
            repetitions: 1,
        }
    }

    pub fn with_qubits(mut self, qubits: impl Into<Vec<usize>>) -> Self {
        self.qubits = qubits.into();
        self
    }

    pub fn with_region(mut self, region: impl Into<String>) -> Self {
        self.region = Some(region.into());
        self
    }

    pub fn at_position(mut self, k: usize) -> Self {
        self.position = k;
        self
    }

    pub fn reversed(mut self, reverse: bool) -> Self {
        self.reverse = reverse;
        self
    }

    pub fn repeated(mut self, repetitions: usize) -> Self {
        self.repetitions = repetitions;
        self
    }

    pub fn parity(&self) -> SwapParity {
        if self.reverse {
            SwapParity::Reverse
        } else {
            SwapParity::Forward
        }
    }
}

/// Operands of a request after checking them against the graph.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Resolved {
    Phase {
        mediator: usize,
        class_mediators: Vec<usize>,
    },
    Cnot {
        mediator: usize,
        control: usize,
        target: usize,
    },
    SwapStep {
        variant: String,
    },
    IccShift {
        variant: String,
        from: usize,
        to: usize,
    },
    ModularSwap {
        bridge: usize,
        left: usize,
        right: usize,
    },
    Region {
        members: Vec<usize>,
        actuators: Vec<usize>,
    },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidRequest(msg.into())
}

/// Members of the mediator's drive line that share its coupling class.
fn same_class(graph: &ArchitectureGraph, mediator: usize) -> Vec<usize> {
    let node = &graph.nodes()[mediator];
    graph
        .members_of(&node.species)
        .into_iter()
        .filter(|&i| graph.nodes()[i].class == node.class)
        .collect()
}

fn find_mediator(graph: &ArchitectureGraph, qubits: &[usize], m: usize) -> Result<usize> {
    for &q in qubits {
        graph.node(q)?;
    }
    if qubits.len() == 1 {
        let q = qubits[0];
        if graph.neighbors(q).len() != m {
            return Err(invalid(format!(
                "node {q} has {} neighbours, expected {m}",
                graph.neighbors(q).len()
            )));
        }
        return Ok(q);
    }
    let wanted: BTreeSet<usize> = qubits.iter().copied().collect();
    if qubits.len() != m || wanted.len() != m {
        return Err(invalid(format!(
            "expected the mediator or {m} distinct neighbours, got {qubits:?}"
        )));
    }
    (0..graph.n_qubits())
        .find(|&i| {
            graph.neighbors(i).len() == m
                && graph.neighbors(i).iter().copied().collect::<BTreeSet<_>>() == wanted
        })
        .ok_or_else(|| invalid(format!("no node couples exactly to {qubits:?}")))
}

fn common_two_neighbour_node(
    graph: &ArchitectureGraph,
    a: usize,
    b: usize,
    actuator_only: bool,
) -> Result<usize> {
    graph.node(a)?;
    graph.node(b)?;
    if a == b {
        return Err(invalid("operands must differ"));
    }
    graph
        .neighbors(a)
        .iter()
        .copied()
        .find(|&m| {
            let nb = graph.neighbors(m);
            nb.len() == 2
                && nb.contains(&b)
                && (!actuator_only || graph.nodes()[m].role == Role::Actuator)
        })
        .ok_or_else(|| {
            invalid(format!(
                "no {} couples exactly to {a} and {b}",
                if actuator_only { "actuator" } else { "node" }
            ))
        })
}

fn region_members(graph: &ArchitectureGraph, req: &GateRequest) -> Result<Vec<usize>> {
    match (&req.region, req.qubits.is_empty()) {
        (Some(name), _) => {
            let mask = graph
                .mask(name)
                .ok_or_else(|| invalid(format!("no mask named `{name}`")))?;
            if mask.kind != MaskKind::FreezeRegion {
                return Err(invalid(format!("mask `{name}` is not a freeze region")));
            }
            Ok(mask.members.clone())
        }
        (None, false) => {
            for &q in &req.qubits {
                graph.node(q)?;
            }
            Ok(req.qubits.clone())
        }
        (None, true) => Err(invalid("freeze requests need a region or qubits")),
    }
}

pub(crate) fn resolve(graph: &ArchitectureGraph, req: &GateRequest) -> Result<Resolved> {
    if req.repetitions == 0 {
        return Err(invalid("repetitions must be at least 1"));
    }
    match req.name {
        GateName::Cz | GateName::Ccz => {
            let m = if req.name == GateName::Cz { 2 } else { 3 };
            let mediator = find_mediator(graph, &req.qubits, m)?;
            let class_mediators = same_class(graph, mediator);
            Ok(Resolved::Phase {
                mediator,
                class_mediators,
            })
        }
        GateName::Cnot => {
            let [control, target] = req.qubits[..] else {
                return Err(invalid("cnot needs [control, target]"));
            };
            let mediator = common_two_neighbour_node(graph, control, target, false)?;
            if same_class(graph, mediator).len() != 1 {
                return Err(invalid(format!(
                    "mediator {mediator} shares its drive class with other nodes, so the full turn would act on them too"
                )));
            }
            Ok(Resolved::Cnot {
                mediator,
                control,
                target,
            })
        }
        GateName::SwapStep => {
            let geometry = graph
                .geometry()
                .filter(|g| g.kind == GeometryKind::Conveyor);
            let geometry = geometry
                .ok_or_else(|| Error::GeometryMismatch("swap_step needs a conveyor belt".into()))?;
            Ok(Resolved::SwapStep {
                variant: geometry.variant.clone(),
            })
        }
        GateName::IccShift => {
            let geometry = graph.geometry().filter(|g| g.kind == GeometryKind::Ladder);
            let geometry = geometry
                .ok_or_else(|| Error::GeometryMismatch("icc_shift needs a ladder".into()))?;
            let n = logical_count(graph, EncodingKind::Icc)?;
            let k = req.position;
            let l = req.repetitions;
            let to = if req.reverse {
                k.checked_sub(l)
            } else {
                Some(k + l).filter(|&t| t <= n)
            };
            let to = to.ok_or_else(|| {
                invalid(format!(
                    "shifting from column index {k} by {l} leaves 0..={n}"
                ))
            })?;
            if k > n {
                return Err(Error::PositionOutOfRange { k, max: n });
            }
            Ok(Resolved::IccShift {
                variant: geometry.variant.clone(),
                from: k,
                to,
            })
        }
        GateName::ModularSwap => {
            let [left, right] = req.qubits[..] else {
                return Err(invalid("modular_swap needs [left, right] boundary qubits"));
            };
            let bridge = common_two_neighbour_node(graph, left, right, true)?;
            Ok(Resolved::ModularSwap {
                bridge,
                left,
                right,
            })
        }
        GateName::FreezeRegion | GateName::UnfreezeRegion => {
            let members = region_members(graph, req)?;
            let mut actuators = BTreeSet::new();
            for &q in &members {
                let partners = graph.actuator_partners(q);
                if partners.is_empty() {
                    return Err(Error::MissingPartner(q));
                }
                actuators.extend(partners);
            }
            Ok(Resolved::Region {
                members,
                actuators: actuators.into_iter().collect(),
            })
        }
    }
}
