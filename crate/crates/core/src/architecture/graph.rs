use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::{Error, Result};

/// Drive-coupling class of a qubit. The Rabi frequency under a shared drive
/// scales by 1, 2 or 4 respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingClass {
    Regular,
    Crossed,
    DoubleCrossed,
}

impl CouplingClass {
    pub const ALL: [CouplingClass; 3] = [
        CouplingClass::Regular,
        CouplingClass::Crossed,
        CouplingClass::DoubleCrossed,
    ];

    pub fn multiplier(self) -> f64 {
        match self {
            CouplingClass::Regular => 1.0,
            CouplingClass::Crossed => 2.0,
            CouplingClass::DoubleCrossed => 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Computational,
    Register,
    Coupler,
    Actuator,
}

/// A set of qubits sharing one global drive line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Species {
    pub id: String,
    pub drive_frequency: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitNode {
    pub index: usize,
    pub species: String,
    pub class: CouplingClass,
    pub role: Role,
    /// Bare transition frequency in the rotating-frame convention (rad/s).
    pub transition_frequency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaskKind {
    FreezeRegion,
    Bridge,
    ModuleBoundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMask {
    pub name: String,
    pub kind: MaskKind,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    Ladder,
    Conveyor,
    Star,
    Modular,
}

/// Records which builder produced a graph so that encodings and library
/// sequences can locate logical sites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub kind: GeometryKind,
    pub n: usize,
    pub variant: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modules: Vec<ModuleGeometry>,
}

/// A module inside a bridged graph: its species prefix, first node index and
/// original geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleGeometry {
    pub name: String,
    pub offset: usize,
    pub n_nodes: usize,
    pub geometry: Option<Box<Geometry>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceSummary {
    pub drive_lines: usize,
    pub physical_qubits: usize,
    pub crossed: usize,
    pub double_crossed: usize,
    pub actuators: usize,
}

/// Immutable coupling graph with species, classes, roles and masks.
///
/// Construction never fails on physics grounds: malformed inputs are kept so
/// that [`crate::architecture::validate`] can report them.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchitectureGraph {
    zeta: f64,
    base_coupling: f64,
    species: Vec<Species>,
    nodes: Vec<QubitNode>,
    edges: Vec<(usize, usize)>,
    masks: Vec<RegionMask>,
    geometry: Option<Geometry>,
    adjacency: Vec<Vec<usize>>,
}

impl ArchitectureGraph {
    pub fn new(
        zeta: f64,
        base_coupling: f64,
        species: Vec<Species>,
        nodes: Vec<QubitNode>,
        edges: Vec<(usize, usize)>,
        masks: Vec<RegionMask>,
        geometry: Option<Geometry>,
    ) -> Self {
        let n = nodes.len();
        let mut sets = vec![BTreeSet::new(); n];
        for &(a, b) in &edges {
            if a < n && b < n && a != b {
                sets[a].insert(b);
                sets[b].insert(a);
            }
        }
        let adjacency = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        Self {
            zeta,
            base_coupling,
            species,
            nodes,
            edges,
            masks,
            geometry,
            adjacency,
        }
    }

    /// Like [`ArchitectureGraph::new`] but overwrites every node's transition
    /// frequency with the value implied by its drive line and coordination.
    pub fn with_derived_frequencies(
        zeta: f64,
        base_coupling: f64,
        species: Vec<Species>,
        nodes: Vec<QubitNode>,
        edges: Vec<(usize, usize)>,
        masks: Vec<RegionMask>,
        geometry: Option<Geometry>,
    ) -> Self {
        let mut g = Self::new(zeta, base_coupling, species, nodes, edges, masks, geometry);
        for i in 0..g.nodes.len() {
            if let Some(w) = g.derived_transition_frequency(i) {
                g.nodes[i].transition_frequency = w;
            }
        }
        g
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn base_coupling(&self) -> f64 {
        self.base_coupling
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn nodes(&self) -> &[QubitNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Result<&QubitNode> {
        self.nodes.get(i).ok_or(Error::QubitOutOfRange {
            index: i,
            n_qubits: self.nodes.len(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.nodes.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn masks(&self) -> &[RegionMask] {
        &self.masks
    }

    pub fn mask(&self, name: &str) -> Option<&RegionMask> {
        self.masks.iter().find(|m| m.name == name)
    }

    pub fn geometry(&self) -> Option<&Geometry> {
        self.geometry.as_ref()
    }

    /// Sorted, de-duplicated neighbours of node `i` (malformed edges ignored).
    pub fn neighbors(&self, i: usize) -> &[usize] {
        self.adjacency.get(i).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Number of distinct neighbours.
    pub fn coordination(&self, i: usize) -> usize {
        self.neighbors(i).len()
    }

    pub fn species_by_id(&self, id: &str) -> Option<&Species> {
        self.species.iter().find(|s| s.id == id)
    }

    pub fn has_species(&self, id: &str) -> bool {
        self.species_by_id(id).is_some()
    }

    /// Node indices driven by the line `id`, in increasing order.
    pub fn members_of(&self, id: &str) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.species == id)
            .map(|n| n.index)
            .collect()
    }

    /// `omega_d + kappa * zeta` for node `i`, if its species exists.
    pub fn derived_transition_frequency(&self, i: usize) -> Option<f64> {
        let node = self.nodes.get(i)?;
        let sp = self.species_by_id(&node.species)?;
        Some(sp.drive_frequency + self.coordination(i) as f64 * self.zeta)
    }

    pub fn actuators(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .filter(|n| n.role == Role::Actuator)
            .map(|n| n.index)
            .collect()
    }

    /// Actuators whose only neighbour is `i`.
    pub fn actuator_partners(&self, i: usize) -> Vec<usize> {
        self.neighbors(i)
            .iter()
            .copied()
            .filter(|&a| self.nodes[a].role == Role::Actuator && self.neighbors(a) == [i])
            .collect()
    }

    /// True when some edge joins a member of `a` to a member of `b`.
    pub fn species_coupled(&self, a: &str, b: &str) -> bool {
        self.edges.iter().any(|&(i, j)| {
            i < self.nodes.len()
                && j < self.nodes.len()
                && ((self.nodes[i].species == a && self.nodes[j].species == b)
                    || (self.nodes[i].species == b && self.nodes[j].species == a))
        })
    }

    pub fn is_valid(&self) -> bool {
        super::validate(self).ok
    }

    pub(crate) fn require_valid(&self) -> Result<()> {
        let report = super::validate(self);
        if report.ok {
            Ok(())
        } else {
            Err(Error::InvalidGraph(format!(
                "{} violation(s), first: {:?}",
                report.violations.len(),
                report.violations[0]
            )))
        }
    }

    pub(crate) fn into_parts(
        self,
    ) -> (
        f64,
        f64,
        Vec<Species>,
        Vec<QubitNode>,
        Vec<(usize, usize)>,
        Vec<RegionMask>,
        Option<Geometry>,
    ) {
        (
            self.zeta,
            self.base_coupling,
            self.species,
            self.nodes,
            self.edges,
            self.masks,
            self.geometry,
        )
    }
}

/// Counts by class and role.
pub fn resource_summary(graph: &ArchitectureGraph) -> Result<ResourceSummary> {
    graph.require_valid()?;
    let count = |f: &dyn Fn(&QubitNode) -> bool| graph.nodes().iter().filter(|n| f(n)).count();
    Ok(ResourceSummary {
        drive_lines: graph.species().len(),
        physical_qubits: graph.n_qubits(),
        crossed: count(&|n| n.class == CouplingClass::Crossed),
        double_crossed: count(&|n| n.class == CouplingClass::DoubleCrossed),
        actuators: count(&|n| n.role == Role::Actuator),
    })
}
