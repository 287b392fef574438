//! Geometry builders.
//!
//! Ladder rows hold `2N+3` sites; site `(r, j)` has index `r*(2N+3) + j` and
//! the `N-1` inter-row junction nodes follow all rows. Row columns alternate
//! species A (even) and B (odd). In the three-species ladder the last column
//! is species C, columns 0 and 1 are crossed and the junction couplers are
//! crossed C qubits at column `2N`. In the low-overhead ladder column 0 is
//! double-crossed and the B-species couplers alternate double-crossed (even
//! junction) and crossed (odd junction).
//!
//! Conveyor loops list `Q1, S12, Q2, S23, ..., QN, SN1` (each register block
//! contributes one or three sites) followed by the off-loop node, which is
//! coupled to `Q1, Q2, Q3` (only `Q1, Q2` when `N = 2`).

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::str::FromStr;

use super::graph::*;
use crate::{Error, Result};

/// Default uniform ZZ strength: 2 pi x 1 MHz.
pub const DEFAULT_ZETA: f64 = 2.0 * PI * 1.0e6;
/// Default drive-coupling unit.
pub const DEFAULT_BASE_COUPLING: f64 = 1.0;

/// Drive frequency assigned to the `k`-th species of a built graph.
pub fn default_drive_frequency(k: usize) -> f64 {
    2.0 * PI * (4.0e9 + 0.25e9 * k as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderVariant {
    ThreeSpecies,
    TwoSpeciesLowOverhead,
    /// Three-species rows with actuators in place of the junction couplers.
    ActuatorVariant,
    /// Low-overhead rows with actuators in place of the junction couplers.
    ActuatorLowOverhead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConveyorVariant {
    ThreeRegister,
    SingleRegister,
    /// Three-register loop with an actuator as the off-loop node.
    ActuatorVariant,
    /// Single-register loop with an actuator as the off-loop node.
    ActuatorSingleRegister,
}

macro_rules! variant_names {
    ($ty:ty { $($v:ident => $s:literal),* $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$(<$ty>::$v),*];
            pub fn as_str(self) -> &'static str {
                match self { $(<$ty>::$v => $s),* }
            }
        }
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok(<$ty>::$v),)*
                    other => Err(Error::InvalidParameter(format!("unknown variant `{other}`"))),
                }
            }
        }
    };
}

variant_names!(LadderVariant {
    ThreeSpecies => "three_species",
    TwoSpeciesLowOverhead => "two_species_lowoverhead",
    ActuatorVariant => "actuator_variant",
    ActuatorLowOverhead => "actuator_lowoverhead",
});

variant_names!(ConveyorVariant {
    ThreeRegister => "three_register",
    SingleRegister => "single_register",
    ActuatorVariant => "actuator_variant",
    ActuatorSingleRegister => "actuator_single_register",
});

impl LadderVariant {
    pub fn has_actuators(self) -> bool {
        matches!(self, Self::ActuatorVariant | Self::ActuatorLowOverhead)
    }

    pub fn is_low_overhead(self) -> bool {
        matches!(
            self,
            Self::TwoSpeciesLowOverhead | Self::ActuatorLowOverhead
        )
    }
}

impl ConveyorVariant {
    pub fn has_actuator(self) -> bool {
        matches!(self, Self::ActuatorVariant | Self::ActuatorSingleRegister)
    }

    /// Sites per register block.
    pub fn block_len(self) -> usize {
        match self {
            Self::ThreeRegister | Self::ActuatorVariant => 3,
            Self::SingleRegister | Self::ActuatorSingleRegister => 1,
        }
    }
}

impl Geometry {
    pub fn ladder_variant(&self) -> Option<LadderVariant> {
        (self.kind == GeometryKind::Ladder)
            .then(|| self.variant.parse().ok())
            .flatten()
    }

    pub fn conveyor_variant(&self) -> Option<ConveyorVariant> {
        (self.kind == GeometryKind::Conveyor)
            .then(|| self.variant.parse().ok())
            .flatten()
    }

    pub fn ladder_row_len(&self) -> usize {
        2 * self.n + 3
    }

    /// Index of ladder site `(row, col)`.
    pub fn ladder_site(&self, row: usize, col: usize) -> usize {
        row * self.ladder_row_len() + col
    }

    /// Index of the junction node between rows `r` and `r + 1`.
    pub fn ladder_junction(&self, r: usize) -> usize {
        self.n * self.ladder_row_len() + r
    }

    /// Loop index of `Q_i` for `i` in `1..=N`.
    pub fn conveyor_q(&self, i: usize) -> usize {
        let block = self
            .conveyor_variant()
            .map(ConveyorVariant::block_len)
            .unwrap_or(1);
        (i - 1) * (block + 1)
    }

    /// Loop indices of register block `S_{i,i+1}` for `i` in `1..=N`.
    pub fn conveyor_block(&self, i: usize) -> Vec<usize> {
        let block = self
            .conveyor_variant()
            .map(ConveyorVariant::block_len)
            .unwrap_or(1);
        let start = self.conveyor_q(i) + 1;
        (start..start + block).collect()
    }

    /// Index of the off-loop node.
    pub fn conveyor_offloop(&self) -> usize {
        let block = self
            .conveyor_variant()
            .map(ConveyorVariant::block_len)
            .unwrap_or(1);
        self.n * (block + 1)
    }
}

/// Accumulates nodes and edges before freezing them into a graph.
struct Draft {
    species: Vec<String>,
    nodes: Vec<(String, CouplingClass, Role)>,
    edges: Vec<(usize, usize)>,
    masks: Vec<RegionMask>,
}

impl Draft {
    fn new(species: &[&str]) -> Self {
        Self {
            species: species.iter().map(|s| s.to_string()).collect(),
            nodes: vec![],
            edges: vec![],
            masks: vec![],
        }
    }

    fn node(&mut self, species: &str, class: CouplingClass, role: Role) -> usize {
        self.nodes.push((species.to_string(), class, role));
        self.nodes.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.edges.push((a.min(b), a.max(b)));
    }

    fn finish(self, geometry: Geometry) -> ArchitectureGraph {
        let species = self
            .species
            .iter()
            .enumerate()
            .map(|(k, id)| Species {
                id: id.clone(),
                drive_frequency: default_drive_frequency(k),
            })
            .collect();
        let nodes = self
            .nodes
            .into_iter()
            .enumerate()
            .map(|(index, (species, class, role))| QubitNode {
                index,
                species,
                class,
                role,
                transition_frequency: 0.0,
            })
            .collect();
        ArchitectureGraph::with_derived_frequencies(
            DEFAULT_ZETA,
            DEFAULT_BASE_COUPLING,
            species,
            nodes,
            self.edges,
            self.masks,
            Some(geometry),
        )
    }
}

fn check_even(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "N must be even and at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Builds an `N`-row ladder. Its masks are available through [`ArchitectureGraph::masks`].
pub fn build_ladder(n: usize, variant: LadderVariant) -> Result<ArchitectureGraph> {
    use CouplingClass::*;
    check_even(n)?;
    let low = variant.is_low_overhead();
    let mut species = if low {
        vec!["A", "B"]
    } else {
        vec!["A", "B", "C"]
    };
    if variant.has_actuators() {
        species.push("QA");
    }
    let mut d = Draft::new(&species);
    let row_len = 2 * n + 3;
    for _row in 0..n {
        for col in 0..row_len {
            let sp = if !low && col == row_len - 1 {
                "C"
            } else if col % 2 == 0 {
                "A"
            } else {
                "B"
            };
            let class = match (low, col) {
                (true, 0) => DoubleCrossed,
                (false, 0 | 1) => Crossed,
                _ => Regular,
            };
            d.node(sp, class, Role::Computational);
        }
        let base = d.nodes.len() - row_len;
        for col in 0..row_len - 1 {
            d.edge(base + col, base + col + 1);
        }
    }
    for r in 0..n - 1 {
        let idx = if variant.has_actuators() {
            d.node("QA", Regular, Role::Actuator)
        } else if low {
            d.node(
                "B",
                if r % 2 == 0 { DoubleCrossed } else { Crossed },
                Role::Coupler,
            )
        } else {
            d.node("C", Crossed, Role::Coupler)
        };
        let upper = r * row_len + 2 * n;
        let lower = (r + 1) * row_len + 2 * n;
        d.edge(upper, idx);
        d.edge(idx, lower);
        if variant.has_actuators() {
            d.masks.push(RegionMask {
                name: format!("junction{r}"),
                kind: MaskKind::Bridge,
                members: vec![idx, upper, lower],
            });
        }
    }
    Ok(d.finish(Geometry {
        kind: GeometryKind::Ladder,
        n,
        variant: variant.as_str().into(),
        modules: vec![],
    }))
}

/// Builds an `N`-site conveyor belt.
///
/// In the single-register loops odd `Q`s are crossed, `Q2` is double-crossed,
/// the other even `Q`s are regular, the links `S_{2m,2m+1}` (including
/// `S_{N,1}`) are crossed and the off-loop node is double-crossed. In the
/// three-register loops the middle site of `S_{12}` and the off-loop node are
/// the crossed qubits.
pub fn build_conveyor_belt(n: usize, variant: ConveyorVariant) -> Result<ArchitectureGraph> {
    use CouplingClass::*;
    check_even(n)?;
    let mut species = vec!["A", "B"];
    if variant.has_actuator() {
        species.push("QA");
    }
    let mut d = Draft::new(&species);
    let block = variant.block_len();
    let loop_len = n * (block + 1);
    for pos in 0..loop_len {
        let (i, offset) = (pos / (block + 1) + 1, pos % (block + 1));
        let sp = if pos % 2 == 0 { "A" } else { "B" };
        let (class, role) = if block == 1 {
            match offset {
                0 if i == 2 => (DoubleCrossed, Role::Computational),
                0 if i % 2 == 1 => (Crossed, Role::Computational),
                0 => (Regular, Role::Computational),
                _ if i % 2 == 0 => (Crossed, Role::Register),
                _ => (Regular, Role::Register),
            }
        } else {
            match offset {
                0 => (Regular, Role::Computational),
                2 if i == 1 => (Crossed, Role::Register),
                _ => (Regular, Role::Register),
            }
        };
        d.node(sp, class, role);
    }
    for pos in 0..loop_len {
        d.edge(pos, (pos + 1) % loop_len);
    }
    let off = if variant.has_actuator() {
        d.node("QA", Regular, Role::Actuator)
    } else if block == 1 {
        d.node("B", DoubleCrossed, Role::Coupler)
    } else {
        d.node("B", Crossed, Role::Coupler)
    };
    let partners: Vec<usize> = (1..=n.min(3)).map(|i| (i - 1) * (block + 1)).collect();
    for &q in &partners {
        d.edge(q, off);
    }
    let mut members = vec![off];
    members.extend(&partners);
    d.masks.push(RegionMask {
        name: "offloop".into(),
        kind: MaskKind::Bridge,
        members,
    });
    Ok(d.finish(Geometry {
        kind: GeometryKind::Conveyor,
        n,
        variant: variant.as_str().into(),
        modules: vec![],
    }))
}

/// A single actuator (last index, species `QA`) coupled to `m` regular
/// species-A qubits. `m = 1` gives the qubit plus partner pair used for
/// freezing studies.
pub fn build_star(m: usize) -> Result<ArchitectureGraph> {
    if m == 0 {
        return Err(Error::InvalidParameter(
            "star needs at least one neighbour".into(),
        ));
    }
    let mut d = Draft::new(&["A", "QA"]);
    for _ in 0..m {
        d.node("A", CouplingClass::Regular, Role::Computational);
    }
    let act = d.node("QA", CouplingClass::Regular, Role::Actuator);
    for q in 0..m {
        d.edge(q, act);
    }
    Ok(d.finish(Geometry {
        kind: GeometryKind::Star,
        n: m,
        variant: "actuator".into(),
        modules: vec![],
    }))
}

fn fresh_species_id(graph: &ArchitectureGraph, stem: &str) -> String {
    (1..)
        .map(|k| format!("{stem}{k}"))
        .find(|id| !graph.has_species(id))
        .expect("unbounded search")
}

/// Adds one actuator per region member, all on one new drive line, plus a
/// `freeze_region` mask over the region.
pub fn attach_actuator_layer(
    graph: &ArchitectureGraph,
    region: &[usize],
) -> Result<ArchitectureGraph> {
    if region.is_empty() {
        return Ok(graph.clone());
    }
    let mut seen = BTreeSet::new();
    for &q in region {
        let node = graph.node(q)?;
        match node.role {
            Role::Computational | Role::Register => {}
            other => {
                return Err(Error::InvalidRegion(
                    q,
                    format!("role {other:?} cannot host an actuator"),
                ))
            }
        }
        if !seen.insert(q) {
            return Err(Error::InvalidRegion(q, "listed twice".into()));
        }
    }
    let layer = fresh_species_id(graph, "QA");
    let layer_no = graph
        .masks()
        .iter()
        .filter(|m| m.kind == MaskKind::FreezeRegion)
        .count()
        + 1;
    let k = graph.species().len();
    let (zeta, base, mut species, mut nodes, mut edges, mut masks, geometry) =
        graph.clone().into_parts();
    species.push(Species {
        id: layer.clone(),
        drive_frequency: default_drive_frequency(k),
    });
    for &q in region {
        let index = nodes.len();
        nodes.push(QubitNode {
            index,
            species: layer.clone(),
            class: CouplingClass::Regular,
            role: Role::Actuator,
            transition_frequency: 0.0,
        });
        edges.push((q, index));
    }
    masks.push(RegionMask {
        name: format!("freeze{layer_no}"),
        kind: MaskKind::FreezeRegion,
        members: seen.into_iter().collect(),
    });
    Ok(ArchitectureGraph::with_derived_frequencies(
        zeta, base, species, nodes, edges, masks, geometry,
    ))
}

/// Joins two modules with a bridge actuator coupled to `boundary.0` (in `a`)
/// and `boundary.1` (in `b`). Species are prefixed `L.` and `R.`; the bridge
/// line is `BR`. Nodes of `a` come first, then `b`, then the bridge.
pub fn bridge_between(
    a: &ArchitectureGraph,
    b: &ArchitectureGraph,
    boundary: (usize, usize),
) -> Result<ArchitectureGraph> {
    if std::ptr::eq(a, b) {
        return Err(Error::SameModule);
    }
    a.require_valid()?;
    b.require_valid()?;
    let (qa, qb) = boundary;
    if qa >= a.n_qubits() {
        return Err(Error::InvalidParameter(format!(
            "boundary qubit {qa} not in left module"
        )));
    }
    if qb >= b.n_qubits() {
        return Err(Error::InvalidParameter(format!(
            "boundary qubit {qb} not in right module"
        )));
    }
    let mut species = Vec::new();
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut masks = Vec::new();
    let mut modules = Vec::new();
    for (prefix, module) in [("L", a), ("R", b)] {
        let offset = nodes.len();
        species.extend(module.species().iter().map(|s| Species {
            id: format!("{prefix}.{}", s.id),
            drive_frequency: s.drive_frequency,
        }));
        nodes.extend(module.nodes().iter().map(|n| QubitNode {
            index: n.index + offset,
            species: format!("{prefix}.{}", n.species),
            class: n.class,
            role: n.role,
            transition_frequency: 0.0,
        }));
        edges.extend(
            module
                .edges()
                .iter()
                .map(|&(x, y)| (x + offset, y + offset)),
        );
        masks.extend(module.masks().iter().map(|m| RegionMask {
            name: format!("{prefix}.{}", m.name),
            kind: m.kind,
            members: m.members.iter().map(|&x| x + offset).collect(),
        }));
        masks.push(RegionMask {
            name: prefix.into(),
            kind: MaskKind::ModuleBoundary,
            members: (offset..offset + module.n_qubits()).collect(),
        });
        modules.push(ModuleGeometry {
            name: prefix.into(),
            offset,
            n_nodes: module.n_qubits(),
            geometry: module.geometry().cloned().map(Box::new),
        });
    }
    let bridge_species = "BR".to_string();
    let k = species.len();
    species.push(Species {
        id: bridge_species.clone(),
        drive_frequency: default_drive_frequency(k),
    });
    let bridge = nodes.len();
    let qb_global = qb + a.n_qubits();
    nodes.push(QubitNode {
        index: bridge,
        species: bridge_species,
        class: CouplingClass::Regular,
        role: Role::Actuator,
        transition_frequency: 0.0,
    });
    edges.push((qa, bridge));
    edges.push((qb_global, bridge));
    masks.push(RegionMask {
        name: "bridge".into(),
        kind: MaskKind::Bridge,
        members: vec![bridge, qa, qb_global],
    });
    let geometry = Geometry {
        kind: GeometryKind::Modular,
        n: 2,
        variant: "bridged".into(),
        modules,
    };
    Ok(ArchitectureGraph::with_derived_frequencies(
        a.zeta(),
        a.base_coupling(),
        species,
        nodes,
        edges,
        masks,
        Some(geometry),
    ))
}
