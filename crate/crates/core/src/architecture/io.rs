use serde::{Deserialize, Serialize};
use std::path::Path;

use super::graph::{
    ArchitectureGraph, CouplingClass, Geometry, QubitNode, RegionMask, Role, Species,
};
use crate::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    zeta: f64,
    base_coupling: f64,
    species: Vec<Species>,
    nodes: Vec<NodeFile>,
    edges: Vec<[usize; 2]>,
    masks: Vec<RegionMask>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geometry: Option<Geometry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeFile {
    index: usize,
    species: String,
    class: CouplingClass,
    role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transition_frequency: Option<f64>,
}

/// Serialises a graph to the architecture JSON format (pretty printed).
pub fn to_json(graph: &ArchitectureGraph) -> String {
    let file = GraphFile {
        zeta: graph.zeta(),
        base_coupling: graph.base_coupling(),
        species: graph.species().to_vec(),
        nodes: graph
            .nodes()
            .iter()
            .map(|n| NodeFile {
                index: n.index,
                species: n.species.clone(),
                class: n.class,
                role: n.role,
                transition_frequency: Some(n.transition_frequency),
            })
            .collect(),
        edges: graph.edges().iter().map(|&(a, b)| [a, b]).collect(),
        masks: graph.masks().to_vec(),
        geometry: graph.geometry().cloned(),
    };
    serde_json::to_string_pretty(&file).expect("graph serialisation cannot fail")
}

/// Parses the architecture JSON format. Nodes without an explicit
/// `transition_frequency` receive the derived value. The result is not
/// validated; call [`super::validate`] for that.
pub fn from_json(text: &str) -> Result<ArchitectureGraph> {
    let file: GraphFile = serde_json::from_str(text)?;
    let nodes_missing: Vec<bool> = file
        .nodes
        .iter()
        .map(|n| n.transition_frequency.is_none())
        .collect();
    let nodes: Vec<QubitNode> = file
        .nodes
        .into_iter()
        .map(|n| QubitNode {
            index: n.index,
            species: n.species,
            class: n.class,
            role: n.role,
            transition_frequency: n.transition_frequency.unwrap_or(f64::NAN),
        })
        .collect();
    let edges = file.edges.into_iter().map(|[a, b]| (a, b)).collect();
    let g = ArchitectureGraph::new(
        file.zeta,
        file.base_coupling,
        file.species,
        nodes,
        edges,
        file.masks,
        file.geometry,
    );
    if !nodes_missing.iter().any(|&m| m) {
        return Ok(g);
    }
    let derived: Vec<f64> = (0..g.n_qubits())
        .map(|i| g.derived_transition_frequency(i).unwrap_or(f64::NAN))
        .collect();
    let (zeta, base, species, mut nodes, edges, masks, geometry) = g.into_parts();
    for (i, node) in nodes.iter_mut().enumerate() {
        if nodes_missing[i] {
            node.transition_frequency = derived[i];
        }
    }
    Ok(ArchitectureGraph::new(
        zeta, base, species, nodes, edges, masks, geometry,
    ))
}

pub fn save(graph: &ArchitectureGraph, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, to_json(graph) + "\n")
}

pub fn load(path: &Path) -> Result<ArchitectureGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Json(format!("{}: {e}", path.display())))?;
    from_json(&text)
}
