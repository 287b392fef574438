use serde::Serialize;
use sha2::{Digest, Sha256};

use actsim::architecture::{to_json, ArchitectureGraph, ResourceSummary, ValidationReport};
use actsim::exact::SweepRow;

/// The JSON document every subcommand except `build` prints on stdout.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: CommandEcho,
    pub graph: GraphDigest,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resources: Option<ResourceSummary>,
    pub gates: Vec<GateResult>,
    pub sweeps: Vec<SweepTable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

#[derive(Debug, Serialize)]
pub struct CommandEcho {
    pub subcommand: String,
    pub args: Vec<String>,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
pub struct GraphDigest {
    pub nodes: usize,
    pub edges: usize,
    pub species: usize,
    pub actuators: usize,
    /// SHA-256 of the canonical architecture JSON.
    pub sha256: String,
}

impl GraphDigest {
    pub fn of(graph: &ArchitectureGraph) -> Self {
        let hash = Sha256::digest(to_json(graph).as_bytes());
        Self {
            nodes: graph.n_qubits(),
            edges: graph.edges().len(),
            species: graph.species().len(),
            actuators: graph.actuators().len(),
            sha256: format!("{hash:x}"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GateResult {
    pub gate: String,
    pub engine: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    pub instructions: usize,
    pub pulses: usize,
    pub inputs: usize,
    /// Smallest state fidelity against the contract over all inputs.
    pub fidelity: f64,
    pub threshold: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitarity_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SweepTable {
    pub op: String,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Serialize)]
pub struct SearchResult {
    pub gate: String,
    pub max_depth: usize,
    pub alphabet: usize,
    pub found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ir: Option<String>,
}

#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub total_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compile_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay_s: Option<f64>,
}

impl RunReport {
    pub fn new(command: CommandEcho, graph: &ArchitectureGraph) -> Self {
        Self {
            command,
            graph: GraphDigest::of(graph),
            validation: None,
            resources: None,
            gates: Vec::new(),
            sweeps: Vec::new(),
            search: None,
            timings: None,
        }
    }
}
