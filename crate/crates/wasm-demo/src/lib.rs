//! Browser bindings for the interactive demo page in `www/`.
//!
//! Each export takes plain values and returns a JSON string so the page needs
//! no generated TypeScript types. The same functions are callable natively,
//! which is how the tests exercise them.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use actsim::architecture::{
    build_conveyor_belt, build_ladder, build_star, resource_summary, validate, ArchitectureGraph,
    ResourceSummary,
};
use actsim::effective::SpeciesPulse;
use actsim::exact::{
    effective_vs_exact, propagate, schedule_for_pulses, SimParams, SweepOp, SweepRow,
};
use actsim::statevec::{qubit_mask, StateVector};
use actsim::Error;

/// Largest logical size the builder panel accepts; keeps the page responsive.
pub const MAX_DEMO_N: usize = 16;
pub const MAX_CURVE_POINTS: usize = 400;

#[derive(Debug, Serialize)]
pub struct BuildSummary {
    pub kind: String,
    pub n: usize,
    pub variant: String,
    pub nodes: usize,
    pub edges: usize,
    pub valid: bool,
    pub resources: ResourceSummary,
    /// Node index, species, class and role, for the node table.
    pub node_table: Vec<(usize, String, String, String)>,
}

/// Builds a geometry and reports its resources.
pub fn build_summary(kind: &str, n: usize, variant: &str) -> Result<BuildSummary, Error> {
    if n > MAX_DEMO_N {
        return Err(Error::InvalidParameter(format!(
            "demo limited to N <= {MAX_DEMO_N}"
        )));
    }
    let graph = match kind {
        "ladder" => build_ladder(n, variant.parse()?)?,
        "conveyor" => build_conveyor_belt(n, variant.parse()?)?,
        "star" => build_star(n)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown geometry `{other}`"
            )))
        }
    };
    Ok(BuildSummary {
        kind: kind.to_string(),
        n,
        variant: variant.to_string(),
        nodes: graph.n_qubits(),
        edges: graph.edges().len(),
        valid: validate(&graph).ok,
        resources: resource_summary(&graph)?,
        node_table: graph
            .nodes()
            .iter()
            .map(|q| {
                (
                    q.index,
                    q.species.clone(),
                    format!("{:?}", q.class).to_lowercase(),
                    format!("{:?}", q.role).to_lowercase(),
                )
            })
            .collect(),
    })
}

/// Star graph matching the operation: two neighbours for cz, three for ccz,
/// one partner for the single-qubit pulses.
fn sweep_graph(op: SweepOp) -> Result<ArchitectureGraph, Error> {
    build_star(match op {
        SweepOp::Cz => 2,
        SweepOp::Ccz => 3,
        SweepOp::Freeze | SweepOp::PiPulse => 1,
    })
}

/// Exact versus blockade-limit comparison on the matching star graph.
pub fn eta_sweep(op: &str, etas: &[f64]) -> Result<Vec<SweepRow>, Error> {
    let op: SweepOp = op.parse()?;
    let graph = sweep_graph(op)?;
    let base = SimParams::for_eta(graph.zeta(), 1.0)?;
    effective_vs_exact(&graph, op, etas, &base, false)
}

#[derive(Debug, Serialize)]
pub struct CurvePoint {
    /// Nominal pulse area in radians.
    pub area: f64,
    pub excited: f64,
}

/// Excited population of a driven qubit against nominal pulse area, with its
/// actuator partner excited (`frozen`) or in the ground state.
pub fn rabi_curve(eta: f64, frozen: bool, points: usize) -> Result<Vec<CurvePoint>, Error> {
    if !(2..=MAX_CURVE_POINTS).contains(&points) {
        return Err(Error::InvalidParameter(format!(
            "points must lie in 2..={MAX_CURVE_POINTS}"
        )));
    }
    let graph = build_star(1)?;
    let params = SimParams::for_eta(graph.zeta(), eta)?;
    let (target, actuator) = (0, graph.actuators()[0]);
    let species = graph.nodes()[target].species.clone();
    let n = graph.n_qubits();
    let start = if frozen {
        StateVector::basis(n, qubit_mask(n, actuator))?
    } else {
        StateVector::ground(n)
    };
    let max_area = 4.0 * std::f64::consts::PI;
    (0..points)
        .map(|k| {
            let area = max_area * k as f64 / (points - 1) as f64;
            let pulse = SpeciesPulse::physical(species.clone(), area, [1.0, 0.0, 0.0])?;
            let schedule = schedule_for_pulses(&graph, &[pulse], &params)?;
            let out = propagate(&graph, &schedule, &params, &start)?;
            Ok(CurvePoint {
                area,
                excited: out.excited_population(target)?,
            })
        })
        .collect()
}

fn to_js<T: Serialize>(value: Result<T, Error>) -> Result<String, JsError> {
    let value = value.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = buildSummary)]
pub fn build_summary_js(kind: &str, n: usize, variant: &str) -> Result<String, JsError> {
    to_js(build_summary(kind, n, variant))
}

#[wasm_bindgen(js_name = etaSweep)]
pub fn eta_sweep_js(op: &str, etas: Vec<f64>) -> Result<String, JsError> {
    to_js(eta_sweep(op, &etas))
}

#[wasm_bindgen(js_name = rabiCurve)]
pub fn rabi_curve_js(eta: f64, frozen: bool, points: usize) -> Result<String, JsError> {
    to_js(rabi_curve(eta, frozen, points))
}
