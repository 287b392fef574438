//! Architecture graphs: species-coloured qubits with uniform ZZ edges, the
//! ladder and conveyor-belt builders, resource counting and the JSON file format.
//!
//! Every builder returns a graph that passes [`validate`]: no edge joins two
//! qubits of the same species and every transition frequency equals its
//! drive frequency plus coordination times zeta.

mod builders;
mod graph;
mod io;
mod validate;

pub use builders::*;
pub use graph::*;
pub use io::{from_json, load, save, to_json};
pub use validate::{validate, ValidationReport, Violation};
