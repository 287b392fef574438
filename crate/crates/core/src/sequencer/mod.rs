//! Compilation of named operations into global-control instruction lists.
//!
//! A [`GateRequest`] is resolved against the graph, compiled into a
//! [`ScheduleIR`] and replayed on either engine. Transport steps come from a
//! built-in library that is checked against the transport contracts the
//! first time it is used. [`search_sequence`] finds short pulse strings for
//! small targets by breadth-first search.

mod compile;
mod contract;
mod ir;
mod library;
mod replay;
mod request;
mod search;

pub use compile::compile;
pub use contract::{contract_basis, contract_inputs, contract_superposition, expected_output};
pub use ir::{Instruction, ScheduleIR};
pub use library::{library, Library, LibraryEntry, BUILTIN_LIBRARY, LIBRARY_FIDELITY};
pub use replay::{contract_fidelity, lower_to_schedule, replay, replay_report, Engine};
pub use request::{GateName, GateRequest};
pub use search::{
    default_alphabet, search_sequence, search_sequence_with, SearchTarget, ALPHABET_ANGLES,
    DEFAULT_NODE_CAP, SEARCH_AMPLITUDE_BUDGET, SEARCH_MAX_DEPTH, SEARCH_MAX_QUBITS,
    SEARCH_TOLERANCE,
};
