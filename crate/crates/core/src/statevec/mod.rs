//! Dense state vectors, explicit operators and the metrics used to compare them.
//!
//! Basis convention: qubit 0 is the most significant bit of a basis index and
//! `|g>` corresponds to bit value 0. Explicit matrices are limited to
//! [`MAX_DENSE_QUBITS`] qubits; larger registers are only touched through the
//! in-place methods on [`StateVector`].

mod metrics;
mod operator;
mod rotation;
mod state;

pub use metrics::{
    average_gate_fidelity, average_gate_fidelity_block, operator_distance,
    phase_insensitive_distance_general, spectral_norm, DistanceMode,
};
pub use operator::{
    dense_controlled_rotation, ground_projector, DenseOperator, MAX_DENSE_QUBITS, UNITARY_TOLERANCE,
};
pub use rotation::{
    mat2_adjoint, mat2_max_diff, mat2_mul, mat2_unitarity_defect, Mat2, RotationSpec,
};
pub use state::{
    apply_projector_controlled_rotation, qubit_mask, state_fidelity, StateVector, NORM_TOLERANCE,
};
