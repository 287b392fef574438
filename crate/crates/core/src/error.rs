use thiserror::Error;

/// Every failure reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("target qubit {0} is listed among its own control neighbours")]
    TargetInNeighbors(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("operator is not unitary (defect {0:.3e})")]
    NotUnitary(f64),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("dense representation limited to {limit} qubits, requested {requested}")]
    DenseLimit { limit: usize, requested: usize },
    #[error("invalid rotation axis: norm {0}")]
    InvalidAxis(f64),

    #[error("invalid geometry parameter: {0}")]
    InvalidParameter(String),
    #[error("architecture graph is invalid: {0}")]
    InvalidGraph(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("node {0} is not an actuator")]
    NotAnActuator(usize),
    #[error("region member {0} is not eligible: {1}")]
    InvalidRegion(usize, String),
    #[error("modules must be distinct graphs")]
    SameModule,
    #[error("graph geometry does not support this operation: {0}")]
    GeometryMismatch(String),

    #[error("charge of actuator {0} is blocked by an excited neighbour")]
    BlockedCharge(usize),
    #[error("actuator {0} is not at a definite level ({1})")]
    ActuatorLevel(usize, String),
    #[error("node {0} has no actuator partner")]
    MissingPartner(usize),
    #[error("state leaks out of the code space (weight {0:.3e})")]
    Leakage(f64),
    #[error("encoding position {k} outside 0..={max}")]
    PositionOutOfRange { k: usize, max: usize },
    #[error("logical amplitude vector has length {got}, expected {expected}")]
    LogicalLength { got: usize, expected: usize },
    #[error("bridge actuator {0} is excited: modules are isolated")]
    BridgeClosed(usize),

    #[error("pulse cannot be produced by a single drive: {0}")]
    UnrealizablePulse(String),
    #[error("unitarity tolerance violated after refinement (defect {0:.3e})")]
    UnitarityViolated(f64),
    #[error("simultaneous segments drive coupled species `{0}` and `{1}`")]
    OverlappingSupports(String, String),
    #[error("invalid simulation parameter: {0}")]
    InvalidSimParams(String),
    #[error("unsupported operation `{0}`")]
    UnsupportedOp(String),

    #[error("IR parse error on line {line}: {msg}")]
    IrParse { line: usize, msg: String },
    #[error("invalid gate request: {0}")]
    InvalidRequest(String),
    #[error("no library sequence for {0}")]
    NoLibrarySequence(String),
    #[error("sequence library entry `{0}` failed its postcondition: {1}")]
    LibraryCheck(String, String),
    #[error("search space exceeded the cap of {0} states")]
    SearchOverflow(usize),

    #[error("JSON error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
