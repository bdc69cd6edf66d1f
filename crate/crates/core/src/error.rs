use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ground size {0} is outside 1..=30")]
    GroundSize(usize),
    #[error("element {element} is not in the ground set [1..={ground}]")]
    ElementOutOfRange { element: usize, ground: usize },
    #[error("set {0:?} appears twice in the family")]
    DuplicateSet(Vec<usize>),
    #[error("operation needs a nonempty family")]
    EmptyFamily,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid pattern matrix: {0}")]
    InvalidPattern(String),

    #[error("variable name {0:?} is already in use")]
    DuplicateVariable(String),
    #[error("variable name {0:?} does not match [A-Za-z][A-Za-z0-9_]*")]
    InvalidVariableName(String),
    #[error("variable index {index} out of range (model has {len} variables)")]
    VariableIndex { index: usize, len: usize },
    #[error("constraint has no terms")]
    EmptyConstraint,
    #[error("assignment has {got} values but the model has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("LP syntax error at line {line}, column {column}: {message}")]
    LpSyntax { line: usize, column: usize, message: String },
    #[error("unsupported LP feature: {0}")]
    LpUnsupported(String),
    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown {kind} {name:?}")]
    Unknown { kind: &'static str, name: String },
    #[error("formula value {0} is not an integer")]
    NonIntegral(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
