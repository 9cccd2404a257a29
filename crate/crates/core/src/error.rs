use thiserror::Error;

/// Errors produced by construction, parsing and the bounded searches.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(String),
    #[error("lasso loop must be non-empty")]
    EmptyLoop,
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("invalid transducer: {0}")]
    InvalidTransducer(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("index {0} is out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point is not in the transducer's domain")]
    NotInDomain,
    #[error("the point's index projection solves the instance, no discontinuity witness exists")]
    SolutionPoint,
    #[error("malformed solution: {0}")]
    MalformedSolution(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error("manifest kind mismatch: expected {expected}, found {found}")]
    KindMismatch {
        expected: &'static str,
        found: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
