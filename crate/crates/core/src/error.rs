use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group table: {0}")]
    MalformedTable(String),
    #[error("table does not define a group: {0}")]
    NotAGroup(String),
    #[error("unsupported group family: {0}")]
    UnsupportedFamily(String),
    #[error("malformed graph: {0}")]
    MalformedGraph(String),
    #[error("invalid spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },
    #[error("subsets belong to different groups")]
    GroupMismatch,
    #[error("connection set is empty")]
    EmptyConnectionSet,
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("element or vertex {index} out of range (size {size})")]
    OutOfRange { index: usize, size: usize },
    #[error("graph is not reflexive")]
    NotReflexive,
    #[error("graph has loops; expected a loopless graph")]
    HasLoops,
    #[error("{what} limited to {cap} vertices, got {got}")]
    SizeCap {
        what: &'static str,
        cap: usize,
        got: usize,
    },
    #[error("no transitivity certificate available")]
    MissingCertificate,
    #[error("graph is not vertex-transitive: no automorphism maps {from} to {to}")]
    NotVertexTransitive { from: usize, to: usize },
    #[error("estimated {estimate} instances exceeds budget {budget}; pass --force to run anyway")]
    BudgetExceeded { estimate: u128, budget: u128 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
