use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GbsError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown half-edge `{0}`")]
    UnknownHalfEdge(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("broken path: step {0} does not start where the previous step ends")]
    BrokenPath(usize),
    #[error("orientation character is nontrivial; negative cycle [{}]", witness.join(", "))]
    NontrivialOrientation { witness: Vec<String> },
    #[error("{0}")]
    Move(String),
    #[error("move {index} failed: {source}")]
    Script {
        index: usize,
        #[source]
        source: Box<GbsError>,
    },
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("invalid covering: {0}")]
    Covering(String),
    #[error("invalid profile: {0}")]
    Profile(String),
}

pub type GbsResult<T> = Result<T, GbsError>;
