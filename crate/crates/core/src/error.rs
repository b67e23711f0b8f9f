use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("points p{0} and p{1} share a coordinate")]
    DuplicateCoordinate(usize, usize),

    #[error("point p{0} is not connected to the rest of the graph")]
    UnderdeterminedGraph(usize),

    #[error("instance has {n} points, brute-force cap is {cap}")]
    InstanceTooLarge { n: usize, cap: usize },

    #[error("pinned coordinates are inconsistent: {0}")]
    InconsistentPins(String),

    #[error("unknown point p{0}")]
    UnknownPoint(usize),

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("edge {0} has no length")]
    MissingEdge(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("adversary has no realizable answer: {0}")]
    InconsistentStrategy(String),

    #[error("oracle protocol violation: {0}")]
    Protocol(String),

    #[error("jewel gadget {0} of the rigid core is not line rigid")]
    CoreNotRigid(usize),

    #[error("no feasible triplet for link group {0}")]
    NoFeasibleTriplet(usize),

    #[error("no feasible leaf at core point p{0}")]
    NoFeasibleLeaf(usize),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
