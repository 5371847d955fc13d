use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph document is malformed: {0}")]
    Parse(String),
    #[error("vertex list is empty")]
    EmptyGraph,
    #[error("too many vertices: {0} (at most {max} supported)", max = crate::graph::MAX_VERTICES)]
    TooManyVertices(usize),
    #[error("vertex names must be non-empty and free of whitespace: {0:?}")]
    BadVertexName(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop at vertex `{0}`")]
    SelfLoop(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("explicit vertex order is not a permutation of the vertex list")]
    BadOrder,
    #[error("vertex set must be nonempty")]
    EmptyVertexSet,
    #[error("pair ({0}, {1}) must consist of distinct non-adjacent vertices")]
    RankUndefined(String, String),
    #[error("{field}: {message}")]
    Parameter { field: &'static str, message: String },
    #[error("expected 2 or 3 factors, got {0}")]
    FactorCount(usize),
    #[error("subgroup generators must be nontrivial (generator {0} is the identity)")]
    TrivialGenerator(usize),
    #[error("subgroup needs at least one generator")]
    NoGenerators,
    #[error("word does not represent the identity (normal form `{normal_form}`)")]
    NotIdentity { normal_form: String },
    #[error("product of the input words does not equal the reduced word")]
    ProductMismatch,
    #[error("boundary range {start}..{end} is invalid for a boundary of length {len}")]
    BadRange { start: usize, end: usize, len: usize },
    #[error("ball size cap of {0} elements exceeded")]
    BallCap(usize),
    #[error("point `{0}` is not in the ball")]
    OutsideBall(String),
    #[error("endpoint `{0}` lies inside the avoided neighborhood")]
    AvoidanceViolated(String),
    #[error("letter `{0}` of h is not in the support of the four-cycle component")]
    UnsupportedLetter(String),
    #[error("four-cycle is not in the chosen component, or (s, t) is not one of its diagonals")]
    BadBaseCycle,
}

impl Error {
    pub(crate) fn param(field: &'static str, message: impl Into<String>) -> Self {
        Error::Parameter { field, message: message.into() }
    }
}
