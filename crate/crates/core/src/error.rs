use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed document ({context}): {message}")]
    Malformed { context: String, message: String },
    #[error("loop edge on `{vertex}` ({context})")]
    LoopEdge { vertex: String, context: String },
    #[error("duplicate edge {u}-{v} ({context})")]
    DuplicateEdge { u: String, v: String, context: String },
    #[error("duplicate vertex `{vertex}` ({context})")]
    DuplicateVertex { vertex: String, context: String },
    #[error("unknown vertex `{vertex}` ({context})")]
    UnknownVertex { vertex: String, context: String },
    #[error("the empty graph has no connectivity structure")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("sides do not cover the vertex set; missing {missing:?}")]
    CoverViolation { missing: Vec<String> },
    #[error("edge {0}-{1} joins the two strict sides")]
    CrossingEdge(String, String),
    #[error("separations live in different graphs")]
    AmbientMismatch,
    #[error("empty sequence")]
    EmptySequence,
    #[error("sequence is not {kind} at position {index}")]
    NotIncreasing { index: usize, kind: &'static str },
    #[error("no stable index within the window")]
    WindowExhausted,
    #[error("search budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("separation of order {order} is outside the domain of an orientation of order bound {bound}")]
    OutsideDomain { order: usize, bound: usize },
    #[error("separation is not oriented by this pre-tangle")]
    NotOriented,
    #[error("spine tail vertex `{vertex}` lies in the separator")]
    SpineMeetsSeparator { vertex: String },
    #[error("definitional and corner nestedness tests disagree")]
    CornerDisagreement,
    #[error("no nested minimum-order distinguisher for tangles {0} and {1}")]
    NoNestedCandidate(usize, usize),
    #[error("nested set member {0} is improper")]
    ImproperMember(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("layer {m} exceeds horizon {horizon}")]
    HorizonExceeded { m: usize, horizon: usize },
    #[error("presentation declares no rays inside the window")]
    NoDeclaredRays,
    #[error("direction territory is empty")]
    EmptyTerritory,
    #[error("chain item {item} differs between layers {layer} and {next}")]
    IncoherentChain { item: usize, layer: usize, next: usize },
    #[error("selection window too short; completed prefix {completed:?}")]
    WindowTooShort { completed: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;
