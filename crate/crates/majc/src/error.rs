use thiserror::Error;

/// Crate-wide error type. Variants are grouped loosely by the layer that
/// raises them; `exit_code` maps them onto the CLI exit-code contract.
#[derive(Debug, Error)]
pub enum Error {
    // graph construction and parsing
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge `{0}` -- `{1}`")]
    DuplicateEdge(String, String),
    #[error("edge endpoint `{0}` is not a listed vertex")]
    DanglingEndpoint(String),
    #[error("isolated vertex `{0}` (enable allow_isolated to permit)")]
    IsolatedVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("malformed vertex name `{0}` for this generator")]
    MalformedName(String),

    // colourings and lists
    #[error("vertex `{0}` is not in the colouring domain")]
    NotInDomain(String),
    #[error("colouring is not total: `{0}` is uncoloured")]
    NotTotal(String),
    #[error("a horizon is required to inspect infinite-degree vertex `{0}`")]
    HorizonRequired(String),
    #[error("empty colour list for `{0}`")]
    EmptyList(String),
    #[error("list for `{0}` must have exactly {1} colours")]
    BadListSize(String, usize),
    #[error("colour {1} is not in the list of `{0}`")]
    ColourNotInList(String, u32),

    // closure and saturation
    #[error("vertex `{0}` in the queried set has infinite degree; this query needs every degree finite")]
    InfiniteDegreeInSet(String),
    #[error("a budget is required for closure over a lazy graph")]
    BudgetRequired,
    #[error("saturation construction is defined for mu = aleph0 only")]
    FiniteMuRejected,
    #[error("claimed set size {0} does not match the {1} materialised members")]
    ClaimedSizeMismatch(usize, usize),
    #[error("boundary vertex `{0}` has infinite degree; extension requires a finite materialised closure")]
    InfiniteBoundaryVertex(String),

    // streams
    #[error("family member {0} is declared finite; refinement requires aleph0 members")]
    FiniteFamilyMember(usize),
    #[error("stream for member {0} ended despite an aleph0 declaration")]
    StreamEnded(usize),
    #[error("stream scan stalled after {0} skips without finding a fresh element")]
    StalledStream(usize),

    // sublist engine
    #[error("horizon must be at least 1")]
    BadHorizon,
    #[error("`{0}` must be the first vertex of the enumeration")]
    XNotFirst(String),
    #[error("unknown coverage pair ({0}, {1})")]
    UnknownCoveragePair(String, u32),

    // solver
    #[error("assignment enumeration would visit {0} colourings, above the guard of {1}")]
    GuardExceeded(u128, u128),
    #[error("invalid solve instance: {0}")]
    InvalidInstance(String),
    #[error("exhaustive choosability is limited to {1} vertices (got {0})")]
    TooLargeForExhaustive(usize, usize),
    #[error("sampled choosability is limited to {1} vertices (got {0})")]
    TooLargeForSampled(usize, usize),

    // boundary extension
    #[error("witness sets overlap at `{0}`")]
    OverlappingWitnessSets(String),
    #[error("safe-colour assertion failed at `{0}`: {1} safe colours")]
    SafeSetAssertion(String, usize),
    #[error("vertex `{0}` has uncoloured neighbour `{1}` at its extension step")]
    UncolouredNeighbour(String, String),
    #[error("extension order is incomplete; rerun closure with a larger budget")]
    IncompleteOrder,

    // countable runner
    #[error("the base set is not closed: witness `{0}`")]
    NotClosed(String),
    #[error("prefix length {0} exceeds the instance horizon {1}")]
    PrefixExceedsHorizon(usize, usize),
    #[error("adjacency of `{0}` and `{1}` is undecidable without a horizon")]
    AdjacencyUndecidable(String, String),
    #[error("diagonal extraction ran out of surviving colourings at step {0}")]
    NoSurvivors(usize),

    // generators, io, cli
    #[error("unknown generator family `{0}`")]
    UnknownFamily(String),
    #[error("invalid generator parameters: {0}")]
    BadGeneratorParams(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code for the CLI: 1 verification failure, 2 usage, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            Io(_) => 3,
            Json(_) | Usage(_) | UnknownFamily(_) | BadGeneratorParams(_) => 2,
            DuplicateVertex(_) | SelfLoop(_) | DuplicateEdge(_, _) | DanglingEndpoint(_)
            | IsolatedVertex(_) | UnknownVertex(_) | MalformedName(_) | NotInDomain(_)
            | HorizonRequired(_) | EmptyList(_) | BadListSize(_, _) | ColourNotInList(_, _)
            | BudgetRequired | FiniteMuRejected | ClaimedSizeMismatch(_, _)
            | FiniteFamilyMember(_) | BadHorizon
            | XNotFirst(_) | UnknownCoveragePair(_, _) | GuardExceeded(_, _)
            | InvalidInstance(_) | TooLargeForExhaustive(_, _) | TooLargeForSampled(_, _)
            | PrefixExceedsHorizon(_, _) | InfiniteDegreeInSet(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
