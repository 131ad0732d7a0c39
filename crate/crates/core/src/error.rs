use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("reduction system is not confluent at word {word}")]
    NotConfluent { word: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("homological degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },
    #[error("bicomplex map {name} is not defined on {generator}")]
    Position { name: String, generator: String },
    #[error("no listed comparison pattern for middle tuple {0}")]
    PatternUnsupported(String),
    #[error("no preimage exists in cell {0}")]
    NoPreimage(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("class does not reduce to the named basis of cell {0}")]
    BasisMismatch(String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("window exceeds the resource guard: {0}")]
    ResourceGuard(String),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("derivation does not preserve the relations: {0}")]
    IllDefined(String),
    #[error("no lifting exists at degree {0}")]
    NoSolution(u32),
    #[error("lifting {name} is only tabulated up to degree {max}")]
    NotTabulated { name: String, max: u32 },
    #[error("no intermediate-series parameters fit: {0}")]
    FitImpossible(String),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Usage(String),
    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),
}

impl RunError {
    /// Process exit status: 2 for usage errors, 3 for the resource guard.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 2,
            RunError::ResourceGuard(_) => 3,
        }
    }
}
