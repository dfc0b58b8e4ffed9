use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("{names} generator names supplied for a Coxeter matrix of size {size}")]
    SizeMismatch { names: usize, size: usize },
    #[error("invalid Coxeter matrix: {0}")]
    InvalidCoxeter(String),
    #[error("class budget exceeded: more than {cap} elements at length {length}")]
    BudgetExceeded { cap: usize, length: usize },
    #[error("length {requested} exceeds the enumerated horizon {horizon}")]
    HorizonExceeded { requested: usize, horizon: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("left gcd is not unique: {0} maximal common left divisors")]
    GcdNotUnique(usize),
    #[error("element is not a left divisor")]
    NotADivisor,
    #[error("subgraph is disconnected")]
    Disconnected,
    #[error("subgraph is empty")]
    EmptySubgraph,
    #[error("no representative of the configuration inside the enumerated ball")]
    NoRepresentativeInHorizon,
    #[error("minimal representative depends on the chosen representative")]
    RepresentativeDependence,
    #[error("configurations of size <= {max_deg} first appear beyond radius {radius}")]
    MissingConfigurations { max_deg: usize, radius: usize },
    #[error("configuration is outside the computed table (size {size}, table degree {max_deg})")]
    OutOfTable { size: usize, max_deg: usize },
    #[error("power series is not invertible (zero constant term)")]
    NotInvertible,
    #[error("zero pivot coefficient")]
    ZeroPivot,
    #[error("no root in the open interval (0,1)")]
    NoRootInUnitInterval,
    #[error("Coxeter matrix is not of finite type")]
    NotFiniteType,
    #[error("Coxeter matrix is decomposable")]
    Decomposable,
    #[error("operation not supported for this presentation: {0}")]
    Unsupported(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
}
