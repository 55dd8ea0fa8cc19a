use thiserror::Error;

/// Errors shared across the geometry kernels and pipelines.
#[derive(Debug, Error)]
pub enum GeomError {
    #[error("invalid model point: {0}")]
    InvalidModelPoint(String),
    #[error("side lengths ({0}, {1}, {2}) violate the triangle inequality")]
    NotATriangle(f64, f64, f64),
    #[error("perimeter {perimeter} is not below 2*D_kappa = {limit}")]
    PerimeterTooLarge { perimeter: f64, limit: f64 },
    #[error("geodesic between antipodal points is not unique")]
    NonUniqueGeodesic,
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid polygon domain: {0}")]
    InvalidPolygon(String),
    #[error("point ({0}, {1}) lies outside the domain")]
    OutOfDomain(f64, f64),
    #[error("points are in different connected components")]
    Unreachable,
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("cycle is not null-homologous")]
    NotNullHomologous,
    #[error("ambient complex is not contractible; filling chain not unique")]
    AmbiguousSupport,
    #[error("curve is not simple")]
    NotSimple(String),
    #[error("cut construction failed: {0}")]
    CutConstructionFailed(String),
    #[error("cut search exhausted its resolution budget ({0})")]
    ResolutionExceeded(String),
    #[error("leaf budget {0} exceeded")]
    BudgetExceeded(usize),
    #[error("fan diagonal obstructed at vertex {0}")]
    FanObstructed(usize),
    #[error("glue arclength mismatch: {0} vs {1}")]
    GlueMismatch(f64, f64),
    #[error("majorization image escapes the allowed neighborhood: worst sample at distance {0}")]
    ContainmentViolated(f64),
    #[error("sampled space has no geodesic oracle")]
    NeedsGeodesics,
    #[error("cycle never becomes a boundary within the diameter scale")]
    NoDeath,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GeomError>;
