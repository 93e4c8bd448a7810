use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("group closure exceeds the order cap of {cap}")]
    GroupTooLarge { cap: usize },
    #[error("group of order {order} exceeds the character-table cap of {cap}; supply a table")]
    TableTooLarge { order: usize, cap: usize },
    #[error("invalid character table: {0}")]
    InvalidTable(String),
    #[error("class functions belong to different groups")]
    GroupMismatch,
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("element {element} does not normalize the subgroup")]
    NotInNormalizer { element: usize },
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("complex is not regular for the action")]
    NotRegularized,
    #[error("regularity not reached after {0} barycentric subdivisions")]
    RegularizationFailed(usize),
    #[error("not a subcomplex: {0}")]
    NotSubcomplex(String),
    #[error("pseudomanifold check failed at vertex {vertex}: {reason}")]
    NotPseudomanifold { vertex: String, reason: String },
    #[error("element {element} does not stabilize the stratum component at the basepoint")]
    NotStabilizing { element: usize },
    #[error("stratification: {0}")]
    Stratification(String),
    #[error("stratum {stratum} has codimension {codimension}; the stratified formula needs codimension at least 2")]
    CodimensionOne { stratum: String, codimension: usize },
    #[error("invalid bundle data: {0}")]
    InvalidBundle(String),
    #[error("equivariance violated: {0}")]
    EquivarianceViolation(String),
    #[error("invalid index data: {0}")]
    InvalidIndexData(String),
    #[error("internal consistency check failed: {0}")]
    Defect(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
