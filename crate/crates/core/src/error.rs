use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported genus {genus} (supported: {supported})")]
    UnsupportedGenus { genus: usize, supported: &'static str },

    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: usize, right: usize },

    #[error("characteristic parity: expected {expected}, got {got}")]
    WrongParity { expected: &'static str, got: String },

    #[error("cannot parse characteristic {0:?}")]
    ParseCharacteristic(String),

    #[error("invalid Siegel point: {0}")]
    InvalidSiegelPoint(String),

    #[error("imaginary part too close to degenerate: smallest eigenvalue {lambda_min:e} <= {margin:e}")]
    IllConditionedTau { lambda_min: f64, margin: f64 },

    #[error("matrix is not symplectic")]
    NotSymplectic,

    #[error("c*tau + d is numerically singular (condition estimate {condition:e})")]
    SingularCocycle { condition: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("thetanull too close to zero: |value| = {value:e}, tail bound {tail_bound:e}")]
    NearZeroThetanull { value: f64, tail_bound: f64 },

    #[error("series did not converge: {0}")]
    NotConverged(String),

    #[error("integration path leaves the upper half-plane at t = {t}")]
    PathLeavesHalfPlane { t: f64 },

    #[error("q-expansion order {order} exceeds limit {limit}")]
    OrderTooLarge { order: u32, limit: u32 },

    #[error("q-expansion tail bound {bound:e} exceeds {limit:e} at this point")]
    TailTooLarge { bound: f64, limit: f64 },

    #[error("polynomial degree {0} exceeds the supported range")]
    DegreeOverflow(u64),

    #[error("unknown identity {name:?}; known: all, {known}")]
    UnknownIdentity { name: String, known: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
