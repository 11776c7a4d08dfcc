use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid stencil: {0}")]
    InvalidStencil(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value at t = {t} (stage {stage})")]
    NonFinite { t: f64, stage: usize },

    #[error("delayed query at t = {t} lies {distance} outside the computed grid (limit {limit})")]
    OutOfRange { t: f64, distance: f64, limit: f64 },

    #[error("need at least {need} records, have {have}")]
    InsufficientRecords { need: usize, have: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("Kepler solver did not converge for M = {mean_anomaly}, e = {eccentricity}")]
    KeplerNoConvergence { mean_anomaly: f64, eccentricity: f64 },

    #[error("zero Earth-Moon separation")]
    ZeroRadius,

    #[error("singular inertia tensor")]
    SingularInertia,

    #[error("Euler angles too close to gimbal lock (sin theta = {0:e})")]
    GimbalLock(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
