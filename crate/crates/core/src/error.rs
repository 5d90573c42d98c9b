use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not safely diagonalizable (eigenvector condition {condition:.3e})")]
    NonDiagonalizable { condition: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("cos(alpha) = {cos_alpha:.3e} is at the exceptional point")]
    ExceptionalPoint { cos_alpha: f64 },
    #[error("gate is not unitary (deviation {deviation:.3e})")]
    NonUnitaryGate { deviation: f64 },
    #[error("post-selection probability {probability:.3e} is zero")]
    ZeroProbability { probability: f64 },
}
