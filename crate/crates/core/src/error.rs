use thiserror::Error;

use crate::arith::ArithError;
use crate::cones::ConeError;
use crate::geometry::ModelError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("degenerate pairing: the top power of alpha vanishes on {0}")]
    DegeneratePairing(String),
    #[error("the candidate list is empty")]
    EmptyCandidates,
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(String),
    #[error("{name} = {value} is outside {range}")]
    OutOfRange { name: &'static str, value: String, range: &'static str },
    #[error("invalid gMA coefficients: {0}")]
    Coefficients(String),
    #[error("the top power of beta vanishes")]
    ZeroBetaVolume,
    #[error("factor roots decrease between p = {p} and p = {}", p + 1)]
    NotMonotone { p: usize },
    #[error("the central charge vanishes")]
    ZeroCentralCharge,
    #[error("no representative of n*pi/2 - arg Z lies in (0, pi); reduced angle {0}")]
    NotSupercritical(f64),
    #[error("verdicts are not constant on the chamber ({lo}, {hi})")]
    ChamberNotConstant { lo: String, hi: String },
    #[error("product and direct dHYM values disagree on {name} (relative error {relative_error:e})")]
    FactorizationMismatch { name: String, relative_error: f64 },
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
