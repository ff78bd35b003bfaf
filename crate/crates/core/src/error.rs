use thiserror::Error;

use crate::partitions::QuadReport;

/// Errors raised by the counting, sampling and quadrature routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("particle count must be at least {min}, got {n}")]
    ParticleCount { n: u64, min: u64 },

    #[error("level {level} is outside 0..={s}")]
    LevelOutOfRange { level: u64, s: u64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("enumeration of {count} items exceeds the cap of {cap}")]
    SizeCap { count: String, cap: u64 },

    #[error("integrand is singular at x = {x}: sin({kappa}x) vanishes")]
    SingularNode { kappa: u64, x: f64 },

    #[error("argument {x} is outside the integration domain (0, pi/2]")]
    OutOfDomain { x: f64 },

    #[error("quadrature did not converge: error estimate {} after {} panels", .0.abs_error_estimate, .0.panels)]
    NonConvergence(Box<QuadReport>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
