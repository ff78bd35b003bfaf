//! Exact statistics of s energy quanta shared among N particles.
//!
//! Two counting arguments give the same one-particle distribution
//! `p(κ) = C(N+s−κ−2, N−2) / C(N+s−1, N−1)`:
//!
//! * [`occupancy`]: distinguishable particles over energy levels, each
//!   configuration equally likely;
//! * [`quanta`]: indistinguishable quanta over particles, each state
//!   equally likely.
//!
//! [`partitions`] counts level states and evaluates the harmonic integral
//! for partition numbers; [`continuum`] covers moments, the geometric limit
//! and the classical energy simplex. All probabilities are exact rationals.

pub mod continuum;
pub mod error;
pub mod exactnum;
pub mod occupancy;
pub mod partitions;
pub mod quad;
pub mod quanta;

pub use continuum::{EnergySystem, LimitRung, Moments};
pub use error::{Error, Result};
pub use exactnum::{BigInt, BigRat};
pub use occupancy::{DistTable, LevelState, Route, StateRecord};
pub use partitions::QuadReport;
pub use quanta::{Composition, CrossRouteReport, SampleStats};

/// Tag written into every JSON document.
pub const SCHEMA: &str = "quanta-stats/1";
