//! Boundary observability of the 1D wave equation under switching endpoint
//! observation, with spectral verification and multi-dimensional time bounds.
//!
//! - [`arcs`]: finite unions of half-open arcs on `R/2πZ`.
//! - [`schedule`]: observation schedules, the covering sweep and `T_opt`.
//! - [`constant_rate`]: closed forms for periodic switching and their
//!   discontinuities.
//! - [`spectral`]: truncated Fourier data, observed energy and observability
//!   constants.
//! - [`multid`]: illuminated boundary sets and multiplier-method thresholds.
//!
//! Times and angles are generic over [`Scalar`]: [`PiRational`] for exact
//! rational multiples of π, `f64` otherwise.

pub mod arcs;
pub mod constant_rate;
pub mod error;
pub mod io;
pub mod multid;
pub mod scalar;
pub mod schedule;
pub mod spectral;

pub use arcs::{project_interval, quotient, Angle, Arc, ArcSet};
pub use constant_rate::{
    classify, discontinuity_catalog, topt_constant_rate, topt_map, DiscontinuityKind, DiscontinuityPoint, Limit,
    RateAnalysis, RateCase, Topt,
};
pub use error::{Error, Result};
pub use io::{AnySchedule, Mode};
pub use scalar::{PiRational, Rational, Scalar};
pub use schedule::{
    disjointify, is_generalized_observable, is_observable_at, optimal_time, single_exchange_topt, Endpoint,
    GeneralizedSchedule, ObservabilityReport, ReducedSegment, Schedule, Segment, TimeInterval,
};
pub use spectral::{
    build_counterexample, energy, observability_constant, observed_energy, parseval_check, trace_at_pi, trace_at_zero,
    BumpParams, FourierData,
};
