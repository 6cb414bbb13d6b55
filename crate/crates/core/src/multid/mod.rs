//! Multi-dimensional geometry for moving boundary observation.
//!
//! A multiplier point `φ(t)` illuminates the boundary part where
//! `(x − φ(t))·ν > 0`. The time thresholds come from the multiplier method and
//! are sufficient conditions only.

pub mod applications;
pub mod bounds;
pub mod curve;
pub mod domain;

pub use applications::{application_reports, ApplicationReports, SPHERE_ALPHA_THRESHOLD};
pub use bounds::{
    alternating_threshold, symdiff_measure, variable_threshold, AlternatingBound, SymdiffReport, VariableBound,
};
pub use curve::{curve_variation, CurveKind, CurveSpec, ObservationCurve, Partition, Variation};
pub use domain::{
    boundary_symdiff, illuminated_boundary, illuminated_measure, radius_max, ConvexDomain, IlluminatedSet, Point,
};
