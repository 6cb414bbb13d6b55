//! JSON input formats and the canonical schedule hash.
//!
//! Schedules:
//!
//! ```json
//! {"mode": "exact",
//!  "segments": [{"endpoint": "0", "from": "0", "to": "pi/2"},
//!               {"endpoint": "pi", "from": "pi/2", "to": null}]}
//! ```
//!
//! Times are strings such as `"3/2 pi"` or plain numbers (radians). In exact
//! mode every time must be a rational multiple of π.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::multid::{ConvexDomain, CurveSpec, ObservationCurve};
use crate::scalar::{parse_pi_rational, parse_time_f64, PiRational, Scalar};
use crate::schedule::{Endpoint, Schedule, Segment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!(
                "unknown mode `{other}` (expected exact or float)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RawTime {
    Num(f64),
    Str(String),
}

impl RawTime {
    fn exact(&self) -> Result<PiRational> {
        match self {
            RawTime::Num(v) if *v == 0.0 => Ok(PiRational::zero()),
            RawTime::Num(v) => Err(Error::Parse(format!(
                "{v} is not a rational multiple of pi; write e.g. \"3/2 pi\" or use float mode"
            ))),
            RawTime::Str(s) => parse_pi_rational(s),
        }
    }

    fn float(&self) -> Result<f64> {
        match self {
            RawTime::Num(v) if v.is_finite() => Ok(*v),
            RawTime::Num(v) => Err(Error::Parse(format!("non-finite time {v}"))),
            RawTime::Str(s) => parse_time_f64(s),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
struct RawSegment {
    endpoint: Endpoint,
    from: RawTime,
    #[serde(default)]
    to: Option<RawTime>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawSchedule {
    segments: Vec<RawSegment>,
    #[serde(default)]
    mode: Option<Mode>,
}

/// A schedule in either arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySchedule {
    Exact(Schedule<PiRational>),
    Float(Schedule<f64>),
}

impl AnySchedule {
    pub fn mode(&self) -> Mode {
        match self {
            AnySchedule::Exact(_) => Mode::Exact,
            AnySchedule::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> Schedule<f64> {
        match self {
            AnySchedule::Exact(s) => s.to_f64(),
            AnySchedule::Float(s) => s.clone(),
        }
    }

    /// SHA-256 of the canonical JSON rendering.
    pub fn hash(&self) -> String {
        match self {
            AnySchedule::Exact(s) => schedule_hash(s, Mode::Exact),
            AnySchedule::Float(s) => schedule_hash(s, Mode::Float),
        }
    }
}

fn convert<S: Scalar>(raw: &[RawSegment], time: impl Fn(&RawTime) -> Result<S>) -> Result<Schedule<S>> {
    let segments = raw
        .iter()
        .map(|r| {
            Ok(Segment {
                endpoint: r.endpoint,
                from: time(&r.from)?,
                to: r.to.as_ref().map(&time).transpose()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Schedule::new(segments)
}

/// Parse a schedule; the file's `mode` wins over `default_mode`.
pub fn parse_schedule(json: &str, default_mode: Mode) -> Result<AnySchedule> {
    let raw: RawSchedule = serde_json::from_str(json)?;
    match raw.mode.unwrap_or(default_mode) {
        Mode::Exact => convert(&raw.segments, RawTime::exact).map(AnySchedule::Exact),
        Mode::Float => convert(&raw.segments, RawTime::float).map(AnySchedule::Float),
    }
}

#[derive(Serialize)]
struct CanonicalSegment {
    endpoint: Endpoint,
    from: String,
    to: Option<String>,
}

#[derive(Serialize)]
struct CanonicalSchedule {
    mode: Mode,
    segments: Vec<CanonicalSegment>,
}

fn render<S: Scalar>(t: S) -> String {
    t.exact_string().unwrap_or_else(|| format!("{:?}", t.to_f64()))
}

/// Canonical JSON rendering of a schedule.
pub fn canonical_json<S: Scalar>(schedule: &Schedule<S>, mode: Mode) -> String {
    let c = CanonicalSchedule {
        mode,
        segments: schedule
            .segments()
            .iter()
            .map(|s| CanonicalSegment {
                endpoint: s.endpoint,
                from: render(s.from),
                to: s.to.map(render),
            })
            .collect(),
    };
    serde_json::to_string(&c).expect("canonical schedule serializes")
}

pub fn schedule_hash<S: Scalar>(schedule: &Schedule<S>, mode: Mode) -> String {
    hex::encode(Sha256::digest(canonical_json(schedule, mode).as_bytes()))
}

#[derive(Debug, Clone, Deserialize)]
struct RawGeometry {
    domain: ConvexDomain,
    curve: CurveSpec,
}

/// Domain and observation curve read from the geometry JSON format.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub domain: ConvexDomain,
    pub curve: ObservationCurve,
    /// The raw curve, kept for reports.
    pub curve_spec: CurveSpec,
}

pub fn parse_geometry(json: &str) -> Result<Geometry> {
    let raw: RawGeometry = serde_json::from_str(json)?;
    raw.domain.validate()?;
    let curve = ObservationCurve::from_spec(raw.curve.clone())?;
    if curve.dimension() != raw.domain.dimension() {
        return Err(Error::Domain(format!(
            "curve lives in dimension {}, domain in {}",
            curve.dimension(),
            raw.domain.dimension()
        )));
    }
    Ok(Geometry {
        domain: raw.domain,
        curve,
        curve_spec: raw.curve,
    })
}
