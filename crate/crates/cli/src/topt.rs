use std::path::PathBuf;

use clap::{ArgGroup, Args};
use obswave_core::constant_rate::{exact_horizon, sweep_constant_rate, MapRow};
use obswave_core::io::{parse_schedule, schedule_hash};
use obswave_core::{
    discontinuity_catalog, disjointify, optimal_time, single_exchange_topt, topt_constant_rate, topt_map, AnySchedule,
    Endpoint, Limit, Mode, ObservabilityReport, PiRational, ReducedSegment, Scalar, Schedule, Topt,
};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{read_file, ArcSetValue, Sink, TimeValue};
use crate::{DiscontinuityArgs, Format, MapArgs};

#[derive(Args, Debug)]
#[command(group(
    ArgGroup::new("source").required(true).args(["schedule", "constant_rate", "single_exchange"])
))]
pub struct ToptArgs {
    /// Schedule JSON file.
    schedule: Option<PathBuf>,
    /// Switching period T0 of the constant-rate schedule, e.g. "pi/2".
    #[arg(long)]
    constant_rate: Option<String>,
    /// Exchange time T0 of the single-exchange schedule.
    #[arg(long)]
    single_exchange: Option<String>,
    /// Number of segments examined by the sweep.
    #[arg(long)]
    segments: Option<usize>,
}

#[derive(Debug, Serialize)]
struct Verdict {
    observable: bool,
    t_opt: Option<TimeValue>,
}

#[derive(Debug, Serialize)]
struct SweepSummary {
    observable: bool,
    t_opt: Option<TimeValue>,
    least_index_h: Option<usize>,
    segments_examined: usize,
}

#[derive(Debug, Serialize)]
struct ReducedValue {
    index: usize,
    endpoint: Endpoint,
    intervals: Vec<[TimeValue; 2]>,
}

#[derive(Debug, Serialize)]
struct ToptReport {
    mode: Mode,
    source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    t0: Option<TimeValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<String>,
    observable: bool,
    t_opt: Option<TimeValue>,
    closed_form: Option<Verdict>,
    sweep: SweepSummary,
    /// Closed form and sweep agree; absent when there is no closed form.
    agreement: Option<bool>,
    /// Part of the circle left uncovered just before the decisive segment,
    /// or at the end of the sweep when not observable.
    uncovered: ArcSetValue,
    reduced: Option<Vec<ReducedValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alternative_reduced: Option<Vec<ReducedValue>>,
    schedule_hash: String,
}

fn reduced_value<S: Scalar>(reduced: &[ReducedSegment<S>]) -> Vec<ReducedValue> {
    reduced
        .iter()
        .map(|r| ReducedValue {
            index: r.index,
            endpoint: r.endpoint,
            intervals: r
                .intervals
                .iter()
                .map(|&(a, b)| [TimeValue::of(a), TimeValue::of(b)])
                .collect(),
        })
        .collect()
}

fn same_time<S: Scalar>(a: Option<S>, b: Option<S>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) if S::EXACT => x == y,
        (Some(x), Some(y)) => (x.to_f64() - y.to_f64()).abs() <= 1e-9 * x.to_f64().abs().max(1.0),
        (None, None) => true,
        _ => false,
    }
}

fn sweep_summary<S: Scalar>(r: &ObservabilityReport<S>) -> SweepSummary {
    SweepSummary {
        observable: r.observable,
        t_opt: r.t_opt.map(TimeValue::of),
        least_index_h: r.least_index_h,
        segments_examined: r.segments_examined,
    }
}

fn reduce<S: Scalar>(
    schedule: &Schedule<S>,
    r: &ObservabilityReport<S>,
) -> Result<Option<Vec<ReducedValue>>, CliError> {
    match r.least_index_h {
        Some(h) => Ok(Some(reduced_value(&disjointify(schedule, h)?))),
        None => Ok(None),
    }
}

fn from_schedule<S: Scalar>(
    schedule: &Schedule<S>,
    mode: Mode,
    segments: Option<usize>,
) -> Result<ToptReport, CliError> {
    let r = optimal_time(schedule, Some(segments.unwrap_or(schedule.len())));
    Ok(ToptReport {
        mode,
        source: "schedule",
        t0: None,
        case: None,
        observable: r.observable,
        t_opt: r.t_opt.map(TimeValue::of),
        closed_form: None,
        sweep: sweep_summary(&r),
        agreement: None,
        uncovered: ArcSetValue::of(&r.uncovered),
        reduced: reduce(schedule, &r)?,
        alternative_reduced: None,
        schedule_hash: schedule_hash(schedule, mode),
    })
}

/// Segments swept for a constant-rate schedule in float mode, read off the
/// closed form. Exact mode uses [`exact_horizon`] instead.
fn float_horizon(t0: f64, closed: Topt<f64>) -> usize {
    match closed {
        Topt::Finite(t) => t.div_ceil(t0).max(1) as usize + 2,
        Topt::NotObservable => 2 * f64::two_pi().div_ceil(t0).max(1) as usize + 2,
    }
}

fn constant_rate<S: Scalar>(
    t0: S,
    mode: Mode,
    segments: Option<usize>,
    default_horizon: impl Fn(S, Topt<S>) -> usize,
) -> Result<ToptReport, CliError> {
    let analysis = obswave_core::classify(t0)?;
    let closed = topt_constant_rate(t0)?;
    let horizon = segments.unwrap_or_else(|| default_horizon(t0, closed));
    let r = sweep_constant_rate(t0, horizon)?;
    let schedule = Schedule::constant_rate(t0, horizon)?;
    Ok(ToptReport {
        mode,
        source: "constant_rate",
        t0: Some(TimeValue::of(t0)),
        case: Some(analysis.case.to_string()),
        observable: closed.is_observable(),
        t_opt: closed.finite().map(TimeValue::of),
        closed_form: Some(Verdict {
            observable: closed.is_observable(),
            t_opt: closed.finite().map(TimeValue::of),
        }),
        sweep: sweep_summary(&r),
        agreement: Some(same_time(closed.finite(), r.t_opt)),
        uncovered: ArcSetValue::of(&r.uncovered),
        reduced: reduce(&schedule, &r)?,
        alternative_reduced: None,
        schedule_hash: schedule_hash(&schedule, mode),
    })
}

fn single_exchange<S: Scalar>(t0: S, mode: Mode) -> Result<ToptReport, CliError> {
    let closed = single_exchange_topt(t0)?;
    let schedule = Schedule::single_exchange(t0)?;
    let r = optimal_time(&schedule, None);
    Ok(ToptReport {
        mode,
        source: "single_exchange",
        t0: Some(TimeValue::of(t0)),
        case: None,
        observable: true,
        t_opt: Some(TimeValue::of(closed.t_opt)),
        closed_form: Some(Verdict {
            observable: true,
            t_opt: Some(TimeValue::of(closed.t_opt)),
        }),
        sweep: sweep_summary(&r),
        agreement: Some(same_time(Some(closed.t_opt), r.t_opt)),
        uncovered: ArcSetValue::of(&r.uncovered),
        reduced: Some(reduced_value(&closed.reduced)),
        alternative_reduced: closed.alternative.as_deref().map(reduced_value),
        schedule_hash: schedule_hash(&schedule, mode),
    })
}

fn report_exact(args: &ToptArgs) -> Result<ToptReport, CliError> {
    if let Some(t) = &args.constant_rate {
        constant_rate(PiRational::parse_time(t)?, Mode::Exact, args.segments, |t0, _| {
            exact_horizon(t0)
        })
    } else if let Some(t) = &args.single_exchange {
        single_exchange(PiRational::parse_time(t)?, Mode::Exact)
    } else {
        unreachable!("clap requires one source")
    }
}

fn report_float(args: &ToptArgs) -> Result<ToptReport, CliError> {
    if let Some(t) = &args.constant_rate {
        constant_rate(f64::parse_time(t)?, Mode::Float, args.segments, float_horizon)
    } else if let Some(t) = &args.single_exchange {
        single_exchange(f64::parse_time(t)?, Mode::Float)
    } else {
        unreachable!("clap requires one source")
    }
}

pub fn run(args: &ToptArgs, mode: Mode, out: &Sink) -> Result<(), CliError> {
    let report = match &args.schedule {
        Some(path) => match parse_schedule(&read_file(path)?, mode)? {
            AnySchedule::Exact(s) => from_schedule(&s, Mode::Exact, args.segments)?,
            AnySchedule::Float(s) => from_schedule(&s, Mode::Float, args.segments)?,
        },
        None => match mode {
            Mode::Exact => report_exact(args)?,
            Mode::Float => report_float(args)?,
        },
    };
    out.json(&report)?;
    // In exact mode the two computations must coincide.
    if mode == Mode::Exact && report.agreement == Some(false) {
        return Err(CliError::Invariant("closed form and sweep disagree".into()));
    }
    Ok(())
}

const MAP_HEADER: [&str; 5] = ["t0", "t0_exact", "case", "topt", "topt_exact"];

fn check_range<S: Scalar>(from: S, to: S) -> Result<(), CliError> {
    let inside = |t: S| !t.definitely_lt(S::zero()) && !S::two_pi().definitely_lt(t);
    if inside(from) && inside(to) {
        Ok(())
    } else {
        Err(CliError::Input(format!("range [{from}, {to}] must lie in [0, 2pi]")))
    }
}

fn map_rows<S: Scalar>(args: &MapArgs) -> Result<Vec<MapRow>, CliError> {
    let (from, to, step) = (
        S::parse_time(&args.from)?,
        S::parse_time(&args.to)?,
        S::parse_time(&args.step)?,
    );
    check_range(from, to)?;
    Ok(topt_map(from, to, step)?)
}

pub fn run_map(args: &MapArgs, mode: Mode, out: &Sink) -> Result<(), CliError> {
    let rows = match mode {
        Mode::Exact => map_rows::<PiRational>(args)?,
        Mode::Float => map_rows::<f64>(args)?,
    };
    match args.format {
        Format::Csv => out.csv(&MAP_HEADER, &rows),
        Format::Json => out.json(&rows),
    }
}

#[derive(Debug, Serialize)]
struct CatalogRow {
    location: String,
    kind: String,
    left_limit: String,
    right_limit: String,
    value_at: String,
}

fn limit_text(l: Limit) -> String {
    match l {
        Limit::Finite(p) => p.to_string(),
        Limit::Infinite => "inf".into(),
    }
}

pub fn run_discontinuities(args: &DiscontinuityArgs, out: &Sink) -> Result<(), CliError> {
    let (a, b) = (f64::parse_time(&args.from)?, f64::parse_time(&args.to)?);
    check_range(a, b)?;
    if args.max_order < 1 {
        return Err(CliError::Input("--max-order must be at least 1".into()));
    }
    let rows: Vec<CatalogRow> = discontinuity_catalog(a, b, args.max_order)?
        .into_iter()
        .map(|p| CatalogRow {
            location: p.location.to_string(),
            kind: p.kind.to_string(),
            left_limit: limit_text(p.left_limit),
            right_limit: limit_text(p.right_limit),
            value_at: match p.value_at {
                Topt::Finite(v) => v.to_string(),
                Topt::NotObservable => "inf".into(),
            },
        })
        .collect();
    match args.format {
        Format::Csv => out.csv(&["location", "kind", "left_limit", "right_limit", "value_at"], &rows),
        Format::Json => out.json(&rows),
    }
}
