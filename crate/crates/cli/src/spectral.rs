use std::path::{Path, PathBuf};

use clap::Args;
use obswave_core::io::parse_schedule;
use obswave_core::spectral::{parseval_residual, MAX_MODES};
use obswave_core::{
    build_counterexample, energy, observability_constant, observed_energy, optimal_time, AnySchedule, BumpParams,
    FourierData, Mode, Scalar, Schedule,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliError;
use crate::output::{read_file, ArcSetValue, Sink, TimeValue};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Schedule JSON file.
    #[arg(long)]
    schedule: PathBuf,
    /// Truncation order M (number of modes).
    #[arg(long, default_value_t = 32)]
    modes: usize,
    /// Observation horizon T; defaults to the optimal time when the schedule
    /// covers, else to the end of its last segment.
    #[arg(long)]
    horizon: Option<String>,
    /// Seed of the random data used for the Parseval residual.
    #[arg(long, default_value_t = 2024)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    /// Schedule JSON file.
    #[arg(long)]
    schedule: PathBuf,
    #[arg(long, default_value_t = 256)]
    modes: usize,
    /// Sharpness of the bump profile.
    #[arg(long, default_value_t = BumpParams::default().sharpness)]
    sharpness: f64,
    /// Quadrature nodes for the projection onto modes.
    #[arg(long, default_value_t = BumpParams::default().samples)]
    samples: usize,
    /// Include the Fourier coefficients in the report.
    #[arg(long)]
    with_data: bool,
}

fn check_modes(m: usize) -> Result<(), CliError> {
    if m == 0 || m > MAX_MODES {
        return Err(CliError::Input(format!("--modes must be in 1..={MAX_MODES}, got {m}")));
    }
    Ok(())
}

fn load(path: &Path, mode: Mode) -> Result<AnySchedule, CliError> {
    Ok(parse_schedule(&read_file(path)?, mode)?)
}

/// End of the last segment, if bounded.
fn schedule_end<S: Scalar>(s: &Schedule<S>) -> Option<S> {
    s.segments().last().and_then(|seg| seg.to)
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    c_min: f64,
    m: usize,
    schedule_hash: String,
    parseval_residual: f64,
    horizon: TimeValue,
    /// The projections cover the circle by time `horizon`.
    covering: bool,
    t_opt: Option<TimeValue>,
    note: &'static str,
}

fn verify<S: Scalar>(s: &Schedule<S>, args: &VerifyArgs, hash: String) -> Result<VerifyReport, CliError> {
    let sweep = optimal_time(s, Some(s.len()));
    let horizon = match &args.horizon {
        Some(h) => S::parse_time(h)?,
        None => sweep
            .t_opt
            .or_else(|| schedule_end(s))
            .ok_or_else(|| CliError::Input("schedule is unbounded; pass --horizon".into()))?,
    };
    if !S::zero().definitely_lt(horizon) {
        return Err(CliError::Input(format!("horizon must be positive, got {horizon}")));
    }
    let c_min = observability_constant(&s.to_f64(), horizon.to_f64(), args.modes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut coeffs = || (0..args.modes).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>();
    let (c0, c1) = (coeffs(), coeffs());
    let data = FourierData::new(c0, c1)?;
    Ok(VerifyReport {
        c_min,
        m: args.modes,
        schedule_hash: hash,
        parseval_residual: parseval_residual(&data),
        horizon: TimeValue::of(horizon),
        covering: sweep.t_opt.is_some_and(|t| t.approx_le(horizon)),
        t_opt: sweep.t_opt.map(TimeValue::of),
        note: "c_min is the least Rayleigh quotient on the truncated span; it bounds the true constant from above",
    })
}

pub fn run_verify(args: &VerifyArgs, mode: Mode, out: &Sink) -> Result<(), CliError> {
    check_modes(args.modes)?;
    let schedule = load(&args.schedule, mode)?;
    let hash = schedule.hash();
    let report = match &schedule {
        AnySchedule::Exact(s) => verify(s, args, hash)?,
        AnySchedule::Float(s) => verify(s, args, hash)?,
    };
    out.json(&report)
}

#[derive(Debug, Serialize)]
struct Construction {
    /// Arc `[lo, hi)` hosting the bump.
    arc: (f64, f64),
    energy: f64,
    observed: f64,
    ratio: f64,
    truncation_residue: f64,
    horizon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<FourierData>,
}

#[derive(Debug, Serialize)]
struct CounterexampleReport {
    observable: bool,
    uncovered: ArcSetValue,
    m: usize,
    schedule_hash: String,
    /// Absent when the schedule covers the circle.
    counterexample: Option<Construction>,
}

fn counterexample<S: Scalar>(
    s: &Schedule<S>,
    args: &CounterexampleArgs,
    hash: String,
) -> Result<CounterexampleReport, CliError> {
    let sweep = optimal_time(s, Some(s.len()));
    let mut report = CounterexampleReport {
        observable: sweep.observable,
        uncovered: ArcSetValue::of(&sweep.uncovered),
        m: args.modes,
        schedule_hash: hash,
        counterexample: None,
    };
    if sweep.observable {
        report.uncovered = ArcSetValue::of(&obswave_core::ArcSet::<S>::empty());
        return Ok(report);
    }
    // An unbounded last segment would have covered the circle.
    let horizon = schedule_end(s).ok_or_else(|| CliError::Invariant("uncovering schedule is unbounded".into()))?;
    let params = BumpParams {
        m: args.modes,
        sharpness: args.sharpness,
        samples: args.samples,
    };
    let cex = build_counterexample(&sweep.uncovered.to_f64(), params)?;
    let e0 = energy(&cex.data);
    let observed = observed_energy(&cex.data, &s.to_f64(), horizon.to_f64());
    report.counterexample = Some(Construction {
        arc: cex.arc,
        energy: e0,
        observed,
        ratio: observed / e0,
        truncation_residue: cex.truncation_residue,
        horizon: horizon.to_f64(),
        data: args.with_data.then_some(cex.data),
    });
    Ok(report)
}

pub fn run_counterexample(args: &CounterexampleArgs, mode: Mode, out: &Sink) -> Result<(), CliError> {
    check_modes(args.modes)?;
    let schedule = load(&args.schedule, mode)?;
    let hash = schedule.hash();
    let report = match &schedule {
        AnySchedule::Exact(s) => counterexample(s, args, hash)?,
        AnySchedule::Float(s) => counterexample(s, args, hash)?,
    };
    out.json(&report)
}
