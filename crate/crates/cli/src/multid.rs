use std::path::PathBuf;

use clap::{ArgGroup, Args};
use obswave_core::io::parse_geometry;
use obswave_core::multid::{
    alternating_threshold, symdiff_measure, variable_threshold, AlternatingBound, CurveKind, Partition, Variation,
};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{read_file, Sink};
use crate::reference;

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("input").required(true).args(["geometry", "paper_examples"])))]
pub struct MultidArgs {
    /// Domain and curve JSON file.
    #[arg(long)]
    geometry: Option<PathBuf>,
    /// Also tabulate the frozen-partition symmetric difference on dyadic
    /// partitions with 2^1 .. 2^k cells.
    #[arg(long, value_name = "K")]
    partition_levels: Option<u32>,
    /// Reproduce the published reference values, one and several dimensions.
    #[arg(long)]
    paper_examples: bool,
    /// Largest switch count in the alternating square table.
    #[arg(long, default_value_t = 6)]
    max_n: usize,
}

#[derive(Debug, Serialize)]
struct SymdiffRow {
    level: u32,
    cells: usize,
    symdiff: f64,
    sigma_measure: f64,
    ratio: f64,
    unconverged_cells: usize,
}

#[derive(Debug, Serialize)]
struct SymdiffTable {
    label: &'static str,
    rows: Vec<SymdiffRow>,
}

#[derive(Debug, Serialize)]
struct MultidReport {
    domain: &'static str,
    dimension: usize,
    c0: f64,
    variation: Variation,
    c_t: f64,
    threshold: f64,
    horizon: f64,
    /// `T > c_0 + V + c_T`; a failed test is inconclusive, not a refutation.
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    alternating: Option<AlternatingBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    symdiff: Option<SymdiffTable>,
}

/// Deepest dyadic level accepted by `--partition-levels`.
const MAX_LEVEL: u32 = 16;

pub fn run(args: &MultidArgs, out: &Sink) -> Result<(), CliError> {
    if args.paper_examples {
        return reference::run(out, args.max_n);
    }
    let path = args.geometry.as_ref().expect("clap requires an input");
    let g = parse_geometry(&read_file(path)?)?;
    let bound = variable_threshold(&g.domain, &g.curve)?;
    let alternating = match g.curve_spec.kind {
        CurveKind::PiecewiseConstant => Some(alternating_threshold(
            &g.domain,
            &g.curve_spec.points,
            Some(g.curve.t_end()),
        )?),
        _ => None,
    };
    let symdiff = match args.partition_levels {
        Some(k) if k == 0 || k > MAX_LEVEL => {
            return Err(CliError::Input(format!(
                "--partition-levels must be in 1..={MAX_LEVEL}"
            )));
        }
        Some(k) => {
            let mut rows = Vec::new();
            for level in 1..=k {
                let p = Partition::uniform(g.curve.t_end(), 1 << level)?;
                let r = symdiff_measure(&g.domain, &g.curve, &p)?;
                rows.push(SymdiffRow {
                    level,
                    cells: r.cells,
                    symdiff: r.symdiff,
                    sigma_measure: r.sigma_measure,
                    ratio: r.ratio(),
                    unconverged_cells: r.unconverged_cells,
                });
            }
            Some(SymdiffTable {
                label: "hypothesis check (numerical)",
                rows,
            })
        }
        None => None,
    };
    let report = MultidReport {
        domain: match g.domain {
            obswave_core::multid::ConvexDomain::Polygon2d { .. } => "polygon2d",
            obswave_core::multid::ConvexDomain::Ball { .. } => "ball",
        },
        dimension: g.domain.dimension(),
        c0: bound.c0,
        variation: bound.variation,
        c_t: bound.c_t,
        threshold: bound.threshold,
        horizon: bound.horizon,
        verdict: if bound.observable_by_criterion {
            "observable"
        } else {
            "inconclusive"
        },
        alternating,
        symdiff,
    };
    out.json(&report)
}
