//! Multiplier-method time thresholds and the partition hypothesis check.

use serde::Serialize;

use super::curve::{chain_length, curve_variation, ObservationCurve, Partition, Variation};
use super::domain::{boundary_symdiff, illuminated_boundary, illuminated_measure, radius_max, ConvexDomain, Point};
use crate::error::{Error, Result};

/// `c_0 + V + c_T`, in one fixed summation order so that equal inputs give
/// bit-identical thresholds.
fn bv_threshold(c0: f64, variation: f64, c_t: f64) -> f64 {
    c0 + variation + c_t
}

/// Threshold and observability constant of the alternating criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlternatingBound {
    pub threshold: f64,
    pub horizon: Option<f64>,
    /// `2(T − threshold)`, present only when `T > threshold`.
    pub c_t: Option<f64>,
}

impl AlternatingBound {
    pub fn applicable(&self) -> bool {
        self.c_t.is_some()
    }
}

/// `R_0 + Σ |x_{i+1} − x_i| + R_N` for multiplier points `x_0..x_N`.
pub fn alternating_threshold(
    domain: &ConvexDomain,
    points: &[Point],
    horizon: Option<f64>,
) -> Result<AlternatingBound> {
    let (first, last) = match (points.first(), points.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Domain("alternating criterion needs at least one point".into())),
    };
    let threshold = bv_threshold(
        radius_max(domain, first)?,
        chain_length(points),
        radius_max(domain, last)?,
    );
    let c_t = horizon.filter(|&t| t > threshold).map(|t| 2.0 * (t - threshold));
    Ok(AlternatingBound {
        threshold,
        horizon,
        c_t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariableBound {
    pub c0: f64,
    pub variation: Variation,
    pub c_t: f64,
    pub threshold: f64,
    pub horizon: f64,
    /// `T > c_0 + V + c_T`.
    pub observable_by_criterion: bool,
}

/// `c_0 + V_0^T(φ) + c_T` with `c_i = max_Ω̄ |x − φ(i)|`.
pub fn variable_threshold(domain: &ConvexDomain, curve: &ObservationCurve) -> Result<VariableBound> {
    let c0 = radius_max(domain, &curve.start())?;
    let c_t = radius_max(domain, &curve.end())?;
    let variation = curve_variation(curve);
    let threshold = bv_threshold(c0, variation.value, c_t);
    let horizon = curve.t_end();
    Ok(VariableBound {
        c0,
        variation,
        c_t,
        threshold,
        horizon,
        observable_by_criterion: horizon > threshold,
    })
}

/// Relative agreement of two quadrature levels within a cell.
pub const SYMDIFF_RTOL: f64 = 1e-6;
const MAX_SAMPLES_PER_CELL: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymdiffReport {
    /// `(H^{d-1} ⊗ L¹)(Σ_φ Δ Σ_φ^P)`.
    pub symdiff: f64,
    /// `(H^{d-1} ⊗ L¹)(Σ_φ)`.
    pub sigma_measure: f64,
    pub cells: usize,
    pub amplitude: f64,
    /// Largest number of samples used in one cell.
    pub max_samples: usize,
    /// Cells whose quadrature stopped at the sample cap without agreeing.
    pub unconverged_cells: usize,
}

impl SymdiffReport {
    pub fn ratio(&self) -> f64 {
        if self.sigma_measure > 0.0 {
            self.symdiff / self.sigma_measure
        } else {
            self.symdiff
        }
    }
}

/// Midpoint rule with doubling until two levels agree; returns
/// `(value, samples, converged)`.
fn integrate_cell(a: f64, b: f64, abs_tol: f64, f: &dyn Fn(f64) -> Result<f64>) -> Result<(f64, usize, bool)> {
    let midpoint = |q: usize| -> Result<f64> {
        let h = (b - a) / q as f64;
        let mut s = 0.0;
        for i in 0..q {
            s += f(a + (i as f64 + 0.5) * h)?;
        }
        Ok(s * h)
    };
    let mut q = 2;
    let mut prev = midpoint(1)?;
    loop {
        let next = midpoint(q)?;
        if (next - prev).abs() <= SYMDIFF_RTOL * next.abs() + abs_tol {
            return Ok((next, q, true));
        }
        if q >= MAX_SAMPLES_PER_CELL {
            return Ok((next, q, false));
        }
        prev = next;
        q *= 2;
    }
}

/// Measure of `Σ_φ Δ Σ_φ^P`, where `Σ_φ^P` freezes `Γ_φ(t)` at
/// `Γ_φ(t_{j-1})` on each cell `(t_{j-1}, t_j)`.
pub fn symdiff_measure(
    domain: &ConvexDomain,
    curve: &ObservationCurve,
    partition: &Partition,
) -> Result<SymdiffReport> {
    let t_end = curve.t_end();
    if (partition.t_end() - t_end).abs() > 1e-12 * t_end.max(1.0) {
        return Err(Error::Domain(format!(
            "partition ends at {}, curve at {t_end}",
            partition.t_end()
        )));
    }
    let boundary = domain.boundary_measure()?;
    let mut report = SymdiffReport {
        symdiff: 0.0,
        sigma_measure: 0.0,
        cells: 0,
        amplitude: partition.amplitude(),
        max_samples: 0,
        unconverged_cells: 0,
    };
    for (a, b) in partition.cells() {
        let frozen = illuminated_boundary(domain, &curve.eval(a))?;
        let abs_tol = 1e-13 * boundary * (b - a);
        let diff = |t: f64| boundary_symdiff(domain, &illuminated_boundary(domain, &curve.eval(t))?, &frozen);
        let size = |t: f64| illuminated_measure(domain, &illuminated_boundary(domain, &curve.eval(t))?);
        let (sd, q1, ok1) = integrate_cell(a, b, abs_tol, &diff)?;
        let (sm, q2, ok2) = integrate_cell(a, b, abs_tol, &size)?;
        report.symdiff += sd;
        report.sigma_measure += sm;
        report.cells += 1;
        report.max_samples = report.max_samples.max(q1).max(q2);
        report.unconverged_cells += usize::from(!(ok1 && ok2));
    }
    Ok(report)
}
