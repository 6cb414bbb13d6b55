//! Observation curves `φ: [0, T] → R^d` and time partitions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::domain::{distance, Point};
use crate::error::{Error, Result};

/// Relative agreement required between two dyadic refinement levels.
pub const VARIATION_RTOL: f64 = 1e-8;

/// Closed-form curve, used for built-in examples.
#[derive(Clone)]
pub struct ParametricCurve {
    pub t_end: f64,
    pub dim: usize,
    pub eval: Arc<dyn Fn(f64) -> Point + Send + Sync>,
}

impl fmt::Debug for ParametricCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricCurve")
            .field("t_end", &self.t_end)
            .field("dim", &self.dim)
            .finish()
    }
}

/// Raw JSON form of a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub times: Vec<f64>,
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Polyline,
    Sampled,
    PiecewiseConstant,
}

#[derive(Debug, Clone)]
pub enum ObservationCurve {
    /// Linear interpolation between `points[i]` at `times[i]`.
    Polyline {
        times: Vec<f64>,
        points: Vec<Point>,
    },
    /// Samples of a smooth curve; evaluated by linear interpolation.
    Sampled {
        times: Vec<f64>,
        points: Vec<Point>,
    },
    /// `φ = points[i]` on `[times[i], times[i+1])`, left-continuous at `T`;
    /// `times` has one more entry than `points`.
    PiecewiseConstant {
        times: Vec<f64>,
        points: Vec<Point>,
    },
    Parametric(ParametricCurve),
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.len() < 2 {
        return Err(Error::Domain("a curve needs at least two times".into()));
    }
    if times[0] != 0.0 {
        return Err(Error::Domain(format!("curve times must start at 0, got {}", times[0])));
    }
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(
            "curve times must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

fn check_points(points: &[Point]) -> Result<usize> {
    let dim = points.first().map_or(0, Vec::len);
    if dim == 0
        || points
            .iter()
            .any(|p| p.len() != dim || p.iter().any(|v| !v.is_finite()))
    {
        return Err(Error::Domain("curve points must be finite and of one dimension".into()));
    }
    Ok(dim)
}

impl ObservationCurve {
    pub fn from_spec(spec: CurveSpec) -> Result<Self> {
        check_times(&spec.times)?;
        check_points(&spec.points)?;
        let CurveSpec { kind, times, points } = spec;
        let want = match kind {
            CurveKind::PiecewiseConstant => times.len() - 1,
            _ => times.len(),
        };
        if points.len() != want {
            return Err(Error::Domain(format!(
                "{kind:?} curve with {} times needs {want} points, got {}",
                times.len(),
                points.len()
            )));
        }
        Ok(match kind {
            CurveKind::Polyline => ObservationCurve::Polyline { times, points },
            CurveKind::Sampled => ObservationCurve::Sampled { times, points },
            CurveKind::PiecewiseConstant => ObservationCurve::PiecewiseConstant { times, points },
        })
    }

    pub fn parametric(t_end: f64, dim: usize, f: impl Fn(f64) -> Point + Send + Sync + 'static) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::Domain(format!("curve end time must be positive, got {t_end}")));
        }
        Ok(ObservationCurve::Parametric(ParametricCurve {
            t_end,
            dim,
            eval: Arc::new(f),
        }))
    }

    /// Piecewise-constant curve visiting `points` on equal time cells of `[0, t_end]`.
    pub fn piecewise_constant_uniform(points: Vec<Point>, t_end: f64) -> Result<Self> {
        let n = points.len();
        let times = (0..=n).map(|i| t_end * i as f64 / n.max(1) as f64).collect();
        Self::from_spec(CurveSpec {
            kind: CurveKind::PiecewiseConstant,
            times,
            points,
        })
    }

    /// `T`.
    pub fn t_end(&self) -> f64 {
        match self {
            ObservationCurve::Polyline { times, .. }
            | ObservationCurve::Sampled { times, .. }
            | ObservationCurve::PiecewiseConstant { times, .. } => *times.last().unwrap_or(&0.0),
            ObservationCurve::Parametric(p) => p.t_end,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ObservationCurve::Polyline { points, .. }
            | ObservationCurve::Sampled { points, .. }
            | ObservationCurve::PiecewiseConstant { points, .. } => points.first().map_or(0, Vec::len),
            ObservationCurve::Parametric(p) => p.dim,
        }
    }

    /// `φ(t)`, with `t` clamped to `[0, T]`.
    pub fn eval(&self, t: f64) -> Point {
        let t = t.clamp(0.0, self.t_end());
        match self {
            ObservationCurve::Polyline { times, points } | ObservationCurve::Sampled { times, points } => {
                let i = times.partition_point(|&s| s <= t).clamp(1, times.len() - 1);
                let (t0, t1) = (times[i - 1], times[i]);
                let w = (t - t0) / (t1 - t0);
                points[i - 1]
                    .iter()
                    .zip(&points[i])
                    .map(|(a, b)| a + w * (b - a))
                    .collect()
            }
            ObservationCurve::PiecewiseConstant { times, points } => {
                let i = times.partition_point(|&s| s <= t).saturating_sub(1);
                points[i.min(points.len() - 1)].clone()
            }
            ObservationCurve::Parametric(p) => (p.eval)(t),
        }
    }

    pub fn start(&self) -> Point {
        self.eval(0.0)
    }

    /// `φ(T)`; piecewise-constant curves are left-continuous there.
    pub fn end(&self) -> Point {
        self.eval(self.t_end())
    }
}

/// Sum of `|p_{i+1} − p_i|`, accumulated left to right.
pub fn chain_length(points: &[Point]) -> f64 {
    points.windows(2).fold(0.0, |acc, w| acc + distance(&w[0], &w[1]))
}

/// Variation of a curve and, for smooth curves, how well it converged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Variation {
    pub value: f64,
    /// Relative gap between the two finest extrapolated levels.
    pub refinement_gap: Option<f64>,
}

impl Variation {
    pub fn converged(&self) -> bool {
        self.refinement_gap.is_none_or(|g| g <= VARIATION_RTOL)
    }
}

/// Richardson step for chord sums, whose error is `O(h²)` on smooth curves.
fn richardson(fine: f64, coarse: f64) -> f64 {
    fine + (fine - coarse) / 3.0
}

fn subsample(points: &[Point], stride: usize) -> Vec<Point> {
    points.iter().step_by(stride).cloned().collect()
}

/// `V_0^T(φ)`, the total variation (length for continuous curves).
pub fn curve_variation(curve: &ObservationCurve) -> Variation {
    match curve {
        ObservationCurve::Polyline { points, .. } | ObservationCurve::PiecewiseConstant { points, .. } => Variation {
            value: chain_length(points),
            refinement_gap: None,
        },
        ObservationCurve::Sampled { points, .. } => {
            let n = points.len() - 1;
            if n % 4 != 0 {
                return Variation {
                    value: chain_length(points),
                    refinement_gap: None,
                };
            }
            let l1 = chain_length(points);
            let l2 = chain_length(&subsample(points, 2));
            let l4 = chain_length(&subsample(points, 4));
            let (r1, r2) = (richardson(l1, l2), richardson(l2, l4));
            Variation {
                value: r1,
                refinement_gap: Some(relative_gap(r1, r2)),
            }
        }
        ObservationCurve::Parametric(p) => {
            let chord = |n: usize| {
                let pts: Vec<Point> = (0..=n).map(|i| (p.eval)(p.t_end * i as f64 / n as f64)).collect();
                chain_length(&pts)
            };
            let mut n = 64;
            let (mut coarse, mut fine) = (chord(n), chord(2 * n));
            let mut prev = richardson(fine, coarse);
            loop {
                n *= 2;
                coarse = fine;
                fine = chord(2 * n);
                let next = richardson(fine, coarse);
                let gap = relative_gap(next, prev);
                if gap <= VARIATION_RTOL * 0.01 || n >= 1 << 20 {
                    return Variation {
                        value: next,
                        refinement_gap: Some(gap),
                    };
                }
                prev = next;
            }
        }
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Time partition `0 = t_{-1} < t_0 < ... < t_N = T`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    times: Vec<f64>,
}

impl Partition {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        check_times(&times).map_err(|e| Error::Domain(format!("invalid partition: {e}")))?;
        Ok(Self { times })
    }

    pub fn uniform(t_end: f64, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::Domain("a partition needs at least one cell".into()));
        }
        let mut times: Vec<f64> = (0..=cells).map(|i| t_end * i as f64 / cells as f64).collect();
        times[cells] = t_end;
        Self::new(times)
    }

    /// Uniform partition refined to include `extra` break points.
    pub fn uniform_with(t_end: f64, cells: usize, extra: &[f64]) -> Result<Self> {
        let mut times = Self::uniform(t_end, cells)?.times;
        times.extend(extra.iter().copied().filter(|&t| t > 0.0 && t < t_end));
        times.sort_by(f64::total_cmp);
        times.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * t_end.max(1.0));
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn cells(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.windows(2).map(|w| (w[0], w[1]))
    }

    /// `δ(P)`, the largest cell.
    pub fn amplitude(&self) -> f64 {
        self.cells().map(|(a, b)| b - a).fold(0.0, f64::max)
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    fn sphere_curve(alpha: f64) -> ObservationCurve {
        ObservationCurve::parametric(PI / alpha, 3, move |t| {
            let a = FRAC_PI_4 + alpha * t;
            vec![0.0, SQRT_2 * a.cos(), SQRT_2 * a.sin()]
        })
        .unwrap()
    }

    #[test]
    fn variation_examples() {
        let v = curve_variation(&sphere_curve(0.3));
        assert!((v.value - SQRT_2 * PI).abs() <= 1e-8 * SQRT_2 * PI, "{}", v.value);
        assert!(v.converged());

        let c = ObservationCurve::from_spec(CurveSpec {
            kind: CurveKind::Polyline,
            times: vec![0.0, 1.0, 2.0],
            points: vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]],
        })
        .unwrap();
        assert_eq!(curve_variation(&c).value, 2.0);

        let c = ObservationCurve::from_spec(CurveSpec {
            kind: CurveKind::Polyline,
            times: vec![0.0, 3.0],
            points: vec![vec![0.2, 0.4]; 2],
        })
        .unwrap();
        assert_eq!(curve_variation(&c).value, 0.0);
    }

    #[test]
    fn sampled_variation_extrapolates() {
        let alpha = 0.3;
        let t_end = PI / alpha;
        let n = 4096;
        let times: Vec<f64> = (0..=n).map(|i| t_end * i as f64 / n as f64).collect();
        let points = times
            .iter()
            .map(|t| {
                let a = FRAC_PI_4 + alpha * t;
                vec![0.0, SQRT_2 * a.cos(), SQRT_2 * a.sin()]
            })
            .collect();
        let c = ObservationCurve::from_spec(CurveSpec {
            kind: CurveKind::Sampled,
            times,
            points,
        })
        .unwrap();
        let v = curve_variation(&c);
        assert!(v.converged(), "{v:?}");
        assert!((v.value - SQRT_2 * PI).abs() <= 1e-8 * SQRT_2 * PI);
    }

    #[test]
    fn piecewise_constant_evaluation() {
        let c = ObservationCurve::piecewise_constant_uniform(vec![vec![1.0, 1.0], vec![0.0, 0.0], vec![1.0, 1.0]], 3.0)
            .unwrap();
        assert_eq!(c.eval(0.5), vec![1.0, 1.0]);
        assert_eq!(c.eval(1.0), vec![0.0, 0.0]);
        assert_eq!(c.end(), vec![1.0, 1.0]);
        assert!((curve_variation(&c).value - 2.0 * SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_curves() {
        let bad_times = CurveSpec {
            kind: CurveKind::Polyline,
            times: vec![0.0, 2.0, 1.0],
            points: vec![vec![0.0]; 3],
        };
        assert!(ObservationCurve::from_spec(bad_times).is_err());
        let late_start = CurveSpec {
            kind: CurveKind::Polyline,
            times: vec![0.5, 1.0],
            points: vec![vec![0.0]; 2],
        };
        assert!(ObservationCurve::from_spec(late_start).is_err());
        let wrong_count = CurveSpec {
            kind: CurveKind::PiecewiseConstant,
            times: vec![0.0, 1.0],
            points: vec![vec![0.0]; 2],
        };
        assert!(ObservationCurve::from_spec(wrong_count).is_err());
        assert!(Partition::new(vec![0.0, 1.0, 1.0]).is_err());
        assert!(Partition::uniform(1.0, 0).is_err());
    }

    #[test]
    fn partition_amplitude() {
        let p = Partition::uniform_with(1.0, 4, &[0.3]).unwrap();
        assert_eq!(p.times().len(), 6);
        assert!((p.amplitude() - 0.25).abs() < 1e-15);
    }
}
