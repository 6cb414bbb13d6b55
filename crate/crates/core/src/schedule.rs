//! Switching observation schedules and the covering sweep.
//!
//! A schedule observes the endpoint `λ_k ∈ {0, π}` during the open time
//! interval `I_k = (t_{k-1}, t_k)`. Observability in time `sup I_n` holds iff
//! the shifted projections `r(I_k − λ_k)`, `k <= n`, cover the circle.

use serde::{Deserialize, Serialize};

use crate::arcs::{ccw_distance, project_interval, ArcSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Observed endpoint of the string `(0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Endpoint {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "pi")]
    Pi,
}

impl Endpoint {
    /// The shift `λ` as a scalar.
    pub fn shift<S: Scalar>(self) -> S {
        match self {
            Endpoint::Zero => S::zero(),
            Endpoint::Pi => S::pi(),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Endpoint::Zero => Endpoint::Pi,
            Endpoint::Pi => Endpoint::Zero,
        }
    }

    /// Endpoint of segment `k` in an alternating schedule starting at 0.
    pub fn alternating(k: usize) -> Self {
        if k.is_multiple_of(2) {
            Endpoint::Zero
        } else {
            Endpoint::Pi
        }
    }
}

/// Open time interval `(from, to)`; `to == None` means `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeInterval<S> {
    pub from: S,
    pub to: Option<S>,
}

impl<S: Scalar> TimeInterval<S> {
    pub fn new(from: S, to: S) -> Self {
        Self { from, to: Some(to) }
    }

    pub fn unbounded(from: S) -> Self {
        Self { from, to: None }
    }

    pub fn len(&self) -> Option<S> {
        self.to.map(|t| t - self.from)
    }

    fn validate(&self) -> Result<()> {
        if let Some(to) = self.to {
            if !self.from.definitely_lt(to) {
                return Err(Error::Domain(format!("empty time interval ({}, {})", self.from, to)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Segment<S> {
    pub endpoint: Endpoint,
    pub from: S,
    pub to: Option<S>,
}

impl<S: Scalar> Segment<S> {
    pub fn interval(&self) -> TimeInterval<S> {
        TimeInterval {
            from: self.from,
            to: self.to,
        }
    }

    /// `r(I_k − λ_k)`.
    pub fn projection(&self) -> ArcSet<S> {
        project_interval(self.from, self.to, self.endpoint.shift())
    }

    /// Angle at which the projection starts, `r(t_{k-1} − λ_k)`.
    pub fn start_angle(&self) -> S {
        (self.from - self.endpoint.shift::<S>()).rem_two_pi()
    }
}

/// Ordered, consecutive observation segments starting at time 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Schedule<S> {
    segments: Vec<Segment<S>>,
}

impl<S: Scalar> Schedule<S> {
    /// Validate and build. Intervals must be nonempty and consecutive, the
    /// first must start at 0 and only the last may be unbounded.
    pub fn new(segments: Vec<Segment<S>>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Domain("schedule has no segments".into()));
        }
        if segments[0].from != S::zero() {
            return Err(Error::Domain(format!(
                "first segment must start at 0, got {}",
                segments[0].from
            )));
        }
        for (k, seg) in segments.iter().enumerate() {
            seg.interval().validate()?;
            match (seg.to, segments.get(k + 1)) {
                (None, Some(_)) => {
                    return Err(Error::Domain(format!(
                        "segment {k} is unbounded but is not the last one"
                    )))
                }
                (Some(to), Some(next)) if !to.approx_eq(next.from) => {
                    return Err(Error::Domain(format!(
                        "segments {k} and {} are not consecutive ({} vs {})",
                        k + 1,
                        to,
                        next.from
                    )))
                }
                _ => {}
            }
        }
        Ok(Self { segments })
    }

    /// Alternating schedule `0, π, 0, ...` with breakpoints `t_0 < t_1 < ...`.
    ///
    /// With `unbounded_tail` an extra last segment `(t_last, +∞)` is added.
    pub fn alternating(breaks: &[S], unbounded_tail: bool) -> Result<Self> {
        let mut segments = Vec::with_capacity(breaks.len() + 1);
        let mut from = S::zero();
        for (k, &to) in breaks.iter().enumerate() {
            segments.push(Segment {
                endpoint: Endpoint::alternating(k),
                from,
                to: Some(to),
            });
            from = to;
        }
        if unbounded_tail {
            segments.push(Segment {
                endpoint: Endpoint::alternating(segments.len()),
                from,
                to: None,
            });
        }
        Self::new(segments)
    }

    /// First `count` segments of the constant-rate schedule
    /// `λ_k × (kT_0, (k+1)T_0)`.
    pub fn constant_rate(t0: S, count: usize) -> Result<Self> {
        if !S::zero().definitely_lt(t0) {
            return Err(Error::Domain(format!("switching period must be positive, got {t0}")));
        }
        let breaks: Vec<S> = (1..=count as i128).map(|k| t0.mul_int(k)).collect();
        Self::alternating(&breaks, false)
    }

    /// `{0} × (0, T_0)` followed by `{π} × (T_0, +∞)`.
    pub fn single_exchange(t0: S) -> Result<Self> {
        Self::alternating(&[t0], true)
    }

    pub fn segments(&self) -> &[Segment<S>] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// `10·⌈2π / shortest bounded segment⌉`, at least the schedule length
    /// when every segment is short, and never more than the schedule has.
    pub fn default_horizon(&self) -> usize {
        let shortest = self
            .segments
            .iter()
            .filter_map(|s| s.interval().len())
            .fold(None, |acc: Option<S>, l| Some(acc.map_or(l, |a| a.min(l))));
        let wanted = match shortest {
            Some(l) => 10 * S::two_pi().div_ceil(l).max(1) as usize,
            None => 1,
        };
        wanted.min(self.segments.len())
    }

    /// Convert to float mode.
    pub fn to_f64(&self) -> Schedule<f64> {
        Schedule {
            segments: self
                .segments
                .iter()
                .map(|s| Segment {
                    endpoint: s.endpoint,
                    from: s.from.to_f64(),
                    to: s.to.map(Scalar::to_f64),
                })
                .collect(),
        }
    }
}

/// Union of the projections of segments `0..=n`.
pub fn covered_set<S: Scalar>(schedule: &Schedule<S>, n: usize) -> ArcSet<S> {
    schedule.segments[..=n.min(schedule.len() - 1)]
        .iter()
        .fold(ArcSet::empty(), |acc, s| acc.union(&s.projection()))
}

/// Observability in time `sup I_n`.
pub fn is_observable_at<S: Scalar>(schedule: &Schedule<S>, n: usize) -> Result<bool> {
    if n >= schedule.len() {
        return Err(Error::Precondition(format!(
            "index {n} outside a schedule of {} segments",
            schedule.len()
        )));
    }
    Ok(covered_set(schedule, n).covers_circle())
}

/// Outcome of the covering sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservabilityReport<S> {
    pub observable: bool,
    pub t_opt: Option<S>,
    /// Uncovered part of the circle just before segment `h`, or at the
    /// horizon when not observable.
    pub uncovered: ArcSet<S>,
    pub least_index_h: Option<usize>,
    pub segments_examined: usize,
}

/// Sweep the schedule and compute the optimal control time.
///
/// At most `horizon` segments are examined (the schedule's
/// [`default_horizon`](Schedule::default_horizon) when `None`). At the least
/// index `h` whose projection exhausts the uncovered set `U`, the covering
/// grows counter-clockwise from `s = r(t_{h-1} − λ_h)`, so
/// `T_opt = t_{h-1} + max_b dist(s, b)` over the right ends `b` of `U` split
/// at `s`.
pub fn optimal_time<S: Scalar>(schedule: &Schedule<S>, horizon: Option<usize>) -> ObservabilityReport<S> {
    let limit = horizon
        .unwrap_or_else(|| schedule.default_horizon())
        .min(schedule.len());
    let mut uncovered = ArcSet::full();
    for (h, seg) in schedule.segments[..limit].iter().enumerate() {
        let rest = uncovered.difference(&seg.projection());
        if rest.is_empty() {
            let s = seg.start_angle();
            let reach = uncovered
                .split_at(s)
                .iter()
                .map(|span| ccw_distance(s, span.hi))
                .fold(S::zero(), S::max);
            return ObservabilityReport {
                observable: true,
                t_opt: Some(seg.from + reach),
                uncovered,
                least_index_h: Some(h),
                segments_examined: h + 1,
            };
        }
        uncovered = rest;
    }
    ObservabilityReport {
        observable: false,
        t_opt: None,
        uncovered,
        least_index_h: None,
        segments_examined: limit,
    }
}

/// Pullback `I′_k ⊂ I_k` of the disjoint piece `J̃_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedSegment<S> {
    pub index: usize,
    pub endpoint: Endpoint,
    /// Disjoint open intervals, in increasing time.
    pub intervals: Vec<(S, S)>,
}

impl<S: Scalar> ReducedSegment<S> {
    pub fn measure(&self) -> S {
        self.intervals.iter().fold(S::zero(), |acc, &(a, b)| acc + (b - a))
    }
}

/// Total length of a reduced schedule.
pub fn reduced_measure<S: Scalar>(reduced: &[ReducedSegment<S>]) -> S {
    reduced.iter().fold(S::zero(), |acc, r| acc + r.measure())
}

/// Reduce segments `0..=n` to time sets whose projections are pairwise
/// disjoint and cover the circle exactly once.
///
/// `J̃_0 = Ĩ_0` and `J̃_k = Ĩ_k \ ∪_{i<k} J̃_i`; each `J̃_k` is pulled back to the
/// earliest times of `I_k` that project onto it.
pub fn disjointify<S: Scalar>(schedule: &Schedule<S>, n: usize) -> Result<Vec<ReducedSegment<S>>> {
    if !is_observable_at(schedule, n)? {
        return Err(Error::Precondition(format!("schedule is not observable at index {n}")));
    }
    let mut uncovered = ArcSet::full();
    let mut out = Vec::with_capacity(n + 1);
    for (index, seg) in schedule.segments[..=n].iter().enumerate() {
        let proj = seg.projection();
        let piece = proj.intersection(&uncovered);
        uncovered = uncovered.difference(&proj);
        let s = seg.start_angle();
        let mut intervals: Vec<(S, S)> = piece
            .split_at(s)
            .iter()
            .map(|span| {
                let offset = (span.lo - s).rem_two_pi();
                let a = seg.from + offset;
                (a, a + span.len())
            })
            .collect();
        intervals.sort_by(|x, y| crate::scalar::total_cmp(&x.0, &y.0));
        out.push(ReducedSegment {
            index,
            endpoint: seg.endpoint,
            intervals,
        });
    }
    Ok(out)
}

/// Two independent families of observation intervals, one per endpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedSchedule<S> {
    pub zero_intervals: Vec<TimeInterval<S>>,
    pub pi_intervals: Vec<TimeInterval<S>>,
}

impl<S: Scalar> GeneralizedSchedule<S> {
    /// Validate: within each family intervals are nonempty, ordered and
    /// pairwise disjoint.
    pub fn new(zero_intervals: Vec<TimeInterval<S>>, pi_intervals: Vec<TimeInterval<S>>) -> Result<Self> {
        for (name, fam) in [("0", &zero_intervals), ("pi", &pi_intervals)] {
            for iv in fam.iter() {
                iv.validate()?;
            }
            for w in fam.windows(2) {
                let ok = matches!(w[0].to, Some(to) if to.approx_le(w[1].from));
                if !ok {
                    return Err(Error::Domain(format!(
                        "intervals of the {name} family overlap or are out of order"
                    )));
                }
            }
        }
        Ok(Self {
            zero_intervals,
            pi_intervals,
        })
    }

    pub fn covered_set(&self) -> ArcSet<S> {
        let zero = self
            .zero_intervals
            .iter()
            .map(|iv| project_interval(iv.from, iv.to, S::zero()));
        let pi = self
            .pi_intervals
            .iter()
            .map(|iv| project_interval(iv.from, iv.to, S::pi()));
        zero.chain(pi).fold(ArcSet::empty(), |acc, a| acc.union(&a))
    }
}

pub fn is_generalized_observable<S: Scalar>(b: &GeneralizedSchedule<S>) -> bool {
    b.covered_set().covers_circle()
}

/// Optimal time and reduced schedule for the single exchange
/// `{0} × (0, T_0)`, `{π} × (T_0, +∞)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingleExchange<S> {
    pub t0: S,
    pub t_opt: S,
    /// Disjoint reduction obtained from the sweep.
    pub reduced: Vec<ReducedSegment<S>>,
    /// A second valid reduction: nothing at 0, all of `(T_0, T_opt)` at π.
    /// Only present for `T_0 <= π`.
    pub alternative: Option<Vec<ReducedSegment<S>>>,
}

/// Closed form: `T_opt = 3π` for `π < T_0 < 2π`, `2π + T_0` for `0 < T_0 <= π`.
pub fn single_exchange_topt<S: Scalar>(t0: S) -> Result<SingleExchange<S>> {
    if !(S::zero().definitely_lt(t0) && t0.definitely_lt(S::two_pi())) {
        return Err(Error::Domain(format!("single exchange needs 0 < T0 < 2pi, got {t0}")));
    }
    let schedule = Schedule::single_exchange(t0)?;
    let reduced = disjointify(&schedule, 1)?;
    if t0 > S::pi() {
        return Ok(SingleExchange {
            t0,
            t_opt: S::pi().mul_int(3),
            reduced,
            alternative: None,
        });
    }
    let t_opt = S::two_pi() + t0;
    let alternative = vec![
        ReducedSegment {
            index: 0,
            endpoint: Endpoint::Zero,
            intervals: Vec::new(),
        },
        ReducedSegment {
            index: 1,
            endpoint: Endpoint::Pi,
            intervals: vec![(t0, t_opt)],
        },
    ];
    Ok(SingleExchange {
        t0,
        t_opt,
        reduced,
        alternative: Some(alternative),
    })
}
