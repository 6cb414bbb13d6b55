//! Constant-rate switching `λ_k × (kT_0, (k+1)T_0)` with `λ_k` alternating.
//!
//! [`classify`] selects the case from `N = ⌊2π/T_0⌋`, `j = ⌊π/T_0⌋` and the
//! arithmetic of `T_0`; inside a case the optimal time is an affine form
//! `aπ + bT_0` with rational `a`, `b`, which keeps exact mode exact and makes
//! one-sided limits easy to evaluate.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{PiRational, Rational, Scalar};
use crate::schedule::{optimal_time, ObservabilityReport, Schedule};

/// Case of the constant-rate classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RateCase {
    /// `π < T_0 < 2π` with `(n+2)π/(n+1) <= T_0 < (n+1)π/n`.
    Large {
        n: i128,
    },
    /// `T_0 = π/(2m)`.
    HalfEvenM {
        m: i128,
    },
    /// `T_0 = π/(2n+1)`, never observable.
    OddDenominator {
        n: i128,
    },
    /// `T_0 = 2π/(2h+1)`, `h` even.
    TwoOverOddEvenH {
        h: i128,
    },
    /// `T_0 = 2π/(2h+1)`, `h` odd.
    TwoOverOddOddH {
        h: i128,
    },
    GenEvenEven,
    GenEvenOdd {
        h_star: i128,
        k_star: i128,
    },
    GenOddEven {
        l_star: i128,
        q_star: i128,
    },
    GenOddOdd,
}

impl RateCase {
    pub fn tag(&self) -> &'static str {
        match self {
            RateCase::Large { .. } => "Large",
            RateCase::HalfEvenM { .. } => "HalfEvenM",
            RateCase::OddDenominator { .. } => "OddDenominator",
            RateCase::TwoOverOddEvenH { .. } => "TwoOverOddEvenH",
            RateCase::TwoOverOddOddH { .. } => "TwoOverOddOddH",
            RateCase::GenEvenEven => "GenEvenEven",
            RateCase::GenEvenOdd { .. } => "GenEvenOdd",
            RateCase::GenOddEven { .. } => "GenOddEven",
            RateCase::GenOddOdd => "GenOddOdd",
        }
    }
}

impl fmt::Display for RateCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RateCase::Large { n } => write!(f, "Large(n={n})"),
            RateCase::HalfEvenM { m } => write!(f, "HalfEvenM(m={m})"),
            RateCase::OddDenominator { n } => write!(f, "OddDenominator(n={n})"),
            RateCase::TwoOverOddEvenH { h } => write!(f, "TwoOverOddEvenH(h={h})"),
            RateCase::TwoOverOddOddH { h } => write!(f, "TwoOverOddOddH(h={h})"),
            RateCase::GenEvenOdd { h_star, k_star } => {
                write!(f, "GenEvenOdd(h*={h_star},k*={k_star})")
            }
            RateCase::GenOddEven { l_star, q_star } => {
                write!(f, "GenOddEven(l*={l_star},q*={q_star})")
            }
            other => f.write_str(other.tag()),
        }
    }
}

/// Optimal control time, or the analytic verdict that none exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Topt<S> {
    Finite(S),
    NotObservable,
}

impl<S: Scalar> Topt<S> {
    pub fn finite(self) -> Option<S> {
        match self {
            Topt::Finite(t) => Some(t),
            Topt::NotObservable => None,
        }
    }

    pub fn is_observable(&self) -> bool {
        matches!(self, Topt::Finite(_))
    }
}

impl<S: Scalar> fmt::Display for Topt<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topt::Finite(t) => write!(f, "{t}"),
            Topt::NotObservable => f.write_str("not observable"),
        }
    }
}

/// `T_opt = aπ + bT_0` on the current case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineForm {
    pub a: Rational,
    pub b: Rational,
}

impl AffineForm {
    fn new(a: i128, b: Rational) -> Self {
        Self {
            a: Rational::from_integer(a),
            b,
        }
    }

    pub fn eval<S: Scalar>(&self, t0: S) -> S {
        S::from_pi_ratio(self.a) + t0.mul_ratio(self.b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateAnalysis<S> {
    pub t0: S,
    /// `⌊2π/T_0⌋`.
    pub big_n: i128,
    /// `⌊π/T_0⌋`.
    pub j: i128,
    pub case: RateCase,
    pub t_opt: Topt<S>,
    #[serde(skip)]
    pub form: Option<AffineForm>,
}

fn check_domain<S: Scalar>(t0: S) -> Result<()> {
    if S::zero().definitely_lt(t0) && t0.definitely_lt(S::two_pi()) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "switching period must lie in (0, 2pi), got {t0}"
        )))
    }
}

fn int(k: i128) -> Rational {
    Rational::from_integer(k)
}

/// Classify `T_0` and evaluate the closed-form optimal time.
pub fn classify<S: Scalar>(t0: S) -> Result<RateAnalysis<S>> {
    check_domain(t0)?;
    let pi = S::pi();
    let two_pi = S::two_pi();
    let big_n = two_pi.div_floor(t0);
    let j = pi.div_floor(t0);

    let (case, form) = if pi.definitely_lt(t0) {
        let n = (two_pi - t0).div_ceil(t0 - pi).max(1);
        (RateCase::Large { n }, Some(AffineForm::new(n + 2, int(0))))
    } else if let Some(m) = two_pi.div_integer(t0) {
        match m % 4 {
            0 => (RateCase::HalfEvenM { m: m / 4 }, Some(AffineForm::new(2, int(0)))),
            2 => (RateCase::OddDenominator { n: (m / 2 - 1) / 2 }, None),
            _ => {
                let h = (m - 1) / 2;
                if h % 2 == 0 {
                    (
                        RateCase::TwoOverOddEvenH { h },
                        Some(AffineForm::new(3, Rational::new(-1, 2))),
                    )
                } else {
                    (RateCase::TwoOverOddOddH { h }, Some(AffineForm::new(3, int(0))))
                }
            }
        }
    } else {
        match (big_n % 2 == 0, j % 2 == 0) {
            (true, true) => (RateCase::GenEvenEven, Some(AffineForm::new(2, int(j)))),
            (true, false) => {
                let gap = two_pi - t0.mul_int(big_n);
                let h_star = (pi - t0.mul_int(j) + t0).div_ceil(gap);
                let k_star = t0.div_ceil(gap);
                let b = if h_star == k_star + 1 {
                    big_n * k_star + 1
                } else if h_star == k_star {
                    big_n * k_star - j + 1
                } else {
                    return Err(Error::Invariant(format!(
                        "T0 = {t0}: h* = {h_star} outside [k*, k*+1] with k* = {k_star}"
                    )));
                };
                (
                    RateCase::GenEvenOdd { h_star, k_star },
                    Some(AffineForm::new(1, int(b))),
                )
            }
            (false, true) => {
                let excess = t0.mul_int(big_n + 1) - two_pi;
                let l_star = t0.div_ceil(excess);
                let q_star = (pi - t0.mul_int(j)).div_ceil(excess);
                let a = if l_star == q_star {
                    2 * q_star
                } else if l_star == q_star + 1 {
                    2 * q_star + 1
                } else {
                    return Err(Error::Invariant(format!(
                        "T0 = {t0}: l* = {l_star} outside [q*, q*+1] with q* = {q_star}"
                    )));
                };
                (
                    RateCase::GenOddEven { l_star, q_star },
                    Some(AffineForm::new(a, int(j))),
                )
            }
            (false, false) => (RateCase::GenOddOdd, Some(AffineForm::new(1, int(big_n)))),
        }
    };

    let t_opt = match form {
        Some(f) => Topt::Finite(f.eval(t0)),
        None => Topt::NotObservable,
    };
    Ok(RateAnalysis {
        t0,
        big_n,
        j,
        case,
        t_opt,
        form,
    })
}

/// Closed-form optimal time for constant-rate switching with period `T_0`.
pub fn topt_constant_rate<S: Scalar>(t0: S) -> Result<Topt<S>> {
    classify(t0).map(|a| a.t_opt)
}

/// Segment horizon that decides observability exactly for `T_0 = (p/q)π`.
///
/// Segment `k + 2q` is segment `k` translated by `2pπ` with the same endpoint,
/// so its projection adds nothing new.
pub fn exact_horizon(t0: PiRational) -> usize {
    (2 * t0.denom()).max(1) as usize
}

/// Run the generic covering sweep on the explicit constant-rate schedule.
pub fn sweep_constant_rate<S: Scalar>(t0: S, horizon: usize) -> Result<ObservabilityReport<S>> {
    check_domain(t0)?;
    let schedule = Schedule::constant_rate(t0, horizon)?;
    Ok(optimal_time(&schedule, Some(horizon)))
}

/// Exact sweep oracle, decisive thanks to [`exact_horizon`].
pub fn oracle_topt(t0: PiRational) -> Result<Topt<PiRational>> {
    let report = sweep_constant_rate(t0, exact_horizon(t0))?;
    Ok(match report.t_opt {
        Some(t) => Topt::Finite(t),
        None => Topt::NotObservable,
    })
}

/// One sample of the `T_0 ↦ T_opt` map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapRow {
    pub t0: f64,
    pub t0_exact: Option<String>,
    pub case: String,
    pub topt: Option<f64>,
    pub topt_exact: Option<String>,
}

/// Sample the map on the grid `from, from + step, ...` up to `to` inclusive.
///
/// Grid points outside `(0, 2π)` are skipped; an empty or reversed range gives
/// an empty list.
pub fn topt_map<S: Scalar>(from: S, to: S, step: S) -> Result<Vec<MapRow>> {
    if !S::zero().definitely_lt(step) {
        return Err(Error::Domain(format!("grid step must be positive, got {step}")));
    }
    let mut rows = Vec::new();
    if to < from {
        return Ok(rows);
    }
    let count = (to - from).div_floor(step);
    for i in 0..=count {
        let t0 = from + step.mul_int(i);
        if check_domain(t0).is_err() {
            continue;
        }
        let a = classify(t0)?;
        let topt = a.t_opt.finite();
        rows.push(MapRow {
            t0: t0.to_f64(),
            t0_exact: t0.exact_string(),
            case: a.case.to_string(),
            topt: topt.map(Scalar::to_f64),
            topt_exact: topt.and_then(Scalar::exact_string),
        });
    }
    Ok(rows)
}

/// One-sided limit of the optimal time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Limit {
    Finite(PiRational),
    Infinite,
}

impl Limit {
    pub fn to_f64(self) -> f64 {
        match self {
            Limit::Finite(p) => p.to_f64(),
            Limit::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Finite(p) => write!(f, "{p}"),
            Limit::Infinite => f.write_str("+inf"),
        }
    }
}

/// Family a discontinuity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiscontinuityKind {
    /// `(n+2)π/(n+1)`.
    LambdaN { n: i128 },
    /// `π/(2n)`.
    PiOver2n { n: i128 },
    /// `π/(2n+1)`.
    PiOverOdd { n: i128 },
    /// `2π/(2h+1)`, `h` even.
    TwoPiOverOddEven { h: i128 },
    /// `2π/(2h+1)`, `h` odd.
    TwoPiOverOddOdd { h: i128 },
    /// `π/(k + 1/(m+2))`, `k` odd.
    MuM { k: i128, m: i128 },
    /// `π/(k + (m+1)/(m+2))`, `k` even.
    XiM { k: i128, m: i128 },
}

impl fmt::Display for DiscontinuityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DiscontinuityKind::LambdaN { n } => write!(f, "lambda_n(n={n})"),
            DiscontinuityKind::PiOver2n { n } => write!(f, "pi_over_2n(n={n})"),
            DiscontinuityKind::PiOverOdd { n } => write!(f, "pi_over_odd(n={n})"),
            DiscontinuityKind::TwoPiOverOddEven { h } => write!(f, "two_pi_over_odd_even(h={h})"),
            DiscontinuityKind::TwoPiOverOddOdd { h } => write!(f, "two_pi_over_odd_odd(h={h})"),
            DiscontinuityKind::MuM { k, m } => write!(f, "mu_m(k={k},m={m})"),
            DiscontinuityKind::XiM { k, m } => write!(f, "xi_m(k={k},m={m})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscontinuityPoint {
    pub location: PiRational,
    pub kind: DiscontinuityKind,
    pub left_limit: Limit,
    pub right_limit: Limit,
    pub value_at: Topt<PiRational>,
}

impl DiscontinuityPoint {
    /// `left − right` when both limits are finite.
    pub fn jump(&self) -> Option<PiRational> {
        match (self.left_limit, self.right_limit) {
            (Limit::Finite(l), Limit::Finite(r)) => Some(l - r),
            _ => None,
        }
    }
}

/// Catalog truncation: the families indexed by `n` (for `λ_n`) and by `m`
/// (for `μ_m`, `ξ_m`) are infinite and accumulate at `π/k`.
pub const DEFAULT_MAX_ORDER: i128 = 6;

/// Cap on `k` in `π/k`-type points, to keep ranges near 0 finite.
const MAX_K: i128 = 100_000;

fn p(numer: i128, denom: i128) -> PiRational {
    PiRational::new(numer, denom)
}

/// Known discontinuities of `T_0 ↦ T_opt` located in the open range `(a, b)`.
///
/// The `λ_n`, `μ_m` and `ξ_m` families are truncated at `n, m <= max_order`.
/// Locations are strictly increasing.
pub fn discontinuity_catalog(a: f64, b: f64, max_order: i128) -> Result<Vec<DiscontinuityPoint>> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("range bounds must be finite".into()));
    }
    let lo = a.max(0.0);
    let hi = b.min(std::f64::consts::TAU);
    if lo >= hi {
        return Ok(Vec::new());
    }
    let k_max = if lo > 0.0 {
        (std::f64::consts::PI / lo).ceil() as i128 + 1
    } else {
        i128::MAX
    };
    if k_max > MAX_K {
        return Err(Error::Domain(format!(
            "range starting at {a} holds too many catalog points; start above {:.3e}",
            std::f64::consts::PI / MAX_K as f64
        )));
    }
    let inside = |x: PiRational| {
        let v = x.to_f64();
        lo < v && v < hi
    };
    let fin = Limit::Finite;
    let mut points = Vec::new();

    for n in 1..=max_order {
        let loc = p(n + 2, n + 1);
        points.push((
            loc,
            DiscontinuityKind::LambdaN { n },
            fin(p(n + 3, 1)),
            fin(p(n + 2, 1)),
        ));
    }
    for k in 1..=k_max {
        let loc = p(1, k);
        if k % 2 == 0 {
            let right = p(3, 1) - loc;
            points.push((loc, DiscontinuityKind::PiOver2n { n: k / 2 }, fin(p(3, 1)), fin(right)));
        } else {
            let kind = DiscontinuityKind::PiOverOdd { n: (k - 1) / 2 };
            points.push((loc, kind, Limit::Infinite, Limit::Infinite));
        }
        // 2π/(2h+1) with h = k.
        let h = k;
        let loc = p(2, 2 * h + 1);
        let shift = p(2 * h, 2 * h + 1);
        if h % 2 == 0 {
            let kind = DiscontinuityKind::TwoPiOverOddEven { h };
            points.push((loc, kind, fin(p(3, 1) + shift), fin(p(2, 1) + shift)));
        } else {
            let kind = DiscontinuityKind::TwoPiOverOddOdd { h };
            points.push((loc, kind, fin(p(3, 1)), fin(p(3, 1) + shift)));
        }
        for m in 1..=max_order {
            if k % 2 == 1 {
                let mu = PiRational(Rational::from_integer(1) / (int(k) + Rational::new(1, m + 2)));
                let left = p(1, 1) + mu.mul_int(k * (m + 2) + 1);
                let right = p(1, 1) + mu.mul_int(k * (m + 3) + 1);
                points.push((mu, DiscontinuityKind::MuM { k, m }, fin(left), fin(right)));
            } else {
                let xi = PiRational(Rational::from_integer(1) / (int(k) + Rational::new(m + 1, m + 2)));
                let left = p(m + 3, 1) + xi.mul_int(k);
                let right = p(m + 2, 1) + xi.mul_int(k);
                points.push((xi, DiscontinuityKind::XiM { k, m }, fin(left), fin(right)));
            }
        }
    }

    points.retain(|(loc, ..)| inside(*loc));
    points.sort_by_key(|x| x.0);
    for w in points.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::Invariant(format!(
                "catalog points {} and {} coincide at {}",
                w[0].1, w[1].1, w[0].0
            )));
        }
    }
    points
        .into_iter()
        .map(|(location, kind, left_limit, right_limit)| {
            Ok(DiscontinuityPoint {
                location,
                kind,
                left_limit,
                right_limit,
                value_at: topt_constant_rate(location)?,
            })
        })
        .collect()
}

/// Exact one-sided limits of the closed form at `t0`, read off the affine
/// forms of the cases immediately to the left and right.
///
/// `delta` is a relative offset small enough that no other case boundary lies
/// in `(t0(1 − delta), t0)` or `(t0, t0(1 + delta))`. A side classified as
/// never observable yields [`Limit::Infinite`].
pub fn exact_one_sided_limits(t0: PiRational, delta: Rational) -> Result<(Limit, Limit)> {
    let side = |x: PiRational| -> Result<Limit> {
        Ok(match classify(x)?.form {
            Some(f) => Limit::Finite(f.eval(t0)),
            None => Limit::Infinite,
        })
    };
    let one = Rational::from_integer(1);
    let left = side(t0.mul_ratio(one - delta))?;
    let right = side(t0.mul_ratio(one + delta))?;
    Ok((left, right))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        assert_eq!(classify(p(7, 4)).unwrap().case, RateCase::Large { n: 1 });
        assert_eq!(classify(p(3, 2)).unwrap().case, RateCase::Large { n: 1 });
        assert_eq!(classify(p(4, 3)).unwrap().case, RateCase::Large { n: 2 });
        assert_eq!(classify(p(1, 2)).unwrap().case, RateCase::HalfEvenM { m: 1 });
        assert_eq!(classify(p(2, 5)).unwrap().case, RateCase::TwoOverOddEvenH { h: 2 });
        assert_eq!(classify(p(2, 3)).unwrap().case, RateCase::TwoOverOddOddH { h: 1 });
        assert_eq!(classify(p(1, 1)).unwrap().case, RateCase::OddDenominator { n: 0 });
        assert_eq!(classify(p(1, 5)).unwrap().case, RateCase::OddDenominator { n: 2 });
        let a = classify(0.7_f64).unwrap();
        assert_eq!((a.big_n, a.j, a.case), (8, 4, RateCase::GenEvenEven));
        assert!(classify(p(2, 1)).is_err());
        assert!(classify(p(0, 1)).is_err());
        assert!(classify(-1.0_f64).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(topt_constant_rate(p(1, 2)).unwrap(), Topt::Finite(p(2, 1)));
        assert_eq!(topt_constant_rate(p(1, 5)).unwrap(), Topt::NotObservable);
        assert_eq!(topt_constant_rate(p(2, 5)).unwrap(), Topt::Finite(p(14, 5)));
        assert_eq!(topt_constant_rate(p(2, 3)).unwrap(), Topt::Finite(p(3, 1)));
        assert_eq!(topt_constant_rate(p(7, 4)).unwrap(), Topt::Finite(p(3, 1)));
        let t = topt_constant_rate(0.7_f64).unwrap().finite().unwrap();
        assert!((t - (std::f64::consts::TAU + 2.8)).abs() < 1e-12);
    }

    #[test]
    fn float_and_exact_modes_agree() {
        for (n, d) in [(3, 7), (5, 9), (9, 11), (13, 10), (1, 4), (2, 7)] {
            let e = topt_constant_rate(p(n, d)).unwrap().finite().map(|x| x.to_f64());
            let f = topt_constant_rate(p(n, d).to_f64()).unwrap().finite();
            match (e, f) {
                (Some(e), Some(f)) => assert!((e - f).abs() < 1e-9, "{n}/{d}"),
                (e, f) => assert_eq!(e.is_some(), f.is_some(), "{n}/{d}"),
            }
        }
    }

    #[test]
    fn oracle_matches_on_examples() {
        for (n, d) in [(1, 2), (2, 5), (2, 3), (7, 4), (3, 8), (5, 7), (3, 4), (4, 9)] {
            assert_eq!(
                oracle_topt(p(n, d)).unwrap(),
                topt_constant_rate(p(n, d)).unwrap(),
                "{n}/{d}"
            );
        }
        assert_eq!(oracle_topt(p(1, 3)).unwrap(), Topt::NotObservable);
    }

    #[test]
    fn catalog_examples() {
        let cat = discontinuity_catalog(0.3, std::f64::consts::TAU, DEFAULT_MAX_ORDER).unwrap();
        let find = |loc: PiRational| cat.iter().find(|d| d.location == loc).unwrap();
        let l1 = find(p(3, 2));
        assert_eq!(
            (l1.left_limit, l1.right_limit),
            (Limit::Finite(p(4, 1)), Limit::Finite(p(3, 1)))
        );
        let xi = find(p(3, 8));
        assert_eq!(xi.kind, DiscontinuityKind::XiM { k: 2, m: 1 });
        assert_eq!(xi.left_limit, Limit::Finite(p(4, 1) + p(3, 4)));
        assert_eq!(xi.jump(), Some(p(1, 1)));
        let mu = find(p(3, 4));
        assert_eq!(mu.kind, DiscontinuityKind::MuM { k: 1, m: 1 });
        assert_eq!(mu.jump(), Some(-p(3, 4)));
        assert!(cat.windows(2).all(|w| w[0].location < w[1].location));
    }

    #[test]
    fn catalog_near_pi_over_three() {
        let third = std::f64::consts::PI / 3.0;
        let cat = discontinuity_catalog(third - 0.1, third + 0.1, DEFAULT_MAX_ORDER).unwrap();
        let odd: Vec<_> = cat
            .iter()
            .filter(|d| matches!(d.kind, DiscontinuityKind::PiOverOdd { .. }))
            .collect();
        assert_eq!(odd.len(), 1);
        assert_eq!(odd[0].left_limit, Limit::Infinite);
        assert_eq!(odd[0].value_at, Topt::NotObservable);
    }

    #[test]
    fn map_examples() {
        let rows = topt_map(p(1, 2), p(1, 2), p(1, 100)).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].topt_exact.as_deref(), Some("2 pi"));
        assert!(topt_map(p(1, 1), p(1, 2), p(1, 100)).unwrap().is_empty());
        let rows = topt_map(p(1, 4), p(1, 2), p(1, 12)).unwrap();
        let third = rows.iter().find(|r| r.t0_exact.as_deref() == Some("1/3 pi")).unwrap();
        assert_eq!(third.topt, None);
        assert!(topt_map(p(1, 4), p(1, 2), p(0, 1)).is_err());
    }
}
