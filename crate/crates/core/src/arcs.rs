//! Arcs on the circle S¹ = R/(2πZ).
//!
//! An [`ArcSet`] is a finite union of half-open arcs `[lo, hi)`. Internally it
//! is stored as sorted, pairwise separated spans of `[0, 2π)`; an arc that
//! crosses 2π→0 is kept as two spans and reassembled by [`ArcSet::arcs`].
//! With half-open arcs, "covers the circle up to a null set" is the same as
//! "the complement is empty".

use serde::Serialize;

use crate::scalar::{total_cmp, Scalar};

/// A point of S¹, always in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Angle<S>(S);

impl<S: Scalar> Angle<S> {
    pub fn new(t: S) -> Self {
        quotient(t)
    }

    pub fn value(self) -> S {
        self.0
    }
}

/// The quotient map `r: R → R/(2πZ)`.
pub fn quotient<S: Scalar>(t: S) -> Angle<S> {
    Angle(t.rem_two_pi())
}

/// A single arc `[lo, hi)` of the circle; `wraps` is set when it crosses 2π→0.
///
/// The full circle is `[0, 2π)` with `wraps == false`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc<S> {
    pub lo: S,
    pub hi: S,
    pub wraps: bool,
}

impl<S: Scalar> Arc<S> {
    pub fn measure(&self) -> S {
        if self.wraps {
            S::two_pi() - self.lo + self.hi
        } else {
            self.hi - self.lo
        }
    }

    pub fn is_full(&self) -> bool {
        !self.wraps && self.lo == S::zero() && self.hi == S::two_pi()
    }
}

/// Linear piece `[lo, hi)` with `0 <= lo < hi <= 2π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Span<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> Span<S> {
    pub fn len(&self) -> S {
        self.hi - self.lo
    }

    pub fn contains(&self, x: S) -> bool {
        self.lo <= x && x < self.hi
    }
}

/// Normalized finite union of arcs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ArcSet<S> {
    spans: Vec<Span<S>>,
}

impl<S: Scalar> Default for ArcSet<S> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<S: Scalar> ArcSet<S> {
    pub fn empty() -> Self {
        Self { spans: Vec::new() }
    }

    pub fn full() -> Self {
        Self {
            spans: vec![Span {
                lo: S::zero(),
                hi: S::two_pi(),
            }],
        }
    }

    /// Arc starting at angle `start` (any real) and of length `len`.
    pub fn from_start_len(start: S, len: S) -> Self {
        if !S::zero().definitely_lt(len) {
            return Self::empty();
        }
        if S::two_pi().approx_le(len) {
            return Self::full();
        }
        let lo = start.rem_two_pi();
        let hi = lo + len;
        let spans = if hi.approx_le(S::two_pi()) {
            vec![Span {
                lo,
                hi: hi.min(S::two_pi()),
            }]
        } else {
            vec![
                Span {
                    lo: S::zero(),
                    hi: hi - S::two_pi(),
                },
                Span { lo, hi: S::two_pi() },
            ]
        };
        Self::from_spans(spans)
    }

    /// Normalize an arbitrary list of spans inside `[0, 2π]`.
    pub fn from_spans(mut spans: Vec<Span<S>>) -> Self {
        let two_pi = S::two_pi();
        for s in spans.iter_mut() {
            if s.lo.approx_eq(S::zero()) || s.lo < S::zero() {
                s.lo = S::zero();
            }
            if s.hi.approx_eq(two_pi) || s.hi > two_pi {
                s.hi = two_pi;
            }
        }
        spans.retain(|s| s.lo.definitely_lt(s.hi));
        spans.sort_by(|a, b| total_cmp(&a.lo, &b.lo));
        let mut out: Vec<Span<S>> = Vec::with_capacity(spans.len());
        for s in spans {
            match out.last_mut() {
                Some(last) if s.lo.approx_le(last.hi) => {
                    last.hi = last.hi.max(s.hi);
                }
                _ => out.push(s),
            }
        }
        Self { spans: out }
    }

    pub fn spans(&self) -> &[Span<S>] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.spans.len() == 1 && self.spans[0].lo == S::zero() && self.spans[0].hi == S::two_pi()
    }

    /// Arcs of the set, with the piece through 2π→0 reassembled.
    pub fn arcs(&self) -> Vec<Arc<S>> {
        let n = self.spans.len();
        let wrap = n > 1 && self.spans[0].lo == S::zero() && self.spans[n - 1].hi == S::two_pi();
        let mut arcs = Vec::with_capacity(n);
        let inner = if wrap { &self.spans[1..n - 1] } else { &self.spans[..] };
        for s in inner {
            arcs.push(Arc {
                lo: s.lo,
                hi: s.hi,
                wraps: false,
            });
        }
        if wrap {
            arcs.push(Arc {
                lo: self.spans[n - 1].lo,
                hi: self.spans[0].hi,
                wraps: true,
            });
        }
        arcs
    }

    pub fn measure(&self) -> S {
        self.spans.iter().fold(S::zero(), |acc, s| acc + s.len())
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.spans.len() + 1);
        let mut cursor = S::zero();
        for s in &self.spans {
            if cursor.definitely_lt(s.lo) {
                out.push(Span { lo: cursor, hi: s.lo });
            }
            cursor = s.hi;
        }
        if cursor.definitely_lt(S::two_pi()) {
            out.push(Span {
                lo: cursor,
                hi: S::two_pi(),
            });
        }
        Self { spans: out }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut spans = self.spans.clone();
        spans.extend_from_slice(&other.spans);
        Self::from_spans(spans)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (&self.spans, &other.spans);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].lo.max(b[j].lo);
            let hi = a[i].hi.min(b[j].hi);
            if lo.definitely_lt(hi) {
                out.push(Span { lo, hi });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_spans(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.difference(other).union(&other.difference(self))
    }

    /// `|S¹ \ self| = 0`; with half-open arcs this means the complement is empty.
    pub fn covers_circle(&self) -> bool {
        self.complement().is_empty()
    }

    /// Split spans so that no span has `cut` strictly inside it.
    pub fn split_at(&self, cut: S) -> Vec<Span<S>> {
        let cut = cut.rem_two_pi();
        let mut out = Vec::with_capacity(self.spans.len() + 1);
        for s in &self.spans {
            if s.lo.definitely_lt(cut) && cut.definitely_lt(s.hi) {
                out.push(Span { lo: s.lo, hi: cut });
                out.push(Span { lo: cut, hi: s.hi });
            } else {
                out.push(*s);
            }
        }
        out
    }

    pub fn contains(&self, x: S) -> bool {
        let x = x.rem_two_pi();
        self.spans.iter().any(|s| s.contains(x))
    }

    /// Convert to float arcs.
    pub fn to_f64(&self) -> ArcSet<f64> {
        ArcSet::from_spans(
            self.spans
                .iter()
                .map(|s| Span {
                    lo: s.lo.to_f64(),
                    hi: s.hi.to_f64(),
                })
                .collect(),
        )
    }
}

/// Image of the time interval `(from, to) - shift` under the quotient map.
///
/// `to == None` stands for `+∞`. Intervals of length at least 2π give the
/// full circle; empty intervals give the empty set.
pub fn project_interval<S: Scalar>(from: S, to: Option<S>, shift: S) -> ArcSet<S> {
    match to {
        None => ArcSet::full(),
        Some(to) => ArcSet::from_start_len(from - shift, to - from),
    }
}

/// Counter-clockwise distance from `from` to `to`, in `(0, 2π]`.
///
/// A zero distance is reported as a full turn.
pub fn ccw_distance<S: Scalar>(from: S, to: S) -> S {
    let d = (to - from).rem_two_pi();
    if d.approx_eq(S::zero()) {
        S::two_pi()
    } else {
        d
    }
}
