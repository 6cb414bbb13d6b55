use std::f64::consts::{PI, TAU};

use obswave_core::constant_rate::{exact_horizon, sweep_constant_rate};
use obswave_core::spectral::{parseval_residual, quadratic_forms};
use obswave_core::{
    build_counterexample, energy, observability_constant, observed_energy, parseval_check, trace_at_pi, trace_at_zero,
    ArcSet, BumpParams, Endpoint, FourierData, PiRational, Schedule, Segment,
};
use proptest::prelude::*;

fn data(m: usize) -> impl Strategy<Value = FourierData> {
    (
        prop::collection::vec(-1.0..1.0f64, m),
        prop::collection::vec(-1.0..1.0f64, m),
    )
        .prop_map(|(c0, c1)| FourierData::new(c0, c1).unwrap())
}

/// Composite Simpson rule, `n` even.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn quadrature_observed(d: &FourierData, s: &Schedule<f64>, horizon: f64) -> f64 {
    s.segments()
        .iter()
        .filter_map(|seg| {
            let b = seg.to.unwrap_or(f64::INFINITY).min(horizon);
            (seg.from < b).then(|| {
                let trace = |t: f64| match seg.endpoint {
                    Endpoint::Zero => trace_at_zero(d, t),
                    Endpoint::Pi => trace_at_pi(d, t),
                };
                simpson(|t| trace(t).powi(2), seg.from, b, 4000)
            })
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_holds(d in (1usize..=64).prop_flat_map(data)) {
        let (lhs, rhs) = parseval_check(&d);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs);
        prop_assert!(parseval_residual(&d) <= 1e-9);
        prop_assert!((rhs - 4.0 * energy(&d)).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn closed_form_energy_matches_quadrature(d in data(8), t0 in 0.3..4.0f64, horizon in 1.0..12.0f64) {
        let s = Schedule::constant_rate(t0, (horizon / t0).ceil() as usize).unwrap();
        let closed = observed_energy(&d, &s, horizon);
        let quad = quadrature_observed(&d, &s, horizon);
        prop_assert!((closed - quad).abs() <= 1e-8 * quad.max(1.0), "{closed} vs {quad}");
    }

    #[test]
    fn shift_identity(d in data(16), t in 0.0..20.0f64) {
        prop_assert!((trace_at_pi(&d, t) - trace_at_zero(&d, t - PI)).abs() <= 1e-12);
    }

    #[test]
    fn splitting_a_window_is_additive(d in data(12), cut in 0.1..4.9f64) {
        let whole = Schedule::new(vec![Segment { endpoint: Endpoint::Pi, from: 0.0, to: Some(5.0) }]).unwrap();
        let split = Schedule::new(vec![
            Segment { endpoint: Endpoint::Pi, from: 0.0, to: Some(cut) },
            Segment { endpoint: Endpoint::Pi, from: cut, to: Some(5.0) },
        ])
        .unwrap();
        let (a, b) = (observed_energy(&d, &whole, 5.0), observed_energy(&d, &split, 5.0));
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn constant_bounds_every_rayleigh_quotient(d in data(10)) {
        let s = Schedule::constant_rate(PI / 2.0, 6).unwrap();
        let c = observability_constant(&s, 3.0 * PI, 10).unwrap();
        prop_assert!(observed_energy(&d, &s, 3.0 * PI) / energy(&d) >= c - 1e-10);
    }
}

#[test]
fn full_periods_give_multiples_of_four() {
    for periods in 1..=3 {
        let horizon = periods as f64 * TAU;
        let s = Schedule::new(vec![Segment {
            endpoint: Endpoint::Zero,
            from: 0.0,
            to: Some(horizon),
        }])
        .unwrap();
        for m in [4, 16, 48] {
            let c = observability_constant(&s, horizon, m).unwrap();
            assert!((c - 4.0 * periods as f64).abs() < 1e-9, "periods {periods}, m {m}: {c}");
        }
    }
}

#[test]
fn covering_constant_stabilizes() {
    let s = Schedule::constant_rate(2.0 * PI / 5.0, 10).unwrap();
    let horizon = 14.0 * PI / 5.0 + 0.5;
    let c: Vec<f64> = [8, 16, 32, 64]
        .iter()
        .map(|&m| observability_constant(&s, horizon, m).unwrap())
        .collect();
    assert!(c.iter().all(|&x| x > 1e-3), "{c:?}");
    assert!(c.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{c:?}");
    assert!((c[3] - c[2]).abs() < 0.1 * c[2], "{c:?}");
}

#[test]
fn non_covering_constant_decays() {
    let s = Schedule::constant_rate(PI / 3.0, 12).unwrap();
    let c16 = observability_constant(&s, 4.0 * PI, 16).unwrap();
    let c64 = observability_constant(&s, 4.0 * PI, 64).unwrap();
    assert!(c64 < c16 && c64 < 1e-3, "{c16} {c64}");
}

fn counterexample_ratio(uncovered: &ArcSet<f64>, m: usize, s: &Schedule<f64>, horizon: f64) -> f64 {
    let cex = build_counterexample(
        uncovered,
        BumpParams {
            m,
            ..BumpParams::default()
        },
    )
    .unwrap();
    assert!(cex.energy > 0.0);
    assert!(cex.truncation_residue < 1e-8);
    observed_energy(&cex.data, s, horizon) / cex.energy
}

#[test]
fn counterexamples_for_unobservable_schedules() {
    // Narrower gaps need a narrower bump and so more modes.
    for (den, m) in [(3, 256), (5, 256), (7, 512), (9, 512)] {
        let t0 = PiRational::new(1, den);
        let report = sweep_constant_rate(t0, exact_horizon(t0)).unwrap();
        assert!(!report.observable);
        let count = 6 * den as usize;
        let s = Schedule::constant_rate(PI / den as f64, count).unwrap();
        let ratio = counterexample_ratio(&report.uncovered.to_f64(), m, &s, count as f64 * PI / den as f64);
        assert!(ratio <= 1e-8, "pi/{den}: {ratio:e}");
    }
    let short = Schedule::new(vec![Segment {
        endpoint: Endpoint::Zero,
        from: 0.0,
        to: Some(1.5 * PI),
    }])
    .unwrap();
    let gap = ArcSet::from_start_len(1.5 * PI, 0.5 * PI);
    assert!(counterexample_ratio(&gap, 256, &short, 1.5 * PI) <= 1e-8);
}

#[test]
fn counterexample_needs_a_gap() {
    assert!(build_counterexample(&ArcSet::empty(), BumpParams::default()).is_err());
    let bad = BumpParams {
        samples: 1,
        ..BumpParams::default()
    };
    assert!(build_counterexample(&ArcSet::from_start_len(1.0, 1.0), bad).is_err());
}

#[test]
fn quadratic_forms_are_symmetric() {
    let s = Schedule::constant_rate(0.9, 8).unwrap();
    let f = quadratic_forms(&s, 6.0, 12).unwrap();
    let q = &f.observed_form;
    assert!((q - q.transpose()).abs().max() < 1e-14);
    assert!(quadratic_forms(&s, 6.0, 0).is_err());
}
