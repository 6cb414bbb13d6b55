//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::time::Instant;

use obswave_core::constant_rate::{exact_horizon, oracle_topt, sweep_constant_rate, DEFAULT_MAX_ORDER};
use obswave_core::multid::applications::{
    sphere_report, sphere_rotation_curve, sphere_symdiff_table, square_alternating_points,
};
use obswave_core::multid::{
    alternating_threshold, curve_variation, variable_threshold, ConvexDomain, ObservationCurve,
};
use obswave_core::schedule::reduced_measure;
use obswave_core::spectral::parseval_check;
use obswave_core::{
    build_counterexample, discontinuity_catalog, disjointify, energy, observability_constant, observed_energy,
    optimal_time, single_exchange_topt, topt_constant_rate, trace_at_pi, trace_at_zero, BumpParams, DiscontinuityKind,
    Endpoint, FourierData, Limit, PiRational, Scalar, Schedule, Segment, Topt,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn pi(n: i128, d: i128) -> PiRational {
    PiRational::new(n, d)
}

/// `p/q` in lowest terms equal to `1/(2n+1)`.
fn is_pi_over_odd(t: PiRational) -> bool {
    t.numer() == 1 && t.denom() % 2 == 1
}

fn random_t0(rng: &mut ChaCha8Rng) -> PiRational {
    loop {
        let q = rng.gen_range(1..=200i128);
        let p = rng.gen_range(1..2 * q);
        let t = pi(p, q);
        if !is_pi_over_odd(t) {
            return t;
        }
    }
}

/// Every observable schedule checked by criterion 9 is pushed here.
struct Observed(Vec<(Schedule<PiRational>, usize)>);

fn criterion_1(observed: &mut Observed) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut mismatches = Vec::new();
    for i in 0..10_000 {
        let t0 = random_t0(&mut rng);
        let closed = topt_constant_rate(t0).map_err(|e| e.to_string())?;
        let oracle = oracle_topt(t0).map_err(|e| e.to_string())?;
        if closed != oracle {
            mismatches.push(format!("{t0}: closed {closed:?}, sweep {oracle:?}"));
        }
        if i % 50 == 0 {
            let horizon = exact_horizon(t0);
            if let Some(h) = sweep_constant_rate(t0, horizon)
                .map_err(|e| e.to_string())?
                .least_index_h
            {
                observed
                    .0
                    .push((Schedule::constant_rate(t0, horizon).map_err(|e| e.to_string())?, h));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if !mismatches.is_empty() {
        return Err(format!("{} mismatches, first: {}", mismatches.len(), mismatches[0]));
    }
    if secs >= 30.0 {
        return Err(format!("10000 samples agree but took {secs:.1}s"));
    }
    Ok(format!("10000 random T0 agree exactly ({secs:.2}s)"))
}

fn criterion_2() -> Outcome {
    let table = [
        (pi(1, 2), Topt::Finite(pi(2, 1))),
        (pi(1, 5), Topt::NotObservable),
        (pi(2, 5), Topt::Finite(pi(14, 5))),
        (pi(2, 3), Topt::Finite(pi(3, 1))),
        (pi(7, 4), Topt::Finite(pi(3, 1))),
    ];
    for (t0, want) in table {
        let got = topt_constant_rate(t0).map_err(|e| e.to_string())?;
        if got != want {
            return Err(format!("T0 = {t0}: got {got:?}, want {want:?}"));
        }
    }
    for (t0, want) in [(pi(3, 2), pi(3, 1)), (pi(1, 2), pi(5, 2))] {
        let got = single_exchange_topt(t0).map_err(|e| e.to_string())?.t_opt;
        if got != want {
            return Err(format!("single exchange T0 = {t0}: got {got}, want {want}"));
        }
        let sweep = optimal_time(&Schedule::single_exchange(t0).map_err(|e| e.to_string())?, None);
        if sweep.t_opt != Some(want) {
            return Err(format!("single exchange T0 = {t0}: sweep gives {:?}", sweep.t_opt));
        }
    }
    Ok("7 table values equal exactly".into())
}

fn sample(t0: f64) -> f64 {
    match topt_constant_rate(t0) {
        Ok(Topt::Finite(t)) => t,
        Ok(Topt::NotObservable) => f64::INFINITY,
        Err(_) => f64::NAN,
    }
}

fn criterion_3() -> Outcome {
    const OFFSET: f64 = 1e-6;
    const TOL: f64 = 1e-4;
    let catalog = discontinuity_catalog(0.3, TAU, DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
    let (mut xi, mut mu) = (0, 0);
    for point in &catalog {
        let x = point.location.to_f64();
        for (limit, value, side) in [
            (point.left_limit, sample(x - OFFSET), "left"),
            (point.right_limit, sample(x + OFFSET), "right"),
        ] {
            let ok = match limit {
                Limit::Infinite => value > 100.0 * PI,
                Limit::Finite(l) => (l.to_f64() - value).abs() <= TOL,
            };
            if !ok {
                return Err(format!(
                    "{} at {}: {side} limit {:?}, sampled {value}",
                    point.kind, point.location, limit
                ));
            }
        }
        match point.kind {
            DiscontinuityKind::XiM { .. } => {
                xi += 1;
                let jump = point.jump().ok_or("xi point with infinite limit")?.to_f64();
                if (jump - PI).abs() > 1e-9 {
                    return Err(format!("{} jump {jump}, want pi", point.kind));
                }
            }
            DiscontinuityKind::MuM { k, .. } => {
                mu += 1;
                // T_opt jumps up here, so left − right is negative.
                let jump = -point.jump().ok_or("mu point with infinite limit")?.to_f64();
                let want = k as f64 * x;
                if (jump - want).abs() > 1e-9 {
                    return Err(format!("{} jump {jump}, want {want}", point.kind));
                }
            }
            _ => {}
        }
    }
    if xi == 0 || mu == 0 {
        return Err(format!("catalog lacks xi ({xi}) or mu ({mu}) points"));
    }
    Ok(format!(
        "{} points matched, {xi} xi jumps and {mu} mu jumps exact",
        catalog.len()
    ))
}

fn random_data(rng: &mut ChaCha8Rng, m: usize) -> FourierData {
    let mut coeffs = || (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>();
    let c0 = coeffs();
    let c1 = coeffs();
    FourierData::new(c0, c1).expect("valid random data")
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (lhs, rhs) = parseval_check(&random_data(&mut rng, 64));
        worst = worst.max((lhs - rhs).abs() / rhs);
    }
    let secs = start.elapsed().as_secs_f64();
    if worst > 1e-9 || secs >= 5.0 {
        return Err(format!("worst relative residual {worst:e} in {secs:.2}s"));
    }
    Ok(format!("worst relative residual {worst:.1e} ({secs:.2}s)"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let m = rng.gen_range(1..=32);
        let data = random_data(&mut rng, m);
        let t = rng.gen_range(0.0..8.0 * PI);
        worst = worst.max((trace_at_pi(&data, t) - trace_at_zero(&data, t - PI)).abs());
    }
    if worst > 1e-12 {
        return Err(format!("max deviation {worst:e}"));
    }
    Ok(format!("max deviation {worst:.1e}"))
}

fn criterion_6() -> Outcome {
    let s = Schedule::new(vec![Segment {
        endpoint: Endpoint::Zero,
        from: 0.0,
        to: Some(TAU),
    }])
    .map_err(|e| e.to_string())?;
    let c = observability_constant(&s, TAU, 32).map_err(|e| e.to_string())?;
    if (c - 4.0).abs() > 1e-9 {
        return Err(format!("constant {c}"));
    }
    Ok(format!("constant {c:.12}"))
}

fn criterion_7() -> Outcome {
    let t0 = pi(1, 3);
    let horizon = exact_horizon(t0);
    let report = sweep_constant_rate(t0, horizon).map_err(|e| e.to_string())?;
    if report.observable {
        return Err("T0 = pi/3 reported observable".into());
    }
    let cex = build_counterexample(&report.uncovered.to_f64(), BumpParams::default()).map_err(|e| e.to_string())?;
    // Observe over several periods of the schedule.
    let segments = 4 * horizon;
    let schedule = Schedule::constant_rate(PI / 3.0, segments).map_err(|e| e.to_string())?;
    let e0 = energy(&cex.data);
    let ratio = observed_energy(&cex.data, &schedule, segments as f64 * PI / 3.0) / e0;
    if !(e0 > 0.0 && ratio <= 1e-8) {
        return Err(format!("E0 = {e0:e}, observed/E0 = {ratio:e}"));
    }
    Ok(format!("E0 = {e0:.3e}, observed/E0 = {ratio:.1e}"))
}

fn criterion_8() -> Outcome {
    let schedule = Schedule::constant_rate(PI / 2.0, 4).map_err(|e| e.to_string())?;
    let c16 = observability_constant(&schedule, TAU, 16).map_err(|e| e.to_string())?;
    let c32 = observability_constant(&schedule, TAU, 32).map_err(|e| e.to_string())?;
    let change = (c32 - c16).abs() / c16;
    if c16 < 1e-6 || change >= 0.1 {
        return Err(format!("c16 = {c16:e}, c32 = {c32:e}"));
    }
    Ok(format!("c16 = {c16:.6}, c32 = {c32:.6}, relative change {change:.1e}"))
}

fn criterion_9(observed: &mut Observed) -> Outcome {
    for t0 in [pi(1, 2), pi(2, 5), pi(2, 3), pi(7, 4), pi(1, 7), pi(5, 3)] {
        let s = Schedule::single_exchange(t0).map_err(|e| e.to_string())?;
        let h = optimal_time(&s, None)
            .least_index_h
            .ok_or("single exchange not observable")?;
        observed.0.push((s, h));
        let horizon = exact_horizon(t0);
        let s = Schedule::constant_rate(t0, horizon).map_err(|e| e.to_string())?;
        if let Some(h) = optimal_time(&s, Some(horizon)).least_index_h {
            observed.0.push((s, h));
        }
    }
    let breaks = [pi(1, 4), pi(1, 1), pi(3, 2), pi(13, 4)];
    let s = Schedule::alternating(&breaks, true).map_err(|e| e.to_string())?;
    let h = optimal_time(&s, None)
        .least_index_h
        .ok_or("alternating schedule not observable")?;
    observed.0.push((s, h));

    for (s, h) in &observed.0 {
        let total = reduced_measure(&disjointify(s, *h).map_err(|e| e.to_string())?);
        if total != PiRational::two_pi() {
            return Err(format!(
                "total {total} for schedule starting {:?}",
                s.segments().first()
            ));
        }
    }
    Ok(format!(
        "{} observable schedules reduce to total 2 pi exactly",
        observed.0.len()
    ))
}

fn criterion_10() -> Outcome {
    let square = ConvexDomain::unit_square();
    let n2 = alternating_threshold(&square, &square_alternating_points(2), None).map_err(|e| e.to_string())?;
    if (n2.threshold - 4.0 * SQRT_2).abs() > 1e-12 {
        return Err(format!("square N=2 threshold {}", n2.threshold));
    }
    let curve = sphere_rotation_curve(0.3).map_err(|e| e.to_string())?;
    let length = curve_variation(&curve).value;
    if (length - SQRT_2 * PI).abs() > 1e-8 {
        return Err(format!("sphere curve variation {length}"));
    }
    // Ten digits, evaluated separately at high precision.
    const ALPHA_10: f64 = 0.3388509965;
    let alpha = sphere_report().map_err(|e| e.to_string())?.alpha_threshold_computed;
    if (alpha - ALPHA_10).abs() > 1e-9 {
        return Err(format!("sphere alpha threshold {alpha}"));
    }
    for n in 1..=8 {
        let points = square_alternating_points(n);
        let curve = ObservationCurve::piecewise_constant_uniform(points.clone(), 100.0).map_err(|e| e.to_string())?;
        let v = variable_threshold(&square, &curve)
            .map_err(|e| e.to_string())?
            .threshold;
        let a = alternating_threshold(&square, &points, None)
            .map_err(|e| e.to_string())?
            .threshold;
        if v != a {
            return Err(format!("N = {n}: variable {v} != alternating {a}"));
        }
    }
    Ok(format!(
        "N=2 threshold {:.15}, variation {length:.12}, alpha {alpha:.12}",
        n2.threshold
    ))
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let table = sphere_symdiff_table(0.3, 4..=10).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    for w in table.windows(2) {
        if w[1].1.symdiff.partial_cmp(&w[0].1.symdiff) != Some(std::cmp::Ordering::Less) {
            return Err(format!(
                "k = {}: {} not below {}",
                w[1].0, w[1].1.symdiff, w[0].1.symdiff
            ));
        }
    }
    let (_, last) = table.last().ok_or("empty table")?;
    if last.ratio() > 1e-3 || secs >= 60.0 {
        return Err(format!("final ratio {:e} in {secs:.1}s", last.ratio()));
    }
    Ok(format!(
        "strictly decreasing, final ratio {:.2e} ({secs:.2}s)",
        last.ratio()
    ))
}

fn main() {
    let mut observed = Observed(Vec::new());
    let results: Vec<(u32, Outcome)> = vec![
        (1, criterion_1(&mut observed)),
        (2, criterion_2()),
        (3, criterion_3()),
        (4, criterion_4()),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, criterion_7()),
        (8, criterion_8()),
        (9, criterion_9(&mut observed)),
        (10, criterion_10()),
        (11, criterion_11()),
    ];
    let mut failed = 0;
    for (n, outcome) in &results {
        match outcome {
            Ok(msg) => println!("PASS criterion {n}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {n}: {msg}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
