//! Published reference values, recomputed and compared in one run.

use std::f64::consts::{PI, SQRT_2};
use std::fmt::Display;

use obswave_core::constant_rate::DEFAULT_MAX_ORDER;
use obswave_core::multid::applications::{optimality_gap, sphere_report, square_alternating_points};
use obswave_core::multid::{
    alternating_threshold, application_reports, illuminated_boundary, radius_max, variable_threshold,
    ApplicationReports, ConvexDomain, IlluminatedSet, ObservationCurve, SPHERE_ALPHA_THRESHOLD,
};
use obswave_core::schedule::reduced_measure;
use obswave_core::{
    classify, discontinuity_catalog, observability_constant, optimal_time, single_exchange_topt, topt_constant_rate,
    topt_map, DiscontinuityKind, DiscontinuityPoint, Endpoint, Limit, PiRational, RateCase, Schedule, Segment, Topt,
};
use serde::Serialize;

use crate::error::CliError;
use crate::output::Sink;

/// Tolerance on floating reference values.
const FLOAT_TOL: f64 = 1e-9;

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    expected: String,
    computed: String,
    ok: bool,
}

#[derive(Debug, Serialize)]
struct ReferenceReport {
    passed: usize,
    failed: usize,
    checks: Vec<Check>,
    applications: ApplicationReports,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    fn exact<T: PartialEq + std::fmt::Debug>(&mut self, name: &str, expected: T, computed: T) {
        let ok = expected == computed;
        self.push(name, format!("{expected:?}"), format!("{computed:?}"), ok);
    }

    fn close(&mut self, name: &str, expected: f64, computed: f64, tol: f64) {
        let ok = (expected - computed).abs() <= tol;
        self.push(name, format!("{expected:.12}"), format!("{computed:.12}"), ok);
    }

    fn holds(&mut self, name: &str, expected: impl Display, computed: impl Display, ok: bool) {
        self.push(name, expected.to_string(), computed.to_string(), ok);
    }

    fn push(&mut self, name: &str, expected: String, computed: String, ok: bool) {
        self.0.push(Check {
            name: name.into(),
            expected,
            computed,
            ok,
        });
    }

    fn failed(&mut self, name: &str, err: impl Display) {
        self.push(name, "a value".into(), format!("error: {err}"), false);
    }
}

fn pi(n: i128, d: i128) -> PiRational {
    PiRational::new(n, d)
}

fn one_sided(cs: &mut Checks) {
    let s = Schedule::new(vec![Segment {
        endpoint: Endpoint::Zero,
        from: pi(0, 1),
        to: None,
    }]);
    match s {
        Ok(s) => cs.exact(
            "unbounded observation at 0: T_opt",
            Some(pi(2, 1)),
            optimal_time(&s, None).t_opt,
        ),
        Err(e) => cs.failed("unbounded observation at 0: T_opt", e),
    }
    match Schedule::constant_rate(pi(1, 3), 120) {
        Ok(s) => cs.exact(
            "T0 = pi/3 over 120 segments: observable",
            false,
            optimal_time(&s, None).observable,
        ),
        Err(e) => cs.failed("T0 = pi/3 over 120 segments: observable", e),
    }
}

fn single_exchange(cs: &mut Checks) {
    for (t0, want) in [(pi(3, 2), pi(3, 1)), (pi(1, 2), pi(5, 2)), (pi(1, 1), pi(3, 1))] {
        let name = format!("single exchange T0 = {t0}: T_opt");
        match single_exchange_topt(t0) {
            Ok(r) => cs.exact(&name, want, r.t_opt),
            Err(e) => cs.failed(&name, e),
        }
    }
    match single_exchange_topt(pi(3, 2)) {
        Ok(r) => {
            let at_pi: Vec<_> = r
                .reduced
                .iter()
                .filter(|x| x.endpoint == Endpoint::Pi)
                .flat_map(|x| x.intervals.clone())
                .collect();
            cs.exact(
                "single exchange T0 = 3 pi/2: reduced interval at pi",
                vec![(pi(5, 2), pi(3, 1))],
                at_pi,
            );
        }
        Err(e) => cs.failed("single exchange T0 = 3 pi/2: reduced interval at pi", e),
    }
    match single_exchange_topt(pi(1, 2)) {
        Ok(r) => {
            let at_zero: Vec<_> = r
                .reduced
                .iter()
                .filter(|x| x.endpoint == Endpoint::Zero)
                .flat_map(|x| x.intervals.clone())
                .collect();
            cs.exact(
                "single exchange T0 = pi/2: reduced interval at 0",
                vec![(pi(0, 1), pi(1, 2))],
                at_zero,
            );
            cs.exact(
                "single exchange T0 = pi/2: reduced measure",
                pi(2, 1),
                reduced_measure(&r.reduced),
            );
        }
        Err(e) => cs.failed("single exchange T0 = pi/2: reduction", e),
    }
}

fn constant_rate(cs: &mut Checks) {
    for (t0, want) in [
        (pi(1, 2), RateCase::HalfEvenM { m: 1 }),
        (pi(2, 5), RateCase::TwoOverOddEvenH { h: 2 }),
    ] {
        let name = format!("constant rate T0 = {t0}: case");
        match classify(t0) {
            Ok(a) => cs.exact(&name, want, a.case),
            Err(e) => cs.failed(&name, e),
        }
    }
    let table = [
        (pi(1, 2), Topt::Finite(pi(2, 1))),
        (pi(1, 5), Topt::NotObservable),
        (pi(2, 5), Topt::Finite(pi(14, 5))),
        (pi(2, 3), Topt::Finite(pi(3, 1))),
        (pi(7, 4), Topt::Finite(pi(3, 1))),
    ];
    for (t0, want) in table {
        let name = format!("constant rate T0 = {t0}: T_opt");
        match topt_constant_rate(t0) {
            Ok(got) => cs.exact(&name, want, got),
            Err(e) => cs.failed(&name, e),
        }
    }
    match topt_map(pi(1, 2), pi(1, 2), pi(1, 100)) {
        Ok(rows) => {
            let got: Vec<_> = rows.iter().map(|r| (r.t0, r.topt)).collect();
            let ok = matches!(got[..], [(t0, Some(t))] if (t0 - PI / 2.0).abs() < FLOAT_TOL && (t - 2.0 * PI).abs() < FLOAT_TOL);
            cs.holds("map at the single point pi/2", "(pi/2, 2 pi)", format!("{got:?}"), ok);
        }
        Err(e) => cs.failed("map at the single point pi/2", e),
    }
}

fn find(catalog: &[DiscontinuityPoint], kind: DiscontinuityKind) -> Option<&DiscontinuityPoint> {
    catalog.iter().find(|p| p.kind == kind)
}

fn catalog(cs: &mut Checks) {
    let catalog = match discontinuity_catalog(0.05, 2.0 * PI - 0.05, DEFAULT_MAX_ORDER) {
        Ok(c) => c,
        Err(e) => return cs.failed("discontinuity catalog", e),
    };
    let entries = [
        (
            "lambda_1",
            DiscontinuityKind::LambdaN { n: 1 },
            pi(3, 2),
            Limit::Finite(pi(4, 1)),
            Limit::Finite(pi(3, 1)),
        ),
        (
            "xi_1 (k = 2)",
            DiscontinuityKind::XiM { k: 2, m: 1 },
            pi(3, 8),
            Limit::Finite(pi(4, 1) + pi(6, 8)),
            Limit::Finite(pi(3, 1) + pi(6, 8)),
        ),
        (
            "pi/3",
            DiscontinuityKind::PiOverOdd { n: 1 },
            pi(1, 3),
            Limit::Infinite,
            Limit::Infinite,
        ),
    ];
    for (label, kind, at, left, right) in entries {
        match find(&catalog, kind) {
            Some(p) => cs.exact(
                &format!("{label}: location and limits"),
                (at, left, right),
                (p.location, p.left_limit, p.right_limit),
            ),
            None => cs.failed(&format!("{label}: location and limits"), "missing from catalog"),
        }
    }
    if let Some(p) = find(&catalog, DiscontinuityKind::XiM { k: 2, m: 1 }) {
        cs.exact("xi_1 (k = 2): left minus right", Some(pi(1, 1)), p.jump());
    }
    match find(&catalog, DiscontinuityKind::MuM { k: 1, m: 1 }) {
        // T_opt jumps up at mu_m, by k mu_m.
        Some(p) => cs.exact(
            "mu_1 (k = 1): location and jump",
            (pi(3, 4), Some(pi(3, 4))),
            (p.location, p.jump().map(|j| -j)),
        ),
        None => cs.failed("mu_1 (k = 1): location and jump", "missing from catalog"),
    }
}

fn full_period(cs: &mut Checks) {
    let s = Schedule::new(vec![Segment {
        endpoint: Endpoint::Zero,
        from: 0.0,
        to: Some(2.0 * PI),
    }]);
    for m in [8, 32] {
        let name = format!("full period at 0, M = {m}: c_min");
        match s
            .as_ref()
            .map_err(|e| e.to_string())
            .and_then(|s| observability_constant(s, 2.0 * PI, m).map_err(|e| e.to_string()))
        {
            Ok(c) => cs.close(&name, 4.0, c, FLOAT_TOL),
            Err(e) => cs.failed(&name, e),
        }
    }
}

fn geometry(cs: &mut Checks) -> Result<(), obswave_core::Error> {
    let square = ConvexDomain::unit_square();
    for (x0, want) in [
        ([1.0, 1.0], [true, false, false, true]),
        ([2.0, -0.25], [false, false, true, true]),
    ] {
        let got = illuminated_boundary(&square, &x0)?;
        cs.exact(
            &format!("unit square seen from {x0:?}: illuminated edges (y=0, x=1, y=1, x=0)"),
            IlluminatedSet::Edges { mask: want.to_vec() },
            got,
        );
    }
    cs.close(
        "unit square from (1,1): radius_max",
        SQRT_2,
        radius_max(&square, &[1.0, 1.0])?,
        FLOAT_TOL,
    );
    let ball = ConvexDomain::Ball {
        center: vec![0.0; 3],
        radius: 1.0,
    };
    cs.close(
        "unit ball from (0,1,1): radius_max",
        1.0 + SQRT_2,
        radius_max(&ball, &[0.0, 1.0, 1.0])?,
        FLOAT_TOL,
    );
    for n in [1usize, 2, 5] {
        let b = alternating_threshold(&square, &square_alternating_points(n), None)?;
        cs.close(
            &format!("square alternating N = {n}: threshold"),
            SQRT_2 * (n as f64 + 2.0),
            b.threshold,
            FLOAT_TOL,
        );
        // The same points as a piecewise-constant curve give the same threshold.
        let curve = ObservationCurve::piecewise_constant_uniform(square_alternating_points(n), n as f64 + 1.0)?;
        let v = variable_threshold(&square, &curve)?;
        cs.close(
            &format!("square alternating N = {n}: piecewise-constant curve threshold"),
            b.threshold,
            v.threshold,
            FLOAT_TOL,
        );
    }
    let sphere = sphere_report()?;
    cs.close("sphere rotation: curve length", SQRT_2 * PI, sphere.length, 1e-8);
    cs.close(
        "sphere rotation: c_0 = c_T",
        1.0 + SQRT_2,
        sphere.c0.max(sphere.c_t),
        FLOAT_TOL,
    );
    cs.close(
        "sphere rotation: alpha threshold",
        SPHERE_ALPHA_THRESHOLD,
        sphere.alpha_threshold_computed,
        1e-10,
    );
    for length in [0.5, 1.0, 2.0] {
        let g = optimality_gap(length);
        cs.close(
            &format!("criterion gap on the square, L = {length}"),
            SQRT_2 + length,
            g.gap,
            FLOAT_TOL,
        );
    }
    Ok(())
}

pub fn run(out: &Sink, max_n: usize) -> Result<(), CliError> {
    let mut cs = Checks::default();
    one_sided(&mut cs);
    single_exchange(&mut cs);
    constant_rate(&mut cs);
    catalog(&mut cs);
    full_period(&mut cs);
    if let Err(e) = geometry(&mut cs) {
        cs.failed("geometry", e);
    }
    let checks = cs.0;
    let failed = checks.iter().filter(|c| !c.ok).count();
    let report = ReferenceReport {
        passed: checks.len() - failed,
        failed,
        checks,
        applications: application_reports(max_n)?,
    };
    out.json(&report)?;
    if failed > 0 {
        return Err(CliError::Invariant(format!("{failed} reference values not reproduced")));
    }
    Ok(())
}
