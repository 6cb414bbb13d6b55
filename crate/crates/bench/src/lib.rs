//! Fixtures shared by the benchmarks.

use obswave_core::multid::applications::{sphere_rotation_curve, unit_ball_3d};
use obswave_core::multid::{ConvexDomain, ObservationCurve, SPHERE_ALPHA_THRESHOLD};
use obswave_core::{PiRational, Schedule};

/// Constant-rate schedule `T_0 = p/q π` with `count` segments.
pub fn rate_schedule(p: i128, q: i128, count: usize) -> Schedule<PiRational> {
    Schedule::constant_rate(PiRational::new(p, q), count).expect("valid period")
}

/// Rotating multiplier around the unit ball, at half the critical speed.
pub fn sphere_fixture() -> (ConvexDomain, ObservationCurve) {
    let curve = sphere_rotation_curve(0.5 * SPHERE_ALPHA_THRESHOLD).expect("valid curve");
    (unit_ball_3d(), curve)
}
