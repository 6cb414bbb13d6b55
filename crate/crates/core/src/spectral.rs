//! Truncated Fourier analysis of the wave equation on `(0, π)`.
//!
//! Initial data `u_0 = Σ c0_j sin(jx)`, `u_1 = Σ c1_j sin(jx)`, `j = 1..M`.
//! The boundary trace at `x = 0` is `Σ a_j cos(jt) + b_j sin(jt)` with
//! `a_j = j·c0_j` and `b_j = c1_j`; at `x = π` each mode picks up `(−1)^j`.
//! Quadratic forms are assembled in these trace coordinates `(a, b)`, where
//! the energy is `(π/4)·|(a, b)|²`.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::arcs::{ArcSet, Span};
use crate::error::{Error, Result};
use crate::schedule::{Endpoint, Schedule};

/// Largest supported truncation order.
pub const MAX_MODES: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierData {
    /// `û_0(j)`, `j = 1..M`.
    pub c0: Vec<f64>,
    /// `û_1(j)`, `j = 1..M`.
    pub c1: Vec<f64>,
}

impl FourierData {
    pub fn new(c0: Vec<f64>, c1: Vec<f64>) -> Result<Self> {
        if c0.len() != c1.len() {
            return Err(Error::Domain(format!(
                "coefficient vectors differ in length ({} vs {})",
                c0.len(),
                c1.len()
            )));
        }
        if c0.iter().chain(&c1).any(|v| !v.is_finite()) {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        Ok(Self { c0, c1 })
    }

    pub fn zeros(m: usize) -> Self {
        Self {
            c0: vec![0.0; m],
            c1: vec![0.0; m],
        }
    }

    /// Build from trace coordinates `a_j = j·c0_j`, `b_j = c1_j`.
    pub fn from_trace_coefficients(a: &[f64], b: &[f64]) -> Result<Self> {
        let c0 = a.iter().enumerate().map(|(i, v)| v / (i + 1) as f64).collect();
        Self::new(c0, b.to_vec())
    }

    /// Truncation order `M`.
    pub fn m(&self) -> usize {
        self.c0.len()
    }

    /// `(a_1..a_M, b_1..b_M)`.
    pub fn trace_vector(&self) -> DVector<f64> {
        let m = self.m();
        DVector::from_fn(2 * m, |i, _| {
            if i < m {
                (i + 1) as f64 * self.c0[i]
            } else {
                self.c1[i - m]
            }
        })
    }

    pub fn is_zero(&self) -> bool {
        self.c0.iter().chain(&self.c1).all(|&v| v == 0.0)
    }
}

/// `(sin jt, cos jt)` with the rounding error of `j·t` folded back in, so the
/// phase is as accurate as `t` itself.
fn mode_sin_cos(jf: f64, t: f64) -> (f64, f64) {
    let p = jf * t;
    let e = jf.mul_add(t, -p);
    let (s, c) = p.sin_cos();
    (s + e * c, c - e * s)
}

/// `u_x(0, t)`.
pub fn trace_at_zero(data: &FourierData, t: f64) -> f64 {
    (1..=data.m())
        .map(|j| {
            let jf = j as f64;
            let (s, c) = mode_sin_cos(jf, t);
            jf * data.c0[j - 1] * c + data.c1[j - 1] * s
        })
        .sum()
}

/// `u_x(π, t)`, evaluated from its own series (odd modes change sign).
pub fn trace_at_pi(data: &FourierData, t: f64) -> f64 {
    (1..=data.m())
        .map(|j| {
            let jf = j as f64;
            let (s, c) = mode_sin_cos(jf, t);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * (jf * data.c0[j - 1] * c + data.c1[j - 1] * s)
        })
        .sum()
}

/// `E_0 = (π/4) Σ (j²·c0_j² + c1_j²)`.
pub fn energy(data: &FourierData) -> f64 {
    PI / 4.0 * data.trace_vector().norm_squared()
}

/// `∫_α^β cos(nt) dt`.
fn int_cos(n: i64, alpha: f64, beta: f64) -> f64 {
    if n == 0 {
        return beta - alpha;
    }
    let nf = n as f64;
    2.0 * (nf * (alpha + beta) / 2.0).cos() * (nf * (beta - alpha) / 2.0).sin() / nf
}

/// `∫_α^β sin(nt) dt`.
fn int_sin(n: i64, alpha: f64, beta: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let nf = n as f64;
    2.0 * (nf * (alpha + beta) / 2.0).sin() * (nf * (beta - alpha) / 2.0).sin() / nf
}

/// Gram matrix of `cos(t)..cos(Mt), sin(t)..sin(Mt)` on `(α, β)`, in closed form.
pub fn gram_matrix(m: usize, alpha: f64, beta: f64) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(2 * m, 2 * m);
    for j in 1..=m as i64 {
        for k in j..=m as i64 {
            let (jj, kk) = ((j - 1) as usize, (k - 1) as usize);
            let cd = int_cos(j - k, alpha, beta);
            let cs = int_cos(j + k, alpha, beta);
            let cc = 0.5 * (cd + cs);
            let ss = 0.5 * (cd - cs);
            g[(jj, kk)] = cc;
            g[(kk, jj)] = cc;
            g[(m + jj, m + kk)] = ss;
            g[(m + kk, m + jj)] = ss;
            // cos(jt)·sin(kt) and cos(kt)·sin(jt).
            let cj_sk = 0.5 * (int_sin(k + j, alpha, beta) + int_sin(k - j, alpha, beta));
            let ck_sj = 0.5 * (int_sin(j + k, alpha, beta) + int_sin(j - k, alpha, beta));
            g[(jj, m + kk)] = cj_sk;
            g[(m + kk, jj)] = cj_sk;
            g[(kk, m + jj)] = ck_sj;
            g[(m + jj, kk)] = ck_sj;
        }
    }
    g
}

/// Energy form and observed-energy form, both in trace coordinates.
#[derive(Debug, Clone)]
pub struct QuadraticForms {
    /// Diagonal of the energy form (all `π/4`).
    pub energy_form: DVector<f64>,
    pub observed_form: DMatrix<f64>,
}

/// Observation windows `(α, β, endpoint)` of the schedule inside `(0, T)`.
fn windows(schedule: &Schedule<f64>, horizon: f64) -> Vec<(f64, f64, Endpoint)> {
    schedule
        .segments()
        .iter()
        .filter_map(|s| {
            let a = s.from.max(0.0);
            let b = s.to.unwrap_or(f64::INFINITY).min(horizon);
            (a < b).then_some((a, b, s.endpoint))
        })
        .collect()
}

/// Gram matrix of the trace at `endpoint`: at `π` the odd modes flip sign.
fn endpoint_gram(m: usize, alpha: f64, beta: f64, endpoint: Endpoint) -> DMatrix<f64> {
    let mut g = gram_matrix(m, alpha, beta);
    if endpoint == Endpoint::Pi {
        let sign = |i: usize| if (i % m).is_multiple_of(2) { -1.0 } else { 1.0 };
        for r in 0..2 * m {
            for c in 0..2 * m {
                g[(r, c)] *= sign(r) * sign(c);
            }
        }
    }
    g
}

pub fn quadratic_forms(schedule: &Schedule<f64>, horizon: f64, m: usize) -> Result<QuadraticForms> {
    check_modes(m)?;
    let mut q = DMatrix::zeros(2 * m, 2 * m);
    for (a, b, e) in windows(schedule, horizon) {
        q += endpoint_gram(m, a, b, e);
    }
    Ok(QuadraticForms {
        energy_form: DVector::from_element(2 * m, PI / 4.0),
        observed_form: q,
    })
}

fn check_modes(m: usize) -> Result<()> {
    if m == 0 || m > MAX_MODES {
        return Err(Error::Domain(format!(
            "truncation order must be in 1..={MAX_MODES}, got {m}"
        )));
    }
    Ok(())
}

/// `Σ_k ∫_{I_k ∩ (0,T)} |u_x(λ_k, t)|² dt`, in closed form.
pub fn observed_energy(data: &FourierData, schedule: &Schedule<f64>, horizon: f64) -> f64 {
    let x = data.trace_vector();
    let m = data.m();
    if m == 0 {
        return 0.0;
    }
    windows(schedule, horizon)
        .into_iter()
        .map(|(a, b, e)| endpoint_gram(m, a, b, e).quadform_value(&x))
        .sum()
}

trait QuadForm {
    fn quadform_value(&self, x: &DVector<f64>) -> f64;
}

impl QuadForm for DMatrix<f64> {
    fn quadform_value(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(self * x))
    }
}

/// `(∫_0^{2π} |u_x(0,t)|² dt, 2(‖u_0′‖² + ‖u_1‖²))`.
pub fn parseval_check(data: &FourierData) -> (f64, f64) {
    let x = data.trace_vector();
    if data.m() == 0 {
        return (0.0, 0.0);
    }
    let lhs = gram_matrix(data.m(), 0.0, TAU).quadform_value(&x);
    let rhs = PI * x.norm_squared();
    (lhs, rhs)
}

/// `|lhs − rhs| / rhs` of [`parseval_check`], 0 for zero data.
pub fn parseval_residual(data: &FourierData) -> f64 {
    let (lhs, rhs) = parseval_check(data);
    if rhs == 0.0 {
        (lhs - rhs).abs()
    } else {
        (lhs - rhs).abs() / rhs
    }
}

/// Smallest Rayleigh quotient `observed / E_0` over the `2m`-dimensional span.
///
/// Since the energy form is `π/4` times the identity in trace coordinates, this
/// is the least eigenvalue of `(4/π)·Q_obs`. It bounds the true constant of
/// the infinite-dimensional inequality from above.
pub fn observability_constant(schedule: &Schedule<f64>, horizon: f64, m: usize) -> Result<f64> {
    let forms = quadratic_forms(schedule, horizon, m)?;
    let whitened = forms.observed_form * (4.0 / PI);
    let eig = SymmetricEigen::new(whitened);
    let c = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !c.is_finite() {
        return Err(Error::Invariant("eigensolve produced a non-finite value".into()));
    }
    Ok(c)
}

/// Parameters of the counterexample bump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpParams {
    /// Truncation order of the returned data.
    pub m: usize,
    /// `β` in `exp(−β/(1−s²))`; larger values give faster spectral decay at
    /// the chosen truncation.
    pub sharpness: f64,
    /// Quadrature nodes on `(0, π)`.
    pub samples: usize,
}

impl Default for BumpParams {
    fn default() -> Self {
        Self {
            m: 256,
            sharpness: 8.0,
            samples: 16384,
        }
    }
}

/// Smooth zero-mean profile supported in `(c − w, c + w)`: the derivative of
/// `exp(−β/(1−s²))`, `s = (t − c)/w`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bump {
    pub center: f64,
    pub half_width: f64,
    pub sharpness: f64,
}

impl Bump {
    pub fn psi(&self, t: f64) -> f64 {
        let s = (t - self.center) / self.half_width;
        if s.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - s * s;
        (-self.sharpness / q).exp() * (-2.0 * self.sharpness * s / (q * q)) / self.half_width
    }

    /// `ũ_0′(x) = ½(ψ(x) + ψ(2π − x))`.
    pub fn u0_prime(&self, x: f64) -> f64 {
        0.5 * (self.psi(x) + self.psi(TAU - x))
    }

    /// `ũ_1(x) = ½(ψ(x) − ψ(2π − x))`.
    pub fn u1(&self, x: f64) -> f64 {
        0.5 * (self.psi(x) - self.psi(TAU - x))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub data: FourierData,
    pub bump: Bump,
    /// Arc of the uncovered set hosting the bump, `[lo, hi)`.
    pub arc: (f64, f64),
    pub energy: f64,
    /// Relative `L²` mass of `ψ` lost by truncating to `M` modes.
    pub truncation_residue: f64,
}

/// Longest piece of `u_open` after cutting at `0` and `π`.
fn host_span(u_open: &ArcSet<f64>) -> Option<Span<f64>> {
    u_open
        .split_at(PI)
        .into_iter()
        .filter(|s| s.len() > 0.0)
        .fold(None, |best: Option<Span<f64>>, s| match best {
            Some(b) if b.len() >= s.len() => Some(b),
            _ => Some(s),
        })
}

/// Data whose trace at `x = 0` is concentrated in the open set `u_open`.
///
/// A bump `ψ` is placed on half of the longest arc of `u_open` avoiding `0`
/// and `π`, then `(ũ_0, ũ_1)` are built from `ψ(x) ± ψ(2π − x)` and projected
/// onto `M` sine modes by trapezoidal quadrature.
pub fn build_counterexample(u_open: &ArcSet<f64>, params: BumpParams) -> Result<Counterexample> {
    check_modes(params.m)?;
    if params.samples < 2 || !params.sharpness.is_finite() || params.sharpness <= 0.0 {
        return Err(Error::Domain(
            "bump needs at least 2 samples and positive sharpness".into(),
        ));
    }
    let span =
        host_span(u_open).ok_or_else(|| Error::Domain("uncovered set is empty; no counterexample exists".into()))?;
    let bump = Bump {
        center: 0.5 * (span.lo + span.hi),
        half_width: span.len() / 4.0,
        sharpness: params.sharpness,
    };

    let n = params.samples;
    let dx = PI / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| i as f64 * dx).collect();
    let weight = |i: usize| if i == 0 || i == n { 0.5 * dx } else { dx };
    let f0: Vec<f64> = xs.iter().map(|&x| bump.u0_prime(x)).collect();
    let f1: Vec<f64> = xs.iter().map(|&x| bump.u1(x)).collect();

    let m = params.m;
    let mut a = vec![0.0; m];
    let mut b = vec![0.0; m];
    for j in 1..=m {
        let jf = j as f64;
        let (mut sa, mut sb) = (0.0, 0.0);
        for (i, &x) in xs.iter().enumerate() {
            if f0[i] == 0.0 && f1[i] == 0.0 {
                continue;
            }
            let (s, c) = (jf * x).sin_cos();
            sa += weight(i) * f0[i] * c;
            sb += weight(i) * f1[i] * s;
        }
        a[j - 1] = 2.0 / PI * sa;
        b[j - 1] = 2.0 / PI * sb;
    }
    let data = FourierData::from_trace_coefficients(&a, &b)?;

    // ∫_0^{2π} ψ² = π Σ_j (a_j² + b_j²) over all modes (ψ has zero mean).
    let psi_sq: f64 = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| weight(i) * (bump.psi(x).powi(2) + bump.psi(TAU - x).powi(2)))
        .sum();
    let kept = PI * data.trace_vector().norm_squared();
    let truncation_residue = if psi_sq > 0.0 {
        ((psi_sq - kept) / psi_sq).abs()
    } else {
        0.0
    };

    Ok(Counterexample {
        energy: energy(&data),
        data,
        bump,
        arc: (span.lo, span.hi),
        truncation_residue,
    })
}
