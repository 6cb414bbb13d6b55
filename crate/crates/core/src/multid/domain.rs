//! Convex domains and their illuminated boundary parts.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::arcs::ArcSet;
use crate::error::{Error, Result};

pub type Point = Vec<f64>;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

/// Angle between two nonzero vectors, accurate for nearly parallel ones.
fn angle_between(a: &[f64], b: &[f64]) -> f64 {
    let c = dot(a, b);
    let s = match (a.len(), b.len()) {
        (3, 3) => {
            let x = a[1] * b[2] - a[2] * b[1];
            let y = a[2] * b[0] - a[0] * b[2];
            let z = a[0] * b[1] - a[1] * b[0];
            (x * x + y * y + z * z).sqrt()
        }
        (2, 2) => (a[0] * b[1] - a[1] * b[0]).abs(),
        _ => (dot(a, a) * dot(b, b) - c * c).max(0.0).sqrt(),
    };
    s.atan2(c)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexDomain {
    /// Convex polygon, vertices counter-clockwise.
    Polygon2d { vertices: Vec<[f64; 2]> },
    /// Ball in `R^d`, `d = center.len()`.
    Ball { center: Point, radius: f64 },
}

impl ConvexDomain {
    pub fn polygon(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let d = ConvexDomain::Polygon2d { vertices };
        d.validate()?;
        Ok(d)
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        let d = ConvexDomain::Ball { center, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn unit_square() -> Self {
        ConvexDomain::Polygon2d {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConvexDomain::Polygon2d { vertices } => {
                let n = vertices.len();
                if n < 3 {
                    return Err(Error::Domain("polygon needs at least 3 vertices".into()));
                }
                if vertices.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::Domain("polygon vertices must be finite".into()));
                }
                for i in 0..n {
                    let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
                    if a == b {
                        return Err(Error::Domain(format!("repeated polygon vertex {i}")));
                    }
                    let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
                    if cross < 0.0 {
                        return Err(Error::Domain(
                            "polygon must be convex with counter-clockwise vertices".into(),
                        ));
                    }
                }
                if self.signed_area() <= 0.0 {
                    return Err(Error::Domain("polygon has no positive area".into()));
                }
                Ok(())
            }
            ConvexDomain::Ball { center, radius } => {
                if center.is_empty() || center.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Domain("ball center must be a finite point".into()));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::Domain(format!("ball radius must be positive, got {radius}")));
                }
                Ok(())
            }
        }
    }

    fn signed_area(&self) -> f64 {
        match self {
            ConvexDomain::Polygon2d { vertices } => {
                let n = vertices.len();
                0.5 * (0..n)
                    .map(|i| {
                        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                        a[0] * b[1] - a[1] * b[0]
                    })
                    .sum::<f64>()
            }
            ConvexDomain::Ball { .. } => f64::NAN,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ConvexDomain::Polygon2d { .. } => 2,
            ConvexDomain::Ball { center, .. } => center.len(),
        }
    }

    /// Edges `(start, end)` of a polygon, in order.
    pub fn edges(&self) -> Vec<([f64; 2], [f64; 2])> {
        match self {
            ConvexDomain::Polygon2d { vertices } => {
                let n = vertices.len();
                (0..n).map(|i| (vertices[i], vertices[(i + 1) % n])).collect()
            }
            ConvexDomain::Ball { .. } => Vec::new(),
        }
    }

    /// `H^{d-1}(∂Ω)`; balls only for `d = 2, 3`.
    pub fn boundary_measure(&self) -> Result<f64> {
        match self {
            ConvexDomain::Polygon2d { .. } => Ok(self.edges().iter().map(|(a, b)| distance(a, b)).sum()),
            ConvexDomain::Ball { radius, .. } => {
                sphere_scale(self.dimension(), *radius).map(|s| s * full_angle(self.dimension()))
            }
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::Domain(format!(
                "point has dimension {}, domain has {}",
                x.len(),
                self.dimension()
            )));
        }
        Ok(())
    }
}

/// Part of `∂Ω` where `(x − x_0)·ν > 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IlluminatedSet {
    /// Whole polygon edges; `mask[i]` refers to edge `v_i → v_{i+1}`.
    Edges {
        mask: Vec<bool>,
    },
    /// Points of the sphere within angle `aperture` of the unit `axis`.
    Cap {
        axis: Point,
        aperture: f64,
    },
    FullSphere,
}

/// Illuminated part of the boundary seen from `x0`.
///
/// Edges are selected by the sign of `(m − x0)·ν` at their midpoint `m`, which
/// is exact since `ν` is constant along an edge; a zero value excludes the
/// edge. On a sphere the set is a cap around `−(x0 − c)` of aperture
/// `π − arccos(R/|x0 − c|)`, or the whole sphere when `|x0 − c| < R`.
pub fn illuminated_boundary(domain: &ConvexDomain, x0: &[f64]) -> Result<IlluminatedSet> {
    domain.check_point(x0)?;
    match domain {
        ConvexDomain::Polygon2d { .. } => {
            let mask = domain
                .edges()
                .iter()
                .map(|(a, b)| {
                    let nu = [b[1] - a[1], a[0] - b[0]];
                    let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
                    dot(&sub(&mid, x0), &nu) > 0.0
                })
                .collect();
            Ok(IlluminatedSet::Edges { mask })
        }
        ConvexDomain::Ball { center, radius } => {
            let v = sub(x0, center);
            let d = norm(&v);
            if d < *radius {
                return Ok(IlluminatedSet::FullSphere);
            }
            let axis = v.iter().map(|x| -x / d).collect();
            Ok(IlluminatedSet::Cap {
                axis,
                aperture: PI - (radius / d).acos(),
            })
        }
    }
}

/// `max_{x ∈ Ω̄} |x − x0|`.
pub fn radius_max(domain: &ConvexDomain, x0: &[f64]) -> Result<f64> {
    domain.check_point(x0)?;
    Ok(match domain {
        ConvexDomain::Polygon2d { vertices } => vertices.iter().map(|v| distance(v, x0)).fold(0.0, f64::max),
        ConvexDomain::Ball { center, radius } => distance(x0, center) + radius,
    })
}

/// Measure of the unit sphere `S^{d-1}` for `d = 2, 3`.
fn full_angle(d: usize) -> f64 {
    if d == 2 {
        TAU
    } else {
        2.0 * TAU
    }
}

/// `R^{d-1}`, the scaling from the unit sphere, for supported dimensions.
fn sphere_scale(d: usize, radius: f64) -> Result<f64> {
    match d {
        2 => Ok(radius),
        3 => Ok(radius * radius),
        _ => Err(Error::Unsupported(format!(
            "boundary measures on balls are implemented for d = 2, 3 (got d = {d})"
        ))),
    }
}

/// Area of a cap of angular radius `theta` on the unit 2-sphere.
pub fn cap_area(theta: f64) -> f64 {
    TAU * (1.0 - theta.clamp(0.0, PI).cos())
}

/// Area of the intersection of two caps on the unit 2-sphere with angular
/// radii `t1`, `t2` and axes `gamma` apart.
pub fn cap_intersection_area(t1: f64, t2: f64, gamma: f64) -> f64 {
    let (t1, t2, gamma) = (t1.clamp(0.0, PI), t2.clamp(0.0, PI), gamma.clamp(0.0, PI));
    if t1 == 0.0 || t2 == 0.0 {
        return 0.0;
    }
    if t1 == PI {
        return cap_area(t2);
    }
    if t2 == PI {
        return cap_area(t1);
    }
    // A ∩ B = B \ (Aᶜ ∩ B), and Aᶜ is the cap of radius π − t1 around −a.
    if t1 > FRAC_PI_2 {
        return cap_area(t2) - cap_intersection_area(PI - t1, t2, PI - gamma);
    }
    if t2 > FRAC_PI_2 {
        return cap_area(t1) - cap_intersection_area(t1, PI - t2, PI - gamma);
    }
    if gamma >= t1 + t2 {
        return 0.0;
    }
    if gamma <= (t1 - t2).abs() {
        return cap_area(t1.min(t2));
    }
    let acos = |x: f64| x.clamp(-1.0, 1.0).acos();
    let (c1, c2, cg) = (t1.cos(), t2.cos(), gamma.cos());
    let (s1, s2, sg) = (t1.sin(), t2.sin(), gamma.sin());
    let lens = PI
        - acos((cg - c1 * c2) / (s1 * s2))
        - c1 * acos((c2 - cg * c1) / (sg * s1))
        - c2 * acos((c1 - cg * c2) / (sg * s2));
    (2.0 * lens).max(0.0)
}

fn cap_arcset(axis: &[f64], aperture: f64) -> ArcSet<f64> {
    let phi = axis[1].atan2(axis[0]);
    ArcSet::from_start_len(phi - aperture, 2.0 * aperture)
}

/// `H^{d-1}(A)` for an illuminated set of `domain`.
pub fn illuminated_measure(domain: &ConvexDomain, set: &IlluminatedSet) -> Result<f64> {
    match (domain, set) {
        (ConvexDomain::Polygon2d { .. }, IlluminatedSet::Edges { mask }) => Ok(domain
            .edges()
            .iter()
            .zip(mask)
            .filter(|(_, &on)| on)
            .map(|((a, b), _)| distance(a, b))
            .sum()),
        (ConvexDomain::Ball { .. }, IlluminatedSet::FullSphere) => domain.boundary_measure(),
        (ConvexDomain::Ball { radius, .. }, IlluminatedSet::Cap { aperture, .. }) => {
            let d = domain.dimension();
            let unit = if d == 2 {
                2.0 * aperture.clamp(0.0, PI)
            } else {
                cap_area(*aperture)
            };
            sphere_scale(d, *radius).map(|s| s * unit)
        }
        _ => Err(Error::Domain("illuminated set does not belong to this domain".into())),
    }
}

/// `H^{d-1}(A Δ B)` for two illuminated sets of the same domain.
pub fn boundary_symdiff(domain: &ConvexDomain, a: &IlluminatedSet, b: &IlluminatedSet) -> Result<f64> {
    use IlluminatedSet::*;
    match (domain, a, b) {
        (ConvexDomain::Polygon2d { .. }, Edges { mask: ma }, Edges { mask: mb }) => Ok(domain
            .edges()
            .iter()
            .zip(ma.iter().zip(mb))
            .filter(|(_, (x, y))| x != y)
            .map(|((p, q), _)| distance(p, q))
            .sum()),
        (ConvexDomain::Ball { .. }, FullSphere, FullSphere) => Ok(0.0),
        (ConvexDomain::Ball { .. }, FullSphere, cap @ Cap { .. })
        | (ConvexDomain::Ball { .. }, cap @ Cap { .. }, FullSphere) => {
            Ok(domain.boundary_measure()? - illuminated_measure(domain, cap)?)
        }
        (ConvexDomain::Ball { radius, .. }, Cap { axis: xa, aperture: ta }, Cap { axis: xb, aperture: tb }) => {
            let d = domain.dimension();
            let scale = sphere_scale(d, *radius)?;
            if d == 2 {
                let sd = cap_arcset(xa, *ta).symmetric_difference(&cap_arcset(xb, *tb));
                return Ok(scale * sd.measure());
            }
            let gamma = angle_between(xa, xb);
            let inter = cap_intersection_area(*ta, *tb, gamma);
            Ok(scale * (cap_area(*ta) + cap_area(*tb) - 2.0 * inter).max(0.0))
        }
        _ => Err(Error::Domain("illuminated sets do not belong to this domain".into())),
    }
}
