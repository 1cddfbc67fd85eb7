//! Boundary primitives with exact point distance, projection and ray crossing
//! counts.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points are stored with three coordinates; 2-D scenes keep `z = 0`.
pub type Point = [f64; 3];

#[inline]
pub(crate) fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn norm(a: &Point) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
fn lift(p: [f64; 2]) -> Point {
    [p[0], p[1], 0.0]
}

/// Geometry of one boundary piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum Shape {
    Circle {
        center: [f64; 2],
        radius: f64,
    },
    /// Counter-clockwise arc from angle `start` through `sweep` radians.
    Arc {
        center: [f64; 2],
        radius: f64,
        start: f64,
        sweep: f64,
    },
    Segment {
        a: [f64; 2],
        b: [f64; 2],
    },
    Polyline {
        points: Vec<[f64; 2]>,
        closed: bool,
    },
    Sphere {
        center: [f64; 3],
        radius: f64,
    },
}

/// A shape plus the label selecting its boundary value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPrimitive {
    #[serde(flatten)]
    pub shape: Shape,
    pub label: String,
}

fn segment_closest(z: &Point, a: [f64; 2], b: [f64; 2]) -> (f64, Point) {
    let (a, b) = (lift(a), lift(b));
    let ab = sub(&b, &a);
    let t = (dot(&sub(z, &a), &ab) / dot(&ab, &ab)).clamp(0.0, 1.0);
    let p = [a[0] + t * ab[0], a[1] + t * ab[1], 0.0];
    (norm(&sub(z, &p)), p)
}

fn sphere_closest(z: &Point, c: &Point, radius: f64) -> (f64, Point) {
    let v = sub(z, c);
    let len = norm(&v);
    let p = if len > 0.0 {
        let s = radius / len;
        [c[0] + s * v[0], c[1] + s * v[1], c[2] + s * v[2]]
    } else {
        [c[0] + radius, c[1], c[2]]
    };
    ((len - radius).abs(), p)
}

/// Angle of `v` measured counter-clockwise from `start`, in `[0, 2pi)`.
fn angle_from(v: &Point, start: f64) -> f64 {
    (v[1].atan2(v[0]) - start).rem_euclid(TAU)
}

fn arc_point(center: [f64; 2], radius: f64, angle: f64) -> Point {
    [
        center[0] + radius * angle.cos(),
        center[1] + radius * angle.sin(),
        0.0,
    ]
}

/// Roots `t > 0` of `|o + t d - c|^2 = r^2` for unit `d`.
fn ray_sphere_roots(o: &Point, d: &Point, c: &Point, r: f64) -> Vec<f64> {
    let oc = sub(o, c);
    let b = dot(&oc, d);
    let disc = b * b - (dot(&oc, &oc) - r * r);
    if disc <= 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    [-b - sq, -b + sq]
        .into_iter()
        .filter(|&t| t > 0.0)
        .collect()
}

fn ray_segment_hits(o: &Point, d: &Point, a: [f64; 2], b: [f64; 2]) -> usize {
    let e = [b[0] - a[0], b[1] - a[1]];
    let den = d[0] * e[1] - d[1] * e[0];
    if den == 0.0 {
        return 0;
    }
    let w = [a[0] - o[0], a[1] - o[1]];
    let t = (w[0] * e[1] - w[1] * e[0]) / den;
    let u = (w[0] * d[1] - w[1] * d[0]) / den;
    usize::from(t > 0.0 && (0.0..1.0).contains(&u))
}

impl Shape {
    pub fn dimension(&self) -> usize {
        match self {
            Shape::Sphere { .. } => 3,
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidScene(m.to_string()));
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Shape::Circle { center, radius } => {
                if !(finite(center) && radius.is_finite() && *radius > 0.0) {
                    return bad("circle needs a finite center and positive radius");
                }
            }
            Shape::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                if !(finite(center) && radius.is_finite() && *radius > 0.0 && start.is_finite()) {
                    return bad("arc needs a finite center and positive radius");
                }
                if !(*sweep > 0.0 && *sweep <= TAU) {
                    return bad("arc sweep must lie in (0, 2pi]");
                }
            }
            Shape::Segment { a, b } => {
                if !(finite(a) && finite(b)) || a == b {
                    return bad("segment endpoints must be finite and distinct");
                }
            }
            Shape::Polyline { points, .. } => {
                if points.len() < 2 || points.iter().any(|p| !finite(p)) {
                    return bad("polyline needs at least two finite vertices");
                }
                if points.windows(2).any(|w| w[0] == w[1]) {
                    return bad("polyline has a repeated vertex");
                }
            }
            Shape::Sphere { center, radius } => {
                if !(finite(center) && radius.is_finite() && *radius > 0.0) {
                    return bad("sphere needs a finite center and positive radius");
                }
            }
        }
        Ok(())
    }

    fn polyline_edges(
        points: &[[f64; 2]],
        closed: bool,
    ) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = points.len();
        let edges = if closed { n } else { n - 1 };
        (0..edges).map(move |i| (points[i], points[(i + 1) % n]))
    }

    /// Exact distance from `z` and the nearest point on the shape. Exact ties
    /// resolve to the first candidate examined.
    pub fn closest(&self, z: &Point) -> (f64, Point) {
        match self {
            Shape::Circle { center, radius } => sphere_closest(z, &lift(*center), *radius),
            Shape::Sphere { center, radius } => sphere_closest(z, center, *radius),
            Shape::Segment { a, b } => segment_closest(z, *a, *b),
            Shape::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let c = lift(*center);
                let v = sub(z, &c);
                if norm(&v) > 0.0 && angle_from(&v, *start) <= *sweep {
                    return sphere_closest(z, &c, *radius);
                }
                let p0 = arc_point(*center, *radius, *start);
                let p1 = arc_point(*center, *radius, start + sweep);
                let (d0, d1) = (norm(&sub(z, &p0)), norm(&sub(z, &p1)));
                if d1 < d0 {
                    (d1, p1)
                } else {
                    (d0, p0)
                }
            }
            Shape::Polyline { points, closed } => {
                let mut best = (f64::INFINITY, [0.0; 3]);
                for (a, b) in Self::polyline_edges(points, *closed) {
                    let cand = segment_closest(z, a, b);
                    if cand.0 < best.0 {
                        best = cand;
                    }
                }
                best
            }
        }
    }

    pub fn distance(&self, z: &Point) -> f64 {
        self.closest(z).0
    }

    /// Number of crossings of the ray `o + t d`, `t > 0`, with the shape.
    pub fn ray_crossings(&self, o: &Point, d: &Point) -> usize {
        match self {
            Shape::Circle { center, radius } => {
                ray_sphere_roots(o, d, &lift(*center), *radius).len()
            }
            Shape::Sphere { center, radius } => ray_sphere_roots(o, d, center, *radius).len(),
            Shape::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let c = lift(*center);
                ray_sphere_roots(o, d, &c, *radius)
                    .into_iter()
                    .filter(|&t| {
                        let p = [o[0] + t * d[0], o[1] + t * d[1], 0.0];
                        angle_from(&sub(&p, &c), *start) <= *sweep
                    })
                    .count()
            }
            Shape::Segment { a, b } => ray_segment_hits(o, d, *a, *b),
            Shape::Polyline { points, closed } => Self::polyline_edges(points, *closed)
                .map(|(a, b)| ray_segment_hits(o, d, a, b))
                .sum(),
        }
    }

    /// Axis-aligned bounds `(lo, hi)` of the shape.
    pub fn bounds(&self) -> (Point, Point) {
        match self {
            Shape::Circle { center, radius } | Shape::Arc { center, radius, .. } => (
                [center[0] - radius, center[1] - radius, 0.0],
                [center[0] + radius, center[1] + radius, 0.0],
            ),
            Shape::Sphere { center, radius } => (
                [center[0] - radius, center[1] - radius, center[2] - radius],
                [center[0] + radius, center[1] + radius, center[2] + radius],
            ),
            Shape::Segment { a, b } => (
                [a[0].min(b[0]), a[1].min(b[1]), 0.0],
                [a[0].max(b[0]), a[1].max(b[1]), 0.0],
            ),
            Shape::Polyline { points, .. } => {
                let mut lo = [f64::INFINITY, f64::INFINITY, 0.0];
                let mut hi = [f64::NEG_INFINITY, f64::NEG_INFINITY, 0.0];
                for p in points {
                    for k in 0..2 {
                        lo[k] = lo[k].min(p[k]);
                        hi[k] = hi[k].max(p[k]);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Evenly spaced points along the shape (about `per_unit_length` per unit
    /// of length, at least 8), used for brute-force checks and plots.
    pub fn sample_boundary(&self, per_unit_length: f64) -> Vec<Point> {
        let count = |len: f64| ((len * per_unit_length).ceil() as usize).max(8);
        match self {
            Shape::Circle { center, radius } => {
                let m = count(TAU * radius);
                (0..m)
                    .map(|i| arc_point(*center, *radius, TAU * i as f64 / m as f64))
                    .collect()
            }
            Shape::Arc {
                center,
                radius,
                start,
                sweep,
            } => {
                let m = count(sweep * radius);
                (0..=m)
                    .map(|i| arc_point(*center, *radius, start + sweep * i as f64 / m as f64))
                    .collect()
            }
            Shape::Segment { a, b } => {
                let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
                let m = count(len);
                (0..=m)
                    .map(|i| {
                        let t = i as f64 / m as f64;
                        [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), 0.0]
                    })
                    .collect()
            }
            Shape::Polyline { points, closed } => Self::polyline_edges(points, *closed)
                .flat_map(|(a, b)| Shape::Segment { a, b }.sample_boundary(per_unit_length))
                .collect(),
            Shape::Sphere { center, radius } => {
                // Fibonacci sphere.
                let m = count(2.0 * TAU * radius * radius * per_unit_length);
                let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
                (0..m)
                    .map(|i| {
                        let zc = 1.0 - 2.0 * (i as f64 + 0.5) / m as f64;
                        let rho = (1.0 - zc * zc).sqrt();
                        let phi = golden * i as f64;
                        [
                            center[0] + radius * rho * phi.cos(),
                            center[1] + radius * rho * phi.sin(),
                            center[2] + radius * zc,
                        ]
                    })
                    .collect()
            }
        }
    }
}
