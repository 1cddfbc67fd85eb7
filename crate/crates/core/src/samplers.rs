//! Maps from uniform cube coordinates to sphere directions and ball points,
//! and the Dirichlet Green's functions of balls in 2 and 3 dimensions.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::{Point, Scene, SourceMode};

/// Smallest `rho` passed to a Green's function; avoids the removable-in-law
/// singularity at the ball center.
pub const RHO_FLOOR: f64 = 1e-300;

/// Cube dimensions consumed per walk step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepInputLayout {
    /// Coordinates per sphere direction, `d - 1`.
    pub sphere_dims: usize,
    /// Coordinates per ball point (`d`), or 0 when no ball draw is needed.
    pub ball_dims: usize,
}

impl StepInputLayout {
    pub fn new(dim: usize, ball_draw: bool) -> Self {
        Self {
            sphere_dims: dim - 1,
            ball_dims: if ball_draw { dim } else { 0 },
        }
    }

    /// Layout of a scene: a ball draw only for a general source.
    pub fn for_scene(scene: &Scene) -> Self {
        Self::new(scene.dim(), scene.source_mode() == SourceMode::General)
    }

    /// `s`, the number of cube coordinates per step.
    pub fn total(&self) -> usize {
        self.sphere_dims + self.ball_dims
    }
}

/// `(cos 2 pi x, sin 2 pi x)`.
#[inline]
pub fn theta(x: f64) -> [f64; 2] {
    let (s, c) = (TAU * x).sin_cos();
    [c, s]
}

/// Uniform direction on the unit 2-sphere by the hat-box map, north pole at
/// `x1 = 0`.
#[inline]
pub fn psi03(x1: f64, x2: f64) -> [f64; 3] {
    let z = 1.0 - 2.0 * x1;
    let rho = (1.0 - z * z).max(0.0).sqrt();
    let [c, s] = theta(x2);
    [rho * c, rho * s, z]
}

/// Area-uniform point in the unit disk.
#[inline]
pub fn psi12(x1: f64, x2: f64) -> [f64; 2] {
    let r = x1.sqrt();
    let [c, s] = theta(x2);
    [r * c, r * s]
}

/// Unit direction in `R^d` from `d - 1` cube coordinates.
#[inline]
pub fn sphere_direction(dim: usize, x: &[f64]) -> Point {
    if dim == 2 {
        let [c, s] = theta(x[0]);
        [c, s, 0.0]
    } else {
        psi03(x[0], x[1])
    }
}

/// `ln(r / rho) / (2 pi)` with `rho` clamped to [`RHO_FLOOR`].
#[inline]
pub fn green2(r: f64, rho: f64) -> f64 {
    (r / rho.max(RHO_FLOOR)).ln() / TAU
}

/// `(1/rho - 1/r) / (4 pi)` with `rho` clamped to [`RHO_FLOOR`].
#[inline]
pub fn green3(r: f64, rho: f64) -> f64 {
    (1.0 / rho.max(RHO_FLOOR) - 1.0 / r) / (4.0 * PI)
}

/// Green's function of the ball of radius `r` in dimension `d`, checked.
pub fn green(dim: usize, r: f64, rho: f64) -> Result<f64> {
    if !(r > 0.0 && rho >= 0.0 && rho <= r) {
        return Err(Error::GreenDomain { rho, radius: r });
    }
    match dim {
        2 => Ok(green2(r, rho)),
        3 => Ok(green3(r, rho)),
        _ => Err(Error::InvalidConfig(format!(
            "no Green's function for dimension {dim}"
        ))),
    }
}

/// Volume of the `d`-ball of radius `r` for `d` in {2, 3}.
#[inline]
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    if dim == 2 {
        PI * r * r
    } else {
        4.0 / 3.0 * PI * r * r * r
    }
}

/// One source term `-vol(B(r)) G_d(r, |w - center|) g(w)` of the estimator.
#[inline]
pub fn source_increment(scene: &Scene, r: f64, center: &Point, w: &Point) -> f64 {
    let d = scene.dim();
    let rho =
        ((w[0] - center[0]).powi(2) + (w[1] - center[1]).powi(2) + (w[2] - center[2]).powi(2))
            .sqrt();
    let g = if d == 2 {
        green2(r, rho)
    } else {
        green3(r, rho)
    };
    -ball_volume(d, r) * g * scene.source_unchecked(w)
}

/// Closed form of the source term for a constant source `c`:
/// `-c int_{B(r)} G_d = -c r^2 / (2d)`.
#[inline]
pub fn constant_source_increment(dim: usize, r: f64, c: f64) -> f64 {
    -c * r * r / (2.0 * dim as f64)
}

/// The dumbbell's per-step term `r^2 / 2` (constant source `-2` in 2-D).
pub fn constant_source_shortcut_increment(r: f64) -> f64 {
    constant_source_increment(2, r, -2.0)
}
