//! Named closed-form functions referenced by scene files.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::primitive::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    /// `1/2 ln((x-2)^2 + y^2)`
    DiskLog,
    /// `((x-2)^2 + y^2 + z^2)^(-1/2)`
    BallInverseDistance,
    /// `exp(-r^2/2)` on the `theta = 0` edge of the Pac-Man domain.
    PacmanEdgeZero,
    /// `-r^(1/3) + exp(-r^2/2)` on the `theta = -3pi/2` edge.
    PacmanEdgeThreeHalfPi,
    /// `sin(theta/3) + exp(-1/2)` on the unit arc.
    PacmanArc,
    /// `r^(1/3) sin(theta/3) + exp(-r^2/2)`
    PacmanExact,
    /// `-(2 - r^2) exp(-r^2/2)`
    PacmanSource,
}

/// Polar angle in `[-2pi, 0]`: positive `atan2` values are shifted down by `2pi`.
pub fn pacman_angle(z: &Point) -> f64 {
    let t = z[1].atan2(z[0]);
    if t > 0.0 {
        t - 2.0 * PI
    } else {
        t
    }
}

impl Formula {
    pub fn eval(self, z: &Point) -> f64 {
        let r2 = z[0] * z[0] + z[1] * z[1];
        match self {
            Formula::DiskLog => 0.5 * ((z[0] - 2.0).powi(2) + z[1] * z[1]).ln(),
            Formula::BallInverseDistance => {
                ((z[0] - 2.0).powi(2) + z[1] * z[1] + z[2] * z[2]).powf(-0.5)
            }
            Formula::PacmanEdgeZero => (-r2 / 2.0).exp(),
            Formula::PacmanEdgeThreeHalfPi => -r2.sqrt().cbrt() + (-r2 / 2.0).exp(),
            Formula::PacmanArc => (pacman_angle(z) / 3.0).sin() + (-0.5f64).exp(),
            Formula::PacmanExact => {
                r2.sqrt().cbrt() * (pacman_angle(z) / 3.0).sin() + (-r2 / 2.0).exp()
            }
            Formula::PacmanSource => -(2.0 - r2) * (-r2 / 2.0).exp(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pacman_corner_values_agree() {
        let e = (-0.5f64).exp();
        let p = [1.0, 0.0, 0.0];
        assert!((Formula::PacmanEdgeZero.eval(&p) - e).abs() < 1e-15);
        assert!((Formula::PacmanArc.eval(&p) - e).abs() < 1e-15);
        let q = [0.0, 1.0, 0.0];
        assert!(
            (Formula::PacmanEdgeThreeHalfPi.eval(&q) - Formula::PacmanArc.eval(&q)).abs() < 1e-15
        );
    }

    #[test]
    fn pacman_source_examples() {
        assert_eq!(Formula::PacmanSource.eval(&[0.0; 3]), -2.0);
        assert!(Formula::PacmanSource.eval(&[2f64.sqrt(), 0.0, 0.0]).abs() < 1e-15);
        assert!((pacman_angle(&[0.0, 1.0, 0.0]) + 1.5 * PI).abs() < 1e-15);
        assert!((pacman_angle(&[-1.0, 0.0, 0.0]) + PI).abs() < 1e-15);
    }
}
