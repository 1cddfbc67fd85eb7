//! Exit-angle law of Brownian motion on the unit disk.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

fn check_start(z: [f64; 2]) -> Result<f64> {
    let rho = z[0].hypot(z[1]);
    if !(rho < 1.0) {
        return Err(Error::OutsideDomain);
    }
    Ok(rho)
}

/// Density of the exit angle (in turns) from `z`:
/// `(1 - |z|^2) / |z - (cos 2 pi x, sin 2 pi x)|^2`.
pub fn poisson_kernel(z: [f64; 2], x: f64) -> Result<f64> {
    let rho = check_start(z)?;
    let (s, c) = (TAU * x).sin_cos();
    let d2 = (z[0] - c).powi(2) + (z[1] - s).powi(2);
    Ok((1.0 - rho * rho) / d2)
}

/// Cumulative exit mass over the angle interval `[0, x]` (in turns).
pub fn poisson_cdf(z: [f64; 2], x: f64) -> Result<f64> {
    let rho = check_start(z)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(1.0);
    }
    let phi = z[1].atan2(z[0]);
    let c = (1.0 + rho) / (1.0 - rho);
    // Antiderivative in the angle offset u from phi, continued across periods.
    let h = |u: f64| {
        let m = (u / TAU).round();
        let v = u - TAU * m;
        m + (c * (v / 2.0).tan()).atan() / PI
    };
    Ok((h(TAU * x - phi) - h(-phi)).clamp(0.0, 1.0))
}

/// Adaptive Gauss–Kronrod (7, 15) integration of `f` over `[a, b]` to
/// absolute tolerance `tol`.
pub fn integrate_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rule(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        const XK: [f64; 8] = [
            0.991_455_371_120_812_6,
            0.949_107_912_342_758_5,
            0.864_864_423_359_769_1,
            0.741_531_185_599_394_4,
            0.586_087_235_467_691_1,
            0.405_845_151_377_397_2,
            0.207_784_955_007_898_5,
            0.0,
        ];
        const WK: [f64; 8] = [
            0.022_935_322_010_529_22,
            0.063_092_092_629_978_55,
            0.104_790_010_322_250_2,
            0.140_653_259_715_525_9,
            0.169_004_726_639_267_9,
            0.190_350_578_064_785_4,
            0.204_432_940_075_298_9,
            0.209_482_141_084_728,
        ];
        const WG: [f64; 4] = [
            0.129_484_966_168_869_7,
            0.279_705_391_489_276_7,
            0.381_830_050_505_118_9,
            0.417_959_183_673_469_4,
        ];
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let fc = f(c);
        let mut k = WK[7] * fc;
        let mut g = WG[3] * fc;
        for i in 0..7 {
            let s = f(c - h * XK[i]) + f(c + h * XK[i]);
            k += WK[i] * s;
            if i % 2 == 1 {
                g += WG[i / 2] * s;
            }
        }
        (k * h, ((k - g) * h).abs())
    }
    fn go(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = rule(f, a, b);
        if err <= tol || depth >= 50 {
            return v;
        }
        let m = 0.5 * (a + b);
        go(f, a, m, tol / 2.0, depth + 1) + go(f, m, b, tol / 2.0, depth + 1)
    }
    go(f, a, b, tol, 0)
}

/// Exit angle of a boundary point of the unit disk, in turns in `[0, 1)`.
pub fn terminal_angle(p: &[f64]) -> f64 {
    let a = p[1].atan2(p[0]) / TAU;
    let t = a.rem_euclid(1.0);
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}
