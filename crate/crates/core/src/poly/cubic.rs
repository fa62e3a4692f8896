//! Roots and expansion coefficients of `p_z(r) = r^3 - (3/2) z r^2 + 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::characteristic;
use crate::error::{Error, Result};

/// Roots and coefficients of the characteristic cubic at real `z = 1 + epsilon`,
/// with `P_n(z) = c1 r1^n + c2 r2^n + c3 r3^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicSolution {
    pub delta: f64,
    pub epsilon: f64,
    pub z: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub discriminant: Complex64,
}

impl CubicSolution {
    pub fn roots(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    pub fn coefficients(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    /// `c1 r1^n + c2 r2^n + c3 r3^n`.
    pub fn closed_form(&self, n: i32) -> f64 {
        self.c1 * self.r1.powi(n) + self.c2 * self.r2.powi(n) + self.c3 * self.r3.powi(n)
    }
}

/// `arccot(x) = atan2(1, x)`, in `(0, pi/2]` for `x >= 0`.
fn arccot(x: f64) -> f64 {
    1f64.atan2(x)
}

/// Trigonometric closed form for the roots and coefficients at
/// `z = (1 + delta)^{1/3} = 1 + epsilon`.
pub fn cubic_solution_trig(epsilon: f64) -> Result<CubicSolution> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Domain(format!("epsilon must be positive and finite, got {epsilon}")));
    }
    let delta = epsilon * (3.0 + epsilon * (3.0 + epsilon));
    let z = 1.0 + epsilon;
    let angle = arccot(delta.sqrt());
    let half_cbrt = 0.5 * (1.0 + delta).cbrt();
    let third = 2.0 * PI / 3.0;
    let root = |shift: f64| half_cbrt * (1.0 + 2.0 * (2.0 / 3.0 * angle + shift).cos());
    let sqrt_scale = (1.0 + delta).sqrt();
    let coeff = |shift: f64| (1.0 + sqrt_scale * (angle / 3.0 + shift).sin()) / 3.0;
    let zc = Complex64::new(z, 0.0);
    Ok(CubicSolution {
        delta,
        epsilon,
        z,
        r1: root(0.0),
        r2: root(third),
        r3: root(-third),
        c1: coeff(0.0),
        c2: coeff(-third),
        c3: coeff(third),
        discriminant: cubic_discriminant(
            Complex64::new(1.0, 0.0),
            -1.5 * zc,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
        ),
    })
}

/// Discriminant of `a x^3 + b x^2 + c x + d`.
pub fn cubic_discriminant(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * a * c * c * c - 27.0 * a * a * d * d
}

/// All three roots of `p_z` by Cardano's formula on the depressed cubic,
/// each refined with Newton steps.
///
/// With `r = y + z/2` the cubic becomes `y^3 + p y + q = 0` where
/// `p = -(3/4) z^2` and `q = 1/2 - z^3/4`.
pub fn cubic_roots_general(z: Complex64) -> [Complex64; 3] {
    let p = -0.75 * z * z;
    let q = 0.5 - 0.25 * z * z * z;
    let disc = (0.25 * q * q + p * p * p / 27.0).sqrt();
    // pick the sign that avoids cancellation
    let a = -0.5 * q + disc;
    let b = -0.5 * q - disc;
    let w = if a.norm() >= b.norm() { a } else { b };
    let shift = 0.5 * z;
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    if w.norm() == 0.0 {
        // p = q = 0 is impossible for this family (q(0) = 1/2), kept for safety
        roots = [shift; 3];
    } else {
        let c0 = w.cbrt();
        let mut c = c0;
        for r in &mut roots {
            *r = c - p / (3.0 * c) + shift;
            c *= omega;
        }
    }
    for r in &mut roots {
        *r = polish(z, *r);
    }
    roots
}

fn polish(z: Complex64, mut r: Complex64) -> Complex64 {
    let mut f = characteristic(z, r);
    for _ in 0..3 {
        let df = 3.0 * r * (r - z);
        if df.norm() == 0.0 {
            break;
        }
        let candidate = r - f / df;
        let fc = characteristic(z, candidate);
        if !(fc.norm() < f.norm()) {
            break;
        }
        r = candidate;
        f = fc;
    }
    r
}
