//! The deltoid polynomial family `P_n` and the region it is bounded on.

mod cubic;
mod raster;
mod region;
mod scaled;

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use cubic::{cubic_discriminant, cubic_roots_general, cubic_solution_trig, CubicSolution};
pub use raster::{raster_magnitude, GridSpec, Raster, RASTER_CLAMP};
pub use region::{in_deltoid, sample_deltoid, DeltoidRegion, CUSPS};
pub use scaled::ScaledComplex;

use scaled::{binary_exponent, scale_pow2};

/// Window magnitudes are kept within `[2^-512, 2^512]`.
const RENORM_EXPONENT: i64 = 512;

/// `P_n(z)` by direct recurrence.
pub fn eval_p(n: usize, z: Complex64) -> Result<Complex64> {
    let mut window = [Complex64::new(1.0, 0.0), z, z * z];
    if n <= 2 {
        let v = window[n];
        return if v.is_finite() { Ok(v) } else { Err(Error::Overflow { n }) };
    }
    for k in 2..n {
        let next = 1.5 * z * window[2] - 0.5 * window[0];
        if !next.is_finite() {
            return Err(Error::Overflow { n: k + 1 });
        }
        window = [window[1], window[2], next];
    }
    Ok(window[2])
}

/// `P_n(z)` without overflow or underflow.
pub fn eval_p_scaled(n: usize, z: Complex64) -> ScaledComplex {
    let mut out = ScaledComplex::ONE;
    run_scaled(n, z, |k, v| {
        if k == n {
            out = v;
        }
    });
    out
}

/// `[P_0(z), ..., P_{n_max}(z)]` in one pass.
pub fn eval_p_sequence(n_max: usize, z: Complex64) -> Vec<ScaledComplex> {
    let mut out = Vec::with_capacity(n_max + 1);
    run_scaled(n_max, z, |_, v| out.push(v));
    out
}

/// Runs the recurrence up to `n_max`, reporting every `P_k`.
///
/// For `|z| >= 2` the degree-`k` term is divided by `2^(e k)` with
/// `e = floor(log2 |z|)`, so the window obeys
/// `Q_{k+1} = (3/2) m Q_k - (1/2) 2^(-3e) Q_{k-2}` with `|m| < 2`.
/// Window entries share one extra power-of-two scale `s` that is moved
/// whenever the largest entry leaves `[2^-512, 2^512]`.
fn run_scaled(n_max: usize, z: Complex64, mut emit: impl FnMut(usize, ScaledComplex)) {
    let e = if z.is_finite() && z.norm() >= 2.0 { binary_exponent(z.norm()) } else { 0 };
    let m = scale_pow2(z, -e);
    let mut s: i64 = 0;
    let mut window = [Complex64::new(1.0, 0.0), m, m * m];
    let emit_at = |k: usize, v: Complex64, s: i64| ScaledComplex::new(v, s + e * k as i64);

    for (k, v) in window.iter().enumerate().take(n_max.min(2) + 1) {
        emit(k, emit_at(k, *v, s));
    }
    for k in 2..n_max {
        let tail = scale_pow2(0.5 * window[0], -3 * e);
        let next = 1.5 * m * window[2] - tail;
        window = [window[1], window[2], next];
        let peak = window.iter().map(|w| w.re.abs().max(w.im.abs())).fold(0.0, f64::max);
        if peak > 0.0 {
            let p = binary_exponent(peak);
            if !(-RENORM_EXPONENT..=RENORM_EXPONENT).contains(&p) {
                for w in &mut window {
                    *w = scale_pow2(*w, -p);
                }
                s += p;
            }
        }
        emit(k + 1, emit_at(k + 1, window[2], s));
    }
}

/// Point `gamma(t) = (2/3) e^{it} + (1/3) e^{-2it}` on the deltoid boundary.
pub fn gamma_point(t: f64) -> Complex64 {
    let t = t.rem_euclid(TAU);
    Complex64::from_polar(2.0 / 3.0, t) + Complex64::from_polar(1.0 / 3.0, -2.0 * t)
}

/// `log2((1/3) (1 + sqrt(eps))^n)`, the lower bound on `|P_n|` over the
/// circle `|z| = 1 + eps`.
pub fn growth_lower_bound(n: usize, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(n as f64 * (1.0 + epsilon.sqrt()).log2() - 3f64.log2())
}

/// Characteristic cubic of the recurrence, `p_z(r) = r^3 - (3/2) z r^2 + 1/2`.
pub fn characteristic(z: Complex64, r: Complex64) -> Complex64 {
    r * r * (r - 1.5 * z) + 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn initial_values() {
        let z = c(0.3, -0.7);
        assert_eq!(eval_p(0, z).unwrap(), c(1.0, 0.0));
        assert_eq!(eval_p(1, z).unwrap(), z);
        assert_eq!(eval_p(2, z).unwrap(), z * z);
        let seq = eval_p_sequence(2, z);
        assert_eq!(seq.len(), 3);
        assert_eq!(seq[0].to_complex(), c(1.0, 0.0));
        assert_eq!(seq[1].to_complex(), z);
        assert_eq!(seq[2].to_complex(), z * z);
        assert_eq!(eval_p_sequence(0, z).len(), 1);
        assert_eq!(eval_p_sequence(17, z).len(), 18);
    }

    #[test]
    fn third_polynomial_by_hand() {
        // one recurrence step from P_2 = z^2 and P_0 = 1
        for z in [c(1.0, 0.0), c(0.4, 0.9), c(-2.0, 0.5)] {
            let expected = 1.5 * z * z * z - 0.5;
            assert!((eval_p(3, z).unwrap() - expected).norm() < 1e-14);
        }
        assert_eq!(eval_p(3, c(1.0, 0.0)).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn cube_roots_of_unity_are_fixed() {
        for k in 0..3 {
            let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
            for n in 0..=30 {
                let expected = Complex64::from_polar(1.0, 2.0 * PI * (n * k) as f64 / 3.0);
                let got = eval_p(n, w).unwrap();
                assert!((got - expected).norm() < 1e-12, "k={k} n={n}: {got}");
            }
        }
    }

    #[test]
    fn scaled_starts_at_one() {
        let s = eval_p_scaled(0, c(0.2, 0.1));
        assert_eq!(s.to_complex(), c(1.0, 0.0));
        assert_eq!(s.log2_scale(), 0);
    }

    #[test]
    fn scaled_matches_direct_where_direct_is_finite() {
        let zs = [c(1.5, 0.0), c(-0.9, 1.1), c(0.01, -0.02), c(0.0, 0.0), c(1.2, 0.8)];
        for z in zs {
            for n in (0..=300).step_by(7) {
                let direct = eval_p(n, z).unwrap();
                let scaled = eval_p_scaled(n, z).to_complex();
                let scale = direct.norm().max(1e-300);
                assert!((direct - scaled).norm() <= 1e-12 * scale, "z={z} n={n}");
            }
        }
    }

    #[test]
    fn direct_overflow_is_reported() {
        assert!(matches!(eval_p(3000, c(3.0, 0.0)), Err(Error::Overflow { .. })));
        let s = eval_p_scaled(3000, c(3.0, 0.0));
        assert!(s.log2_abs().is_finite() && s.log2_abs() > 1024.0);
    }

    #[test]
    fn growth_at_two() {
        let s = eval_p_scaled(500, c(2.0, 0.0));
        let bound = growth_lower_bound(500, 1.0).unwrap();
        assert!(s.log2_abs() >= bound);
    }

    #[test]
    fn huge_arguments_stay_finite_in_log_domain() {
        let z = c(1e200, -3e199);
        let s = eval_p_scaled(40, z);
        // leading term (3/2)^38 z^40 dominates
        let expected = 38.0 * 1.5f64.log2() + 40.0 * z.norm().log2();
        assert!((s.log2_abs() - expected).abs() < 1e-9);
        let tiny = eval_p_scaled(900, c(1e-5, 0.0));
        assert!(tiny.log2_abs().is_finite());
    }

    #[test]
    fn growth_bound_values() {
        assert!((growth_lower_bound(0, 0.3).unwrap() - (1.0f64 / 3.0).log2()).abs() < 1e-15);
        let b = growth_lower_bound(100, 0.01).unwrap();
        assert!((b - (100.0 * 1.1f64.log2() + (1.0f64 / 3.0).log2())).abs() < 1e-12);
        assert!(growth_lower_bound(3, 0.0).is_err());
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_point(0.0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((gamma_point(PI) - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((gamma_point(2.0 * PI + 0.3) - gamma_point(0.3)).norm() < 1e-14);
        for k in 0..64 {
            let t = TAU * k as f64 / 64.0;
            assert!(gamma_point(t).norm() <= 1.0 + 1e-15);
        }
    }
}
