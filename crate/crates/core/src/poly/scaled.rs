use num_complex::Complex64;

/// A complex value stored as `mantissa * 2^log2_scale`.
///
/// Nonzero values keep `|mantissa|` in `[0.5, 2)`; zero is `(0, 0)`. The
/// scale is an integer so that rescaling is an exact power-of-two multiply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    mantissa: Complex64,
    log2_scale: i64,
}

impl ScaledComplex {
    pub const ZERO: Self = Self { mantissa: Complex64::new(0.0, 0.0), log2_scale: 0 };
    pub const ONE: Self = Self { mantissa: Complex64::new(1.0, 0.0), log2_scale: 0 };

    /// Normalizes `value * 2^log2_scale`. Non-finite input is kept as is with
    /// scale zero.
    pub fn new(value: Complex64, log2_scale: i64) -> Self {
        if value.re == 0.0 && value.im == 0.0 {
            return Self::ZERO;
        }
        if !value.is_finite() {
            return Self { mantissa: value, log2_scale: 0 };
        }
        let e = binary_exponent(value.norm());
        let mut mantissa = scale_pow2(value, -e);
        let mut scale = log2_scale + e;
        // floor(log2) can be off by one after rounding near a power of two
        let m = mantissa.norm();
        if m >= 2.0 {
            mantissa *= 0.5;
            scale += 1;
        } else if m < 0.5 {
            mantissa *= 2.0;
            scale -= 1;
        }
        Self { mantissa, log2_scale: scale }
    }

    pub fn from_complex(value: Complex64) -> Self {
        Self::new(value, 0)
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn log2_scale(&self) -> i64 {
        self.log2_scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    /// The represented value; saturates to infinity or flushes to zero
    /// outside the `f64` range.
    pub fn to_complex(&self) -> Complex64 {
        scale_pow2(self.mantissa, self.log2_scale)
    }

    /// `log2 |value|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.norm().log2() + self.log2_scale as f64
    }

    /// `|value|`, saturating at `f64::INFINITY`.
    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl From<Complex64> for ScaledComplex {
    fn from(value: Complex64) -> Self {
        Self::from_complex(value)
    }
}

/// `floor(log2(x))` for finite positive `x`.
pub(crate) fn binary_exponent(x: f64) -> i64 {
    debug_assert!(x > 0.0 && x.is_finite());
    let mut e = x.log2().floor() as i64;
    // log2 rounding can misplace values just below a power of two
    let p = pow2(e);
    if x < p {
        e -= 1;
    } else if x >= 2.0 * p {
        e += 1;
    }
    e
}

fn pow2(e: i64) -> f64 {
    scale_pow2(Complex64::new(1.0, 0.0), e).re
}

/// `z * 2^e` applied in steps that never overflow the multiplier itself.
pub(crate) fn scale_pow2(mut z: Complex64, mut e: i64) -> Complex64 {
    const STEP: i64 = 1000;
    while e > STEP {
        z *= 2f64.powi(STEP as i32);
        e -= STEP;
        if !z.is_finite() {
            return z;
        }
    }
    while e < -STEP {
        z *= 2f64.powi(-STEP as i32);
        e += STEP;
        if z.re == 0.0 && z.im == 0.0 {
            return z;
        }
    }
    z * 2f64.powi(e as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mantissa_range() {
        for &v in &[1.0, 1.999_999_999, 0.5, 3.0, 1e-300, 1e300, 7.25e-5] {
            let s = ScaledComplex::from_complex(Complex64::new(v, -v / 3.0));
            let m = s.mantissa().norm();
            assert!((0.5..2.0).contains(&m), "{v}: {m}");
            let back = s.to_complex();
            assert_eq!(back, Complex64::new(v, -v / 3.0));
        }
    }

    #[test]
    fn zero_is_canonical() {
        let s = ScaledComplex::new(Complex64::new(0.0, 0.0), 77);
        assert_eq!(s, ScaledComplex::ZERO);
        assert_eq!(s.log2_abs(), f64::NEG_INFINITY);
    }

    #[test]
    fn huge_scales_round_trip_in_log_domain() {
        let s = ScaledComplex::new(Complex64::new(1.5, 0.0), 5000);
        assert!((s.log2_abs() - (5000.0 + 1.5f64.log2())).abs() < 1e-12);
        assert!(s.to_complex().re.is_infinite());
        let t = ScaledComplex::new(Complex64::new(1.5, 0.0), -999);
        assert_eq!(t.to_complex().re, 1.5 * 2f64.powi(-999));
    }

    #[test]
    fn exponent_near_powers_of_two() {
        for e in -1020..1020 {
            let p = 2f64.powi(e);
            assert_eq!(binary_exponent(p), e as i64);
            let below = f64::from_bits(p.to_bits() - 1);
            assert_eq!(binary_exponent(below), e as i64 - 1);
        }
    }
}
