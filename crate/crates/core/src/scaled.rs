//! Complex numbers stored as (log-modulus, argument).
//!
//! Orbits of contracting germs decay like `|alpha|^(n(n-1)/2)` or `r^(p^n)`,
//! far below the smallest positive `f64`. Keeping the modulus in log form
//! makes products and powers exact in the exponent and keeps every orbit
//! point representable.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Exponent gap beyond which the smaller summand is below the resolution of
/// the larger one (`exp(-745)` underflows to zero).
pub const ADD_GAP_LIMIT: f64 = 745.0;

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    if !theta.is_finite() {
        return 0.0;
    }
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex {
    log_mod: f64,
    arg: f64,
}

/// A point of C^2 in log-polar form.
pub type ScaledPoint = [ScaledComplex; 2];

impl ScaledComplex {
    pub const ZERO: Self = Self { log_mod: f64::NEG_INFINITY, arg: 0.0 };
    pub const ONE: Self = Self { log_mod: 0.0, arg: 0.0 };

    /// Builds a value from its log-modulus and argument. A log-modulus of
    /// `-inf` yields the canonical zero.
    pub fn from_polar(log_mod: f64, arg: f64) -> Self {
        if log_mod == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        Self { log_mod, arg: wrap_angle(arg) }
    }

    pub fn from_complex(c: Complex64) -> Self {
        if c.re == 0.0 && c.im == 0.0 {
            return Self::ZERO;
        }
        // hypot avoids overflow of re^2 + im^2 for large inputs
        Self::from_polar(c.re.hypot(c.im).ln(), c.im.atan2(c.re))
    }

    pub fn from_real(x: f64) -> Self {
        Self::from_complex(Complex64::new(x, 0.0))
    }

    pub fn log_mod(&self) -> f64 {
        self.log_mod
    }

    pub fn arg(&self) -> f64 {
        self.arg
    }

    pub fn is_zero(&self) -> bool {
        self.log_mod == f64::NEG_INFINITY
    }

    /// Modulus as an ordinary float; underflows to 0 for very small values.
    pub fn abs(&self) -> f64 {
        self.log_mod.exp()
    }

    /// Converts back to standard arithmetic. Underflows to zero (and
    /// overflows to infinity) outside the `f64` range.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_mod.exp(), self.arg)
    }

    /// Integer power; `z^0 = 1` including for `z = 0`.
    pub fn powu(&self, k: u64) -> Self {
        if k == 0 {
            return Self::ONE;
        }
        if self.is_zero() {
            return Self::ZERO;
        }
        let kf = k as f64;
        Self::from_polar(self.log_mod * kf, self.arg * kf)
    }

    /// Multiplies by a nonnegative real given as its logarithm.
    pub fn scale_log(&self, log_factor: f64) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::from_polar(self.log_mod + log_factor, self.arg)
    }
}

impl Default for ScaledComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<Complex64> for ScaledComplex {
    fn from(c: Complex64) -> Self {
        Self::from_complex(c)
    }
}

impl Mul for ScaledComplex {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::from_polar(self.log_mod + rhs.log_mod, self.arg + rhs.arg)
    }
}

impl Add for ScaledComplex {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log_mod >= rhs.log_mod { (self, rhs) } else { (rhs, self) };
        if big.log_mod - small.log_mod > ADD_GAP_LIMIT {
            return big;
        }
        let a = Complex64::from_polar(1.0, big.arg);
        let b = Complex64::from_polar((small.log_mod - big.log_mod).exp(), small.arg);
        let s = a + b;
        // below this the sum is rounding noise of an exact cancellation
        if s.re.hypot(s.im) <= 4.0 * f64::EPSILON {
            return Self::ZERO;
        }
        Self::from_polar(big.log_mod + s.re.hypot(s.im).ln(), s.im.atan2(s.re))
    }
}

impl fmt::Display for ScaledComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})·e^(i{})", self.log_mod, self.arg)
    }
}

/// `log(exp(a) + exp(b))` with `-inf` as the neutral element.
pub fn log_sum_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

pub fn to_scaled_point(p: [Complex64; 2]) -> ScaledPoint {
    [p[0].into(), p[1].into()]
}

pub fn to_complex_point(p: &ScaledPoint) -> [Complex64; 2] {
    [p[0].to_complex(), p[1].to_complex()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn angle_close(a: f64, b: f64, tol: f64) -> bool {
        let d = wrap_angle(a - b).abs();
        d <= tol
    }

    #[test]
    fn zero_is_canonical() {
        let z = ScaledComplex::from_complex(Complex64::new(0.0, 0.0));
        assert_eq!(z, ScaledComplex::ZERO);
        assert_eq!(z.arg(), 0.0);
        let z = ScaledComplex::from_polar(f64::NEG_INFINITY, 2.0);
        assert_eq!(z.arg(), 0.0);
    }

    #[test]
    fn wrap_into_half_open_interval() {
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-0.5) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn addition_with_zero_returns_other_term() {
        let a = ScaledComplex::from_polar(-3.0, 1.0);
        assert_eq!(a + ScaledComplex::ZERO, a);
        assert_eq!(ScaledComplex::ZERO + a, a);
    }

    #[test]
    fn addition_beyond_gap_keeps_dominant() {
        let a = ScaledComplex::from_polar(-10.0, 0.3);
        let b = ScaledComplex::from_polar(-10.0 - 800.0, 0.1);
        assert_eq!(a + b, a);
    }

    #[test]
    fn cancellation_gives_zero() {
        let a = ScaledComplex::from_complex(Complex64::new(2.0, 0.0));
        let b = ScaledComplex::from_complex(Complex64::new(-2.0, 0.0));
        assert!((a + b).is_zero());
    }

    #[test]
    fn deep_underflow_stays_representable() {
        let z = ScaledComplex::from_real(0.5);
        let big = z.powu(1 << 40);
        assert!(big.log_mod().is_finite());
        assert!((big.log_mod() - (1u64 << 40) as f64 * 0.5f64.ln()).abs() < 1e-3);
        assert_eq!(big.to_complex(), Complex64::new(0.0, 0.0));
    }

    proptest! {
        #[test]
        fn add_matches_standard_arithmetic(
            ar in -5.0f64..5.0, ai in -5.0f64..5.0,
            br in -5.0f64..5.0, bi in -5.0f64..5.0,
        ) {
            let a = Complex64::new(ar, ai);
            let b = Complex64::new(br, bi);
            let s = (ScaledComplex::from(a) + ScaledComplex::from(b)).to_complex();
            let e = a + b;
            // relative to the summand scale, since cancellation is exact in neither route
            let scale = a.norm().max(b.norm()).max(1e-300);
            prop_assert!((s - e).norm() <= 1e-14 * scale);
        }

        #[test]
        fn mul_is_commutative_and_associative(
            l1 in -50.0f64..50.0, t1 in -3.0f64..3.0,
            l2 in -50.0f64..50.0, t2 in -3.0f64..3.0,
            l3 in -50.0f64..50.0, t3 in -3.0f64..3.0,
        ) {
            let a = ScaledComplex::from_polar(l1, t1);
            let b = ScaledComplex::from_polar(l2, t2);
            let c = ScaledComplex::from_polar(l3, t3);
            let ab = a * b;
            let ba = b * a;
            prop_assert!((ab.log_mod() - ba.log_mod()).abs() <= 1e-14 * (1.0 + ab.log_mod().abs()));
            prop_assert!(angle_close(ab.arg(), ba.arg(), 1e-14));
            let l = (a * b) * c;
            let r = a * (b * c);
            prop_assert!((l.log_mod() - r.log_mod()).abs() <= 1e-14 * (1.0 + l.log_mod().abs()));
            prop_assert!(angle_close(l.arg(), r.arg(), 1e-14));
        }

        #[test]
        fn mul_matches_standard_arithmetic(
            ar in -3.0f64..3.0, ai in -3.0f64..3.0,
            br in -3.0f64..3.0, bi in -3.0f64..3.0,
        ) {
            let a = Complex64::new(ar, ai);
            let b = Complex64::new(br, bi);
            let p = (ScaledComplex::from(a) * ScaledComplex::from(b)).to_complex();
            let e = a * b;
            prop_assert!((p - e).norm() <= 1e-12 * e.norm().max(1e-300));
        }
    }
}
