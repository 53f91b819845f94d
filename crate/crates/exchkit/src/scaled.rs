//! Nonnegative reals stored as mantissa times a power of two.
//!
//! Permanents of weighted matrices overflow f64 long before the matrices get
//! interesting, while their ratios stay tame. `ScaledReal` keeps the mantissa
//! in `[1, 2)` (or exactly 0) next to an explicit base-2 exponent, so products
//! and ratios never overflow and convert back to f64 exactly whenever the
//! value is representable.

use crate::error::{Error, Result};
use std::cmp::Ordering;

/// Nonnegative value `mantissa * 2^log2_scale` with `mantissa` in `[1, 2)`,
/// or exactly zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaledReal {
    mantissa: f64,
    log2_scale: i64,
}

/// Splits a positive finite f64 into `(m, e)` with `m` in `[1, 2)`.
fn split(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    let bits = x.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i64;
    if exp_field == 0 {
        // subnormal: renormalize through a 2^54 lift
        let (m, e) = split(x * 2f64.powi(54));
        (m, e - 54)
    } else {
        let m = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | (1023u64 << 52));
        (m, exp_field - 1023)
    }
}

impl ScaledReal {
    /// Exact zero.
    pub const ZERO: ScaledReal = ScaledReal { mantissa: 0.0, log2_scale: 0 };

    /// Exact one.
    pub const ONE: ScaledReal = ScaledReal { mantissa: 1.0, log2_scale: 0 };

    /// From a nonnegative finite double; the decomposition is exact.
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(x.is_finite() && x >= 0.0) {
            return Err(Error::NonpositiveValue { index: 0, value: x });
        }
        if x == 0.0 {
            return Ok(ScaledReal::ZERO);
        }
        let (mantissa, log2_scale) = split(x);
        Ok(ScaledReal { mantissa, log2_scale })
    }

    /// Back to f64; overflows to `inf` and underflows to `0` outside range.
    pub fn to_f64(self) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        let e = self.log2_scale.clamp(-2000, 2000) as i32;
        self.mantissa * 2f64.powi(e)
    }

    /// Mantissa in `[1, 2)`, or 0.
    pub fn mantissa(self) -> f64 {
        self.mantissa
    }

    /// Base-2 exponent.
    pub fn log2_scale(self) -> i64 {
        self.log2_scale
    }

    /// True for exact zero.
    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    /// log2 of the value, `-inf` for zero. Handy for diagnostics.
    pub fn log2(self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.log2_scale as f64 + self.mantissa.log2()
        }
    }

    fn normalized(mantissa: f64, log2_scale: i64) -> Self {
        if mantissa == 0.0 {
            return ScaledReal::ZERO;
        }
        let (m, e) = split(mantissa);
        ScaledReal { mantissa: m, log2_scale: log2_scale + e }
    }

    /// Ratio `self / other` as f64; other must be nonzero.
    pub fn ratio_to_f64(self, other: ScaledReal) -> f64 {
        (self / other).to_f64()
    }
}

impl std::ops::Mul for ScaledReal {
    type Output = ScaledReal;
    fn mul(self, rhs: ScaledReal) -> ScaledReal {
        if self.is_zero() || rhs.is_zero() {
            return ScaledReal::ZERO;
        }
        // product of two [1,2) mantissas is in [1,4): one renormalization step
        ScaledReal::normalized(self.mantissa * rhs.mantissa, self.log2_scale + rhs.log2_scale)
    }
}

impl std::ops::Div for ScaledReal {
    type Output = ScaledReal;
    fn div(self, rhs: ScaledReal) -> ScaledReal {
        debug_assert!(!rhs.is_zero(), "division by scaled zero");
        if self.is_zero() {
            return ScaledReal::ZERO;
        }
        ScaledReal::normalized(self.mantissa / rhs.mantissa, self.log2_scale - rhs.log2_scale)
    }
}

impl std::ops::Add for ScaledReal {
    type Output = ScaledReal;
    fn add(self, rhs: ScaledReal) -> ScaledReal {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.log2_scale >= rhs.log2_scale { (self, rhs) } else { (rhs, self) };
        let shift = big.log2_scale - small.log2_scale;
        if shift > 1100 {
            return big; // small vanishes below one ulp even after alignment
        }
        let aligned = small.mantissa * 2f64.powi(-(shift as i32));
        ScaledReal::normalized(big.mantissa + aligned, big.log2_scale)
    }
}

impl PartialOrd for ScaledReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => match self.log2_scale.cmp(&other.log2_scale) {
                Ordering::Equal => self.mantissa.partial_cmp(&other.mantissa),
                ord => Some(ord),
            },
        }
    }
}
