//! Nonnegative reals with an unbounded binary exponent.
//!
//! `‖𝒜ⁿ‖` routinely leaves the `f64` range for long products (`2^1024` is
//! already infinite). A [`WideReal`] stores `mantissa · 2^exponent` with the
//! mantissa in `[0.5, 1)`, so products, comparisons and `n`-th roots stay
//! exact or correctly scaled far beyond that range.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use crate::linalg::pow2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WideReal {
    mantissa: f64,
    exponent: i64,
}

/// Splits a finite positive `x` into `(m, e)` with `x = m·2^e`, `m ∈ [0.5, 1)`.
pub(crate) fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal: lift into the normal range first
        let (m, e) = frexp(x * pow2(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, raw_exp - 1022)
}

impl WideReal {
    pub const ZERO: WideReal = WideReal {
        mantissa: 0.0,
        exponent: 0,
    };

    /// Panics on negative or non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x >= 0.0 && x.is_finite(), "WideReal needs a finite nonnegative value, got {x}");
        if x == 0.0 {
            return Self::ZERO;
        }
        let (mantissa, exponent) = frexp(x);
        Self { mantissa, exponent }
    }

    /// `x · 2^k`.
    pub fn from_scaled(x: f64, k: i64) -> Self {
        Self::from_f64(x).mul_pow2(k)
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn mul_pow2(self, k: i64) -> Self {
        if self.is_zero() {
            self
        } else {
            Self {
                mantissa: self.mantissa,
                exponent: self.exponent + k,
            }
        }
    }


    /// Nearest `f64`; saturates to `inf` or `0` outside the range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let e = self.exponent;
        if e > 1024 {
            f64::INFINITY
        } else if e < -1100 {
            0.0
        } else {
            // two exact-range factors, so a subnormal result rounds only once
            let half = e / 2;
            self.mantissa * pow2(half as i32) * pow2((e - half) as i32)
        }
    }

    /// Natural logarithm; `-inf` for zero.
    pub fn ln(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.mantissa.ln() + self.exponent as f64 * std::f64::consts::LN_2
        }
    }

    /// `self^{1/n}`.
    ///
    /// The exponent is split as `e = q·n + s` with `0 ≤ s < n`, so exact
    /// powers such as `16^{1/4}` or `2^{1024/1024}` come out exact.
    pub fn root(&self, n: u64) -> f64 {
        assert!(n >= 1, "root index must be positive");
        if self.is_zero() {
            return 0.0;
        }
        let n_i = n as i64;
        let q = self.exponent.div_euclid(n_i);
        let s = self.exponent.rem_euclid(n_i);
        let base = if s <= 1000 {
            (self.mantissa * pow2(s as i32)).powf(1.0 / n as f64)
        } else {
            ((self.mantissa.ln() + s as f64 * std::f64::consts::LN_2) / n as f64).exp()
        };
        if q > 1023 {
            return f64::INFINITY;
        }
        if q < -1100 {
            return 0.0;
        }
        base * pow2(q as i32)
    }
}

impl Mul for WideReal {
    type Output = WideReal;

    fn mul(self, rhs: WideReal) -> WideReal {
        if self.is_zero() || rhs.is_zero() {
            return WideReal::ZERO;
        }
        let (m, e) = frexp(self.mantissa * rhs.mantissa);
        WideReal {
            mantissa: m,
            exponent: e + self.exponent + rhs.exponent,
        }
    }
}

impl PartialOrd for WideReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => Some(
                self.exponent
                    .cmp(&other.exponent)
                    .then(self.mantissa.total_cmp(&other.mantissa)),
            ),
        }
    }
}

impl fmt::Display for WideReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_f64();
        if v.is_finite() && (v == 0.0 || v > f64::MIN_POSITIVE) {
            write!(f, "{v:e}")
        } else {
            // decimal scientific notation from the log
            let l10 = self.ln() / std::f64::consts::LN_10;
            let e = l10.floor();
            write!(f, "{}e{}", 10f64.powf(l10 - e), e as i64)
        }
    }
}
