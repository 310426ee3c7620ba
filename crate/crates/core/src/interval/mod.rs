//! Outward-rounded interval arithmetic.

mod elementary;
mod matrix;
pub(crate) mod round;
mod vector;

pub use matrix::IMatrix;
pub use vector::IVector;

use crate::error::{Error, Result};
use round::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// A closed interval `[lo, hi]` of reals, or the empty set.
///
/// The empty set is stored as a pair of NaNs and is only produced by an
/// explicit request (`Interval::EMPTY`, an empty intersection); arithmetic
/// on it yields it again.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const EMPTY: Interval = Interval {
        lo: f64::NAN,
        hi: f64::NAN,
    };
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// `[lo, hi]`; panics when `lo > hi` or either bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self::try_new(lo, hi).unwrap_or_else(|| panic!("invalid interval [{lo}, {hi}]"))
    }

    pub fn try_new(lo: f64, hi: f64) -> Option<Self> {
        if lo <= hi && !(lo == f64::INFINITY || hi == f64::NEG_INFINITY) {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// `[-r, r]`.
    pub fn symmetric(r: f64) -> Self {
        let r = r.abs();
        Self::new(-r, r)
    }

    /// Enclosure of the real number written in decimal.
    ///
    /// The parsed float is widened by one ulp on each side unless it is an
    /// integer small enough to be exact.
    pub fn from_decimal(s: &str) -> Result<Self> {
        let x: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("not a number: {s:?}")))?;
        if x.fract() == 0.0 && x.abs() < 9.0e15 {
            Ok(Self::point(x))
        } else {
            Ok(Self::new(x.next_down(), x.next_up()))
        }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lo.is_nan()
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// A float inside the interval, close to its centre.
    pub fn mid(&self) -> f64 {
        if self.is_empty() {
            return f64::NAN;
        }
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => {
                let m = 0.5 * self.lo + 0.5 * self.hi;
                m.clamp(self.lo, self.hi)
            }
            (false, false) => 0.0,
            (false, true) => {
                if self.hi > 0.0 {
                    0.0
                } else {
                    -f64::MAX
                }
            }
            (true, false) => {
                if self.lo < 0.0 {
                    0.0
                } else {
                    f64::MAX
                }
            }
        }
    }

    /// Upper bound of `hi - lo`.
    pub fn width(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        sub_up(self.hi, self.lo)
    }

    /// Upper bound of the distance from `mid()` to either end.
    pub fn rad(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let m = self.mid();
        sub_up(m, self.lo).max(sub_up(self.hi, m))
    }

    /// `max |x|` over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// `min |x|` over the interval.
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        !self.is_empty() && self.lo <= x && x <= self.hi
    }

    /// Whether `other ⊆ self`. The empty set is contained in everything.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.is_empty() || (!self.is_empty() && self.lo <= other.lo && other.hi <= self.hi)
    }

    /// Whether `other` lies in the interior of `self`.
    pub fn interior_contains(&self, other: &Interval) -> bool {
        other.is_empty() || (!self.is_empty() && self.lo < other.lo && other.hi < self.hi)
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn hull_point(&self, x: f64) -> Interval {
        self.hull(&Interval::point(x))
    }

    pub fn intersection(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Interval::EMPTY;
        }
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Interval { lo, hi }
        } else {
            Interval::EMPTY
        }
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        !self.intersection(other).is_empty()
    }

    /// Strictly positive everywhere.
    pub fn is_positive(&self) -> bool {
        !self.is_empty() && self.lo > 0.0
    }

    /// Strictly negative everywhere.
    pub fn is_negative(&self) -> bool {
        !self.is_empty() && self.hi < 0.0
    }

    pub fn abs(&self) -> Interval {
        if self.is_empty() {
            return *self;
        }
        Interval {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn sqr(&self) -> Interval {
        if self.is_empty() {
            return *self;
        }
        let a = self.mig();
        let b = self.mag();
        Interval {
            lo: mul_down(a, a),
            hi: mul_up(b, b),
        }
    }

    /// Multiply by a float exactly known to the caller.
    pub fn scale(&self, s: f64) -> Interval {
        *self * Interval::point(s)
    }

    pub fn checked_div(&self, rhs: &Interval) -> Result<Interval> {
        if self.is_empty() || rhs.is_empty() {
            return Ok(Interval::EMPTY);
        }
        if rhs.contains(0.0) {
            return Err(Error::DivisionByZero(*rhs));
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = div_down(a, c)
            .min(div_down(a, d))
            .min(div_down(b, c))
            .min(div_down(b, d));
        let hi = div_up(a, c)
            .max(div_up(a, d))
            .max(div_up(b, c))
            .max(div_up(b, d));
        Ok(Interval { lo, hi })
    }

    pub fn recip(&self) -> Result<Interval> {
        Interval::ONE.checked_div(self)
    }

    /// Enlarge by `rel · rad + abs` on both sides.
    pub fn inflate(&self, rel: f64, abs: f64) -> Interval {
        if self.is_empty() {
            return *self;
        }
        let r = add_up(mul_up(self.rad(), rel), abs);
        Interval {
            lo: sub_down(self.lo, r),
            hi: add_up(self.hi, r),
        }
    }

    /// Same interval re-centred on its float midpoint: `mid + [-rad, rad]`.
    pub fn split_mid(&self) -> (f64, Interval) {
        let m = self.mid();
        (m, *self - Interval::point(m))
    }

    /// Render with 17 significant digits, exact for binary64.
    pub fn render(&self) -> String {
        if self.is_empty() {
            return "[empty]".to_string();
        }
        format!("[{},{}]", fmt_f64(self.lo), fmt_f64(self.hi))
    }
}

fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

fn parse_f64(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        t => t.parse().ok(),
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "[empty]" {
            return Ok(Interval::EMPTY);
        }
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Invalid(format!("not an interval: {s:?}")))?;
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Invalid(format!("not an interval: {s:?}")))?;
        match (parse_f64(a), parse_f64(b)) {
            (Some(lo), Some(hi)) => Interval::try_new(lo, hi)
                .ok_or_else(|| Error::Invalid(format!("bounds out of order: {s:?}"))),
            _ => Err(Error::Invalid(format!("not an interval: {s:?}"))),
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval {
            lo: add_down(self.lo, rhs.lo),
            hi: add_up(self.hi, rhs.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        Interval {
            lo: sub_down(self.lo, rhs.hi),
            hi: sub_up(self.hi, rhs.lo),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        if self.is_empty() || rhs.is_empty() {
            return Interval::EMPTY;
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 {
            if c >= 0.0 {
                Interval { lo: mul_down(a, c), hi: mul_up(b, d) }
            } else if d <= 0.0 {
                Interval { lo: mul_down(b, c), hi: mul_up(a, d) }
            } else {
                Interval { lo: mul_down(b, c), hi: mul_up(b, d) }
            }
        } else if b <= 0.0 {
            if c >= 0.0 {
                Interval { lo: mul_down(a, d), hi: mul_up(b, c) }
            } else if d <= 0.0 {
                Interval { lo: mul_down(b, d), hi: mul_up(a, c) }
            } else {
                Interval { lo: mul_down(a, d), hi: mul_up(a, c) }
            }
        } else if c >= 0.0 {
            Interval { lo: mul_down(a, d), hi: mul_up(b, d) }
        } else if d <= 0.0 {
            Interval { lo: mul_down(b, c), hi: mul_up(a, c) }
        } else {
            Interval {
                lo: mul_down(a, d).min(mul_down(b, c)),
                hi: mul_up(a, c).max(mul_up(b, d)),
            }
        }
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl AddAssign for Interval {
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl SubAssign for Interval {
    fn sub_assign(&mut self, rhs: Interval) {
        *self = *self - rhs;
    }
}

impl MulAssign for Interval {
    fn mul_assign(&mut self, rhs: Interval) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |a, b| a + b)
    }
}
