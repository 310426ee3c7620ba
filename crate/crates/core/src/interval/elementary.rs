use super::round::*;
use super::Interval;
use crate::error::{Error, Result};
use std::f64::consts;

/// Slack applied to libm results; glibc is within one ulp for these.
const LIBM_ULPS: u32 = 2;

impl Interval {
    /// Enclosure of π.
    pub const PI: Interval = Interval {
        lo: consts::PI,
        hi: 3.141_592_653_589_793_6,
    };

    /// Square root; errors unless `lo ≥ 0`.
    pub fn sqrt(&self) -> Result<Interval> {
        if self.is_empty() {
            return Ok(*self);
        }
        if self.lo < 0.0 {
            return Err(Error::Domain {
                function: "sqrt",
                arg: *self,
            });
        }
        Ok(Interval {
            lo: sqrt_down(self.lo),
            hi: sqrt_up(self.hi),
        })
    }

    /// Square root of `self ∩ [0, ∞)`; errors only if that set is empty.
    pub fn sqrt_truncated(&self) -> Result<Interval> {
        let t = self.intersection(&Interval::new(0.0, f64::INFINITY));
        if t.is_empty() {
            return Err(Error::Domain {
                function: "sqrt",
                arg: *self,
            });
        }
        t.sqrt()
    }

    /// Integer power. Negative exponents need `0 ∉ self`.
    pub fn powi(&self, n: i32) -> Result<Interval> {
        if self.is_empty() {
            return Ok(*self);
        }
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let n = n as u32;
        if n == 0 {
            return Ok(Interval::ONE);
        }
        Ok(if n % 2 == 0 {
            Interval {
                lo: pow_abs_down(self.mig(), n),
                hi: pow_abs_up(self.mag(), n),
            }
        } else {
            let lo = if self.lo >= 0.0 {
                pow_abs_down(self.lo, n)
            } else {
                -pow_abs_up(-self.lo, n)
            };
            let hi = if self.hi >= 0.0 {
                pow_abs_up(self.hi, n)
            } else {
                -pow_abs_down(-self.hi, n)
            };
            Interval { lo, hi }
        })
    }

    /// `x^(p / 2^k)` for `x ≥ 0`, computed as `k` square roots of `x^p`.
    pub fn pow_dyadic(&self, p: u32, k: u32) -> Result<Interval> {
        if self.is_empty() {
            return Ok(*self);
        }
        if self.lo < 0.0 {
            return Err(Error::Domain {
                function: "pow_dyadic",
                arg: *self,
            });
        }
        let mut y = self.powi(p as i32)?;
        for _ in 0..k {
            y = y.sqrt()?;
        }
        Ok(y)
    }

    pub fn sin(&self) -> Interval {
        if self.is_empty() {
            return *self;
        }
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Interval::new(-1.0, 1.0);
        }
        // sin peaks at π/2 + 2kπ and bottoms at -π/2 + 2kπ.
        let half_pi = Interval::PI * 0.5;
        let has_max = contains_lattice_point(*self, half_pi);
        let has_min = contains_lattice_point(*self, -half_pi);
        let (a, b) = (self.lo.sin(), self.hi.sin());
        trig_hull(a, b, has_min, has_max)
    }

    pub fn cos(&self) -> Interval {
        if self.is_empty() {
            return *self;
        }
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Interval::new(-1.0, 1.0);
        }
        let has_max = contains_lattice_point(*self, Interval::ZERO);
        let has_min = contains_lattice_point(*self, Interval::PI);
        let (a, b) = (self.lo.cos(), self.hi.cos());
        trig_hull(a, b, has_min, has_max)
    }

    /// Tangent; errors when a pole `π/2 + kπ` may lie in the interval.
    pub fn tan(&self) -> Result<Interval> {
        if self.is_empty() {
            return Ok(*self);
        }
        let pole = || Error::Domain {
            function: "tan",
            arg: *self,
        };
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(pole());
        }
        let t = (*self - Interval::PI * 0.5)
            .checked_div(&Interval::PI)
            .map_err(|_| pole())?;
        if t.hi.floor() >= t.lo.ceil() {
            return Err(pole());
        }
        let lo = widen_down(self.lo.tan(), LIBM_ULPS);
        let hi = widen_up(self.hi.tan(), LIBM_ULPS);
        if lo > hi {
            return Err(pole());
        }
        Ok(Interval { lo, hi })
    }

    pub fn atan(&self) -> Interval {
        if self.is_empty() {
            return *self;
        }
        let bound = Interval::PI.hi * 0.5;
        Interval {
            lo: widen_down(self.lo.atan(), LIBM_ULPS).max(-bound),
            hi: widen_up(self.hi.atan(), LIBM_ULPS).min(bound),
        }
    }
}

/// Whether `x` may contain a point of `offset + 2πℤ`.
fn contains_lattice_point(x: Interval, offset: Interval) -> bool {
    let two_pi = Interval::PI * 2.0;
    match (x - offset).checked_div(&two_pi) {
        Ok(t) => t.hi.floor() >= t.lo.ceil(),
        Err(_) => true,
    }
}

fn trig_hull(a: f64, b: f64, has_min: bool, has_max: bool) -> Interval {
    let lo = if has_min {
        -1.0
    } else {
        widen_down(a.min(b), LIBM_ULPS).max(-1.0)
    };
    let hi = if has_max {
        1.0
    } else {
        widen_up(a.max(b), LIBM_ULPS).min(1.0)
    };
    Interval { lo, hi }
}

fn pow_abs_up(a: f64, n: u32) -> f64 {
    let mut base = a;
    let mut acc = 1.0;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_up(acc, base);
        }
        e >>= 1;
        if e > 0 {
            base = mul_up(base, base);
        }
    }
    acc
}

fn pow_abs_down(a: f64, n: u32) -> f64 {
    let mut base = a;
    let mut acc = 1.0;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_down(acc, base);
        }
        e >>= 1;
        if e > 0 {
            base = mul_down(base, base);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_squares_is_exact() {
        let s = Interval::new(4.0, 9.0).sqrt().unwrap();
        assert_eq!(s, Interval::new(2.0, 3.0));
        assert!(Interval::new(-1.0, 1.0).sqrt().is_err());
        assert_eq!(
            Interval::new(-1.0, 4.0).sqrt_truncated().unwrap(),
            Interval::new(0.0, 2.0)
        );
    }

    #[test]
    fn pi_encloses_pi() {
        assert!(Interval::PI.lo() < Interval::PI.hi());
        assert_eq!(Interval::PI.lo().next_up(), Interval::PI.hi());
    }

    #[test]
    fn sin_over_half_period_reaches_one() {
        let s = Interval::new(0.0, consts::PI).sin();
        assert_eq!(s.hi(), 1.0);
        assert!(s.lo() <= 0.0 && s.lo() > -1e-15);
    }

    #[test]
    fn cos_handles_both_extrema() {
        let c = Interval::new(-0.1, 3.2).cos();
        assert_eq!(c, Interval::new(-1.0, 1.0));
        let c = Interval::new(0.5, 1.0).cos();
        assert!(c.contains(0.5f64.cos()) && c.contains(1.0f64.cos()));
        assert!(c.width() < 0.4);
    }

    #[test]
    fn tan_rejects_poles() {
        assert!(Interval::new(1.5, 1.6).tan().is_err());
        let t = Interval::new(-0.5, 0.5).tan().unwrap();
        assert!(t.contains(0.5f64.tan()) && t.contains(-(0.5f64.tan())));
    }

    #[test]
    fn odd_and_even_powers() {
        let x = Interval::new(-2.0, 1.0);
        assert_eq!(x.powi(3).unwrap(), Interval::new(-8.0, 1.0));
        assert_eq!(x.powi(2).unwrap(), Interval::new(0.0, 4.0));
        assert_eq!(x.powi(0).unwrap(), Interval::ONE);
        assert!(x.powi(-1).is_err());
        let q = Interval::new(16.0, 16.0).pow_dyadic(3, 2).unwrap();
        assert!(q.contains(8.0) && q.width() < 1e-14);
    }
}
