//! Directed rounding on top of round-to-nearest.
//!
//! Sums and products are checked with error-free transformations, so a
//! result is only nudged to the neighbouring float when the native operation
//! was actually inexact. Outside the range where the transformations are
//! exact we fall back to an unconditional one-ulp step.

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
const SAFE_HI: f64 = 1.0e290;
const SAFE_LO: f64 = 1.0e-280;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = SPLITTER * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

#[inline]
fn in_safe_range(x: f64) -> bool {
    let m = x.abs();
    (SAFE_LO..=SAFE_HI).contains(&m)
}

/// Overflow of a finite operation: round-to-nearest produced an infinity.
#[inline]
fn overflow_down(s: f64) -> f64 {
    if s > 0.0 {
        f64::MAX
    } else {
        s
    }
}

#[inline]
fn overflow_up(s: f64) -> f64 {
    if s < 0.0 {
        -f64::MAX
    } else {
        s
    }
}

#[inline]
pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s.is_finite() {
        if e < 0.0 {
            s.next_down()
        } else {
            s
        }
    } else if s.is_nan() {
        f64::NEG_INFINITY
    } else if a.is_infinite() || b.is_infinite() {
        s
    } else {
        overflow_down(s)
    }
}

#[inline]
pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if s.is_finite() {
        if e > 0.0 {
            s.next_up()
        } else {
            s
        }
    } else if s.is_nan() {
        f64::INFINITY
    } else if a.is_infinite() || b.is_infinite() {
        s
    } else {
        overflow_up(s)
    }
}

#[inline]
pub(crate) fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub(crate) fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        return if a.is_infinite() || b.is_infinite() {
            p
        } else {
            overflow_down(p)
        };
    }
    if in_safe_range(a) && in_safe_range(b) && in_safe_range(p) {
        let (p, e) = two_prod(a, b);
        if e < 0.0 {
            p.next_down()
        } else {
            p
        }
    } else {
        p.next_down()
    }
}

#[inline]
pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        return if a.is_infinite() || b.is_infinite() {
            p
        } else {
            overflow_up(p)
        };
    }
    if in_safe_range(a) && in_safe_range(b) && in_safe_range(p) {
        let (p, e) = two_prod(a, b);
        if e > 0.0 {
            p.next_up()
        } else {
            p
        }
    } else {
        p.next_up()
    }
}

/// Sign of `a/b - q` for the rounded quotient `q`, or `None` when the
/// residual cannot be formed exactly.
#[inline]
fn quotient_residual_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if !(in_safe_range(a) && in_safe_range(b) && in_safe_range(q)) {
        return None;
    }
    let (p, e) = two_prod(q, b);
    let r = (a - p) - e;
    Some(if b > 0.0 { r } else { -r })
}

#[inline]
pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 && b != 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_infinite() {
        return if a.is_infinite() { q } else { overflow_down(q) };
    }
    if b.is_infinite() {
        return if q == 0.0 && a.is_sign_negative() != b.is_sign_negative() {
            q.next_down()
        } else {
            q
        };
    }
    match quotient_residual_sign(a, b, q) {
        Some(r) if r >= 0.0 => q,
        Some(_) => q.next_down(),
        None => q.next_down(),
    }
}

#[inline]
pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 && b != 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_infinite() {
        return if a.is_infinite() { q } else { overflow_up(q) };
    }
    if b.is_infinite() {
        return if q == 0.0 && a.is_sign_negative() == b.is_sign_negative() {
            q.next_up()
        } else {
            q
        };
    }
    match quotient_residual_sign(a, b, q) {
        Some(r) if r <= 0.0 => q,
        Some(_) => q.next_up(),
        None => q.next_up(),
    }
}

#[inline]
pub(crate) fn sqrt_down(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    if s.is_infinite() {
        return s;
    }
    if in_safe_range(x) {
        let (p, e) = two_prod(s, s);
        let r = (x - p) - e;
        if r < 0.0 {
            s.next_down()
        } else {
            s
        }
    } else {
        s.next_down().max(0.0)
    }
}

#[inline]
pub(crate) fn sqrt_up(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let s = x.sqrt();
    if s.is_infinite() {
        return s;
    }
    if in_safe_range(x) {
        let (p, e) = two_prod(s, s);
        let r = (x - p) - e;
        if r > 0.0 {
            s.next_up()
        } else {
            s
        }
    } else {
        s.next_up()
    }
}

/// Widen a libm result by `ulps` in each direction.
#[inline]
pub(crate) fn widen_down(x: f64, ulps: u32) -> f64 {
    let mut y = x;
    for _ in 0..ulps {
        y = y.next_down();
    }
    y
}

#[inline]
pub(crate) fn widen_up(x: f64, ulps: u32) -> f64 {
    let mut y = x;
    for _ in 0..ulps {
        y = y.next_up();
    }
    y
}
