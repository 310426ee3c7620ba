//! Sign certificates for the time-scale factor near an equilibrium and
//! enclosures of passage times in the original time scale.

use crate::cones::{ManifoldKind, ManifoldLyapunovCertificate};
use crate::error::{Error, Result};
use crate::interval::{IVector, Interval};
use crate::lohner::TrajectoryEnclosure;
use crate::systems::Dyadic;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignCertificate {
    pub manifold: ManifoldKind,
    pub theta_range: Interval,
    #[serde(rename = "M")]
    pub m: f64,
    pub coordinate: usize,
    /// Sign of `x_coord − x*_coord` on the cone component containing
    /// `component · V`.
    pub sign: i8,
    pub component: i8,
    /// Lower end is the verified margin of `cos θ − |sin θ| tan β`.
    pub gap: Interval,
}

/// Sign of coordinate `coord` (of a 2-D state) on the cone of aperture
/// `β = arcsin(ρ/M)` around the eigenvector `v`, where `ρ` bounds
/// `‖V_other‖ / ‖V‖`.
pub fn verify_sign_on_cone(
    manifold: ManifoldKind,
    v: &IVector,
    rho: Interval,
    m: f64,
    coord: usize,
    component: i8,
) -> Result<SignCertificate> {
    if v.len() != 2 || coord > 1 {
        return Err(Error::Sign("the angle criterion is implemented for planar states".into()));
    }
    let (v1, v2) = (v[coord], v[1 - coord]);
    if v1.contains(0.0) {
        return Err(Error::Sign(format!("eigenvector component {v1} may vanish")));
    }
    let theta = v2.checked_div(&v1)?.atan();
    let s = rho.checked_div(&Interval::point(m))?;
    if !(s.hi() < 1.0) {
        return Err(Error::Sign("cone aperture reaches a right angle".into()));
    }
    let tan_beta = s.checked_div(&(Interval::ONE - s.sqr()).sqrt_truncated()?)?;
    let gap = theta.cos() - theta.sin().abs() * tan_beta;
    if !gap.is_positive() {
        return Err(Error::Sign(format!("cos θ − |sin θ| tan β ∈ {gap} is not positive")));
    }
    let sign = if v1.is_positive() { component.signum() } else { -component.signum() };
    Ok(SignCertificate {
        manifold,
        theta_range: theta,
        m,
        coordinate: coord,
        sign,
        component: component.signum(),
        gap,
    })
}

pub fn verify_sign_on_stable_cone(v_s: &IVector, rho: Interval, m: f64, coord: usize, component: i8) -> Result<SignCertificate> {
    verify_sign_on_cone(ManifoldKind::Stable, v_s, rho, m, coord, component)
}

pub fn verify_sign_on_unstable_cone(v_u: &IVector, rho: Interval, m: f64, coord: usize, component: i8) -> Result<SignCertificate> {
    verify_sign_on_cone(ManifoldKind::Unstable, v_u, rho, m, coord, component)
}

fn decay_magnitude(rate: &ManifoldLyapunovCertificate) -> Result<Interval> {
    let d = rate.decay_factor;
    let worst = match rate.kind {
        ManifoldKind::Stable => -d.hi(),
        ManifoldKind::Unstable => d.lo(),
    };
    if !(worst > 0.0) {
        return Err(Error::NoDecay(format!("{:?} rate {} touches zero", rate.kind, rate.rate)));
    }
    Ok(Interval::point(worst))
}

/// `[0, (2p₁)^m L₀^{m/2} / (m κ)]` with `κ = M²/(M²+1)·|rate|`: bound of
/// `∫ |x₁ − x₁*|^m dτ` over the part of the manifold inside the block.
pub fn tail_time(m: Dyadic, p1: f64, rate: &ManifoldLyapunovCertificate) -> Result<Interval> {
    let kappa = decay_magnitude(rate)?;
    let l0 = Interval::point(rate.level_bound.hi().max(0.0));
    if l0.hi() == 0.0 {
        return Ok(Interval::ZERO);
    }
    let two_p1 = Interval::point(p1) * 2.0;
    let num = m.pow(two_p1)? * Dyadic { num: m.num, log2_den: m.log2_den + 1 }.pow(l0)?;
    let t = num.checked_div(&(m.interval() * kappa))?;
    Ok(Interval::new(0.0, t.hi()))
}

pub fn tail_time_stable(m: Dyadic, p1: f64, rate: &ManifoldLyapunovCertificate) -> Result<Interval> {
    if rate.kind != ManifoldKind::Stable {
        return Err(Error::Invalid("expected a stable-manifold rate".into()));
    }
    tail_time(m, p1, rate)
}

pub fn tail_time_unstable(m: Dyadic, p1: f64, rate: &ManifoldLyapunovCertificate) -> Result<Interval> {
    if rate.kind != ManifoldKind::Unstable {
        return Err(Error::Invalid("expected an unstable-manifold rate".into()));
    }
    tail_time(m, p1, rate)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldSide {
    BelowFold,
    AboveFold,
}

/// Tail of `∫ |1 − b²| dτ` near a folded singularity at `b = 1`, using
/// `|b − 1| ≤ 2p₁√L`:
/// below the fold `1 − b² ≤ 4p₁√L`, above it `b² − 1 ≤ 4p₁√L + 4p₁²L`.
pub fn tail_time_canard(side: FoldSide, p1: f64, rate: &ManifoldLyapunovCertificate) -> Result<Interval> {
    if rate.kind != ManifoldKind::Stable {
        return Err(Error::Invalid("expected a stable-manifold rate".into()));
    }
    let kappa = decay_magnitude(rate)?;
    let l0 = Interval::point(rate.level_bound.hi().max(0.0));
    let p = Interval::point(p1);
    let lin = p * 4.0 * l0.sqrt()?;
    let t = match side {
        FoldSide::BelowFold => lin.checked_div(&kappa)?,
        FoldSide::AboveFold => (lin + p.sqr() * 2.0 * l0).checked_div(&kappa)?,
    };
    Ok(Interval::new(0.0, t.hi()))
}

/// `dt/dτ` (or its negative) as a function of one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Integrand {
    /// `x^m`, requires `x > 0`.
    Power { coord: usize, m: Dyadic },
    /// `1 − x²`, requires `|x| < 1`.
    OneMinusSquare { coord: usize },
    /// `x² − 1`, requires `|x| > 1`.
    SquareMinusOne { coord: usize },
}

impl Integrand {
    pub fn coord(&self) -> usize {
        match *self {
            Integrand::Power { coord, .. } | Integrand::OneMinusSquare { coord } | Integrand::SquareMinusOne { coord } => coord,
        }
    }

    /// Enclosure over the box, failing unless the integrand is positive.
    pub fn eval(&self, x: &[Interval], step: usize) -> Result<Interval> {
        let v = x[self.coord()];
        let r = match *self {
            Integrand::Power { m, .. } => {
                if !v.is_positive() {
                    return Err(Error::AmbiguousSign { step });
                }
                m.pow(v)?
            }
            Integrand::OneMinusSquare { .. } => Interval::ONE - v.sqr(),
            Integrand::SquareMinusOne { .. } => v.sqr() - Interval::ONE,
        };
        if !r.is_positive() {
            return Err(Error::AmbiguousSign { step });
        }
        Ok(r)
    }
}

fn step_width(span: Interval) -> Interval {
    Interval::point(span.hi()) - Interval::point(span.lo())
}

/// `∫ integrand dτ` over the whole trajectory, as a sum over steps of
/// `width(span) × integrand(step box)`.
pub fn segment_time(traj: &TrajectoryEnclosure, integrand: Integrand) -> Result<Interval> {
    let mut total = Interval::ZERO;
    for (i, (span, b)) in traj.steps().enumerate() {
        total = total + step_width(span) * integrand.eval(b, i)?;
    }
    Ok(total)
}

/// Measure of `{τ : x_c(τ) < level}` before the end of the trajectory,
/// requiring every step after the first one entirely above `level` to stay
/// above it.
pub fn segment_time_until(traj: &TrajectoryEnclosure, integrand: Integrand, level: f64) -> Result<Interval> {
    let c = integrand.coord();
    let mut lo = Interval::ZERO;
    let mut hi = Interval::ZERO;
    let mut below = true;
    let mut crossed = false;
    for (i, (span, b)) in traj.steps().enumerate() {
        if crossed || b[c].lo() > level {
            if !(b[c].lo() > level) {
                return Err(Error::Invalid(format!("coordinate {c} returns below {level} at step {i}")));
            }
            crossed = true;
            continue;
        }
        let w = step_width(span);
        let mut clipped = b.to_vec();
        clipped[c] = Interval::new(b[c].lo(), b[c].hi().min(level));
        let f = integrand.eval(&clipped, i)?;
        if below && b[c].hi() < level {
            lo = lo + w * f;
        } else {
            below = false;
        }
        hi = hi + w * f;
    }
    if !crossed {
        return Err(Error::Invalid(format!("coordinate {c} does not cross {level} along the trajectory")));
    }
    Ok(Interval::new(lo.lo(), hi.hi()))
}

/// Measure of `{τ : x_c(τ) < level}` along the trajectory: steps entirely
/// below the level count in both bounds, straddling steps only in the upper
/// one (with the integrand evaluated on the part below the level).
pub fn segment_time_below(traj: &TrajectoryEnclosure, integrand: Integrand, level: f64) -> Result<Interval> {
    let c = integrand.coord();
    let mut lo = Interval::ZERO;
    let mut hi = Interval::ZERO;
    for (i, (span, b)) in traj.steps().enumerate() {
        if b[c].lo() > level {
            continue;
        }
        let mut clipped = b.to_vec();
        clipped[c] = Interval::new(b[c].lo(), b[c].hi().min(level));
        let part = step_width(span) * integrand.eval(&clipped, i)?;
        if b[c].hi() < level {
            lo = lo + part;
        }
        hi = hi + part;
    }
    Ok(Interval::new(lo.lo(), hi.hi()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeRole {
    Arrival,
    Departure,
    Passage,
    SupportWidth,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeEnclosure {
    pub value: Interval,
    pub role: TimeRole,
    pub segment: Interval,
    pub tail: Interval,
}

pub fn total_time(segment: Interval, tail: Interval, role: TimeRole) -> TimeEnclosure {
    TimeEnclosure {
        value: segment + tail,
        role,
        segment,
        tail,
    }
}

impl TimeEnclosure {
    /// Sum of two enclosures (departure and arrival sides of a support).
    pub fn combine(&self, other: &TimeEnclosure, role: TimeRole) -> TimeEnclosure {
        total_time(self.segment + other.segment, self.tail + other.tail, role)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cert(kind: ManifoldKind, rate: f64, m: f64, l0: f64) -> ManifoldLyapunovCertificate {
        let m2 = Interval::point(m).sqr();
        let r = Interval::point(rate);
        ManifoldLyapunovCertificate {
            kind,
            m,
            rate: r,
            level_bound: Interval::point(l0),
            decay_factor: m2.checked_div(&(m2 + Interval::ONE)).unwrap() * r,
            near_diagonal: false,
        }
    }

    #[test]
    fn tail_formula_examples() {
        let one = Dyadic { num: 1, log2_den: 0 };
        let t = tail_time_stable(one, 1.0, &cert(ManifoldKind::Stable, -1.0, 10.0, 1.0)).unwrap();
        assert!((t.hi() - 2.02).abs() < 1e-12 && t.lo() == 0.0);
        let t = tail_time_unstable(one, 1.0, &cert(ManifoldKind::Unstable, 1.0, 10.0, 1.0)).unwrap();
        assert!((t.hi() - 2.02).abs() < 1e-12);
        let t = tail_time_stable(one, 1.0, &cert(ManifoldKind::Stable, -1.0, 10.0, 0.0)).unwrap();
        assert_eq!(t.hi(), 0.0);
        let c = cert(ManifoldKind::Stable, -1.0, 10.0, 1.0);
        assert!((tail_time_canard(FoldSide::BelowFold, 1.0, &c).unwrap().hi() - 4.04).abs() < 1e-12);
        assert!((tail_time_canard(FoldSide::AboveFold, 1.0, &c).unwrap().hi() - 6.06).abs() < 1e-12);
        assert!(tail_time_stable(one, 1.0, &cert(ManifoldKind::Stable, 0.0, 10.0, 1.0)).is_err());
    }

    #[test]
    fn sign_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = verify_sign_on_stable_cone(&IVector::from_points(&[h, h]), Interval::ONE, 10.0, 0, 1).unwrap();
        assert_eq!(c.sign, 1);
        assert!(c.gap.lo() > 0.0);
        assert!(verify_sign_on_stable_cone(&IVector::from_points(&[0.0, 1.0]), Interval::ONE, 1e6, 0, 1).is_err());
        let u = verify_sign_on_unstable_cone(&IVector::from_points(&[1.0, 0.0]), Interval::ONE, 10.0, 0, -1).unwrap();
        assert_eq!(u.sign, -1);
    }

    #[test]
    fn constant_trajectory_quadrature() {
        let spans: Vec<Interval> = (0..4).map(|i| Interval::new(i as f64 * 0.5, (i + 1) as f64 * 0.5)).collect();
        let boxes = vec![IVector::new(vec![Interval::ONE, Interval::ZERO]); 4];
        let traj = TrajectoryEnclosure::from_steps("const", IVector::zeros(0), spans, boxes);
        let m = Dyadic { num: 3, log2_den: 2 };
        let t = segment_time(&traj, Integrand::Power { coord: 0, m }).unwrap();
        assert!(t.contains(2.0) && t.width() < 1e-14);
        assert_eq!(total_time(Interval::ONE, Interval::new(0.0, 0.5), TimeRole::Arrival).value, Interval::new(1.0, 1.5));
    }

    #[test]
    fn time_below_level_counts_straddling_steps_once() {
        let spans: Vec<Interval> = (0..4).map(|i| Interval::new(i as f64, (i + 1) as f64)).collect();
        let xs = [(0.8, 0.9), (0.4, 0.6), (0.2, 0.3), (0.1, 0.2)];
        let boxes = xs.iter().map(|&(a, b)| IVector::new(vec![Interval::new(a, b)])).collect();
        let traj = TrajectoryEnclosure::from_steps("steps", IVector::zeros(0), spans, boxes);
        let one = Dyadic { num: 1, log2_den: 0 };
        let t = segment_time_below(&traj, Integrand::Power { coord: 0, m: one }, 0.5).unwrap();
        assert!((t.lo() - 0.3).abs() < 1e-12 && (t.hi() - 1.0).abs() < 1e-12);
    }
}
