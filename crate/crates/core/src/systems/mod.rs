//! Parameterized vector fields, time-scale factors and the built-in systems.

mod builtin;
mod tape;
mod taylor;

pub use builtin::{
    canard_system, cubic_wave_system, quintic_wave_system, system_by_id, CanardPair, CanardField,
    CubicWave, LinearField, QuinticWave,
};
pub use tape::{Expr, Node, Tape, TapeBuilder};
pub use taylor::TaylorEngine;

use crate::error::{Error, Result};
use crate::interval::{IMatrix, IVector, Interval};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// `x' = f(x, μ)` with interval extensions of `f` and its Jacobians.
pub trait ParamVectorField: Send + Sync + fmt::Debug {
    fn id(&self) -> &str;
    fn state_dim(&self) -> usize;
    fn param_dim(&self) -> usize;
    fn eval(&self, x: &IVector, mu: &IVector) -> IVector;
    fn jacobian_x(&self, x: &IVector, mu: &IVector) -> IMatrix;
    fn jacobian_mu(&self, x: &IVector, mu: &IVector) -> IMatrix;

    /// Straight-line program over `(x, μ)` used for Taylor coefficients.
    fn tape(&self) -> Option<&Tape> {
        None
    }
}

/// Rational exponent `num / 2^log2_den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dyadic {
    pub num: u32,
    pub log2_den: u32,
}

impl Dyadic {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / (1u64 << self.log2_den) as f64
    }

    /// Enclosure of the exponent as an interval (exact).
    pub fn interval(self) -> Interval {
        Interval::point(self.to_f64())
    }

    /// `x^self` for `x ≥ 0`.
    pub fn pow(self, x: Interval) -> Result<Interval> {
        x.pow_dyadic(self.num, self.log2_den)
    }

    pub fn parse(s: &str) -> Result<Dyadic> {
        let bad = || Error::Config(format!("exponent {s:?} is not p/2^k"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let num: u32 = p.parse().map_err(|_| bad())?;
        let den: u64 = q.parse().map_err(|_| bad())?;
        if den == 0 || !den.is_power_of_two() {
            return Err(bad());
        }
        Ok(Dyadic {
            num,
            log2_den: den.trailing_zeros(),
        })
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, 1u64 << self.log2_den)
    }
}

/// The reparametrization `dτ/dt = T(x)`, stored through `w = dt/dτ = 1/T`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeScaleFactor {
    /// `T ≡ 1`.
    Identity,
    /// `T = x_coord^(-m)`, so `dt/dτ = x_coord^m` on `x_coord ≥ 0`.
    Power { coord: usize, m: Dyadic },
    /// `dt/dτ = 1 − x_coord²`.
    OneMinusSquare { coord: usize },
}

impl TimeScaleFactor {
    /// Enclosure of `dt/dτ` over the box.
    pub fn eval_dt_dtau(&self, x: &IVector) -> Result<Interval> {
        match *self {
            TimeScaleFactor::Identity => Ok(Interval::ONE),
            TimeScaleFactor::Power { coord, m } => m.pow(x[coord]),
            TimeScaleFactor::OneMinusSquare { coord } => Ok(Interval::ONE - x[coord].sqr()),
        }
    }

    /// Enclosure of `T(x)`; fails where `T` is singular.
    pub fn eval_t(&self, x: &IVector) -> Result<Interval> {
        self.eval_dt_dtau(x)?.recip()
    }

    /// Gradient of `T` over the box.
    pub fn grad_t(&self, x: &IVector) -> Result<IVector> {
        let mut g = IVector::zeros(x.len());
        match *self {
            TimeScaleFactor::Identity => {}
            TimeScaleFactor::Power { coord, m } => {
                // d/dx x^(-m) = -m x^(-m) / x
                let t = self.eval_t(x)?;
                g[coord] = -(m.interval() * t.checked_div(&x[coord])?);
            }
            TimeScaleFactor::OneMinusSquare { coord } => {
                // d/dx 1/(1-x²) = 2x / (1-x²)²
                let w = self.eval_dt_dtau(x)?;
                g[coord] = (x[coord] * 2.0).checked_div(&w.sqr())?;
            }
        }
        Ok(g)
    }

    /// Sign of `T` on the box, if constant and nonzero.
    pub fn sign(&self, x: &IVector) -> Option<i8> {
        let w = self.eval_dt_dtau(x).ok()?;
        if w.is_positive() {
            Some(1)
        } else if w.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn null_description(&self) -> String {
        match *self {
            TimeScaleFactor::Identity => "empty".into(),
            TimeScaleFactor::Power { coord, m } => {
                format!("x{coord} = 0 (T = x{coord}^(-{m}) is singular there)")
            }
            TimeScaleFactor::OneMinusSquare { coord } => {
                format!("x{coord} = ±1 (dt/dτ = 1 - x{coord}² vanishes)")
            }
        }
    }
}

/// Regular field `T⁻¹f` together with the factor and, optionally, `f`.
#[derive(Clone, Debug)]
pub struct DesingularizedField {
    pub base: Arc<dyn ParamVectorField>,
    pub origin: Option<Arc<dyn ParamVectorField>>,
    pub factor: TimeScaleFactor,
}

impl DesingularizedField {
    pub fn id(&self) -> &str {
        self.base.id()
    }

    pub fn state_dim(&self) -> usize {
        self.base.state_dim()
    }

    pub fn param_dim(&self) -> usize {
        self.base.param_dim()
    }
}

/// Wrap a regular field whose reparametrization by `factor` recovers the
/// original dynamics.
pub fn desingularize(
    field: Arc<dyn ParamVectorField>,
    factor: TimeScaleFactor,
) -> DesingularizedField {
    let origin: Arc<dyn ParamVectorField> = Arc::new(OriginField {
        base: field.clone(),
        factor,
        id: format!("{}-origin", field.id()),
    });
    DesingularizedField {
        base: field,
        origin: Some(origin),
        factor,
    }
}

/// `f = T · (T⁻¹f)`, defined away from the singular set of `T`.
#[derive(Debug)]
struct OriginField {
    base: Arc<dyn ParamVectorField>,
    factor: TimeScaleFactor,
    id: String,
}

impl OriginField {
    fn t(&self, x: &IVector) -> Interval {
        self.factor.eval_t(x).unwrap_or(Interval::ENTIRE)
    }
}

impl ParamVectorField for OriginField {
    fn id(&self) -> &str {
        &self.id
    }

    fn state_dim(&self) -> usize {
        self.base.state_dim()
    }

    fn param_dim(&self) -> usize {
        self.base.param_dim()
    }

    fn eval(&self, x: &IVector, mu: &IVector) -> IVector {
        self.base.eval(x, mu).scale(self.t(x))
    }

    fn jacobian_x(&self, x: &IVector, mu: &IVector) -> IMatrix {
        let t = self.t(x);
        let g = self
            .factor
            .grad_t(x)
            .unwrap_or_else(|_| IVector::new(vec![Interval::ENTIRE; x.len()]));
        let f = self.base.eval(x, mu);
        let j = self.base.jacobian_x(x, mu).scale(t);
        IMatrix::from_fn(j.rows(), j.cols(), |r, c| j[(r, c)] + f[r] * g[c])
    }

    fn jacobian_mu(&self, x: &IVector, mu: &IVector) -> IMatrix {
        self.base.jacobian_mu(x, mu).scale(self.t(x))
    }
}

/// Check that `f` vanishes somewhere in the box for parameters `mu`
/// (necessary condition only).
pub fn residual_contains_zero(field: &dyn ParamVectorField, x: &IVector, mu: &IVector) -> bool {
    field.eval(x, mu).iter().all(|v| v.contains(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_parsing() {
        let m = Dyadic::parse("3/4").unwrap();
        assert_eq!(m, Dyadic { num: 3, log2_den: 2 });
        assert_eq!(m.to_f64(), 0.75);
        assert!(Dyadic::parse("2/3").is_err());
        assert_eq!(Dyadic::parse("2").unwrap().to_f64(), 2.0);
    }

    #[test]
    fn canard_factor_values() {
        let f = TimeScaleFactor::OneMinusSquare { coord: 0 };
        let at = |b: f64| IVector::from_points(&[b, 0.0]);
        assert!(f.eval_dt_dtau(&at(1.0)).unwrap().contains(0.0));
        assert!(f.eval_dt_dtau(&at(0.5)).unwrap().contains(0.75));
        assert!(f.eval_t(&at(1.0)).is_err());
    }

    #[test]
    fn power_factor_sign() {
        let f = TimeScaleFactor::Power {
            coord: 0,
            m: Dyadic { num: 3, log2_den: 2 },
        };
        let b = IVector::new(vec![Interval::new(0.1, 0.2), Interval::ENTIRE]);
        assert_eq!(f.sign(&b), Some(1));
        assert!(f.eval_t(&b).unwrap().is_positive());
        let z = IVector::new(vec![Interval::new(-0.1, 0.2), Interval::ZERO]);
        assert_eq!(f.sign(&z), None);
    }
}
