use super::tape::Tape;
use super::{desingularize, DesingularizedField, Dyadic, ParamVectorField, TimeScaleFactor};
use crate::error::{Error, Result};
use crate::interval::{IMatrix, IVector, Interval};
use std::sync::Arc;

/// Exponent of the degenerate diffusion in the wave systems.
pub const WAVE_EXPONENT: Dyadic = Dyadic {
    num: 3,
    log2_den: 2,
};

/// `φ' = ψ, ψ' = −cψ − φ(1−φ)(φ−a)` with parameter `c`.
#[derive(Debug, Clone)]
pub struct CubicWave {
    pub a: Interval,
    tape: Tape,
}

impl CubicWave {
    pub fn new(a: Interval) -> Self {
        let mut t = Tape::builder(3);
        let (phi, psi, c) = (t.var(0), t.var(1), t.var(2));
        let one = t.constant(Interval::ONE);
        let ac = t.constant(a);
        let one_minus = t.sub(one, phi);
        let minus_a = t.sub(phi, ac);
        let g1 = t.mul(phi, one_minus);
        let g = t.mul(g1, minus_a);
        let damp = t.mul(c, psi);
        let nd = t.neg(damp);
        let out = t.sub(nd, g);
        let tape = t.finish(&[psi, out]);
        CubicWave { a, tape }
    }

    fn nonlinearity(&self, phi: Interval) -> Interval {
        phi * (Interval::ONE - phi) * (phi - self.a)
    }
}

impl ParamVectorField for CubicWave {
    fn id(&self) -> &str {
        "cubic"
    }

    fn state_dim(&self) -> usize {
        2
    }

    fn param_dim(&self) -> usize {
        1
    }

    fn eval(&self, x: &IVector, mu: &IVector) -> IVector {
        let (phi, psi, c) = (x[0], x[1], mu[0]);
        IVector::new(vec![psi, -(c * psi) - self.nonlinearity(phi)])
    }

    fn jacobian_x(&self, x: &IVector, mu: &IVector) -> IMatrix {
        let (phi, c) = (x[0], mu[0]);
        // -d/dφ [φ(1−φ)(φ−a)] = 3φ² − 2(1+a)φ + a
        let d = phi.sqr() * 3.0 - (Interval::ONE + self.a) * phi * 2.0 + self.a;
        IMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Interval::ZERO,
            (0, 1) => Interval::ONE,
            (1, 0) => d,
            _ => -c,
        })
    }

    fn jacobian_mu(&self, x: &IVector, _mu: &IVector) -> IMatrix {
        IMatrix::from_fn(2, 1, |i, _| if i == 0 { Interval::ZERO } else { -x[1] })
    }

    fn tape(&self) -> Option<&Tape> {
        Some(&self.tape)
    }
}

/// `φ' = ψ, ψ' = −cψ − φ(1−φ²)(φ²−a²)` with parameter `c`.
#[derive(Debug, Clone)]
pub struct QuinticWave {
    pub a: Interval,
    tape: Tape,
}

impl QuinticWave {
    pub fn new(a: Interval) -> Self {
        let mut t = Tape::builder(3);
        let (phi, psi, c) = (t.var(0), t.var(1), t.var(2));
        let one = t.constant(Interval::ONE);
        let a2 = t.constant(a.sqr());
        let p2 = t.sqr(phi);
        let one_minus = t.sub(one, p2);
        let minus_a2 = t.sub(p2, a2);
        let g1 = t.mul(phi, one_minus);
        let g = t.mul(g1, minus_a2);
        let damp = t.mul(c, psi);
        let nd = t.neg(damp);
        let out = t.sub(nd, g);
        let tape = t.finish(&[psi, out]);
        QuinticWave { a, tape }
    }

    fn nonlinearity(&self, phi: Interval) -> Interval {
        let p2 = phi.sqr();
        phi * (Interval::ONE - p2) * (p2 - self.a.sqr())
    }
}

impl ParamVectorField for QuinticWave {
    fn id(&self) -> &str {
        "quintic"
    }

    fn state_dim(&self) -> usize {
        2
    }

    fn param_dim(&self) -> usize {
        1
    }

    fn eval(&self, x: &IVector, mu: &IVector) -> IVector {
        let (phi, psi, c) = (x[0], x[1], mu[0]);
        IVector::new(vec![psi, -(c * psi) - self.nonlinearity(phi)])
    }

    fn jacobian_x(&self, x: &IVector, mu: &IVector) -> IMatrix {
        let (phi, c) = (x[0], mu[0]);
        let a2 = self.a.sqr();
        let p2 = phi.sqr();
        // -d/dφ [−φ⁵ + (1+a²)φ³ − a²φ] = 5φ⁴ − 3(1+a²)φ² + a²
        let d = p2.sqr() * 5.0 - (Interval::ONE + a2) * p2 * 3.0 + a2;
        IMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Interval::ZERO,
            (0, 1) => Interval::ONE,
            (1, 0) => d,
            _ => -c,
        })
    }

    fn jacobian_mu(&self, x: &IVector, _mu: &IVector) -> IMatrix {
        IMatrix::from_fn(2, 1, |i, _| if i == 0 { Interval::ZERO } else { -x[1] })
    }

    fn tape(&self) -> Option<&Tape> {
        Some(&self.tape)
    }
}

/// Desingularized slow flow of the autocatalator with parameter `μ`:
/// `b' = (1+b²)²(μ(5/2+c) − b), c' = (b−c)(1−b²)`.
#[derive(Debug, Clone)]
pub struct CanardField {
    tape: Tape,
}

impl Default for CanardField {
    fn default() -> Self {
        Self::new()
    }
}

impl CanardField {
    pub fn new() -> Self {
        let mut t = Tape::builder(3);
        let (b, c, mu) = (t.var(0), t.var(1), t.var(2));
        let one = t.constant(Interval::ONE);
        let five_halves = t.constant(Interval::point(2.5));
        let s = t.sqr(b);
        let u = t.add(one, s);
        let u2 = t.sqr(u);
        let shifted = t.add(five_halves, c);
        let k = t.mul(mu, shifted);
        let d = t.sub(k, b);
        let out0 = t.mul(u2, d);
        let bc = t.sub(b, c);
        let w = t.sub(one, s);
        let out1 = t.mul(bc, w);
        CanardField {
            tape: t.finish(&[out0, out1]),
        }
    }
}

impl ParamVectorField for CanardField {
    fn id(&self) -> &str {
        "canard"
    }

    fn state_dim(&self) -> usize {
        2
    }

    fn param_dim(&self) -> usize {
        1
    }

    fn eval(&self, x: &IVector, mu: &IVector) -> IVector {
        let (b, c, m) = (x[0], x[1], mu[0]);
        let s = b.sqr();
        let u = Interval::ONE + s;
        IVector::new(vec![
            u.sqr() * (m * (c + 2.5) - b),
            (b - c) * (Interval::ONE - s),
        ])
    }

    fn jacobian_x(&self, x: &IVector, mu: &IVector) -> IMatrix {
        let (b, c, m) = (x[0], x[1], mu[0]);
        let s = b.sqr();
        let u = Interval::ONE + s;
        let d = m * (c + 2.5) - b;
        let j00 = b * u * d * 4.0 - u.sqr();
        let j01 = u.sqr() * m;
        let j10 = (Interval::ONE - s) - (b - c) * b * 2.0;
        let j11 = s - 1.0;
        IMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => j00,
            (0, 1) => j01,
            (1, 0) => j10,
            _ => j11,
        })
    }

    fn jacobian_mu(&self, x: &IVector, _mu: &IVector) -> IMatrix {
        let (b, c) = (x[0], x[1]);
        let u = Interval::ONE + b.sqr();
        IMatrix::from_fn(2, 1, |i, _| if i == 0 { u.sqr() * (c + 2.5) } else { Interval::ZERO })
    }

    fn tape(&self) -> Option<&Tape> {
        Some(&self.tape)
    }
}

/// Affine field `x' = A x + B μ`.
#[derive(Debug, Clone)]
pub struct LinearField {
    pub a: IMatrix,
    pub b: IMatrix,
    id: String,
    tape: Tape,
}

impl LinearField {
    /// `x' = A x` with no parameters.
    pub fn new(a: IMatrix) -> Self {
        let n = a.rows();
        Self::with_params(a, IMatrix::zeros(n, 0))
    }

    pub fn with_params(a: IMatrix, b: IMatrix) -> Self {
        assert!(a.is_square() && b.rows() == a.rows(), "LinearField shapes");
        let n = a.rows();
        let k = b.cols();
        let mut t = Tape::builder(n + k);
        let mut outs = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = t.constant(Interval::ZERO);
            for j in 0..n + k {
                let coef = if j < n { a[(i, j)] } else { b[(i, j - n)] };
                if coef == Interval::ZERO {
                    continue;
                }
                let cexpr = t.constant(coef);
                let v = t.var(j);
                let p = t.mul(cexpr, v);
                acc = t.add(acc, p);
            }
            outs.push(acc);
        }
        LinearField {
            tape: t.finish(&outs),
            id: "linear".into(),
            a,
            b,
        }
    }

    pub fn from_f64(n: usize, a: &[f64]) -> Self {
        Self::new(IMatrix::from_f64(n, n, a))
    }
}

impl ParamVectorField for LinearField {
    fn id(&self) -> &str {
        &self.id
    }

    fn state_dim(&self) -> usize {
        self.a.rows()
    }

    fn param_dim(&self) -> usize {
        self.b.cols()
    }

    fn eval(&self, x: &IVector, mu: &IVector) -> IVector {
        let ax = self.a.mul_vec(x).expect("state length");
        if self.b.cols() == 0 {
            return ax;
        }
        ax.add(&self.b.mul_vec(mu).expect("param length"))
            .expect("same length")
    }

    fn jacobian_x(&self, _x: &IVector, _mu: &IVector) -> IMatrix {
        self.a.clone()
    }

    fn jacobian_mu(&self, _x: &IVector, _mu: &IVector) -> IMatrix {
        self.b.clone()
    }

    fn tape(&self) -> Option<&Tape> {
        Some(&self.tape)
    }
}

pub fn cubic_wave_system(a: Interval) -> DesingularizedField {
    desingularize(
        Arc::new(CubicWave::new(a)),
        TimeScaleFactor::Power {
            coord: 0,
            m: WAVE_EXPONENT,
        },
    )
}

pub fn quintic_wave_system(a: Interval) -> DesingularizedField {
    desingularize(
        Arc::new(QuinticWave::new(a)),
        TimeScaleFactor::Power {
            coord: 0,
            m: WAVE_EXPONENT,
        },
    )
}

/// The reduced (singular) canard flow and its desingularization.
#[derive(Debug, Clone)]
pub struct CanardPair {
    pub reduced: Arc<dyn ParamVectorField>,
    pub desing: DesingularizedField,
    /// Parameter set `{μ}` to use with both fields.
    pub mu: IVector,
}

pub fn canard_system(mu: Interval) -> CanardPair {
    let desing = desingularize(
        Arc::new(CanardField::new()),
        TimeScaleFactor::OneMinusSquare { coord: 0 },
    );
    CanardPair {
        reduced: desing.origin.clone().expect("desingularize sets origin"),
        desing,
        mu: IVector::new(vec![mu]),
    }
}

/// Built-in system by CLI identifier. `a` is the wave parameter and is
/// ignored by the canard system, whose `μ` enters as a parameter.
pub fn system_by_id(id: &str, a: Interval) -> Result<DesingularizedField> {
    match id {
        "cubic" => Ok(cubic_wave_system(a)),
        "quintic" => Ok(quintic_wave_system(a)),
        "canard" => Ok(canard_system(Interval::point(0.2)).desing),
        other => Err(Error::Config(format!("unknown system {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &[f64]) -> IVector {
        IVector::from_points(x)
    }

    fn a03() -> Interval {
        Interval::from_decimal("0.3").unwrap()
    }

    #[test]
    fn cubic_equilibria_and_jacobian() {
        let f = CubicWave::new(a03());
        let c = pt(&[0.28]);
        for e in [[0.0, 0.0], [1.0, 0.0]] {
            let v = f.eval(&pt(&e), &c);
            assert!(v[0].contains(0.0) && v[1].contains(0.0));
        }
        let j = f.jacobian_x(&pt(&[0.0, 0.0]), &c);
        assert!(j[(1, 0)].contains(0.3) && j[(1, 1)].contains(-0.28));
        assert_eq!(j[(0, 1)], Interval::ONE);
    }

    #[test]
    fn quintic_is_odd() {
        let f = QuinticWave::new(a03());
        let c = pt(&[0.1]);
        let v = f.eval(&pt(&[0.4, 0.2]), &c);
        let w = f.eval(&pt(&[-0.4, -0.2]), &c);
        assert!(v[0].intersects(&(-w[0])) && v[1].intersects(&(-w[1])));
        let j = f.jacobian_x(&pt(&[0.0, 0.0]), &c);
        assert!(j[(1, 0)].contains(0.09));
    }

    #[test]
    fn canard_fold_point() {
        let f = CanardField::new();
        let mu = IVector::new(vec![Interval::from_decimal("0.2").unwrap()]);
        let v = f.eval(&pt(&[1.0, 2.5]), &mu);
        assert!(v[0].contains(0.0) && v[1].contains(0.0));
        let j = f.jacobian_x(&pt(&[1.0, 2.5]), &mu);
        assert!(j[(0, 0)].contains(-4.0));
        assert!(j[(0, 1)].contains(0.8));
        assert!(j[(1, 0)].contains(3.0));
        assert!(j[(1, 1)].contains(0.0));
    }

    #[test]
    fn tapes_agree_with_eval() {
        let a = a03();
        let fields: Vec<Box<dyn ParamVectorField>> = vec![
            Box::new(CubicWave::new(a)),
            Box::new(QuinticWave::new(a)),
            Box::new(CanardField::new()),
            Box::new(LinearField::with_params(
                IMatrix::from_f64(2, 2, &[1.0, 2.0, -0.5, 0.25]),
                IMatrix::from_f64(2, 1, &[1.0, -1.0]),
            )),
        ];
        for f in &fields {
            let x = pt(&[0.37, -0.21]);
            let mu = pt(&[0.3]);
            let v = f.eval(&x, &mu);
            let t = f.tape().unwrap().eval(x.concat(&mu).as_slice());
            for i in 0..2 {
                assert!(v[i].intersects(&t[i]), "{} component {i}", f.id());
            }
        }
    }
}
