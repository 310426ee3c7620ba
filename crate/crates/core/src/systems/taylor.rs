//! Taylor coefficients of solutions of autonomous polynomial ODEs.
//!
//! For `z' = F(z)` with `F` given by a [`Tape`] whose trailing variables are
//! constant parameters, the normalized coefficients `z_[j] = z^(j)(0)/j!`
//! follow from the Cauchy-product recurrences of each node. The dual variant
//! also carries `∂z_[j]/∂z(0)`.

use super::tape::{Node, Tape};
use crate::interval::Interval;

pub struct TaylorEngine {
    nodes: Vec<Node>,
    outputs: Vec<usize>,
    n_vars: usize,
    max_order: usize,
    time_const: Vec<bool>,
    inv: Vec<Interval>,
    val: Vec<Interval>,
    grad: Vec<Interval>,
}

impl TaylorEngine {
    /// Engine for coefficients up to `max_order` inclusive.
    pub fn new(tape: &Tape, max_order: usize) -> Self {
        let nodes = tape.nodes().to_vec();
        let n_state = tape.outputs().len();
        let n_vars = tape.n_vars();
        let mut time_const = Vec::with_capacity(nodes.len());
        for node in &nodes {
            let c = match *node {
                Node::Var(i) => i >= n_state,
                Node::Const(_) => true,
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
                    time_const[a] && time_const[b]
                }
                Node::Neg(a) | Node::Sqr(a) => time_const[a],
            };
            time_const.push(c);
        }
        let stride = max_order + 1;
        let inv = (1..=stride)
            .map(|j| Interval::ONE.checked_div(&Interval::point(j as f64)).expect("j ≥ 1"))
            .collect();
        TaylorEngine {
            val: vec![Interval::ZERO; nodes.len() * stride],
            grad: vec![Interval::ZERO; nodes.len() * stride * n_vars],
            outputs: tape.outputs().to_vec(),
            nodes,
            n_vars,
            max_order,
            time_const,
            inv,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_state(&self) -> usize {
        self.outputs.len()
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    #[inline]
    fn at(&self, node: usize, j: usize) -> usize {
        node * (self.max_order + 1) + j
    }

    /// Coefficient `z_[j]` of variable `var` from the last run.
    #[inline]
    pub fn coeff(&self, var: usize, j: usize) -> Interval {
        self.val[self.at(var, j)]
    }

    /// `∂z_[j]_var / ∂z_q(0)` from the last dual run.
    #[inline]
    pub fn coeff_grad(&self, var: usize, j: usize, q: usize) -> Interval {
        self.grad[self.at(var, j) * self.n_vars + q]
    }

    /// Coefficients up to `order` for the initial value `z0`.
    pub fn series(&mut self, z0: &[Interval], order: usize) {
        self.run(z0, order, false);
    }

    /// As [`series`](Self::series) with first derivatives in `z0`.
    pub fn series_dual(&mut self, z0: &[Interval], order: usize) {
        self.run(z0, order, true);
    }

    fn run(&mut self, z0: &[Interval], order: usize, dual: bool) {
        assert!(order <= self.max_order, "order above engine capacity");
        assert_eq!(z0.len(), self.n_vars, "initial value arity");
        let d = self.n_vars;
        let n_state = self.n_state();
        for (i, &z) in z0.iter().enumerate() {
            let k = self.at(i, 0);
            self.val[k] = z;
            if dual {
                for q in 0..d {
                    self.grad[k * d + q] = if q == i { Interval::ONE } else { Interval::ZERO };
                }
            }
        }
        for j in 0..=order {
            for node in d..self.nodes.len() {
                if j > 0 && self.time_const[node] {
                    continue;
                }
                self.eval_node(node, j, dual);
            }
            if j < order {
                for i in 0..n_state {
                    let src = self.at(self.outputs[i], j);
                    let dst = self.at(i, j + 1);
                    let s = self.inv[j];
                    self.val[dst] = self.val[src] * s;
                    if dual {
                        for q in 0..d {
                            self.grad[dst * d + q] = self.grad[src * d + q] * s;
                        }
                    }
                }
            }
        }
    }

    fn eval_node(&mut self, node: usize, j: usize, dual: bool) {
        let d = self.n_vars;
        let k = self.at(node, j);
        match self.nodes[node] {
            Node::Var(_) => {}
            Node::Const(c) => {
                self.val[k] = if j == 0 { c } else { Interval::ZERO };
                if dual {
                    for q in 0..d {
                        self.grad[k * d + q] = Interval::ZERO;
                    }
                }
            }
            Node::Add(a, b) | Node::Sub(a, b) => {
                let sub = matches!(self.nodes[node], Node::Sub(..));
                let (ka, kb) = (self.at(a, j), self.at(b, j));
                self.val[k] = if sub {
                    self.val[ka] - self.val[kb]
                } else {
                    self.val[ka] + self.val[kb]
                };
                if dual {
                    for q in 0..d {
                        let (ga, gb) = (self.grad[ka * d + q], self.grad[kb * d + q]);
                        self.grad[k * d + q] = if sub { ga - gb } else { ga + gb };
                    }
                }
            }
            Node::Neg(a) => {
                let ka = self.at(a, j);
                self.val[k] = -self.val[ka];
                if dual {
                    for q in 0..d {
                        self.grad[k * d + q] = -self.grad[ka * d + q];
                    }
                }
            }
            Node::Mul(a, b) => {
                if self.time_const[a] || self.time_const[b] {
                    let (c, x) = if self.time_const[a] { (a, b) } else { (b, a) };
                    let (kc, kx) = (self.at(c, 0), self.at(x, j));
                    let cv = self.val[kc];
                    let xv = self.val[kx];
                    self.val[k] = cv * xv;
                    if dual {
                        for q in 0..d {
                            self.grad[k * d + q] =
                                cv * self.grad[kx * d + q] + self.grad[kc * d + q] * xv;
                        }
                    }
                    return;
                }
                let mut s = Interval::ZERO;
                for i in 0..=j {
                    s += self.val[self.at(a, i)] * self.val[self.at(b, j - i)];
                }
                self.val[k] = s;
                if dual {
                    for q in 0..d {
                        let mut g = Interval::ZERO;
                        for i in 0..=j {
                            let (ka, kb) = (self.at(a, i), self.at(b, j - i));
                            g += self.val[ka] * self.grad[kb * d + q]
                                + self.grad[ka * d + q] * self.val[kb];
                        }
                        self.grad[k * d + q] = g;
                    }
                }
            }
            Node::Sqr(a) => {
                let mut s = Interval::ZERO;
                for i in 0..(j + 1) / 2 {
                    s += self.val[self.at(a, i)] * self.val[self.at(a, j - i)];
                }
                s = s * 2.0;
                if j % 2 == 0 {
                    s += self.val[self.at(a, j / 2)].sqr();
                }
                self.val[k] = s;
                if dual {
                    for q in 0..d {
                        let mut g = Interval::ZERO;
                        for i in 0..=j {
                            let (ka, kb) = (self.at(a, i), self.at(a, j - i));
                            g += self.val[ka] * self.grad[kb * d + q];
                        }
                        self.grad[k * d + q] = g * 2.0;
                    }
                }
            }
        }
    }
}
