use crate::interval::Interval;
use serde::{Deserialize, Serialize};

/// One operation of a straight-line program.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Var(usize),
    Const(Interval),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Neg(usize),
    Sqr(usize),
}

/// Straight-line program for a polynomial vector field.
///
/// Variables `0..n` are the state, `n..n+k` the parameters. Each output is
/// the index of the node computing the corresponding component of `f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tape {
    n_vars: usize,
    nodes: Vec<Node>,
    outputs: Vec<usize>,
}

/// Handle to a node while a tape is being built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expr(usize);

impl Tape {
    pub fn builder(n_vars: usize) -> TapeBuilder {
        TapeBuilder {
            nodes: (0..n_vars).map(Node::Var).collect(),
            n_vars,
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Plain interval evaluation.
    pub fn eval(&self, vars: &[Interval]) -> Vec<Interval> {
        assert_eq!(vars.len(), self.n_vars, "tape arity");
        let mut v: Vec<Interval> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let x = match *node {
                Node::Var(i) => vars[i],
                Node::Const(c) => c,
                Node::Add(a, b) => v[a] + v[b],
                Node::Sub(a, b) => v[a] - v[b],
                Node::Mul(a, b) => v[a] * v[b],
                Node::Neg(a) => -v[a],
                Node::Sqr(a) => v[a].sqr(),
            };
            v.push(x);
        }
        self.outputs.iter().map(|&o| v[o]).collect()
    }
}

pub struct TapeBuilder {
    nodes: Vec<Node>,
    n_vars: usize,
}

impl TapeBuilder {
    pub fn var(&self, i: usize) -> Expr {
        assert!(i < self.n_vars, "variable index out of range");
        Expr(i)
    }

    fn push(&mut self, n: Node) -> Expr {
        self.nodes.push(n);
        Expr(self.nodes.len() - 1)
    }

    pub fn constant(&mut self, c: Interval) -> Expr {
        self.push(Node::Const(c))
    }

    pub fn add(&mut self, a: Expr, b: Expr) -> Expr {
        self.push(Node::Add(a.0, b.0))
    }

    pub fn sub(&mut self, a: Expr, b: Expr) -> Expr {
        self.push(Node::Sub(a.0, b.0))
    }

    pub fn mul(&mut self, a: Expr, b: Expr) -> Expr {
        self.push(Node::Mul(a.0, b.0))
    }

    pub fn neg(&mut self, a: Expr) -> Expr {
        self.push(Node::Neg(a.0))
    }

    pub fn sqr(&mut self, a: Expr) -> Expr {
        self.push(Node::Sqr(a.0))
    }

    pub fn finish(self, outputs: &[Expr]) -> Tape {
        Tape {
            n_vars: self.n_vars,
            nodes: self.nodes,
            outputs: outputs.iter().map(|e| e.0).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_and_evaluates() {
        let mut t = Tape::builder(2);
        let (x, y) = (t.var(0), t.var(1));
        let s = t.sqr(x);
        let p = t.mul(s, y);
        let one = t.constant(Interval::ONE);
        let out = t.sub(p, one);
        let tape = t.finish(&[out]);
        let v = tape.eval(&[Interval::point(2.0), Interval::point(3.0)]);
        assert_eq!(v[0], Interval::point(11.0));
    }
}
