//! Property checks shared by the proptest suite and the acceptance run.
//! Each check returns the number of cases examined or the first failure.
#![allow(dead_code)]

use finisig_core::blocks::IsolatingBlock;
use finisig_core::composite::{
    compose, compose_lattice, composite_distance, Lattice, ProfileKind, ProfileSample, Symbol, WaveProfile,
};
use finisig_core::cones::cone_rates;
use finisig_core::covering::{verify_covering, CoveringImage};
use finisig_core::linalg::log_norm_bounds;
use finisig_core::lohner::integrate;
use finisig_core::scenario::Report;
use finisig_core::systems::{desingularize, LinearField, ParamVectorField, TimeScaleFactor};
use finisig_core::{Error, HSet, IMatrix, IVector, Interval, LohnerConfig};
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::sync::Arc;

pub type Outcome = Result<usize, String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn rat(f: f64) -> BigRational {
    BigRational::from_float(f).expect("finite")
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Whether the exact value lies in `x`.
pub fn encloses(x: &Interval, exact: &BigRational) -> bool {
    rat(x.lo()) <= *exact && *exact <= rat(x.hi())
}

// ---------------------------------------------------------------- intervals

#[derive(Clone, Debug)]
pub enum Expr {
    Leaf(i64, i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Sqr(Box<Expr>),
    Neg(Box<Expr>),
}

pub fn random_expr(r: &mut impl Rng, depth: u32) -> Expr {
    if depth == 0 || r.gen_bool(0.25) {
        return Expr::Leaf(r.gen_range(-20..=20), r.gen_range(1..=16));
    }
    let op = r.gen_range(0..6);
    let a = Box::new(random_expr(r, depth - 1));
    if op >= 4 {
        return if op == 4 { Expr::Sqr(a) } else { Expr::Neg(a) };
    }
    let b = Box::new(random_expr(r, depth - 1));
    match op {
        0 => Expr::Add(a, b),
        1 => Expr::Sub(a, b),
        2 => Expr::Mul(a, b),
        _ => Expr::Div(a, b),
    }
}

/// Exact value, `None` on division by zero.
pub fn exact(e: &Expr) -> Option<BigRational> {
    Some(match e {
        Expr::Leaf(p, q) => ratio(*p, *q),
        Expr::Add(a, b) => exact(a)? + exact(b)?,
        Expr::Sub(a, b) => exact(a)? - exact(b)?,
        Expr::Mul(a, b) => exact(a)? * exact(b)?,
        Expr::Div(a, b) => {
            let d = exact(b)?;
            if d.is_zero() {
                return None;
            }
            exact(a)? / d
        }
        Expr::Sqr(a) => {
            let v = exact(a)?;
            &v * &v
        }
        Expr::Neg(a) => -exact(a)?,
    })
}

/// Interval value; every intermediate result is checked for `lo ≤ hi`.
pub fn enclose(e: &Expr) -> Result<Option<Interval>, String> {
    let ordered = |x: Interval| {
        if x.lo() <= x.hi() {
            Ok(Some(x))
        } else {
            Err(format!("lo > hi in {x:?}"))
        }
    };
    let two = |a: &Expr, b: &Expr| -> Result<Option<(Interval, Interval)>, String> {
        Ok(match (enclose(a)?, enclose(b)?) {
            (Some(x), Some(y)) => Some((x, y)),
            _ => None,
        })
    };
    match e {
        Expr::Leaf(p, q) => match Interval::point(*p as f64).checked_div(&Interval::point(*q as f64)) {
            Ok(x) => ordered(x),
            Err(err) => Err(err.to_string()),
        },
        Expr::Add(a, b) => two(a, b)?.map_or(Ok(None), |(x, y)| ordered(x + y)),
        Expr::Sub(a, b) => two(a, b)?.map_or(Ok(None), |(x, y)| ordered(x - y)),
        Expr::Mul(a, b) => two(a, b)?.map_or(Ok(None), |(x, y)| ordered(x * y)),
        // Division by an interval containing zero is refused, not guessed.
        Expr::Div(a, b) => two(a, b)?.map_or(Ok(None), |(x, y)| match x.checked_div(&y) {
            Ok(v) => ordered(v),
            Err(_) => Ok(None),
        }),
        Expr::Sqr(a) => enclose(a)?.map_or(Ok(None), |x| ordered(x.sqr())),
        Expr::Neg(a) => enclose(a)?.map_or(Ok(None), |x| ordered(-x)),
    }
}

pub fn check_expression(e: &Expr) -> Result<bool, String> {
    let iv = enclose(e)?;
    match (exact(e), iv) {
        (Some(v), Some(x)) => {
            if encloses(&x, &v) {
                Ok(true)
            } else {
                Err(format!("{e:?}: {x:?} misses {v}"))
            }
        }
        (None, Some(x)) => Err(format!("{e:?}: division by zero evaluated to {x:?}")),
        _ => Ok(false),
    }
}

/// Random expression trees; returns how many were evaluated.
pub fn interval_trees(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let mut evaluated = 0;
    for _ in 0..cases {
        let e = random_expr(&mut r, 5);
        if check_expression(&e)? {
            evaluated += 1;
        }
    }
    if evaluated * 2 < cases {
        return Err(format!("only {evaluated} of {cases} trees were defined"));
    }
    Ok(cases)
}

// ---------------------------------------------------------------- log norms

pub fn random_matrix(r: &mut impl Rng, n: usize) -> IMatrix {
    let v: Vec<f64> = (0..n * n).map(|_| r.gen_range(-3.0..3.0)).collect();
    IMatrix::from_f64(n, n, &v)
}

pub fn unit_vector(r: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if s > 1e-3 {
            return v.iter().map(|x| x / s).collect();
        }
    }
}

/// `m_l ≤ xᵀAx/xᵀx ≤ l` for the vectors given and `m_l(A) = −l(−A)`.
pub fn check_log_norm(a: &IMatrix, xs: &[Vec<f64>]) -> Result<(), String> {
    let b = log_norm_bounds(a);
    let neg = IMatrix::from_fn(a.rows(), a.cols(), |i, j| -a[(i, j)]);
    let bn = log_norm_bounds(&neg);
    // m_l(A) = −l(−A): the two enclosures must meet.
    if !b.ml_lower.intersects(&-bn.l_upper) {
        return Err(format!("m_l(A) ∈ {:?} but −l(−A) ∈ {:?}", b.ml_lower, -bn.l_upper));
    }
    for x in xs {
        let xi = IVector::from_points(x);
        let q = xi.dot(&a.mul_vec(&xi).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let norm2 = xi.dot(&xi).map_err(|e| e.to_string())?;
        let rq = q.checked_div(&norm2).map_err(|e| e.to_string())?;
        if !(b.ml_lower.lo() <= rq.hi() && rq.lo() <= b.l_upper.hi()) {
            return Err(format!("Rayleigh quotient {rq:?} outside [{:?}, {:?}]", b.ml_lower, b.l_upper));
        }
    }
    Ok(())
}

pub fn log_norms(matrices: usize, vectors: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    for n in [2, 3] {
        for _ in 0..matrices {
            let a = random_matrix(&mut r, n);
            let xs: Vec<Vec<f64>> = (0..vectors).map(|_| unit_vector(&mut r, n)).collect();
            check_log_norm(&a, &xs)?;
        }
    }
    Ok(2 * matrices)
}

// ---------------------------------------------------------------- integrator

/// Bounds of `e^x` from the Taylor series with a remainder bound.
pub fn exp_bounds(x: &BigRational) -> (BigRational, BigRational) {
    let n_terms = 60;
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for n in 0..n_terms {
        sum += &term;
        term = term * x / BigRational::from_integer(BigInt::from(n + 1));
    }
    // |R| ≤ |x|^N/N! · e^{|x|} and e^{|x|} ≤ 3^{⌈|x|⌉}.
    let k = x.abs().ceil().to_integer().to_u32().unwrap_or(64);
    let rem = term.abs() * BigRational::from_integer(BigInt::from(3u32).pow(k));
    (&sum - &rem, &sum + &rem)
}

pub struct LinearCase {
    pub p: [[i64; 2]; 2],
    pub d: [i64; 2],
    pub x0: [i64; 2],
}

impl LinearCase {
    pub fn random(r: &mut impl Rng) -> LinearCase {
        let (k, m) = (r.gen_range(-1..=1), r.gen_range(-1..=1));
        LinearCase {
            // [[1, k], [0, 1]] · [[1, 0], [m, 1]], determinant 1.
            p: [[1 + k * m, k], [m, 1]],
            d: [r.gen_range(-16..=16), r.gen_range(-16..=16)],
            x0: [r.gen_range(-16..=16), r.gen_range(-16..=16)],
        }
    }

    fn p_inv(&self) -> [[i64; 2]; 2] {
        let p = self.p;
        [[p[1][1], -p[0][1]], [-p[1][0], p[0][0]]]
    }

    /// `A = P diag(d/8) P⁻¹`, exact in binary.
    pub fn matrix(&self) -> [f64; 4] {
        let (p, q) = (self.p, self.p_inv());
        let mut a = [0.0; 4];
        for i in 0..2 {
            for j in 0..2 {
                let v: i64 = (0..2).map(|k| p[i][k] * self.d[k] * q[k][j]).sum();
                a[2 * i + j] = v as f64 / 8.0;
            }
        }
        a
    }

    /// Exact bounds of `x(τ) = P e^{Dτ} P⁻¹ x₀` at `τ = 1`.
    pub fn solution(&self) -> Vec<(BigRational, BigRational)> {
        let (p, q) = (self.p, self.p_inv());
        let e: Vec<_> = self.d.iter().map(|&d| exp_bounds(&ratio(d, 8))).collect();
        (0..2)
            .map(|i| {
                let mut lo = BigRational::zero();
                let mut hi = BigRational::zero();
                for k in 0..2 {
                    let c: i64 = (0..2).map(|j| p[i][k] * q[k][j] * self.x0[j]).sum();
                    let c = ratio(c, 16);
                    if c.is_negative() {
                        lo += &c * &e[k].1;
                        hi += &c * &e[k].0;
                    } else {
                        lo += &c * &e[k].0;
                        hi += &c * &e[k].1;
                    }
                }
                (lo, hi)
            })
            .collect()
    }
}

pub fn check_linear_case(case: &LinearCase, cfg: LohnerConfig) -> Result<(), String> {
    let field = desingularize(Arc::new(LinearField::from_f64(2, &case.matrix())), TimeScaleFactor::Identity);
    let x0 = IVector::from_points(&[case.x0[0] as f64 / 16.0, case.x0[1] as f64 / 16.0]);
    let t = integrate(&field, &x0, &IVector::zeros(0), 1.0, cfg).map_err(|e| e.to_string())?;
    let fin = t.final_box();
    for (i, (lo, hi)) in case.solution().iter().enumerate() {
        if !(rat(fin[i].lo()) <= *lo && *hi <= rat(fin[i].hi())) {
            return Err(format!("A = {:?}, x0 = {:?}: x{i}(1) ∉ {:?}", case.matrix(), case.x0, fin[i]));
        }
    }
    Ok(())
}

/// A step far beyond the stability region must fail loudly.
pub fn check_rough_failure() -> Result<(), String> {
    let field = desingularize(Arc::new(LinearField::from_f64(2, &[-60.0, 0.0, 0.0, 1.0])), TimeScaleFactor::Identity);
    let x0 = IVector::from_points(&[1.0, 1.0]);
    match integrate(&field, &x0, &IVector::zeros(0), 4.0, LohnerConfig { order: 4, step: 2.0 }) {
        Err(Error::BlowUp { .. }) => Ok(()),
        Err(e) => Err(format!("unexpected error {e}")),
        Ok(t) => Err(format!("a step of 2.0 for λ = −60 returned {:?}", t.final_box())),
    }
}

pub fn integrator(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let cfg = LohnerConfig { order: 12, step: 0.01 };
    for _ in 0..cases {
        check_linear_case(&LinearCase::random(&mut r), cfg)?;
    }
    check_rough_failure()?;
    Ok(cases)
}

// ---------------------------------------------------------------- blocks, cones

pub fn shipped_reports() -> Vec<Report> {
    let mut paths: Vec<_> = std::fs::read_dir(workspace_root().join("reports"))
        .map(|d| d.filter_map(|e| e.ok().map(|e| e.path())).collect())
        .unwrap_or_default();
    paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
    paths.sort();
    paths
        .iter()
        .map(|p| Report::from_json(&std::fs::read_to_string(p).expect("readable report")).expect("valid report"))
        .collect()
}

/// Faces of a block re-evaluated over the whole face, with the recorded
/// classes.
pub fn check_block_faces(block: &IsolatingBlock, field: &dyn ParamVectorField) -> Result<(), String> {
    block.reverify(field).map_err(|e| e.to_string())?;
    for f in &block.faces {
        let exit = f.kind == finisig_core::blocks::FaceKind::Exit;
        let sign_ok = if exit { f.outward_flow.is_positive() } else { f.outward_flow.is_negative() };
        if !sign_ok || exit != (block.rates[f.coord] > 0.0) {
            return Err(format!("face y{} side {} has flow {:?}", f.coord, f.side, f.outward_flow));
        }
    }
    Ok(())
}

pub fn shipped_blocks() -> Outcome {
    let mut n = 0;
    for rep in shipped_reports() {
        let cfg = rep.config.as_ref().ok_or("report without config")?;
        let field = cfg.field().map_err(|e| e.to_string())?;
        for b in &rep.blocks {
            check_block_faces(&b.block, &*field.base).map_err(|e| format!("{} {}: {e}", rep.scenario, b.name))?;
            n += 1;
        }
    }
    if n == 0 {
        return Err("no shipped blocks found".into());
    }
    Ok(n)
}

/// Rates of `x' = [[λu, ε], [δ, λs]] x` on an axis-aligned box against
/// `μ_s = λs + M|δ|`, `ξ_u = λu − M|ε|`, `μ_ss = λs + |δ|/M`, `ξ_su = λu − |ε|/M`.
pub fn linear_cone_rates(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    for _ in 0..cases {
        let (lu, ls) = (r.gen_range(0.1..3.0), r.gen_range(-3.0..-0.1));
        let (eps, del) = (r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5));
        let m: f64 = r.gen_range(1.0..50.0);
        let field = LinearField::from_f64(2, &[lu, eps, del, ls]);
        let h = HSet::new(
            IVector::zeros(2),
            IMatrix::identity(2),
            1,
            vec![r.gen_range(1e-3..1.0), r.gen_range(1e-3..1.0)],
        )
        .map_err(|e| e.to_string())?;
        let rates = cone_rates(&field, &h, &IVector::zeros(0), m).map_err(|e| e.to_string())?;
        let want = [
            (rates.mu_s, ls + m * del.abs()),
            (rates.xi_u, lu - m * eps.abs()),
            (rates.mu_ss, ls + del.abs() / m),
            (rates.xi_su, lu - eps.abs() / m),
        ];
        for (got, w) in want {
            if (got.lo() - w).abs() > 1e-12 * (1.0 + w.abs()) || (got.hi() - w).abs() > 1e-12 * (1.0 + w.abs()) {
                return Err(format!("rate {got:?} vs closed form {w}"));
            }
        }
    }
    Ok(cases)
}

/// Shrinking the set never worsens the rigorous end of any cone rate.
pub fn antitone_rates(shrinkages: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let reports = shipped_reports();
    let mut checked = 0;
    for rep in &reports {
        let cfg = rep.config.as_ref().ok_or("report without config")?;
        let field = cfg.field().map_err(|e| e.to_string())?;
        let k = cfg.param_box().map_err(|e| e.to_string())?;
        for c in rep.cones.iter().filter_map(|c| c.cone.as_ref()) {
            let mut h = c.hset.clone();
            let mut prev = cone_rates(&*field.base, &h, &k, c.m).map_err(|e| e.to_string())?;
            for _ in 0..shrinkages {
                let radii = h.radii.iter().map(|x| x * r.gen_range(0.3..1.0)).collect();
                h = h.with_radii(radii);
                let next = cone_rates(&*field.base, &h, &k, c.m).map_err(|e| e.to_string())?;
                let ok = next.mu_s.hi() <= prev.mu_s.hi()
                    && next.mu_ss.hi() <= prev.mu_ss.hi()
                    && next.xi_u.lo() >= prev.xi_u.lo()
                    && next.xi_su.lo() >= prev.xi_su.lo();
                if !ok {
                    return Err(format!("{}: rates {prev:?} → {next:?} after shrinking", rep.scenario));
                }
                prev = next;
            }
            checked += 1;
        }
    }
    if checked == 0 {
        return Err("no shipped cones found".into());
    }
    Ok(checked * shrinkages)
}

// ---------------------------------------------------------------- covering

pub struct LinearCovering {
    pub lambda: f64,
    pub mu: f64,
    pub shift: [f64; 2],
    pub source: [f64; 2],
    pub target: [f64; 2],
}

impl LinearCovering {
    pub fn random(r: &mut impl Rng) -> LinearCovering {
        let sign = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        LinearCovering {
            lambda: sign * r.gen_range(1.05..8.0),
            mu: r.gen_range(-0.95..0.95),
            shift: [r.gen_range(-0.5..0.5), r.gen_range(-0.5..0.5)],
            source: [r.gen_range(0.1..1.0), r.gen_range(0.1..1.0)],
            target: [r.gen_range(0.1..2.0), r.gen_range(0.1..2.0)],
        }
    }

    /// Margins of the expanding and contracting conditions.
    pub fn margins(&self) -> (f64, f64) {
        (
            self.lambda.abs() * self.source[0] - self.shift[0].abs() - self.target[0],
            self.target[1] - self.mu.abs() * self.source[1] - self.shift[1].abs(),
        )
    }

    pub fn covers(&self) -> bool {
        let (u, s) = self.margins();
        u > 0.0 && s > 0.0
    }

    fn image(&self, u: Interval) -> IVector {
        let s = Interval::symmetric(self.source[1]);
        IVector::new(vec![
            u * self.lambda + self.shift[0],
            s * self.mu + self.shift[1],
        ])
    }

    pub fn verify(&self, pieces: usize) -> bool {
        let ru = self.source[0];
        let w = 2.0 * ru / pieces as f64;
        let image = CoveringImage {
            edges: vec![self.image(Interval::point(-ru)), self.image(Interval::point(ru))],
            pieces: (0..pieces)
                .map(|i| self.image(Interval::new(-ru + i as f64 * w, (-ru + (i + 1) as f64 * w).min(ru))))
                .collect(),
        };
        let target = HSet::new(IVector::zeros(2), IMatrix::identity(2), 1, self.target.to_vec()).expect("valid h-set");
        verify_covering(&image, &target).is_ok()
    }
}

pub fn covering_oracle(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let (mut done, mut yes) = (0, 0);
    while done < cases {
        let c = LinearCovering::random(&mut r);
        let (u, s) = c.margins();
        if u.abs() < 1e-6 || s.abs() < 1e-6 {
            continue;
        }
        if c.verify(10) != c.covers() {
            return Err(format!(
                "λ = {}, μ = {}, shift {:?}, source {:?}, target {:?}: truth {}",
                c.lambda,
                c.mu,
                c.shift,
                c.source,
                c.target,
                c.covers()
            ));
        }
        yes += c.covers() as usize;
        done += 1;
    }
    if yes == 0 || yes == cases {
        return Err(format!("degenerate sample: {yes} of {cases} cover"));
    }
    Ok(cases)
}

// ---------------------------------------------------------------- composites

pub fn bump(width: f64) -> WaveProfile {
    WaveProfile {
        kind: ProfileKind::Compacton,
        speed: Interval::point(0.0),
        support: Interval::new(width * 0.99, width),
        samples: vec![
            ProfileSample {
                xi: Interval::ZERO,
                u: Interval::ZERO,
            },
            ProfileSample {
                xi: Interval::point(width / 2.0),
                u: Interval::new(0.9, 1.0),
            },
            ProfileSample {
                xi: Interval::point(width),
                u: Interval::ZERO,
            },
        ],
    }
}

/// `compose` on random placements against pairwise disjointness of
/// `[o_i, o_i + w]`.
pub fn compose_cases(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    let (mut accepted, mut done) = (0, 0);
    while done < cases {
        let w = r.gen_range(0.5..2.0);
        let xi0 = r.gen_range(0.3..3.0);
        let n = r.gen_range(2..8);
        let offsets: Vec<f64> = (0..n).map(|j| j as f64 * xi0 + r.gen_range(-0.2..0.2) * xi0).collect();
        let mut gaps = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && offsets[i] <= offsets[j] {
                    gaps.push(offsets[j] - (offsets[i] + w));
                }
            }
        }
        if gaps.iter().any(|g| g.abs() < 1e-9) {
            continue;
        }
        let truth = gaps.iter().all(|&g| g > 0.0);
        let symbols: Vec<Symbol> = (0..n).map(|_| if r.gen_bool(0.5) { Symbol::Plus } else { Symbol::Minus }).collect();
        let got = compose(&[bump(w)], &offsets, &symbols);
        match (&got, truth) {
            (Ok(_), true) => accepted += 1,
            (Err(Error::Overlap(..)), false) => {}
            _ => return Err(format!("w = {w}, offsets {offsets:?}: truth {truth}, got {got:?}")),
        }
        done += 1;
    }
    if accepted == 0 || accepted == cases {
        return Err(format!("degenerate sample: {accepted} of {cases} accepted"));
    }
    Ok(cases)
}

pub fn random_symbols(r: &mut impl Rng, n: usize) -> Vec<Symbol> {
    (0..n).map(|_| if r.gen_bool(0.5) { Symbol::Plus } else { Symbol::Minus }).collect()
}

pub fn check_metric(s: &[Symbol], t: &[Symbol], u: &[Symbol], lattice: Lattice) -> Result<(), String> {
    let p = bump(1.0);
    let w = |x: &[Symbol]| compose_lattice(&p, lattice, x).map_err(|e| e.to_string());
    let (ws, wt, wu) = (w(s)?, w(t)?, w(u)?);
    let d = |a, b| composite_distance(a, b).map(|d| d.value).map_err(|e| e.to_string());
    let (st, ts, tu, su) = (d(&ws, &wt)?, d(&wt, &ws)?, d(&wt, &wu)?, d(&ws, &wu)?);
    if d(&ws, &ws)? != 0.0 {
        return Err("d(s, s) ≠ 0".into());
    }
    if (st == 0.0) != (s == t) {
        return Err(format!("d(s, t) = {st} for s = t: {}", s == t));
    }
    if st != ts {
        return Err(format!("asymmetric: {st} vs {ts}"));
    }
    if su > (st + tu) * (1.0 + 1e-15) {
        return Err(format!("triangle: {su} > {st} + {tu}"));
    }
    Ok(())
}

pub fn metric_axioms(cases: usize, seed: u64) -> Outcome {
    let mut r = rng(seed);
    for _ in 0..cases {
        let n = r.gen_range(1..24);
        let lattice = Lattice {
            xi0: 1.5,
            first_index: r.gen_range(-12..=0),
        };
        let (s, t, u) = (random_symbols(&mut r, n), random_symbols(&mut r, n), random_symbols(&mut r, n));
        check_metric(&s, &t, &u, lattice)?;
    }
    Ok(cases)
}
