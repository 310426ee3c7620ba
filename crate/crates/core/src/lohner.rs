//! Lohner-type C⁰ integration of parameterized polynomial fields.
//!
//! The parameters are appended to the state with `μ' = 0`, and the set is
//! carried as a doubleton `x̂ + C r₀ + B r` with the initial coordinates `r₀`
//! kept fixed, so any image point can be traced back to its initial
//! coordinates.

use crate::error::{Error, Result};
use crate::hset::HSet;
use crate::interval::{IMatrix, IVector, Interval};
use crate::linalg::enclose_inverse;
use crate::systems::{DesingularizedField, TaylorEngine};
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::io::Write;
use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_ORDER: usize = 12;
pub const DEFAULT_STEP: f64 = 1e-3;
const ROUGH_RETRIES: usize = 20;
const ROUGH_INFLATION: f64 = 0.1;

static STEPS_TAKEN: AtomicU64 = AtomicU64::new(0);

/// Lohner steps taken by this process so far.
pub fn steps_taken() -> u64 {
    STEPS_TAKEN.load(Ordering::Relaxed)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LohnerConfig {
    pub order: usize,
    pub step: f64,
}

impl Default for LohnerConfig {
    fn default() -> Self {
        LohnerConfig {
            order: DEFAULT_ORDER,
            step: DEFAULT_STEP,
        }
    }
}

/// Affine parametrization `origin + dirs · s`, `s ∈ coords`, of a set in
/// the augmented space.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSet {
    pub origin: IVector,
    pub dirs: DMatrix<f64>,
    pub coords: IVector,
}

impl AffineSet {
    /// The box itself, with the identity parametrization.
    pub fn from_box(b: &IVector) -> AffineSet {
        let d = b.len();
        AffineSet {
            origin: IVector::zeros(d),
            dirs: DMatrix::identity(d, d),
            coords: b.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn hull(&self) -> IVector {
        let e = IMatrix::from_dmatrix(&self.dirs);
        self.origin
            .add(&e.mul_vec(&self.coords).expect("shape"))
            .expect("shape")
    }

    /// Split coordinate `axis` into `pieces` parts sharing float endpoints.
    pub fn subdivide(&self, axis: usize, pieces: usize) -> Vec<AffineSet> {
        assert!(pieces >= 1, "at least one piece");
        let iv = self.coords[axis];
        let (lo, hi) = (iv.lo(), iv.hi());
        let cuts: Vec<f64> = (0..=pieces)
            .map(|i| {
                if i == 0 {
                    lo
                } else if i == pieces {
                    hi
                } else {
                    let t = i as f64 / pieces as f64;
                    (lo + (hi - lo) * t).clamp(lo, hi)
                }
            })
            .collect();
        cuts.windows(2)
            .map(|w| {
                let mut p = self.clone();
                p.coords[axis] = Interval::new(w[0], w[1].max(w[0]));
                p
            })
            .collect()
    }
}

/// `x̂ + C r₀ + B r`.
#[derive(Clone, Debug, PartialEq)]
pub struct Doubleton {
    pub center: Vec<f64>,
    pub c: DMatrix<f64>,
    /// Initial coordinates relative to `s_mid`.
    pub r0: IVector,
    /// Midpoint of the initial coordinates.
    pub s_mid: Vec<f64>,
    pub b: DMatrix<f64>,
    pub r: IVector,
}

impl Doubleton {
    pub fn from_affine(set: &AffineSet) -> Doubleton {
        let d = set.dim();
        let s_mid = set.coords.mid();
        let e = IMatrix::from_dmatrix(&set.dirs);
        let base = set
            .origin
            .add(&e.mul_vec(&IVector::from_points(&s_mid)).expect("shape"))
            .expect("shape");
        let center = base.mid();
        let r = base.sub(&IVector::from_points(&center)).expect("shape");
        let r0 = set
            .coords
            .sub(&IVector::from_points(&s_mid))
            .expect("shape");
        Doubleton {
            center,
            c: set.dirs.clone(),
            r0,
            s_mid,
            b: DMatrix::identity(d, d),
            r,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Enclosure of the points whose initial coordinates lie in `s`.
    pub fn eval_at(&self, s: &IVector) -> IVector {
        let r0 = s.sub(&IVector::from_points(&self.s_mid)).expect("shape");
        self.eval_r0(&r0)
    }

    fn eval_r0(&self, r0: &IVector) -> IVector {
        let c = IMatrix::from_dmatrix(&self.c);
        let b = IMatrix::from_dmatrix(&self.b);
        IVector::from_points(&self.center)
            .add(&c.mul_vec(r0).expect("shape"))
            .expect("shape")
            .add(&b.mul_vec(&self.r).expect("shape"))
            .expect("shape")
    }

    pub fn hull(&self) -> IVector {
        self.eval_r0(&self.r0)
    }

    /// `L (z − z_ref)` evaluated through the doubleton structure, for
    /// initial coordinates in `s` (or all of them).
    pub fn affine_image(&self, l: &IMatrix, z_ref: &IVector, s: Option<&IVector>) -> IVector {
        let r0 = match s {
            Some(s) => s.sub(&IVector::from_points(&self.s_mid)).expect("shape"),
            None => self.r0.clone(),
        };
        let shift = IVector::from_points(&self.center).sub(z_ref).expect("shape");
        let lc = l.matmul(&IMatrix::from_dmatrix(&self.c)).expect("shape");
        let lb = l.matmul(&IMatrix::from_dmatrix(&self.b)).expect("shape");
        l.mul_vec(&shift)
            .expect("shape")
            .add(&lc.mul_vec(&r0).expect("shape"))
            .expect("shape")
            .add(&lb.mul_vec(&self.r).expect("shape"))
            .expect("shape")
    }
}

/// Validated enclosure of the flow from an initial set.
#[derive(Clone, Debug)]
pub struct TrajectoryEnclosure {
    pub field_id: String,
    pub taylor_order: usize,
    pub step_size: f64,
    /// Parameter set `K`.
    pub params: IVector,
    pub initial: AffineSet,
    /// Set at the final time.
    pub final_set: Doubleton,
    dim: usize,
    spans: Vec<Interval>,
    boxes: Vec<Interval>,
}

impl TrajectoryEnclosure {
    pub fn len(&self) -> usize {
        self.spans.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// Dimension of the stored boxes (state followed by parameters).
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Time span of step `i`.
    pub fn span(&self, i: usize) -> Interval {
        self.spans[i]
    }

    /// Enclosure of all solutions over the span of step `i`.
    pub fn step_box(&self, i: usize) -> &[Interval] {
        &self.boxes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn steps(&self) -> impl Iterator<Item = (Interval, &[Interval])> {
        self.spans
            .iter()
            .copied()
            .zip(self.boxes.chunks_exact(self.dim))
    }

    /// Total integration time enclosure `[0, N h]`.
    pub fn total_time(&self) -> Interval {
        self.spans
            .last()
            .map_or(Interval::ZERO, |s| Interval::new(0.0, s.hi()))
    }

    /// Enclosure of the final set.
    pub fn final_box(&self) -> IVector {
        self.final_set.hull()
    }

    /// Keep steps `range` only.
    pub fn restrict(&self, range: std::ops::Range<usize>) -> TrajectoryEnclosure {
        let mut t = self.clone();
        t.spans = self.spans[range.clone()].to_vec();
        t.boxes = self.boxes[range.start * self.dim..range.end * self.dim].to_vec();
        t
    }

    /// CSV rows `step, τ_lo, τ_hi, x0_lo, x0_hi, ...`.
    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        write!(w, "step,tau_lo,tau_hi")?;
        for i in 0..self.dim {
            write!(w, ",x{i}_lo,x{i}_hi")?;
        }
        writeln!(w)?;
        for (k, (span, b)) in self.steps().enumerate() {
            write!(w, "{k},{:e},{:e}", span.lo(), span.hi())?;
            for x in b {
                write!(w, ",{:e},{:e}", x.lo(), x.hi())?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Trajectory built from explicit step data, for tests and replays.
    pub fn from_steps(
        field_id: &str,
        params: IVector,
        spans: Vec<Interval>,
        boxes: Vec<IVector>,
    ) -> TrajectoryEnclosure {
        let dim = boxes.first().map_or(0, |b| b.len());
        let first = boxes.first().cloned().unwrap_or_else(|| IVector::zeros(0));
        let last = boxes.last().cloned().unwrap_or_else(|| IVector::zeros(0));
        TrajectoryEnclosure {
            field_id: field_id.into(),
            taylor_order: 0,
            step_size: spans.first().map_or(0.0, |s| s.width()),
            params,
            initial: AffineSet::from_box(&first),
            final_set: Doubleton::from_affine(&AffineSet::from_box(&last)),
            dim,
            spans,
            boxes: boxes.into_iter().flat_map(|b| b.into_vec()).collect(),
        }
    }
}

/// Number of steps of size `h` covering `tau`.
pub fn step_count(tau: f64, h: f64) -> usize {
    let q = tau / h;
    let r = q.round();
    if (q - r).abs() <= 1e-9 * q.max(1.0) {
        r as usize
    } else {
        q.ceil() as usize
    }
}

struct Stepper<'a> {
    field: &'a DesingularizedField,
    engine: TaylorEngine,
    n: usize,
    d: usize,
    order: usize,
    h: Interval,
    h_pow: Interval,
    unit: Interval,
}

impl<'a> Stepper<'a> {
    fn new(field: &'a DesingularizedField, cfg: LohnerConfig) -> Result<Self> {
        if cfg.order < 2 {
            return Err(Error::Invalid("Taylor order must be at least 2".into()));
        }
        if !(cfg.step > 0.0 && cfg.step.is_finite()) {
            return Err(Error::Invalid("step size must be positive".into()));
        }
        let tape = field
            .base
            .tape()
            .ok_or_else(|| Error::Invalid(format!("field {} has no tape", field.id())))?;
        let n = field.state_dim();
        let d = n + field.param_dim();
        let h = Interval::point(cfg.step);
        Ok(Stepper {
            field,
            engine: TaylorEngine::new(tape, cfg.order + 1),
            n,
            d,
            order: cfg.order,
            h,
            h_pow: h.powi(cfg.order as i32 + 1)?,
            unit: Interval::new(0.0, cfg.step),
        })
    }

    fn vector_field(&self, z: &IVector) -> IVector {
        let x = z.slice(0..self.n);
        let mu = z.slice(self.n..self.d);
        let mut f = self.field.base.eval(&x, &mu).into_vec();
        f.resize(self.d, Interval::ZERO);
        IVector::new(f)
    }

    /// Box containing every solution from `x` over `[0, h]`.
    fn rough_enclosure(&self, x: &IVector, step: usize) -> Result<IVector> {
        let picard = |w: &IVector| -> IVector {
            let f = self.vector_field(w);
            x.iter().zip(f.iter()).map(|(&a, &b)| a + self.unit * b).collect()
        };
        let mut w: IVector = picard(x)
            .iter()
            .map(|v| v.inflate(ROUGH_INFLATION, 1e-300))
            .collect();
        for _ in 0..ROUGH_RETRIES {
            let next = picard(&w);
            if next.has_empty() || next.iter().any(|v| !v.lo().is_finite() || !v.hi().is_finite()) {
                break;
            }
            if w.contains_vec(&next) {
                return Ok(next);
            }
            w = w
                .hull(&next)?
                .iter()
                .map(|v| v.inflate(ROUGH_INFLATION, 1e-300))
                .collect();
        }
        Err(Error::BlowUp {
            step,
            reason: "rough enclosure did not verify".into(),
        })
    }

    /// Advance the doubleton by one step; returns the new set and the
    /// rough enclosure over the step.
    fn step(&mut self, set: &Doubleton, step: usize) -> Result<(Doubleton, IVector)> {
        let (n, d, p) = (self.n, self.d, self.order);
        let x = set.hull();
        let w = self.rough_enclosure(&x, step)?;

        self.engine.series(w.as_slice(), p + 1);
        let rem: Vec<Interval> = (0..d)
            .map(|i| {
                if i < n {
                    self.engine.coeff(i, p + 1) * self.h_pow
                } else {
                    Interval::ZERO
                }
            })
            .collect();

        let xc: Vec<Interval> = set.center.iter().map(|&v| Interval::point(v)).collect();
        self.engine.series(&xc, p);
        let mut yc: Vec<Interval> = (0..d)
            .map(|i| {
                let mut acc = self.engine.coeff(i, p);
                for j in (0..p).rev() {
                    acc = acc * self.h + self.engine.coeff(i, j);
                }
                acc
            })
            .collect();
        for i in 0..d {
            yc[i] += rem[i];
        }

        self.engine.series_dual(x.as_slice(), p);
        let jac = IMatrix::from_fn(d, d, |i, q| {
            let mut acc = self.engine.coeff_grad(i, p, q);
            for j in (0..p).rev() {
                acc = acc * self.h + self.engine.coeff_grad(i, j, q);
            }
            acc
        });

        let yc = IVector::new(yc);
        if yc.has_empty() || yc.iter().any(|v| !v.lo().is_finite() || !v.hi().is_finite()) {
            return Err(Error::BlowUp {
                step,
                reason: "Taylor enclosure is not finite".into(),
            });
        }
        let center = yc.mid();
        let jc = jac.matmul(&IMatrix::from_dmatrix(&set.c))?;
        let c_new = jc.mid();
        let jc_err = jc.sub(&IMatrix::from_dmatrix(&c_new))?;
        let a = jac.matmul(&IMatrix::from_dmatrix(&set.b))?;

        let q = orthonormal_basis(&a.mid(), &set.r);
        let qi = IMatrix::from_dmatrix(&q);
        let q_inv = enclose_inverse(&qi).map_err(|e| Error::BlowUp {
            step,
            reason: format!("frame inversion: {e}"),
        })?;
        let local = yc
            .sub(&IVector::from_points(&center))?
            .add(&jc_err.mul_vec(&set.r0)?)?;
        let r_new = q_inv
            .matmul(&a)?
            .mul_vec(&set.r)?
            .add(&q_inv.mul_vec(&local)?)?;
        Ok((
            Doubleton {
                center,
                c: c_new,
                r0: set.r0.clone(),
                s_mid: set.s_mid.clone(),
                b: q,
                r: r_new,
            },
            w,
        ))
    }
}

/// Orthonormal basis from the QR factorization of `a` with columns ordered
/// by their contribution `‖a_j‖ · rad(r_j)`.
fn orthonormal_basis(a: &DMatrix<f64>, r: &IVector) -> DMatrix<f64> {
    let d = a.ncols();
    let mut order: Vec<usize> = (0..d).collect();
    let weight = |j: usize| a.column(j).norm() * r[j].mag().max(f64::MIN_POSITIVE);
    order.sort_by(|&i, &j| weight(j).total_cmp(&weight(i)));
    let sorted = DMatrix::from_fn(d, d, |i, j| a[(i, order[j])]);
    let q = sorted.clone().qr().q();
    if q.iter().all(|v| v.is_finite()) {
        q
    } else {
        DMatrix::identity(d, d)
    }
}

fn integrate_inner(
    field: &DesingularizedField,
    initial: &AffineSet,
    params: &IVector,
    cfg: LohnerConfig,
    steps: usize,
    mut stop: impl FnMut(&Doubleton) -> bool,
) -> Result<(TrajectoryEnclosure, bool)> {
    let mut stepper = Stepper::new(field, cfg)?;
    if initial.dim() != stepper.d {
        return Err(Error::Shape(format!(
            "initial set of dimension {} for augmented dimension {}",
            initial.dim(),
            stepper.d
        )));
    }
    let d = stepper.d;
    let mut set = Doubleton::from_affine(initial);
    let mut spans = Vec::with_capacity(steps);
    let mut boxes = Vec::with_capacity(steps * d);
    let mut stopped = stop(&set);
    let mut k = 0;
    while !stopped && k < steps {
        let (next, w) = stepper.step(&set, k)?;
        STEPS_TAKEN.fetch_add(1, Ordering::Relaxed);
        let t0 = Interval::point(k as f64) * stepper.h;
        let t1 = Interval::point((k + 1) as f64) * stepper.h;
        spans.push(Interval::new(t0.lo(), t1.hi()));
        boxes.extend_from_slice(w.as_slice());
        set = next;
        k += 1;
        stopped = stop(&set);
    }
    Ok((
        TrajectoryEnclosure {
            field_id: field.id().to_string(),
            taylor_order: cfg.order,
            step_size: cfg.step,
            params: params.clone(),
            initial: initial.clone(),
            final_set: set,
            dim: d,
            spans,
            boxes,
        },
        stopped,
    ))
}

/// Integrate the box `x0` (state) with parameters in `params` over
/// `[0, N h]`, `N = ⌈τ/h⌉`.
pub fn integrate(
    field: &DesingularizedField,
    x0: &IVector,
    params: &IVector,
    tau_total: f64,
    cfg: LohnerConfig,
) -> Result<TrajectoryEnclosure> {
    let set = AffineSet::from_box(&x0.concat(params));
    integrate_set(field, &set, params, tau_total, cfg)
}

/// Integrate an affine initial set in the augmented space.
pub fn integrate_set(
    field: &DesingularizedField,
    initial: &AffineSet,
    params: &IVector,
    tau_total: f64,
    cfg: LohnerConfig,
) -> Result<TrajectoryEnclosure> {
    let n = step_count(tau_total, cfg.step);
    integrate_inner(field, initial, params, cfg, n, |_| false).map(|(t, _)| t)
}

/// Split `initial` along `axis` and integrate the pieces in parallel.
pub fn subdivide_and_integrate(
    field: &DesingularizedField,
    initial: &AffineSet,
    params: &IVector,
    axis: usize,
    pieces: usize,
    tau_total: f64,
    cfg: LohnerConfig,
) -> Result<Vec<TrajectoryEnclosure>> {
    if pieces == 0 {
        return Err(Error::Invalid("pieces must be at least 1".into()));
    }
    initial
        .subdivide(axis, pieces)
        .par_iter()
        .enumerate()
        .map(|(i, p)| integrate_set(field, p, params, tau_total, cfg).map_err(|e| e.in_piece(i)))
        .collect()
}

/// Integrate until the set lies strictly inside `target`; returns the
/// trajectory and the step span at which containment was first observed.
pub fn integrate_until_inside(
    field: &DesingularizedField,
    initial: &AffineSet,
    params: &IVector,
    target: &HSet,
    tau_cap: f64,
    cfg: LohnerConfig,
) -> Result<(TrajectoryEnclosure, Interval)> {
    let (l, z_ref) = target.augmented_coord_map(field.param_dim());
    let inside = |s: &Doubleton| target.strictly_contains_coords(&s.affine_image(&l, &z_ref, None));
    let cap = step_count(tau_cap, cfg.step);
    let (traj, ok) = integrate_inner(field, initial, params, cfg, cap, inside)?;
    if !ok {
        return Err(Error::TauCapExceeded { cap: tau_cap });
    }
    let entry = if traj.is_empty() {
        Interval::ZERO
    } else {
        traj.span(traj.len() - 1)
    };
    Ok((traj, entry))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{desingularize, LinearField, TimeScaleFactor};
    use std::sync::Arc;

    fn linear(a: &[f64], n: usize) -> DesingularizedField {
        desingularize(
            Arc::new(LinearField::from_f64(n, a)),
            TimeScaleFactor::Identity,
        )
    }

    #[test]
    fn zero_field_is_stationary() {
        let f = linear(&[0.0], 1);
        let t = integrate(&f, &IVector::from_points(&[1.0]), &IVector::zeros(0), 1.0, LohnerConfig::default()).unwrap();
        let fb = t.final_box();
        assert!(fb[0].contains(1.0) && fb[0].width() <= 1e-14);
    }

    #[test]
    fn decay_contains_exponential() {
        let f = linear(&[-1.0], 1);
        let cfg = LohnerConfig { order: 8, step: 0.01 };
        let t = integrate(&f, &IVector::from_points(&[1.0]), &IVector::zeros(0), 1.0, cfg).unwrap();
        let fb = t.final_box();
        assert!(fb[0].contains((-1.0f64).exp()), "{}", fb[0]);
        assert!(fb[0].width() < 1e-12);
        assert_eq!(t.len(), 100);
    }

    #[test]
    fn hitting_time_of_ball() {
        let f = linear(&[-1.0], 1);
        let target = HSet::new(IVector::zeros(1), IMatrix::identity(1), 0, vec![0.5]).unwrap();
        let cfg = LohnerConfig { order: 8, step: 0.001 };
        let set = AffineSet::from_box(&IVector::from_points(&[1.0]));
        let (_, entry) = integrate_until_inside(&f, &set, &IVector::zeros(0), &target, 5.0, cfg).unwrap();
        assert!(entry.contains(std::f64::consts::LN_2) || (entry.lo() - std::f64::consts::LN_2).abs() < 2e-3);
    }

    #[test]
    fn subdivision_tiles_initial_box() {
        let set = AffineSet::from_box(&IVector::new(vec![Interval::new(0.0, 1.0)]));
        let parts = set.subdivide(0, 3);
        assert_eq!(parts[0].coords[0].lo(), 0.0);
        assert_eq!(parts[2].coords[0].hi(), 1.0);
        for w in parts.windows(2) {
            assert_eq!(w[0].coords[0].hi(), w[1].coords[0].lo());
        }
    }
}
