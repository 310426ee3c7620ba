//! Wave profiles reconstructed from trajectory enclosures, superpositions
//! of waves with disjoint supports, and the symbolic distance between
//! lattice composites.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::lohner::TrajectoryEnclosure;
use crate::time::Integrand;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// Monotone between 0 and a positive state, zero on one side of `ξ = 0`.
    Front,
    /// Positive exactly on a bounded interval starting at `ξ = 0`.
    Compacton,
    /// Zero for `ξ < 0`, oscillating around a positive state after.
    Oscillatory,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub xi: Interval,
    pub u: Interval,
}

/// `u = φ(ξ)` along a wave, with `ξ = 0` where `φ` leaves or reaches 0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveProfile {
    pub kind: ProfileKind,
    pub speed: Interval,
    /// Width of the support for compactons; the `ξ`-range of the samples
    /// otherwise.
    pub support: Interval,
    pub samples: Vec<ProfileSample>,
}

impl WaveProfile {
    /// Upper bound of `sup |φ|` over the samples.
    pub fn amplitude(&self) -> f64 {
        self.samples.iter().map(|s| s.u.mag()).fold(0.0, f64::max)
    }

    /// Region `[lo, hi]` of `ξ` outside which `φ = 0` (`None` for an
    /// unbounded end).
    pub fn extent(&self) -> (Option<f64>, Option<f64>) {
        match self.kind {
            ProfileKind::Compacton => (Some(0.0), Some(self.support.hi())),
            ProfileKind::Front if self.is_decreasing() => (None, Some(0.0)),
            ProfileKind::Front | ProfileKind::Oscillatory => (Some(0.0), None),
        }
    }

    fn is_decreasing(&self) -> bool {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => a.u.mid() > b.u.mid(),
            _ => false,
        }
    }

    pub fn xi_is_monotone(&self) -> bool {
        self.samples
            .windows(2)
            .all(|w| w[0].xi.lo() <= w[1].xi.lo() && w[0].xi.hi() <= w[1].xi.hi())
    }

    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "xi_lo,xi_hi,u_lo,u_hi")?;
        for s in &self.samples {
            writeln!(w, "{:e},{:e},{:e},{:e}", s.xi.lo(), s.xi.hi(), s.u.lo(), s.u.hi())?;
        }
        Ok(())
    }
}

/// Where `ξ` is pinned along the trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Anchor {
    /// `ξ` of the first step.
    Start(Interval),
    /// `ξ` of the final point, with `ξ` increasing towards it.
    End(Interval),
}

/// Profile along the step hulls of `trajs` (pieces integrated over the same
/// steps), with `ξ` accumulated by quadrature of `integrand`.
pub fn emit_profile(
    trajs: &[TrajectoryEnclosure],
    integrand: Integrand,
    anchor: Anchor,
    kind: ProfileKind,
    speed: Interval,
    stride: usize,
) -> Result<WaveProfile> {
    let first = trajs.first().ok_or_else(|| Error::Invalid("no trajectories".into()))?;
    let len = first.len();
    if trajs.iter().any(|t| t.len() != len || t.dim() != first.dim()) {
        return Err(Error::Shape("trajectories differ in length".into()));
    }
    let c = integrand.coord();
    let stride = stride.max(1);
    let mut hulls = Vec::with_capacity(len);
    let mut steps = Vec::with_capacity(len);
    for i in 0..len {
        let mut hull = first.step_box(i).to_vec();
        for t in &trajs[1..] {
            for (h, v) in hull.iter_mut().zip(t.step_box(i)) {
                *h = h.hull(v);
            }
        }
        let span = first.span(i);
        let w = Interval::point(span.hi()) - Interval::point(span.lo());
        steps.push(w * integrand.eval(&hull, i)?);
        hulls.push(hull[c]);
    }
    // ξ at the start of each step and at the end.
    let mut xi = vec![Interval::ZERO; len + 1];
    match anchor {
        Anchor::Start(x0) => {
            xi[0] = x0;
            for i in 0..len {
                xi[i + 1] = xi[i] + steps[i];
            }
        }
        Anchor::End(x1) => {
            xi[len] = x1;
            for i in (0..len).rev() {
                xi[i] = xi[i + 1] - steps[i];
            }
        }
    }
    let mut samples: Vec<ProfileSample> = (0..len)
        .step_by(stride)
        .map(|i| ProfileSample {
            xi: Interval::new(xi[i].lo(), xi[i + 1].hi()),
            u: hulls[i],
        })
        .collect();
    if let Some(t) = trajs.last() {
        samples.push(ProfileSample {
            xi: xi[len],
            u: t.final_box()[c],
        });
    }
    let total = xi[len] - xi[0];
    let support = match kind {
        ProfileKind::Compacton => xi[len],
        _ => Interval::new(0.0, total.hi()),
    };
    Ok(WaveProfile {
        kind,
        speed,
        support,
        samples,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symbol {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Symbol {
    pub fn sign(self) -> f64 {
        match self {
            Symbol::Plus => 1.0,
            Symbol::Minus => -1.0,
        }
    }
}

/// One wave of a superposition: `symbol · φ(±(x − offset))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub profile: usize,
    pub offset: f64,
    pub symbol: Symbol,
    /// Use `φ(−ξ)`, which travels with the opposite speed.
    #[serde(default)]
    pub reflected: bool,
}

/// Regular placement `offset_j = j ξ₀` of one profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub xi0: f64,
    pub first_index: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositeWave {
    pub components: Vec<Component>,
    pub symbol_sequence: Vec<Symbol>,
    pub lattice: Option<Lattice>,
    /// `sup |φ|` over the profiles used.
    pub amplitude: f64,
}

struct Placed {
    lo: Option<f64>,
    hi: Option<f64>,
    speed: Interval,
    key: (usize, bool),
}

fn place(profiles: &[WaveProfile], c: &Component) -> Result<Placed> {
    let p = profiles
        .get(c.profile)
        .ok_or_else(|| Error::Invalid(format!("no profile {}", c.profile)))?;
    let (lo, hi) = p.extent();
    let o = Interval::point(c.offset);
    let shift = |v: Option<f64>, up: bool| {
        v.map(|x| {
            let s = o + Interval::point(x);
            if up {
                s.hi()
            } else {
                s.lo()
            }
        })
    };
    Ok(if c.reflected {
        Placed {
            lo: hi.map(|x| (o - Interval::point(x)).lo()),
            hi: lo.map(|x| (o - Interval::point(x)).hi()),
            speed: -p.speed,
            key: (c.profile, true),
        }
    } else {
        Placed {
            lo: shift(lo, false),
            hi: shift(hi, true),
            speed: p.speed,
            key: (c.profile, false),
        }
    })
}

/// Superposition of waves whose supports stay disjoint for all `t ≥ 0`.
///
/// Components are accepted when their supports are strictly separated and,
/// for each ordered pair, the left wave is not faster than the right one
/// (copies of the same wave travel together).
pub fn compose(profiles: &[WaveProfile], offsets: &[f64], symbols: &[Symbol]) -> Result<CompositeWave> {
    if offsets.len() != symbols.len() {
        return Err(Error::Shape("one symbol per offset".into()));
    }
    let components: Vec<Component> = offsets
        .iter()
        .zip(symbols)
        .map(|(&offset, &symbol)| Component {
            profile: 0,
            offset,
            symbol,
            reflected: false,
        })
        .collect();
    compose_components(profiles, components)
}

pub fn compose_components(profiles: &[WaveProfile], components: Vec<Component>) -> Result<CompositeWave> {
    let placed = components.iter().map(|c| place(profiles, c)).collect::<Result<Vec<_>>>()?;
    for i in 0..placed.len() {
        for j in i + 1..placed.len() {
            let (a, b) = (&placed[i], &placed[j]);
            let a_left = matches!((a.hi, b.lo), (Some(h), Some(l)) if h < l);
            let b_left = matches!((b.hi, a.lo), (Some(h), Some(l)) if h < l);
            let (l, r) = match (a_left, b_left) {
                (true, _) => (a, b),
                (_, true) => (b, a),
                _ => return Err(Error::Overlap(i, j)),
            };
            let together = l.key == r.key;
            if !together && !(l.speed.hi() <= r.speed.lo()) {
                return Err(Error::Overlap(i, j));
            }
        }
    }
    let amplitude = components
        .iter()
        .map(|c| profiles[c.profile].amplitude())
        .fold(0.0, f64::max);
    Ok(CompositeWave {
        symbol_sequence: components.iter().map(|c| c.symbol).collect(),
        components,
        lattice: None,
        amplitude,
    })
}

/// Copies of `profile` at `j ξ₀`, `j = first_index, …`, with signs from
/// `symbols`.
pub fn compose_lattice(profile: &WaveProfile, lattice: Lattice, symbols: &[Symbol]) -> Result<CompositeWave> {
    let offsets: Vec<f64> = (0..symbols.len())
        .map(|k| (lattice.first_index + k as i64) as f64 * lattice.xi0)
        .collect();
    let mut w = compose(std::slice::from_ref(profile), &offsets, symbols)?;
    w.lattice = Some(lattice);
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distance {
    pub value: f64,
    /// Bound of the terms beyond the stored window.
    pub tail_bound: f64,
}

/// `Σ_j 2^{−|j|} sup |Φ_s − Φ_t|` restricted to the j-th lattice cell:
/// `0` where the symbols agree and `C = 2 sup |φ|` where they differ.
pub fn composite_distance(s: &CompositeWave, t: &CompositeWave) -> Result<Distance> {
    let (ls, lt) = match (s.lattice, t.lattice) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::LatticeMismatch("both composites must be lattice composites".into())),
    };
    if ls != lt || s.symbol_sequence.len() != t.symbol_sequence.len() || s.amplitude != t.amplitude {
        return Err(Error::LatticeMismatch(format!(
            "{ls:?} with {} cells vs {lt:?} with {} cells",
            s.symbol_sequence.len(),
            t.symbol_sequence.len()
        )));
    }
    let c = 2.0 * s.amplitude;
    let weight = |j: i64| 2f64.powi(-(j.unsigned_abs().min(1100) as i32));
    let n = s.symbol_sequence.len() as i64;
    let mut terms: Vec<(u64, f64)> = s
        .symbol_sequence
        .iter()
        .zip(&t.symbol_sequence)
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(k, _)| {
            let j = ls.first_index + k as i64;
            (j.unsigned_abs(), weight(j))
        })
        .collect();
    // Small terms first.
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    let value = c * terms.iter().map(|t| t.1).sum::<f64>();
    let (lo, hi) = (ls.first_index, ls.first_index + n - 1);
    // Σ_{j<lo} and Σ_{j>hi} of 2^{−|j|}, bounded by 3 when the cell 0 is outside.
    let left = if lo <= 0 { 2.0 * weight(lo - 1) } else { 3.0 };
    let right = if hi >= 0 { 2.0 * weight(hi + 1) } else { 3.0 };
    let tail_bound = c * (left + right);
    Ok(Distance { value, tail_bound })
}
