//! End-to-end scenarios: configuration, the verification pipeline, the JSON
//! report and its replay from stored evidence.

use crate::blocks::{
    build_block, build_block_pc, certify_equilibrium, radius_sweep, refine_equilibrium, BlockRequest,
    EquilibriumCertificate, IsolatingBlock,
};
use crate::composite::{emit_profile, Anchor, ProfileKind, WaveProfile};
use crate::cones::{
    capture_radii, stable_manifold_rate, unstable_manifold_rate, verify_cone_condition, verify_quadratic_lyapunov,
    ConeCertificate, ManifoldKind, ManifoldLyapunovCertificate,
};
use crate::covering::{
    assemble_connecting_orbit, exit_of_block, image_in_target, verify_covering, CoveringCertificate, CoveringImage,
};
use crate::error::{Error, Result};
use crate::hset::HSet;
use crate::interval::{IMatrix, IVector, Interval};
use crate::linalg::EigenpairEnclosure;
use crate::lohner::{integrate_until_inside, subdivide_and_integrate, AffineSet, LohnerConfig, TrajectoryEnclosure};
use crate::systems::{system_by_id, DesingularizedField, Dyadic};
use crate::time::{
    segment_time, segment_time_below, tail_time_canard, tail_time_stable, tail_time_unstable, total_time,
    verify_sign_on_cone, FoldSide, Integrand, SignCertificate, TimeEnclosure, TimeRole,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCENARIOS: [&str; 5] = [
    "ftw_cubic",
    "compacton_cubic",
    "oscillatory_cubic",
    "compacton_quintic",
    "canard",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Heteroclinic between `(1, 0)` and the origin.
    Front,
    /// Homoclinic to the origin.
    Compacton,
    /// From the origin into a spiral sink.
    Oscillatory,
    /// Trajectories from line segments onto the stable manifold of a
    /// folded saddle.
    Canard,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSettings {
    pub order: usize,
    pub step: f64,
    pub pieces: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeSettings {
    #[serde(rename = "M")]
    pub m: f64,
    pub ell: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquilibriumSettings {
    pub x0: Vec<f64>,
    /// Candidate radii; a geometric sweep with `shape` is used otherwise.
    #[serde(default)]
    pub radii: Option<Vec<f64>>,
    #[serde(default)]
    pub shape: Option<Vec<f64>>,
    #[serde(default = "yes")]
    pub predictor_corrector: bool,
    #[serde(default)]
    pub cone: Option<ConeSettings>,
    /// Side of the unstable face the connection leaves through.
    #[serde(default)]
    pub exit_side: Option<i8>,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSettings {
    pub name: String,
    /// Range of the first coordinate, `"[lo,hi]"` in decimal.
    pub b: String,
    /// Fixed second coordinate, decimal.
    pub c: String,
    pub tau: f64,
    pub side: FoldSide,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub kind: ScenarioKind,
    pub system: String,
    /// Wave parameter `a`, decimal.
    #[serde(default)]
    pub a: Option<String>,
    /// Exponent of the time-scale factor `φ^m`.
    #[serde(default)]
    pub exponent: Option<String>,
    /// Parameter set, one decimal interval `"[lo,hi]"` or number per entry.
    pub params: Vec<String>,
    pub integrator: IntegratorSettings,
    #[serde(default)]
    pub departure: Option<EquilibriumSettings>,
    #[serde(default)]
    pub arrival: Option<EquilibriumSettings>,
    /// Flow time of the covering segment.
    #[serde(default)]
    pub tau: Option<f64>,
    /// Longest flow time allowed before capture by the arrival block.
    #[serde(default)]
    pub tau_cap: Option<f64>,
    /// Level of the first coordinate whose preimage is measured.
    #[serde(default)]
    pub level: Option<f64>,
    #[serde(default)]
    pub branches: Vec<BranchSettings>,
    #[serde(default)]
    pub profile_samples: Option<usize>,
}

impl ScenarioConfig {
    pub fn from_toml(s: &str) -> Result<ScenarioConfig> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<ScenarioConfig> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&s)
    }

    pub fn lohner(&self) -> LohnerConfig {
        LohnerConfig {
            order: self.integrator.order,
            step: self.integrator.step,
        }
    }

    pub fn param_box(&self) -> Result<IVector> {
        self.params.iter().map(|s| parse_decimal_interval(s)).collect::<Result<Vec<_>>>().map(IVector::new)
    }

    pub fn field(&self) -> Result<DesingularizedField> {
        let a = match &self.a {
            Some(a) => Interval::from_decimal(a)?,
            None => Interval::ZERO,
        };
        system_by_id(&self.system, a)
    }

    fn exponent(&self) -> Result<Dyadic> {
        Dyadic::parse(self.exponent.as_deref().unwrap_or("1"))
    }
}

/// `"[lo,hi]"` or a single number, both in decimal, enclosed outwardly.
pub fn parse_decimal_interval(s: &str) -> Result<Interval> {
    let t = s.trim();
    match t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        Some(inner) => {
            let (lo, hi) = inner
                .split_once(',')
                .ok_or_else(|| Error::Config(format!("interval {s:?} needs two endpoints")))?;
            let (lo, hi) = (Interval::from_decimal(lo)?, Interval::from_decimal(hi)?);
            Interval::try_new(lo.lo(), hi.hi()).ok_or_else(|| Error::Config(format!("interval {s:?} is reversed")))
        }
        None => Interval::from_decimal(t),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Block,
    Equilibrium,
    Cone,
    Rate,
    Integration,
    Covering,
    Orbit,
    Lyapunov,
    Sign,
    Time,
    Profile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub stage: String,
    pub check: Check,
    /// Name of the report entry holding the evidence.
    pub entry: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockEntry {
    pub name: String,
    pub block: IsolatingBlock,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenEntry {
    pub name: String,
    pub hyperbolic: bool,
    pub core: IVector,
    pub eigen: Vec<EigenpairEnclosure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeEntry {
    pub name: String,
    pub equilibrium: String,
    pub kind: ManifoldKind,
    #[serde(rename = "M")]
    pub m: f64,
    pub ell: f64,
    pub cone: Option<ConeCertificate>,
    pub rate: Option<ManifoldLyapunovCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringEntry {
    pub name: String,
    pub source: String,
    pub target: HSet,
    pub flow_time: Interval,
    pub image: CoveringImage,
    pub certificate: Option<CoveringCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitEntry {
    pub name: String,
    pub covering: String,
    pub initial_cone: Option<String>,
    pub terminal_cone: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEntry {
    pub name: String,
    pub equilibrium: String,
    pub y: IMatrix,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignEntry {
    pub name: String,
    pub cone: String,
    pub coordinate: usize,
    pub component: i8,
    /// Sign of `x_c − x*_c` the time integrand needs.
    pub expected: i8,
    /// Covering whose image fixes the component, for arrival checks.
    pub component_from: Option<ComponentSource>,
    pub certificate: Option<SignCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentSource {
    pub covering: String,
    pub filter: PieceFilter,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailFormula {
    Power { m: Dyadic },
    Canard { side: FoldSide },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailSpec {
    pub cone: String,
    pub formula: TailFormula,
    /// Bound of `|x_c − x*_c|` per unit of block coordinates.
    pub p1: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceFilter {
    All,
    /// Pieces whose image meets the cone around the stable manifold.
    StableStrip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeParts {
    Assembled {
        covering: String,
        filter: PieceFilter,
        pieces: Vec<usize>,
        /// Segment time of each used piece.
        segments: Vec<Interval>,
        tails: Vec<TailSpec>,
    },
    Sum {
        of: Vec<String>,
    },
    /// Tails alone, for a departure whose segment is not measured.
    Tail {
        tails: Vec<TailSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeEntry {
    pub name: String,
    pub parts: TimeParts,
    pub time: TimeEnclosure,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub name: String,
    pub profile: WaveProfile,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub config: Option<ScenarioConfig>,
    pub blocks: Vec<BlockEntry>,
    pub eigen: Vec<EigenEntry>,
    pub cones: Vec<ConeEntry>,
    pub lyapunov: Vec<LyapunovEntry>,
    pub coverings: Vec<CoveringEntry>,
    pub orbits: Vec<OrbitEntry>,
    pub signs: Vec<SignEntry>,
    pub times: Vec<TimeEntry>,
    pub profiles: Vec<ProfileEntry>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn passed(&self) -> bool {
        !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.ok)
    }

    pub fn time(&self, name: &str) -> Option<&TimeEnclosure> {
        self.times.iter().find(|t| t.name == name).map(|t| &t.time)
    }

    pub fn failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Report> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("report: {e}")))
    }

    /// Write `report.json` and one CSV per profile into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::Io(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        std::fs::write(dir.join(format!("{}.json", self.scenario)), self.to_json()).map_err(io)?;
        for p in &self.profiles {
            let mut buf = Vec::new();
            p.profile.write_csv(&mut buf).map_err(io)?;
            std::fs::write(dir.join(format!("{}_{}.csv", self.scenario, p.name)), buf).map_err(io)?;
        }
        Ok(())
    }
}

fn entry<'a, T>(items: &'a [T], name: &str, key: impl Fn(&T) -> &str) -> Result<&'a T> {
    items
        .iter()
        .find(|t| key(t) == name)
        .ok_or_else(|| Error::Invalid(format!("no entry {name:?} in the report")))
}

/// Largest `|P[coord][j]|` of the frame: `|x_c − x*_c| ≤ p₁ Σ_j |y_j − y*_j|`.
fn frame_row_bound(h: &HSet, coord: usize) -> f64 {
    (0..h.dim()).map(|j| h.frame[(coord, j)].mag()).fold(0.0, f64::max)
}

/// Frame column of the manifold direction and `ρ = ‖other column‖ / ‖column‖`.
fn cone_axis(h: &HSet, kind: ManifoldKind) -> Result<(IVector, Interval)> {
    if h.dim() != 2 || h.u_dim != 1 {
        return Err(Error::Sign("sign checks need a planar saddle".into()));
    }
    let (k, o) = match kind {
        ManifoldKind::Unstable => (0, 1),
        ManifoldKind::Stable => (1, 0),
    };
    let col = |j: usize| IVector::new((0..2).map(|i| h.frame[(i, j)]).collect());
    let (v, w) = (col(k), col(o));
    let rho = w.norm2().checked_div(&v.norm2())?;
    Ok((v, rho))
}

fn sign_from_cone(cone: &ConeCertificate, coordinate: usize, component: i8) -> Result<SignCertificate> {
    let (v, rho) = cone_axis(&cone.hset, cone.kind)?;
    verify_sign_on_cone(cone.kind, &v, rho, cone.m, coordinate, component)
}

/// Whether the piece (in block coordinates) meets `|y_a − a*| ≤ |y_b − b*| / M`.
fn meets_stable_strip(piece: &IVector, core: &IVector, m: f64) -> bool {
    let reach = (Interval::point(piece[1].mag()) + Interval::point(core[1].mag()))
        .checked_div(&Interval::point(m))
        .map(|r| (r + Interval::point(core[0].mag())).hi())
        .unwrap_or(f64::INFINITY);
    piece[0].intersects(&Interval::symmetric(reach))
}

fn select_pieces(image: &CoveringImage, filter: PieceFilter, core: &IVector, m: f64) -> Vec<usize> {
    (0..image.pieces.len())
        .filter(|&i| match filter {
            PieceFilter::All => true,
            PieceFilter::StableStrip => meets_stable_strip(&image.pieces[i], core, m),
        })
        .collect()
}

/// Side of the stable manifold hit by the selected pieces of the image.
fn image_component(report: &Report, src: &ComponentSource) -> Result<i8> {
    let cov = entry(&report.coverings, &src.covering, |c| &c.name)?;
    let (core, m) = strip_data(report, cov)?;
    let used = select_pieces(&cov.image, src.filter, &core, m);
    let p: Vec<&IVector> = used.iter().map(|&i| &cov.image.pieces[i]).collect();
    if p.is_empty() {
        Err(Error::Sign("no piece meets the stable manifold".into()))
    } else if p.iter().all(|b| b[1].lo() > core[1].hi()) {
        Ok(1)
    } else if p.iter().all(|b| b[1].hi() < core[1].lo()) {
        Ok(-1)
    } else {
        Err(Error::Sign("image meets both components of the stable manifold".into()))
    }
}

fn signed_cone(cone: &ConeCertificate, coordinate: usize, component: i8, expected: i8) -> Result<SignCertificate> {
    sign_from_cone(cone, coordinate, component).and_then(|c| {
        if c.sign == expected {
            Ok(c)
        } else {
            Err(Error::Sign(format!(
                "x{coordinate} − x*{coordinate} has sign {:+} on the component used, {expected:+} needed",
                c.sign
            )))
        }
    })
}

fn tail(spec: &TailSpec, rate: &ManifoldLyapunovCertificate) -> Result<Interval> {
    match spec.formula {
        TailFormula::Power { m } => match rate.kind {
            ManifoldKind::Stable => tail_time_stable(m, spec.p1, rate),
            ManifoldKind::Unstable => tail_time_unstable(m, spec.p1, rate),
        },
        TailFormula::Canard { side } => tail_time_canard(side, spec.p1, rate),
    }
}

fn hull_all(xs: &[Interval]) -> Result<Interval> {
    let mut it = xs.iter();
    let first = *it.next().ok_or_else(|| Error::Invalid("no pieces contribute".into()))?;
    Ok(it.fold(first, |h, x| h.hull(x)))
}

fn role_of(kind: ScenarioKind, name: &str) -> TimeRole {
    match (kind, name) {
        (_, "departure_tail") => TimeRole::Departure,
        (ScenarioKind::Compacton, _) => TimeRole::SupportWidth,
        (ScenarioKind::Front, _) => TimeRole::Passage,
        _ => TimeRole::Arrival,
    }
}

struct Runner {
    cfg: ScenarioConfig,
    field: DesingularizedField,
    params: IVector,
    report: Report,
}

impl Runner {
    fn record<T>(&mut self, stage: &str, check: Check, entry: &str, r: Result<T>, detail: impl FnOnce(&T) -> String) -> Option<T> {
        let (ok, detail, v) = match r {
            Ok(v) => (true, detail(&v), Some(v)),
            Err(e) => (false, e.to_string(), None),
        };
        self.report.verdicts.push(Verdict {
            stage: stage.to_string(),
            check,
            entry: entry.to_string(),
            ok,
            detail,
        });
        v
    }

    fn equilibrium(&mut self, name: &str, s: &EquilibriumSettings) -> Option<EquilibriumCertificate> {
        let mu0 = self.params.mid();
        let field = self.field.clone();
        let x0 = refine_equilibrium(&*field.base, &s.x0, &mu0);
        let req = BlockRequest {
            field: &*field.base,
            x0: &x0,
            mu0: &mu0,
            params: &self.params,
        };
        let built = match (&s.radii, &s.shape) {
            (Some(r), _) if s.predictor_corrector => build_block_pc(&req, r),
            (Some(r), _) => build_block(&req, r),
            (None, shape) => {
                let ones = vec![1.0; x0.len()];
                radius_sweep(&req, shape.as_deref().unwrap_or(&ones), s.predictor_corrector)
            }
        };
        let block = self.record(&format!("{name}_block"), Check::Block, name, built, |b| {
            format!("isolating block with radii {:?}", b.hset.radii)
        })?;
        self.report.blocks.push(BlockEntry {
            name: name.to_string(),
            block: block.clone(),
        });
        let eq = certify_equilibrium(&block, &*field.base, &self.params);
        let eq = self.record(&format!("{name}_equilibrium"), Check::Equilibrium, name, eq, |e| {
            format!("equilibrium core {:?}, hyperbolic {}", e.core.iter().map(|c| c.render()).collect::<Vec<_>>(), e.hyperbolic)
        })?;
        self.report.eigen.push(EigenEntry {
            name: name.to_string(),
            hyperbolic: eq.hyperbolic,
            core: eq.core.clone(),
            eigen: eq.eigen.clone(),
        });
        Some(eq)
    }

    fn cone(&mut self, eq_name: &str, eq: &EquilibriumCertificate, kind: ManifoldKind, s: ConeSettings) -> Option<(ConeCertificate, ManifoldLyapunovCertificate)> {
        let name = format!(
            "{eq_name}_{}",
            match kind {
                ManifoldKind::Stable => "stable",
                ManifoldKind::Unstable => "unstable",
            }
        );
        let mut e = ConeEntry {
            name: name.clone(),
            equilibrium: eq_name.to_string(),
            kind,
            m: s.m,
            ell: s.ell,
            cone: None,
            rate: None,
        };
        let field = self.field.clone();
        let cone = verify_cone_condition(&*field.base, eq, kind, s.m, s.ell);
        let cone = self.record(&format!("{name}_cone"), Check::Cone, &name, cone, |c| {
            format!("cone condition with M = {} on radii {:?}", c.m, c.hset.radii)
        });
        let Some(cone) = cone else {
            self.report.cones.push(e);
            return None;
        };
        e.cone = Some(cone.clone());
        let rate = match kind {
            ManifoldKind::Stable => stable_manifold_rate(&*field.base, eq, &cone),
            ManifoldKind::Unstable => unstable_manifold_rate(&*field.base, eq, &cone),
        };
        let rate = self.record(&format!("{name}_rate"), Check::Rate, &name, rate, |r| {
            format!("rate {} with level bound {}", r.rate.render(), r.level_bound.render())
        });
        e.rate = rate.clone();
        self.report.cones.push(e);
        Some((cone, rate?))
    }

    /// Sign certificate on the manifold of `cone_name`; the component is
    /// `component`, or read off the image of a covering.
    fn sign(
        &mut self,
        name: &str,
        cone_name: &str,
        cone: &ConeCertificate,
        component: std::result::Result<i8, ComponentSource>,
        expected: i8,
    ) -> Option<SignCertificate> {
        let (component, from) = match component {
            Ok(c) => (Some(c), None),
            Err(src) => {
                let c = image_component(&self.report, &src);
                let c = self.record(&format!("{name}_component"), Check::Sign, name, c, |c| format!("component {c:+}"));
                (c, Some(src))
            }
        };
        let mut e = SignEntry {
            name: name.to_string(),
            cone: cone_name.to_string(),
            coordinate: 0,
            component: component.unwrap_or(0),
            expected,
            component_from: from,
            certificate: None,
        };
        let Some(component) = component else {
            self.report.signs.push(e);
            return None;
        };
        let c = self.record(name, Check::Sign, name, signed_cone(cone, 0, component, expected), |c| {
            format!("x{} − x*{} has sign {:+} on component {:+}", c.coordinate, c.coordinate, c.sign, c.component)
        });
        e.certificate = c.clone();
        self.report.signs.push(e);
        c
    }

    fn covering(
        &mut self,
        name: &str,
        source: &str,
        initial: &AffineSet,
        axis: usize,
        target: &HSet,
        tau: f64,
    ) -> Option<(Vec<TrajectoryEnclosure>, CoveringCertificate)> {
        let pieces = self.cfg.integrator.pieces;
        let trajs = subdivide_and_integrate(&self.field, initial, &self.params, axis, pieces, tau, self.cfg.lohner())
            .and_then(|t| image_in_target(&t, axis, target, self.params.len()).map(|img| (t, img)));
        let (trajs, image) = self.record(&format!("{name}_integration"), Check::Integration, name, trajs, |(t, _)| {
            format!("{} pieces over τ = {}", t.len(), tau)
        })?;
        let flow_time = trajs.iter().map(|t| t.total_time()).reduce(|a, b| a.hull(&b)).unwrap_or(Interval::ZERO);
        self.finish_covering(name, source, target, flow_time, image, trajs)
    }

    fn finish_covering(
        &mut self,
        name: &str,
        source: &str,
        target: &HSet,
        flow_time: Interval,
        image: CoveringImage,
        trajs: Vec<TrajectoryEnclosure>,
    ) -> Option<(Vec<TrajectoryEnclosure>, CoveringCertificate)> {
        let cert = verify_covering(&image, target).map(|ev| CoveringCertificate {
            source: source.to_string(),
            target: target.clone(),
            flow_time,
            u_dim: target.u_dim,
            geometry_evidence: ev,
        });
        let cert = self.record(&format!("{name}_covering"), Check::Covering, name, cert, covering_detail);
        self.report.coverings.push(CoveringEntry {
            name: name.to_string(),
            source: source.to_string(),
            target: target.clone(),
            flow_time,
            image,
            certificate: cert.clone(),
        });
        Some((trajs, cert?))
    }

    fn orbit(&mut self, covering: &str, initial_cone: Option<&str>, terminal_cone: &str) -> Option<()> {
        let e = OrbitEntry {
            name: "connecting_orbit".into(),
            covering: covering.to_string(),
            initial_cone: initial_cone.map(str::to_string),
            terminal_cone: terminal_cone.to_string(),
        };
        let r = check_orbit(&self.report, &e);
        self.report.orbits.push(e);
        self.record("connecting_orbit", Check::Orbit, "connecting_orbit", r, |d: &String| d.clone()).map(|_| ())
    }

    fn time(&mut self, name: &str, parts: TimeParts) -> Option<TimeEnclosure> {
        let role = role_of(self.cfg.kind, name);
        let r = assemble_time(&self.report, &parts, role);
        let t = self.record(name, Check::Time, name, r, |t| {
            format!("{} = segment {} + tail {}", t.value.render(), t.segment.render(), t.tail.render())
        })?;
        self.report.times.push(TimeEntry {
            name: name.to_string(),
            parts,
            time: t.clone(),
        });
        Some(t)
    }

    fn profile(&mut self, name: &str, r: Result<WaveProfile>) {
        if let Some(p) = self.record(&format!("{name}_profile"), Check::Profile, name, r, |p| {
            format!("{} samples", p.samples.len())
        }) {
            self.report.profiles.push(ProfileEntry {
                name: name.to_string(),
                profile: p,
            });
        }
    }

    fn stride(&self, len: usize) -> usize {
        let n = self.cfg.profile_samples.unwrap_or(400).max(1);
        len.div_ceil(n).max(1)
    }

    fn segments(&mut self, stage: &str, trajs: &[TrajectoryEnclosure], used: &[usize], f: impl Fn(&TrajectoryEnclosure) -> Result<Interval> + Sync) -> Option<Vec<Interval>> {
        let r: Result<Vec<Interval>> = used.par_iter().map(|&i| f(&trajs[i]).map_err(|e| e.in_piece(i))).collect();
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.record::<()>(stage, Check::Time, stage, Err(e), |_| String::new());
                None
            }
        }
    }
}

fn covering_detail(c: &CoveringCertificate) -> String {
    let e = &c.geometry_evidence;
    format!(
        "orientation {:+}, gaps {:e} (expanding) and {:e} (contracting)",
        e.orientation, e.gap_unstable, e.gap_stable
    )
}

fn check_orbit(report: &Report, e: &OrbitEntry) -> Result<String> {
    let cov = entry(&report.coverings, &e.covering, |c| &c.name)?;
    let cert = cov.certificate.clone().ok_or_else(|| Error::Covering("covering not verified".into()))?;
    let cone_of = |n: &str| -> Result<ConeCertificate> {
        entry(&report.cones, n, |c| &c.name)?
            .cone
            .clone()
            .ok_or_else(|| Error::ConeViolation(format!("{n} not verified")))
    };
    let initial = e.initial_cone.as_deref().map(cone_of).transpose()?;
    let terminal = cone_of(&e.terminal_cone)?;
    let o = assemble_connecting_orbit(vec![cert], &cov.source, initial.as_ref(), &terminal)?;
    Ok(format!("chain of {} covering into the stable manifold", o.chain.len()))
}

fn assemble_time(report: &Report, parts: &TimeParts, role: TimeRole) -> Result<TimeEnclosure> {
    match parts {
        TimeParts::Assembled {
            covering,
            filter,
            pieces,
            segments,
            tails,
        } => {
            let cov = entry(&report.coverings, covering, |c| &c.name)?;
            let (core, m) = strip_data(report, cov)?;
            if &select_pieces(&cov.image, *filter, &core, m) != pieces || pieces.len() != segments.len() {
                return Err(Error::Invalid("piece selection differs from the covering image".into()));
            }
            let seg = hull_all(segments)?;
            let mut t = Interval::ZERO;
            for s in tails {
                let rate = entry(&report.cones, &s.cone, |c| &c.name)?
                    .rate
                    .as_ref()
                    .ok_or_else(|| Error::NoDecay(format!("{} has no rate", s.cone)))?;
                t = t + tail(s, rate)?;
            }
            Ok(total_time(seg, t, role))
        }
        TimeParts::Tail { tails } => {
            let mut t = Interval::ZERO;
            for s in tails {
                let rate = entry(&report.cones, &s.cone, |c| &c.name)?
                    .rate
                    .as_ref()
                    .ok_or_else(|| Error::NoDecay(format!("{} has no rate", s.cone)))?;
                t = t + tail(s, rate)?;
            }
            Ok(total_time(Interval::ZERO, t, role))
        }
        TimeParts::Sum { of } => {
            let mut it = of.iter().map(|n| entry(&report.times, n, |t| &t.name).map(|t| &t.time));
            let first = it.next().ok_or_else(|| Error::Invalid("empty sum".into()))??.clone();
            it.try_fold(TimeEnclosure { role, ..first }, |acc, t| Ok(acc.combine(t?, role)))
        }
    }
}

/// Equilibrium core and `M` of the stable cone at the target of `cov`.
fn strip_data(report: &Report, cov: &CoveringEntry) -> Result<(IVector, f64)> {
    for c in &report.cones {
        if let Some(cert) = &c.cone {
            if cert.hset == cov.target {
                let eq = entry(&report.eigen, &c.equilibrium, |e| &e.name)?;
                return Ok((eq.core.clone(), cert.m));
            }
        }
    }
    Ok((IVector::zeros(cov.target.dim()), f64::INFINITY))
}

/// Run the whole pipeline. Stages after the first failure are skipped; the
/// report keeps every certificate obtained so far.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Report> {
    let field = cfg.field()?;
    let params = cfg.param_box()?;
    if params.len() != field.param_dim() {
        return Err(Error::Config(format!(
            "system {} takes {} parameters, config gives {}",
            cfg.system,
            field.param_dim(),
            params.len()
        )));
    }
    let mut r = Runner {
        cfg: cfg.clone(),
        field,
        params,
        report: Report {
            scenario: cfg.name.clone(),
            config: Some(cfg.clone()),
            ..Report::default()
        },
    };
    let _ = match cfg.kind {
        ScenarioKind::Front | ScenarioKind::Compacton => run_wave(&mut r),
        ScenarioKind::Oscillatory => run_oscillatory(&mut r),
        ScenarioKind::Canard => run_canard(&mut r),
    };
    Ok(r.report)
}

fn need<T: Clone>(v: &Option<T>, what: &str) -> Result<T> {
    v.clone().ok_or_else(|| Error::Config(format!("missing {what}")))
}

fn run_wave(r: &mut Runner) -> Option<()> {
    let cfg = r.cfg.clone();
    let front = cfg.kind == ScenarioKind::Front;
    let (dep, arr, tau, m) = match (|| {
        Ok::<_, Error>((
            need(&cfg.departure, "departure")?,
            need(&cfg.arrival, "arrival")?,
            need(&cfg.tau, "tau")?,
            cfg.exponent()?,
        ))
    })() {
        Ok(v) => v,
        Err(e) => return r.record::<()>("config", Check::Block, "config", Err(e), |_| String::new()),
    };
    let power = Integrand::Power { coord: 0, m };
    let side = dep.exit_side.unwrap_or(1);

    let eq0 = r.equilibrium("departure", &dep)?;
    let (ucone, urate) = r.cone("departure", &eq0, ManifoldKind::Unstable, need(&dep.cone, "departure cone").ok()?)?;
    let target_eq = if front { r.equilibrium("arrival", &arr)? } else { eq0.clone() };
    let target_name = if front { "arrival" } else { "departure" };
    let (scone, srate) = r.cone(target_name, &target_eq, ManifoldKind::Stable, need(&arr.cone, "arrival cone").ok()?)?;

    let face = exit_of_block(&eq0.block, &ucone.hset, 0, side);
    let face = r.record("exit_face", Check::Covering, "connection", face, |f| {
        format!("face y{} on side {:+}", f.coord, f.side)
    })?;
    let (trajs, _) = r.covering("connection", "departure unstable face", &face.set, face.unstable_axis, &scone.hset, tau)?;
    r.orbit("connection", Some("departure_unstable"), &format!("{target_name}_stable"))?;

    // An end is singular when φ vanishes there; only those ends carry a tail
    // and a sign certificate.
    let singular = |h: &HSet| h.state_hull(&r.params)[0].contains(0.0);
    let dep_singular = singular(&eq0.block.hset);
    let arr_singular = singular(&target_eq.block.hset);
    let mut tails = Vec::new();
    if dep_singular {
        r.sign("departure_sign", "departure_unstable", &ucone, Ok(side), 1)?;
        tails.push(TailSpec {
            cone: "departure_unstable".into(),
            formula: TailFormula::Power { m },
            p1: frame_row_bound(&ucone.hset, 0),
        });
    }
    if arr_singular {
        let src = ComponentSource {
            covering: "connection".into(),
            filter: PieceFilter::All,
        };
        r.sign("arrival_sign", &format!("{target_name}_stable"), &scone, Err(src), 1)?;
        tails.push(TailSpec {
            cone: format!("{target_name}_stable"),
            formula: TailFormula::Power { m },
            p1: frame_row_bound(&scone.hset, 0),
        });
    }
    let departure_tail = if dep_singular { tail(&tails[0], &urate).ok()? } else { Interval::ZERO };
    let arrival_tail = if arr_singular { tail(tails.last()?, &srate).ok()? } else { Interval::ZERO };

    let all: Vec<usize> = (0..trajs.len()).collect();
    let speed = r.params[0];
    let stride = r.stride(trajs[0].len());
    if front {
        let level = cfg.level.unwrap_or(0.5);
        // The regular end must stay above the level on its whole cone.
        let regular = if dep_singular { &scone.hset } else { &ucone.hset };
        if regular.state_hull(&r.params)[0].lo() <= level {
            let e = Error::Invalid(format!("the cone at the regular end reaches φ ≤ {level}"));
            return r.record::<()>("phi_below_level", Check::Time, "phi_below_level", Err(e), |_| String::new());
        }
        let segs = r.segments("phi_below_level", &trajs, &all, |t| segment_time_below(t, power, level))?;
        r.time(
            "phi_below_level",
            TimeParts::Assembled {
                covering: "connection".into(),
                filter: PieceFilter::All,
                pieces: all.clone(),
                segments: segs,
                tails,
            },
        )?;
        let anchor = if dep_singular {
            Anchor::Start(departure_tail)
        } else {
            Anchor::End(-arrival_tail)
        };
        let p = emit_profile(&trajs, power, anchor, ProfileKind::Front, speed, stride);
        r.profile("front", p);
    } else {
        let segs = r.segments("support_width", &trajs, &all, |t| segment_time(t, power))?;
        let t = r.time(
            "support_width",
            TimeParts::Assembled {
                covering: "connection".into(),
                filter: PieceFilter::All,
                pieces: all.clone(),
                segments: segs,
                tails,
            },
        )?;
        let p = emit_profile(&trajs, power, Anchor::Start(departure_tail), ProfileKind::Compacton, speed, stride).map(|mut p| {
            p.support = t.value;
            p
        });
        r.profile("compacton", p);
    }
    Some(())
}

fn run_oscillatory(r: &mut Runner) -> Option<()> {
    let cfg = r.cfg.clone();
    let (dep, arr, cap, m) = match (|| {
        Ok::<_, Error>((
            need(&cfg.departure, "departure")?,
            need(&cfg.arrival, "arrival")?,
            need(&cfg.tau_cap, "tau_cap")?,
            cfg.exponent()?,
        ))
    })() {
        Ok(v) => v,
        Err(e) => return r.record::<()>("config", Check::Block, "config", Err(e), |_| String::new()),
    };
    let side = dep.exit_side.unwrap_or(1);
    let eq0 = r.equilibrium("departure", &dep)?;
    let mut exit_set = eq0.block.hset.clone();
    if let Some(cs) = dep.cone {
        let (ucone, _) = r.cone("departure", &eq0, ManifoldKind::Unstable, cs)?;
        exit_set = ucone.hset.clone();
        r.sign("departure_sign", "departure_unstable", &ucone, Ok(side), 1)?;
        let spec = TailSpec {
            cone: "departure_unstable".into(),
            formula: TailFormula::Power { m },
            p1: frame_row_bound(&ucone.hset, 0),
        };
        r.time("departure_tail", TimeParts::Tail { tails: vec![spec] })?;
    }
    let sink = r.equilibrium("arrival", &arr)?;
    let n = sink.block.hset.dim();
    let y = IMatrix::identity(n);
    let field = r.field.clone();
    let ok = verify_quadratic_lyapunov(&*field.base, &sink.block.hset, &r.params, &y);
    r.report.lyapunov.push(LyapunovEntry {
        name: "arrival_lyapunov".into(),
        equilibrium: "arrival".into(),
        y,
        verified: ok,
    });
    let lyap = if ok {
        Ok(())
    } else {
        Err(Error::NoDecay("AᵀY + YA is not negative definite on the sink block".into()))
    };
    r.record("arrival_lyapunov", Check::Lyapunov, "arrival_lyapunov", lyap, |_| {
        "|y − y*|² decreases on the sink block".into()
    })?;
    let capture = sink.block.hset.with_radii(capture_radii(&sink));

    let face = exit_of_block(&eq0.block, &exit_set, 0, side);
    let face = r.record("exit_face", Check::Covering, "capture", face, |f| {
        format!("face y{} on side {:+}", f.coord, f.side)
    })?;
    let pieces = face.set.subdivide(face.unstable_axis, cfg.integrator.pieces);
    let lohner = cfg.lohner();
    let params = r.params.clone();
    let runs: Result<Vec<(TrajectoryEnclosure, Interval)>> = pieces
        .par_iter()
        .enumerate()
        .map(|(i, p)| integrate_until_inside(&field, p, &params, &capture, cap, lohner).map_err(|e| e.in_piece(i)))
        .collect();
    let runs = runs.and_then(|v| {
        let trajs: Vec<TrajectoryEnclosure> = v.iter().map(|x| x.0.clone()).collect();
        let l = field.param_dim();
        let (lm, z) = capture.augmented_coord_map(l);
        let image = CoveringImage {
            edges: Vec::new(),
            pieces: trajs.iter().map(|t| t.final_set.affine_image(&lm, &z, None)).collect(),
        };
        let entry = v.iter().map(|x| x.1).reduce(|a, b| a.hull(&b)).unwrap_or(Interval::ZERO);
        Ok((trajs, image, entry))
    });
    let (trajs, image, entry_time) = r.record("capture_integration", Check::Integration, "capture", runs, |(t, _, e)| {
        format!("{} pieces enter the capture box by τ ∈ {}", t.len(), e.render())
    })?;
    let (trajs, _) = r.finish_covering("capture", "departure unstable face", &capture, entry_time, image, trajs)?;
    // Pieces stop at different steps; the profile follows the first one.
    let stride = r.stride(trajs[0].len());
    let p = emit_profile(&trajs[..1], Integrand::Power { coord: 0, m }, Anchor::Start(Interval::ZERO), ProfileKind::Oscillatory, r.params[0], stride);
    r.profile("oscillatory", p);
    Some(())
}

fn run_canard(r: &mut Runner) -> Option<()> {
    let cfg = r.cfg.clone();
    let arr = match need(&cfg.arrival, "arrival") {
        Ok(v) => v,
        Err(e) => return r.record::<()>("config", Check::Block, "config", Err(e), |_| String::new()),
    };
    let eq = r.equilibrium("fold", &arr)?;
    let (scone, _) = r.cone("fold", &eq, ManifoldKind::Stable, need(&arr.cone, "fold cone").ok()?)?;
    let p1 = frame_row_bound(&scone.hset, 0);
    let mut totals = Vec::new();
    for br in &cfg.branches {
        let boxed = (|| -> Result<AffineSet> {
            let b = parse_decimal_interval(&br.b)?;
            let c = Interval::from_decimal(&br.c)?;
            Ok(AffineSet::from_box(&IVector::new(vec![b, c]).concat(&r.params)))
        })();
        let initial = r.record(&format!("{}_source", br.name), Check::Integration, &br.name, boxed, |_| {
            "initial segment".into()
        })?;
        let (trajs, _) = r.covering(&br.name, &format!("segment b ∈ {}, c = {}", br.b, br.c), &initial, 0, &scone.hset, br.tau)?;
        let image = r.report.coverings.last().expect("just pushed").image.clone();
        let used = select_pieces(&image, PieceFilter::StableStrip, &eq.core, scone.m);
        let (integrand, expected) = match br.side {
            FoldSide::BelowFold => (Integrand::OneMinusSquare { coord: 0 }, -1),
            FoldSide::AboveFold => (Integrand::SquareMinusOne { coord: 0 }, 1),
        };
        let src = ComponentSource {
            covering: br.name.clone(),
            filter: PieceFilter::StableStrip,
        };
        r.sign(&format!("{}_sign", br.name), "fold_stable", &scone, Err(src), expected)?;
        let name = format!("{}_time", br.name);
        let segs = r.segments(&name, &trajs, &used, |t| segment_time(t, integrand))?;
        r.time(
            &name,
            TimeParts::Assembled {
                covering: br.name.clone(),
                filter: PieceFilter::StableStrip,
                pieces: used,
                segments: segs,
                tails: vec![TailSpec {
                    cone: "fold_stable".into(),
                    formula: TailFormula::Canard { side: br.side },
                    p1,
                }],
            },
        )?;
        totals.push(name);
    }
    if totals.len() > 1 {
        r.time("arrival_total", TimeParts::Sum { of: totals })?;
    }
    Some(())
}

/// Verdicts recomputed from a report's evidence, without integration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayOutcome {
    pub verdicts: Vec<Verdict>,
    /// Stages whose recomputed outcome or evidence differs from the report.
    pub mismatches: Vec<String>,
}

impl ReplayOutcome {
    pub fn identical(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.identical() && !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.ok)
    }
}

struct Replayer<'a> {
    report: &'a Report,
    field: DesingularizedField,
    params: IVector,
}

impl Replayer<'_> {
    fn equilibrium(&self, name: &str) -> Result<EquilibriumCertificate> {
        let b = &entry(&self.report.blocks, name, |b| &b.name)?.block;
        let e = entry(&self.report.eigen, name, |e| &e.name)?;
        Ok(EquilibriumCertificate {
            block: b.clone(),
            params: self.params.clone(),
            hyperbolic: e.hyperbolic,
            eigen: e.eigen.clone(),
            core: e.core.clone(),
        })
    }

    fn check(&self, v: &Verdict) -> Result<()> {
        let rep = self.report;
        let same = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::Invalid(format!("recomputed {what} differs from the stored one")))
            }
        };
        match v.check {
            Check::Block => {
                let b = &entry(&rep.blocks, &v.entry, |b| &b.name)?.block;
                let again = b.resized(&*self.field.base, b.hset.radii.clone())?;
                same(&again == b, "block")
            }
            Check::Equilibrium => {
                let b = &entry(&rep.blocks, &v.entry, |b| &b.name)?.block;
                let e = entry(&rep.eigen, &v.entry, |e| &e.name)?;
                let c = certify_equilibrium(b, &*self.field.base, &self.params)?;
                same(c.core == e.core && c.eigen == e.eigen && c.hyperbolic == e.hyperbolic, "equilibrium")
            }
            Check::Cone | Check::Rate => {
                let e = entry(&rep.cones, &v.entry, |c| &c.name)?;
                let eq = self.equilibrium(&e.equilibrium)?;
                let cone = verify_cone_condition(&*self.field.base, &eq, e.kind, e.m, e.ell);
                same(cone.as_ref().ok() == e.cone.as_ref(), "cone certificate")?;
                let cone = cone?;
                if v.check == Check::Cone {
                    return Ok(());
                }
                let rate = match e.kind {
                    ManifoldKind::Stable => stable_manifold_rate(&*self.field.base, &eq, &cone),
                    ManifoldKind::Unstable => unstable_manifold_rate(&*self.field.base, &eq, &cone),
                };
                same(rate.as_ref().ok() == e.rate.as_ref(), "rate")?;
                rate.map(|_| ())
            }
            Check::Integration => {
                if v.stage.ends_with("_source") {
                    return Ok(());
                }
                entry(&rep.coverings, &v.entry, |c| &c.name).map(|_| ())
            }
            Check::Covering => {
                if v.stage == "exit_face" {
                    let dep = self.equilibrium("departure")?;
                    let h = match rep.cones.iter().find(|c| c.name == "departure_unstable") {
                        Some(c) => c.cone.as_ref().map(|c| c.hset.clone()).ok_or_else(|| Error::ConeViolation("departure cone".into()))?,
                        None => dep.block.hset.clone(),
                    };
                    let side = rep
                        .config
                        .as_ref()
                        .and_then(|c| c.departure.as_ref())
                        .and_then(|d| d.exit_side)
                        .unwrap_or(1);
                    return exit_of_block(&dep.block, &h, 0, side).map(|_| ());
                }
                let e = entry(&rep.coverings, &v.entry, |c| &c.name)?;
                let ev = verify_covering(&e.image, &e.target);
                let stored = e.certificate.as_ref().map(|c| &c.geometry_evidence);
                same(ev.as_ref().ok() == stored, "covering evidence")?;
                if let Some(c) = &e.certificate {
                    same(c.target == e.target && c.flow_time == e.flow_time, "covering data")?;
                    c.recheck()?;
                }
                ev.map(|_| ())
            }
            Check::Orbit => {
                let e = entry(&rep.orbits, &v.entry, |o| &o.name)?;
                check_orbit(rep, e).map(|_| ())
            }
            Check::Lyapunov => {
                let e = entry(&rep.lyapunov, &v.entry, |l| &l.name)?;
                let eq = self.equilibrium(&e.equilibrium)?;
                let ok = verify_quadratic_lyapunov(&*self.field.base, &eq.block.hset, &self.params, &e.y);
                same(ok == e.verified, "Lyapunov check")?;
                if ok {
                    Ok(())
                } else {
                    Err(Error::NoDecay("not negative definite".into()))
                }
            }
            Check::Sign => {
                let e = entry(&rep.signs, &v.entry, |s| &s.name)?;
                if v.stage.ends_with("_component") {
                    let src = e.component_from.as_ref().ok_or_else(|| Error::Sign("no component source".into()))?;
                    let c = image_component(rep, src)?;
                    return same(c == e.component, "component");
                }
                let cone = entry(&rep.cones, &e.cone, |c| &c.name)?
                    .cone
                    .as_ref()
                    .ok_or_else(|| Error::ConeViolation(format!("{} not verified", e.cone)))?;
                let s = signed_cone(cone, e.coordinate, e.component, e.expected);
                same(s.as_ref().ok() == e.certificate.as_ref(), "sign certificate")?;
                s.map(|_| ())
            }
            Check::Time => {
                let e = entry(&rep.times, &v.entry, |t| &t.name)?;
                let kind = rep.config.as_ref().map(|c| c.kind).unwrap_or(ScenarioKind::Front);
                let t = assemble_time(rep, &e.parts, role_of(kind, &e.name))?;
                same(t == e.time, "time enclosure")
            }
            Check::Profile => {
                let e = entry(&rep.profiles, &v.entry, |p| &p.name)?;
                same(e.profile.xi_is_monotone(), "profile ordering")
            }
        }
    }
}

/// Re-verify every stage of `report` from its stored evidence.
pub fn replay(report: &Report) -> Result<ReplayOutcome> {
    let cfg = report
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("report carries no config".into()))?;
    let rp = Replayer {
        report,
        field: cfg.field()?,
        params: cfg.param_box()?,
    };
    let mut out = ReplayOutcome {
        verdicts: Vec::new(),
        mismatches: Vec::new(),
    };
    for v in &report.verdicts {
        let r = rp.check(v);
        let ok = r.is_ok();
        if ok != v.ok {
            out.mismatches.push(format!(
                "{}: stored {}, replayed {}{}",
                v.stage,
                v.ok,
                ok,
                r.err().map(|e| format!(" ({e})")).unwrap_or_default()
            ));
        }
        out.verdicts.push(Verdict {
            ok,
            ..v.clone()
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_intervals_enclose() {
        let k = parse_decimal_interval("[0.0999, 0.1001]").unwrap();
        assert!(k.lo() < 0.0999 && k.hi() > 0.1001);
        assert!(parse_decimal_interval("[1,0]").is_err());
        assert!(parse_decimal_interval("0.2").unwrap().contains(0.2));
    }

    #[test]
    fn config_round_trip() {
        let s = r#"
name = "t"
kind = "compacton"
system = "cubic"
a = "0.3"
exponent = "3/4"
params = ["[-1.5e-6,1.5e-6]"]
tau = 1.0
[integrator]
order = 8
step = 0.01
pieces = 2
[departure]
x0 = [0.0, 0.0]
shape = [1.0, 0.1]
cone = { M = 20.0, ell = 0.0015 }
exit_side = 1
"#;
        let c = ScenarioConfig::from_toml(s).unwrap();
        assert_eq!(c.kind, ScenarioKind::Compacton);
        assert_eq!(c.departure.as_ref().unwrap().cone.unwrap().m, 20.0);
        assert!(c.departure.as_ref().unwrap().predictor_corrector);
        assert!(ScenarioConfig::from_toml("name = 1").is_err());
    }

    #[test]
    fn strip_filter() {
        let core = IVector::zeros(2);
        let p = |a: (f64, f64), b: (f64, f64)| IVector::new(vec![Interval::new(a.0, a.1), Interval::new(b.0, b.1)]);
        assert!(meets_stable_strip(&p((0.05, 0.2), (-1.0, 1.0)), &core, 10.0));
        assert!(!meets_stable_strip(&p((0.2, 0.3), (-1.0, 1.0)), &core, 10.0));
    }
}
