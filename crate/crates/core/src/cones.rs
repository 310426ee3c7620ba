//! Cone conditions, Lyapunov rates on invariant manifolds and quadratic
//! Lyapunov functions, all in the coordinates of an h-set.

use crate::blocks::{block_jet, EquilibriumCertificate, IsolatingBlock};
use crate::error::{Error, Result};
use crate::hset::HSet;
use crate::interval::round::{add_up, mul_up};
use crate::interval::{IMatrix, IVector, Interval};
use crate::linalg::{log_norm_bounds, spectral_norm_bounds};
use crate::systems::ParamVectorField;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifoldKind {
    Stable,
    Unstable,
}

/// Bounds of the four cone rates. The rigorous end is `hi` for `mu_s`,
/// `mu_ss` and `lo` for `xi_u`, `xi_su`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeRates {
    pub mu_s: Interval,
    pub xi_u: Interval,
    pub mu_ss: Interval,
    pub xi_su: Interval,
}

impl ConeRates {
    /// First violated inequality, if any.
    pub fn violation(&self) -> Option<String> {
        let (ms, xu, mss, xsu) = (self.mu_s.hi(), self.xi_u.lo(), self.mu_ss.hi(), self.xi_su.lo());
        if !(ms < 0.0) {
            Some(format!("mu_s < 0 fails: mu_s <= {ms:e}"))
        } else if !(xu > 0.0) {
            Some(format!("xi_u > 0 fails: xi_u >= {xu:e}"))
        } else if !(mss < xu) {
            Some(format!("mu_ss < xi_u fails: {mss:e} vs {xu:e}"))
        } else if !(ms < xsu) {
            Some(format!("mu_s < xi_su fails: {ms:e} vs {xsu:e}"))
        } else {
            None
        }
    }
}

/// Extension of a block by `ell` along the manifold direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    pub ell: f64,
    pub radii: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeCertificate {
    pub kind: ManifoldKind,
    #[serde(rename = "M")]
    pub m: f64,
    pub rates: ConeRates,
    pub extended: Option<Extension>,
    pub lipschitz_bound: f64,
    /// Extended set, verified isolating with the same face classes.
    pub hset: HSet,
    pub params: IVector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldLyapunovCertificate {
    pub kind: ManifoldKind,
    #[serde(rename = "M")]
    pub m: f64,
    pub rate: Interval,
    pub level_bound: Interval,
    pub decay_factor: Interval,
    pub near_diagonal: bool,
}

struct Blocks {
    aa: IMatrix,
    ab: IMatrix,
    ba: IMatrix,
    bb: IMatrix,
    a_mu: IMatrix,
    b_mu: IMatrix,
}

fn split(field: &dyn ParamVectorField, hset: &HSet, k: &IVector) -> Result<Blocks> {
    let (n, u) = (hset.dim(), hset.u_dim);
    if u == 0 || u == n {
        return Err(Error::Invalid("cone conditions need both stable and unstable directions".into()));
    }
    let jet = block_jet(field, hset, k, &hset.coord_box())?;
    let p = k.len();
    Ok(Blocks {
        aa: jet.a.submatrix(0..u, 0..u),
        ab: jet.a.submatrix(0..u, u..n),
        ba: jet.a.submatrix(u..n, 0..u),
        bb: jet.a.submatrix(u..n, u..n),
        a_mu: jet.a_mu.submatrix(0..u, 0..p),
        b_mu: jet.a_mu.submatrix(u..n, 0..p),
    })
}

fn norm(a: &IMatrix) -> Interval {
    spectral_norm_bounds(a)
}

/// Cone rates over the whole set `N × K`.
pub fn cone_rates(field: &dyn ParamVectorField, hset: &HSet, k: &IVector, m: f64) -> Result<ConeRates> {
    if !(m >= 1.0) || !m.is_finite() {
        return Err(Error::Invalid(format!("cone constant M = {m} must be at least 1")));
    }
    let b = split(field, hset, k)?;
    let mi = Interval::point(m);
    let l_bb = log_norm_bounds(&b.bb).l_upper;
    let ml_aa = log_norm_bounds(&b.aa).ml_lower;
    let (n_ab, n_ba) = (norm(&b.ab), norm(&b.ba));
    Ok(ConeRates {
        mu_s: l_bb + mi * (n_ba + norm(&b.b_mu)),
        xi_u: ml_aa - mi * (n_ab + norm(&b.a_mu)),
        mu_ss: l_bb + n_ba.checked_div(&mi)?,
        xi_su: ml_aa - n_ab.checked_div(&mi)?,
    })
}

/// Radii of the block extended by `ell` along the manifold of the given kind.
///
/// The manifold through the equilibrium is a `1/M`-Lipschitz graph, so its
/// transverse offset inside the extension is at most
/// `(R + ℓ + |core|)/M` from the equilibrium.
pub fn extended_radii(eq: &EquilibriumCertificate, kind: ManifoldKind, m: f64, ell: f64) -> Vec<f64> {
    let h = &eq.block.hset;
    let (n, u) = (h.dim(), h.u_dim);
    let along: Vec<usize> = match kind {
        ManifoldKind::Unstable => (0..u).collect(),
        ManifoldKind::Stable => (u..n).collect(),
    };
    let mut reach = 0.0f64;
    for &j in &along {
        let r = add_up(add_up(h.radii[j], ell), eq.core[j].mag());
        reach = add_up(reach, mul_up(r, r));
    }
    let offset = Interval::point(reach)
        .sqrt_truncated()
        .and_then(|r| r.checked_div(&Interval::point(m)))
        .map(|v| v.hi())
        .unwrap_or(f64::INFINITY);
    (0..n)
        .map(|j| {
            if along.contains(&j) {
                add_up(h.radii[j], ell)
            } else {
                add_up(h.radii[j], offset)
            }
        })
        .collect()
}

/// Cone condition with constant `M` on the block extended by `ell` along
/// the manifold of the given kind. The extension is re-verified as an
/// isolating block.
pub fn verify_cone_condition(
    field: &dyn ParamVectorField,
    eq: &EquilibriumCertificate,
    kind: ManifoldKind,
    m: f64,
    ell: f64,
) -> Result<ConeCertificate> {
    if !(ell >= 0.0) {
        return Err(Error::Invalid("extension must be nonnegative".into()));
    }
    let radii = extended_radii(eq, kind, m, ell);
    let ext: IsolatingBlock = eq
        .block
        .resized(field, radii.clone())
        .map_err(|e| Error::ConeViolation(format!("extended set is not isolating: {e}")))?;
    let rates = cone_rates(field, &ext.hset, &eq.params, m)?;
    if let Some(v) = rates.violation() {
        return Err(Error::ConeViolation(v));
    }
    Ok(ConeCertificate {
        kind,
        m,
        rates,
        extended: (ell > 0.0).then(|| Extension { ell, radii }),
        lipschitz_bound: 1.0 / m,
        hset: ext.hset,
        params: eq.params.clone(),
    })
}

fn level_bound(eq: &EquilibriumCertificate, cone: &ConeCertificate) -> Interval {
    let h = &cone.hset;
    let range = match cone.kind {
        ManifoldKind::Unstable => 0..h.u_dim,
        ManifoldKind::Stable => h.u_dim..h.dim(),
    };
    let mut s = Interval::ZERO;
    for j in range {
        let r = Interval::point(h.radii[j]) + Interval::point(eq.core[j].mag());
        s = s + r.sqr();
    }
    let m2 = Interval::point(cone.m).sqr();
    s * (Interval::ONE + Interval::ONE.checked_div(&m2).expect("M >= 1"))
}

/// Decay rate of `L_s = ‖σ(b)‖² + ‖b‖²` along the stable manifold inside
/// the extended set of `cone`.
pub fn stable_manifold_rate(
    field: &dyn ParamVectorField,
    eq: &EquilibriumCertificate,
    cone: &ConeCertificate,
) -> Result<ManifoldLyapunovCertificate> {
    manifold_rate(field, eq, cone, ManifoldKind::Stable)
}

/// Growth rate of `‖a‖² + ‖σ(a)‖²` along the unstable manifold.
pub fn unstable_manifold_rate(
    field: &dyn ParamVectorField,
    eq: &EquilibriumCertificate,
    cone: &ConeCertificate,
) -> Result<ManifoldLyapunovCertificate> {
    manifold_rate(field, eq, cone, ManifoldKind::Unstable)
}

fn manifold_rate(
    field: &dyn ParamVectorField,
    eq: &EquilibriumCertificate,
    cone: &ConeCertificate,
    kind: ManifoldKind,
) -> Result<ManifoldLyapunovCertificate> {
    if cone.kind != kind {
        return Err(Error::Invalid("cone certificate is for the other manifold".into()));
    }
    let h = &cone.hset;
    let b = split(field, h, &cone.params)?;
    let (n, u) = (h.dim(), h.u_dim);
    let m = Interval::point(cone.m);
    let m2 = m.sqr();
    let inv_m2 = Interval::ONE.checked_div(&m2)?;
    let cross = (m2 + Interval::ONE).checked_div(&(m2 * m))?;
    let d = &eq.block.linear;
    let (main, off, dpart) = match kind {
        ManifoldKind::Stable => (&b.bb, &b.ba, d.submatrix(u..n, u..n)),
        ManifoldKind::Unstable => (&b.aa, &b.ab, d.submatrix(0..u, 0..u)),
    };
    let main_norm = norm(main);
    let off_norm = norm(off);
    let lb = log_norm_bounds(main);
    let general = match kind {
        ManifoldKind::Stable => lb.l_upper + main_norm * inv_m2 + cross * off_norm,
        ManifoldKind::Unstable => lb.ml_lower - main_norm * inv_m2 - cross * off_norm,
    };
    // Split main = D + f̃ so the eigenvalue part enters exactly once.
    let pert = main.sub(&dpart)?;
    let lp = log_norm_bounds(&pert);
    let ld = log_norm_bounds(&dpart);
    let refined = match kind {
        ManifoldKind::Stable => ld.l_upper + lp.l_upper + main_norm * inv_m2 + cross * off_norm,
        ManifoldKind::Unstable => ld.ml_lower + lp.ml_lower - main_norm * inv_m2 - cross * off_norm,
    };
    let (rate, near_diagonal) = match kind {
        ManifoldKind::Stable if refined.hi() < general.hi() => (refined, true),
        ManifoldKind::Unstable if refined.lo() > general.lo() => (refined, true),
        _ => (general, false),
    };
    if !(match kind {
        ManifoldKind::Stable => rate.hi() < 0.0,
        ManifoldKind::Unstable => rate.lo() > 0.0,
    }) {
        return Err(Error::NoDecay(format!("{kind:?} manifold rate {rate}")));
    }
    let decay_factor = m2.checked_div(&(m2 + Interval::ONE))? * rate;
    Ok(ManifoldLyapunovCertificate {
        kind,
        m: cone.m,
        rate,
        level_bound: level_bound(eq, cone),
        decay_factor,
        near_diagonal,
    })
}

/// Whether `AᵀY + YA` is negative definite for every Jacobian `A` of the
/// field in the coordinates of `N` over `N × K`.
pub fn verify_quadratic_lyapunov(field: &dyn ParamVectorField, hset: &HSet, k: &IVector, y: &IMatrix) -> bool {
    if !y.is_square() || y.rows() != hset.dim() {
        return false;
    }
    let sym = (0..y.rows()).all(|i| (0..i).all(|j| y[(i, j)] == y[(j, i)]));
    if !sym {
        return false;
    }
    let Ok(jet) = block_jet(field, hset, k, &hset.coord_box()) else {
        return false;
    };
    let a = &jet.a;
    let Ok(m) = a.transpose().matmul(y).and_then(|l| l.add(&y.matmul(a)?)) else {
        return false;
    };
    log_norm_bounds(&m).l_upper.hi() < 0.0
}

/// Box in the coordinates of `N` inside the largest disk around the
/// equilibrium core that fits in `N`; with `Y = I`, sublevel sets of
/// `|y − y*|²` through this box stay in `N`.
pub fn capture_radii(eq: &EquilibriumCertificate) -> Vec<f64> {
    let h = &eq.block.hset;
    let core = eq.core.iter().map(|c| c.mag()).fold(0.0f64, f64::max);
    let rmin = h.radii.iter().cloned().fold(f64::INFINITY, f64::min);
    let disk = (Interval::point(rmin) - Interval::point(core) * 2.0).lo();
    let side = Interval::point(disk)
        .checked_div(&Interval::point(h.dim() as f64).sqrt_truncated().unwrap_or(Interval::point(2.0)))
        .map(|v| v.lo())
        .unwrap_or(0.0);
    vec![side.max(0.0); h.dim()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{build_block, certify_equilibrium, BlockRequest};
    use crate::systems::LinearField;

    fn saddle_cert(f: &LinearField) -> EquilibriumCertificate {
        let k = IVector::zeros(0);
        let req = BlockRequest {
            field: f,
            x0: &[0.0, 0.0],
            mu0: &[],
            params: &k,
        };
        let b = build_block(&req, &[0.5, 0.5]).unwrap();
        certify_equilibrium(&b, f, &k).unwrap()
    }

    #[test]
    fn linear_saddle_closed_forms() {
        let f = LinearField::from_f64(2, &[1.0, 0.0, 0.0, -1.0]);
        let eq = saddle_cert(&f);
        let r = cone_rates(&f, &eq.block.hset, &eq.params, 10.0).unwrap();
        assert!((r.mu_s.hi() + 1.0).abs() < 1e-12 && (r.xi_u.lo() - 1.0).abs() < 1e-12);
        assert!((r.mu_ss.hi() + 1.0).abs() < 1e-12 && (r.xi_su.lo() - 1.0).abs() < 1e-12);
        let cone = verify_cone_condition(&f, &eq, ManifoldKind::Stable, 10.0, 0.0).unwrap();
        let s = stable_manifold_rate(&f, &eq, &cone).unwrap();
        assert!((s.rate.hi() + 0.99).abs() < 1e-12, "{}", s.rate);
        let cone = verify_cone_condition(&f, &eq, ManifoldKind::Unstable, 10.0, 0.0).unwrap();
        let u = unstable_manifold_rate(&f, &eq, &cone).unwrap();
        assert!((u.rate.lo() - 0.99).abs() < 1e-12, "{}", u.rate);
        let cone = verify_cone_condition(&f, &eq, ManifoldKind::Stable, 1e3, 0.0).unwrap();
        let s = stable_manifold_rate(&f, &eq, &cone).unwrap();
        assert!((s.rate.hi() + 1.0).abs() < 1e-5);
    }

    #[test]
    fn quadratic_lyapunov_examples() {
        let k = IVector::zeros(0);
        let h = HSet::new(IVector::zeros(1), IMatrix::identity(1), 0, vec![1.0]).unwrap();
        let decay = LinearField::from_f64(1, &[-1.0]);
        assert!(verify_quadratic_lyapunov(&decay, &h, &k, &IMatrix::identity(1)));
        let h2 = HSet::new(IVector::zeros(2), IMatrix::identity(2), 1, vec![1.0, 1.0]).unwrap();
        let saddle = LinearField::from_f64(2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(!verify_quadratic_lyapunov(&saddle, &h2, &k, &IMatrix::identity(2)));
        let y = IMatrix::from_f64(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        assert!(verify_quadratic_lyapunov(&saddle, &h2, &k, &y));
    }
}
