//! Isolating blocks around numerical equilibria.
//!
//! In the coordinates `y = P⁻¹(x − x̄(μ))` with `P` diagonalizing
//! `f_x(x₀, μ₀)`, the field reads `ẏ = D y + F(y, μ)`. A box whose faces are
//! far enough from the origin relative to the residual `F` is an isolating
//! block: faces along expanding directions are exits, the others entrances.

use crate::error::{Error, Result};
use crate::hset::HSet;
use crate::interval::{IMatrix, IVector, Interval};
use crate::linalg::{approx_eigenpairs, approx_inverse, enclose_inverse, enclose_spectrum, EigenpairEnclosure};
use crate::systems::ParamVectorField;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceKind {
    Exit,
    Entrance,
}

/// A face `y_coord = side · R_coord` with the enclosure of the outward
/// normal component of the field over the whole face.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Face {
    pub coord: usize,
    pub side: i8,
    pub kind: FaceKind,
    pub outward_flow: Interval,
}

/// Disk factor for a complex pair `α ± iβ`; the h-set keeps the
/// circumscribing square.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDisk {
    pub coords: [usize; 2],
    pub alpha: f64,
    pub beta: f64,
    /// Upper bound of `√(F_j² + F_{j+1}²)` over the block.
    pub r_bar: f64,
    pub radius: f64,
    pub kind: FaceKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsolatingBlock {
    pub hset: HSet,
    /// Parameter set `K`.
    pub params: IVector,
    pub mu0: Vec<f64>,
    /// Linear part `D` in block coordinates (diagonal, or rotation blocks).
    pub linear: IMatrix,
    /// Real parts of the eigenvalues used for `D`, one per coordinate.
    pub rates: Vec<f64>,
    /// Enclosure `[δ⁻, δ⁺]` of `F_j` over the block.
    pub residuals: IVector,
    pub faces: Vec<Face>,
    pub complex_blocks: Vec<ComplexDisk>,
    pub predictor_corrector: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumCertificate {
    pub block: IsolatingBlock,
    pub params: IVector,
    pub hyperbolic: bool,
    pub eigen: Vec<EigenpairEnclosure>,
    /// Enclosure of the equilibrium in block coordinates, for all `μ ∈ K`.
    pub core: IVector,
}

/// First-order data of the field in the coordinates of an h-set.
#[derive(Clone, Debug)]
pub struct BlockJet {
    /// `P⁻¹ f(x̄(μ), μ)` over `K`.
    pub c0: IVector,
    /// `P⁻¹ f_x P` over the set.
    pub a: IMatrix,
    /// `P⁻¹ (f_x S + f_μ)` over the set.
    pub a_mu: IMatrix,
}

/// Enclosures of the field derivatives over `{x̄(μ) + P y : y ∈ coords, μ ∈ K}`.
pub fn block_jet(field: &dyn ParamVectorField, hset: &HSet, k: &IVector, coords: &IVector) -> Result<BlockJet> {
    let n = hset.dim();
    let center = hset.center_at(k);
    let x = hset.from_coords(coords, k);
    let p = &hset.frame;
    let pi = &hset.frame_inv;
    let jx = field.jacobian_x(&x, k);
    let jmu = field.jacobian_mu(&x, k);
    let a = pi.matmul(&jx)?.matmul(p)?;
    let slope = hset
        .center_shift
        .as_ref()
        .map(|s| s.slope.clone())
        .unwrap_or_else(|| IMatrix::zeros(n, k.len()));
    let a_mu = pi.matmul(&jx.matmul(&slope)?.add(&jmu)?)?;

    let direct = pi.mul_vec(&field.eval(&center, k))?;
    let c0 = if k.is_empty() || k.iter().all(|m| m.width() == 0.0) {
        direct
    } else {
        let mu0: Vec<f64> = hset
            .center_shift
            .as_ref()
            .map(|s| s.mu_ref.clone())
            .unwrap_or_else(|| k.mid());
        let mu0v = IVector::from_points(&mu0);
        let base = field.eval(&hset.center_at(&mu0v), &mu0v);
        let jxc = field.jacobian_x(&center, k);
        let jmuc = field.jacobian_mu(&center, k);
        let dg = jxc.matmul(&slope)?.add(&jmuc)?;
        let dmu = k.sub(&mu0v)?;
        let mv = pi.mul_vec(&base.add(&dg.mul_vec(&dmu)?)?)?;
        mv.intersection(&direct).unwrap_or(direct)
    };
    Ok(BlockJet { c0, a, a_mu })
}

/// Refine an approximate equilibrium by floating Newton steps.
pub fn refine_equilibrium(field: &dyn ParamVectorField, x0: &[f64], mu0: &[f64]) -> Vec<f64> {
    let mu = IVector::from_points(mu0);
    let mut x = DVector::from_column_slice(x0);
    for _ in 0..8 {
        let xv = IVector::from_points(x.as_slice());
        let f = DVector::from_vec(field.eval(&xv, &mu).mid());
        if f.amax() == 0.0 {
            break;
        }
        let j = field.jacobian_x(&xv, &mu).mid();
        let Some(ji) = approx_inverse(&j) else { break };
        let next = &x - ji * f;
        if next.iter().any(|v| !v.is_finite()) {
            break;
        }
        x = next;
    }
    x.as_slice().to_vec()
}

/// Eigenframe of `f_x(x₀, μ₀)`: columns ordered by decreasing real part,
/// complex pairs as `[Re v, Im v]`.
struct Frame {
    p: DMatrix<f64>,
    d: DMatrix<f64>,
    rates: Vec<f64>,
    u_dim: usize,
    complex: Vec<(usize, f64, f64)>,
}

fn eigenframe(j0: &DMatrix<f64>) -> Result<Frame> {
    let n = j0.nrows();
    let pairs = approx_eigenpairs(j0);
    let scale = j0.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let mut p = DMatrix::zeros(n, n);
    let mut d = DMatrix::zeros(n, n);
    let mut rates = Vec::with_capacity(n);
    let mut complex = Vec::new();
    let mut col = 0;
    for e in &pairs {
        if e.re.abs() <= 1e-10 * scale {
            return Err(Error::NonHyperbolic(format!("eigenvalue {} + {}i", e.re, e.im)));
        }
        if e.im == 0.0 {
            let mut v = DVector::from_column_slice(&e.vec_re);
            v /= v.norm();
            if let Some(first) = v.iter().find(|x| x.abs() > 1e-14) {
                if *first < 0.0 {
                    v = -v;
                }
            }
            p.set_column(col, &v);
            d[(col, col)] = e.re;
            rates.push(e.re);
            col += 1;
        } else {
            let vr = DVector::from_column_slice(&e.vec_re);
            let vi = DVector::from_column_slice(&e.vec_im);
            let s = (vr.norm_squared() + vi.norm_squared()).sqrt();
            p.set_column(col, &(vr / s));
            p.set_column(col + 1, &(vi / s));
            d[(col, col)] = e.re;
            d[(col, col + 1)] = e.im;
            d[(col + 1, col)] = -e.im;
            d[(col + 1, col + 1)] = e.re;
            rates.push(e.re);
            rates.push(e.re);
            complex.push((col, e.re, e.im));
            col += 2;
        }
    }
    if col != n {
        return Err(Error::UnverifiedEigenpair("incomplete eigenframe".into()));
    }
    let u_dim = rates.iter().filter(|r| **r > 0.0).count();
    Ok(Frame {
        p,
        d,
        rates,
        u_dim,
        complex,
    })
}

/// Inputs shared by the two block constructions.
#[derive(Clone, Debug)]
pub struct BlockRequest<'a> {
    pub field: &'a dyn ParamVectorField,
    pub x0: &'a [f64],
    pub mu0: &'a [f64],
    pub params: &'a IVector,
}

fn block_frame(req: &BlockRequest<'_>, pc: bool) -> Result<(HSet, Frame)> {
    let n = req.field.state_dim();
    if req.x0.len() != n || req.mu0.len() != req.params.len() || req.params.len() != req.field.param_dim() {
        return Err(Error::Shape("block request dimensions".into()));
    }
    let mu0 = IVector::from_points(req.mu0);
    let x0v = IVector::from_points(req.x0);
    let j0 = req.field.jacobian_x(&x0v, &mu0).mid();
    let frame = eigenframe(&j0)?;
    let mut hset = HSet::new(
        x0v.clone(),
        IMatrix::from_dmatrix(&frame.p),
        frame.u_dim,
        vec![0.0; n],
    )?;
    if pc && !req.params.is_empty() {
        let fmu = req.field.jacobian_mu(&x0v, &mu0).mid();
        let ji = approx_inverse(&j0).ok_or_else(|| Error::PossiblySingular("f_x at the equilibrium".into()))?;
        let slope = -(ji * fmu);
        hset = hset.with_center_shift(IMatrix::from_dmatrix(&slope), req.mu0.to_vec())?;
    }
    Ok((hset, frame))
}

/// Classify and check every face of the block with the given radii.
fn check_faces(
    field: &dyn ParamVectorField,
    hset: &HSet,
    params: &IVector,
    frame: &Frame,
) -> Result<(IVector, Vec<Face>, Vec<ComplexDisk>)> {
    let n = hset.dim();
    let coords = hset.coord_box();
    let jet = block_jet(field, hset, params, &coords)?;
    let d = IMatrix::from_dmatrix(&frame.d);
    let residual = jet.c0.add(&jet.a.sub(&d)?.mul_vec(&coords)?)?;
    let mut in_pair = vec![false; n];
    let mut disks = Vec::new();
    for &(j, alpha, beta) in &frame.complex {
        in_pair[j] = true;
        in_pair[j + 1] = true;
        let r_bar = (residual[j].sqr() + residual[j + 1].sqr()).sqrt_truncated()?.hi();
        let radius = hset.radii[j].min(hset.radii[j + 1]);
        let margin = Interval::point(radius) * Interval::point(alpha.abs()) - Interval::point(r_bar);
        if !margin.is_positive() {
            return Err(Error::InflateCandidate(format!(
                "disk radius {radius:e} does not dominate r̄/|α| = {:e}",
                r_bar / alpha.abs()
            )));
        }
        disks.push(ComplexDisk {
            coords: [j, j + 1],
            alpha,
            beta,
            r_bar,
            radius,
            kind: if alpha > 0.0 { FaceKind::Exit } else { FaceKind::Entrance },
        });
    }
    let mut faces = Vec::new();
    for j in (0..n).filter(|&j| !in_pair[j]) {
        let unstable = frame.rates[j] > 0.0;
        for side in [-1i8, 1] {
            let mut face = coords.clone();
            face[j] = Interval::point(side as f64 * hset.radii[j]);
            let row = IVector::new(jet.a.row(j).to_vec());
            let flow = (jet.c0[j] + row.dot(&face)?) * side as f64;
            let ok = if unstable { flow.is_positive() } else { flow.is_negative() };
            if !ok {
                return Err(Error::InflateCandidate(format!(
                    "face y{j} = {}R has outward flow {flow}",
                    if side > 0 { "+" } else { "-" }
                )));
            }
            faces.push(Face {
                coord: j,
                side,
                kind: if unstable { FaceKind::Exit } else { FaceKind::Entrance },
                outward_flow: flow,
            });
        }
    }
    Ok((residual, faces, disks))
}

/// Radii `|δ_j| / |λ_j|` (disk radii for complex pairs) forced by the
/// residual over the block with the current radii.
fn required_radii(field: &dyn ParamVectorField, hset: &HSet, params: &IVector, frame: &Frame) -> Result<Vec<f64>> {
    let coords = hset.coord_box();
    let jet = block_jet(field, hset, params, &coords)?;
    let d = IMatrix::from_dmatrix(&frame.d);
    let residual = jet.c0.add(&jet.a.sub(&d)?.mul_vec(&coords)?)?;
    let mut req: Vec<f64> = residual
        .iter()
        .zip(&frame.rates)
        .map(|(r, l)| (Interval::point(r.mag()).checked_div(&Interval::point(l.abs()))).map(|v| v.hi()))
        .collect::<Result<_>>()?;
    for &(j, alpha, _) in &frame.complex {
        let r_bar = (residual[j].sqr() + residual[j + 1].sqr()).sqrt_truncated()?;
        let r = r_bar.checked_div(&Interval::point(alpha.abs()))?.hi();
        req[j] = r;
        req[j + 1] = r;
    }
    Ok(req)
}

fn build(req: &BlockRequest<'_>, candidate: &[f64], pc: bool) -> Result<IsolatingBlock> {
    let (base, frame) = block_frame(req, pc)?;
    if candidate.len() != base.dim() || candidate.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(Error::Invalid("candidate radii must be positive, one per coordinate".into()));
    }
    let mut radii = candidate.to_vec();
    let mut last_err = None;
    for _ in 0..6 {
        let hset = base.with_radii(radii.clone());
        match check_faces(req.field, &hset, req.params, &frame) {
            Ok((residuals, faces, complex_blocks)) => {
                return Ok(IsolatingBlock {
                    hset,
                    params: req.params.clone(),
                    mu0: req.mu0.to_vec(),
                    linear: IMatrix::from_dmatrix(&frame.d),
                    rates: frame.rates.clone(),
                    residuals,
                    faces,
                    complex_blocks,
                    predictor_corrector: pc,
                })
            }
            Err(e) => last_err = Some(e),
        }
        let need = required_radii(req.field, &hset, req.params, &frame)?;
        let grown: Vec<f64> = radii
            .iter()
            .zip(&need)
            .map(|(&r, &q)| r.max(q * 1.01 + f64::MIN_POSITIVE))
            .collect();
        if grown == radii || grown.iter().any(|r| !r.is_finite() || *r > 1e6) {
            break;
        }
        radii = grown;
    }
    Err(last_err.unwrap_or_else(|| Error::InflateCandidate("radii did not settle".into())))
}

/// Block centred at the fixed point `x₀` for every `μ ∈ K`.
pub fn build_block(req: &BlockRequest<'_>, candidate_radii: &[f64]) -> Result<IsolatingBlock> {
    build(req, candidate_radii, false)
}

/// Block centred on the first-order continuation
/// `x̄(μ) = x₀ − f_x⁻¹ f_μ (μ − μ₀)`.
pub fn build_block_pc(req: &BlockRequest<'_>, candidate_radii: &[f64]) -> Result<IsolatingBlock> {
    build(req, candidate_radii, true)
}

/// Smallest block over the geometric sweep `10⁻⁷ … 10⁻³` with the given
/// shape (radii relative to the first coordinate).
pub fn radius_sweep(req: &BlockRequest<'_>, shape: &[f64], pc: bool) -> Result<IsolatingBlock> {
    let mut last = Error::InflateCandidate("empty sweep".into());
    for k in 0..=16 {
        let r = 1e-7 * 10f64.powf(k as f64 / 4.0);
        let cand: Vec<f64> = shape.iter().map(|s| s * r).collect();
        match build(req, &cand, pc) {
            Ok(b) => return Ok(b),
            Err(e) => last = e,
        }
    }
    Err(last)
}

impl IsolatingBlock {
    /// Re-check every face and disk from the stored data.
    pub fn reverify(&self, field: &dyn ParamVectorField) -> Result<()> {
        check_faces(field, &self.hset, &self.params, &self.frame()).map(|_| ())
    }

    /// The same block with new radii, re-verified.
    pub fn resized(&self, field: &dyn ParamVectorField, radii: Vec<f64>) -> Result<IsolatingBlock> {
        let mut b = self.clone();
        b.hset = self.hset.with_radii(radii);
        let (residuals, faces, complex_blocks) = check_faces(field, &b.hset, &b.params, &b.frame())?;
        b.residuals = residuals;
        b.faces = faces;
        b.complex_blocks = complex_blocks;
        Ok(b)
    }

    fn frame(&self) -> Frame {
        Frame {
            p: self.hset.frame.mid(),
            d: self.linear.mid(),
            rates: self.rates.clone(),
            u_dim: self.hset.u_dim,
            complex: self
                .complex_blocks
                .iter()
                .map(|c| (c.coords[0], c.alpha, c.beta))
                .collect(),
        }
    }

    pub fn unstable_dim(&self) -> usize {
        self.hset.u_dim
    }

    /// Enclosure of the state set over `K`.
    pub fn state_hull(&self) -> IVector {
        self.hset.state_hull(&self.params)
    }
}

/// Existence certificate for an equilibrium in every fibre `μ ∈ K`.
pub fn certify_equilibrium(
    block: &IsolatingBlock,
    field: &dyn ParamVectorField,
    params: &IVector,
) -> Result<EquilibriumCertificate> {
    if params != &block.params {
        return Err(Error::Invalid("parameter set differs from the block's".into()));
    }
    block.reverify(field)?;
    let coords = block.hset.coord_box();
    let jet = block_jet(field, &block.hset, params, &coords)?;
    let core = match enclose_inverse(&jet.a) {
        Ok(ai) => {
            let y = ai.mul_vec(&jet.c0)?.map(|v| -v);
            y.intersection(&coords).unwrap_or(coords.clone())
        }
        Err(_) => coords.clone(),
    };
    let x = block.hset.from_coords(&coords, params);
    let jac = field.jacobian_x(&x, params);
    let eigen = enclose_spectrum(&jac)?;
    let hyperbolic = eigen.iter().all(|e| e.is_hyperbolic());
    Ok(EquilibriumCertificate {
        block: block.clone(),
        params: params.clone(),
        hyperbolic,
        eigen,
        core,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{CanardField, CubicWave, LinearField};

    #[test]
    fn scalar_exit_block() {
        let f = LinearField::with_params(IMatrix::from_f64(1, 1, &[2.0]), IMatrix::from_f64(1, 1, &[1.0]));
        let k = IVector::new(vec![Interval::new(-0.5, 0.5)]);
        let req = BlockRequest {
            field: &f,
            x0: &[0.0],
            mu0: &[0.0],
            params: &k,
        };
        let b = build_block(&req, &[0.01]).unwrap();
        assert!(b.hset.radii[0] > 0.25 && b.hset.radii[0] < 0.26, "{:?}", b.hset.radii);
        assert_eq!(b.faces.len(), 2);
        assert!(b.faces.iter().all(|f| f.kind == FaceKind::Exit));
    }

    #[test]
    fn saddle_faces() {
        let f = LinearField::from_f64(2, &[1.0, 0.0, 0.0, -1.0]);
        let k = IVector::zeros(0);
        let req = BlockRequest {
            field: &f,
            x0: &[0.0, 0.0],
            mu0: &[],
            params: &k,
        };
        let b = build_block(&req, &[1.0, 1.0]).unwrap();
        for face in &b.faces {
            let want = if face.coord == 0 { FaceKind::Exit } else { FaceKind::Entrance };
            assert_eq!(face.kind, want);
        }
        assert_eq!(b.hset.u_dim, 1);
    }

    #[test]
    fn predictor_corrector_removes_linear_drift() {
        let f = LinearField::with_params(IMatrix::from_f64(1, 1, &[1.0]), IMatrix::from_f64(1, 1, &[-1.0]));
        let k = IVector::new(vec![Interval::new(-1.0, 1.0)]);
        let req = BlockRequest {
            field: &f,
            x0: &[0.0],
            mu0: &[0.0],
            params: &k,
        };
        let b = build_block_pc(&req, &[1e-6]).unwrap();
        assert!(b.residuals[0].mag() < 1e-15);
        assert!(build_block(&req, &[1e-6]).unwrap().hset.radii[0] >= 1.0);
    }

    #[test]
    fn canard_saddle_block() {
        let f = CanardField::new();
        let k = IVector::from_points(&[0.2]);
        let req = BlockRequest {
            field: &f,
            x0: &[1.0, 2.5],
            mu0: &[0.2],
            params: &k,
        };
        let b = build_block_pc(&req, &[1e-6, 1e-6]).unwrap();
        let cert = certify_equilibrium(&b, &f, &k).unwrap();
        assert!(cert.hyperbolic);
        let r = (-4.0 + 25.6f64.sqrt()) / 2.0;
        assert!(cert.eigen[0].value.contains(r));
    }

    #[test]
    fn non_equilibrium_is_rejected() {
        let f = CubicWave::new(Interval::point(0.3));
        let k = IVector::from_points(&[0.28]);
        let req = BlockRequest {
            field: &f,
            x0: &[0.1, 0.05],
            mu0: &[0.28],
            params: &k,
        };
        assert!(build_block(&req, &[1e-6, 1e-6]).is_err());
    }
}
