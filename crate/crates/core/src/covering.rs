//! Covering relations with one expanding direction and chains of them.

use crate::blocks::{FaceKind, IsolatingBlock};
use crate::cones::{ConeCertificate, ManifoldKind};
use crate::error::{Error, Result};
use crate::hset::HSet;
use crate::interval::{IVector, Interval};
use crate::lohner::{AffineSet, TrajectoryEnclosure};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Smallest gap accepted in the strict inequalities.
pub const MIN_GAP: f64 = 1e-12;

/// An exit face of a block times the parameter set, parametrized in the
/// augmented space `(x, μ)` by `(y, μ − μ_ref)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExitFace {
    pub coord: usize,
    pub side: i8,
    pub set: AffineSet,
    /// Coordinate of `set` playing the expanding role in coverings.
    pub unstable_axis: usize,
}

/// The exit face `y_coord = direction · R` of `block` (or of `hset` with
/// the same frame when extended radii are wanted).
pub fn exit_of_block(block: &IsolatingBlock, hset: &HSet, coord: usize, direction: i8) -> Result<ExitFace> {
    if block.unstable_dim() != 1 {
        return Err(Error::Covering("exit faces are supported for one unstable direction".into()));
    }
    let face = block
        .faces
        .iter()
        .find(|f| f.coord == coord && f.side == direction.signum())
        .ok_or_else(|| Error::Covering(format!("no face y{coord} on side {direction}")))?;
    if face.kind != FaceKind::Exit {
        return Err(Error::Covering(format!("face y{coord} on side {direction} is an entrance")));
    }
    let n = hset.dim();
    let p = block.params.len();
    let mu_ref: Vec<f64> = match &hset.center_shift {
        Some(cs) => cs.mu_ref.clone(),
        None => block.mu0.clone(),
    };
    let mut dirs = DMatrix::zeros(n + p, n + p);
    for i in 0..n {
        for j in 0..n {
            dirs[(i, j)] = hset.frame[(i, j)].mid();
        }
        if let Some(cs) = &hset.center_shift {
            for j in 0..p {
                dirs[(i, n + j)] = cs.slope[(i, j)].mid();
            }
        }
    }
    for j in 0..p {
        dirs[(n + j, n + j)] = 1.0;
    }
    let exact = (0..n).all(|i| (0..n).all(|j| hset.frame[(i, j)].width() == 0.0))
        && hset
            .center_shift
            .as_ref()
            .is_none_or(|cs| cs.slope.max_width() == 0.0);
    if !exact {
        return Err(Error::Covering("frame must be a point matrix".into()));
    }
    let mut coords: Vec<Interval> = hset.radii.iter().map(|&r| Interval::symmetric(r)).collect();
    coords[coord] = Interval::point(direction.signum() as f64 * hset.radii[coord]);
    for j in 0..p {
        coords.push(block.params[j] - Interval::point(mu_ref[j]));
    }
    let nondegenerate = (0..p).find(|&j| block.params[j].width() > 0.0);
    Ok(ExitFace {
        coord,
        side: direction.signum(),
        set: AffineSet {
            origin: hset.center.concat(&IVector::from_points(&mu_ref)),
            dirs,
            coords: IVector::new(coords),
        },
        unstable_axis: nondegenerate.map(|j| n + j).unwrap_or(coord),
    })
}

/// Image data of a subdivided source in the coordinates of the target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringImage {
    /// Images of the two source edges (lower and upper end of the
    /// expanding axis); empty when the target has no expanding direction.
    pub edges: Vec<IVector>,
    /// Images of the pieces of the source.
    pub pieces: Vec<IVector>,
}

/// Images of the final sets of `trajs` (consecutive pieces along `axis`)
/// in the coordinates of `target`.
pub fn image_in_target(trajs: &[TrajectoryEnclosure], axis: usize, target: &HSet, param_dim: usize) -> Result<CoveringImage> {
    let (first, last) = match (trajs.first(), trajs.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(Error::Covering("no pieces".into())),
    };
    let (l, z_ref) = target.augmented_coord_map(param_dim);
    let edge = |t: &TrajectoryEnclosure, at: f64| {
        let mut s = t.initial.coords.clone();
        s[axis] = Interval::point(at);
        t.final_set.affine_image(&l, &z_ref, Some(&s))
    };
    Ok(CoveringImage {
        edges: if target.u_dim == 0 {
            Vec::new()
        } else {
            vec![
                edge(first, first.initial.coords[axis].lo()),
                edge(last, last.initial.coords[axis].hi()),
            ]
        },
        pieces: trajs
            .iter()
            .map(|t| t.final_set.affine_image(&l, &z_ref, None))
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringEvidence {
    pub image: CoveringImage,
    /// `+1` when the lower edge lands left of the target, `−1` otherwise.
    pub orientation: i8,
    pub gap_unstable: f64,
    pub gap_stable: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringCertificate {
    pub source: String,
    pub target: HSet,
    pub flow_time: Interval,
    pub u_dim: usize,
    pub geometry_evidence: CoveringEvidence,
}

/// Check the covering conditions on the image data: for `u = 1` the
/// edges straddle the target and the pieces stay inside its stable extent;
/// for `u = 0` every piece lies strictly inside the target.
pub fn verify_covering(image: &CoveringImage, target: &HSet) -> Result<CoveringEvidence> {
    let n = target.dim();
    if image.edges.iter().chain(&image.pieces).any(|b| b.len() != n) {
        return Err(Error::Shape("image boxes do not match the target".into()));
    }
    let margin = |i: usize, b: &IVector, j: usize| -> Result<f64> {
        let g = (Interval::point(target.radii[j]) - Interval::point(b[j].mag())).lo();
        if g >= MIN_GAP {
            Ok(g)
        } else {
            Err(Error::Covering(format!(
                "piece {i}: y{j} ∈ {} is not strictly inside ±{:e}",
                b[j], target.radii[j]
            )))
        }
    };
    match target.u_dim {
        0 => {
            if !image.edges.is_empty() {
                return Err(Error::Covering("edges given for a target without expanding directions".into()));
            }
            let mut gap = f64::MAX;
            for (i, b) in image.pieces.iter().enumerate() {
                for j in 0..n {
                    gap = gap.min(margin(i, b, j)?);
                }
            }
            return Ok(CoveringEvidence {
                image: image.clone(),
                orientation: 0,
                gap_unstable: gap,
                gap_stable: gap,
            });
        }
        1 => {}
        u => return Err(Error::Covering(format!("target has {u} unstable directions; at most 1 is supported"))),
    }
    if image.edges.len() != 2 {
        return Err(Error::Covering("two edge images are required".into()));
    }
    let r_u = target.radii[0];
    // Signed distance beyond the unstable faces.
    let beyond = |b: &IVector, side: f64| -> f64 {
        if side < 0.0 {
            (Interval::point(-r_u) - Interval::point(b[0].hi())).lo()
        } else {
            (Interval::point(b[0].lo()) - Interval::point(r_u)).lo()
        }
    };
    let (lo_edge, hi_edge) = (&image.edges[0], &image.edges[1]);
    let forward = beyond(lo_edge, -1.0).min(beyond(hi_edge, 1.0));
    let backward = beyond(lo_edge, 1.0).min(beyond(hi_edge, -1.0));
    let (orientation, gap_unstable) = if forward >= backward { (1, forward) } else { (-1, backward) };
    if !(gap_unstable >= MIN_GAP) {
        return Err(Error::Covering(format!(
            "edge images do not straddle the target: lower edge y0 ∈ {}, upper edge y0 ∈ {}, radius {r_u:e}",
            lo_edge[0], hi_edge[0]
        )));
    }
    let mut gap_stable = f64::MAX;
    for (i, b) in image.pieces.iter().enumerate() {
        for j in 1..n {
            gap_stable = gap_stable.min(margin(i, b, j)?);
        }
    }
    Ok(CoveringEvidence {
        image: image.clone(),
        orientation,
        gap_unstable,
        gap_stable,
    })
}

impl CoveringCertificate {
    /// Re-check the stored geometry without integrating.
    pub fn recheck(&self) -> Result<()> {
        let e = verify_covering(&self.geometry_evidence.image, &self.target)?;
        if e != self.geometry_evidence {
            return Err(Error::Covering("stored evidence differs from the recomputed one".into()));
        }
        Ok(())
    }
}

/// Existence of an orbit from the initial horizontal disk into the
/// terminal stable manifold.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectingOrbitCertificate {
    pub chain: Vec<CoveringCertificate>,
    pub initial_disk: String,
    pub initial_cone: Option<ConeCertificate>,
    pub terminal: ConeCertificate,
}

pub fn assemble_connecting_orbit(
    chain: Vec<CoveringCertificate>,
    initial_disk: &str,
    initial_cone: Option<&ConeCertificate>,
    terminal: &ConeCertificate,
) -> Result<ConnectingOrbitCertificate> {
    let last = chain.last().ok_or_else(|| Error::Covering("empty chain".into()))?;
    if chain.iter().any(|c| c.u_dim != last.u_dim) {
        return Err(Error::Covering("chain mixes unstable dimensions".into()));
    }
    if terminal.kind != ManifoldKind::Stable {
        return Err(Error::Covering("terminal needs a stable-manifold cone certificate".into()));
    }
    if last.target != terminal.hset {
        return Err(Error::Covering("last target is not the terminal extended set".into()));
    }
    if let Some(c) = initial_cone {
        if c.kind != ManifoldKind::Unstable {
            return Err(Error::Covering("initial disk needs an unstable-manifold cone certificate".into()));
        }
    }
    for c in &chain {
        c.recheck()?;
    }
    Ok(ConnectingOrbitCertificate {
        chain,
        initial_disk: initial_disk.to_string(),
        initial_cone: initial_cone.cloned(),
        terminal: terminal.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::IMatrix;

    fn unit(n: usize, u: usize) -> HSet {
        HSet::new(IVector::zeros(n), IMatrix::identity(n), u, vec![1.0; n]).unwrap()
    }

    #[test]
    fn expanding_line_covers() {
        let t = unit(1, 1);
        let img = CoveringImage {
            edges: vec![IVector::from_points(&[-3.0]), IVector::from_points(&[3.0])],
            pieces: vec![IVector::new(vec![Interval::new(-3.0, 3.0)])],
        };
        let e = verify_covering(&img, &t).unwrap();
        assert_eq!(e.orientation, 1);
        assert!((e.gap_unstable - 2.0).abs() < 1e-15);
    }

    #[test]
    fn contracting_line_fails() {
        let t = unit(1, 1);
        let img = CoveringImage {
            edges: vec![IVector::from_points(&[-0.5]), IVector::from_points(&[0.5])],
            pieces: vec![IVector::new(vec![Interval::new(-0.5, 0.5)])],
        };
        assert!(verify_covering(&img, &t).is_err());
    }

    #[test]
    fn reversed_orientation_is_recorded() {
        let t = unit(2, 1);
        let img = CoveringImage {
            edges: vec![IVector::from_points(&[2.0, 0.0]), IVector::from_points(&[-2.0, 0.1])],
            pieces: vec![IVector::new(vec![Interval::new(-2.0, 2.0), Interval::new(-0.5, 0.5)])],
        };
        assert_eq!(verify_covering(&img, &t).unwrap().orientation, -1);
    }

    #[test]
    fn containment_for_sink_targets() {
        let t = unit(2, 0);
        let inside = CoveringImage {
            edges: vec![],
            pieces: vec![IVector::new(vec![Interval::new(-0.5, 0.5); 2])],
        };
        assert_eq!(verify_covering(&inside, &t).unwrap().orientation, 0);
        let outside = CoveringImage {
            edges: vec![],
            pieces: vec![IVector::new(vec![Interval::new(-0.5, 1.5); 2])],
        };
        assert!(verify_covering(&outside, &t).is_err());
    }
}
