use crate::error::{Error, Result};
use crate::interval::{IMatrix, IVector, Interval};
use crate::linalg::enclose_inverse;
use serde::{Deserialize, Serialize};

/// Box `∏[-R_i, R_i]` in the affine coordinates `y = P⁻¹(x − x̄(μ))`.
///
/// The first `u_dim` coordinates are the expanding ones. When `center_shift`
/// is present the centre moves with the parameter:
/// `x̄(μ) = center + S (μ − mu_ref)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HSet {
    pub center: IVector,
    pub frame: IMatrix,
    pub frame_inv: IMatrix,
    pub u_dim: usize,
    pub s_dim: usize,
    pub radii: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center_shift: Option<CenterShift>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterShift {
    pub slope: IMatrix,
    pub mu_ref: Vec<f64>,
}

impl HSet {
    /// Build an h-set, verifying that the frame is invertible.
    pub fn new(
        center: IVector,
        frame: IMatrix,
        u_dim: usize,
        radii: Vec<f64>,
    ) -> Result<HSet> {
        let n = center.len();
        if frame.rows() != n || frame.cols() != n || radii.len() != n || u_dim > n {
            return Err(Error::Shape(format!(
                "h-set of dimension {n} with {}x{} frame and {} radii",
                frame.rows(),
                frame.cols(),
                radii.len()
            )));
        }
        if radii.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(Error::Invalid("h-set radii must be finite and nonnegative".into()));
        }
        let frame_inv = enclose_inverse(&frame)?;
        Ok(HSet {
            center,
            frame,
            frame_inv,
            u_dim,
            s_dim: n - u_dim,
            radii,
            center_shift: None,
        })
    }

    pub fn with_center_shift(mut self, slope: IMatrix, mu_ref: Vec<f64>) -> Result<HSet> {
        if slope.rows() != self.dim() || slope.cols() != mu_ref.len() {
            return Err(Error::Shape("center shift shape".into()));
        }
        self.center_shift = Some(CenterShift { slope, mu_ref });
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// `x̄(μ)` over the parameter box.
    pub fn center_at(&self, mu: &IVector) -> IVector {
        match &self.center_shift {
            None => self.center.clone(),
            Some(cs) => {
                let dmu: IVector = mu
                    .iter()
                    .zip(&cs.mu_ref)
                    .map(|(&m, &r)| m - Interval::point(r))
                    .collect();
                self.center
                    .add(&cs.slope.mul_vec(&dmu).expect("shift shape"))
                    .expect("same length")
            }
        }
    }

    /// Coordinates of the state box `x` for parameters `mu`.
    pub fn to_coords(&self, x: &IVector, mu: &IVector) -> IVector {
        let d = x.sub(&self.center_at(mu)).expect("state length");
        self.frame_inv.mul_vec(&d).expect("frame shape")
    }

    /// State box of the coordinate box `y`.
    pub fn from_coords(&self, y: &IVector, mu: &IVector) -> IVector {
        self.frame
            .mul_vec(y)
            .expect("frame shape")
            .add(&self.center_at(mu))
            .expect("same length")
    }

    /// Linear map `L` and reference `z_ref` with `y = L (z − z_ref)` for the
    /// augmented state `z = (x, μ)`.
    pub fn augmented_coord_map(&self, param_dim: usize) -> (IMatrix, IVector) {
        let n = self.dim();
        let (slope, mu_ref) = match &self.center_shift {
            Some(cs) => (cs.slope.clone(), cs.mu_ref.clone()),
            None => (IMatrix::zeros(n, param_dim), vec![0.0; param_dim]),
        };
        let block = IMatrix::from_fn(n, n + param_dim, |i, j| {
            if j < n {
                if i == j {
                    Interval::ONE
                } else {
                    Interval::ZERO
                }
            } else {
                -slope[(i, j - n)]
            }
        });
        let l = self.frame_inv.matmul(&block).expect("frame shape");
        let z_ref = self.center.concat(&IVector::from_points(&mu_ref));
        (l, z_ref)
    }

    /// The coordinate box `∏[-R_i, R_i]`.
    pub fn coord_box(&self) -> IVector {
        self.radii.iter().map(|&r| Interval::symmetric(r)).collect()
    }

    /// State-space enclosure of the whole set for parameters `mu`.
    pub fn state_hull(&self, mu: &IVector) -> IVector {
        self.from_coords(&self.coord_box(), mu)
    }

    /// Whether the coordinate box `y` lies in the open set `|y_i| < R_i`.
    pub fn strictly_contains_coords(&self, y: &IVector) -> bool {
        y.len() == self.dim()
            && y
                .iter()
                .zip(&self.radii)
                .all(|(v, &r)| v.lo() > -r && v.hi() < r)
    }

    /// The same set with radii replaced.
    pub fn with_radii(&self, radii: Vec<f64>) -> HSet {
        let mut h = self.clone();
        h.radii = radii;
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_roundtrip() {
        let h = HSet::new(
            IVector::from_points(&[1.0, 2.0]),
            IMatrix::from_f64(2, 2, &[1.0, 1.0, 0.0, 2.0]),
            1,
            vec![0.5, 0.5],
        )
        .unwrap();
        let mu = IVector::zeros(0);
        let x = IVector::from_points(&[1.5, 2.5]);
        let y = h.to_coords(&x, &mu);
        assert!(y[0].contains(0.25) && y[1].contains(0.25));
        assert!(h.strictly_contains_coords(&y));
        let back = h.from_coords(&y, &mu);
        assert!(back.contains_point(&[1.5, 2.5]));
    }

    #[test]
    fn singular_frame_is_rejected() {
        let r = HSet::new(
            IVector::zeros(2),
            IMatrix::from_f64(2, 2, &[1.0, 2.0, 2.0, 4.0]),
            1,
            vec![1.0, 1.0],
        );
        assert!(r.is_err());
    }
}
