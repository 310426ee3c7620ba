use super::inverse::enclose_inverse;
use crate::interval::round::{add_up, sqrt_up, sub_down};
use crate::interval::{IMatrix, IVector, Interval};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

/// Bounds on the logarithmic norm, logarithmic minimum and spectral norm of
/// an interval matrix.
///
/// `l_upper` encloses `sup l(A)` over the member matrices, so its upper end
/// is the rigorous bound; `ml_lower` encloses `inf m_l(A)` and its lower end
/// is the rigorous bound; `m_upper` encloses `sup m(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogNormBounds {
    pub l_upper: Interval,
    pub ml_lower: Interval,
    pub m_upper: Interval,
}

/// Interval containing every eigenvalue of every symmetric member of `s`,
/// together with Rayleigh-quotient estimates `(λ_max lower, λ_min upper)`
/// from the midpoint matrix.
pub fn symmetric_spectrum_bounds(s: &IMatrix) -> (Interval, f64, f64) {
    let n = s.rows();
    let raw = gershgorin_real(s);
    let mid = s.mid();
    let mid = (&mid + mid.transpose()) * 0.5;
    let eig = SymmetricEigen::new(mid.clone());
    let q = eig.eigenvectors;
    let tight = similarity(s, &q).map(|t| gershgorin_real(&t));
    let bounds = match tight {
        Some(t) => Interval::new(raw.lo().max(t.lo()), raw.hi().min(t.hi())),
        None => raw,
    };
    let (imax, imin) = argmax_argmin(eig.eigenvalues.as_slice());
    let rq = |k: usize| -> Interval {
        let v: IVector = (0..n).map(|i| Interval::point(q[(i, k)])).collect();
        let sv = IMatrix::from_dmatrix(&mid).mul_vec(&v).expect("square");
        let num = v.dot(&sv).expect("same length");
        let den = v.dot(&v).expect("same length");
        num.checked_div(&den).unwrap_or(Interval::ENTIRE)
    };
    let top = rq(imax).lo().min(bounds.hi());
    let bottom = rq(imin).hi().max(bounds.lo());
    (bounds, top, bottom)
}

fn argmax_argmin(x: &[f64]) -> (usize, usize) {
    let mut imax = 0;
    let mut imin = 0;
    for (i, v) in x.iter().enumerate() {
        if *v > x[imax] {
            imax = i;
        }
        if *v < x[imin] {
            imin = i;
        }
    }
    (imax, imin)
}

/// `Q⁻¹ S Q` with a verified inverse of the floating matrix `Q`.
fn similarity(s: &IMatrix, q: &DMatrix<f64>) -> Option<IMatrix> {
    let qi = IMatrix::from_dmatrix(q);
    let qinv = enclose_inverse(&qi).ok()?;
    qinv.matmul(s).ok()?.matmul(&qi).ok()
}

/// Real Gershgorin hull; valid for matrices whose spectrum is real.
fn gershgorin_real(t: &IMatrix) -> Interval {
    let n = t.rows();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut r = 0.0;
        for j in 0..n {
            if i != j {
                r = add_up(r, t[(i, j)].mag());
            }
        }
        lo = lo.min(sub_down(t[(i, i)].lo(), r));
        hi = hi.max(add_up(t[(i, i)].hi(), r));
    }
    Interval::new(lo, hi)
}

/// Symmetric part `(A + Aᵀ)/2`.
pub fn symmetric_part(a: &IMatrix) -> IMatrix {
    let half = Interval::point(0.5);
    IMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        if i == j {
            a[(i, i)]
        } else {
            (a[(i, j)] + a[(j, i)]) * half
        }
    })
}

pub fn log_norm_bounds(a: &IMatrix) -> LogNormBounds {
    assert!(a.is_square(), "log_norm_bounds needs a square matrix");
    if a.rows() == 0 {
        return LogNormBounds {
            l_upper: Interval::ZERO,
            ml_lower: Interval::ZERO,
            m_upper: Interval::ZERO,
        };
    }
    let (spec, top, bottom) = symmetric_spectrum_bounds(&symmetric_part(a));
    LogNormBounds {
        l_upper: Interval::new(top, spec.hi()),
        ml_lower: Interval::new(spec.lo(), bottom),
        m_upper: spectral_norm_bounds(a),
    }
}

/// Enclosure of `sup m(A)`; the upper end is rigorous.
pub fn spectral_norm_bounds(a: &IMatrix) -> Interval {
    if a.rows() == 0 || a.cols() == 0 {
        return Interval::ZERO;
    }
    let ata = a.transpose().matmul(a).expect("shapes agree");
    let (spec, top, _) = symmetric_spectrum_bounds(&ata);
    let hi = sqrt_up(spec.hi().max(0.0)).min(a.norm2_upper());
    let lo = top.max(0.0).sqrt().next_down().max(0.0).min(hi);
    Interval::new(lo, hi)
}

/// Rigorous upper bound of `l(A)`.
pub fn l_upper(a: &IMatrix) -> f64 {
    log_norm_bounds(a).l_upper.hi()
}

/// Rigorous lower bound of `m_l(A)`.
pub fn ml_lower(a: &IMatrix) -> f64 {
    log_norm_bounds(a).ml_lower.lo()
}

/// Rigorous upper bound of `m(A)`.
pub fn m_upper(a: &IMatrix) -> f64 {
    spectral_norm_bounds(a).hi()
}
