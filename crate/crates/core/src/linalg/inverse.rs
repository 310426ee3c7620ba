use crate::error::{Error, Result};
use crate::interval::round::{div_up, mul_up, sub_down};
use crate::interval::{IMatrix, Interval};
use nalgebra::DMatrix;

/// Enclosure of `A⁻¹` valid for every member matrix of `a`.
///
/// With `R ≈ mid(A)⁻¹` and `E = I − RA`, `‖E‖∞ ≤ β < 1` gives
/// `A⁻¹ = R + ER + E²(I − E)⁻¹R`, whose last term is bounded entrywise by
/// `β²‖R‖∞ / (1 − β)`.
pub fn enclose_inverse(a: &IMatrix) -> Result<IMatrix> {
    if !a.is_square() {
        return Err(Error::Shape(format!("inverse of {}x{}", a.rows(), a.cols())));
    }
    let n = a.rows();
    let r = approx_inverse(&a.mid())
        .ok_or_else(|| Error::PossiblySingular("midpoint matrix not invertible".into()))?;
    let ri = IMatrix::from_dmatrix(&r);
    let e = IMatrix::identity(n).sub(&ri.matmul(a)?)?;
    let beta = e.norm_inf_upper();
    if !(beta < 1.0) {
        return Err(Error::PossiblySingular(format!(
            "residual contraction ‖I - RA‖ ≤ {beta:e} not below 1"
        )));
    }
    let one_minus = sub_down(1.0, beta);
    let gamma = div_up(mul_up(mul_up(beta, beta), ri.norm_inf_upper()), one_minus);
    let er = e.matmul(&ri)?;
    let tail = Interval::symmetric(gamma);
    let mut out = ri.add(&er)?;
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] += tail;
        }
    }
    Ok(out)
}

/// Floating inverse, refusing numerically singular input.
pub fn approx_inverse(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    if m.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let inv = m.clone().try_inverse()?;
    if inv.iter().all(|x| x.is_finite()) {
        Some(inv)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_inverse_is_tight() {
        let inv = enclose_inverse(&IMatrix::identity(2)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!(inv[(i, j)].contains(e));
                assert!(inv[(i, j)].width() <= 1e-15);
            }
        }
    }

    #[test]
    fn hand_inverse_is_contained() {
        let a = IMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => Interval::ONE,
            (1, 0) => Interval::from_decimal("0.3").unwrap(),
            _ => Interval::ZERO,
        });
        let inv = enclose_inverse(&a).unwrap();
        let ten_thirds = Interval::new(10.0, 10.0).checked_div(&Interval::new(3.0, 3.0)).unwrap();
        assert!(inv[(0, 1)].intersects(&ten_thirds));
        assert!(inv[(0, 1)].contains(1.0 / 0.3));
        assert!(inv[(1, 0)].contains(1.0));
        assert!(inv[(0, 0)].contains(0.0) && inv[(1, 1)].contains(0.0));
        assert!(inv[(0, 1)].width() < 1e-14);
    }

    #[test]
    fn zero_row_is_singular() {
        let a = IMatrix::from_f64(2, 2, &[1.0, 2.0, 0.0, 0.0]);
        assert!(matches!(enclose_inverse(&a), Err(Error::PossiblySingular(_))));
    }
}
