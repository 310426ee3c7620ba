use super::round::*;
use super::{IVector, Interval};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::ops::{Index, IndexMut};

/// Row-major matrix of intervals.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Interval>>", into = "Vec<Vec<Interval>>")]
pub struct IMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMatrix {
            rows,
            cols,
            data: vec![Interval::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Interval) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IMatrix { rows, cols, data }
    }

    /// Point matrix from row-major floats.
    pub fn from_f64(rows: usize, cols: usize, x: &[f64]) -> Self {
        assert_eq!(x.len(), rows * cols, "IMatrix::from_f64 size");
        IMatrix {
            rows,
            cols,
            data: x.iter().map(|&v| Interval::point(v)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<Interval>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(IMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_dmatrix(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| Interval::point(m[(i, j)]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IVector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Interval>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mid(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mid())
    }

    pub fn max_width(&self) -> f64 {
        self.data.iter().map(|x| x.width()).fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> IMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn neg(&self) -> IMatrix {
        IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| -x).collect(),
        }
    }

    pub fn scale(&self, s: Interval) -> IMatrix {
        IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &IMatrix) -> Result<IMatrix> {
        self.check_same(other)?;
        Ok(IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &IMatrix) -> Result<IMatrix> {
        self.check_same(other)?;
        Ok(IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        })
    }

    pub fn hull(&self, other: &IMatrix) -> Result<IMatrix> {
        self.check_same(other)?;
        Ok(IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.hull(b)).collect(),
        })
    }

    pub fn contains_matrix(&self, other: &IMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.contains_interval(b))
    }

    pub fn mul_vec(&self, v: &IVector) -> Result<IVector> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "matvec {}x{} by {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v.iter()).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    pub fn matmul(&self, other: &IMatrix) -> Result<IMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        }))
    }

    /// Rows `r` and columns `c` of `self`.
    pub fn submatrix(&self, r: std::ops::Range<usize>, c: std::ops::Range<usize>) -> IMatrix {
        let r0 = r.start;
        let c0 = c.start;
        Self::from_fn(r.len(), c.len(), |i, j| self[(r0 + i, c0 + j)])
    }

    /// Upper bound of the ∞-norm (max row sum of magnitudes).
    pub fn norm_inf_upper(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(0.0, |s, x| add_up(s, x.mag())))
            .fold(0.0, f64::max)
    }

    /// Upper bound of the 1-norm (max column sum of magnitudes).
    pub fn norm1_upper(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(0.0, |s, i| add_up(s, self[(i, j)].mag())))
            .fold(0.0, f64::max)
    }

    pub fn norm_frobenius_upper(&self) -> f64 {
        sqrt_up(
            self.data
                .iter()
                .fold(0.0, |s, x| add_up(s, mul_up(x.mag(), x.mag()))),
        )
    }

    /// Upper bound of the spectral norm.
    pub fn norm2_upper(&self) -> f64 {
        let holder = sqrt_up(mul_up(self.norm1_upper(), self.norm_inf_upper()));
        holder.min(self.norm_frobenius_upper())
    }

    /// Enclosure of the sup-norm as an interval `[0, ‖A‖∞]`.
    pub fn norm_sup(&self) -> Interval {
        Interval::new(0.0, self.norm_inf_upper())
    }

    fn check_same(&self, other: &IMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for IMatrix {
    type Output = Interval;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

impl TryFrom<Vec<Vec<Interval>>> for IMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Interval>>) -> Result<Self> {
        IMatrix::from_rows(rows)
    }
}

impl From<IMatrix> for Vec<Vec<Interval>> {
    fn from(m: IMatrix) -> Self {
        m.to_rows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_times_vector() {
        let v = IVector::new(vec![Interval::new(1.0, 2.0), Interval::new(-3.0, 0.5)]);
        let w = IMatrix::identity(2).mul_vec(&v).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn zero_matrix_norm() {
        let z = IMatrix::zeros(2, 2);
        assert_eq!(z.norm2_upper(), 0.0);
    }

    #[test]
    fn spectral_bound_on_rotation_scaling() {
        let a = IMatrix::from_f64(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        assert!(a.norm2_upper() >= 2.0 && a.norm2_upper() < 2.0 + 1e-12);
    }

    #[test]
    fn serde_roundtrip() {
        let a = IMatrix::from_f64(2, 3, &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
        let s = serde_json::to_string(&a).unwrap();
        let b: IMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
