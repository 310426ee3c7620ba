use super::round::*;
use super::Interval;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Index, IndexMut};

/// Fixed-length vector of intervals.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IVector(Vec<Interval>);

impl IVector {
    pub fn new(entries: Vec<Interval>) -> Self {
        IVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        IVector(vec![Interval::ZERO; n])
    }

    pub fn from_points(x: &[f64]) -> Self {
        IVector(x.iter().map(|&v| Interval::point(v)).collect())
    }

    /// Box `[c_i - r_i, c_i + r_i]` with outward rounding.
    pub fn from_center_radius(c: &[f64], r: &[f64]) -> Self {
        IVector(
            c.iter()
                .zip(r)
                .map(|(&c, &r)| Interval::point(c) + Interval::symmetric(r))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<Interval> {
        self.0
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.mid()).collect()
    }

    pub fn rad(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.rad()).collect()
    }

    pub fn max_width(&self) -> f64 {
        self.0.iter().map(|x| x.width()).fold(0.0, f64::max)
    }

    pub fn has_empty(&self) -> bool {
        self.0.iter().any(|x| x.is_empty())
    }

    pub fn hull(&self, other: &IVector) -> Result<IVector> {
        self.check_len(other)?;
        Ok(IVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a.hull(b)).collect(),
        ))
    }

    pub fn intersection(&self, other: &IVector) -> Result<IVector> {
        self.check_len(other)?;
        Ok(IVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.intersection(b))
                .collect(),
        ))
    }

    pub fn contains_vec(&self, other: &IVector) -> bool {
        self.len() == other.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a.contains_interval(b))
    }

    pub fn interior_contains(&self, other: &IVector) -> bool {
        self.len() == other.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a.interior_contains(b))
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        self.len() == x.len() && self.0.iter().zip(x).all(|(a, &v)| a.contains(v))
    }

    /// Enclosure of `max_i |x_i|`.
    pub fn norm_sup(&self) -> Interval {
        let lo = self.0.iter().map(|x| x.mig()).fold(0.0, f64::max);
        let hi = self.0.iter().map(|x| x.mag()).fold(0.0, f64::max);
        Interval::new(lo, hi)
    }

    /// Enclosure of the Euclidean norm.
    pub fn norm2(&self) -> Interval {
        let s: Interval = self.0.iter().map(|x| x.sqr()).sum();
        s.sqrt_truncated().unwrap_or(Interval::ZERO)
    }

    /// Upper bound of the Euclidean norm.
    pub fn norm2_upper(&self) -> f64 {
        let mut s = 0.0;
        for x in &self.0 {
            let m = x.mag();
            s = add_up(s, mul_up(m, m));
        }
        sqrt_up(s)
    }

    pub fn dot(&self, other: &IVector) -> Result<Interval> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(&a, &b)| a * b).sum())
    }

    pub fn add(&self, other: &IVector) -> Result<IVector> {
        self.check_len(other)?;
        Ok(IVector(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect(),
        ))
    }

    pub fn sub(&self, other: &IVector) -> Result<IVector> {
        self.check_len(other)?;
        Ok(IVector(
            self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, s: Interval) -> IVector {
        IVector(self.0.iter().map(|&a| a * s).collect())
    }

    pub fn map(&self, f: impl Fn(Interval) -> Interval) -> IVector {
        IVector(self.0.iter().map(|&a| f(a)).collect())
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &IVector) -> IVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        IVector(v)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> IVector {
        IVector(self.0[range].to_vec())
    }

    fn check_len(&self, other: &IVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Shape(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }
}

impl Index<usize> for IVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl IndexMut<usize> for IVector {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.0[i]
    }
}

impl From<Vec<Interval>> for IVector {
    fn from(v: Vec<Interval>) -> Self {
        IVector(v)
    }
}

impl FromIterator<Interval> for IVector {
    fn from_iter<I: IntoIterator<Item = Interval>>(iter: I) -> Self {
        IVector(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a IVector {
    type Item = &'a Interval;
    type IntoIter = std::slice::Iter<'a, Interval>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_bound_the_euclidean_norm() {
        let v = IVector::from_points(&[3.0, 4.0]);
        assert!(v.norm2().contains(5.0));
        assert!(v.norm2_upper() >= 5.0);
        assert_eq!(v.norm_sup(), Interval::new(4.0, 4.0));
    }

    #[test]
    fn shape_errors() {
        let a = IVector::zeros(2);
        let b = IVector::zeros(3);
        assert!(matches!(a.add(&b), Err(Error::Shape(_))));
    }
}
