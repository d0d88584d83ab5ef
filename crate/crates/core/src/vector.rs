//! Points and displacement vectors of the ambient space R^n.
//!
//! A `Vector` is a validated n-tuple of finite coordinates with n >= 1.
//! Arithmetic between vectors of different dimension is a programming error
//! and panics; user-facing entry points validate dimensions up front and
//! return `Error::DimensionMismatch` instead.

use std::ops::Index;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    coords: Vec<f64>,
}

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (index, c) in coords.iter().enumerate() {
            if !c.is_finite() {
                return Err(Error::NonFiniteCoordinate { index });
            }
        }
        Ok(Self { coords })
    }

    /// The origin of R^dim.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        Self {
            coords: vec![0.0; dim],
        }
    }

    /// Standard basis vector e_axis in R^dim (axis counted from zero).
    pub fn basis(dim: usize, axis: usize) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        assert!(axis < dim, "axis {axis} out of range for dimension {dim}");
        let mut coords = vec![0.0; dim];
        coords[axis] = 1.0;
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.coords.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.check_dim(other);
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n == 0.0 {
            None
        } else {
            Some(self.scale(1.0 / n))
        }
    }

    /// Pointwise convex combination `(1 - t) * self + t * other`.
    ///
    /// The two-product form is exact at t = 0 and t = 1.
    pub fn lerp(&self, other: &Self, t: f64) -> Self {
        self.zip_with(other, |a, b| (1.0 - t) * a + t * b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        self.check_dim(other);
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.coords.len(),
            other.coords.len(),
            "vector dimensions must agree"
        );
    }
}

impl Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.coords[i]
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn euclidean_distance(x: &Vector, y: &Vector) -> f64 {
    x.sub(y).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert_eq!(Vector::new(vec![]), Err(Error::EmptyVector));
        assert_eq!(
            Vector::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteCoordinate { index: 1 })
        );
        assert_eq!(
            Vector::new(vec![f64::INFINITY]),
            Err(Error::NonFiniteCoordinate { index: 0 })
        );
    }

    #[test]
    fn basis_and_arithmetic() {
        let e1 = Vector::basis(3, 0);
        let e2 = Vector::basis(3, 1);
        assert_eq!(e1.dot(&e2), 0.0);
        assert_eq!(e1.norm(), 1.0);
        let s = e1.add(&e2.scale(2.0));
        assert_eq!(s.as_slice(), &[1.0, 2.0, 0.0]);
        assert_eq!(euclidean_distance(&e1, &e1), 0.0);
    }

    #[test]
    fn lerp_hits_endpoints_exactly() {
        let x = Vector::new(vec![1.0, -2.0]).unwrap();
        let y = Vector::new(vec![4.0, 6.0]).unwrap();
        assert_eq!(x.lerp(&y, 0.0), x);
        assert_eq!(x.lerp(&y, 1.0), y);
        assert_eq!(x.lerp(&y, 0.5).as_slice(), &[2.5, 2.0]);
    }

    #[test]
    fn normalized_zero_is_none() {
        assert!(Vector::zeros(4).normalized().is_none());
    }
}
