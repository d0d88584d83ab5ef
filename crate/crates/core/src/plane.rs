//! Affine planes in R^n and orthogonal projection onto them.

use crate::error::{Error, Result};
use crate::vector::Vector;

/// Pairwise dot products of the stored basis must be within this of the
/// identity matrix.
pub const ORTHONORMAL_TOL: f64 = 1e-12;

/// Threshold below which a Gram-Schmidt residual counts as linearly
/// dependent on the vectors before it.
const SPAN_TOL: f64 = 1e-9;

/// An affine plane: a basepoint plus the span of an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane {
    basepoint: Vector,
    basis: Vec<Vector>,
}

impl Plane {
    /// Build from an already orthonormal basis; checked to `ORTHONORMAL_TOL`.
    pub fn new(basepoint: Vector, basis: Vec<Vector>) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::DegenerateBasis("no basis vectors".into()));
        }
        let dim = basepoint.dim();
        for (i, u) in basis.iter().enumerate() {
            if u.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: u.dim(),
                });
            }
            if (u.norm() - 1.0).abs() > ORTHONORMAL_TOL {
                return Err(Error::DegenerateBasis(format!(
                    "vector {i} is not unit length"
                )));
            }
            for (j, w) in basis.iter().enumerate().take(i) {
                if u.dot(w).abs() > ORTHONORMAL_TOL {
                    return Err(Error::DegenerateBasis(format!(
                        "vectors {j} and {i} are not orthogonal"
                    )));
                }
            }
        }
        if basis.len() > dim {
            return Err(Error::DegenerateBasis(format!(
                "{} vectors cannot be independent in dimension {dim}",
                basis.len()
            )));
        }
        Ok(Self { basepoint, basis })
    }

    /// Build from any spanning set via Gram-Schmidt; rejects dependent sets.
    pub fn from_spanning(basepoint: Vector, spanning: Vec<Vector>) -> Result<Self> {
        let mut basis: Vec<Vector> = Vec::with_capacity(spanning.len());
        for (i, raw) in spanning.iter().enumerate() {
            if raw.dim() != basepoint.dim() {
                return Err(Error::DimensionMismatch {
                    left: basepoint.dim(),
                    right: raw.dim(),
                });
            }
            let mut u = raw.clone();
            for b in &basis {
                u = u.sub(&b.scale(b.dot(&u)));
            }
            // Second pass tightens orthogonality lost to cancellation.
            for b in &basis {
                u = u.sub(&b.scale(b.dot(&u)));
            }
            let n = u.norm();
            if n <= SPAN_TOL * raw.norm().max(1.0) {
                return Err(Error::DegenerateBasis(format!(
                    "vector {i} is linearly dependent on the ones before it"
                )));
            }
            basis.push(u.scale(1.0 / n));
        }
        Self::new(basepoint, basis)
    }

    pub fn basepoint(&self) -> &Vector {
        &self.basepoint
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basepoint.dim()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// Orthogonal projection of x onto the plane:
/// `q + sum_i <x - q, u_i> u_i` over the orthonormal basis.
pub fn project_to_plane(x: &Vector, plane: &Plane) -> Result<Vector> {
    if x.dim() != plane.dim() {
        return Err(Error::DimensionMismatch {
            left: plane.dim(),
            right: x.dim(),
        });
    }
    let rel = x.sub(&plane.basepoint);
    let mut out = plane.basepoint.clone();
    for u in &plane.basis {
        out = out.add(&u.scale(u.dot(&rel)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::euclidean_distance;
    use approx::assert_abs_diff_eq;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_orthonormal_basis() {
        let q = Vector::zeros(3);
        let bad = Plane::new(q.clone(), vec![v(&[1.0, 1.0, 0.0])]);
        assert!(matches!(bad, Err(Error::DegenerateBasis(_))));
        // Unit length but not orthogonal to the first basis vector.
        let skew = Plane::new(q, vec![v(&[1.0, 0.0, 0.0]), v(&[0.8, 0.6, 0.0])]);
        assert!(matches!(skew, Err(Error::DegenerateBasis(_))));
    }

    #[test]
    fn projection_onto_coordinate_plane() {
        let plane = Plane::new(
            Vector::zeros(3),
            vec![Vector::basis(3, 0), Vector::basis(3, 1)],
        )
        .unwrap();
        let p = project_to_plane(&v(&[2.0, -1.0, 5.0]), &plane).unwrap();
        assert_eq!(p.as_slice(), &[2.0, -1.0, 0.0]);
    }

    #[test]
    fn projection_is_idempotent_and_no_farther() {
        let plane = Plane::from_spanning(
            v(&[1.0, 1.0, 0.0]),
            vec![v(&[1.0, 2.0, 2.0]), v(&[3.0, 0.0, 1.0])],
        )
        .unwrap();
        let x = v(&[0.3, -2.0, 4.5]);
        let y = v(&[-1.0, 0.25, 2.0]);
        let px = project_to_plane(&x, &plane).unwrap();
        let py = project_to_plane(&y, &plane).unwrap();
        let ppx = project_to_plane(&px, &plane).unwrap();
        assert_abs_diff_eq!(euclidean_distance(&px, &ppx), 0.0, epsilon = 1e-12);
        assert!(euclidean_distance(&px, &py) <= euclidean_distance(&x, &y) * (1.0 + 1e-12));
    }

    #[test]
    fn gram_schmidt_rejects_dependence() {
        let dep = Plane::from_spanning(Vector::zeros(2), vec![v(&[1.0, 1.0]), v(&[2.0, 2.0])]);
        assert!(matches!(dep, Err(Error::DegenerateBasis(_))));
    }
}
