//! The metric family: which distance is in force, and on which space.
//!
//! A `Metric` pairs a kind tag with an ambient dimension. All distance
//! entry points validate dimensions and, for the sphere metrics, membership
//! of both points before computing anything.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::norm::PNorm;
use crate::sphere;
use crate::vector::{euclidean_distance, Vector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MetricKind {
    Euclidean,
    PNorm(PNorm),
    Discrete,
    /// Restriction of the Euclidean distance to the unit sphere.
    ChordalSphere,
    /// Geodesic (great-circle) distance on the unit sphere.
    SphericalIntrinsic,
}

impl MetricKind {
    pub fn requires_sphere(&self) -> bool {
        matches!(
            self,
            MetricKind::ChordalSphere | MetricKind::SphericalIntrinsic
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric {
    kind: MetricKind,
    dim: usize,
}

impl Metric {
    pub fn new(kind: MetricKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if kind.requires_sphere() && dim < 2 {
            return Err(Error::SphereDimension(dim));
        }
        Ok(Self { kind, dim })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(MetricKind::Euclidean, dim).expect("dimension must be >= 1")
    }

    pub fn pnorm(p: PNorm, dim: usize) -> Self {
        Self::new(MetricKind::PNorm(p), dim).expect("dimension must be >= 1")
    }

    pub fn discrete(dim: usize) -> Self {
        Self::new(MetricKind::Discrete, dim).expect("dimension must be >= 1")
    }

    pub fn chordal_sphere(dim: usize) -> Result<Self> {
        Self::new(MetricKind::ChordalSphere, dim)
    }

    pub fn sphere(dim: usize) -> Result<Self> {
        Self::new(MetricKind::SphericalIntrinsic, dim)
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True for both sphere metrics: points must live on the unit sphere.
    pub fn is_sphere(&self) -> bool {
        self.kind.requires_sphere()
    }

    pub fn distance(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.check_point_dim(x)?;
        self.check_point_dim(y)?;
        match self.kind {
            MetricKind::Euclidean => Ok(euclidean_distance(x, y)),
            MetricKind::PNorm(p) => Ok(p.eval(&x.sub(y))),
            MetricKind::Discrete => Ok(if x == y { 0.0 } else { 1.0 }),
            MetricKind::ChordalSphere => {
                let xs = sphere::admit_unit(x)?;
                let ys = sphere::admit_unit(y)?;
                Ok(euclidean_distance(&xs, &ys))
            }
            MetricKind::SphericalIntrinsic => sphere::spherical_distance(x, y),
        }
    }

    fn check_point_dim(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: x.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MetricKind::Euclidean => write!(f, "euclidean"),
            MetricKind::PNorm(p) => write!(f, "pnorm:{p}"),
            MetricKind::Discrete => write!(f, "discrete"),
            MetricKind::ChordalSphere => write!(f, "chordal-sphere"),
            MetricKind::SphericalIntrinsic => write!(f, "sphere"),
        }
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(MetricKind::Euclidean),
            "discrete" => Ok(MetricKind::Discrete),
            "chordal-sphere" => Ok(MetricKind::ChordalSphere),
            "sphere" => Ok(MetricKind::SphericalIntrinsic),
            _ => {
                if let Some(p) = s.strip_prefix("pnorm:") {
                    Ok(MetricKind::PNorm(p.parse()?))
                } else {
                    Err(Error::Parse(format!("unknown metric: {s:?}")))
                }
            }
        }
    }
}
