//! Geometry of metric spaces: distances, curve length, arc-length
//! reparametrization, constructive geodesics, and axiom checking.
//!
//! The library is organized around a few small ideas:
//!
//! * a `Metric` couples a distance rule with an ambient dimension, and the
//!   two sphere metrics admit their points onto the unit sphere before
//!   computing anything;
//! * the length of a curve is the supremum of sums of distances over
//!   partitions of its domain, approached from below by dyadic refinement;
//! * arc-length reparametrization, polyline shortening, and minimality
//!   certificates are all built from that one notion of length;
//! * axiom checks return violation witnesses and margins, never bare
//!   booleans.

pub mod axioms;
pub mod curve;
pub mod error;
pub mod geodesic;
pub mod io;
pub mod length;
pub mod lipschitz;
pub mod metric;
pub mod norm;
pub mod plane;
pub mod reparam;
pub mod sample;
pub mod sphere;
pub mod vector;

pub use curve::{Curve, CurveBody, Interval, Partition};
pub use error::{Error, Result};
pub use geodesic::{Certificate, GeodesicProblem, ShorteningConfig, ShorteningOutcome};
pub use length::{LengthEstimate, TraceRow, DEFAULT_MAX_SEGMENTS, DEFAULT_TOL};
pub use lipschitz::LipschitzMap;
pub use metric::{Metric, MetricKind};
pub use norm::PNorm;
pub use plane::Plane;
pub use reparam::MonotoneMap;
pub use vector::Vector;
