//! Parameter intervals, partitions, and curves.
//!
//! A curve is either a polyline (finitely many vertices with strictly
//! increasing parameter values, interpolated linearly) or a parametric rule.
//! Derivatives are never inferred numerically: a parametric curve either
//! carries a derivative rule or has none.
//!
//! Evaluation clamps the parameter to the domain, so curves are total on R.
//! Under a sphere metric, evaluation additionally admits points onto the
//! unit sphere; for polylines the chord between admitted vertices is
//! interpolated and pushed back onto the sphere by exact renormalization.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::sphere;
use crate::vector::Vector;

// ===========================================================================
// Intervals and partitions
// ===========================================================================

/// A closed parameter interval [a, b] with a <= b. Width zero is allowed and
/// marks a degenerate (single-point) domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || a > b {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, t: f64) -> bool {
        self.a <= t && t <= self.b
    }

    pub fn clamp(&self, t: f64) -> f64 {
        t.clamp(self.a, self.b)
    }
}

/// Strictly increasing knots t_0 < t_1 < ... < t_n with n >= 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    knots: Vec<f64>,
}

impl Partition {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidPartition);
        }
        if knots.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidPartition);
        }
        if knots.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPartition);
        }
        Ok(Self { knots })
    }

    /// n + 1 equally spaced knots over the interval, endpoints exact.
    pub fn uniform(interval: Interval, segments: usize) -> Result<Self> {
        if segments == 0 {
            return Err(Error::InvalidPartition);
        }
        let (a, b) = (interval.a, interval.b);
        let knots = (0..=segments)
            .map(|j| {
                if j == 0 {
                    a
                } else if j == segments {
                    b
                } else {
                    a + (b - a) * (j as f64) / (segments as f64)
                }
            })
            .collect();
        Self::new(knots)
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn segments(&self) -> usize {
        self.knots.len() - 1
    }

    pub fn interval(&self) -> Interval {
        Interval {
            a: self.knots[0],
            b: *self.knots.last().expect("at least two knots"),
        }
    }

    /// Insert the midpoint of every cell. Cells too narrow to hold a
    /// representable interior point are left alone, so the result may have
    /// fewer than twice the segments.
    pub fn refine(&self) -> Self {
        let mut knots = Vec::with_capacity(2 * self.knots.len());
        for w in self.knots.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            knots.push(t0);
            let mid = 0.5 * (t0 + t1);
            if t0 < mid && mid < t1 {
                knots.push(mid);
            }
        }
        knots.push(*self.knots.last().expect("at least two knots"));
        Self { knots }
    }

    /// True when every knot of `coarser` also appears here (bitwise) and the
    /// endpoints agree.
    pub fn is_refinement_of(&self, coarser: &Self) -> bool {
        if self.interval() != coarser.interval() {
            return false;
        }
        let mut fine = self.knots.iter();
        coarser.knots.iter().all(|t| fine.by_ref().any(|s| s == t))
    }
}

// ===========================================================================
// Curves
// ===========================================================================

pub type PointFn = Arc<dyn Fn(f64) -> Vector + Send + Sync>;

#[derive(Clone)]
pub enum CurveBody {
    Polyline {
        params: Vec<f64>,
        points: Vec<Vector>,
    },
    Parametric {
        eval: PointFn,
        deriv: Option<PointFn>,
    },
}

#[derive(Clone)]
pub struct Curve {
    domain: Interval,
    dim: usize,
    body: CurveBody,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = match &self.body {
            CurveBody::Polyline { params, .. } => format!("Polyline({} knots)", params.len()),
            CurveBody::Parametric { deriv, .. } => format!(
                "Parametric(derivative: {})",
                if deriv.is_some() { "yes" } else { "no" }
            ),
        };
        write!(
            f,
            "Curve {{ domain: [{}, {}], dim: {}, {} }}",
            self.domain.a, self.domain.b, self.dim, body
        )
    }
}

impl Curve {
    /// Polyline through `points` at strictly increasing `params`.
    pub fn polyline(params: Vec<f64>, points: Vec<Vector>) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::Parse(format!(
                "polyline has {} params but {} points",
                params.len(),
                points.len()
            )));
        }
        if params.len() < 2 {
            return Err(Error::InvalidPartition);
        }
        let partition = Partition::new(params)?;
        let dim = points[0].dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.dim(),
                });
            }
        }
        Ok(Self {
            domain: partition.interval(),
            dim,
            body: CurveBody::Polyline {
                params: partition.knots,
                points,
            },
        })
    }

    pub fn parametric(
        domain: Interval,
        dim: usize,
        eval: impl Fn(f64) -> Vector + Send + Sync + 'static,
    ) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        Self {
            domain,
            dim,
            body: CurveBody::Parametric {
                eval: Arc::new(eval),
                deriv: None,
            },
        }
    }

    pub fn parametric_with_derivative(
        domain: Interval,
        dim: usize,
        eval: impl Fn(f64) -> Vector + Send + Sync + 'static,
        deriv: impl Fn(f64) -> Vector + Send + Sync + 'static,
    ) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        Self {
            domain,
            dim,
            body: CurveBody::Parametric {
                eval: Arc::new(eval),
                deriv: Some(Arc::new(deriv)),
            },
        }
    }

    /// The constant curve sitting at `point`.
    pub fn constant(domain: Interval, point: Vector) -> Self {
        let dim = point.dim();
        let zero = Vector::zeros(dim);
        Self::parametric_with_derivative(domain, dim, move |_| point.clone(), move |_| zero.clone())
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn body(&self) -> &CurveBody {
        &self.body
    }

    pub fn has_derivative(&self) -> bool {
        matches!(&self.body, CurveBody::Parametric { deriv: Some(_), .. })
    }

    /// Knots and vertices if this is a polyline.
    pub fn polyline_data(&self) -> Option<(&[f64], &[Vector])> {
        match &self.body {
            CurveBody::Polyline { params, points } => Some((params, points)),
            CurveBody::Parametric { .. } => None,
        }
    }

    /// Point at parameter t, clamped to the domain. At a polyline knot the
    /// stored vertex is returned bitwise.
    pub fn eval(&self, t: f64) -> Vector {
        let t = self.domain.clamp(t);
        match &self.body {
            CurveBody::Parametric { eval, .. } => eval(t),
            CurveBody::Polyline { params, points } => {
                let (cell, lam) = locate(params, t);
                match lam {
                    None => points[cell].clone(),
                    Some(lam) => points[cell].lerp(&points[cell + 1], lam),
                }
            }
        }
    }

    /// Derivative rule at t (clamped), if the curve carries one.
    pub fn derivative(&self, t: f64) -> Result<Vector> {
        let t = self.domain.clamp(t);
        match &self.body {
            CurveBody::Parametric { deriv: Some(d), .. } => Ok(d(t)),
            _ => Err(Error::MissingDerivative),
        }
    }

    /// Point at t as seen by `metric`: identical to `eval` for the norm
    /// metrics, admitted onto the unit sphere for the sphere metrics.
    ///
    /// A polyline under a sphere metric traverses the great-circle arc
    /// between its admitted vertices at constant speed, so the trace lies on
    /// the sphere for every parameter and covers arc length in proportion to
    /// the parameter within each edge.
    pub fn eval_for_metric(&self, t: f64, metric: &Metric) -> Result<Vector> {
        if !metric.is_sphere() {
            return Ok(self.eval(t));
        }
        let t = self.domain.clamp(t);
        match &self.body {
            CurveBody::Parametric { .. } => sphere::admit_unit(&self.eval(t)),
            CurveBody::Polyline { params, points } => {
                let (cell, lam) = locate(params, t);
                match lam {
                    None => sphere::admit_unit(&points[cell]),
                    Some(lam) => sphere::slerp(&points[cell], &points[cell + 1], lam),
                }
            }
        }
    }

    /// The same curve on a subinterval of its domain.
    pub fn restrict(&self, sub: Interval) -> Result<Self> {
        if !(self.domain.contains(sub.a) && self.domain.contains(sub.b)) {
            let bad = if self.domain.contains(sub.a) {
                sub.b
            } else {
                sub.a
            };
            return Err(Error::ParameterOutOfDomain {
                value: bad,
                a: self.domain.a,
                b: self.domain.b,
            });
        }
        if sub.width() == 0.0 {
            return Ok(Self::constant(sub, self.eval(sub.a)));
        }
        match &self.body {
            CurveBody::Parametric { eval, deriv } => Ok(Self {
                domain: sub,
                dim: self.dim,
                body: CurveBody::Parametric {
                    eval: eval.clone(),
                    deriv: deriv.clone(),
                },
            }),
            CurveBody::Polyline { params, .. } => {
                let mut knots = vec![sub.a];
                knots.extend(params.iter().copied().filter(|&u| sub.a < u && u < sub.b));
                knots.push(sub.b);
                let points = knots.iter().map(|&u| self.eval(u)).collect();
                Self::polyline(knots, points)
            }
        }
    }

    // =======================================================================
    // Named fixtures
    // =======================================================================

    /// Unit circle (cos t, sin t) on [a, b].
    pub fn circle(a: f64, b: f64) -> Result<Self> {
        Ok(Self::parametric_with_derivative(
            Interval::new(a, b)?,
            2,
            |t: f64| Vector::new(vec![t.cos(), t.sin()]).expect("finite"),
            |t: f64| Vector::new(vec![-t.sin(), t.cos()]).expect("finite"),
        ))
    }

    /// Unit-pitch helix (cos t, sin t, t) on [a, b].
    pub fn helix(a: f64, b: f64) -> Result<Self> {
        Ok(Self::parametric_with_derivative(
            Interval::new(a, b)?,
            3,
            |t: f64| Vector::new(vec![t.cos(), t.sin(), t]).expect("finite"),
            |t: f64| Vector::new(vec![-t.sin(), t.cos(), 1.0]).expect("finite"),
        ))
    }

    /// Scalar curve t * cos(pi / t), extended by 0 at t = 0, on [a, b] with
    /// a >= 0. Continuous but of unbounded variation near 0.
    pub fn graph_tcos(a: f64, b: f64) -> Result<Self> {
        let domain = Interval::new(a, b)?;
        if a < 0.0 {
            return Err(Error::ParameterOutOfDomain {
                value: a,
                a: 0.0,
                b: f64::INFINITY,
            });
        }
        Ok(Self::parametric(domain, 1, |t: f64| {
            let v = if t == 0.0 {
                0.0
            } else {
                t * (std::f64::consts::PI / t).cos()
            };
            Vector::new(vec![v]).expect("finite")
        }))
    }
}

/// Find the polyline cell for t: returns (index, None) when t is exactly the
/// knot at `index`, else (cell, Some(lambda)) with lambda in (0, 1).
fn locate(params: &[f64], t: f64) -> (usize, Option<f64>) {
    let i = params.partition_point(|&u| u <= t);
    if i == 0 {
        return (0, None);
    }
    if i == params.len() {
        return (params.len() - 1, None);
    }
    let (t0, t1) = (params[i - 1], params[i]);
    if t == t0 {
        return (i - 1, None);
    }
    (i - 1, Some((t - t0) / (t1 - t0)))
}
