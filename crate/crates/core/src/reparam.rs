//! Reparametrization: monotone piecewise-linear parameter changes and the
//! arc-length normal form.
//!
//! Arc-length reparametrization builds a table s_i = length of the curve up
//! to r_i and returns the polyline through (s_i, p(r_i)). Where the curve
//! sits still, consecutive s_i coincide; those plateaus collapse to a single
//! vertex so the table stays strictly increasing.

use crate::curve::{Curve, CurveBody, Interval};
use crate::error::{Error, Result};
use crate::length::{arclength_function, estimate_length, DEFAULT_MAX_SEGMENTS};
use crate::lipschitz::LipschitzMap;
use crate::metric::Metric;

/// Increments of arc length below this are treated as a plateau.
pub const PLATEAU_TOL: f64 = 1e-13;

/// A piecewise-linear map with strictly increasing inputs and nondecreasing
/// values; evaluation clamps to the input range.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneMap {
    knots: Vec<(f64, f64)>,
}

impl MonotoneMap {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::NonMonotoneTable);
        }
        if knots.iter().any(|(u, v)| !u.is_finite() || !v.is_finite()) {
            return Err(Error::NonMonotoneTable);
        }
        if knots
            .windows(2)
            .any(|w| w[0].0 >= w[1].0 || w[0].1 > w[1].1)
        {
            return Err(Error::NonMonotoneTable);
        }
        Ok(Self { knots })
    }

    pub fn identity(interval: Interval) -> Result<Self> {
        Self::new(vec![
            (interval.a(), interval.a()),
            (interval.b(), interval.b()),
        ])
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    pub fn domain(&self) -> Interval {
        Interval::new(self.knots[0].0, self.knots.last().expect("nonempty").0)
            .expect("knots are increasing")
    }

    /// First and last value; by monotonicity these are the extremes.
    pub fn range(&self) -> (f64, f64) {
        (self.knots[0].1, self.knots.last().expect("nonempty").1)
    }

    pub fn eval(&self, u: f64) -> f64 {
        let u = self.domain().clamp(u);
        let i = self.knots.partition_point(|(k, _)| *k <= u);
        if i == 0 {
            return self.knots[0].1;
        }
        if i == self.knots.len() {
            return self.knots[self.knots.len() - 1].1;
        }
        let (u0, v0) = self.knots[i - 1];
        let (u1, v1) = self.knots[i];
        if u == u0 {
            return v0;
        }
        let lam = (u - u0) / (u1 - u0);
        (1.0 - lam) * v0 + lam * v1
    }
}

/// The curve u -> p(phi(u)). `phi` must map its input range onto the curve's
/// domain exactly, endpoint to endpoint.
///
/// Polylines stay polylines: the knot set is the union of phi's input knots
/// and the preimages of the curve's knots, so the composite interpolates
/// exactly the same trace.
pub fn reparametrize_domain(curve: &Curve, phi: &MonotoneMap) -> Result<Curve> {
    let domain = curve.domain();
    let (va, vb) = phi.range();
    if va != domain.a() || vb != domain.b() {
        return Err(Error::TableNotOnto {
            a: domain.a(),
            b: domain.b(),
        });
    }
    match curve.body() {
        CurveBody::Parametric { .. } => {
            let inner = curve.clone();
            let map = phi.clone();
            Ok(Curve::parametric(phi.domain(), curve.dim(), move |u| {
                inner.eval(map.eval(u))
            }))
        }
        CurveBody::Polyline { params, .. } => {
            let mut us: Vec<f64> = phi.knots.iter().map(|(u, _)| *u).collect();
            for &t in params.iter().filter(|&&t| va < t && t < vb) {
                for w in phi.knots.windows(2) {
                    let ((u0, v0), (u1, v1)) = (w[0], w[1]);
                    if v0 < t && t < v1 {
                        us.push(u0 + (u1 - u0) * ((t - v0) / (v1 - v0)));
                    }
                }
            }
            us.sort_by(|a, b| a.partial_cmp(b).expect("finite knots"));
            us.dedup();
            let points = us
                .iter()
                .map(|&u| curve.eval(phi.eval(u)))
                .collect::<Vec<_>>();
            Curve::polyline(us, points)
        }
    }
}

/// Arc-length reparametrization q with q(length up to r) = p(r).
///
/// The table is sampled at the polyline's own knots, or at `samples` evenly
/// spaced parameters for parametric curves. Every prefix length must
/// converge at the given tolerance; the total length is computed once and
/// reused for the final knot so the domain ends exactly at it.
///
/// The result is 1-Lipschitz into the metric up to the estimation
/// tolerance: chords are never longer than the arc between them.
pub fn reparametrize_by_arclength(
    curve: &Curve,
    metric: &Metric,
    samples: usize,
    tol: f64,
) -> Result<Curve> {
    let total = estimate_length(curve, metric, tol, DEFAULT_MAX_SEGMENTS)?;
    if !total.converged {
        return Err(Error::NonConvergentLength(total.segments));
    }
    let domain = curve.domain();
    if total.value <= PLATEAU_TOL {
        let anchor = curve.eval_for_metric(domain.a(), metric)?;
        return Ok(Curve::constant(Interval::new(0.0, 0.0)?, anchor));
    }

    let params: Vec<f64> = match curve.body() {
        CurveBody::Polyline { params, .. } => params.clone(),
        CurveBody::Parametric { .. } => {
            let n = samples.max(2);
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        domain.b()
                    } else {
                        domain.a() + domain.width() * (i as f64) / ((n - 1) as f64)
                    }
                })
                .collect()
        }
    };

    let mut knots: Vec<f64> = Vec::with_capacity(params.len());
    let mut points = Vec::with_capacity(params.len());
    for (i, &r) in params.iter().enumerate() {
        let s = if i == 0 {
            0.0
        } else if i == params.len() - 1 {
            total.value
        } else {
            let prefix = arclength_function(curve, metric, r, tol, DEFAULT_MAX_SEGMENTS)?;
            if !prefix.converged {
                return Err(Error::NonConvergentLength(prefix.segments));
            }
            prefix.value
        };
        if let Some(&last) = knots.last() {
            if s - last < PLATEAU_TOL {
                continue;
            }
        }
        knots.push(s);
        points.push(curve.eval_for_metric(r, metric)?);
    }
    Curve::polyline(knots, points)
}

/// The curve t -> f(p(t)) for a Lipschitz map f whose domain dimension
/// matches the curve's ambient dimension.
pub fn compose_with_map(map: &LipschitzMap, curve: &Curve) -> Result<Curve> {
    if map.domain_metric().dim() != curve.dim() {
        return Err(Error::DimensionMismatch {
            left: map.domain_metric().dim(),
            right: curve.dim(),
        });
    }
    let rule = map.rule();
    let inner = curve.clone();
    Ok(Curve::parametric(
        curve.domain(),
        map.codomain_metric().dim(),
        move |t| rule(&inner.eval(t)),
    ))
}
