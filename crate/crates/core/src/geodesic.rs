//! Constructive geodesics: line segments, polyline shortening by midpoint
//! relaxation, and minimality certificates.
//!
//! The shortening flow alternates two steps on a polyline with pinned
//! endpoints. A relaxation sweep replaces every interior vertex by the
//! midpoint of its two neighbors, reading only the previous polyline, so
//! the result does not depend on vertex order; on the sphere metrics the
//! ambient midpoint is renormalized, which is the geodesic midpoint of the
//! neighbors. A re-spacing step then redistributes the vertices uniformly
//! by arc length along the current polyline. Both steps are nonincreasing
//! in length, by the triangle inequality.
//!
//! A curve is certified minimal when its estimated length is within a
//! relative tolerance of the distance between its endpoints; no curve can
//! be shorter than that, so the certificate is self-evident whenever it
//! holds. The certificate compares the estimate as computed; callers who
//! need a guarantee should also require the estimate to have converged.

use crate::curve::{Curve, Interval};
use crate::error::{Error, Result};
use crate::length::{estimate_length, LengthEstimate, DEFAULT_MAX_SEGMENTS, DEFAULT_TOL};
use crate::metric::Metric;
use crate::sphere;
use crate::vector::Vector;

/// Relative headroom over the endpoint distance accepted by certificates.
pub const DEFAULT_CERTIFY_TOL: f64 = 1e-6;

const REL_FLOOR: f64 = 1e-300;

/// Endpoints to be joined by a short curve under a metric.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicProblem {
    metric: Metric,
    start: Vector,
    end: Vector,
}

impl GeodesicProblem {
    /// Validates dimensions, admits the endpoints onto the sphere for the
    /// sphere metrics, and rejects antipodal sphere endpoints, for which
    /// the shortest arc is not unique.
    pub fn new(metric: Metric, start: Vector, end: Vector) -> Result<Self> {
        for p in [&start, &end] {
            if p.dim() != metric.dim() {
                return Err(Error::DimensionMismatch {
                    left: metric.dim(),
                    right: p.dim(),
                });
            }
        }
        let (start, end) = if metric.is_sphere() {
            let s = sphere::admit_unit(&start)?;
            let e = sphere::admit_unit(&end)?;
            let d = sphere::spherical_distance(&s, &e)?;
            if std::f64::consts::PI - d <= sphere::ANTIPODAL_TOL {
                return Err(Error::AntipodalEndpoints);
            }
            (s, e)
        } else {
            (start, end)
        };
        Ok(Self { metric, start, end })
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn start(&self) -> &Vector {
        &self.start
    }

    pub fn end(&self) -> &Vector {
        &self.end
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShorteningConfig {
    /// Vertex count of the evolving polyline, endpoints included.
    pub vertices: usize,
    pub max_sweeps: usize,
    /// Stop once the relative length decrease of a sweep falls below this.
    pub stop_tol: f64,
    /// Recorded for reproducibility of downstream sampling; the flow
    /// itself is deterministic.
    pub seed: u64,
}

impl Default for ShorteningConfig {
    fn default() -> Self {
        Self {
            vertices: 65,
            max_sweeps: 10_000,
            stop_tol: 1e-12,
            seed: 0,
        }
    }
}

impl ShorteningConfig {
    fn validate(&self) -> Result<()> {
        if self.vertices < 3 {
            return Err(Error::InvalidConfig(format!(
                "need at least 3 vertices, got {}",
                self.vertices
            )));
        }
        if self.max_sweeps == 0 {
            return Err(Error::InvalidConfig("max_sweeps must be positive".into()));
        }
        if !self.stop_tol.is_finite() || self.stop_tol <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "stop_tol must be positive and finite, got {}",
                self.stop_tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub final_length: f64,
    pub endpoint_distance: f64,
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct ShorteningOutcome {
    /// Final polyline, parametrized by arc length on [0, final length].
    pub curve: Curve,
    pub certificate: Certificate,
    /// Sweeps actually run.
    pub sweeps: usize,
    /// Length before any sweep, then after each sweep.
    pub sweep_lengths: Vec<f64>,
}

/// The affine segment from x to y on [0, 1], with its derivative rule.
pub fn line_segment(x: &Vector, y: &Vector) -> Result<Curve> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let step = y.sub(x);
    let (from, to) = (x.clone(), y.clone());
    Ok(Curve::parametric_with_derivative(
        Interval::new(0.0, 1.0)?,
        x.dim(),
        move |t: f64| from.lerp(&to, t),
        move |_| step.clone(),
    ))
}

/// Sum of consecutive vertex distances.
pub fn polyline_length(points: &[Vector], metric: &Metric) -> Result<f64> {
    let mut sum = 0.0;
    for w in points.windows(2) {
        sum += metric.distance(&w[0], &w[1])?;
    }
    Ok(sum)
}

/// One Jacobi relaxation sweep: every interior vertex moves to the midpoint
/// of its previous neighbors; endpoints stay bitwise. On the sphere metrics
/// the midpoint is the renormalized ambient midpoint.
pub fn relaxation_sweep(points: &[Vector], metric: &Metric) -> Result<Vec<Vector>> {
    let mut out = points.to_vec();
    for i in 1..points.len().saturating_sub(1) {
        let mid = points[i - 1].lerp(&points[i + 1], 0.5);
        out[i] = if metric.is_sphere() {
            mid.normalized().ok_or(Error::DegenerateRenormalization)?
        } else {
            mid
        };
    }
    Ok(out)
}

/// Redistribute the vertices uniformly by arc length along the polyline
/// they currently form. Endpoints stay bitwise; under a sphere metric the
/// new vertices sit on the great-circle arcs between the old ones, at their
/// exact arc-length fractions. Length never increases: the new vertices lie
/// on the old path, in order.
pub fn respace_by_arclength(points: &[Vector], metric: &Metric) -> Result<Vec<Vector>> {
    let n = points.len();
    if n < 3 {
        return Ok(points.to_vec());
    }
    let mut cum = Vec::with_capacity(n);
    cum.push(0.0);
    for w in points.windows(2) {
        let d = metric.distance(&w[0], &w[1])?;
        cum.push(cum.last().expect("nonempty") + d);
    }
    let total = *cum.last().expect("nonempty");
    if total <= 0.0 {
        return Ok(points.to_vec());
    }
    let mut out = points.to_vec();
    let mut cell = 0usize;
    for (j, slot) in out.iter_mut().enumerate().take(n - 1).skip(1) {
        let target = total * (j as f64) / ((n - 1) as f64);
        while cell + 2 < n && cum[cell + 1] < target {
            cell += 1;
        }
        let seg = cum[cell + 1] - cum[cell];
        let lam = if seg > 0.0 {
            ((target - cum[cell]) / seg).clamp(0.0, 1.0)
        } else {
            0.0
        };
        *slot = if metric.is_sphere() {
            sphere::slerp(&points[cell], &points[cell + 1], lam)?
        } else {
            points[cell].lerp(&points[cell + 1], lam)
        };
    }
    Ok(out)
}

/// Shorten the polyline joining the problem's endpoints until the length
/// stalls or the sweep budget runs out, then certify the result.
///
/// The initial polyline interpolates the ambient segment between the
/// endpoints, or the great-circle arc when the metric lives on the sphere.
pub fn shorten_polyline(
    problem: &GeodesicProblem,
    config: &ShorteningConfig,
) -> Result<ShorteningOutcome> {
    config.validate()?;
    let metric = &problem.metric;
    let endpoint_distance = metric.distance(&problem.start, &problem.end)?;

    if endpoint_distance == 0.0 {
        let curve = Curve::constant(Interval::new(0.0, 0.0)?, problem.start.clone());
        return Ok(ShorteningOutcome {
            curve,
            certificate: Certificate {
                final_length: 0.0,
                endpoint_distance: 0.0,
                certified: true,
            },
            sweeps: 0,
            sweep_lengths: vec![0.0],
        });
    }

    let n = config.vertices;
    let mut points = Vec::with_capacity(n);
    points.push(problem.start.clone());
    for i in 1..n - 1 {
        let lam = (i as f64) / ((n - 1) as f64);
        points.push(if metric.is_sphere() {
            sphere::slerp(&problem.start, &problem.end, lam)?
        } else {
            problem.start.lerp(&problem.end, lam)
        });
    }
    points.push(problem.end.clone());

    let mut sweep_lengths = vec![polyline_length(&points, metric)?];
    let mut sweeps = 0usize;
    for _ in 0..config.max_sweeps {
        points = relaxation_sweep(&points, metric)?;
        points = respace_by_arclength(&points, metric)?;
        let length = polyline_length(&points, metric)?;
        let prev = *sweep_lengths.last().expect("nonempty");
        sweep_lengths.push(length);
        sweeps += 1;
        if (prev - length) / prev.max(REL_FLOOR) < config.stop_tol {
            break;
        }
    }

    let final_length = *sweep_lengths.last().expect("nonempty");
    let params = (0..n)
        .map(|j| {
            if j == n - 1 {
                final_length
            } else {
                final_length * (j as f64) / ((n - 1) as f64)
            }
        })
        .collect::<Vec<_>>();
    let curve = Curve::polyline(params, points)?;
    let certificate = certify_minimal(&curve, metric, DEFAULT_CERTIFY_TOL)?;
    Ok(ShorteningOutcome {
        curve,
        certificate,
        sweeps,
        sweep_lengths,
    })
}

/// Certify that a curve is as short as any curve between its endpoints:
/// its length estimate must not exceed the endpoint distance by more than
/// the relative tolerance.
pub fn certify_minimal(curve: &Curve, metric: &Metric, tol: f64) -> Result<Certificate> {
    let domain = curve.domain();
    let a = curve.eval_for_metric(domain.a(), metric)?;
    let b = curve.eval_for_metric(domain.b(), metric)?;
    let endpoint_distance = metric.distance(&a, &b)?;
    let estimate = estimate_length(curve, metric, DEFAULT_TOL, DEFAULT_MAX_SEGMENTS)?;
    Ok(Certificate {
        final_length: estimate.value,
        endpoint_distance,
        certified: estimate.value <= endpoint_distance * (1.0 + tol),
    })
}

/// Length of an on-sphere curve under the chordal and the intrinsic sphere
/// metric, in that order. The two estimates bracket the same supremum, so
/// for rectifiable curves they agree in the limit.
pub fn spherical_chordal_length_agreement(
    curve: &Curve,
    tol: f64,
) -> Result<(LengthEstimate, LengthEstimate)> {
    let chordal = Metric::chordal_sphere(curve.dim())?;
    let intrinsic = Metric::sphere(curve.dim())?;
    let c = estimate_length(curve, &chordal, tol, DEFAULT_MAX_SEGMENTS)?;
    let s = estimate_length(curve, &intrinsic, tol, DEFAULT_MAX_SEGMENTS)?;
    Ok((c, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::PNorm;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::FRAC_PI_2;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn problem_validation() {
        let m = Metric::sphere(3).unwrap();
        assert!(matches!(
            GeodesicProblem::new(m, v(&[1.0, 0.0, 0.0]), v(&[-1.0, 0.0, 0.0])),
            Err(Error::AntipodalEndpoints)
        ));
        assert!(matches!(
            GeodesicProblem::new(m, v(&[2.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])),
            Err(Error::OffSphere { .. })
        ));
        assert!(matches!(
            GeodesicProblem::new(Metric::euclidean(2), v(&[0.0, 0.0]), v(&[1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let p = GeodesicProblem::new(Metric::euclidean(1), v(&[0.0]), v(&[1.0])).unwrap();
        let bad = ShorteningConfig {
            vertices: 2,
            ..Default::default()
        };
        assert!(matches!(
            shorten_polyline(&p, &bad),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn segment_is_certified_in_every_norm() {
        let x = v(&[0.0, 0.0]);
        let y = v(&[1.0, 1.0]);
        let seg = line_segment(&x, &y).unwrap();
        for m in [
            Metric::euclidean(2),
            Metric::pnorm(PNorm::finite(1.0).unwrap(), 2),
            Metric::pnorm(PNorm::INF, 2),
            Metric::pnorm(PNorm::finite(3.5).unwrap(), 2),
        ] {
            let cert = certify_minimal(&seg, &m, DEFAULT_CERTIFY_TOL).unwrap();
            assert!(cert.certified, "not certified under {m}");
            assert_relative_eq!(
                cert.final_length,
                cert.endpoint_distance,
                max_relative = 1e-9
            );
        }
    }

    #[test]
    fn euclidean_shortening_reaches_the_segment() {
        let p = GeodesicProblem::new(
            Metric::euclidean(3),
            v(&[0.0, 0.0, 0.0]),
            v(&[1.0, 2.0, -1.0]),
        )
        .unwrap();
        let out = shorten_polyline(&p, &ShorteningConfig::default()).unwrap();
        assert!(out.certificate.certified);
        assert_relative_eq!(
            out.certificate.final_length,
            6.0f64.sqrt(),
            max_relative = 1e-9
        );
        assert!(out.sweeps <= 10_000);
        for w in out.sweep_lengths.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn sphere_shortening_quarter_circle() {
        let p = GeodesicProblem::new(
            Metric::sphere(3).unwrap(),
            v(&[1.0, 0.0, 0.0]),
            v(&[0.0, 1.0, 0.0]),
        )
        .unwrap();
        let out = shorten_polyline(&p, &ShorteningConfig::default()).unwrap();
        assert!(out.certificate.certified);
        assert_abs_diff_eq!(out.certificate.final_length, FRAC_PI_2, epsilon = 1e-9);
        // Vertices stay on the sphere.
        let (_, pts) = out.curve.polyline_data().unwrap();
        for q in pts {
            assert_abs_diff_eq!(q.norm(), 1.0, epsilon = 1e-12);
        }
        // Endpoints pinned bitwise.
        assert_eq!(pts[0], *p.start());
        assert_eq!(pts[pts.len() - 1], *p.end());
    }

    #[test]
    fn degenerate_problem_returns_a_point() {
        let p = GeodesicProblem::new(Metric::euclidean(2), v(&[3.0, 4.0]), v(&[3.0, 4.0])).unwrap();
        let out = shorten_polyline(&p, &ShorteningConfig::default()).unwrap();
        assert!(out.certificate.certified);
        assert_eq!(out.certificate.final_length, 0.0);
        assert_eq!(out.sweeps, 0);
        assert_eq!(out.curve.domain().width(), 0.0);
    }

    #[test]
    fn respace_preserves_endpoints_and_order() {
        let m = Metric::euclidean(2);
        let pts = vec![
            v(&[0.0, 0.0]),
            v(&[0.1, 0.0]),
            v(&[0.2, 0.0]),
            v(&[3.0, 0.0]),
        ];
        let out = respace_by_arclength(&pts, &m).unwrap();
        assert_eq!(out[0], pts[0]);
        assert_eq!(out[3], pts[3]);
        assert_abs_diff_eq!(out[1][0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[2][0], 2.0, epsilon = 1e-12);
        let before = polyline_length(&pts, &m).unwrap();
        let after = polyline_length(&out, &m).unwrap();
        assert!(after <= before * (1.0 + 1e-12));
    }

    #[test]
    fn staircase_is_minimal_in_the_taxicab_plane() {
        let m = Metric::pnorm(PNorm::finite(1.0).unwrap(), 2);
        let stair = Curve::polyline(
            vec![0.0, 1.0, 2.0],
            vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[1.0, 1.0])],
        )
        .unwrap();
        let cert = certify_minimal(&stair, &m, DEFAULT_CERTIFY_TOL).unwrap();
        assert!(cert.certified);
        assert_eq!(cert.final_length, 2.0);
        assert_eq!(cert.endpoint_distance, 2.0);
    }

    #[test]
    fn chordal_and_intrinsic_lengths_agree_on_arcs() {
        let arc =
            crate::sphere::great_circle_arc(&v(&[1.0, 0.0, 0.0]), &v(&[0.0, 1.0, 0.0])).unwrap();
        let (c, s) = spherical_chordal_length_agreement(&arc, 1e-9).unwrap();
        assert!(c.converged && s.converged);
        assert_abs_diff_eq!(c.value, s.value, epsilon = 1e-6);
        assert_abs_diff_eq!(s.value, FRAC_PI_2, epsilon = 1e-6);
    }
}
