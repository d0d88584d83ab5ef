//! Curve length as the supremum of partition sums, and quadrature for
//! curves that carry a derivative rule.
//!
//! The estimator walks dyadic refinements: starting from the coarsest
//! partition it doubles (by midpoint insertion) until the relative increment
//! drops below the tolerance on two consecutive doublings, or the segment
//! budget is exhausted. Partition sums only grow under refinement, so each
//! estimate is a lower bound for the true length.
//!
//! Polyline curves seed the refinement with their own knots instead of a
//! fresh uniform grid. Chains of dyadic grids that straddle polyline corners
//! converge only linearly, which would blow the segment budget on curves the
//! knot-seeded chain resolves exactly at every level.

use crate::curve::{Curve, CurveBody, Partition};
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::norm::PNorm;
use crate::vector::Vector;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_SEGMENTS: usize = 1 << 20;

/// Floor for relative-increment denominators, so zero-length curves converge.
const REL_FLOOR: f64 = 1e-300;

const QUAD_MAX_DEPTH: usize = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct LengthEstimate {
    /// Largest partition sum seen.
    pub value: f64,
    /// Segments of the finest partition used.
    pub segments: usize,
    /// Whether the doubling chain met the convergence rule in budget.
    pub converged: bool,
    /// Partition sums never overshoot the true length.
    pub lower_bound: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub segments: usize,
    pub lambda: f64,
}

/// Sum of distances between consecutive sample points of `curve` over the
/// knots of `partition`, which must span exactly the curve's domain.
pub fn partition_sum(curve: &Curve, metric: &Metric, partition: &Partition) -> Result<f64> {
    if curve.dim() != metric.dim() {
        return Err(Error::DimensionMismatch {
            left: metric.dim(),
            right: curve.dim(),
        });
    }
    let domain = curve.domain();
    let span = partition.interval();
    if span.a() != domain.a() || span.b() != domain.b() {
        return Err(Error::PartitionDomainMismatch {
            p_a: span.a(),
            p_b: span.b(),
            a: domain.a(),
            b: domain.b(),
        });
    }
    let knots = partition.knots();
    let mut prev = curve.eval_for_metric(knots[0], metric)?;
    let mut sum = 0.0;
    for &t in &knots[1..] {
        let next = curve.eval_for_metric(t, metric)?;
        sum += metric.distance(&prev, &next)?;
        prev = next;
    }
    Ok(sum)
}

/// Length estimate together with the full doubling trace
/// (segments, partition sum) for each level visited.
pub fn estimate_length_traced(
    curve: &Curve,
    metric: &Metric,
    tol: f64,
    max_segments: usize,
) -> Result<(LengthEstimate, Vec<TraceRow>)> {
    if curve.dim() != metric.dim() {
        return Err(Error::DimensionMismatch {
            left: metric.dim(),
            right: curve.dim(),
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parse(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if curve.domain().width() == 0.0 {
        let estimate = LengthEstimate {
            value: 0.0,
            segments: 0,
            converged: true,
            lower_bound: true,
        };
        return Ok((estimate, Vec::new()));
    }

    let mut partition = initial_partition(curve)?;
    let mut lambda = partition_sum(curve, metric, &partition)?;
    let mut trace = vec![TraceRow {
        segments: partition.segments(),
        lambda,
    }];
    let mut small_steps = 0usize;
    let mut converged = false;

    loop {
        let refined = partition.refine();
        if refined.segments() > max_segments || refined.segments() == partition.segments() {
            break;
        }
        let next = partition_sum(curve, metric, &refined)?;
        let rel = (next - lambda) / next.max(REL_FLOOR);
        partition = refined;
        lambda = next;
        trace.push(TraceRow {
            segments: partition.segments(),
            lambda,
        });
        if rel < tol {
            small_steps += 1;
            if small_steps >= 2 {
                converged = true;
                break;
            }
        } else {
            small_steps = 0;
        }
    }

    let estimate = LengthEstimate {
        value: lambda,
        segments: partition.segments(),
        converged,
        lower_bound: true,
    };
    Ok((estimate, trace))
}

/// Length of `curve` under `metric` by dyadic refinement of partition sums.
///
/// Non-convergence within `max_segments` is reported in band through the
/// `converged` flag, not as an error: the value is still a valid lower bound.
pub fn estimate_length(
    curve: &Curve,
    metric: &Metric,
    tol: f64,
    max_segments: usize,
) -> Result<LengthEstimate> {
    estimate_length_traced(curve, metric, tol, max_segments).map(|(estimate, _)| estimate)
}

/// Length of the restriction of `curve` to [a, r], where a is the left end
/// of the domain.
pub fn arclength_function(
    curve: &Curve,
    metric: &Metric,
    r: f64,
    tol: f64,
    max_segments: usize,
) -> Result<LengthEstimate> {
    let domain = curve.domain();
    if !domain.contains(r) {
        return Err(Error::ParameterOutOfDomain {
            value: r,
            a: domain.a(),
            b: domain.b(),
        });
    }
    let head = curve.restrict(crate::curve::Interval::new(domain.a(), r)?)?;
    estimate_length(&head, metric, tol, max_segments)
}

fn initial_partition(curve: &Curve) -> Result<Partition> {
    match curve.body() {
        CurveBody::Polyline { params, .. } => Partition::new(params.clone()),
        CurveBody::Parametric { .. } => {
            let d = curve.domain();
            Partition::new(vec![d.a(), d.b()])
        }
    }
}

// ===========================================================================
// Quadrature
// ===========================================================================

/// Length of a continuously differentiable curve as the integral of the
/// norm of its derivative, for the given p-norm.
pub fn integral_length(curve: &Curve, norm: PNorm, tol: f64) -> Result<f64> {
    integral_length_with(curve, move |v| norm.eval(v), tol)
}

/// Same as `integral_length` with an arbitrary speed functional applied to
/// the derivative.
pub fn integral_length_with(
    curve: &Curve,
    speed: impl Fn(&Vector) -> f64,
    tol: f64,
) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parse(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let deriv = match curve.body() {
        CurveBody::Parametric { deriv: Some(d), .. } => d.clone(),
        _ => return Err(Error::MissingDerivative),
    };
    let domain = curve.domain();
    if domain.width() == 0.0 {
        return Ok(0.0);
    }
    let f = move |u: f64| speed(&deriv(u));
    let whole = gauss5(&f, domain.a(), domain.b());
    let budget = tol * whole.abs().max(REL_FLOOR);
    adapt(&f, domain.a(), domain.b(), whole, budget, 0)
}

/// Composite adaptive bisection: a panel is accepted when the two-panel
/// refinement agrees with the one-panel value within its share of the error
/// budget, which is halved on each descent.
fn adapt(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    whole: f64,
    budget: f64,
    depth: usize,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = gauss5(f, a, mid);
    let right = gauss5(f, mid, b);
    if (left + right - whole).abs() <= budget {
        return Ok(left + right);
    }
    if depth >= QUAD_MAX_DEPTH {
        return Err(Error::QuadratureDepthExceeded(QUAD_MAX_DEPTH));
    }
    let half = 0.5 * budget;
    Ok(adapt(f, a, mid, left, half, depth + 1)? + adapt(f, mid, b, right, half, depth + 1)?)
}

const GAUSS5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];

const GAUSS5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_08,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_08,
];

fn gauss5(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GAUSS5_NODES
        .iter()
        .zip(&GAUSS5_WEIGHTS)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Interval;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::{PI, TAU};

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn partition_sum_of_polyline_at_own_knots_is_exact() {
        let c = Curve::polyline(
            vec![0.0, 1.0, 2.0],
            vec![v(&[0.0, 0.0]), v(&[3.0, 4.0]), v(&[3.0, 5.0])],
        )
        .unwrap();
        let m = Metric::euclidean(2);
        let p = Partition::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(partition_sum(&c, &m, &p).unwrap(), 6.0);
    }

    #[test]
    fn partition_must_span_the_domain() {
        let c = Curve::circle(0.0, TAU).unwrap();
        let m = Metric::euclidean(2);
        let p = Partition::new(vec![0.0, PI]).unwrap();
        assert!(matches!(
            partition_sum(&c, &m, &p),
            Err(Error::PartitionDomainMismatch { .. })
        ));
    }

    #[test]
    fn circle_length_converges_to_tau() {
        let c = Curve::circle(0.0, TAU).unwrap();
        let m = Metric::euclidean(2);
        let est = estimate_length(&c, &m, DEFAULT_TOL, DEFAULT_MAX_SEGMENTS).unwrap();
        assert!(est.converged);
        assert!(est.lower_bound);
        assert_abs_diff_eq!(est.value, TAU, epsilon = 1e-6);
        assert!(est.value <= TAU);
    }

    #[test]
    fn straight_segment_converges_immediately() {
        let c = Curve::polyline(vec![0.0, 1.0], vec![v(&[0.0]), v(&[7.0])]).unwrap();
        let m = Metric::euclidean(1);
        let (est, trace) = estimate_length_traced(&c, &m, DEFAULT_TOL, 1 << 10).unwrap();
        assert!(est.converged);
        assert_eq!(est.value, 7.0);
        assert_eq!(trace[0].segments, 1);
        assert_eq!(est.segments, 4);
    }

    #[test]
    fn trace_is_nondecreasing_and_dyadic() {
        let c = Curve::circle(0.0, TAU).unwrap();
        let m = Metric::euclidean(2);
        let (_, trace) = estimate_length_traced(&c, &m, 1e-6, 1 << 12).unwrap();
        for w in trace.windows(2) {
            assert_eq!(w[1].segments, 2 * w[0].segments);
            assert!(w[1].lambda >= w[0].lambda - 1e-13 * w[0].lambda.max(1.0));
        }
    }

    #[test]
    fn budget_exhaustion_reports_in_band() {
        let c = Curve::circle(0.0, TAU).unwrap();
        let m = Metric::euclidean(2);
        let est = estimate_length(&c, &m, 1e-12, 8).unwrap();
        assert!(!est.converged);
        assert_eq!(est.segments, 8);
        assert!(est.value < TAU);
    }

    #[test]
    fn degenerate_domain_has_zero_length() {
        let c = Curve::constant(Interval::new(2.0, 2.0).unwrap(), v(&[1.0, 1.0]));
        let m = Metric::euclidean(2);
        let est = estimate_length(&c, &m, DEFAULT_TOL, 16).unwrap();
        assert!(est.converged);
        assert_eq!(est.value, 0.0);
    }

    #[test]
    fn arclength_function_is_monotone_on_the_circle() {
        let c = Curve::circle(0.0, TAU).unwrap();
        let m = Metric::euclidean(2);
        let mut last = -1.0;
        for k in 0..=8 {
            let r = TAU * (k as f64) / 8.0;
            let est = arclength_function(&c, &m, r, 1e-7, DEFAULT_MAX_SEGMENTS).unwrap();
            assert!(est.value >= last);
            assert_abs_diff_eq!(est.value, r, epsilon = 1e-5);
            last = est.value;
        }
        assert!(matches!(
            arclength_function(&c, &m, -0.5, 1e-7, 64),
            Err(Error::ParameterOutOfDomain { .. })
        ));
    }

    #[test]
    fn quadrature_matches_known_lengths() {
        let circle = Curve::circle(0.0, TAU).unwrap();
        assert_relative_eq!(
            integral_length(&circle, PNorm::euclidean(), 1e-12).unwrap(),
            TAU,
            max_relative = 1e-10
        );
        let helix = Curve::helix(0.0, TAU).unwrap();
        assert_relative_eq!(
            integral_length(&helix, PNorm::euclidean(), 1e-12).unwrap(),
            TAU * 2.0f64.sqrt(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn quadrature_needs_a_derivative() {
        let poly = Curve::polyline(vec![0.0, 1.0], vec![v(&[0.0]), v(&[1.0])]).unwrap();
        assert!(matches!(
            integral_length(&poly, PNorm::euclidean(), 1e-9),
            Err(Error::MissingDerivative)
        ));
    }

    #[test]
    fn quadrature_depth_cap_is_an_error() {
        // Integrable singularity at 0: the panel error near 0 shrinks slower
        // than the per-panel budget, so bisection descends without bound.
        let c = Curve::parametric_with_derivative(
            Interval::new(0.0, 1.0).unwrap(),
            1,
            |t| Vector::new(vec![t]).unwrap(),
            |t| Vector::new(vec![t.max(1e-300).powf(-0.5)]).unwrap(),
        );
        assert!(matches!(
            integral_length(&c, PNorm::euclidean(), 1e-13),
            Err(Error::QuadratureDepthExceeded(_))
        ));
    }
}
