//! Property tests for the shortening flow: monotone length decrease, decay
//! of perturbations back onto the great circle, certification of straight
//! segments in every norm, and honest failure where no curve can reach the
//! endpoint distance.

use approx::{assert_abs_diff_eq, assert_relative_eq};
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use metric_geom::geodesic::{
    certify_minimal, line_segment, polyline_length, relaxation_sweep, respace_by_arclength,
    shorten_polyline, spherical_chordal_length_agreement, DEFAULT_CERTIFY_TOL,
};
use metric_geom::sample;
use metric_geom::sphere::great_circle_arc;
use metric_geom::{GeodesicProblem, Metric, PNorm, ShorteningConfig, Vector};

fn v(coords: &[f64]) -> Vector {
    Vector::new(coords.to_vec()).unwrap()
}

/// Run relax + respace sweeps until the relative decrease drops below
/// `stop_tol`, returning the vertex set and the number of sweeps.
fn run_flow(
    mut points: Vec<Vector>,
    metric: &Metric,
    stop_tol: f64,
    max_sweeps: usize,
) -> (Vec<Vector>, usize, Vec<f64>) {
    let mut lengths = vec![polyline_length(&points, metric).unwrap()];
    for sweep in 1..=max_sweeps {
        points = relaxation_sweep(&points, metric).unwrap();
        points = respace_by_arclength(&points, metric).unwrap();
        let len = polyline_length(&points, metric).unwrap();
        let prev = *lengths.last().unwrap();
        lengths.push(len);
        if (prev - len) / prev.max(1e-300) < stop_tol {
            return (points, sweep, lengths);
        }
    }
    (points, max_sweeps, lengths)
}

#[test]
fn euclidean_flow_decreases_monotonically_to_the_segment() {
    let start = v(&[0.0, 0.0]);
    let end = v(&[4.0, 0.0]);
    let n = 17;
    // A sawtooth between the endpoints: plenty of excess length.
    let points: Vec<Vector> = (0..n)
        .map(|j| {
            let t = j as f64 / (n - 1) as f64;
            let bump = if j == 0 || j == n - 1 {
                0.0
            } else if j % 2 == 0 {
                0.5
            } else {
                -0.5
            };
            v(&[4.0 * t, bump])
        })
        .collect();
    let m = Metric::euclidean(2);
    let initial = polyline_length(&points, &m).unwrap();
    assert!(initial > 4.5);

    let (final_points, _, lengths) = run_flow(points, &m, 1e-14, 2000);
    for w in lengths.windows(2) {
        assert!(
            w[1] <= w[0] * (1.0 + 1e-12),
            "length went up: {} -> {}",
            w[0],
            w[1]
        );
    }
    let final_len = *lengths.last().unwrap();
    assert_abs_diff_eq!(final_len, 4.0, epsilon = 1e-4);
    assert_eq!(final_points[0], start);
    assert_eq!(final_points[n - 1], end);
}

#[test]
fn sphere_flow_flattens_transverse_perturbations() {
    // Vertices of the quarter arc from e1 to e2, pushed out of the plane by
    // a half-sine bump along e3. The flow must pull every vertex back to
    // within 1e-5 of the arc's plane, relative to the endpoint distance.
    let m = Metric::sphere(3).unwrap();
    let d = FRAC_PI_2;
    let n = 65;
    let amplitude = 0.05;
    let points: Vec<Vector> = (0..n)
        .map(|j| {
            let t = d * (j as f64) / ((n - 1) as f64);
            let bump = amplitude * (PI * (j as f64) / ((n - 1) as f64)).sin();
            v(&[t.cos(), t.sin(), bump]).normalized().unwrap()
        })
        .collect();

    let (final_points, sweeps, lengths) = run_flow(points, &m, 1e-13, 30_000);
    assert!(sweeps < 30_000, "flow failed to settle");
    for w in lengths.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-12));
    }
    let worst = final_points
        .iter()
        .map(|p| p[2].abs())
        .fold(0.0f64, f64::max);
    assert!(
        worst <= 1e-5 * d,
        "transverse residue {worst:.3e} exceeds 1e-5 * {d} after {sweeps} sweeps"
    );
    // Still on the sphere, and the length is back at the arc length.
    for p in &final_points {
        assert_abs_diff_eq!(p.norm(), 1.0, epsilon = 1e-12);
    }
    assert_abs_diff_eq!(*lengths.last().unwrap(), d, epsilon = 1e-6);
}

#[test]
fn segments_are_certified_under_every_norm() {
    let mut rng = sample::rng_from_seed(9);
    let norms = [
        PNorm::finite(1.0).unwrap(),
        PNorm::euclidean(),
        PNorm::finite(3.0).unwrap(),
        PNorm::INF,
    ];
    for dim in [2usize, 3, 5] {
        let space = Metric::euclidean(dim);
        for _ in 0..5 {
            let x = sample::point_in(&space, &mut rng);
            let y = sample::point_in(&space, &mut rng);
            for p in norms {
                let m = Metric::pnorm(p, dim);
                let d = m.distance(&x, &y).unwrap();
                if d == 0.0 {
                    continue;
                }
                let problem = GeodesicProblem::new(m, x.clone(), y.clone()).unwrap();
                let out = shorten_polyline(&problem, &ShorteningConfig::default()).unwrap();
                assert!(out.certificate.certified, "p = {p}, dim = {dim}");
                assert_relative_eq!(out.certificate.final_length, d, max_relative = 1e-9);
                let seg = line_segment(&x, &y).unwrap();
                let cert = certify_minimal(&seg, &m, DEFAULT_CERTIFY_TOL).unwrap();
                assert!(cert.certified);
            }
        }
    }
}

#[test]
fn sphere_flow_reaches_the_great_circle_pointwise() {
    let x = v(&[1.0, 0.0, 0.0]);
    let y = v(&[0.0, 0.0, 1.0]);
    let m = Metric::sphere(3).unwrap();
    let problem = GeodesicProblem::new(m, x.clone(), y.clone()).unwrap();
    let out = shorten_polyline(&problem, &ShorteningConfig::default()).unwrap();
    assert!(out.certificate.certified);

    let arc = great_circle_arc(&x, &y).unwrap();
    let d = out.curve.domain();
    assert_abs_diff_eq!(arc.domain().b(), d.b(), epsilon = 1e-6);
    for k in 0..=32 {
        let t = d.b() * (k as f64) / 32.0;
        let p = out.curve.eval(t);
        let q = arc.eval(t.min(arc.domain().b()));
        let gap = metric_geom::vector::euclidean_distance(&p, &q);
        assert!(gap <= 1e-3, "t = {t}: gap {gap}");
    }
}

#[test]
fn chordal_metric_admits_no_certified_curve() {
    // Length inside the chordal-sphere space still accumulates along the
    // sphere, so no on-sphere curve can get down to the straight chord;
    // the certificate must come back negative, with the arc length found.
    let m = Metric::chordal_sphere(3).unwrap();
    let problem = GeodesicProblem::new(m, v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])).unwrap();
    let out = shorten_polyline(&problem, &ShorteningConfig::default()).unwrap();
    assert!(!out.certificate.certified);
    assert_abs_diff_eq!(out.certificate.endpoint_distance, SQRT_2, epsilon = 1e-12);
    assert_abs_diff_eq!(out.certificate.final_length, FRAC_PI_2, epsilon = 1e-3);
}

#[test]
fn chordal_and_intrinsic_lengths_agree_along_arcs() {
    let fixtures = [
        (v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])),
        (v(&[1.0, 0.0, 0.0]), v(&[0.6, 0.8, 0.0])),
        (v(&[0.0, 0.6, 0.8]), v(&[0.0, -0.8, 0.6])),
    ];
    let intrinsic = Metric::sphere(3).unwrap();
    for (x, y) in &fixtures {
        let arc = great_circle_arc(x, y).unwrap();
        let d = intrinsic.distance(x, y).unwrap();
        let (chordal, angular) = spherical_chordal_length_agreement(&arc, 1e-9).unwrap();
        assert!(chordal.converged && angular.converged);
        assert_relative_eq!(chordal.value, angular.value, max_relative = 1e-6);
        assert_relative_eq!(angular.value, d, max_relative = 1e-6);
    }
}

#[test]
fn antipodal_and_off_sphere_problems_are_rejected() {
    let m = Metric::sphere(3).unwrap();
    assert!(GeodesicProblem::new(m, v(&[1.0, 0.0, 0.0]), v(&[-1.0, 0.0, 0.0])).is_err());
    assert!(GeodesicProblem::new(m, v(&[0.5, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])).is_err());
    // Slightly off the sphere but inside tolerance is admitted.
    let nearly = v(&[1.0 + 0.5e-9, 0.0, 0.0]);
    assert!(GeodesicProblem::new(m, nearly, v(&[0.0, 1.0, 0.0])).is_ok());
}

#[test]
fn flow_certifies_from_a_cold_start_across_the_sphere() {
    // Endpoints far apart but not antipodal; the initial renormalized
    // segment is badly nonuniform, yet the flow still lands on the arc.
    let x = v(&[1.0, 0.0, 0.0]);
    let theta: f64 = 2.8;
    let y = v(&[theta.cos(), theta.sin(), 0.0]);
    let m = Metric::sphere(3).unwrap();
    let problem = GeodesicProblem::new(m, x, y).unwrap();
    let out = shorten_polyline(&problem, &ShorteningConfig::default()).unwrap();
    assert!(
        out.certificate.certified,
        "final {} vs distance {}",
        out.certificate.final_length, out.certificate.endpoint_distance
    );
    assert_abs_diff_eq!(out.certificate.final_length, theta, epsilon = 1e-6);
    assert!(out
        .sweep_lengths
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + 1e-12)));
}
