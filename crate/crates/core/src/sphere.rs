//! Unit-sphere geometry: membership, the chord/geodesic dictionary, and
//! great-circle arcs.
//!
//! For unit vectors x, y at geodesic distance d, the chord satisfies
//! sin(d/2) = |x - y| / 2. Inverting through arcsin is the only place where
//! rounding can push the argument past 1, so the half-chord is clamped to
//! [0, 1]; anything beyond 1 + 1e-9 is treated as corrupted input.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::curve::{Curve, Interval};
use crate::error::{Error, Result};
use crate::vector::{euclidean_distance, Vector};

/// Points are accepted as "on the sphere" when their norm is within this of 1.
pub const UNIT_ADMIT_TOL: f64 = 1e-9;

/// Slack allowed on the arcsin argument before input is declared corrupted.
pub const CHORD_OVERFLOW_TOL: f64 = 1e-9;

/// Tolerance, in geodesic distance from pi, for calling endpoints antipodal.
pub const ANTIPODAL_TOL: f64 = 1e-9;

/// Accept a point as a unit vector, renormalizing small deviations away.
///
/// Deviations up to `UNIT_ADMIT_TOL` are corrected silently; larger ones are
/// an error carrying the measured deviation.
pub fn admit_unit(x: &Vector) -> Result<Vector> {
    let n = x.norm();
    let deviation = (n - 1.0).abs();
    if deviation > UNIT_ADMIT_TOL {
        return Err(Error::OffSphere { deviation });
    }
    Ok(x.scale(1.0 / n))
}

/// Geodesic distance recovered from a chord length via d = 2 asin(chord / 2).
pub fn geodesic_from_chord(chord: f64) -> Result<f64> {
    let half = chord / 2.0;
    if half > 1.0 + CHORD_OVERFLOW_TOL {
        return Err(Error::ChordOverflow(half));
    }
    Ok(2.0 * half.clamp(0.0, 1.0).asin())
}

/// Chord length spanned by a geodesic distance d in [0, pi].
pub fn chordal_from_geodesic(d: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&d) {
        return Err(Error::GeodesicOutOfRange(d));
    }
    Ok(2.0 * (d / 2.0).sin())
}

/// Great-circle distance between two (admitted) unit vectors.
pub fn spherical_distance(x: &Vector, y: &Vector) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    if x.dim() < 2 {
        return Err(Error::SphereDimension(x.dim()));
    }
    let xs = admit_unit(x)?;
    let ys = admit_unit(y)?;
    geodesic_from_chord(euclidean_distance(&xs, &ys))
}

/// The unit circle in R^2 at angle t.
pub fn circle_point(t: f64) -> Vector {
    Vector::new(vec![t.cos(), t.sin()]).expect("cos and sin are finite")
}

/// Constant-speed point along the shorter great-circle arc from x to y:
/// `lam = 0` gives x, `lam = 1` gives y, and `lam` measures the fraction of
/// arc length covered. This is the interpolant to use when parameter
/// proportionality matters; renormalizing the straight chord traces the same
/// arc but runs faster through its middle.
///
/// When the orthonormal frame degenerates (coincident or antipodal
/// endpoints) this falls back to renormalizing the chord point, which keeps
/// coincident endpoints exact and reports antipodal midpoints as degenerate.
pub fn slerp(x: &Vector, y: &Vector, lam: f64) -> Result<Vector> {
    let xs = admit_unit(x)?;
    let ys = admit_unit(y)?;
    let d = spherical_distance(&xs, &ys)?;
    let w = ys.sub(&xs.scale(xs.dot(&ys)));
    match w.normalized() {
        Some(v) => Ok(xs.scale((lam * d).cos()).add(&v.scale((lam * d).sin()))),
        None => xs
            .lerp(&ys, lam)
            .normalized()
            .ok_or(Error::DegenerateRenormalization),
    }
}

/// The shorter great-circle arc from x to y, parametrized by arc length on
/// [0, d] where d is the geodesic distance.
///
/// Antipodal endpoints are rejected: every direction gives an arc of length
/// pi and there is nothing to single out. Coincident endpoints give the
/// constant curve on the degenerate interval [0, 0].
pub fn great_circle_arc(x: &Vector, y: &Vector) -> Result<Curve> {
    let d = spherical_distance(x, y)?;
    let xs = admit_unit(x)?;
    let ys = admit_unit(y)?;
    if d == 0.0 {
        return Ok(Curve::constant(Interval::new(0.0, 0.0)?, xs));
    }
    if PI - d <= ANTIPODAL_TOL {
        return Err(Error::AntipodalEndpoints);
    }

    // Orthonormal frame in the plane of the arc: xs, and the component of ys
    // orthogonal to xs.
    let w = ys.sub(&xs.scale(xs.dot(&ys)));
    let v = w.normalized().ok_or(Error::DegenerateRenormalization)?;
    let dim = xs.dim();
    let (ex, ev) = (Arc::new(xs), Arc::new(v));
    let (dx, dv) = (ex.clone(), ev.clone());
    Ok(Curve::parametric_with_derivative(
        Interval::new(0.0, d)?,
        dim,
        move |t: f64| ex.scale(t.cos()).add(&ev.scale(t.sin())),
        move |t: f64| dx.scale(-t.sin()).add(&dv.scale(t.cos())),
    ))
}
