//! Text formats: the point / curve / map spec grammars, curve JSON, and
//! distance-matrix CSV.
//!
//! All floating point output goes through `sig15`, which renders 15
//! significant digits deterministically, so equal inputs produce
//! byte-identical output.

use serde::Deserialize;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::geodesic;
use crate::lipschitz::LipschitzMap;
use crate::metric::{Metric, MetricKind};
use crate::plane::Plane;
use crate::vector::Vector;

// ===========================================================================
// Number formatting
// ===========================================================================

/// Render with 15 significant digits: positional notation for magnitudes
/// between 1e-4 and 1e15, scientific otherwise. Zero is "0".
pub fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mut exp = x.abs().log10().floor() as i32;
    // log10 can land a hair below an exact power of ten.
    if 10f64.powi(exp + 1) <= x.abs() {
        exp += 1;
    }
    if (-4..15).contains(&exp) {
        let prec = (14 - exp).max(0) as usize;
        format!("{x:.prec$}")
    } else {
        format!("{x:.14e}")
    }
}

// ===========================================================================
// Point specs
// ===========================================================================

/// A point written as `e<k>` (k-th standard basis vector, 1-based), a
/// parenthesized tuple `(a,b,...)`, a bare comma list, or a single scalar.
#[derive(Clone, Debug, PartialEq)]
pub enum PointSpec {
    Basis(usize),
    Coords(Vec<f64>),
}

impl PointSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty point spec".into()));
        }
        if let Some(rest) = t.strip_prefix('e') {
            if let Ok(axis) = rest.parse::<usize>() {
                if axis == 0 {
                    return Err(Error::Parse("basis axes are counted from e1".into()));
                }
                return Ok(PointSpec::Basis(axis));
            }
        }
        let inner = if t.starts_with('(') && t.ends_with(')') {
            &t[1..t.len() - 1]
        } else {
            t
        };
        let coords = inner
            .split(',')
            .map(|c| {
                c.trim().parse::<f64>().map_err(|_| {
                    Error::Parse(format!("invalid coordinate {:?} in point {t:?}", c.trim()))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Parse(format!(
                "non-finite coordinate in point {t:?}"
            )));
        }
        Ok(PointSpec::Coords(coords))
    }

    /// Smallest ambient dimension this spec fits in.
    pub fn min_dim(&self) -> usize {
        match self {
            PointSpec::Basis(axis) => *axis,
            PointSpec::Coords(c) => c.len(),
        }
    }

    /// Concrete vector in R^dim; coordinate lists must match exactly, basis
    /// vectors embed into any dimension holding their axis.
    pub fn resolve(&self, dim: usize) -> Result<Vector> {
        match self {
            PointSpec::Basis(axis) => {
                if *axis > dim {
                    return Err(Error::DimensionMismatch {
                        left: dim,
                        right: *axis,
                    });
                }
                Ok(Vector::basis(dim, axis - 1))
            }
            PointSpec::Coords(c) => {
                if c.len() != dim {
                    return Err(Error::DimensionMismatch {
                        left: dim,
                        right: c.len(),
                    });
                }
                Vector::new(c.clone())
            }
        }
    }
}

pub fn parse_metric(name: &str, dim: usize) -> Result<Metric> {
    let kind: MetricKind = name.trim().parse()?;
    Metric::new(kind, dim)
}

// ===========================================================================
// Curve specs
// ===========================================================================

/// Named curves: `circle[a,b]`, `helix[a,b]`, `graph-tcos[a,b]`, and
/// `segment[P;Q]` for point specs P, Q.
pub fn parse_builtin_curve(spec: &str) -> Result<Curve> {
    let t = spec.trim();
    let open = t
        .find('[')
        .ok_or_else(|| Error::Parse(format!("curve spec {t:?} has no [...] argument list")))?;
    if !t.ends_with(']') {
        return Err(Error::Parse(format!(
            "curve spec {t:?} does not end with ']'"
        )));
    }
    let name = &t[..open];
    let args = &t[open + 1..t.len() - 1];
    match name {
        "circle" | "helix" | "graph-tcos" => {
            let (a, b) = parse_domain(args, t)?;
            match name {
                "circle" => Curve::circle(a, b),
                "helix" => Curve::helix(a, b),
                _ => Curve::graph_tcos(a, b),
            }
        }
        "segment" => {
            let parts: Vec<&str> = args.split(';').collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!(
                    "segment takes two points separated by ';', got {args:?}"
                )));
            }
            let x = PointSpec::parse(parts[0])?;
            let y = PointSpec::parse(parts[1])?;
            let dim = x.min_dim().max(y.min_dim());
            geodesic::line_segment(&x.resolve(dim)?, &y.resolve(dim)?)
        }
        _ => Err(Error::Parse(format!("unknown curve {name:?}"))),
    }
}

fn parse_domain(args: &str, spec: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = args.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!(
            "curve spec {spec:?} needs a domain [a,b]"
        )));
    }
    let a = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("invalid domain endpoint {:?}", parts[0].trim())))?;
    let b = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("invalid domain endpoint {:?}", parts[1].trim())))?;
    Ok((a, b))
}

// ===========================================================================
// Curve JSON
// ===========================================================================

#[derive(Deserialize)]
struct CurveDoc {
    dim: usize,
    params: Vec<f64>,
    points: Vec<Vec<f64>>,
}

/// Read a polyline from its JSON form
/// `{"dim": n, "params": [...], "points": [[...], ...]}`.
pub fn curve_from_json(text: &str) -> Result<Curve> {
    let doc: CurveDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid curve JSON: {e}")))?;
    if doc.dim == 0 {
        return Err(Error::ZeroDimension);
    }
    for (i, row) in doc.points.iter().enumerate() {
        if row.len() != doc.dim {
            return Err(Error::Parse(format!(
                "point {i} has {} coordinates, expected {}",
                row.len(),
                doc.dim
            )));
        }
    }
    if doc.params.len() != doc.points.len() {
        return Err(Error::Parse(format!(
            "{} params for {} points",
            doc.params.len(),
            doc.points.len()
        )));
    }
    let points = doc
        .points
        .into_iter()
        .map(Vector::new)
        .collect::<Result<Vec<_>>>()?;
    Curve::polyline(doc.params, points)
}

/// Write a polyline as curve JSON (one line, `sig15` numbers).
/// Parametric curves have no finite representation here and are rejected.
pub fn curve_to_json(curve: &Curve) -> Result<String> {
    let (params, points) = curve
        .polyline_data()
        .ok_or_else(|| Error::Parse("only polyline curves can be written as curve JSON".into()))?;
    let params_s: Vec<String> = params.iter().map(|p| sig15(*p)).collect();
    let points_s: Vec<String> = points
        .iter()
        .map(|p| {
            let coords: Vec<String> = p.iter().map(|c| sig15(*c)).collect();
            format!("[{}]", coords.join(","))
        })
        .collect();
    Ok(format!(
        "{{\"dim\":{},\"params\":[{}],\"points\":[{}]}}",
        curve.dim(),
        params_s.join(","),
        points_s.join(",")
    ))
}

// ===========================================================================
// Distance matrices
// ===========================================================================

/// Parse a square distance matrix from headerless row-major CSV.
pub fn matrix_from_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (r, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(c, cell)| {
                cell.trim().parse::<f64>().map_err(|_| {
                    Error::Parse(format!(
                        "row {}, column {}: invalid number {:?}",
                        r + 1,
                        c + 1,
                        cell.trim()
                    ))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Parse("distance matrix is empty".into()));
    }
    let n = rows.len();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Parse(format!(
                "matrix is not square: {} rows but row {} has {} columns",
                n,
                r + 1,
                row.len()
            )));
        }
    }
    Ok(rows)
}

// ===========================================================================
// Map specs
// ===========================================================================

/// Maps: `scale:<c>` (norm metrics), `dist-to:<point>` (any metric), and
/// `project:<q;u1;u2;...>` (Euclidean only; q is the basepoint, the rest
/// span the plane).
pub fn parse_map_spec(spec: &str, domain: Metric) -> Result<LipschitzMap> {
    let t = spec.trim();
    if let Some(c) = t.strip_prefix("scale:") {
        if !matches!(domain.kind(), MetricKind::Euclidean | MetricKind::PNorm(_)) {
            return Err(Error::Parse(format!(
                "scale maps need a norm metric, not {domain}"
            )));
        }
        let factor = c
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("invalid scale factor {:?}", c.trim())))?;
        if !factor.is_finite() {
            return Err(Error::Parse("scale factor must be finite".into()));
        }
        return Ok(LipschitzMap::scaling(domain, factor));
    }
    if let Some(p) = t.strip_prefix("dist-to:") {
        let anchor = PointSpec::parse(p)?.resolve(domain.dim())?;
        return LipschitzMap::distance_to(domain, anchor);
    }
    if let Some(plane_spec) = t.strip_prefix("project:") {
        if domain.kind() != MetricKind::Euclidean {
            return Err(Error::Parse(format!(
                "projection maps are defined for the euclidean metric, not {domain}"
            )));
        }
        let parts: Vec<&str> = plane_spec.split(';').collect();
        if parts.len() < 2 {
            return Err(Error::Parse(
                "project needs a basepoint and at least one spanning vector, separated by ';'"
                    .into(),
            ));
        }
        let dim = domain.dim();
        let basepoint = PointSpec::parse(parts[0])?.resolve(dim)?;
        let spanning = parts[1..]
            .iter()
            .map(|p| PointSpec::parse(p)?.resolve(dim))
            .collect::<Result<Vec<_>>>()?;
        let plane = Plane::from_spanning(basepoint, spanning)?;
        return Ok(LipschitzMap::projection(plane));
    }
    Err(Error::Parse(format!("unknown map spec {t:?}")))
}
