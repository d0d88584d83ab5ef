//! Axiom checking for metrics and norms over finite point sets, with
//! violation witnesses instead of bare booleans.
//!
//! Small point sets are checked exhaustively; past `EXHAUSTIVE_POINT_LIMIT`
//! points, a seeded sample of pairs and triples is used so the work stays
//! bounded and reproducible. Margins are reported as lhs - rhs of the
//! axiom's inequality, in metric units; an instance is a violation when its
//! margin exceeds the caller's tolerance. Strict positivity is the
//! exception: distinct points at distance exactly <= 0 are flagged
//! regardless of tolerance.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::norm::PNorm;
use crate::sample::rng_from_seed;
use crate::sphere;
use crate::vector::{euclidean_distance, Vector};

pub const EXHAUSTIVE_POINT_LIMIT: usize = 50;
pub const SAMPLED_PAIRS: usize = 100_000;
pub const SAMPLED_TRIPLES: usize = 100_000;

/// At most this many violation witnesses are stored per check; the count
/// keeps running regardless.
pub const MAX_STORED_VIOLATIONS: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    /// Indices into the checked point set; length depends on the axiom.
    pub witness: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub instances: usize,
    /// Degenerate instances that carry no information (for example a
    /// coincident pair in a ratio bound).
    pub skipped: usize,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    /// Largest margin seen over all instances, violations or not.
    pub worst_margin: Option<f64>,
    /// Largest ratio tracked by ratio-style checks.
    pub worst_ratio: Option<f64>,
}

impl AxiomCheck {
    pub fn clean(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    /// False when every instance was enumerated, true when sampled.
    pub sampled: bool,
    pub seed: u64,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn clean(&self) -> bool {
        self.checks.iter().all(AxiomCheck::clean)
    }

    pub fn total_violations(&self) -> usize {
        self.checks.iter().map(|c| c.violation_count).sum()
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }
}

struct CheckBuilder {
    axiom: &'static str,
    instances: usize,
    skipped: usize,
    violation_count: usize,
    violations: Vec<Violation>,
    worst_margin: Option<f64>,
    worst_ratio: Option<f64>,
}

impl CheckBuilder {
    fn new(axiom: &'static str) -> Self {
        Self {
            axiom,
            instances: 0,
            skipped: 0,
            violation_count: 0,
            violations: Vec::new(),
            worst_margin: None,
            worst_ratio: None,
        }
    }

    fn record(&mut self, witness: &[usize], lhs: f64, rhs: f64, violated: bool) {
        self.instances += 1;
        let margin = lhs - rhs;
        if self.worst_margin.is_none_or(|w| margin > w) {
            self.worst_margin = Some(margin);
        }
        if violated {
            self.violation_count += 1;
            if self.violations.len() < MAX_STORED_VIOLATIONS {
                self.violations.push(Violation {
                    witness: witness.to_vec(),
                    lhs,
                    rhs,
                    margin,
                });
            }
        }
    }

    fn skip(&mut self) {
        self.skipped += 1;
    }

    fn ratio(&mut self, r: f64) {
        if self.worst_ratio.is_none_or(|w| r > w) {
            self.worst_ratio = Some(r);
        }
    }

    fn finish(self) -> AxiomCheck {
        AxiomCheck {
            axiom: self.axiom,
            instances: self.instances,
            skipped: self.skipped,
            violation_count: self.violation_count,
            violations: self.violations,
            worst_margin: self.worst_margin,
            worst_ratio: self.worst_ratio,
        }
    }
}

fn draw_distinct_pair(rng: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    loop {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i != j {
            return (i, j);
        }
    }
}

fn pair_set(n: usize, seed: u64) -> (Vec<(usize, usize)>, bool) {
    if n <= EXHAUSTIVE_POINT_LIMIT {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                pairs.push((i, j));
            }
        }
        (pairs, false)
    } else {
        let mut rng = rng_from_seed(seed);
        let pairs = (0..SAMPLED_PAIRS)
            .map(|_| draw_distinct_pair(&mut rng, n))
            .collect();
        (pairs, true)
    }
}

// ===========================================================================
// Metric axioms
// ===========================================================================

/// Check the metric axioms for an arbitrary distance function over a point
/// set: d(x, x) = 0, nonnegativity, strict positivity for distinct points,
/// symmetry, and the triangle inequality.
pub fn check_metric_axioms<T: PartialEq>(
    d: impl Fn(&T, &T) -> f64,
    points: &[T],
    tol: f64,
    seed: u64,
) -> AxiomReport {
    let n = points.len();
    let sampled = n > EXHAUSTIVE_POINT_LIMIT;

    let mut identity = CheckBuilder::new("identity");
    for (i, p) in points.iter().enumerate() {
        let dv = d(p, p);
        identity.record(&[i], dv.abs(), 0.0, dv.abs() > tol);
    }

    let (pairs, _) = pair_set(n, seed);
    let mut nonneg = CheckBuilder::new("nonnegativity");
    let mut positivity = CheckBuilder::new("positivity");
    let mut symmetry = CheckBuilder::new("symmetry");
    for &(i, j) in &pairs {
        let dij = d(&points[i], &points[j]);
        let dji = d(&points[j], &points[i]);
        nonneg.record(&[i, j], -dij, 0.0, -dij > tol);
        nonneg.record(&[j, i], -dji, 0.0, -dji > tol);
        let gap = (dij - dji).abs();
        symmetry.record(&[i, j], gap, 0.0, gap > tol);
        if points[i] == points[j] {
            positivity.skip();
        } else {
            let dmin = dij.min(dji);
            positivity.record(&[i, j], 0.0, dmin, dmin <= 0.0);
        }
    }

    let mut triangle = CheckBuilder::new("triangle");
    if sampled {
        let mut rng = rng_from_seed(seed.wrapping_add(1));
        for _ in 0..SAMPLED_TRIPLES {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            let k = rng.random_range(0..n);
            let lhs = d(&points[i], &points[k]);
            let rhs = d(&points[i], &points[j]) + d(&points[j], &points[k]);
            triangle.record(&[i, j, k], lhs, rhs, lhs - rhs > tol);
        }
    } else {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let lhs = d(&points[i], &points[k]);
                    let rhs = d(&points[i], &points[j]) + d(&points[j], &points[k]);
                    triangle.record(&[i, j, k], lhs, rhs, lhs - rhs > tol);
                }
            }
        }
    }

    AxiomReport {
        sampled,
        seed,
        checks: vec![
            identity.finish(),
            nonneg.finish(),
            positivity.finish(),
            symmetry.finish(),
            triangle.finish(),
        ],
    }
}

/// Metric axioms for one of the built-in metrics over explicit points.
/// Sphere points are admitted up front, so the distance calls cannot fail
/// mid-check.
pub fn check_builtin_metric(
    metric: &Metric,
    points: &[Vector],
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    for p in points {
        if p.dim() != metric.dim() {
            return Err(Error::DimensionMismatch {
                left: metric.dim(),
                right: p.dim(),
            });
        }
    }
    let owned: Vec<Vector> = if metric.is_sphere() {
        points
            .iter()
            .map(sphere::admit_unit)
            .collect::<Result<_>>()?
    } else {
        points.to_vec()
    };
    let m = *metric;
    Ok(check_metric_axioms(
        move |x: &Vector, y: &Vector| {
            m.distance(x, y)
                .expect("points were validated for this metric")
        },
        &owned,
        tol,
        seed,
    ))
}

/// Metric axioms for an explicit square distance matrix; entry (i, j) is
/// the claimed distance between abstract points i and j.
pub fn check_metric_matrix(matrix: &[Vec<f64>], tol: f64) -> Result<AxiomReport> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::EmptyPointSet);
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Parse(format!(
                "distance matrix is not square: row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
    }
    let indices: Vec<usize> = (0..n).collect();
    Ok(check_metric_axioms(
        |i: &usize, j: &usize| matrix[*i][*j],
        &indices,
        tol,
        0,
    ))
}

// ===========================================================================
// Norm axioms
// ===========================================================================

/// Norm axioms over sample vectors and scalars: vanishing at the origin,
/// strict positivity away from it, absolute homogeneity, subadditivity,
/// and the reverse triangle inequality.
///
/// Comparisons use the caller's absolute tolerance, so samples should be of
/// moderate magnitude.
pub fn check_norm_axioms(
    norm: PNorm,
    vectors: &[Vector],
    scalars: &[f64],
    tol: f64,
    seed: u64,
) -> Result<AxiomReport> {
    let dim = uniform_dim(vectors)?;
    let n = vectors.len();

    let mut zero = CheckBuilder::new("zero-at-origin");
    let z = norm.eval(&Vector::zeros(dim));
    zero.record(&[], z.abs(), 0.0, z.abs() > tol);

    let mut positivity = CheckBuilder::new("positivity");
    for (i, v) in vectors.iter().enumerate() {
        if v.iter().all(|c| *c == 0.0) {
            positivity.skip();
            continue;
        }
        let nv = norm.eval(v);
        positivity.record(&[i], 0.0, nv, nv <= 0.0);
    }

    let mut homogeneity = CheckBuilder::new("homogeneity");
    for (i, v) in vectors.iter().enumerate() {
        for (k, s) in scalars.iter().enumerate() {
            let lhs = (norm.eval(&v.scale(*s)) - s.abs() * norm.eval(v)).abs();
            homogeneity.record(&[i, k], lhs, 0.0, lhs > tol);
        }
    }

    let (pairs, sampled) = pair_set(n, seed);
    let mut subadd = CheckBuilder::new("subadditivity");
    let mut reverse = CheckBuilder::new("reverse-triangle");
    for &(i, j) in &pairs {
        let (u, v) = (&vectors[i], &vectors[j]);
        let (nu, nv) = (norm.eval(u), norm.eval(v));
        let sum = norm.eval(&u.add(v));
        subadd.record(&[i, j], sum, nu + nv, sum - (nu + nv) > tol);
        let diff = norm.eval(&u.sub(v));
        let lhs = (nu - nv).abs();
        reverse.record(&[i, j], lhs, diff, lhs - diff > tol);
    }

    Ok(AxiomReport {
        sampled,
        seed,
        checks: vec![
            zero.finish(),
            positivity.finish(),
            homogeneity.finish(),
            subadd.finish(),
            reverse.finish(),
        ],
    })
}

/// Two-sided comparison between the chordal and geodesic distances for
/// explicit pairs of unit vectors: chord <= geodesic <= (pi / 2) chord.
/// The worst geodesic/chord ratio is tracked on the upper check; witnesses
/// index into the pair list.
pub fn check_comparison_bounds(pairs: &[(Vector, Vector)], tol: f64) -> Result<AxiomReport> {
    if pairs.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut lower = CheckBuilder::new("chord-below-geodesic");
    let mut upper = CheckBuilder::new("geodesic-below-half-pi-chord");
    for (i, (x, y)) in pairs.iter().enumerate() {
        if x.dim() != y.dim() {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: y.dim(),
            });
        }
        if x.dim() < 2 {
            return Err(Error::SphereDimension(x.dim()));
        }
        let chord = euclidean_distance(&sphere::admit_unit(x)?, &sphere::admit_unit(y)?);
        let d = sphere::geodesic_from_chord(chord)?;
        lower.record(&[i], chord, d, chord - d > tol);
        upper.record(
            &[i],
            d,
            std::f64::consts::FRAC_PI_2 * chord,
            d - std::f64::consts::FRAC_PI_2 * chord > tol,
        );
        if chord > 0.0 {
            upper.ratio(d / chord);
        } else {
            upper.skip();
        }
    }

    Ok(AxiomReport {
        sampled: false,
        seed: 0,
        checks: vec![lower.finish(), upper.finish()],
    })
}

/// The sup-norm sandwich for each vector and each exponent:
/// sup norm <= p-norm <= n^(1/p) sup norm.
pub fn check_norm_sandwich(vectors: &[Vector], ps: &[PNorm], tol: f64) -> Result<AxiomReport> {
    let dim = uniform_dim(vectors)?;
    let mut lower = CheckBuilder::new("sup-below-p");
    let mut upper = CheckBuilder::new("p-below-scaled-sup");
    for (k, p) in ps.iter().enumerate() {
        let factor = match p.exponent() {
            Some(e) => (dim as f64).powf(1.0 / e),
            None => 1.0,
        };
        for (i, v) in vectors.iter().enumerate() {
            let sup = PNorm::INF.eval(v);
            let np = p.eval(v);
            lower.record(&[i, k], sup, np, sup - np > tol);
            upper.record(&[i, k], np, factor * sup, np - factor * sup > tol);
        }
    }
    Ok(AxiomReport {
        sampled: false,
        seed: 0,
        checks: vec![lower.finish(), upper.finish()],
    })
}

// ===========================================================================
// Boundedness
// ===========================================================================

#[derive(Clone, Debug, PartialEq)]
pub struct AlternateBound {
    pub basepoint: usize,
    pub radius: f64,
    /// distance between the basepoints plus the first radius; the alternate
    /// radius can never exceed it.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundednessReport {
    pub basepoint: usize,
    /// Radius of a ball around the basepoint containing every point.
    pub radius: f64,
    pub alternate: Option<AlternateBound>,
}

/// Exhibit boundedness of a finite point set: the maximal distance from the
/// first point, and, when a second point exists, the same from there
/// together with the triangle-inequality bound relating the two.
pub fn check_boundedness(points: &[Vector], metric: &Metric) -> Result<BoundednessReport> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let radius_from = |base: usize| -> Result<f64> {
        let mut r = 0.0f64;
        for p in points {
            r = r.max(metric.distance(&points[base], p)?);
        }
        Ok(r)
    };
    let radius = radius_from(0)?;
    let alternate = if points.len() > 1 {
        let alt_radius = radius_from(1)?;
        let bound = metric.distance(&points[0], &points[1])? + radius;
        Some(AlternateBound {
            basepoint: 1,
            radius: alt_radius,
            bound,
        })
    } else {
        None
    };
    Ok(BoundednessReport {
        basepoint: 0,
        radius,
        alternate,
    })
}

fn uniform_dim(vectors: &[Vector]) -> Result<usize> {
    let first = vectors.first().ok_or(Error::EmptyPointSet)?;
    let dim = first.dim();
    for v in vectors {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: v.dim(),
            });
        }
    }
    Ok(dim)
}
