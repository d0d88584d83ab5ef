//! Lipschitz maps between metric spaces: constant estimation from sampled
//! pairs, verification against a claimed constant, composition, and the
//! diameter bound on images.
//!
//! A map is a total rule on vectors together with a domain metric, a
//! codomain metric, and optionally a claimed constant. Rules are expected
//! to be applied to points of the domain's space; the built-in rules panic
//! with a clear message if fed a point the domain metric rejects outright,
//! while distance computations surface ordinary errors.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::plane::{project_to_plane, Plane};
use crate::sphere;
use crate::vector::Vector;

/// Multiplicative slack applied to the claimed bound during verification,
/// so honest maps are not failed over final-digit rounding.
pub const VERIFY_SLACK: f64 = 1e-12;

pub type MapRule = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

#[derive(Clone)]
pub struct LipschitzMap {
    domain: Metric,
    codomain: Metric,
    claimed: Option<f64>,
    rule: MapRule,
}

impl fmt::Debug for LipschitzMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LipschitzMap {{ {} -> {}, claimed: {:?} }}",
            self.domain, self.codomain, self.claimed
        )
    }
}

impl LipschitzMap {
    pub fn from_rule(
        domain: Metric,
        codomain: Metric,
        claimed: Option<f64>,
        rule: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
    ) -> Result<Self> {
        if let Some(c) = claimed {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::NegativeConstant(c));
            }
        }
        Ok(Self {
            domain,
            codomain,
            claimed,
            rule: Arc::new(rule),
        })
    }

    pub fn identity(space: Metric) -> Self {
        Self::from_rule(space, space, Some(1.0), |x: &Vector| x.clone())
            .expect("constant 1 is valid")
    }

    /// x -> factor * x on a common space. The claimed constant |factor| is
    /// the exact one for norm-induced metrics.
    pub fn scaling(space: Metric, factor: f64) -> Self {
        Self::from_rule(space, space, Some(factor.abs()), move |x: &Vector| {
            x.scale(factor)
        })
        .expect("absolute value is valid")
    }

    /// x -> d(anchor, x) into the real line; always 1-Lipschitz.
    pub fn distance_to(space: Metric, anchor: Vector) -> Result<Self> {
        if anchor.dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                left: space.dim(),
                right: anchor.dim(),
            });
        }
        let anchor = if space.is_sphere() {
            sphere::admit_unit(&anchor)?
        } else {
            anchor
        };
        Self::from_rule(space, Metric::euclidean(1), Some(1.0), move |x: &Vector| {
            let d = space
                .distance(&anchor, x)
                .expect("distance-to rule applied to a point outside the space");
            Vector::new(vec![d]).expect("distances are finite")
        })
    }

    /// Orthogonal projection onto an affine plane in Euclidean space;
    /// always 1-Lipschitz.
    pub fn projection(plane: Plane) -> Self {
        let dim = plane.dim();
        let space = Metric::euclidean(dim);
        Self::from_rule(space, space, Some(1.0), move |x: &Vector| {
            project_to_plane(x, &plane)
                .expect("projection rule applied to a point of the wrong dimension")
        })
        .expect("constant 1 is valid")
    }

    pub fn constant_map(domain: Metric, codomain: Metric, value: Vector) -> Result<Self> {
        if value.dim() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                left: codomain.dim(),
                right: value.dim(),
            });
        }
        Self::from_rule(domain, codomain, Some(0.0), move |_| value.clone())
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        (self.rule)(x)
    }

    pub fn domain_metric(&self) -> &Metric {
        &self.domain
    }

    pub fn codomain_metric(&self) -> &Metric {
        &self.codomain
    }

    pub fn claimed(&self) -> Option<f64> {
        self.claimed
    }

    pub fn rule(&self) -> MapRule {
        self.rule.clone()
    }
}

/// g after f. The claimed constant multiplies when both factors carry one.
pub fn compose(f: &LipschitzMap, g: &LipschitzMap) -> Result<LipschitzMap> {
    if f.codomain != g.domain {
        return Err(Error::SpaceMismatch(format!(
            "first map lands in {} but second expects {}",
            f.codomain, g.domain
        )));
    }
    let claimed = match (f.claimed, g.claimed) {
        (Some(a), Some(b)) => Some(a * b),
        _ => None,
    };
    let (fr, gr) = (f.rule.clone(), g.rule.clone());
    LipschitzMap::from_rule(f.domain, g.codomain, claimed, move |x: &Vector| gr(&fr(x)))
}

// ===========================================================================
// Diameters
// ===========================================================================

#[derive(Clone, Debug, PartialEq)]
pub struct Diameter {
    pub value: f64,
    /// Indices of the first pair attaining the value, in scan order.
    pub witness: (usize, usize),
}

/// Largest pairwise distance of a finite point set.
pub fn diameter(points: &[Vector], metric: &Metric) -> Result<Diameter> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut best = Diameter {
        value: 0.0,
        witness: (0, 0),
    };
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = metric.distance(&points[i], &points[j])?;
            if d > best.value {
                best = Diameter {
                    value: d,
                    witness: (i, j),
                };
            }
        }
    }
    Ok(best)
}

// ===========================================================================
// Estimation and verification
// ===========================================================================

/// Largest observed ratio of image distance to source distance over the
/// pairs; a lower bound for the true constant. Pairs at source distance
/// zero are skipped; if every pair is degenerate there is no evidence and
/// that is an error.
pub fn estimate_lipschitz_constant(map: &LipschitzMap, pairs: &[(Vector, Vector)]) -> Result<f64> {
    let mut best: Option<f64> = None;
    for (x, y) in pairs {
        let dx = map.domain.distance(x, y)?;
        if dx == 0.0 {
            continue;
        }
        let dy = map.codomain.distance(&map.apply(x), &map.apply(y))?;
        let ratio = dy / dx;
        best = Some(best.map_or(ratio, |b| if ratio > b { ratio } else { b }));
    }
    best.ok_or(Error::AllPairsDegenerate)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairViolation {
    pub index: usize,
    pub source_distance: f64,
    pub image_distance: f64,
    /// image distance minus the allowed bound.
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub constant: f64,
    pub checked: usize,
    pub violations: Vec<PairViolation>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `image distance <= constant * source distance` for every pair,
/// with `VERIFY_SLACK` of multiplicative headroom.
pub fn verify_lipschitz(
    map: &LipschitzMap,
    constant: f64,
    pairs: &[(Vector, Vector)],
) -> Result<VerifyReport> {
    if !constant.is_finite() || constant < 0.0 {
        return Err(Error::NegativeConstant(constant));
    }
    let mut violations = Vec::new();
    for (index, (x, y)) in pairs.iter().enumerate() {
        let dx = map.domain.distance(x, y)?;
        let dy = map.codomain.distance(&map.apply(x), &map.apply(y))?;
        let bound = constant * dx * (1.0 + VERIFY_SLACK);
        if dy > bound {
            violations.push(PairViolation {
                index,
                source_distance: dx,
                image_distance: dy,
                excess: dy - bound,
            });
        }
    }
    Ok(VerifyReport {
        constant,
        checked: pairs.len(),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiameterBound {
    pub source: Diameter,
    pub image: Diameter,
    /// claimed constant times the source diameter.
    pub bound: f64,
    pub satisfied: bool,
}

/// Compare the diameter of the image of a point set against the claimed
/// constant times the source diameter. Requires a claimed constant.
pub fn image_diameter_bound_check(map: &LipschitzMap, points: &[Vector]) -> Result<DiameterBound> {
    let claimed = map.claimed.ok_or(Error::MissingClaimedConstant)?;
    let source = diameter(points, &map.domain)?;
    let images: Vec<Vector> = points.iter().map(|x| map.apply(x)).collect();
    let image = diameter(&images, &map.codomain)?;
    let bound = claimed * source.value;
    let satisfied = image.value <= bound * (1.0 + VERIFY_SLACK);
    Ok(DiameterBound {
        source,
        image,
        bound,
        satisfied,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(coords: &[f64]) -> Vector {
        Vector::new(coords.to_vec()).unwrap()
    }

    #[test]
    fn diameter_scan_order_witness() {
        let m = Metric::euclidean(1);
        let pts = vec![v(&[0.0]), v(&[4.0]), v(&[-1.0]), v(&[3.0])];
        let d = diameter(&pts, &m).unwrap();
        assert_eq!(d.value, 5.0);
        assert_eq!(d.witness, (1, 2));
        assert!(matches!(diameter(&[], &m), Err(Error::EmptyPointSet)));
        let single = diameter(&pts[..1], &m).unwrap();
        assert_eq!(single.value, 0.0);
        assert_eq!(single.witness, (0, 0));
    }

    #[test]
    fn scaling_estimate_matches_factor() {
        let f = LipschitzMap::scaling(Metric::euclidean(2), -2.5);
        assert_eq!(f.claimed(), Some(2.5));
        let pairs = vec![
            (v(&[0.0, 0.0]), v(&[1.0, 0.0])),
            (v(&[1.0, 1.0]), v(&[-2.0, 0.5])),
        ];
        let est = estimate_lipschitz_constant(&f, &pairs).unwrap();
        assert_relative_eq!(est, 2.5, max_relative = 1e-12);
        assert!(verify_lipschitz(&f, 2.5, &pairs).unwrap().passed());
        let report = verify_lipschitz(&f, 2.0, &pairs).unwrap();
        assert!(!report.passed());
        assert!(report.violations[0].excess > 0.0);
    }

    #[test]
    fn degenerate_pairs_are_not_evidence() {
        let f = LipschitzMap::identity(Metric::euclidean(1));
        let p = v(&[1.0]);
        assert!(matches!(
            estimate_lipschitz_constant(&f, &[(p.clone(), p.clone())]),
            Err(Error::AllPairsDegenerate)
        ));
    }

    #[test]
    fn distance_to_is_one_lipschitz() {
        let m = Metric::pnorm(crate::norm::PNorm::finite(1.0).unwrap(), 2);
        let f = LipschitzMap::distance_to(m, v(&[0.5, -0.5])).unwrap();
        let pairs = vec![
            (v(&[0.0, 0.0]), v(&[1.0, 2.0])),
            (v(&[3.0, -1.0]), v(&[0.25, 0.125])),
            (v(&[-2.0, 4.0]), v(&[-2.0, 4.5])),
        ];
        let report = verify_lipschitz(&f, 1.0, &pairs).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn composition_multiplies_claims() {
        let m = Metric::euclidean(2);
        let f = LipschitzMap::scaling(m, 2.0);
        let g = LipschitzMap::scaling(m, 3.0);
        let h = compose(&f, &g).unwrap();
        assert_eq!(h.claimed(), Some(6.0));
        assert_eq!(h.apply(&v(&[1.0, -1.0])).as_slice(), &[6.0, -6.0]);
        let other = LipschitzMap::identity(Metric::euclidean(3));
        assert!(matches!(compose(&f, &other), Err(Error::SpaceMismatch(_))));
    }

    #[test]
    fn image_diameter_bound() {
        let f = LipschitzMap::scaling(Metric::euclidean(2), 0.5);
        let pts = vec![v(&[0.0, 0.0]), v(&[2.0, 0.0]), v(&[1.0, 1.0])];
        let check = image_diameter_bound_check(&f, &pts).unwrap();
        assert!(check.satisfied);
        assert_eq!(check.source.value, 2.0);
        assert_eq!(check.image.value, 1.0);
    }

    #[test]
    fn negative_claims_rejected() {
        assert!(matches!(
            LipschitzMap::from_rule(
                Metric::euclidean(1),
                Metric::euclidean(1),
                Some(-1.0),
                |x: &Vector| x.clone()
            ),
            Err(Error::NegativeConstant(_))
        ));
        let f = LipschitzMap::identity(Metric::euclidean(1));
        assert!(matches!(
            verify_lipschitz(&f, f64::NAN, &[]),
            Err(Error::NegativeConstant(_))
        ));
    }
}
