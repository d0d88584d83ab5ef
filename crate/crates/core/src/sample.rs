//! Seeded sampling of points, pairs, and scalars for the check suites.
//! All sampling flows through ChaCha8 so results are reproducible across
//! platforms from the seed alone.

use rand::Rng;
use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::metric::Metric;
use crate::vector::Vector;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn standard_normal_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vector {
    let coords = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    Vector::new(coords).expect("normal draws are finite")
}

/// Uniformly distributed unit vector; degenerate draws are redrawn.
pub fn unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vector {
    loop {
        let x = standard_normal_vector(dim, rng);
        if x.norm() > 1e-6 {
            return x.scale(1.0 / x.norm());
        }
    }
}

/// A point of the metric's space: a Gaussian point of R^n for the norm
/// metrics, a uniform unit vector for the sphere metrics.
pub fn point_in(metric: &Metric, rng: &mut ChaCha8Rng) -> Vector {
    if metric.is_sphere() {
        unit_vector(metric.dim(), rng)
    } else {
        standard_normal_vector(metric.dim(), rng)
    }
}

pub fn points_in(metric: &Metric, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vector> {
    (0..count).map(|_| point_in(metric, rng)).collect()
}

pub fn pairs_in(metric: &Metric, count: usize, rng: &mut ChaCha8Rng) -> Vec<(Vector, Vector)> {
    (0..count)
        .map(|_| (point_in(metric, rng), point_in(metric, rng)))
        .collect()
}

/// Scalars in [-3, 3], with 0 and 1 prepended so the degenerate cases are
/// always exercised.
pub fn scalars(count: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = vec![0.0, 1.0];
    out.extend((0..count).map(|_| rng.random_range(-3.0..=3.0)));
    out
}

pub fn uniform(lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(lo..=hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeding_is_reproducible() {
        let a = points_in(&Metric::euclidean(3), 5, &mut rng_from_seed(42));
        let b = points_in(&Metric::euclidean(3), 5, &mut rng_from_seed(42));
        assert_eq!(a, b);
        let c = points_in(&Metric::euclidean(3), 5, &mut rng_from_seed(43));
        assert_ne!(a, c);
    }

    #[test]
    fn sphere_samples_are_unit() {
        let m = Metric::sphere(5).unwrap();
        let mut rng = rng_from_seed(1);
        for p in points_in(&m, 20, &mut rng) {
            assert!((p.norm() - 1.0).abs() < 1e-12);
        }
    }
}
