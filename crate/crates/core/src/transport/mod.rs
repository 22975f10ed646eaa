//! Exact optimal transport between empirical measures and bottleneck matching
//! between persistence diagrams.

pub mod bottleneck;
pub mod network_simplex;

pub use bottleneck::{bottleneck_distance, bottleneck_pairs, bottleneck_per_dim};

use crate::error::{Error, Result};
use crate::linalg;
use crate::measure::{EmpiricalMeasure, WeightedLift};

/// Largest combined support size accepted by the exact solver.
pub const MAX_SUPPORT: usize = 20_000;

/// Sparse coupling between two discrete measures.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    entries: Vec<(usize, usize, f64)>,
    cost: f64,
}

impl TransportPlan {
    /// `(source index, target index, mass)` triples with positive mass.
    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Total cost `sum mass * |x - y|^p`.
    pub fn cost(&self) -> f64 {
        self.cost
    }

    /// Largest deviation of the plan's marginals from `a` and `b`.
    pub fn marginal_error(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut rows = vec![0.0; a.len()];
        let mut cols = vec![0.0; b.len()];
        for &(i, j, f) in &self.entries {
            rows[i] += f;
            cols[j] += f;
        }
        rows.iter()
            .zip(a)
            .chain(cols.iter().zip(b))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

fn check_order(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("Wasserstein order must be >= 1, got {p}")));
    }
    Ok(())
}

fn check_capacity(m: usize, n: usize) -> Result<()> {
    if m + n > MAX_SUPPORT {
        return Err(Error::Capacity(format!(
            "exact transport between supports of size {m} and {n} exceeds the limit of {MAX_SUPPORT} points"
        )));
    }
    Ok(())
}

/// Exact `W_p(mu, nu)` and an optimal plan.
pub fn wasserstein(mu: &EmpiricalMeasure, nu: &EmpiricalMeasure, p: f64) -> Result<(f64, TransportPlan)> {
    check_order(p)?;
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            found: nu.dim(),
        });
    }
    check_capacity(mu.len(), nu.len())?;
    let (x, y) = (mu.points(), nu.points());
    let sol = network_simplex::solve_with(mu.weights(), nu.weights(), |i, j| {
        let d2 = linalg::sq_dist(x.point(i), y.point(j));
        if p == 2.0 {
            d2
        } else if p == 1.0 {
            d2.sqrt()
        } else {
            d2.powf(p / 2.0)
        }
    })?;
    let cost = sol.cost.max(0.0);
    Ok((
        cost.powf(1.0 / p),
        TransportPlan {
            entries: sol.flows,
            cost,
        },
    ))
}

/// `W_{p,gamma}` between weighted lifted clouds: `W_p` of their γ-embeddings.
pub fn gamma_wasserstein(a: &WeightedLift, b: &WeightedLift, p: f64, gamma: f64) -> Result<f64> {
    let ea = a.embedded_measure(gamma)?;
    let eb = b.embedded_measure(gamma)?;
    Ok(wasserstein(&ea, &eb, p)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{LiftedCloud, PointCloud};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cloud(rows: &[&[f64]]) -> PointCloud {
        PointCloud::from_rows(rows[0].len(), rows).unwrap()
    }

    fn random_measure(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> EmpiricalMeasure {
        let coords: Vec<f64> = (0..n * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
        EmpiricalMeasure::normalized(PointCloud::new(dim, coords).unwrap(), w).unwrap()
    }

    #[test]
    fn identical_measures_have_zero_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mu = random_measure(&mut rng, 12, 3);
        let (w, plan) = wasserstein(&mu, &mu, 2.0).unwrap();
        assert!(w < 1e-12);
        assert!(plan.marginal_error(mu.weights(), mu.weights()) < 1e-12);
        for &(i, j, _) in plan.entries() {
            assert_eq!(i, j);
        }
    }

    #[test]
    fn diracs() {
        let a = EmpiricalMeasure::dirac(&[0.0, 0.0]).unwrap();
        let b = EmpiricalMeasure::dirac(&[3.0, 4.0]).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0] {
            assert!((wasserstein(&a, &b, p).unwrap().0 - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_atom_example() {
        let eps = 0.2;
        let mu = EmpiricalMeasure::uniform(cloud(&[&[0.0], &[1.0]])).unwrap();
        let nu = EmpiricalMeasure::uniform(cloud(&[&[0.0], &[1.0 + eps]])).unwrap();
        let (w, _) = wasserstein(&mu, &nu, 1.0).unwrap();
        assert!((w - 0.1).abs() < 1e-12);
    }

    #[test]
    fn metric_axioms_and_order_monotonicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let n = [rng.gen_range(1..20), rng.gen_range(1..20), rng.gen_range(1..20)];
            let a = random_measure(&mut rng, n[0], 2);
            let b = random_measure(&mut rng, n[1], 2);
            let c = random_measure(&mut rng, n[2], 2);
            for p in [1.0, 2.0] {
                let ab = wasserstein(&a, &b, p).unwrap().0;
                let ba = wasserstein(&b, &a, p).unwrap().0;
                let ac = wasserstein(&a, &c, p).unwrap().0;
                let cb = wasserstein(&c, &b, p).unwrap().0;
                assert!((ab - ba).abs() < 1e-8);
                assert!(ab <= ac + cb + 1e-8);
            }
            let w1 = wasserstein(&a, &b, 1.0).unwrap().0;
            let w2 = wasserstein(&a, &b, 2.0).unwrap().0;
            let w3 = wasserstein(&a, &b, 3.0).unwrap().0;
            assert!(w1 <= w2 + 1e-10 && w2 <= w3 + 1e-10);
        }
    }

    #[test]
    fn restriction_to_a_ball_is_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let mu = random_measure(&mut rng, 25, 2);
            let centre = [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
            let radius: f64 = rng.gen_range(0.5..1.5);
            let inside: Vec<usize> = (0..mu.len())
                .filter(|&i| linalg::dist(mu.points().point(i), &centre) <= radius)
                .collect();
            if inside.is_empty() {
                continue;
            }
            let (sub, mass) = mu.restrict(&inside).unwrap();
            // every point of a random measure lies in the ball of radius
            // `outer` around the centre, so the support diameter is <= 2 outer
            let outer = mu
                .points()
                .iter()
                .map(|x| linalg::dist(x, &centre))
                .fold(0.0, f64::max);
            for p in [1.0, 2.0] {
                let w = wasserstein(&mu, &sub, p).unwrap().0;
                let bound = 2.0 * (1.0 - mass).powf(1.0 / p) * 2.0 * outer;
                assert!(w <= bound + 1e-9, "{w} > {bound}");
            }
        }
    }

    #[test]
    fn gamma_wasserstein_two_atom_closed_form() {
        let eps: f64 = 0.2;
        let base_mu = cloud(&[&[0.0], &[1.0]]);
        let base_nu = cloud(&[&[0.0], &[1.0 + eps]]);
        // lifted with r = 1: mu sees both atoms from each, nu sees only itself
        let mu = crate::measure::lift_measure(&EmpiricalMeasure::uniform(base_mu).unwrap(), 1.0).unwrap();
        let nu = crate::measure::lift_measure(&EmpiricalMeasure::uniform(base_nu).unwrap(), 1.0).unwrap();
        for gamma in [0.5f64, 1.0, 2.0] {
            for p in [1.0f64, 2.0, 3.0] {
                let expected = (0.5 * ((gamma / 2.0).powf(p) + (eps * eps + gamma * gamma / 4.0).powf(p / 2.0)))
                    .powf(1.0 / p);
                let w = gamma_wasserstein(&mu, &nu, p, gamma).unwrap();
                assert!((w - expected).abs() < 1e-9, "{w} vs {expected}");
                assert!(w >= gamma / 2.0 - 1e-9);
            }
        }
    }

    #[test]
    fn identical_lifts_have_zero_distance() {
        let base = cloud(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let lc = LiftedCloud::new(base, vec![0.5, 0.0, 0.0, 0.0, 0.2, 0.1, 0.1, 0.3], None).unwrap();
        let a = WeightedLift::uniform(lc);
        assert!(gamma_wasserstein(&a, &a, 2.0, 2.0).unwrap() < 1e-12);
    }

    #[test]
    fn errors() {
        let a = EmpiricalMeasure::dirac(&[0.0]).unwrap();
        let b = EmpiricalMeasure::dirac(&[0.0, 1.0]).unwrap();
        assert!(matches!(wasserstein(&a, &b, 2.0), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(wasserstein(&a, &a, 0.5), Err(Error::InvalidParameter(_))));
        let big = EmpiricalMeasure::uniform(PointCloud::new(1, vec![0.0; 15_000]).unwrap()).unwrap();
        let big2 = EmpiricalMeasure::uniform(PointCloud::new(1, vec![0.0; 6_000]).unwrap()).unwrap();
        assert!(matches!(wasserstein(&big, &big2, 2.0), Err(Error::Capacity(_))));
    }
}
