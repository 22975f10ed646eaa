//! Empirical measures, local covariance matrices and lifted measures.
//!
//! Every neighbourhood is the closed ball `|x - y| <= r`, tested on squared
//! distances.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{exact_lift, reference_grid, LiftedCloud, ParametricShape, PointCloud};
use crate::linalg;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A probability measure supported on finitely many points.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    points: PointCloud,
    weights: Vec<f64>,
}

impl EmpiricalMeasure {
    /// Weights must be positive and sum to one within `1e-12`.
    pub fn new(points: PointCloud, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if weights.len() != points.len() {
            return Err(Error::LengthMismatch {
                left: points.len(),
                right: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        let total = linalg::compensated_sum(&weights);
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Ok(Self { points, weights })
    }

    /// Rescales positive weights to unit mass.
    pub fn normalized(points: PointCloud, raw: Vec<f64>) -> Result<Self> {
        let total: f64 = raw.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidWeights(format!("total mass {total}")));
        }
        Self::new(points, raw.into_iter().map(|w| w / total).collect())
    }

    pub fn uniform(points: PointCloud) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::EmptyCloud);
        }
        Self::new(points, vec![1.0 / n as f64; n])
    }

    pub fn dirac(point: &[f64]) -> Result<Self> {
        Self::new(PointCloud::new(point.len(), point.to_vec())?, vec![1.0])
    }

    pub fn points(&self) -> &PointCloud {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.dim()
    }

    /// Restriction to `indices`, renormalised, together with its original mass.
    pub fn restrict(&self, indices: &[usize]) -> Result<(Self, f64)> {
        let mass: f64 = indices.iter().map(|&i| self.weights[i]).sum();
        let sub = Self::normalized(
            self.points.select(indices),
            indices.iter().map(|&i| self.weights[i]).collect(),
        )?;
        Ok((sub, mass))
    }

    /// Mass of the closed ball `B(x, r)`.
    pub fn ball_mass(&self, x: &[f64], r: f64) -> f64 {
        let r2 = r * r;
        self.points
            .iter()
            .zip(&self.weights)
            .filter(|(y, _)| linalg::sq_dist(x, y) <= r2)
            .map(|(_, w)| w)
            .sum()
    }
}

/// `Sigma^r(x)`: second moment of the measure restricted to `B(x, r)` and
/// renormalised, centred at `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalCovariance {
    /// Row-major `n x n`.
    pub matrix: Vec<f64>,
    pub ball_mass: f64,
    pub radius: f64,
}

impl LocalCovariance {
    /// `Sigma / r^2`.
    pub fn normalized(&self) -> Vec<f64> {
        let s = 1.0 / (self.radius * self.radius);
        self.matrix.iter().map(|v| v * s).collect()
    }
}

fn check_query(nu: &EmpiricalMeasure, x: &[f64], r: f64) -> Result<()> {
    if x.len() != nu.dim() {
        return Err(Error::DimensionMismatch {
            expected: nu.dim(),
            found: x.len(),
        });
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

pub fn local_covariance(nu: &EmpiricalMeasure, x: &[f64], r: f64) -> Result<LocalCovariance> {
    check_query(nu, x, r)?;
    let n = nu.dim();
    let r2 = r * r;
    let mut matrix = vec![0.0; n * n];
    let mut mass = 0.0;
    let mut diff = vec![0.0; n];
    for (y, &w) in nu.points().iter().zip(nu.weights()) {
        if linalg::sq_dist(x, y) > r2 {
            continue;
        }
        mass += w;
        for k in 0..n {
            diff[k] = x[k] - y[k];
        }
        for a in 0..n {
            let wa = w * diff[a];
            for b in a..n {
                matrix[a * n + b] += wa * diff[b];
            }
        }
    }
    if !(mass > 0.0) {
        return Err(Error::EmptyNeighborhood { radius: r });
    }
    for a in 0..n {
        for b in a..n {
            let v = matrix[a * n + b] / mass;
            matrix[a * n + b] = v;
            matrix[b * n + a] = v;
        }
    }
    Ok(LocalCovariance {
        matrix,
        ball_mass: mass,
        radius: r,
    })
}

/// `Sigma^r(x) / r^2`; eigenvalues lie in `[0, 1]`.
pub fn normalized_local_covariance(nu: &EmpiricalMeasure, x: &[f64], r: f64) -> Result<Vec<f64>> {
    Ok(local_covariance(nu, x, r)?.normalized())
}

/// A lifted cloud together with the masses of its atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedLift {
    pub cloud: LiftedCloud,
    pub weights: Vec<f64>,
}

impl WeightedLift {
    pub fn new(cloud: LiftedCloud, weights: Vec<f64>) -> Result<Self> {
        if cloud.len() != weights.len() {
            return Err(Error::LengthMismatch {
                left: cloud.len(),
                right: weights.len(),
            });
        }
        Ok(Self { cloud, weights })
    }

    pub fn uniform(cloud: LiftedCloud) -> Self {
        let n = cloud.len();
        let weights = vec![1.0 / n.max(1) as f64; n];
        Self { cloud, weights }
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cloud.is_empty()
    }

    /// Push-forward under `(x, A) -> (x, gamma A)`, as a measure on `R^{n + n^2}`.
    pub fn embedded_measure(&self, gamma: f64) -> Result<EmpiricalMeasure> {
        EmpiricalMeasure::new(gamma_embed(&self.cloud, gamma)?, self.weights.clone())
    }
}

/// The lifted measure: every atom `x` of `nu` carried to `(x, Sigma_bar^r(x))`
/// with its mass unchanged.
pub fn lift_measure(nu: &EmpiricalMeasure, r: f64) -> Result<WeightedLift> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {r}")));
    }
    let pts: Vec<&[f64]> = nu.points().iter().collect();
    let matrices: Vec<Vec<f64>> = pts
        .par_iter()
        .map(|x| normalized_local_covariance(nu, x, r))
        .collect::<Result<_>>()?;
    let cloud = LiftedCloud::new(nu.points().clone(), matrices.concat(), None)?;
    WeightedLift::new(cloud, nu.weights().to_vec())
}

/// Embeds `(x, A)` as `(x, gamma * vec(A))` in `R^{n + n^2}`; Euclidean
/// distances there are `gamma`-norm distances in point-matrix space.
pub fn gamma_embed(lc: &LiftedCloud, gamma: f64) -> Result<PointCloud> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    let n = lc.ambient_dim();
    let dim = n + n * n;
    let mut coords = Vec::with_capacity(lc.len() * dim);
    for i in 0..lc.len() {
        coords.extend_from_slice(lc.base_point(i));
        coords.extend(lc.matrix(i).iter().map(|v| gamma * v));
    }
    PointCloud::new(dim, coords)
}

/// Frobenius distance between matched lifted matrices.
pub fn tangent_error_field(lifted: &LiftedCloud, exact: &LiftedCloud) -> Result<Vec<f64>> {
    if lifted.len() != exact.len() {
        return Err(Error::LengthMismatch {
            left: lifted.len(),
            right: exact.len(),
        });
    }
    if lifted.ambient_dim() != exact.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: lifted.ambient_dim(),
            found: exact.ambient_dim(),
        });
    }
    Ok((0..lifted.len())
        .map(|i| linalg::frobenius_dist(lifted.matrix(i), exact.matrix(i)))
        .collect())
}

/// Dense deterministic stand-in for the normalised Hausdorff measure of a
/// shape (see [`reference_grid`]), with its parameters.
pub fn reference_measure(shape: &ParametricShape, n: usize) -> Result<(EmpiricalMeasure, Vec<f64>)> {
    let (params, weights) = reference_grid(shape, n)?;
    let d = shape.intrinsic_dim();
    let coords: Vec<f64> = params.chunks_exact(d).flat_map(|t| shape.eval(t)).collect();
    let points = PointCloud::new(shape.ambient_dim(), coords)?;
    Ok((EmpiricalMeasure::normalized(points, weights)?, params))
}

/// Exact lifted measure sampled on a reference grid.
pub fn exact_lifted_reference(shape: &ParametricShape, n: usize) -> Result<WeightedLift> {
    let (params, weights) = reference_grid(shape, n)?;
    let total: f64 = weights.iter().sum();
    WeightedLift::new(
        exact_lift(shape, &params)?,
        weights.into_iter().map(|w| w / total).collect(),
    )
}
