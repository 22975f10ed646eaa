use rayon::prelude::*;

use super::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::linalg;

fn check(a: &PointCloud, b: &PointCloud) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `max_{a in A} min_{b in B} |a - b|`.
pub fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    check(a, b)?;
    let worst_sq = a
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|p| {
            b.iter()
                .map(|q| linalg::sq_dist(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst_sq.sqrt())
}

/// Symmetric Hausdorff distance between two finite clouds.
pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}
