//! Distance to a measure.
//!
//! For an empirical measure the DTM at mass `m` is computed exactly. With the
//! atoms sorted by distance to `x`, `t -> delta_t(x)` is a step function and
//! `d^2(x) = (1/m) sum_k w'_k r_k^2`, where `w'_k` is the mass of atom `k`
//! clipped so that the masses used add up to `m`. The last atom usually
//! contributes only part of its mass.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::linalg;
use crate::measure::EmpiricalMeasure;
use crate::persistence::rips_diagram;

fn check_mass(m: f64) -> Result<()> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::InvalidParameter(format!("DTM mass must lie in (0, 1), got {m}")));
    }
    Ok(())
}

fn check_query(mu: &EmpiricalMeasure, x: &[f64]) -> Result<()> {
    if x.len() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            found: x.len(),
        });
    }
    Ok(())
}

fn dtm_unchecked(mu: &EmpiricalMeasure, m: f64, x: &[f64]) -> f64 {
    let mut atoms: Vec<(f64, f64)> = mu
        .points()
        .iter()
        .zip(mu.weights())
        .map(|(y, &w)| (linalg::sq_dist(x, y), w))
        .collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut remaining = m;
    let mut acc = 0.0;
    for (r2, w) in atoms {
        let take = w.min(remaining);
        acc += take * r2;
        remaining -= take;
        if remaining <= 0.0 {
            break;
        }
    }
    (acc / m).sqrt()
}

/// `d_{mu,m}(x)`.
pub fn dtm(mu: &EmpiricalMeasure, m: f64, x: &[f64]) -> Result<f64> {
    check_mass(m)?;
    check_query(mu, x)?;
    Ok(dtm_unchecked(mu, m, x))
}

/// DTM at every query point.
pub fn dtm_field(mu: &EmpiricalMeasure, m: f64, queries: &PointCloud) -> Result<Vec<f64>> {
    check_mass(m)?;
    if queries.dim() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            found: queries.dim(),
        });
    }
    let pts: Vec<&[f64]> = queries.iter().collect();
    Ok(pts.par_iter().map(|x| dtm_unchecked(mu, m, x)).collect())
}

/// `c(mu)`: the largest DTM value over the support.
pub fn c_mu(mu: &EmpiricalMeasure, m: f64) -> Result<f64> {
    Ok(dtm_field(mu, m, mu.points())?.into_iter().fold(0.0, f64::max))
}

/// Betti numbers of a Rips complex on a DTM sublevel set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SublevelBetti {
    /// `betti[k]` for `k = 0..=max_dim`.
    pub betti: Vec<usize>,
    /// Number of points with DTM at most the level.
    pub points: usize,
    /// True when no point survives the restriction.
    pub empty: bool,
}

/// Keeps the points with `dtm_values <= t`, builds their Rips complex at
/// scale `link_radius` and returns its Betti numbers up to `max_dim`.
///
/// This is a combinatorial proxy for the homotopy type of the sublevel set
/// `{d <= t}`; `link_radius` is a user choice, not inferred.
pub fn sublevel_betti(
    points: &PointCloud,
    dtm_values: &[f64],
    t: f64,
    link_radius: f64,
    max_dim: usize,
) -> Result<SublevelBetti> {
    if points.len() != dtm_values.len() {
        return Err(Error::LengthMismatch {
            left: points.len(),
            right: dtm_values.len(),
        });
    }
    if !(link_radius > 0.0) || !link_radius.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "link radius must be positive, got {link_radius}"
        )));
    }
    let keep: Vec<usize> = (0..points.len()).filter(|&i| dtm_values[i] <= t).collect();
    if keep.is_empty() {
        return Ok(SublevelBetti {
            betti: vec![0; max_dim + 1],
            points: 0,
            empty: true,
        });
    }
    let sub = points.select(&keep);
    let diagram = rips_diagram(&sub, max_dim + 1, link_radius)?;
    Ok(SublevelBetti {
        betti: (0..=max_dim).map(|k| diagram.betti_at(k, link_radius)).collect(),
        points: keep.len(),
        empty: false,
    })
}
