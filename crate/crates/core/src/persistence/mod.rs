//! Flag filtrations and their Z2 persistence diagrams.
//!
//! Two engines compute barcodes. [`persistence_diagram`] reduces the boundary
//! matrix of an explicit [`Filtration`]. [`rips_diagram`] and [`dtm_diagram`]
//! never materialise the complex and scale to thousands of points.

mod cohomology;
mod diagram;
mod filtration;
mod reduction;

pub use cohomology::MAX_COLUMNS;
pub use diagram::{Bar, PersistenceDiagram};
pub use filtration::{
    dtm_filtration, rips_filtration, weighted_edge_value, Filtration, Simplex, MAX_SIMPLICES,
};
pub use reduction::persistence_diagram;

use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use filtration::{validate_scale, validate_vertex_values, FlagValues};

fn check_dim(max_dim: usize) -> Result<()> {
    if max_dim > 3 {
        return Err(Error::InvalidParameter(format!(
            "max_dim {max_dim} is above the supported limit of 3"
        )));
    }
    Ok(())
}

/// Barcode of the Rips filtration of `points` truncated at `max_value`.
///
/// Simplices up to dimension `max_dim` are used, so homology is reported in
/// dimensions `0..max_dim` (at least dimension 0). Classes still alive at
/// `max_value` get an infinite death.
pub fn rips_diagram(points: &PointCloud, max_dim: usize, max_value: f64) -> Result<PersistenceDiagram> {
    check_dim(max_dim)?;
    validate_scale(max_value)?;
    cohomology::flag_persistence(
        FlagValues {
            points,
            weights: None,
        },
        max_dim.max(1),
        max_value,
    )
}

/// Barcode of the weighted Rips (DTM) filtration, see [`dtm_filtration`].
pub fn dtm_diagram(points: &PointCloud, f: &[f64], max_dim: usize, max_value: f64) -> Result<PersistenceDiagram> {
    check_dim(max_dim)?;
    validate_scale(max_value)?;
    validate_vertex_values(points, f)?;
    cohomology::flag_persistence(
        FlagValues {
            points,
            weights: Some(f),
        },
        max_dim.max(1),
        max_value,
    )
}

/// Bars of dimension `dim` with length at least `min_length`, longest first.
/// Infinite bars are always kept.
pub fn prominent_bars(diagram: &PersistenceDiagram, dim: usize, min_length: f64) -> Vec<Bar> {
    let mut bars: Vec<Bar> = diagram
        .bars()
        .iter()
        .filter(|b| b.dim == dim && (b.is_infinite() || b.length() >= min_length))
        .copied()
        .collect();
    bars.sort_by(|a, b| b.length().total_cmp(&a.length()).then(a.birth.total_cmp(&b.birth)));
    bars
}
