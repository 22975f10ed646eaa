use crate::error::{Error, Result};
use crate::linalg;

/// A finite list of points in `R^n`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    /// Builds a cloud from flat row-major coordinates.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("ambient dimension must be positive".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: coords.len() % dim,
            });
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i / dim));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_rows<R: AsRef<[f64]>>(dim: usize, rows: &[R]) -> Result<Self> {
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            coords.extend_from_slice(row);
        }
        Self::new(dim, coords)
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Appends a point, checking its dimension.
    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: p.len(),
            });
        }
        if p.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite(self.len()));
        }
        self.coords.extend_from_slice(p);
        Ok(())
    }

    /// Sub-cloud with the given indices, in order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        Self {
            dim: self.dim,
            coords,
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(Self {
            dim: self.dim,
            coords,
        })
    }

    /// Axis-aligned bounding box `(min, max)` per coordinate.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.is_empty() {
            return None;
        }
        let mut lo = self.point(0).to_vec();
        let mut hi = lo.clone();
        for p in self.iter() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        Some((lo, hi))
    }
}

/// Pairs `(base point, symmetric n x n matrix)`; the support of a lifted measure.
///
/// Matrices are stored flattened row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedCloud {
    base: PointCloud,
    matrices: Vec<f64>,
    intrinsic_dim_hint: Option<usize>,
}

impl LiftedCloud {
    pub fn new(base: PointCloud, matrices: Vec<f64>, intrinsic_dim_hint: Option<usize>) -> Result<Self> {
        let n = base.dim();
        if matrices.len() != base.len() * n * n {
            return Err(Error::LengthMismatch {
                left: base.len() * n * n,
                right: matrices.len(),
            });
        }
        if let Some(i) = matrices.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i / (n * n)));
        }
        Ok(Self {
            base,
            matrices,
            intrinsic_dim_hint,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn base_points(&self) -> &PointCloud {
        &self.base
    }

    pub fn base_point(&self, i: usize) -> &[f64] {
        self.base.point(i)
    }

    /// Row-major `n x n` matrix of entry `i`.
    pub fn matrix(&self, i: usize) -> &[f64] {
        let nn = self.base.dim() * self.base.dim();
        &self.matrices[i * nn..(i + 1) * nn]
    }

    pub fn matrices(&self) -> &[f64] {
        &self.matrices
    }

    pub fn intrinsic_dim_hint(&self) -> Option<usize> {
        self.intrinsic_dim_hint
    }

    pub fn select(&self, indices: &[usize]) -> Self {
        let nn = self.base.dim() * self.base.dim();
        let mut matrices = Vec::with_capacity(indices.len() * nn);
        for &i in indices {
            matrices.extend_from_slice(self.matrix(i));
        }
        Self {
            base: self.base.select(indices),
            matrices,
            intrinsic_dim_hint: self.intrinsic_dim_hint,
        }
    }

    /// Checks symmetry, positive semi-definiteness and the trace bound of
    /// every matrix, all to `1e-10`.
    pub fn check_invariants(&self) -> Result<()> {
        const TOL: f64 = 1e-10;
        let n = self.ambient_dim();
        for i in 0..self.len() {
            let a = self.matrix(i);
            if linalg::asymmetry(a, n) > TOL {
                return Err(Error::InvalidParameter(format!("matrix {i} is not symmetric")));
            }
            let tr = linalg::trace(a, n);
            if !(-TOL..=1.0 + TOL).contains(&tr) {
                return Err(Error::InvalidParameter(format!("matrix {i} has trace {tr} outside [0, 1]")));
            }
            let min_eig = linalg::sym_eigenvalues(a, n)
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if min_eig < -TOL {
                return Err(Error::InvalidParameter(format!(
                    "matrix {i} has negative eigenvalue {min_eig}"
                )));
            }
        }
        Ok(())
    }
}
