use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::PointCloud;
use crate::linalg;

/// Explicit filtrations refuse to grow past this many simplices.
pub const MAX_SIMPLICES: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<usize>,
    value: f64,
}

impl Simplex {
    /// Vertices must be strictly increasing.
    pub fn new(vertices: Vec<usize>, value: f64) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidParameter("a simplex needs at least one vertex".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "simplex vertices must be strictly increasing, got {vertices:?}"
            )));
        }
        if value.is_nan() {
            return Err(Error::InvalidParameter("filtration value is NaN".into()));
        }
        Ok(Self { vertices, value })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Codimension-one faces, in order of the removed vertex.
    pub fn facets(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let k = self.vertices.len();
        (0..if k > 1 { k } else { 0 }).map(move |skip| {
            self.vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect()
        })
    }
}

fn filtration_order(a: &Simplex, b: &Simplex) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

/// Simplices sorted by `(value, dim, vertices)`, closed under faces, with
/// every face entering no later than its cofaces.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    simplices: Vec<Simplex>,
    max_dim: usize,
    /// Homology is meaningful in dimensions `< homology_dims`. Clique
    /// complexes truncated at `max_dim` lack the simplices that would kill
    /// top-dimensional cycles, so they report one dimension fewer.
    homology_dims: usize,
}

impl Filtration {
    /// Validates and sorts an arbitrary list of simplices.
    pub fn new(mut simplices: Vec<Simplex>, max_dim: usize) -> Result<Self> {
        if let Some(s) = simplices.iter().find(|s| s.dim() > max_dim) {
            return Err(Error::InvalidParameter(format!(
                "simplex {:?} exceeds max_dim {max_dim}",
                s.vertices
            )));
        }
        simplices.sort_by(filtration_order);
        let index: HashMap<&[usize], usize> = simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.vertices.as_slice(), i))
            .collect();
        if index.len() != simplices.len() {
            return Err(Error::InvalidParameter("duplicate simplex in filtration".into()));
        }
        for s in &simplices {
            for f in s.facets() {
                match index.get(f.as_slice()) {
                    None => {
                        return Err(Error::NonMonotone(format!(
                            "face {f:?} of {:?} is missing",
                            s.vertices
                        )))
                    }
                    Some(&i) if simplices[i].value > s.value => {
                        return Err(Error::NonMonotone(format!(
                            "face {f:?} enters at {} after its coface {:?} at {}",
                            simplices[i].value, s.vertices, s.value
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(Self {
            simplices,
            max_dim,
            homology_dims: max_dim + 1,
        })
    }

    fn from_sorted_clique_complex(mut simplices: Vec<Simplex>, max_dim: usize) -> Self {
        simplices.sort_by(filtration_order);
        Self {
            simplices,
            max_dim,
            homology_dims: max_dim.max(1),
        }
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn homology_dims(&self) -> usize {
        self.homology_dims
    }

    /// One simplex per line: the value followed by the vertex list.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for s in &self.simplices {
            write!(out, "{:?}", s.value).unwrap();
            for v in &s.vertices {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses the [`dump`](Self::dump) format. Blank lines and lines starting
    /// with `#` are skipped.
    pub fn from_dump(text: &str, max_dim: usize) -> Result<Self> {
        let mut simplices = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut column = 1;
            let mut fields = Vec::new();
            for tok in line.split_whitespace() {
                let pos = line[column - 1..].find(tok).unwrap() + column;
                fields.push((pos, tok));
                column = pos + tok.len();
            }
            let parse_err = |col: usize, message: String| Error::Parse {
                line: ln + 1,
                column: col,
                message,
            };
            let (vcol, vtok) = fields[0];
            let value: f64 = vtok
                .parse()
                .map_err(|_| parse_err(vcol, format!("bad filtration value '{vtok}'")))?;
            let mut vertices = Vec::with_capacity(fields.len() - 1);
            for &(col, tok) in &fields[1..] {
                vertices.push(
                    tok.parse::<usize>()
                        .map_err(|_| parse_err(col, format!("bad vertex '{tok}'")))?,
                );
            }
            simplices.push(Simplex::new(vertices, value).map_err(|e| parse_err(1, e.to_string()))?);
        }
        Self::new(simplices, max_dim)
    }
}

/// Vertex and edge values of a flag complex on a point cloud.
#[derive(Clone, Copy)]
pub(crate) struct FlagValues<'a> {
    pub points: &'a PointCloud,
    pub weights: Option<&'a [f64]>,
}

impl FlagValues<'_> {
    pub fn vertex(&self, i: usize) -> f64 {
        self.weights.map_or(0.0, |f| f[i])
    }

    pub fn edge(&self, i: usize, j: usize) -> f64 {
        let d = linalg::dist(self.points.point(i), self.points.point(j));
        match self.weights {
            None => d,
            Some(f) => weighted_edge_value(f[i], f[j], d),
        }
    }
}

/// Time at which the closed balls `B(x, t - fx)` and `B(y, t - fy)` first meet
/// under the power-distance convention: `max(fx, fy, (fx + fy + d) / 2)`.
pub fn weighted_edge_value(fx: f64, fy: f64, d: f64) -> f64 {
    fx.max(fy).max((fx + fy + d) / 2.0)
}

pub(crate) fn validate_vertex_values(points: &PointCloud, f: &[f64]) -> Result<()> {
    if f.len() != points.len() {
        return Err(Error::LengthMismatch {
            left: points.len(),
            right: f.len(),
        });
    }
    if let Some(i) = f.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "vertex value {} at index {i} must be finite and nonnegative",
            f[i]
        )));
    }
    Ok(())
}

pub(crate) fn validate_scale(max_value: f64) -> Result<()> {
    if max_value.is_nan() || max_value < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "max_value must be nonnegative, got {max_value}"
        )));
    }
    Ok(())
}

fn clique_filtration(values: FlagValues, max_dim: usize, max_value: f64) -> Result<Filtration> {
    validate_scale(max_value)?;
    let n = values.points.len();
    let alive: Vec<bool> = (0..n).map(|i| values.vertex(i) <= max_value).collect();
    // neighbours with a larger index, and the edge values
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edge: HashMap<(usize, usize), f64> = HashMap::new();
    for i in 0..n {
        if !alive[i] {
            continue;
        }
        for j in i + 1..n {
            if !alive[j] {
                continue;
            }
            let v = values.edge(i, j);
            if v <= max_value {
                nbrs[i].push(j);
                edge.insert((i, j), v);
            }
        }
    }

    let mut simplices = Vec::new();
    let cap = |len: usize| -> Result<()> {
        if len > MAX_SIMPLICES {
            return Err(Error::Capacity(format!(
                "clique complex exceeds {MAX_SIMPLICES} simplices; lower max_value or max_dim"
            )));
        }
        Ok(())
    };
    // depth-first clique expansion over increasing vertex lists
    fn expand(
        clique: &mut Vec<usize>,
        value: f64,
        candidates: &[usize],
        nbrs: &[Vec<usize>],
        edge: &HashMap<(usize, usize), f64>,
        max_dim: usize,
        out: &mut Vec<Simplex>,
        cap: &dyn Fn(usize) -> Result<()>,
    ) -> Result<()> {
        out.push(Simplex {
            vertices: clique.clone(),
            value,
        });
        cap(out.len())?;
        if clique.len() > max_dim {
            return Ok(());
        }
        for (k, &v) in candidates.iter().enumerate() {
            let mut val = value;
            for &u in clique.iter() {
                val = val.max(edge[&(u, v)]);
            }
            let next: Vec<usize> = candidates[k + 1..]
                .iter()
                .copied()
                .filter(|w| nbrs[v].binary_search(w).is_ok())
                .collect();
            clique.push(v);
            expand(clique, val, &next, nbrs, edge, max_dim, out, cap)?;
            clique.pop();
        }
        Ok(())
    }
    for i in (0..n).filter(|&i| alive[i]) {
        let mut clique = vec![i];
        expand(
            &mut clique,
            values.vertex(i),
            &nbrs[i],
            &nbrs,
            &edge,
            max_dim,
            &mut simplices,
            &cap,
        )?;
    }
    Ok(Filtration::from_sorted_clique_complex(simplices, max_dim))
}

/// Vietoris-Rips filtration: vertices at 0, edges at their length, higher
/// simplices at their longest edge; simplices above `max_value` are dropped.
pub fn rips_filtration(points: &PointCloud, max_dim: usize, max_value: f64) -> Result<Filtration> {
    clique_filtration(
        FlagValues {
            points,
            weights: None,
        },
        max_dim,
        max_value,
    )
}

/// Weighted Rips filtration with vertex values `f` (typically a DTM):
/// vertices at `f(x)`, edges at [`weighted_edge_value`], higher simplices at
/// their largest edge value.
pub fn dtm_filtration(points: &PointCloud, f: &[f64], max_dim: usize, max_value: f64) -> Result<Filtration> {
    validate_vertex_values(points, f)?;
    clique_filtration(
        FlagValues {
            points,
            weights: Some(f),
        },
        max_dim,
        max_value,
    )
}
