//! Implicit persistent cohomology of flag complexes.
//!
//! Simplices are never stored: they are encoded by the combinatorial number
//! system, and coboundaries are enumerated on demand from the neighbourhood
//! graph. Columns are reduced in reverse filtration order with clearing, and
//! only the reduction matrix is kept (as in Ripser). Barcodes coincide with
//! those of the explicit boundary-matrix reduction.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use rayon::prelude::*;

use super::diagram::PersistenceDiagram;
use super::filtration::FlagValues;
use crate::error::{Error, Result};

/// Upper bound on the number of columns assembled for one dimension.
pub const MAX_COLUMNS: usize = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    value: f64,
    index: u64,
}

/// Heap order: the earliest simplex in the filtration is the greatest.
/// Within a dimension the filtration order is `(value asc, index desc)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Earliest(Entry);

impl Eq for Earliest {}

impl Ord for Earliest {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .value
            .total_cmp(&self.0.value)
            .then(self.0.index.cmp(&other.0.index))
    }
}

impl PartialOrd for Earliest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn filtration_cmp(a: &Entry, b: &Entry) -> Ordering {
    a.value.total_cmp(&b.value).then(b.index.cmp(&a.index))
}

struct Complex {
    n: usize,
    /// `binom[k][v] = C(v, k)`
    binom: Vec<Vec<u64>>,
    /// Sorted neighbour lists `(vertex, edge value)` within the threshold.
    adj: Vec<Vec<(usize, f64)>>,
    vertex_value: Vec<f64>,
    alive: Vec<bool>,
}

impl Complex {
    fn new(values: FlagValues, threshold: f64, max_vertices: usize) -> Result<Self> {
        let n = values.points.len();
        let mut binom = vec![vec![0u64; n + 1]; max_vertices + 1];
        for row in binom.iter_mut().take(1) {
            row.iter_mut().for_each(|x| *x = 1);
        }
        for k in 1..=max_vertices {
            for v in 1..=n {
                binom[k][v] = binom[k - 1][v - 1]
                    .checked_add(binom[k][v - 1])
                    .ok_or_else(|| Error::Capacity(format!("C({n}, {max_vertices}) overflows 64-bit simplex indices")))?;
            }
        }
        let vertex_value: Vec<f64> = (0..n).map(|i| values.vertex(i)).collect();
        let alive: Vec<bool> = vertex_value.iter().map(|&v| v <= threshold).collect();
        let upper: Vec<Vec<(usize, f64)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                if !alive[i] {
                    return Vec::new();
                }
                (i + 1..n)
                    .filter(|&j| alive[j])
                    .filter_map(|j| {
                        let v = values.edge(i, j);
                        (v <= threshold).then_some((j, v))
                    })
                    .collect()
            })
            .collect();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, row) in upper.iter().enumerate() {
            for &(j, v) in row {
                adj[j].push((i, v));
            }
        }
        for (i, row) in upper.into_iter().enumerate() {
            adj[i].extend(row);
            adj[i].sort_unstable_by_key(|e| e.0);
        }
        let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
        if edges > MAX_COLUMNS {
            return Err(Error::Capacity(format!(
                "{edges} edges below the threshold exceed the limit of {MAX_COLUMNS}"
            )));
        }
        Ok(Self {
            n,
            binom,
            adj,
            vertex_value,
            alive,
        })
    }

    fn index(&self, vertices: &[usize]) -> u64 {
        // vertices increasing; vertex i contributes C(v_i, i + 1)
        vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| self.binom[i + 1][v])
            .sum()
    }

    fn vertices(&self, mut index: u64, dim: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut hi = self.n;
        for k in (1..=dim + 1).rev() {
            // largest v < hi with C(v, k) <= index
            let row = &self.binom[k];
            let (mut lo, mut up) = (k - 1, hi);
            while up - lo > 1 {
                let mid = (lo + up) / 2;
                if row[mid] <= index {
                    lo = mid;
                } else {
                    up = mid;
                }
            }
            out.push(lo);
            index -= row[lo];
            hi = lo;
        }
        out.reverse();
    }

    fn edge_value(&self, a: usize, b: usize) -> Option<f64> {
        let row = &self.adj[a];
        row.binary_search_by_key(&b, |e| e.0).ok().map(|k| row[k].1)
    }

    /// Cofacets of the simplex with the given vertices and value.
    fn for_each_cofacet(&self, vertices: &[usize], value: f64, mut f: impl FnMut(Entry)) {
        let base = *vertices
            .iter()
            .min_by_key(|&&v| self.adj[v].len())
            .expect("nonempty simplex");
        let mut buf = Vec::with_capacity(vertices.len() + 1);
        'outer: for &(w, ew) in &self.adj[base] {
            let mut val = value.max(ew);
            for &v in vertices {
                if v == base {
                    continue;
                }
                if v == w {
                    continue 'outer;
                }
                match self.edge_value(v, w) {
                    Some(e) => val = val.max(e),
                    None => continue 'outer,
                }
            }
            buf.clear();
            buf.extend_from_slice(vertices);
            let pos = buf.partition_point(|&v| v < w);
            buf.insert(pos, w);
            f(Entry {
                value: val,
                index: self.index(&buf),
            });
        }
    }

    /// All simplices of dimension `dim` (>= 1), by clique expansion.
    fn simplices(&self, dim: usize) -> Result<Vec<Entry>> {
        let mut out = Vec::new();
        let mut clique = Vec::with_capacity(dim + 1);
        for v in 0..self.n {
            if !self.alive[v] {
                continue;
            }
            clique.clear();
            clique.push(v);
            self.expand(&mut clique, self.vertex_value[v], dim, &mut out)?;
        }
        Ok(out)
    }

    fn expand(&self, clique: &mut Vec<usize>, value: f64, dim: usize, out: &mut Vec<Entry>) -> Result<()> {
        if clique.len() == dim + 1 {
            out.push(Entry {
                value,
                index: self.index(clique),
            });
            if out.len() > MAX_COLUMNS {
                return Err(Error::Capacity(format!(
                    "more than {MAX_COLUMNS} simplices of dimension {dim}; lower max_value or max_dim"
                )));
            }
            return Ok(());
        }
        let last = *clique.last().unwrap();
        for &(w, e) in &self.adj[last] {
            if w <= last {
                continue;
            }
            let mut val = value.max(e);
            let mut ok = true;
            for &v in &clique[..clique.len() - 1] {
                match self.edge_value(v, w) {
                    Some(x) => val = val.max(x),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                clique.push(w);
                self.expand(clique, val, dim, out)?;
                clique.pop();
            }
        }
        Ok(())
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Pops cancelling duplicates and returns the pivot, leaving it in the heap.
fn pivot(heap: &mut BinaryHeap<Earliest>) -> Option<Entry> {
    while let Some(top) = heap.pop() {
        match heap.peek() {
            Some(next) if next.0.index == top.0.index => {
                heap.pop();
            }
            _ => {
                heap.push(top);
                return Some(top.0);
            }
        }
    }
    None
}

/// Barcode of a flag filtration in dimensions `< homology_dims`.
pub(crate) fn flag_persistence(values: FlagValues, homology_dims: usize, threshold: f64) -> Result<PersistenceDiagram> {
    let cx = Complex::new(values, threshold, homology_dims + 1)?;
    let mut diagram = PersistenceDiagram::new();

    // dimension 0: union-find with the elder rule
    let mut edges: Vec<(Entry, usize, usize)> = Vec::new();
    for (i, row) in cx.adj.iter().enumerate() {
        for &(j, v) in row {
            if i < j {
                edges.push((
                    Entry {
                        value: v,
                        index: cx.index(&[i, j]),
                    },
                    i,
                    j,
                ));
            }
        }
    }
    edges.sort_by(|a, b| filtration_cmp(&a.0, &b.0));
    let mut parent: Vec<usize> = (0..cx.n).collect();
    let mut birth = cx.vertex_value.clone();
    let mut columns: Vec<Entry> = Vec::new();
    for &(e, i, j) in &edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            columns.push(e);
            continue;
        }
        let (old, young) = if birth[ri] <= birth[rj] { (ri, rj) } else { (rj, ri) };
        if e.value > birth[young] {
            diagram.push(0, birth[young], e.value);
        }
        parent[young] = old;
        birth[old] = birth[old].min(birth[young]);
    }
    for v in 0..cx.n {
        if cx.alive[v] && find(&mut parent, v) == v {
            diagram.push(0, birth[v], f64::INFINITY);
        }
    }
    drop(edges);

    let mut scratch = Vec::new();
    for dim in 1..homology_dims {
        columns.sort_by(|a, b| filtration_cmp(b, a));
        let mut pivot_column: HashMap<u64, usize> = HashMap::new();
        let mut reduction: Vec<Vec<Entry>> = Vec::with_capacity(columns.len());
        let mut heap = BinaryHeap::new();
        for (ci, &sigma) in columns.iter().enumerate() {
            heap.clear();
            let mut v_col = vec![sigma];
            cx.vertices(sigma.index, dim, &mut scratch);
            cx.for_each_cofacet(&scratch, sigma.value, |e| heap.push(Earliest(e)));
            loop {
                match pivot(&mut heap) {
                    None => {
                        diagram.push(dim, sigma.value, f64::INFINITY);
                        reduction.push(Vec::new());
                        break;
                    }
                    Some(tau) => match pivot_column.get(&tau.index) {
                        Some(&j) => {
                            for &s in &reduction[j] {
                                v_col.push(s);
                                cx.vertices(s.index, dim, &mut scratch);
                                cx.for_each_cofacet(&scratch, s.value, |e| heap.push(Earliest(e)));
                            }
                        }
                        None => {
                            if tau.value > sigma.value {
                                diagram.push(dim, sigma.value, tau.value);
                            }
                            pivot_column.insert(tau.index, ci);
                            v_col.sort_by_key(|e| e.index);
                            let mut compact: Vec<Entry> = Vec::with_capacity(v_col.len());
                            for e in v_col.drain(..) {
                                if compact.last().is_some_and(|l| l.index == e.index) {
                                    compact.pop();
                                } else {
                                    compact.push(e);
                                }
                            }
                            reduction.push(compact);
                            break;
                        }
                    },
                }
            }
        }
        if dim + 1 < homology_dims {
            columns = cx
                .simplices(dim + 1)?
                .into_iter()
                .filter(|e| !pivot_column.contains_key(&e.index))
                .collect();
        }
    }
    Ok(diagram.finish())
}
