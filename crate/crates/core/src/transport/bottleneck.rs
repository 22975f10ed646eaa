//! Bottleneck distance between persistence diagrams.
//!
//! Each homology dimension is handled separately and the result is the
//! maximum. Finite bars are matched by binary search over the candidate radii
//! with a max-flow feasibility test; bars may also be sent to the diagonal at
//! cost `(death - birth) / 2`. Infinite bars can only be matched to infinite
//! bars, sorted by birth; unequal counts make the distance infinite.

use std::collections::VecDeque;

use crate::persistence::PersistenceDiagram;

/// Bottleneck distance over all homology dimensions.
pub fn bottleneck_distance(a: &PersistenceDiagram, b: &PersistenceDiagram) -> f64 {
    bottleneck_per_dim(a, b)
        .into_iter()
        .map(|(_, d)| d)
        .fold(0.0, f64::max)
}

/// `(dim, distance)` for every dimension present in either diagram.
pub fn bottleneck_per_dim(a: &PersistenceDiagram, b: &PersistenceDiagram) -> Vec<(usize, f64)> {
    let top = a.max_dim().max(b.max_dim()).map_or(0, |d| d + 1);
    (0..top)
        .map(|k| (k, bottleneck_pairs(&a.pairs(k), &b.pairs(k))))
        .collect()
}

/// Bottleneck distance between two multisets of `(birth, death)` pairs.
pub fn bottleneck_pairs(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (fin_a, mut inf_a) = split(a);
    let (fin_b, mut inf_b) = split(b);
    if inf_a.len() != inf_b.len() {
        return f64::INFINITY;
    }
    inf_a.sort_by(f64::total_cmp);
    inf_b.sort_by(f64::total_cmp);
    let essential = inf_a
        .iter()
        .zip(&inf_b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    essential.max(finite_bottleneck(&fin_a, &fin_b))
}

fn split(pairs: &[(f64, f64)]) -> (Vec<(f64, f64)>, Vec<f64>) {
    let mut fin = Vec::new();
    let mut inf = Vec::new();
    for &(b, d) in pairs {
        if d.is_infinite() {
            inf.push(b);
        } else if d > b {
            fin.push((b, d));
        }
    }
    (fin, inf)
}

fn linf(p: (f64, f64), q: (f64, f64)) -> f64 {
    (p.0 - q.0).abs().max((p.1 - q.1).abs())
}

fn half_pers(p: (f64, f64)) -> f64 {
    (p.1 - p.0) / 2.0
}

fn finite_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let mut cand: Vec<f64> = Vec::with_capacity(a.len() * b.len() + a.len() + b.len() + 1);
    cand.push(0.0);
    cand.extend(a.iter().map(|&p| half_pers(p)));
    cand.extend(b.iter().map(|&p| half_pers(p)));
    for &p in a {
        for &q in b {
            cand.push(linf(p, q));
        }
    }
    cand.sort_by(f64::total_cmp);
    cand.dedup();

    // the largest candidate is always feasible: it covers every diagonal move
    let (mut lo, mut hi) = (0usize, cand.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(a, b, cand[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cand[lo]
}

/// Is there a matching where every displacement is at most `r`?
///
/// Flow network: source -> each point of `a` and a diagonal hub `DL`;
/// `a_i -> b_j` when close, `a_i -> DR` when `a_i` is close to the diagonal,
/// `DL -> b_j` likewise, `DL -> DR` freely; `b_j` and `DR` drain to the sink.
fn feasible(a: &[(f64, f64)], b: &[(f64, f64)], r: f64) -> bool {
    let (n, m) = (a.len(), b.len());
    let src = 0;
    let dl = n + m + 1;
    let dr = n + m + 2;
    let sink = n + m + 3;
    let mut g = FlowGraph::new(n + m + 4);
    for (i, &p) in a.iter().enumerate() {
        g.add_edge(src, 1 + i, 1);
        for (j, &q) in b.iter().enumerate() {
            if linf(p, q) <= r {
                g.add_edge(1 + i, 1 + n + j, 1);
            }
        }
        if half_pers(p) <= r {
            g.add_edge(1 + i, dr, 1);
        }
    }
    g.add_edge(src, dl, m as i64);
    for (j, &q) in b.iter().enumerate() {
        if half_pers(q) <= r {
            g.add_edge(dl, 1 + n + j, 1);
        }
        g.add_edge(1 + n + j, sink, 1);
    }
    g.add_edge(dl, dr, n.min(m) as i64);
    g.add_edge(dr, sink, n as i64);
    g.max_flow(src, sink) == (n + m) as i64
}

/// Dinic's algorithm on a small integer-capacity graph.
struct FlowGraph {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    it: Vec<usize>,
}

impl FlowGraph {
    fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; n],
            it: vec![0; n],
        }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: i64) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64) -> i64 {
        if u == t {
            return f;
        }
        while self.it[u] < self.adj[u].len() {
            let e = self.adj[u][self.it[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let d = self.dfs(v, t, f.min(self.cap[e]));
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.it[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.it.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
        flow
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive search over partial matchings.
    fn brute(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
        fn rec(i: usize, a: &[(f64, f64)], b: &[(f64, f64)], used: &mut Vec<bool>, cur: f64) -> f64 {
            if i == a.len() {
                let rest = b
                    .iter()
                    .zip(used.iter())
                    .filter(|(_, &u)| !u)
                    .map(|(&q, _)| half_pers(q))
                    .fold(0.0, f64::max);
                return cur.max(rest);
            }
            let mut best = rec(i + 1, a, b, used, cur.max(half_pers(a[i])));
            for j in 0..b.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.min(rec(i + 1, a, b, used, cur.max(linf(a[i], b[j]))));
                    used[j] = false;
                }
            }
            best
        }
        rec(0, a, b, &mut vec![false; b.len()], 0.0)
    }

    #[test]
    fn small_examples() {
        let d = [(0.0, 1.0), (0.3, 0.9)];
        assert_eq!(bottleneck_pairs(&d, &d), 0.0);
        assert_eq!(bottleneck_pairs(&[(0.0, 1.0)], &[]), 0.5);
        let a = [(0.0, 2.0), (0.0, 1.0)];
        let b = [(0.1, 2.1)];
        let v = bottleneck_pairs(&a, &b);
        assert!((v - brute(&a, &b)).abs() < 1e-12);
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn infinite_bars() {
        let a = [(0.0, f64::INFINITY), (0.2, f64::INFINITY)];
        let b = [(0.5, f64::INFINITY), (0.0, f64::INFINITY)];
        assert!((bottleneck_pairs(&a, &b) - 0.3).abs() < 1e-15);
        assert_eq!(bottleneck_pairs(&a, &b[..1]), f64::INFINITY);
    }

    #[test]
    fn per_dimension_maximum() {
        let mut a = PersistenceDiagram::new();
        a.push(0, 0.0, f64::INFINITY);
        a.push(1, 1.0, 2f64.sqrt());
        let mut b = PersistenceDiagram::new();
        b.push(0, 0.0, f64::INFINITY);
        let per = bottleneck_per_dim(&a, &b);
        assert_eq!(per[0], (0, 0.0));
        assert!((per[1].1 - 0.5 * (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert_eq!(bottleneck_distance(&a, &b), per[1].1);
    }

    fn diagram(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
        prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 0..=max)
            .prop_map(|v| v.into_iter().map(|(b, l)| (b, b + l)).collect())
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(a in diagram(5), b in diagram(5)) {
            let v = bottleneck_pairs(&a, &b);
            prop_assert!((v - brute(&a, &b)).abs() <= 1e-9);
        }

        #[test]
        fn is_a_metric(a in diagram(5), b in diagram(5), c in diagram(5)) {
            let ab = bottleneck_pairs(&a, &b);
            prop_assert_eq!(ab, bottleneck_pairs(&b, &a));
            prop_assert!(ab <= bottleneck_pairs(&a, &c) + bottleneck_pairs(&c, &b) + 1e-12);
            prop_assert_eq!(bottleneck_pairs(&a, &a), 0.0);
        }
    }
}
