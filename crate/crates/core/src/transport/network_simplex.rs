//! Primal network simplex for the balanced transportation problem.
//!
//! The spanning-tree bookkeeping (thread / reverse-thread lists, successor
//! counts, last successors) follows the LEMON `NetworkSimplex` design with a
//! block-search pivot rule. Sources are nodes `0..m`, sinks `m..m+n`, and the
//! complete bipartite arc set is implicit: arc `a` goes from `a / n` to
//! `m + a % n`. Every node also owns an artificial arc to the root.
//!
//! Arcs are uncapacitated, so a non-tree arc always carries zero flow. Flow is
//! therefore stored per tree node (on the arc to its parent) and costs are
//! evaluated lazily: memory is linear in the number of nodes.

use rayon::prelude::*;

use crate::error::{Error, Result};

const DIR_UP: i8 = 1;
const DIR_DOWN: i8 = -1;
const NONE: usize = usize::MAX;

/// Reduced-cost tolerance for entering arcs, relative to the largest cost.
pub const PIVOT_TOLERANCE: f64 = 1e-12;
/// Largest residual mass allowed on artificial arcs at the optimum.
const FEASIBILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Solution {
    /// `(source, sink, mass)` for every arc carrying positive flow.
    pub flows: Vec<(usize, usize, f64)>,
    pub cost: f64,
}

/// Minimises `sum_ij f_ij c_ij` subject to row sums `supply` and column sums
/// `demand`. `cost` is row-major `m x n`.
pub fn solve(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<Solution> {
    let n = demand.len();
    if cost.len() != supply.len() * n {
        return Err(Error::LengthMismatch {
            left: supply.len() * n,
            right: cost.len(),
        });
    }
    solve_with(supply, demand, |i, j| cost[i * n + j])
}

/// Same as [`solve`] with the cost of arc `(i, j)` given by a function.
pub fn solve_with<C>(supply: &[f64], demand: &[f64], cost: C) -> Result<Solution>
where
    C: Fn(usize, usize) -> f64 + Sync,
{
    let (m, n) = (supply.len(), demand.len());
    if m == 0 || n == 0 {
        return Err(Error::EmptyCloud);
    }
    let mut solver = Solver::new(supply, demand, cost);
    solver.run()?;
    Ok(solver.solution())
}

struct Solver<C> {
    m: usize,
    n: usize,
    node_num: usize,
    arc_num: usize,
    cost: C,
    art_cost: Vec<f64>,
    art_source: Vec<usize>,
    art_target: Vec<usize>,

    pi: Vec<f64>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    thread: Vec<usize>,
    rev_thread: Vec<usize>,
    succ_num: Vec<usize>,
    last_succ: Vec<usize>,
    pred_dir: Vec<i8>,
    /// Flow on the tree arc `pred[u]`.
    pred_flow: Vec<f64>,
    dirty_revs: Vec<usize>,

    in_arc: usize,
    join: usize,
    u_in: usize,
    v_in: usize,
    u_out: usize,
    delta: f64,

    next_arc: usize,
    block_size: usize,
    eps: f64,
}

impl<C: Fn(usize, usize) -> f64 + Sync> Solver<C> {
    fn new(supply: &[f64], demand: &[f64], cost: C) -> Self {
        let (m, n) = (supply.len(), demand.len());
        let node_num = m + n;
        let arc_num = m * n;
        let root = node_num;

        let max_cost = (0..m)
            .into_par_iter()
            .map(|i| (0..n).fold(0.0f64, |acc, j| acc.max(cost(i, j).abs())))
            .reduce(|| 0.0, f64::max);
        let art = (max_cost + 1.0) * node_num as f64;

        let mut s = Self {
            m,
            n,
            node_num,
            arc_num,
            cost,
            art_cost: vec![0.0; node_num],
            art_source: vec![0; node_num],
            art_target: vec![0; node_num],
            pi: vec![0.0; node_num + 1],
            parent: vec![NONE; node_num + 1],
            pred: vec![NONE; node_num + 1],
            thread: vec![0; node_num + 1],
            rev_thread: vec![0; node_num + 1],
            succ_num: vec![1; node_num + 1],
            last_succ: vec![0; node_num + 1],
            pred_dir: vec![DIR_UP; node_num + 1],
            pred_flow: vec![0.0; node_num + 1],
            dirty_revs: Vec::new(),
            in_arc: 0,
            join: 0,
            u_in: 0,
            v_in: 0,
            u_out: 0,
            delta: 0.0,
            next_arc: 0,
            block_size: ((arc_num as f64).sqrt().ceil() as usize).max(10),
            // potentials reach the artificial cost scale, so rounding noise
            // in reduced costs grows with `art`
            eps: (PIVOT_TOLERANCE * (max_cost + 1.0)).max(32.0 * f64::EPSILON * art),
        };

        s.thread[root] = 0;
        s.rev_thread[0] = root;
        s.succ_num[root] = node_num + 1;
        s.last_succ[root] = root - 1;
        s.pi[root] = 0.0;

        for u in 0..node_num {
            let e = arc_num + u;
            s.parent[u] = root;
            s.pred[u] = e;
            s.thread[u] = u + 1;
            s.rev_thread[u + 1] = u;
            s.succ_num[u] = 1;
            s.last_succ[u] = u;
            let b = if u < m { supply[u] } else { -demand[u - m] };
            if b >= 0.0 {
                s.pred_dir[u] = DIR_UP;
                s.pi[u] = 0.0;
                s.art_source[u] = u;
                s.art_target[u] = root;
                s.pred_flow[u] = b;
                s.art_cost[u] = 0.0;
            } else {
                s.pred_dir[u] = DIR_DOWN;
                s.pi[u] = art;
                s.art_source[u] = root;
                s.art_target[u] = u;
                s.pred_flow[u] = -b;
                s.art_cost[u] = art;
            }
        }
        s
    }

    #[inline]
    fn source(&self, a: usize) -> usize {
        if a < self.arc_num {
            a / self.n
        } else {
            self.art_source[a - self.arc_num]
        }
    }

    #[inline]
    fn target(&self, a: usize) -> usize {
        if a < self.arc_num {
            self.m + a % self.n
        } else {
            self.art_target[a - self.arc_num]
        }
    }

    #[inline]
    fn arc_cost(&self, a: usize) -> f64 {
        if a < self.arc_num {
            (self.cost)(a / self.n, a % self.n)
        } else {
            self.art_cost[a - self.arc_num]
        }
    }

    /// Reduced cost of a real arc. Tree arcs sit at zero up to rounding.
    #[inline]
    fn reduced(&self, a: usize) -> f64 {
        let (i, j) = (a / self.n, a % self.n);
        (self.cost)(i, j) + self.pi[i] - self.pi[self.m + j]
    }

    fn find_entering_arc(&mut self) -> bool {
        let mut min = 0.0;
        let mut cnt = self.block_size;
        let mut e = self.next_arc;
        let mut found = false;
        for _ in 0..self.arc_num {
            let c = self.reduced(e);
            if c < min {
                min = c;
                self.in_arc = e;
            }
            e += 1;
            if e == self.arc_num {
                e = 0;
            }
            cnt -= 1;
            if cnt == 0 {
                if min < -self.eps {
                    found = true;
                    break;
                }
                cnt = self.block_size;
            }
        }
        if !found && min >= -self.eps {
            return false;
        }
        self.next_arc = e;
        true
    }

    fn find_join_node(&mut self) {
        let mut u = self.source(self.in_arc);
        let mut v = self.target(self.in_arc);
        while u != v {
            if self.succ_num[u] < self.succ_num[v] {
                u = self.parent[u];
            } else {
                v = self.parent[v];
            }
        }
        self.join = u;
    }

    /// Returns false when the cycle is unbounded (cannot happen for balanced
    /// transportation problems).
    fn find_leaving_arc(&mut self) -> bool {
        let first = self.source(self.in_arc);
        let second = self.target(self.in_arc);
        self.delta = f64::INFINITY;
        let mut result = 0;

        let mut u = first;
        while u != self.join {
            if self.pred_dir[u] == DIR_UP {
                let d = self.pred_flow[u];
                if d < self.delta {
                    self.delta = d;
                    self.u_out = u;
                    result = 1;
                }
            }
            u = self.parent[u];
        }
        let mut u = second;
        while u != self.join {
            if self.pred_dir[u] == DIR_DOWN {
                let d = self.pred_flow[u];
                if d <= self.delta {
                    self.delta = d;
                    self.u_out = u;
                    result = 2;
                }
            }
            u = self.parent[u];
        }
        if result == 1 {
            self.u_in = first;
            self.v_in = second;
        } else {
            self.u_in = second;
            self.v_in = first;
        }
        result != 0
    }

    fn change_flow(&mut self) {
        self.delta = self.delta.max(0.0);
        let val = self.delta;
        if val > 0.0 {
            let mut u = self.source(self.in_arc);
            while u != self.join {
                self.pred_flow[u] -= self.pred_dir[u] as f64 * val;
                u = self.parent[u];
            }
            let mut u = self.target(self.in_arc);
            while u != self.join {
                self.pred_flow[u] += self.pred_dir[u] as f64 * val;
                u = self.parent[u];
            }
        }
    }

    fn update_tree_structure(&mut self) {
        let u_in = self.u_in;
        let v_in = self.v_in;
        let u_out = self.u_out;
        let join = self.join;
        let in_arc = self.in_arc;

        let old_rev_thread = self.rev_thread[u_out];
        let old_succ_num = self.succ_num[u_out];
        let old_last_succ = self.last_succ[u_out];
        let v_out = self.parent[u_out];

        if u_in == u_out {
            self.parent[u_in] = v_in;
            self.pred[u_in] = in_arc;
            self.pred_flow[u_in] = self.delta;
            self.pred_dir[u_in] = if u_in == self.source(in_arc) { DIR_UP } else { DIR_DOWN };

            if self.thread[v_in] != u_out {
                let mut after = self.thread[old_last_succ];
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
                after = self.thread[v_in];
                self.thread[v_in] = u_out;
                self.rev_thread[u_out] = v_in;
                self.thread[old_last_succ] = after;
                self.rev_thread[after] = old_last_succ;
            }
        } else {
            let thread_continue = if old_rev_thread == v_in {
                self.thread[old_last_succ]
            } else {
                self.thread[v_in]
            };

            let mut stem = u_in;
            let mut par_stem = v_in;
            let mut last = self.last_succ[u_in];
            let mut after = self.thread[last];
            self.thread[v_in] = u_in;
            self.dirty_revs.clear();
            self.dirty_revs.push(v_in);
            while stem != u_out {
                let next_stem = self.parent[stem];
                self.thread[last] = next_stem;
                self.dirty_revs.push(last);

                let before = self.rev_thread[stem];
                self.thread[before] = after;
                self.rev_thread[after] = before;

                self.parent[stem] = par_stem;
                par_stem = stem;
                stem = next_stem;

                last = if self.last_succ[stem] == self.last_succ[par_stem] {
                    self.rev_thread[par_stem]
                } else {
                    self.last_succ[stem]
                };
                after = self.thread[last];
            }
            self.parent[u_out] = par_stem;
            self.thread[last] = thread_continue;
            self.rev_thread[thread_continue] = last;
            self.last_succ[u_out] = last;

            if old_rev_thread != v_in {
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
            }

            for i in 0..self.dirty_revs.len() {
                let u = self.dirty_revs[i];
                let t = self.thread[u];
                self.rev_thread[t] = u;
            }

            let mut tmp_sc = 0usize;
            let tmp_ls = self.last_succ[u_out];
            let mut u = u_out;
            while u != u_in {
                let p = self.parent[u];
                self.pred[u] = self.pred[p];
                self.pred_flow[u] = self.pred_flow[p];
                self.pred_dir[u] = -self.pred_dir[p];
                tmp_sc = tmp_sc + self.succ_num[u] - self.succ_num[p];
                self.succ_num[u] = tmp_sc;
                self.last_succ[p] = tmp_ls;
                u = p;
            }
            self.pred[u_in] = in_arc;
            self.pred_flow[u_in] = self.delta;
            self.pred_dir[u_in] = if u_in == self.source(in_arc) { DIR_UP } else { DIR_DOWN };
            self.succ_num[u_in] = old_succ_num;
        }

        let up_limit_out = if self.last_succ[join] == v_in { join } else { NONE };
        let last_succ_out = self.last_succ[u_out];
        let mut u = v_in;
        while u != NONE && self.last_succ[u] == v_in {
            self.last_succ[u] = last_succ_out;
            u = self.parent[u];
        }

        if join != old_rev_thread && v_in != old_rev_thread {
            let mut u = v_out;
            while u != up_limit_out && u != NONE && self.last_succ[u] == old_last_succ {
                self.last_succ[u] = old_rev_thread;
                u = self.parent[u];
            }
        } else if last_succ_out != old_last_succ {
            let mut u = v_out;
            while u != up_limit_out && u != NONE && self.last_succ[u] == old_last_succ {
                self.last_succ[u] = last_succ_out;
                u = self.parent[u];
            }
        }

        let mut u = v_in;
        while u != join {
            self.succ_num[u] += old_succ_num;
            u = self.parent[u];
        }
        let mut u = v_out;
        while u != join {
            self.succ_num[u] -= old_succ_num;
            u = self.parent[u];
        }
    }

    fn update_potential(&mut self) {
        let u_in = self.u_in;
        let sigma = self.pi[self.v_in] - self.pi[u_in]
            - self.pred_dir[u_in] as f64 * self.arc_cost(self.in_arc);
        let end = self.thread[self.last_succ[u_in]];
        let mut u = u_in;
        while u != end {
            self.pi[u] += sigma;
            u = self.thread[u];
        }
    }

    fn run(&mut self) -> Result<()> {
        while self.find_entering_arc() {
            self.find_join_node();
            if !self.find_leaving_arc() || !self.delta.is_finite() {
                return Err(Error::InvalidParameter("transport problem is unbounded".into()));
            }
            self.change_flow();
            self.update_tree_structure();
            self.update_potential();
        }
        let residual: f64 = (0..self.node_num)
            .filter(|&u| self.pred[u] >= self.arc_num)
            .map(|u| self.pred_flow[u].max(0.0))
            .sum();
        if residual > FEASIBILITY_TOLERANCE {
            return Err(Error::InvalidWeights(format!(
                "supplies and demands do not balance (residual {residual})"
            )));
        }
        Ok(())
    }

    fn solution(&self) -> Solution {
        let mut flows = Vec::new();
        let mut cost = 0.0;
        for u in 0..self.node_num {
            let a = self.pred[u];
            let f = self.pred_flow[u];
            if a < self.arc_num && f > 0.0 {
                let (i, j) = (a / self.n, a % self.n);
                flows.push((i, j, f));
                cost += f * (self.cost)(i, j);
            }
        }
        flows.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        Solution { flows, cost }
    }
}
