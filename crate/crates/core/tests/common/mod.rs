//! Brute-force oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use lifthom_core::persistence::{Filtration, PersistenceDiagram, Simplex};
use lifthom_core::{linalg, EmpiricalMeasure, PointCloud};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn sorted(d: &PersistenceDiagram) -> Vec<(usize, f64, f64)> {
    let mut v: Vec<_> = d.bars().iter().map(|b| (b.dim, b.birth, b.death)).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Random weighted measure on `[-1, 1]^dim`.
pub fn random_measure(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> EmpiricalMeasure {
    let coords = (0..n * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let raw = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
    EmpiricalMeasure::normalized(PointCloud::new(dim, coords).unwrap(), raw).unwrap()
}

// DTM by integrating the quantile function.

/// `delta_t(x) = inf { r : mu(closed ball(x, r)) > t }`, read off the ball masses
/// at the candidate radii.
fn delta(mu: &EmpiricalMeasure, x: &[f64], t: f64) -> f64 {
    let mut radii: Vec<f64> = mu
        .points()
        .iter()
        .map(|y| x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    for r in radii {
        let mass: f64 = mu
            .points()
            .iter()
            .zip(mu.weights())
            .filter(|(y, _)| x.iter().zip(y.iter()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() <= r)
            .map(|(_, w)| w)
            .sum();
        if mass > t {
            return r;
        }
    }
    f64::INFINITY
}

/// Integrates the step function `t -> delta_t^2` on `[a, b]` by bisecting until both
/// ends agree; jumps end up in intervals of width below `tol`.
fn integrate(mu: &EmpiricalMeasure, x: &[f64], a: f64, b: f64, da: f64, db: f64, tol: f64) -> f64 {
    if da == db || b - a < tol {
        return da * da * (b - a);
    }
    let mid = 0.5 * (a + b);
    let dm = delta(mu, x, mid);
    integrate(mu, x, a, mid, da, dm, tol) + integrate(mu, x, mid, b, dm, db, tol)
}

pub fn oracle_dtm(mu: &EmpiricalMeasure, m: f64, x: &[f64]) -> f64 {
    // the right end is sampled just inside, since delta is right-continuous
    let b = m * (1.0 - 1e-15);
    let integral = integrate(mu, x, 0.0, m, delta(mu, x, 0.0), delta(mu, x, b), 1e-15);
    (integral / m).sqrt()
}

// Rank-function oracle.

type Bits = u128;

/// Row-echelon insertion over Z2; returns true if `v` was independent.
fn insert(basis: &mut Vec<Bits>, mut v: Bits) -> bool {
    for &b in basis.iter() {
        let top = 127 - b.leading_zeros();
        if v >> top & 1 == 1 {
            v ^= b;
        }
    }
    if v == 0 {
        return false;
    }
    let top = 127 - v.leading_zeros();
    for b in basis.iter_mut() {
        if *b >> top & 1 == 1 {
            *b ^= v;
        }
    }
    basis.push(v);
    basis.sort_unstable_by(|a, b| b.cmp(a));
    true
}

/// Persistent Betti numbers `beta_k^{s,t}` of `K_s -> K_t` via
/// `dim(Z_k(K_s) + B_k(K_t)) - dim B_k(K_t)`.
pub struct RankOracle<'a> {
    filt: &'a Filtration,
    levels: Vec<f64>,
}

impl<'a> RankOracle<'a> {
    pub fn new(filt: &'a Filtration) -> Self {
        let mut levels: Vec<f64> = filt.simplices().iter().map(|s| s.value()).collect();
        levels.dedup();
        Self { filt, levels }
    }

    fn local(&self, dim: usize, level: f64) -> Vec<&'a Simplex> {
        self.filt
            .simplices()
            .iter()
            .filter(|s| s.dim() == dim && s.value() <= level)
            .collect()
    }

    fn boundary(face_index: &[&Simplex], s: &Simplex) -> Bits {
        let mut v = 0;
        for f in s.facets() {
            let k = face_index.iter().position(|x| x.vertices() == f.as_slice()).unwrap();
            v |= 1 << k;
        }
        v
    }

    fn beta(&self, dim: usize, s: usize, t: usize) -> usize {
        let all_k = self.local(dim, f64::INFINITY);
        assert!(all_k.len() <= 128);
        // cycles of K_s, as vectors over all k-simplices
        let ks = self.local(dim, self.levels[s]);
        let mut cycles = Vec::new();
        if dim == 0 {
            for x in &ks {
                cycles.push(1 << all_k.iter().position(|y| y == x).unwrap());
            }
        } else {
            let faces = self.local(dim - 1, f64::INFINITY);
            // track combinations: (boundary, chain)
            let mut pivots: Vec<(Bits, Bits)> = Vec::new();
            for x in &ks {
                let mut b = Self::boundary(&faces, x);
                let mut c: Bits = 1 << all_k.iter().position(|y| y == x).unwrap();
                loop {
                    if b == 0 {
                        cycles.push(c);
                        break;
                    }
                    let top = 127 - b.leading_zeros();
                    match pivots.iter().find(|(pb, _)| 127 - pb.leading_zeros() == top) {
                        Some(&(pb, pc)) => {
                            b ^= pb;
                            c ^= pc;
                        }
                        None => {
                            pivots.push((b, c));
                            break;
                        }
                    }
                }
            }
        }
        let cofaces = self.local(dim + 1, self.levels[t]);
        let mut bnd = Vec::new();
        for x in &cofaces {
            insert(&mut bnd, Self::boundary(&all_k, x));
        }
        let b_rank = bnd.len();
        let mut sum = bnd;
        for c in cycles {
            insert(&mut sum, c);
        }
        sum.len() - b_rank
    }

    pub fn diagram(&self) -> Vec<(usize, f64, f64)> {
        let l = self.levels.len();
        let mut out = Vec::new();
        for dim in 0..self.filt.homology_dims() {
            let beta = |s: isize, t: usize| if s < 0 { 0 } else { self.beta(dim, s as usize, t) as isize };
            for i in 0..l {
                for j in i + 1..l {
                    let (ii, jj) = (i as isize, j);
                    let mu = beta(ii, jj - 1) - beta(ii, jj) - beta(ii - 1, jj - 1) + beta(ii - 1, jj);
                    assert!(mu >= 0);
                    for _ in 0..mu {
                        out.push((dim, self.levels[i], self.levels[j]));
                    }
                }
                let mu = beta(i as isize, l - 1) - beta(i as isize - 1, l - 1);
                for _ in 0..mu {
                    out.push((dim, self.levels[i], f64::INFINITY));
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }
}

/// Random simplicial complex on at most 8 vertices, up to dimension 3, with
/// monotone values drawn from a small set so that ties are common.
pub fn random_filtration(rng: &mut ChaCha8Rng) -> Filtration {
    let n = rng.gen_range(1..=8);
    let density: f64 = rng.gen_range(0.3..0.95);
    let mut simplices: Vec<Simplex> = Vec::new();
    let mut value_of = std::collections::HashMap::new();
    let draw = |rng: &mut ChaCha8Rng| rng.gen_range(0..6) as f64 * 0.5;
    for v in 0..n {
        let x = draw(rng);
        value_of.insert(vec![v], x);
        simplices.push(Simplex::new(vec![v], x).unwrap());
    }
    for k in 2..=4usize {
        let mut combo: Vec<usize> = (0..k).collect();
        if k > n {
            break;
        }
        loop {
            let faces: Vec<Vec<usize>> = (0..k)
                .map(|s| combo.iter().enumerate().filter(|&(i, _)| i != s).map(|(_, &v)| v).collect())
                .collect();
            if faces.iter().all(|f| value_of.contains_key(f)) && rng.gen_bool(density) {
                let floor = faces.iter().map(|f| value_of[f]).fold(0.0, f64::max);
                let x = floor.max(draw(rng));
                value_of.insert(combo.clone(), x);
                simplices.push(Simplex::new(combo.clone(), x).unwrap());
            }
            // next combination
            let mut i = k;
            while i > 0 && combo[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            combo[i - 1] += 1;
            for j in i..k {
                combo[j] = combo[j - 1] + 1;
            }
        }
    }
    Filtration::new(simplices, 3).unwrap()
}

// Optimal transport between uniform measures of equal size, by enumeration.

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn permutation_wasserstein(x: &PointCloud, y: &PointCloud, p: f64) -> f64 {
    let n = x.len();
    permutations(n)
        .iter()
        .map(|s| (0..n).map(|i| linalg::dist(x.point(i), y.point(s[i])).powf(p)).sum::<f64>() / n as f64)
        .fold(f64::INFINITY, f64::min)
        .powf(1.0 / p)
}
