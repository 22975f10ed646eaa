//! Sampling according to the d-dimensional Hausdorff measure of a shape.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

use super::cloud::PointCloud;
use super::shapes::ParametricShape;
use crate::error::{Error, Result};

/// Name of the seeded generator behind every sampling routine.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3, ChaCha8Rng::seed_from_u64)";

const CELLS_PER_PIECE: usize = 1 << 14;
const GRID_FOR_MAX_DENSITY: usize = 256;

// 5-point Gauss-Legendre on [-1, 1]
const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

#[derive(Debug, Clone, Copy)]
struct Cell {
    t0: f64,
    t1: f64,
    start: f64,
    length: f64,
}

/// Cumulative arc length of a curve over all its pieces, invertible by lookup.
#[derive(Debug, Clone)]
pub struct ArcLengthTable {
    cells: Vec<Cell>,
    total: f64,
}

impl ArcLengthTable {
    pub fn new(shape: &ParametricShape) -> Result<Self> {
        if shape.intrinsic_dim() != 1 {
            return Err(Error::InvalidParameter(
                "arc-length tables are only defined for curves".into(),
            ));
        }
        let mut cells = Vec::new();
        let mut acc = 0.0;
        for piece in shape.curve_pieces() {
            let h = piece.length() / CELLS_PER_PIECE as f64;
            for k in 0..CELLS_PER_PIECE {
                let t0 = piece.lo + k as f64 * h;
                let t1 = if k + 1 == CELLS_PER_PIECE { piece.hi } else { t0 + h };
                let mid = 0.5 * (t0 + t1);
                let half = 0.5 * (t1 - t0);
                let length: f64 = GL_NODES
                    .iter()
                    .zip(GL_WEIGHTS)
                    .map(|(x, w)| w * half * shape.volume_element(&[mid + half * x]))
                    .sum();
                cells.push(Cell {
                    t0,
                    t1,
                    start: acc,
                    length,
                });
                acc += length;
            }
        }
        Ok(Self { cells, total: acc })
    }

    pub fn total_length(&self) -> f64 {
        self.total
    }

    /// Parameter at arc length `s` measured from the start of the first piece.
    pub fn param_at(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.total);
        let idx = self
            .cells
            .partition_point(|c| c.start + c.length <= s)
            .min(self.cells.len() - 1);
        let c = self.cells[idx];
        let frac = if c.length > 0.0 {
            ((s - c.start) / c.length).clamp(0.0, 1.0)
        } else {
            0.0
        };
        // the last cell's right end is the periodic copy of the piece start
        let t = c.t0 + frac * (c.t1 - c.t0);
        if t >= c.t1 {
            c.t1 - f64::EPSILON * c.t1.abs().max(1.0)
        } else {
            t
        }
    }

    /// Parameter at arc-length quantile `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        self.param_at(u * self.total)
    }
}

/// Draws `n` points from the normalised Hausdorff measure on the shape.
///
/// Curves use inverse-CDF sampling of the arc length; surfaces use rejection
/// sampling against the area element. Returns the points and their
/// parameters (flat, stride `d`).
pub fn sample_uniform(shape: &ParametricShape, n: usize, seed: u64) -> Result<(PointCloud, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = shape.intrinsic_dim();
    let mut params = Vec::with_capacity(n * d);
    if d == 1 {
        let table = ArcLengthTable::new(shape)?;
        for _ in 0..n {
            let u: f64 = rng.gen();
            params.push(table.quantile(u));
        }
    } else {
        let domain = shape.domain();
        let max_density = max_volume_element(shape) * 1.1;
        let mut t = vec![0.0; d];
        while params.len() < n * d {
            for (tk, iv) in t.iter_mut().zip(&domain) {
                *tk = iv.lo + rng.gen::<f64>() * iv.length();
            }
            let accept: f64 = rng.gen();
            if accept * max_density <= shape.volume_element(&t) {
                params.extend_from_slice(&t);
            }
        }
    }
    let coords: Vec<f64> = params.chunks_exact(d).flat_map(|t| shape.eval(t)).collect();
    Ok((PointCloud::new(shape.ambient_dim(), coords)?, params))
}

/// Jittered stratified sample of a curve: one arc-length-uniform point in each
/// of `n` cells of equal length. Each point is marginally uniform on its cell,
/// and the gaps between consecutive points never exceed two cell lengths.
pub fn sample_stratified(shape: &ParametricShape, n: usize, seed: u64) -> Result<(PointCloud, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    if shape.intrinsic_dim() != 1 {
        return Err(Error::InvalidParameter(
            "stratified sampling is implemented for curves only".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let table = ArcLengthTable::new(shape)?;
    let params: Vec<f64> = (0..n)
        .map(|i| table.quantile((i as f64 + rng.gen::<f64>()) / n as f64))
        .collect();
    let coords: Vec<f64> = params.iter().flat_map(|&t| shape.eval(&[t])).collect();
    Ok((PointCloud::new(shape.ambient_dim(), coords)?, params))
}

/// `n` points uniform on the box `[lo, hi]` grown by `inflate` times its side
/// length (half on each side). The stream is independent of the shape sample
/// drawn with the same seed.
pub fn uniform_clutter(lo: &[f64], hi: &[f64], inflate: f64, n: usize, seed: u64) -> Result<PointCloud> {
    if lo.len() != hi.len() {
        return Err(Error::DimensionMismatch {
            expected: lo.len(),
            found: hi.len(),
        });
    }
    if !(inflate >= 0.0) || lo.iter().zip(hi).any(|(a, b)| !(a <= b)) {
        return Err(Error::InvalidParameter("clutter box must satisfy lo <= hi and inflate >= 0".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let bounds: Vec<(f64, f64)> = lo
        .iter()
        .zip(hi)
        .map(|(&a, &b)| {
            let pad = 0.5 * inflate * (b - a);
            (a - pad, b + pad)
        })
        .collect();
    let coords = (0..n)
        .flat_map(|_| bounds.iter().map(|&(a, b)| a + rng.gen::<f64>() * (b - a)).collect::<Vec<_>>())
        .collect();
    PointCloud::new(lo.len(), coords)
}

/// How a random sample of the shape is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingScheme {
    /// Independent draws, see [`sample_uniform`].
    #[default]
    Iid,
    /// One draw per equal-length cell, see [`sample_stratified`].
    Stratified,
}

impl SamplingScheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            SamplingScheme::Iid => "iid",
            SamplingScheme::Stratified => "stratified",
        }
    }

    pub fn sample(&self, shape: &ParametricShape, n: usize, seed: u64) -> Result<(PointCloud, Vec<f64>)> {
        match self {
            SamplingScheme::Iid => sample_uniform(shape, n, seed),
            SamplingScheme::Stratified => sample_stratified(shape, n, seed),
        }
    }
}

impl FromStr for SamplingScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iid" => Ok(SamplingScheme::Iid),
            "stratified" => Ok(SamplingScheme::Stratified),
            other => Err(Error::InvalidParameter(format!(
                "unknown sampling scheme '{other}' (expected iid or stratified)"
            ))),
        }
    }
}

fn max_volume_element(shape: &ParametricShape) -> f64 {
    let domain = shape.domain();
    let g = GRID_FOR_MAX_DENSITY;
    let mut best = 0.0f64;
    let mut idx = vec![0usize; domain.len()];
    loop {
        let t: Vec<f64> = idx
            .iter()
            .zip(&domain)
            .map(|(&i, iv)| iv.lo + (i as f64 + 0.5) / g as f64 * iv.length())
            .collect();
        best = best.max(shape.volume_element(&t));
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < g {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Deterministic quadrature of the normalised Hausdorff measure: parameters
/// (flat, stride `d`) and weights summing to one.
///
/// Curves use `n` equal-weight points at arc-length quantiles `(i + 1/2) / n`;
/// surfaces use a midpoint grid of at least `n` cells weighted by the area element.
pub fn reference_grid(shape: &ParametricShape, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("reference size must be at least 1".into()));
    }
    match shape.intrinsic_dim() {
        1 => {
            let table = ArcLengthTable::new(shape)?;
            let params = (0..n).map(|i| table.quantile((i as f64 + 0.5) / n as f64)).collect();
            Ok((params, vec![1.0 / n as f64; n]))
        }
        2 => {
            let domain = shape.domain();
            let n1 = (n as f64).sqrt().ceil() as usize;
            let n2 = n.div_ceil(n1);
            let mut params = Vec::with_capacity(2 * n1 * n2);
            let mut weights = Vec::with_capacity(n1 * n2);
            for i in 0..n1 {
                for j in 0..n2 {
                    let t = [
                        domain[0].lo + (i as f64 + 0.5) / n1 as f64 * domain[0].length(),
                        domain[1].lo + (j as f64 + 0.5) / n2 as f64 * domain[1].length(),
                    ];
                    weights.push(shape.volume_element(&t));
                    params.extend_from_slice(&t);
                }
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            Ok((params, weights))
        }
        d => Err(Error::InvalidParameter(format!(
            "reference grids are implemented for d <= 2, got d = {d}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_length_is_two_pi_r() {
        let t = ArcLengthTable::new(&ParametricShape::circle(2.0)).unwrap();
        assert!((t.total_length() - 4.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn single_sample_lies_on_the_shape() {
        let circle = ParametricShape::circle(1.0);
        let (pts, params) = sample_uniform(&circle, 1, 99).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(params.len(), 1);
        let p = pts.point(0);
        assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-14);
        assert!(sample_uniform(&circle, 0, 1).is_err());
    }

    #[test]
    fn circle_sample_mean_is_near_origin() {
        let (pts, _) = sample_uniform(&ParametricShape::circle(1.0), 10_000, 5).unwrap();
        for k in 0..2 {
            let mean: f64 = pts.iter().map(|p| p[k]).sum::<f64>() / pts.len() as f64;
            assert!(mean.abs() < 0.05, "coordinate {k}: {mean}");
        }
    }

    #[test]
    fn lemniscate_sample_is_balanced_between_lobes() {
        let (pts, _) = sample_uniform(&ParametricShape::lemniscate(), 100_000, 17).unwrap();
        let right = pts.iter().filter(|p| p[0] > 0.0).count() as f64 / pts.len() as f64;
        assert!((0.49..=0.51).contains(&right), "{right}");
    }

    #[test]
    fn sampling_is_reproducible() {
        let torus = ParametricShape::figure_eight_torus();
        let a = sample_uniform(&torus, 300, 42).unwrap();
        let b = sample_uniform(&torus, 300, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_uniform(&torus, 300, 43).unwrap();
        assert_ne!(a.1, c.1);
    }

    #[test]
    fn torus_rejection_sampling_follows_area_element() {
        // compare the fraction of samples with phi in [0, pi) against the
        // quadrature of the area element
        let torus = ParametricShape::figure_eight_torus();
        let (_, params) = sample_uniform(&torus, 40_000, 3).unwrap();
        let frac = params.chunks_exact(2).filter(|t| t[0] < PI).count() as f64 / 40_000.0;
        let (gp, gw) = reference_grid(&torus, 10_000).unwrap();
        let expected: f64 = gp
            .chunks_exact(2)
            .zip(&gw)
            .filter(|(t, _)| t[0] < PI)
            .map(|(_, w)| w)
            .sum();
        assert!((frac - expected).abs() < 0.0125, "{frac} vs {expected}");
    }

    #[test]
    fn reference_grid_weights_sum_to_one() {
        let (p, w) = reference_grid(&ParametricShape::lemniscate(), 2000).unwrap();
        assert_eq!(p.len(), 2000);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let (p, w) = reference_grid(&ParametricShape::figure_eight_torus(), 8000).unwrap();
        assert_eq!(p.len(), 2 * w.len());
        assert!(w.len() >= 8000);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn five_circles_pieces_get_equal_mass() {
        let (_, params) = sample_uniform(&ParametricShape::five_circles(), 50_000, 8).unwrap();
        for k in 0..5 {
            let lo = k as f64 * 2.0 * PI;
            let count = params.iter().filter(|&&t| t >= lo && t < lo + 2.0 * PI).count();
            let frac = count as f64 / 50_000.0;
            assert!((frac - 0.2).abs() < 0.01, "piece {k}: {frac}");
        }
    }

    #[test]
    fn stratified_sample_has_one_point_per_cell() {
        let lem = ParametricShape::lemniscate();
        let table = ArcLengthTable::new(&lem).unwrap();
        let n = 50;
        let (pts, params) = sample_stratified(&lem, n, 3).unwrap();
        assert_eq!(pts.len(), n);
        // arc-length position of each parameter, via bisection on the table
        for (i, &t) in params.iter().enumerate() {
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if table.quantile(mid) <= t {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let cell = (lo * n as f64).floor() as usize;
            assert!(cell == i || (lo * n as f64 - i as f64).abs() < 1e-6, "{i}: {lo}");
        }
        assert_eq!(sample_stratified(&lem, n, 3).unwrap().1, params);
        assert!(sample_stratified(&ParametricShape::figure_eight_torus(), 5, 0).is_err());
        assert_eq!("stratified".parse::<SamplingScheme>().unwrap(), SamplingScheme::Stratified);
        assert!("grid".parse::<SamplingScheme>().is_err());
    }

    #[test]
    fn clutter_fills_the_inflated_box() {
        let c = uniform_clutter(&[0.0, -1.0], &[2.0, 1.0], 0.1, 2000, 4).unwrap();
        let (lo, hi) = c.bounding_box().unwrap();
        assert!(lo[0] >= -0.1 && hi[0] <= 2.1 && lo[1] >= -1.1 && hi[1] <= 1.1);
        assert!(lo[0] < 0.0 && hi[0] > 2.0);
        assert_eq!(c, uniform_clutter(&[0.0, -1.0], &[2.0, 1.0], 0.1, 2000, 4).unwrap());
        assert!(uniform_clutter(&[1.0], &[0.0], 0.1, 3, 0).is_err());
        assert_eq!(uniform_clutter(&[0.0], &[1.0], 0.1, 0, 0).unwrap().len(), 0);
    }
}