//! Normal reach of immersed curves.
//!
//! For a base parameter `t0` with image `x`, the normal reach is the smallest
//! distance `|x - y|` over the other parameters `s` whose image `y` sees `x`
//! along a normal direction, i.e. the roots of `s -> <x - u(s), u'(s)>`.

use rayon::prelude::*;

use super::sampling::ArcLengthTable;
use super::shapes::ParametricShape;
use crate::error::{Error, Result};
use crate::linalg;

pub const DEFAULT_BRACKETS: usize = 4096;
/// Roots closer than this (in parameter) to the base parameter are the base point itself.
pub const DEFAULT_EXCLUSION: f64 = 1e-6;
const BISECTION_TOL: f64 = 1e-10;
/// Image distances below this mean the base point has several preimages.
const COINCIDENCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalReachOptions {
    /// Uniform brackets per curve piece.
    pub brackets: usize,
    pub exclusion: f64,
}

impl Default for NormalReachOptions {
    fn default() -> Self {
        Self {
            brackets: DEFAULT_BRACKETS,
            exclusion: DEFAULT_EXCLUSION,
        }
    }
}

fn require_curve(shape: &ParametricShape) -> Result<()> {
    if shape.intrinsic_dim() != 1 {
        return Err(Error::InvalidParameter(format!(
            "normal reach is implemented for curves only, got d = {}",
            shape.intrinsic_dim()
        )));
    }
    Ok(())
}

/// Normal reach at `t0` with the default bracketing grid.
pub fn normal_reach(shape: &ParametricShape, t0: f64) -> Result<f64> {
    normal_reach_with(shape, t0, NormalReachOptions::default())
}

pub fn normal_reach_with(shape: &ParametricShape, t0: f64, opts: NormalReachOptions) -> Result<f64> {
    require_curve(shape)?;
    if opts.brackets < 2 {
        return Err(Error::InvalidParameter("need at least two brackets".into()));
    }
    let t0 = shape.canonical_param(&[t0])?[0];
    let x = shape.eval(&[t0]);
    let orth = |s: f64| {
        let y = shape.eval(&[s]);
        let j = shape.jacobian(&[s]);
        let diff: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        linalg::dot(&diff, j.as_slice())
    };

    let mut best: Option<f64> = None;
    for piece in shape.curve_pieces() {
        let own_piece = t0 >= piece.lo && t0 < piece.hi;
        let h = piece.length() / opts.brackets as f64;
        let knot = |k: usize| {
            if k == opts.brackets {
                piece.hi
            } else {
                piece.lo + k as f64 * h
            }
        };
        let mut a = knot(0);
        let mut ga = orth(a);
        for k in 0..opts.brackets {
            let b = knot(k + 1);
            let gb = orth(b);
            let root = if ga == 0.0 {
                Some(a)
            } else if ga * gb < 0.0 {
                Some(bisect(&orth, a, b, ga))
            } else {
                None
            };
            if let Some(s) = root {
                if !(own_piece && piece.separation(s, t0) < opts.exclusion) {
                    let d = linalg::dist(&x, &shape.eval(&[s]));
                    best = Some(best.map_or(d, |m: f64| m.min(d)));
                }
            }
            a = b;
            ga = gb;
        }
    }

    match best {
        None => Err(Error::Resolution(format!(
            "no normal critical point bracketed with {} brackets per piece; increase the grid",
            opts.brackets
        ))),
        Some(d) if d <= COINCIDENCE_TOL => Ok(0.0),
        Some(d) => Ok(d),
    }
}

fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > BISECTION_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Normal reach at `grid` arc-length-equispaced parameters `(i + 1/2) / grid`.
pub fn normal_reach_profile(shape: &ParametricShape, grid: usize) -> Result<Vec<(f64, f64)>> {
    require_curve(shape)?;
    if grid == 0 {
        return Err(Error::InvalidParameter("grid must be positive".into()));
    }
    let table = ArcLengthTable::new(shape)?;
    (0..grid)
        .into_par_iter()
        .map(|i| {
            let t = table.quantile((i as f64 + 0.5) / grid as f64);
            normal_reach(shape, t).map(|l| (t, l))
        })
        .collect()
}

/// Arc-length fraction of the curve where the normal reach is at most `r`.
pub fn normal_reach_sublevel_fraction(shape: &ParametricShape, r: f64, grid: usize) -> Result<f64> {
    let profile = normal_reach_profile(shape, grid)?;
    Ok(sublevel_fraction(&profile, r))
}

/// Fraction of a precomputed profile with normal reach at most `r`.
pub fn sublevel_fraction(profile: &[(f64, f64)], r: f64) -> f64 {
    if profile.is_empty() {
        return 0.0;
    }
    profile.iter().filter(|(_, l)| *l <= r).count() as f64 / profile.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circle_normal_reach_is_the_diameter() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for radius in [0.5, 1.0, 2.0] {
            let circle = ParametricShape::circle(radius);
            for _ in 0..100 {
                let t0 = rng.gen_range(0.0..TAU);
                let l = normal_reach(&circle, t0).unwrap();
                assert!((l - 2.0 * radius).abs() <= 1e-8, "R={radius} t0={t0}: {l}");
            }
        }
    }

    #[test]
    fn lemniscate_normal_reach_vanishes_at_the_crossing() {
        let lem = ParametricShape::lemniscate();
        assert_eq!(normal_reach(&lem, PI / 2.0).unwrap(), 0.0);
        assert_eq!(normal_reach(&lem, 3.0 * PI / 2.0).unwrap(), 0.0);
        assert!(normal_reach(&lem, PI / 2.0 + 0.05).unwrap() > 0.0);
    }

    /// Exhaustive grid scan: sign changes of the orthogonality function on a
    /// fine grid, located by linear interpolation.
    fn grid_oracle(shape: &ParametricShape, t0: f64, n: usize) -> f64 {
        let x = shape.eval(&[t0]);
        let g = |s: f64| {
            let y = shape.eval(&[s]);
            let j = shape.jacobian(&[s]);
            (x[0] - y[0]) * j[(0, 0)] + (x[1] - y[1]) * j[(1, 0)]
        };
        let h = TAU / n as f64;
        let mut best = f64::INFINITY;
        let mut prev = g(0.0);
        for k in 1..=n {
            let s1 = k as f64 * h;
            let cur = g(s1);
            if prev * cur < 0.0 {
                let s = s1 - h * cur / (cur - prev);
                let sep = (s - t0).abs().min(TAU - (s - t0).abs());
                if sep > 1e-4 {
                    best = best.min(linalg::dist(&x, &shape.eval(&[s])));
                }
            }
            prev = cur;
        }
        best
    }

    #[test]
    fn lemniscate_rightmost_point_matches_grid_oracle() {
        let lem = ParametricShape::lemniscate();
        let oracle = grid_oracle(&lem, 0.0, 1_000_000);
        let value = normal_reach(&lem, 0.0).unwrap();
        assert!(oracle.is_finite());
        assert!((value - oracle).abs() < 1e-6, "{value} vs {oracle}");
    }

    #[test]
    fn missing_critical_point_reports_resolution_error() {
        // an exclusion window wider than half the period hides the antipode
        let circle = ParametricShape::circle(1.0);
        let opts = NormalReachOptions {
            brackets: 16,
            exclusion: 4.0,
        };
        let r = normal_reach_with(&circle, 0.3, opts);
        assert!(matches!(r, Err(Error::Resolution(_))), "{r:?}");
    }

    #[test]
    fn surfaces_are_rejected() {
        assert!(normal_reach(&ParametricShape::figure_eight_torus(), 0.0).is_err());
    }

    #[test]
    fn sublevel_fraction_basics() {
        let circle = ParametricShape::circle(1.0);
        assert_eq!(normal_reach_sublevel_fraction(&circle, 0.0, 64).unwrap(), 0.0);
        assert_eq!(normal_reach_sublevel_fraction(&circle, 2.5, 64).unwrap(), 1.0);

        let lem = ParametricShape::lemniscate();
        let profile = normal_reach_profile(&lem, 800).unwrap();
        let mut prev = 0.0;
        for r in [0.0, 0.01, 0.02, 0.04, 0.08, 0.16, 0.5, 1.0, 3.0] {
            let f = sublevel_fraction(&profile, r);
            assert!(f >= prev);
            prev = f;
        }
        assert_eq!(prev, 1.0);
    }
}
