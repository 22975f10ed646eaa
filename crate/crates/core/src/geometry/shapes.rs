//! Parametric immersed curves and surfaces with analytic jacobians.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One factor of a product parameter domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamInterval {
    pub lo: f64,
    pub hi: f64,
    pub periodic: bool,
}

impl ParamInterval {
    pub const fn periodic(lo: f64, hi: f64) -> Self {
        Self { lo, hi, periodic: true }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Maps `t` into `[lo, hi)` for periodic intervals, leaves it untouched otherwise.
    pub fn wrap(&self, t: f64) -> f64 {
        if self.periodic {
            self.lo + (t - self.lo).rem_euclid(self.length())
        } else {
            t
        }
    }

    /// Distance between two parameters, accounting for periodicity.
    pub fn separation(&self, a: f64, b: f64) -> f64 {
        let d = (a - b).abs();
        if self.periodic {
            let l = self.length();
            let d = d.rem_euclid(l);
            d.min(l - d)
        } else {
            d
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeId {
    Circle,
    Lemniscate,
    TorusFigure8,
    FiveCircles,
    Custom,
}

impl ShapeId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ShapeId::Circle => "circle",
            ShapeId::Lemniscate => "lemniscate",
            ShapeId::TorusFigure8 => "torus_figure8",
            ShapeId::FiveCircles => "five_circles",
            ShapeId::Custom => "custom",
        }
    }
}

impl std::str::FromStr for ShapeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" => Ok(ShapeId::Circle),
            "lemniscate" => Ok(ShapeId::Lemniscate),
            "torus_figure8" => Ok(ShapeId::TorusFigure8),
            "five_circles" => Ok(ShapeId::FiveCircles),
            "custom" => Ok(ShapeId::Custom),
            other => Err(Error::InvalidParameter(format!("unknown shape `{other}`"))),
        }
    }
}

type EvalFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;
type JacobianFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;

/// A user-supplied immersion given by closures.
#[derive(Clone)]
pub struct CustomShape {
    pub intrinsic_dim: usize,
    pub ambient_dim: usize,
    pub domain: Vec<ParamInterval>,
    pub eval: Arc<EvalFn>,
    pub jacobian: Arc<JacobianFn>,
}

impl fmt::Debug for CustomShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomShape")
            .field("intrinsic_dim", &self.intrinsic_dim)
            .field("ambient_dim", &self.ambient_dim)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

/// An immersion `u: M0 -> R^n` of a compact curve or surface.
#[derive(Debug, Clone)]
pub enum ParametricShape {
    /// Circle of the given radius centred at the origin, `t in [0, 2pi)`.
    Circle { radius: f64 },
    /// Lemniscate of Bernoulli of diameter 2:
    /// `(cos t, sin t cos t) / (1 + sin^2 t)`, crossing itself at the origin
    /// for `t = pi/2` and `t = 3pi/2`.
    Lemniscate,
    /// Torus swept by a figure-eight section `a (sin th cos th, sin th)` that
    /// makes one full twist per revolution around a circle of radius `major_radius`.
    /// Parameters are `(theta, phi)`.
    FigureEightTorus { major_radius: f64, section_scale: f64 },
    /// Five circles of radius `radius` whose centres are equally spaced on a
    /// circle of radius `center_radius`. The parameter `t in [0, 10pi)`
    /// selects circle `floor(t / 2pi)`.
    FiveCircles { radius: f64, center_radius: f64 },
    Custom(CustomShape),
}

impl ParametricShape {
    pub fn circle(radius: f64) -> Self {
        ParametricShape::Circle { radius }
    }

    pub fn lemniscate() -> Self {
        ParametricShape::Lemniscate
    }

    pub fn figure_eight_torus() -> Self {
        ParametricShape::FigureEightTorus {
            major_radius: 2.0,
            section_scale: 0.6,
        }
    }

    pub fn five_circles() -> Self {
        ParametricShape::FiveCircles {
            radius: 1.0,
            center_radius: 1.2,
        }
    }

    /// Shape with default constants for the given id. `Custom` has no default.
    pub fn from_id(id: ShapeId) -> Result<Self> {
        match id {
            ShapeId::Circle => Ok(Self::circle(1.0)),
            ShapeId::Lemniscate => Ok(Self::lemniscate()),
            ShapeId::TorusFigure8 => Ok(Self::figure_eight_torus()),
            ShapeId::FiveCircles => Ok(Self::five_circles()),
            ShapeId::Custom => Err(Error::InvalidParameter(
                "custom shapes must be built from closures".into(),
            )),
        }
    }

    pub fn shape_id(&self) -> ShapeId {
        match self {
            ParametricShape::Circle { .. } => ShapeId::Circle,
            ParametricShape::Lemniscate => ShapeId::Lemniscate,
            ParametricShape::FigureEightTorus { .. } => ShapeId::TorusFigure8,
            ParametricShape::FiveCircles { .. } => ShapeId::FiveCircles,
            ParametricShape::Custom(_) => ShapeId::Custom,
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            ParametricShape::FigureEightTorus { .. } => 2,
            ParametricShape::Custom(c) => c.intrinsic_dim,
            _ => 1,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            ParametricShape::FigureEightTorus { .. } => 3,
            ParametricShape::Custom(c) => c.ambient_dim,
            _ => 2,
        }
    }

    pub fn domain(&self) -> Vec<ParamInterval> {
        match self {
            ParametricShape::Circle { .. } | ParametricShape::Lemniscate => {
                vec![ParamInterval::periodic(0.0, TAU)]
            }
            ParametricShape::FigureEightTorus { .. } => vec![
                ParamInterval::periodic(0.0, TAU),
                ParamInterval::periodic(0.0, TAU),
            ],
            ParametricShape::FiveCircles { .. } => vec![ParamInterval {
                lo: 0.0,
                hi: 5.0 * TAU,
                periodic: false,
            }],
            ParametricShape::Custom(c) => c.domain.clone(),
        }
    }

    /// Connected components of a curve's parameter domain, each a periodic
    /// interval. Only meaningful for `d = 1`.
    pub fn curve_pieces(&self) -> Vec<ParamInterval> {
        match self {
            ParametricShape::FiveCircles { .. } => (0..5)
                .map(|k| ParamInterval::periodic(k as f64 * TAU, (k + 1) as f64 * TAU))
                .collect(),
            _ => self.domain(),
        }
    }

    /// Checks `t` against the domain and returns its canonical representative.
    pub fn canonical_param(&self, t: &[f64]) -> Result<Vec<f64>> {
        let domain = self.domain();
        if t.len() != domain.len() {
            return Err(Error::DimensionMismatch {
                expected: domain.len(),
                found: t.len(),
            });
        }
        let mut out = Vec::with_capacity(t.len());
        for (&ti, iv) in t.iter().zip(&domain) {
            if !ti.is_finite() || (!iv.periodic && (ti < iv.lo || ti > iv.hi)) {
                return Err(Error::OutOfDomain { param: t.to_vec() });
            }
            out.push(iv.wrap(ti));
        }
        Ok(out)
    }

    /// `u(t)`. The parameter is assumed valid; see [`Self::canonical_param`].
    pub fn eval(&self, t: &[f64]) -> Vec<f64> {
        match self {
            ParametricShape::Circle { radius } => vec![radius * t[0].cos(), radius * t[0].sin()],
            ParametricShape::Lemniscate => {
                let (s, c) = t[0].sin_cos();
                let den = 1.0 + s * s;
                vec![c / den, s * c / den]
            }
            ParametricShape::FigureEightTorus {
                major_radius,
                section_scale,
            } => {
                let (c1, c2) = twisted_section(*section_scale, t[0], t[1]);
                let (sp, cp) = t[1].sin_cos();
                let rho = major_radius + c1;
                vec![rho * cp, rho * sp, c2]
            }
            ParametricShape::FiveCircles {
                radius,
                center_radius,
            } => {
                let (k, angle) = five_circles_split(t[0]);
                let (cx, cy) = five_circles_center(*center_radius, k);
                vec![cx + radius * angle.cos(), cy + radius * angle.sin()]
            }
            ParametricShape::Custom(c) => (c.eval)(t),
        }
    }

    /// The `n x d` jacobian of `u` at `t`.
    pub fn jacobian(&self, t: &[f64]) -> DMatrix<f64> {
        match self {
            ParametricShape::Circle { radius } => {
                DMatrix::from_column_slice(2, 1, &[-radius * t[0].sin(), radius * t[0].cos()])
            }
            ParametricShape::Lemniscate => {
                let (s, c) = t[0].sin_cos();
                let den = 1.0 + s * s;
                let den2 = den * den;
                let dx = -s * (3.0 - s * s) / den2;
                let dy = ((c * c - s * s) * den - 2.0 * s * s * c * c) / den2;
                DMatrix::from_column_slice(2, 1, &[dx, dy])
            }
            ParametricShape::FigureEightTorus {
                major_radius,
                section_scale,
            } => {
                let a = *section_scale;
                let (theta, phi) = (t[0], t[1]);
                let ct = theta.cos();
                let (sp, cp) = phi.sin_cos();
                let (c1, c2) = twisted_section(a, theta, phi);
                // d(section)/d(theta), rotated
                let (l1t, l2t) = (a * (2.0 * theta).cos(), a * ct);
                let c1t = l1t * cp - l2t * sp;
                let c2t = l1t * sp + l2t * cp;
                // rotation derivative: d/dphi Rot(phi) l = (-c2, c1)
                let (c1p, c2p) = (-c2, c1);
                let rho = major_radius + c1;
                DMatrix::from_column_slice(
                    3,
                    2,
                    &[
                        c1t * cp,
                        c1t * sp,
                        c2t,
                        c1p * cp - rho * sp,
                        c1p * sp + rho * cp,
                        c2p,
                    ],
                )
            }
            ParametricShape::FiveCircles { radius, .. } => {
                let (_, angle) = five_circles_split(t[0]);
                DMatrix::from_column_slice(2, 1, &[-radius * angle.sin(), radius * angle.cos()])
            }
            ParametricShape::Custom(c) => (c.jacobian)(t),
        }
    }

    /// `sqrt(det(J^T J))`: arc-length speed for curves, area element for surfaces.
    pub fn volume_element(&self, t: &[f64]) -> f64 {
        let j = self.jacobian(t);
        let g = j.transpose() * &j;
        g.determinant().max(0.0).sqrt()
    }

    /// Parameters at which the shape crosses itself, for the built-in curves.
    pub fn self_intersection_params(&self) -> Vec<(f64, f64)> {
        match self {
            ParametricShape::Lemniscate => vec![(PI / 2.0, 3.0 * PI / 2.0)],
            _ => Vec::new(),
        }
    }
}

fn twisted_section(a: f64, theta: f64, phi: f64) -> (f64, f64) {
    let (st, ct) = theta.sin_cos();
    let (l1, l2) = (a * st * ct, a * st);
    let (sp, cp) = phi.sin_cos();
    (l1 * cp - l2 * sp, l1 * sp + l2 * cp)
}

fn five_circles_split(t: f64) -> (usize, f64) {
    let k = ((t / TAU).floor().max(0.0) as usize).min(4);
    (k, t - k as f64 * TAU)
}

fn five_circles_center(center_radius: f64, k: usize) -> (f64, f64) {
    let a = TAU * k as f64 / 5.0;
    (center_radius * a.cos(), center_radius * a.sin())
}
