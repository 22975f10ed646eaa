//! Parametric immersed shapes, tangent projections and exact lifts,
//! density-correct sampling, normal reach and Hausdorff distance.

mod cloud;
mod hausdorff;
mod normal_reach;
mod sampling;
mod shapes;

pub use cloud::{LiftedCloud, PointCloud};
pub use hausdorff::{directed_hausdorff, hausdorff_distance};
pub use normal_reach::{
    normal_reach, normal_reach_profile, normal_reach_sublevel_fraction, normal_reach_with,
    sublevel_fraction, NormalReachOptions, DEFAULT_BRACKETS, DEFAULT_EXCLUSION,
};
pub use sampling::{
    reference_grid, sample_stratified, sample_uniform, uniform_clutter, ArcLengthTable, SamplingScheme,
    RNG_ALGORITHM,
};
pub use shapes::{CustomShape, ParamInterval, ParametricShape, ShapeId};

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::linalg;

/// Relative eigenvalue floor of `J^T J` below which the jacobian counts as rank deficient.
const RANK_TOLERANCE: f64 = 1e-12;

/// Orthogonal projection onto the tangent space at `t`, as a row-major
/// `n x n` matrix `J (J^T J)^{-1} J^T`.
pub fn tangent_projection(shape: &ParametricShape, t: &[f64]) -> Result<Vec<f64>> {
    let t = shape.canonical_param(t)?;
    let j = shape.jacobian(&t);
    let gram = j.transpose() * &j;
    let eig = SymmetricEigen::new(gram.clone());
    let max = eig.eigenvalues.iter().copied().fold(0.0f64, f64::max);
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min <= RANK_TOLERANCE * max {
        return Err(Error::ImmersionViolation { param: t });
    }
    let inv = gram
        .try_inverse()
        .ok_or_else(|| Error::ImmersionViolation { param: t.clone() })?;
    let p = &j * inv * j.transpose();
    let mut flat = linalg::from_dmatrix(&p);
    // exact symmetry
    let n = shape.ambient_dim();
    for a in 0..n {
        for b in (a + 1)..n {
            let m = 0.5 * (flat[a * n + b] + flat[b * n + a]);
            flat[a * n + b] = m;
            flat[b * n + a] = m;
        }
    }
    Ok(flat)
}

/// Samples the exact lift `x0 -> (u(x0), p_{T_x M} / (d + 2))` at the given
/// parameters, laid out flat with stride `d`.
pub fn exact_lift(shape: &ParametricShape, params: &[f64]) -> Result<LiftedCloud> {
    let d = shape.intrinsic_dim();
    let n = shape.ambient_dim();
    if params.len() % d != 0 {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: params.len() % d,
        });
    }
    let scale = 1.0 / (d as f64 + 2.0);
    let mut base = Vec::with_capacity(params.len() / d * n);
    let mut matrices = Vec::with_capacity(params.len() / d * n * n);
    for t in params.chunks_exact(d) {
        let t = shape.canonical_param(t)?;
        let p = tangent_projection(shape, &t)?;
        base.extend(shape.eval(&t));
        matrices.extend(p.into_iter().map(|v| v * scale));
    }
    LiftedCloud::new(PointCloud::new(n, base)?, matrices, Some(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};
    use std::sync::Arc;

    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn circle_projection_at_angle_zero_is_vertical() {
        let p = tangent_projection(&ParametricShape::circle(1.0), &[0.0]).unwrap();
        let expected = [0.0, 0.0, 0.0, 1.0];
        for (a, b) in p.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn projections_are_symmetric_idempotent_with_trace_d() {
        let shapes = [
            ParametricShape::circle(0.5),
            ParametricShape::lemniscate(),
            ParametricShape::figure_eight_torus(),
            ParametricShape::five_circles(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for shape in &shapes {
            let n = shape.ambient_dim();
            let d = shape.intrinsic_dim();
            for _ in 0..1000 {
                let t: Vec<f64> = shape
                    .domain()
                    .iter()
                    .map(|iv| rng.gen_range(iv.lo..iv.hi))
                    .collect();
                let p = tangent_projection(shape, &t).unwrap();
                assert!(linalg::asymmetry(&p, n) <= 1e-9);
                let p2 = linalg::matmul(&p, &p, n);
                assert!(linalg::frobenius_dist(&p, &p2) <= 1e-9);
                assert!((linalg::trace(&p, n) - d as f64).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn lemniscate_crossing_has_two_tangent_spaces() {
        let lem = ParametricShape::lemniscate();
        let a = tangent_projection(&lem, &[PI / 2.0]).unwrap();
        let b = tangent_projection(&lem, &[3.0 * PI / 2.0]).unwrap();
        let xa = lem.eval(&[PI / 2.0]);
        let xb = lem.eval(&[3.0 * PI / 2.0]);
        assert!(linalg::dist(&xa, &xb) < 1e-15);
        // tangents along the diagonals y = x and y = -x
        assert!(linalg::frobenius_dist(&a, &b) > 1.0);
        assert!((a[1] - 0.5).abs() < 1e-12 && (b[1] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_jacobian_is_reported() {
        let flat = ParametricShape::Custom(CustomShape {
            intrinsic_dim: 1,
            ambient_dim: 2,
            domain: vec![ParamInterval::periodic(0.0, TAU)],
            eval: Arc::new(|t: &[f64]| vec![t[0].sin().powi(3), 0.0]),
            jacobian: Arc::new(|t: &[f64]| {
                DMatrix::from_column_slice(2, 1, &[3.0 * t[0].sin().powi(2) * t[0].cos(), 0.0])
            }),
        });
        assert!(matches!(
            tangent_projection(&flat, &[0.0]),
            Err(Error::ImmersionViolation { .. })
        ));
        assert!(exact_lift(&flat, &[0.0]).is_err());
        assert!(tangent_projection(&flat, &[1.0]).is_ok());
    }

    #[test]
    fn exact_lift_of_circle_at_zero() {
        let lc = exact_lift(&ParametricShape::circle(1.0), &[0.0]).unwrap();
        assert_eq!(lc.base_point(0), &[1.0, 0.0]);
        let m = lc.matrix(0);
        let expected = [0.0, 0.0, 0.0, 1.0 / 3.0];
        for (a, b) in m.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn exact_lift_matrices_have_trace_d_over_d_plus_two() {
        let torus = ParametricShape::figure_eight_torus();
        let params: Vec<f64> = (0..200).flat_map(|i| [i as f64 * 0.031, i as f64 * 0.047]).collect();
        let lc = exact_lift(&torus, &params).unwrap();
        lc.check_invariants().unwrap();
        for i in 0..lc.len() {
            assert!((linalg::trace(lc.matrix(i), 3) - 0.5).abs() <= 1e-9);
            let min = linalg::sym_eigenvalues(lc.matrix(i), 3)[0];
            assert!(min >= -1e-9);
        }
    }
}
