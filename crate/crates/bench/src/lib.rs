//! Fixtures shared by the benchmarks.

use lifthom_core::geometry::{sample_uniform, ParametricShape};
use lifthom_core::EmpiricalMeasure;

/// Uniform measure on `n` iid lemniscate samples.
pub fn lemniscate_measure(n: usize, seed: u64) -> EmpiricalMeasure {
    let (points, _) = sample_uniform(&ParametricShape::lemniscate(), n, seed).expect("lemniscate sample");
    EmpiricalMeasure::uniform(points).expect("nonempty sample")
}
