use lifthom_core::geometry::{exact_lift, sample_uniform, ParametricShape};
use lifthom_core::linalg;
use lifthom_core::measure::{gamma_embed, lift_measure, tangent_error_field};
use lifthom_core::EmpiricalMeasure;
use std::f64::consts::PI;

#[test]
fn exact_lift_separates_the_crossing_branches() {
    let lem = ParametricShape::lemniscate();
    let window = 0.05;
    let k = 400;
    let branch = |c: f64| -> Vec<f64> {
        (0..=k).map(|i| c - window + 2.0 * window * i as f64 / k as f64).collect()
    };
    let a = gamma_embed(&exact_lift(&lem, &branch(PI / 2.0)).unwrap(), 2.0).unwrap();
    let b = gamma_embed(&exact_lift(&lem, &branch(3.0 * PI / 2.0)).unwrap(), 2.0).unwrap();
    let mut min_lifted = f64::INFINITY;
    for x in a.iter() {
        for y in b.iter() {
            min_lifted = min_lifted.min(linalg::dist(x, y));
        }
    }
    let base = linalg::dist(&lem.eval(&[PI / 2.0]), &lem.eval(&[3.0 * PI / 2.0]));
    assert!(base < 1e-15);
    assert!(min_lifted >= 0.3, "{min_lifted}");
}

#[test]
fn exact_lift_is_injective_on_a_dense_grid() {
    let lem = ParametricShape::lemniscate();
    let n = 2000;
    let params: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
    let emb = gamma_embed(&exact_lift(&lem, &params).unwrap(), 2.0).unwrap();
    let mut min = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            min = min.min(linalg::dist(emb.point(i), emb.point(j)));
        }
    }
    assert!(min > 0.0);
}

#[test]
fn smaller_radius_gives_better_tangents() {
    let lem = ParametricShape::lemniscate();
    let (pts, params) = sample_uniform(&lem, 9000, 1).unwrap();
    let nu = EmpiricalMeasure::uniform(pts).unwrap();
    let exact = exact_lift(&lem, &params).unwrap();
    let mean = |r: f64| {
        let lifted = lift_measure(&nu, r).unwrap();
        let e = tangent_error_field(&lifted.cloud, &exact).unwrap();
        e.iter().sum::<f64>() / e.len() as f64
    };
    let (fine, coarse) = (mean(0.1), mean(0.5));
    assert!(fine < coarse, "{fine} vs {coarse}");
}
