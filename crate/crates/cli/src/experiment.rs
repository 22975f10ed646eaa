//! End-to-end run: sample, lift, compare with the truth, compute a barcode.
//!
//! A run directory holds
//!
//! - `config.txt`: the effective configuration in canonical form,
//! - `points.csv`: the sample, clutter points last,
//! - `lifted.csv`: the lifted sample,
//! - `exact_lift.csv`: the sample points paired with their true tangent matrices,
//! - `errors.csv`: per-point Frobenius error of the estimated matrices,
//! - `diagram.json`: barcode of the configured filtration on the lifted sample,
//! - `summary.json`: distances to the truth and the prominent bars.
//!
//! Everything is a function of the configuration, so two runs with the same
//! configuration write identical files.

use std::fs;
use std::path::Path;

use lifthom_core::dtm::{c_mu, dtm_field};
use lifthom_core::geometry::{exact_lift, hausdorff_distance, uniform_clutter, RNG_ALGORITHM};
use lifthom_core::io::{save_lifted_cloud, save_point_cloud};
use lifthom_core::measure::{
    exact_lifted_reference, gamma_embed, lift_measure, reference_measure, tangent_error_field,
};
use lifthom_core::persistence::{dtm_diagram, prominent_bars, rips_diagram};
use lifthom_core::transport::{gamma_wasserstein, wasserstein};
use lifthom_core::{EmpiricalMeasure, ParametricShape, PersistenceDiagram, PointCloud};
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, FiltrationKind, NoiseBox};
use crate::error::CliError;

/// Revision of the method description the outputs follow.
pub const SPEC_REVISION: &str = "1";

/// Reference grid size: curves use 2000 points, surfaces 8000.
pub fn reference_size(shape: &ParametricShape) -> usize {
    if shape.intrinsic_dim() == 1 {
        2000
    } else {
        8000
    }
}

/// JSON number, or the string `"inf"` for infinities.
pub fn num(x: f64) -> Value {
    if x.is_infinite() {
        json!(if x > 0.0 { "inf" } else { "-inf" })
    } else {
        json!(x)
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Sample of the configured shape with clutter appended. Returns the cloud,
/// the parameters of the shape points and the reference measure.
pub fn build_sample(
    cfg: &ExperimentConfig,
    shape: &ParametricShape,
) -> Result<(PointCloud, Vec<f64>, EmpiricalMeasure), CliError> {
    let (points, params) = cfg.sampling.sample(shape, cfg.n, cfg.seed)?;
    let (reference, _) = reference_measure(shape, reference_size(shape))?;
    if cfg.noise.count == 0 {
        return Ok((points, params, reference));
    }
    let (lo, hi) = match &cfg.noise.bounds {
        NoiseBox::Auto => reference.points().bounding_box().ok_or(lifthom_core::Error::EmptyCloud)?,
        NoiseBox::Explicit { lo, hi } => (lo.clone(), hi.clone()),
    };
    if lo.len() != shape.ambient_dim() {
        return Err(CliError::Validation(format!(
            "noise_box has {} coordinates per corner, the shape lives in dimension {}",
            lo.len(),
            shape.ambient_dim()
        )));
    }
    let clutter = uniform_clutter(&lo, &hi, cfg.noise.inflate, cfg.noise.count, cfg.seed)?;
    Ok((points.concat(&clutter)?, params, reference))
}

/// Barcode of the configured filtration on a point cloud, with `measure`
/// supplying the DTM when needed.
pub fn diagram_for(
    kind: FiltrationKind,
    measure: &EmpiricalMeasure,
    m: f64,
    max_dim: usize,
    max_value: f64,
) -> Result<PersistenceDiagram, CliError> {
    let points = measure.points();
    Ok(match kind {
        FiltrationKind::Rips => rips_diagram(points, max_dim + 1, max_value)?,
        FiltrationKind::Dtm => {
            let f = dtm_field(measure, m, points)?;
            dtm_diagram(points, &f, max_dim + 1, max_value)?
        }
    })
}

pub fn bar_table(d: &PersistenceDiagram, max_dim: usize, min_length: f64) -> Value {
    let rows: Vec<Value> = (0..=max_dim)
        .flat_map(|dim| prominent_bars(d, dim, min_length))
        .map(|b| {
            json!({
                "dim": b.dim,
                "birth": num(b.birth),
                "death": num(b.death),
                "length": num(b.length()),
            })
        })
        .collect();
    Value::Array(rows)
}

/// Runs the experiment and writes its artifacts into `out`. `source` is the
/// configuration text as the user gave it, echoed into the summary.
pub fn run_experiment(cfg: &ExperimentConfig, source: Option<&str>, out: &Path) -> Result<Value, CliError> {
    cfg.validate()?;
    let shape = ParametricShape::from_id(cfg.shape)?;
    fs::create_dir_all(out).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;

    let (points, params, reference) = build_sample(cfg, &shape)?;
    let nu = EmpiricalMeasure::uniform(points.clone())?;
    let lifted = lift_measure(&nu, cfg.r)?;
    let exact = exact_lift(&shape, &params)?;
    let shape_rows: Vec<usize> = (0..cfg.n).collect();
    let errors = tangent_error_field(&lifted.cloud.select(&shape_rows), &exact)?;

    let lifted_ref = exact_lifted_reference(&shape, reference.len())?;
    let (w_p, _) = wasserstein(&reference, &nu, cfg.p)?;
    let w_p_gamma = gamma_wasserstein(&lifted_ref, &lifted, cfg.p, cfg.gamma)?;
    let d_h = hausdorff_distance(reference.points(), &points)?;
    let embedded = lifted.embedded_measure(cfg.gamma)?;
    let d_h_gamma = hausdorff_distance(&gamma_embed(&lifted_ref.cloud, cfg.gamma)?, embedded.points())?;
    let c_lifted = c_mu(&embedded, cfg.m)?;
    let diagram = diagram_for(cfg.filtration, &embedded, cfg.m, cfg.max_dim, cfg.max_value)?;

    write(&out.join("config.txt"), &cfg.to_text())?;
    save_point_cloud(&out.join("points.csv"), &points)?;
    save_lifted_cloud(&out.join("lifted.csv"), &lifted.cloud)?;
    save_lifted_cloud(&out.join("exact_lift.csv"), &exact)?;
    let mut err_csv = String::from("index,error\n");
    for (i, e) in errors.iter().enumerate() {
        err_csv.push_str(&format!("{i},{e:.16e}\n"));
    }
    write(&out.join("errors.csv"), &err_csv)?;
    write(&out.join("diagram.json"), &diagram.to_json_with_dims(cfg.max_dim + 1))?;

    let mean_error = if errors.is_empty() {
        0.0
    } else {
        errors.iter().sum::<f64>() / errors.len() as f64
    };
    let summary = json!({
        "spec_revision": SPEC_REVISION,
        "rng": RNG_ALGORITHM,
        "config": cfg.to_json(),
        "config_source": source.unwrap_or(""),
        "sample": {
            "shape_points": cfg.n,
            "noise_points": cfg.noise.count,
            "reference_points": reference.len(),
        },
        "wasserstein_p": num(w_p),
        "gamma_wasserstein_p": num(w_p_gamma),
        "hausdorff": num(d_h),
        "gamma_hausdorff": num(d_h_gamma),
        "c_lifted": num(c_lifted),
        "tangent_error": {
            "mean": num(mean_error),
            "max": num(errors.iter().cloned().fold(0.0, f64::max)),
        },
        "diagram": "diagram.json",
        "prominent_bars": bar_table(&diagram, cfg.max_dim, cfg.min_bar_length),
    });
    let text = serde_json::to_string_pretty(&summary).expect("summary serialisation cannot fail");
    write(&out.join("summary.json"), &(text + "\n"))?;
    Ok(summary)
}
