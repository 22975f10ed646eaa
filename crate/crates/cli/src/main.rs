use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lifthom_core::dtm::{c_mu, dtm_field};
use lifthom_core::io::{save_lifted_cloud, save_point_cloud};
use lifthom_core::measure::lift_measure;
use lifthom_core::persistence::prominent_bars;
use lifthom_core::{EmpiricalMeasure, ParametricShape};
use lifthom_cli::compare::fmt_value;
use lifthom_cli::experiment::{build_sample, diagram_for};
use lifthom_cli::{compare_diagrams, run_experiment, CliError, CloudFile, ExperimentConfig, FiltrationKind, Metric};

#[derive(Parser)]
#[command(name = "lifthom", version, about = "Lift point samples of immersed manifolds and read their homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a built-in shape, optionally with clutter, and write points.csv.
    Sample(SampleArgs),
    /// Lift a point cloud with normalized local covariance matrices.
    Lift(LiftArgs),
    /// Distance to the empirical measure of a cloud.
    Dtm(DtmArgs),
    /// Barcode of a Rips or DTM filtration.
    Persist(PersistArgs),
    /// Bottleneck distance between two diagram files.
    Compare(CompareArgs),
    /// Full run from a configuration file; see the config module for the format.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value = "lemniscate")]
    shape: String,
    #[arg(short, long, default_value = "100")]
    n: String,
    #[arg(long, default_value = "0")]
    seed: String,
    #[arg(long, default_value = "iid")]
    sampling: String,
    #[arg(long, default_value = "0")]
    noise_count: String,
    #[arg(long, default_value = "auto")]
    noise_box: String,
    #[arg(long, default_value = "0.1")]
    noise_inflate: String,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    r: f64,
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct DtmArgs {
    /// Point or lifted cloud defining the measure.
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    m: f64,
    /// Weight of the matrix part when the input is lifted.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Query points; the support of the measure when omitted.
    #[arg(long)]
    queries: Option<PathBuf>,
    /// CSV with one DTM value per query.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PersistArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(long, default_value = "dtm")]
    filtration: FiltrationKind,
    #[arg(short, long, default_value_t = 0.01)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Highest homology dimension computed.
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    #[arg(long, default_value_t = f64::INFINITY)]
    max_value: f64,
    #[arg(long, default_value_t = 0.1)]
    min_bar_length: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value = "bottleneck")]
    metric: Metric,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(short, long)]
    config: Option<PathBuf>,
    #[arg(short, long)]
    out: PathBuf,
    #[arg(long)]
    shape: Option<String>,
    #[arg(short, long)]
    n: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    sampling: Option<String>,
    #[arg(short, long)]
    r: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(short, long)]
    m: Option<String>,
    #[arg(short, long)]
    p: Option<String>,
    #[arg(long)]
    filtration: Option<String>,
    #[arg(long)]
    max_dim: Option<String>,
    #[arg(long)]
    max_value: Option<String>,
    #[arg(long)]
    min_bar_length: Option<String>,
    #[arg(long)]
    noise_count: Option<String>,
    #[arg(long)]
    noise_box: Option<String>,
    #[arg(long)]
    noise_inflate: Option<String>,
}

impl ExperimentArgs {
    fn overrides(&self) -> Vec<(&'static str, &str)> {
        let all = [
            ("shape", &self.shape),
            ("n", &self.n),
            ("seed", &self.seed),
            ("sampling", &self.sampling),
            ("r", &self.r),
            ("gamma", &self.gamma),
            ("m", &self.m),
            ("p", &self.p),
            ("filtration", &self.filtration),
            ("max_dim", &self.max_dim),
            ("max_value", &self.max_value),
            ("min_bar_length", &self.min_bar_length),
            ("noise_count", &self.noise_count),
            ("noise_box", &self.noise_box),
            ("noise_inflate", &self.noise_inflate),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_deref().map(|v| (k, v))).collect()
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn apply(cfg: &mut ExperimentConfig, pairs: &[(&str, &str)]) -> Result<(), CliError> {
    for (k, v) in pairs {
        cfg.set(k, v).map_err(|e| CliError::Validation(format!("--{}: {e}", k.replace('_', "-"))))?;
    }
    cfg.validate()
}

fn sample(args: SampleArgs) -> Result<(), CliError> {
    let mut cfg = ExperimentConfig::default();
    apply(
        &mut cfg,
        &[
            ("shape", &args.shape),
            ("n", &args.n),
            ("seed", &args.seed),
            ("sampling", &args.sampling),
            ("noise_count", &args.noise_count),
            ("noise_box", &args.noise_box),
            ("noise_inflate", &args.noise_inflate),
        ],
    )?;
    let shape = ParametricShape::from_id(cfg.shape)?;
    let (points, _, _) = build_sample(&cfg, &shape)?;
    save_point_cloud(&args.out, &points)?;
    Ok(())
}

fn lift(args: LiftArgs) -> Result<(), CliError> {
    let points = match CloudFile::load(&args.input)? {
        CloudFile::Points(p) => p,
        CloudFile::Lifted(_) => return Err(CliError::Validation("input is already lifted".into())),
    };
    let lifted = lift_measure(&EmpiricalMeasure::uniform(points)?, args.r)?;
    save_lifted_cloud(&args.out, &lifted.cloud)?;
    Ok(())
}

fn dtm(args: DtmArgs) -> Result<(), CliError> {
    let support = CloudFile::load(&args.input)?.embedded(args.gamma)?;
    let mu = EmpiricalMeasure::uniform(support)?;
    let values = match &args.queries {
        Some(q) => dtm_field(&mu, args.m, &CloudFile::load(q)?.embedded(args.gamma)?)?,
        None => {
            println!("c = {}", fmt_value(c_mu(&mu, args.m)?));
            dtm_field(&mu, args.m, mu.points())?
        }
    };
    if let Some(out) = &args.out {
        let mut text = String::from("dtm\n");
        for v in values {
            text.push_str(&format!("{v:.16e}\n"));
        }
        std::fs::write(out, text).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}

fn persist(args: PersistArgs) -> Result<(), CliError> {
    if args.max_dim > 2 {
        return Err(CliError::Validation(format!("--max-dim must be at most 2, got {}", args.max_dim)));
    }
    let points = CloudFile::load(&args.input)?.embedded(args.gamma)?;
    let mu = EmpiricalMeasure::uniform(points)?;
    let d = diagram_for(args.filtration, &mu, args.m, args.max_dim, args.max_value)?;
    for dim in 0..=args.max_dim {
        for b in prominent_bars(&d, dim, args.min_bar_length) {
            println!("H{dim} [{}, {})  length {}", b.birth, fmt_value(b.death), fmt_value(b.length()));
        }
    }
    if let Some(out) = &args.out {
        std::fs::write(out, d.to_json_with_dims(args.max_dim + 1))
            .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), CliError> {
    print!("{}", compare_diagrams(&args.a, &args.b)?.render(args.metric));
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let source = args.config.as_deref().map(read_text).transpose()?;
    let mut cfg = match &source {
        Some(text) => ExperimentConfig::parse(text)?,
        None => ExperimentConfig::default(),
    };
    apply(&mut cfg, &args.overrides())?;
    let summary = run_experiment(&cfg, source.as_deref(), &args.out)?;
    for key in ["wasserstein_p", "gamma_wasserstein_p", "hausdorff", "gamma_hausdorff", "c_lifted"] {
        println!("{key} = {}", summary[key]);
    }
    println!("wrote {}", args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(a) => sample(a),
        Command::Lift(a) => lift(a),
        Command::Dtm(a) => dtm(a),
        Command::Persist(a) => persist(a),
        Command::Compare(a) => compare(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
