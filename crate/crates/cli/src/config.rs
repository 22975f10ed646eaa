//! Experiment configuration and its key-value text format.
//!
//! One `key = value` pair per line. Blank lines and lines starting with `#`
//! are ignored, as is anything after a `#` on a line. Every key is optional;
//! missing keys take the defaults of [`ExperimentConfig::default`].
//!
//! | key              | value                                          | default      |
//! |------------------|------------------------------------------------|--------------|
//! | `shape`          | `circle`, `lemniscate`, `torus_figure8`, `five_circles` | `lemniscate` |
//! | `n`              | sample size, at least 1                        | `100`        |
//! | `seed`           | unsigned integer                               | `0`          |
//! | `sampling`       | `iid` or `stratified`                          | `iid`        |
//! | `r`              | covariance radius, positive                    | `0.1`        |
//! | `gamma`          | matrix weight, positive                        | `2`          |
//! | `m`              | DTM mass in (0, 1)                             | `0.01`       |
//! | `p`              | Wasserstein order, at least 1                  | `2`          |
//! | `filtration`     | `rips` or `dtm`                                | `dtm`        |
//! | `max_dim`        | highest homology dimension, 0 to 2             | `1`          |
//! | `max_value`      | filtration cut-off, positive or `inf`          | `inf`        |
//! | `min_bar_length` | threshold for the prominent bar table          | `0.1`        |
//! | `noise_count`    | number of clutter points                       | `0`          |
//! | `noise_box`      | `auto` or `lo_0,..,lo_{n-1},hi_0,..,hi_{n-1}`  | `auto`       |
//! | `noise_inflate`  | growth of the noise box, relative to its sides | `0.1`        |
//!
//! With `noise_box = auto` the box is the bounding box of the shape.

use std::fmt::Write as _;
use std::str::FromStr;

use lifthom_core::geometry::SamplingScheme;
use lifthom_core::ShapeId;
use serde_json::{json, Value};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationKind {
    Rips,
    Dtm,
}

impl FiltrationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FiltrationKind::Rips => "rips",
            FiltrationKind::Dtm => "dtm",
        }
    }
}

impl FromStr for FiltrationKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rips" => Ok(FiltrationKind::Rips),
            "dtm" => Ok(FiltrationKind::Dtm),
            other => Err(format!("unknown filtration '{other}' (expected rips or dtm)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseBox {
    Auto,
    Explicit { lo: Vec<f64>, hi: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub count: usize,
    pub bounds: NoiseBox,
    pub inflate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub shape: ShapeId,
    pub n: usize,
    pub seed: u64,
    pub sampling: SamplingScheme,
    pub r: f64,
    pub gamma: f64,
    pub m: f64,
    pub p: f64,
    pub filtration: FiltrationKind,
    pub max_dim: usize,
    pub max_value: f64,
    pub min_bar_length: f64,
    pub noise: NoiseSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            shape: ShapeId::Lemniscate,
            n: 100,
            seed: 0,
            sampling: SamplingScheme::Iid,
            r: 0.1,
            gamma: 2.0,
            m: 0.01,
            p: 2.0,
            filtration: FiltrationKind::Dtm,
            max_dim: 1,
            max_value: f64::INFINITY,
            min_bar_length: 0.1,
            noise: NoiseSpec {
                count: 0,
                bounds: NoiseBox::Auto,
                inflate: 0.1,
            },
        }
    }
}

pub const KEYS: [&str; 15] = [
    "shape",
    "n",
    "seed",
    "sampling",
    "r",
    "gamma",
    "m",
    "p",
    "filtration",
    "max_dim",
    "max_value",
    "min_bar_length",
    "noise_count",
    "noise_box",
    "noise_inflate",
];

fn number<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("{key}: cannot parse '{value}'"))
}

impl ExperimentConfig {
    /// Parses the text format on top of the defaults.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |message: String| CliError::Validation(format!("config line {}: {message}", k + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected 'key = value', found '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if seen.contains(&key) {
                return Err(at(format!("duplicate key '{key}'")));
            }
            cfg.set(key, value).map_err(at)?;
            if let Some(&known) = KEYS.iter().find(|&&kk| kk == key) {
                seen.push(known);
            }
        }
        Ok(cfg)
    }

    /// Sets one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "shape" => self.shape = value.parse().map_err(|e: lifthom_core::Error| e.to_string())?,
            "n" => self.n = number(key, value)?,
            "seed" => self.seed = number(key, value)?,
            "sampling" => self.sampling = value.parse().map_err(|e: lifthom_core::Error| e.to_string())?,
            "r" => self.r = number(key, value)?,
            "gamma" => self.gamma = number(key, value)?,
            "m" => self.m = number(key, value)?,
            "p" => self.p = number(key, value)?,
            "filtration" => self.filtration = value.parse()?,
            "max_dim" => self.max_dim = number(key, value)?,
            "max_value" => self.max_value = number(key, value)?,
            "min_bar_length" => self.min_bar_length = number(key, value)?,
            "noise_count" => self.noise.count = number(key, value)?,
            "noise_inflate" => self.noise.inflate = number(key, value)?,
            "noise_box" => {
                self.noise.bounds = if value == "auto" {
                    NoiseBox::Auto
                } else {
                    let v: Vec<f64> = value
                        .split(',')
                        .map(|x| number(key, x.trim()))
                        .collect::<Result<_, _>>()?;
                    if v.is_empty() || v.len() % 2 != 0 {
                        return Err(format!("noise_box needs an even number of values, found {}", v.len()));
                    }
                    let (lo, hi) = v.split_at(v.len() / 2);
                    NoiseBox::Explicit {
                        lo: lo.to_vec(),
                        hi: hi.to_vec(),
                    }
                }
            }
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Validation(m));
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if self.shape == ShapeId::Custom {
            return fail("custom shapes are only available through the library".into());
        }
        if self.n == 0 {
            return fail("n must be at least 1".into());
        }
        if !positive(self.r) {
            return fail(format!("r must be positive, got {}", self.r));
        }
        if !positive(self.gamma) {
            return fail(format!("gamma must be positive, got {}", self.gamma));
        }
        if !(self.m > 0.0 && self.m < 1.0) {
            return fail(format!("m must lie in (0, 1), got {}", self.m));
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return fail(format!("p must be a finite number >= 1, got {}", self.p));
        }
        if self.max_dim > 2 {
            return fail(format!("max_dim must be at most 2, got {}", self.max_dim));
        }
        if !(self.max_value > 0.0) {
            return fail(format!("max_value must be positive, got {}", self.max_value));
        }
        if !(self.min_bar_length >= 0.0) {
            return fail(format!("min_bar_length must be nonnegative, got {}", self.min_bar_length));
        }
        if !(self.noise.inflate >= 0.0 && self.noise.inflate.is_finite()) {
            return fail(format!("noise_inflate must be nonnegative, got {}", self.noise.inflate));
        }
        if let NoiseBox::Explicit { lo, hi } = &self.noise.bounds {
            if lo.iter().zip(hi).any(|(a, b)| !(a <= b) || !a.is_finite() || !b.is_finite()) {
                return fail("noise_box needs finite lo <= hi in every coordinate".into());
            }
        }
        Ok(())
    }

    /// Canonical text form; parsing it gives back the same configuration.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for key in KEYS {
            let _ = writeln!(out, "{key} = {}", self.value_text(key));
        }
        out
    }

    fn value_text(&self, key: &str) -> String {
        match key {
            "shape" => self.shape.as_str().into(),
            "n" => self.n.to_string(),
            "seed" => self.seed.to_string(),
            "sampling" => self.sampling.as_str().into(),
            "r" => self.r.to_string(),
            "gamma" => self.gamma.to_string(),
            "m" => self.m.to_string(),
            "p" => self.p.to_string(),
            "filtration" => self.filtration.as_str().into(),
            "max_dim" => self.max_dim.to_string(),
            "max_value" => self.max_value.to_string(),
            "min_bar_length" => self.min_bar_length.to_string(),
            "noise_count" => self.noise.count.to_string(),
            "noise_inflate" => self.noise.inflate.to_string(),
            "noise_box" => match &self.noise.bounds {
                NoiseBox::Auto => "auto".into(),
                NoiseBox::Explicit { lo, hi } => {
                    lo.iter().chain(hi).map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                }
            },
            _ => unreachable!("unknown key {key}"),
        }
    }

    pub fn to_json(&self) -> Value {
        let real = |x: f64| if x.is_finite() { json!(x) } else { json!(self.value_text("max_value")) };
        let noise_box = match &self.noise.bounds {
            NoiseBox::Auto => json!("auto"),
            NoiseBox::Explicit { lo, hi } => json!({ "lo": lo, "hi": hi }),
        };
        json!({
            "shape": self.shape.as_str(),
            "n": self.n,
            "seed": self.seed,
            "sampling": self.sampling.as_str(),
            "r": self.r,
            "gamma": self.gamma,
            "m": self.m,
            "p": self.p,
            "filtration": self.filtration.as_str(),
            "max_dim": self.max_dim,
            "max_value": real(self.max_value),
            "min_bar_length": self.min_bar_length,
            "noise_count": self.noise.count,
            "noise_box": noise_box,
            "noise_inflate": self.noise.inflate,
        })
    }
}
