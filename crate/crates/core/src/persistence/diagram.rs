use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One homology class: born at `birth`, dies at `death` (`f64::INFINITY` if never).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

impl Bar {
    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PersistenceDiagram {
    bars: Vec<Bar>,
}

impl PersistenceDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bars(mut bars: Vec<Bar>) -> Self {
        sort_bars(&mut bars);
        Self { bars }
    }

    pub fn push(&mut self, dim: usize, birth: f64, death: f64) {
        self.bars.push(Bar { dim, birth, death });
    }

    pub(crate) fn finish(mut self) -> Self {
        sort_bars(&mut self.bars);
        self
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    /// `(birth, death)` pairs in dimension `dim`.
    pub fn pairs(&self, dim: usize) -> Vec<(f64, f64)> {
        self.bars
            .iter()
            .filter(|b| b.dim == dim)
            .map(|b| (b.birth, b.death))
            .collect()
    }

    /// Largest dimension that has a bar.
    pub fn max_dim(&self) -> Option<usize> {
        self.bars.iter().map(|b| b.dim).max()
    }

    /// Number of bars of dimension `dim` alive at `t`, i.e. `birth <= t < death`.
    pub fn betti_at(&self, dim: usize, t: f64) -> usize {
        self.bars
            .iter()
            .filter(|b| b.dim == dim && b.birth <= t && t < b.death)
            .count()
    }

    pub fn to_json(&self) -> String {
        self.to_json_with_dims(0)
    }

    /// Like [`to_json`](Self::to_json), but always lists dimensions
    /// `0..dims`, empty or not.
    pub fn to_json_with_dims(&self, dims: usize) -> String {
        let top = self.max_dim().map_or(0, |d| d + 1).max(dims);
        let file = DiagramFile {
            dims: (0..top)
                .map(|dim| DimEntry {
                    dim,
                    pairs: self
                        .pairs(dim)
                        .into_iter()
                        .map(|(b, d)| (Endpoint(b), Endpoint(d)))
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("diagram serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DiagramFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let mut bars = Vec::new();
        for entry in file.dims {
            for (b, d) in entry.pairs {
                if !(b.0.is_finite() && (d.0 >= b.0)) {
                    return Err(Error::Parse {
                        line: 0,
                        column: 0,
                        message: format!("invalid pair [{}, {}] in dimension {}", b.0, d.0, entry.dim),
                    });
                }
                bars.push(Bar {
                    dim: entry.dim,
                    birth: b.0,
                    death: d.0,
                });
            }
        }
        Ok(Self::from_bars(bars))
    }
}

fn sort_bars(bars: &mut [Bar]) {
    bars.sort_by(|a, b| {
        a.dim
            .cmp(&b.dim)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.total_cmp(&b.death))
    });
}

#[derive(Serialize, Deserialize)]
struct DiagramFile {
    dims: Vec<DimEntry>,
}

#[derive(Serialize, Deserialize)]
struct DimEntry {
    dim: usize,
    pairs: Vec<(Endpoint, Endpoint)>,
}

/// A finite number, or the string `"inf"`.
struct Endpoint(f64);

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0 == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Endpoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Endpoint;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Endpoint, E> {
                Ok(Endpoint(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Endpoint, E> {
                Ok(Endpoint(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Endpoint, E> {
                Ok(Endpoint(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Endpoint, E> {
                if v == "inf" {
                    Ok(Endpoint(f64::INFINITY))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}
