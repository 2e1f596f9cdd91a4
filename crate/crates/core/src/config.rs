//! JSON-compatible configuration for filter systems, walks and Walsh matrices.
//!
//! Complex entries are written `[re, im]`; a bare number is accepted as a real
//! entry. The `alpha` shorthand expands to digit-independent coefficients
//! `a_{i,b} = alpha_i`. Re-serializing a parsed config parses back to an equal
//! config.

use std::fmt;
use std::path::Path;

use num_complex::Complex;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{FilterSystem, IfsSpec, ModelError};
use crate::rational::RationalPoint;
use crate::walkgraph::{Vertex, WalkError, WalkGraph};
use crate::Real;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {source}")]
    Model {
        field: &'static str,
        source: ModelError,
    },
    #[error("exactly one of `a` and `alpha` must be given")]
    CoefficientChoice,
    #[error("walk: {0}")]
    Walk(#[from] WalkError),
    #[error("field `{field}`: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
}

/// Complex literal: serialized as `[re, im]`, deserialized from that or a bare number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx(pub f64, pub f64);

impl Cx {
    pub fn to_complex<F: Real>(self) -> Complex<F> {
        Complex::new(F::lit(self.0), F::lit(self.1))
    }
}

impl From<Complex<f64>> for Cx {
    fn from(z: Complex<f64>) -> Self {
        Cx(z.re, z.im)
    }
}

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.0)?;
        seq.serialize_element(&self.1)?;
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CxVisitor;
        impl<'de> Visitor<'de> for CxVisitor {
            type Value = Cx;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a number or a [re, im] pair")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Cx, E> {
                Ok(Cx(v, 0.0))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Cx, E> {
                Ok(Cx(v as f64, 0.0))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Cx, E> {
                Ok(Cx(v as f64, 0.0))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Cx, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Cx(re, im))
            }
        }
        deserializer.deserialize_any(CxVisitor)
    }
}

/// On-disk form of a [`FilterSystem`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    /// Expansive integer scaling matrix, row major.
    pub r: Vec<Vec<i64>>,
    /// Digit vectors, one row each.
    pub b: Vec<Vec<i64>>,
    /// Frequency vectors, one row each; `l_0 = 0`.
    pub l: Vec<Vec<i64>>,
    /// Full coefficient matrix `a[i][b]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<Vec<Cx>>>,
    /// Digit-independent shorthand `a[i][b] = alpha[i]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Cx>>,
}

impl FilterConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Validates and builds the typed system.
    pub fn build<F: Real>(&self) -> Result<FilterSystem<F>, ConfigError> {
        let ifs = IfsSpec::new(self.r.clone(), self.b.clone())
            .map_err(|source| ConfigError::Model { field: "r/b", source })?;
        match (&self.a, &self.alpha) {
            (Some(a), None) => {
                let coeffs = a
                    .iter()
                    .map(|row| row.iter().map(|c| c.to_complex()).collect())
                    .collect();
                FilterSystem::new(ifs, self.l.clone(), coeffs)
                    .map_err(|source| ConfigError::Model { field: "a", source })
            }
            (None, Some(alpha)) => {
                let alpha = alpha.iter().map(|c| c.to_complex()).collect();
                FilterSystem::from_alpha(ifs, self.l.clone(), alpha)
                    .map_err(|source| ConfigError::Model {
                        field: "alpha",
                        source,
                    })
            }
            _ => Err(ConfigError::CoefficientChoice),
        }
    }
}

/// Loads and builds a filter system from a JSON file.
pub fn load_filter<F: Real>(path: &Path) -> Result<FilterSystem<F>, ConfigError> {
    FilterConfig::from_path(path)?.build()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Rational point payload, e.g. `"-4"` or `"(-1, 0)"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
}

/// On-disk form of a [`WalkGraph`]: vertex list, per-letter edge arrays,
/// per-letter complex weight arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub alphabet: usize,
    pub vertices: Vec<VertexConfig>,
    /// `edges[letter][vertex]` is the target vertex index.
    pub edges: Vec<Vec<usize>>,
    /// `weights[letter][vertex]`; weight 0 marks an impossible transition.
    pub weights: Vec<Vec<Cx>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reversing: Option<bool>,
}

impl WalkConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("walk config serializes")
    }

    pub fn build<F: Real>(&self) -> Result<WalkGraph<F>, ConfigError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                let point = match &v.point {
                    Some(text) => Some(text.parse::<RationalPoint>().map_err(|e| {
                        ConfigError::Invalid {
                            field: "vertices.point",
                            message: e.to_string(),
                        }
                    })?),
                    None => None,
                };
                Ok(Vertex {
                    name: v.name.clone(),
                    point,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let weights = self
            .weights
            .iter()
            .map(|row| row.iter().map(|c| c.to_complex()).collect())
            .collect();
        Ok(WalkGraph::from_parts(
            self.alphabet,
            vertices,
            self.edges.clone(),
            weights,
            self.reversing,
        )?)
    }

    pub fn from_graph<F: Real>(graph: &WalkGraph<F>) -> Self {
        WalkConfig {
            alphabet: graph.alphabet(),
            vertices: graph
                .vertices()
                .iter()
                .map(|v| VertexConfig {
                    name: v.name.clone(),
                    point: v.point.as_ref().map(|p| p.to_string()),
                })
                .collect(),
            edges: (0..graph.alphabet())
                .map(|i| (0..graph.len()).map(|c| graph.edge(i, c)).collect())
                .collect(),
            weights: (0..graph.alphabet())
                .map(|i| {
                    (0..graph.len())
                        .map(|c| {
                            let w = graph.weight(i, c);
                            Cx(
                                num_traits::ToPrimitive::to_f64(&w.re).unwrap_or(f64::NAN),
                                num_traits::ToPrimitive::to_f64(&w.im).unwrap_or(f64::NAN),
                            )
                        })
                        .collect()
                })
                .collect(),
            reversing: graph.reversing(),
        }
    }
}

/// Loads and builds a walk graph from a JSON file.
pub fn load_walk<F: Real>(path: &Path) -> Result<WalkGraph<F>, ConfigError> {
    WalkConfig::from_path(path)?.build()
}

/// On-disk form of a generalized Walsh matrix: `M x N` rows of complex entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalshConfig {
    pub a: Vec<Vec<Cx>>,
}

impl WalshConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("walsh config serializes")
    }

    pub fn rows<F: Real>(&self) -> Vec<Vec<Complex<F>>> {
        self.a
            .iter()
            .map(|row| row.iter().map(|c| c.to_complex()).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_entries_accept_both_forms() {
        let cfg: FilterConfig =
            FilterConfig::from_json(r#"{"r":[[4]],"b":[[0],[2]],"l":[[0],[1]],"alpha":[1,[0.5,-0.5]]}"#)
                .unwrap();
        assert_eq!(cfg.alpha.as_ref().unwrap()[1], Cx(0.5, -0.5));
        let fs = cfg.build::<f64>().unwrap();
        assert_eq!(fs.filter_count(), 2);
    }

    #[test]
    fn config_round_trip() {
        let cfg =
            FilterConfig::from_json(r#"{"r":[[4]],"b":[[0],[2]],"l":[[0],[3]],"alpha":[1,1]}"#)
                .unwrap();
        let again = FilterConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn rejects_coefficient_ambiguity() {
        let cfg = FilterConfig::from_json(
            r#"{"r":[[4]],"b":[[0],[2]],"l":[[0],[1]],"alpha":[1,1],"a":[[1,1],[1,1]]}"#,
        )
        .unwrap();
        assert!(matches!(
            cfg.build::<f64>(),
            Err(ConfigError::CoefficientChoice)
        ));
    }

    #[test]
    fn rejects_non_expansive_scaling() {
        let cfg =
            FilterConfig::from_json(r#"{"r":[[1]],"b":[[0]],"l":[[0]],"alpha":[1]}"#).unwrap();
        let err = cfg.build::<f64>().unwrap_err();
        assert!(err.to_string().contains("not expansive"), "{err}");
    }

    #[test]
    fn rejects_wrong_coefficient_shape() {
        let cfg = FilterConfig::from_json(
            r#"{"r":[[4]],"b":[[0],[2]],"l":[[0],[1]],"a":[[1,1],[1]]}"#,
        )
        .unwrap();
        let err = cfg.build::<f64>().unwrap_err();
        assert!(err.to_string().contains("row 1"), "{err}");
    }
}
