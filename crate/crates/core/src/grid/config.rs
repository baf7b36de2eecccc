//! Run configuration (JSON).

use std::fmt;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One grid value. Integers stay integers so IDs and CSV cells print `3`,
/// not `3.0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v}"),
            ParamValue::Text(v) => f.write_str(v),
        }
    }
}

impl ParamValue {
    fn from_json(v: &serde_json::Value) -> Option<Self> {
        match v {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(ParamValue::Int)
                .or_else(|| n.as_f64().map(ParamValue::Float)),
            serde_json::Value::String(s) => Some(ParamValue::Text(s.clone())),
            _ => None,
        }
    }

    pub(crate) fn as_count(&self) -> Option<i64> {
        match *self {
            ParamValue::Int(v) => Some(v),
            ParamValue::Float(v) if v.fract() == 0.0 && v.abs() < 9.0e15 => Some(v as i64),
            _ => None,
        }
    }

    pub(crate) fn as_real(&self) -> Option<f64> {
        match *self {
            ParamValue::Int(v) => Some(v as f64),
            ParamValue::Float(v) => Some(v),
            ParamValue::Text(_) => None,
        }
    }
}

/// The parameter lists of one config key, in file order. The optional
/// `"algorithm"` entry names the algorithm when the key itself does not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamGrid(pub IndexMap<String, serde_json::Value>);

impl ParamGrid {
    pub(crate) fn algorithm_override(&self, key: &str) -> Result<Option<&str>> {
        match self.0.get("algorithm") {
            None => Ok(None),
            Some(serde_json::Value::String(s)) => Ok(Some(s)),
            Some(_) => Err(Error::Config(format!("{key}: \"algorithm\" must be a string"))),
        }
    }

    /// Parameter lists sorted by name, `algorithm` excluded.
    pub(crate) fn sorted_lists(&self, key: &str) -> Result<Vec<(String, Vec<ParamValue>)>> {
        let mut lists = Vec::new();
        for (name, value) in self.0.iter().filter(|(n, _)| n.as_str() != "algorithm") {
            let arr = value
                .as_array()
                .ok_or_else(|| Error::Config(format!("{key}.{name}: expected a list of values")))?;
            if arr.is_empty() {
                return Err(Error::Config(format!("{key}.{name}: empty value list")));
            }
            let values = arr
                .iter()
                .map(|v| {
                    ParamValue::from_json(v).ok_or_else(|| {
                        Error::Config(format!("{key}.{name}: values must be numbers or strings, got {v}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            lists.push((name.clone(), values));
        }
        lists.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(lists)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub path: PathBuf,
    #[serde(default)]
    pub drop_na: bool,
    /// Charted features; all columns when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key_features: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_min_fraction")]
    pub min_cluster_fraction: f64,
    #[serde(default)]
    pub bonferroni: bool,
    pub dataset: DatasetConfig,
    pub algorithms: IndexMap<String, ParamGrid>,
}

fn default_alpha() -> f64 {
    0.05
}

fn default_min_fraction() -> f64 {
    0.05
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid run configuration: {e}")))?;
        config.settings().validate()?;
        Ok(config)
    }

    /// Reads a config file. A relative dataset path is resolved against the
    /// config file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_json(&text)?;
        if config.dataset.path.is_relative() {
            if let Some(dir) = path.parent() {
                config.dataset.path = dir.join(&config.dataset.path);
            }
        }
        Ok(config)
    }

    pub fn settings(&self) -> RunSettings {
        RunSettings {
            alpha: self.alpha,
            min_cluster_fraction: self.min_cluster_fraction,
            bonferroni: self.bonferroni,
        }
    }
}

/// Statistical settings shared by every candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub alpha: f64,
    pub min_cluster_fraction: f64,
    pub bonferroni: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            alpha: default_alpha(),
            min_cluster_fraction: default_min_fraction(),
            bonferroni: false,
        }
    }
}

impl RunSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(0.0..0.5).contains(&self.min_cluster_fraction) {
            return Err(Error::Config(format!(
                "min_cluster_fraction must lie in [0, 0.5), got {}",
                self.min_cluster_fraction
            )));
        }
        Ok(())
    }
}
