//! Run configuration: a single JSON document per run, overridable by
//! command-line flags (flags win).  The fully resolved configuration is
//! embedded in the manifest, and a manifest can be fed back through
//! `--config` to reproduce the run.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, Default, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pop_size: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pop_sizes: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
}

impl Config {
    /// Fields set in `other` override those already present.
    pub fn overlay(&mut self, other: &Config) {
        macro_rules! take {
            ($($f:ident),*) => {
                $(if other.$f.is_some() { self.$f = other.$f.clone(); })*
            };
        }
        take!(
            model, mu, b, pop_size, pop_sizes, reps, paths, dt, grid, seed, horizon, gamma,
            cap, start, x0, noise_scale, suite
        );
    }

    /// Load from a config file; a manifest with an embedded `config` object
    /// is accepted as well.
    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let payload = if let Some(inner) = value.get("config") {
            inner.clone()
        } else {
            value
        };
        serde_json::from_value(payload).with_context(|| format!("decoding {}", path.display()))
    }

    pub fn model_tag(&self) -> Result<&str> {
        match self.model.as_deref() {
            Some("watterson") | Some("subfunc") => Ok(self.model.as_deref().unwrap()),
            Some(other) => bail!("unknown model {other:?}; expected watterson or subfunc"),
            None => bail!("--model is required for this command"),
        }
    }

    pub fn mu_value(&self) -> Result<f64> {
        let mu = self.mu.context("--mu is required for the watterson model")?;
        if !(mu > 0.0 && mu < 1.0) {
            bail!("mu must lie in (0, 1), got {mu}");
        }
        Ok(mu)
    }

    pub fn b_value(&self) -> Result<f64> {
        let b = self.b.context("--b is required for the subfunc model")?;
        if !(b > 0.0 && b < 1.0 / 3.0) {
            bail!("b must lie in (0, 1/3), got {b}");
        }
        Ok(b)
    }
}
