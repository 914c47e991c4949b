//! Run configuration: a versioned JSON document with one `params` object per
//! experiment. Unknown keys are rejected at every level.

use std::fmt;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::runner::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Experiment selected by the subcommand and named in the config.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Decorr,
    OffChar,
    Exponent,
    Dist,
    Projection,
    Pasep,
    Polymer,
    Classify,
    Shape,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Self::Decorr => "decorr",
            Self::OffChar => "off-char",
            Self::Exponent => "exponent",
            Self::Dist => "dist",
            Self::Projection => "projection",
            Self::Pasep => "pasep",
            Self::Polymer => "polymer",
            Self::Classify => "classify",
            Self::Shape => "shape",
        }
    }

    /// Whether the experiment draws random samples and therefore needs a seed.
    pub fn needs_seed(self) -> bool {
        !matches!(self, Self::Classify | Self::Shape)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Worker threads; the platform default when absent.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Directory name under the output directory; derived from the config hash by default.
    #[serde(default)]
    pub run_id: Option<String>,
    pub params: Value,
}

fn path_error<E: fmt::Display>(prefix: &str, err: serde_path_to_error::Error<E>) -> CliError {
    let path = err.path().to_string();
    let at = match (prefix, path.as_str()) {
        ("", ".") => ".".to_string(),
        (p, ".") => p.to_string(),
        ("", q) => q.to_string(),
        (p, q) => format!("{p}.{q}"),
    };
    CliError::Schema(format!("at `{at}`: {}", err.inner()))
}

/// Parses and validates the envelope of a config file.
pub fn parse(text: &str) -> Result<RunConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| path_error("", e))?;
    if cfg.schema_version != SCHEMA_VERSION {
        return Err(CliError::Schema(format!(
            "at `schema_version`: unsupported version {}, expected {SCHEMA_VERSION}",
            cfg.schema_version
        )));
    }
    if !cfg.params.is_object() {
        return Err(CliError::Schema("at `params`: expected an object".into()));
    }
    if let Some(id) = &cfg.run_id {
        if id.is_empty() || id.contains(['/', '\\']) || id == "." || id == ".." {
            return Err(CliError::Schema(format!(
                "at `run_id`: `{id}` is not a plain directory name"
            )));
        }
    }
    if cfg.workers == Some(0) {
        return Err(CliError::Schema("at `workers`: must be at least 1".into()));
    }
    Ok(cfg)
}

/// `params` with the seed merged in, when the experiment config carries one.
pub fn effective_params(params: &Value, seed: Option<u64>) -> Result<Value, CliError> {
    let mut v = params.clone();
    let map = v
        .as_object_mut()
        .ok_or_else(|| CliError::Schema("at `params`: expected an object".into()))?;
    if map.contains_key("seed") {
        return Err(CliError::Schema(
            "at `params.seed`: the seed is a top-level key".into(),
        ));
    }
    if let Some(s) = seed {
        map.insert("seed".into(), json!(s));
    }
    Ok(v)
}

/// Deserializes experiment parameters, naming the offending path on failure.
pub fn typed<T: DeserializeOwned>(params: Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(params).map_err(|e| path_error("params", e))
}

/// SHA-256 over the canonical JSON of everything that determines the results.
/// Worker count and output location are excluded on purpose.
pub fn config_hash(experiment: Experiment, seed: Option<u64>, params: &Value) -> String {
    let canonical = json!({
        "schema_version": SCHEMA_VERSION,
        "experiment": experiment,
        "seed": seed,
        "params": params,
    });
    let digest = Sha256::digest(canonical.to_string().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
