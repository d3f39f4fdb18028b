//! File formats and shared plumbing for the `cwmix` command-line tool.
//!
//! Mixtures are stored as [`MixtureFile`] (covariances as full square
//! matrices, `dof` only for t components) and direction sets as
//! [`DirectionsFile`], optionally carrying the certification report that
//! produced them. Floats are written in shortest round-trip form, so reading a
//! file back yields bit-identical values.

use std::fs;
use std::path::{Path, PathBuf};

use cwmix::{DirectionSet, MixtureModel, RawMixture, SmuReport};
use serde::{Deserialize, Serialize};

/// Seed used when neither `--seed` nor the environment override is given.
pub const DEFAULT_SEED: u64 = 0;

/// Environment variable consulted for the seed when `--seed` is absent.
pub const SEED_ENV: &str = "CWMIX_SEED";

pub type MixtureFile = RawMixture;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionsFile {
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification: Option<SmuReport>,
}

impl DirectionsFile {
    pub fn to_set(&self) -> cwmix::Result<DirectionSet> {
        DirectionSet::new(self.dim, self.vectors.clone())
    }
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const ERROR: u8 = 1;
    pub const DISTINCT: u8 = 2;
    pub const NOT_CERTIFIED: u8 = 3;
    pub const INCONCLUSIVE: u8 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Model(#[from] cwmix::Error),
    #[error("invalid {what}: {value:?}")]
    BadValue { what: &'static str, value: String },
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    fs::write(path, to_json(value)).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn read_mixture(path: &Path) -> Result<MixtureModel, CliError> {
    let raw: MixtureFile = read_json(path)?;
    Ok(MixtureModel::validate(&raw)?)
}

pub fn read_directions(path: &Path) -> Result<DirectionSet, CliError> {
    let file: DirectionsFile = read_json(path)?;
    Ok(file.to_set()?)
}

/// Parses `"c1,c2,..."` into a vector.
pub fn parse_direction(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim().parse::<f64>().map_err(|_| CliError::BadValue {
                what: "direction",
                value: text.to_owned(),
            })
        })
        .collect()
}

/// `flag` wins over the environment, which wins over [`DEFAULT_SEED`].
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match (flag, env) {
        (Some(seed), _) => Ok(seed),
        (None, Some(text)) => text.trim().parse().map_err(|_| CliError::BadValue {
            what: SEED_ENV,
            value: text.to_owned(),
        }),
        (None, None) => Ok(DEFAULT_SEED),
    }
}
