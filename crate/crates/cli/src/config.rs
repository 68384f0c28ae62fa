use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Result;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use mminv::invariants::ModeChoice;
use mminv::KappaGrid;

use crate::Options;

/// Bad flags, unreadable or malformed inputs. Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Contents of a `--config` file; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    grid: Option<String>,
    mode: Option<String>,
    seed: Option<u64>,
    budget: Option<u64>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

/// Fully resolved settings of one run, echoed in every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// `None` keeps the command's own default (the family config's grid).
    pub grid: Option<KappaGrid>,
    pub mode: Option<ModeChoice>,
    /// `None` keeps the seed of the input config (0 for spaces).
    pub seed: Option<u64>,
    pub budget: Option<u64>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// Reads JSON or TOML, chosen by extension (JSON when unknown).
pub fn read_structured<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let toml = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("toml"));
    if toml {
        toml::from_str(&text)
            .map_err(|e| usage(format!("malformed TOML in {}: {e}", path.display())))
    } else {
        serde_json::from_str(&text)
            .map_err(|e| usage(format!("malformed JSON in {}: {e}", path.display())))
    }
}

impl RunConfig {
    pub fn resolve(opts: &Options) -> Result<Self> {
        let file: ConfigFile = match &opts.config {
            Some(p) => read_structured(p)?,
            None => ConfigFile::default(),
        };
        let grid = opts
            .grid
            .clone()
            .or(file.grid)
            .map(|g| g.parse::<KappaGrid>().map_err(|e| usage(e.to_string())))
            .transpose()?;
        let mode = opts
            .mode
            .clone()
            .or(file.mode)
            .map(|m| m.parse::<ModeChoice>().map_err(|e| usage(e.to_string())))
            .transpose()?;
        let format = match opts.format.as_deref() {
            Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => {
                return Err(usage(format!(
                    "unknown format {other:?} (expected json or csv)"
                )))
            }
            None => file.format.unwrap_or(Format::Json),
        };
        Ok(RunConfig {
            grid,
            mode,
            seed: opts.seed.or(file.seed),
            budget: opts.budget.or(file.budget),
            out: opts.out.clone().or(file.out),
            format,
        })
    }

    /// Writes to `--out` or standard output.
    pub fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text)
                .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}
