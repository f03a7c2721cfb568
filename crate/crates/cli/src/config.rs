//! Settings from a JSON or TOML file, overridden by command-line flags.

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// Every key a settings file may hold. Keys use kebab-case, as the flags do.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub graph: Option<PathBuf>,
    pub instances: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub seed: Option<u64>,
    pub round_cap: Option<usize>,
    pub oracle: Option<bool>,
    pub no_validate: Option<bool>,
    pub sequential: Option<bool>,
    pub k: Option<usize>,
    pub root: Option<usize>,
    pub eps: Option<f64>,
    pub algo: Option<String>,
    pub scheme: Option<String>,
    pub mode: Option<String>,
    pub colors: Option<String>,
    pub split: Option<usize>,
    pub forests: Option<usize>,
    pub spec: Option<PathBuf>,
    pub bundled: Option<String>,
    pub cap: Option<usize>,
    pub problem: Option<String>,
}

impl FileConfig {
    /// Reads a settings file. Relative paths inside it are taken relative to
    /// the file's own directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
        let mut cfg: FileConfig = if is_json {
            serde_json::from_str(&text).with_context(|| format!("parsing JSON config {}", path.display()))?
        } else {
            toml::from_str(&text).with_context(|| format!("parsing TOML config {}", path.display()))?
        };
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.graph, &mut cfg.instances, &mut cfg.report, &mut cfg.spec].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Resolved common settings.
#[derive(Debug, Clone)]
pub struct Settings {
    pub graph: Option<PathBuf>,
    pub instances: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub seed: u64,
    pub round_cap: Option<usize>,
    pub oracle: bool,
    pub validate: bool,
    pub sequential: bool,
    pub fixtures: Option<PathBuf>,
}

impl Settings {
    /// Looks `path` up as given, then under the fixture directory.
    pub fn locate(&self, path: &Path) -> Result<PathBuf> {
        if path.exists() {
            return Ok(path.to_path_buf());
        }
        if let Some(dir) = &self.fixtures {
            let candidate = dir.join(path);
            if candidate.exists() {
                return Ok(candidate);
            }
        }
        bail!("file {} not found (fixture directory: {:?})", path.display(), self.fixtures)
    }

    pub fn graph_path(&self) -> Result<PathBuf> {
        let p = self.graph.as_ref().context("--graph is required")?;
        self.locate(p)
    }

    pub fn instances_path(&self) -> Result<Option<PathBuf>> {
        self.instances.as_ref().map(|p| self.locate(p)).transpose()
    }
}

/// Picks the flag, then the file value, then the default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Parses a choice given as a string in a settings file.
pub fn pick_enum<T: clap::ValueEnum>(flag: Option<T>, file: Option<&str>, default: T, key: &str) -> Result<T> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file {
        Some(s) => T::from_str(s, true).map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")),
        None => Ok(default),
    }
}
