//! Flag / config-file / default resolution.

use std::path::{Path, PathBuf};

use serde::Deserialize;

/// Fields accepted by `--config <json>`; every one is optional and loses to
/// the matching command-line flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub dims: Option<Vec<usize>>,
    pub trials: Option<usize>,
    pub purity: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<String>,
    pub threads: Option<usize>,
    pub n_coarse: Option<usize>,
    pub state: Option<String>,
    pub restarts: Option<usize>,
    pub max_iters: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "both" => Ok(Format::Both),
            other => Err(format!("unknown format {other:?}; expected csv, json or both")),
        }
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

/// Directory used when neither `--out-dir`, the config file nor `QADLAB_OUT` names one.
pub const DEFAULT_OUT_DIR: &str = "qadlab-out";

pub fn resolve_out_dir(flag: Option<PathBuf>, file: Option<PathBuf>) -> PathBuf {
    flag.or(file)
        .or_else(|| std::env::var_os("QADLAB_OUT").filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

pub fn check_dims(dims: &[usize]) -> Result<(), String> {
    if dims.is_empty() {
        return Err("--dims must list at least one dimension".into());
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(format!("dimension {d} is below 2"));
    }
    Ok(())
}

pub fn check_trials(trials: usize) -> Result<(), String> {
    if trials == 0 {
        return Err("--trials must be at least 1".into());
    }
    Ok(())
}

pub fn check_purity(p: f64) -> Result<(), String> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(format!("--purity {p} outside (0, 1]"));
    }
    Ok(())
}

pub fn check_threads(threads: Option<usize>) -> Result<(), String> {
    if threads == Some(0) {
        return Err("--threads must be at least 1".into());
    }
    Ok(())
}
