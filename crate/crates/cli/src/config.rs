//! Job configuration: session dimensions, truncations and output format.
//!
//! An optional JSON config file supplies the same fields as the flags;
//! flags win where both are present.

use serde::Deserialize;
use starcalc_core::VarContext;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Human,
    Json,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub parameters: Option<Vec<String>>,
    #[serde(default)]
    pub truncation: Truncation,
    pub format: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Truncation {
    pub hbar_min: Option<i64>,
    pub t_deg: Option<usize>,
    pub s_deg: Option<usize>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub n: usize,
    pub parameters: Vec<String>,
    pub hbar_min: Option<i64>,
    pub t_deg: usize,
    pub s_deg: usize,
    pub format: OutputFormat,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            n: 1,
            parameters: vec!["theta".to_string()],
            hbar_min: None,
            t_deg: 6,
            s_deg: 6,
            format: OutputFormat::Human,
        }
    }
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<FileConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn apply_file(&mut self, file: FileConfig) -> Result<(), String> {
        if let Some(n) = file.n {
            self.n = n;
        }
        if let Some(p) = file.parameters {
            self.parameters = p;
        }
        if let Some(h) = file.truncation.hbar_min {
            self.hbar_min = Some(h);
        }
        if let Some(d) = file.truncation.t_deg {
            self.t_deg = d;
        }
        if let Some(s) = file.truncation.s_deg {
            self.s_deg = s;
        }
        if let Some(f) = file.format {
            self.format = match f.as_str() {
                "human" => OutputFormat::Human,
                "json" => OutputFormat::Json,
                other => return Err(format!("unknown format '{other}'")),
            };
        }
        Ok(())
    }

    /// hbar_min, when given, must leave room for order-0 workflows.
    pub fn validate(&self) -> Result<(), String> {
        if let Some(h) = self.hbar_min {
            if h > 0 {
                return Err(format!("hbar_min must be <= 0, got {h}"));
            }
        }
        Ok(())
    }

    pub fn context(&self) -> VarContext {
        VarContext::new(self.n, self.parameters.iter().cloned())
    }
}
