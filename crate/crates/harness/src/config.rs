//! TOML run configuration. Every field is optional; command-line flags
//! override file values, which override built-in defaults.
//!
//! ```toml
//! seed = 7
//! jobs = 2
//!
//! [growth]
//! nodes = 1000
//! nu = 5.0
//! p_defect = 0.7
//! alpha = 2.0
//! n_min = 2
//! n_max = 10
//! mode = "contamination"
//!
//! [analysis]
//! samples = 10000000
//! exhaustive_threshold = 250
//! restarts = 5
//!
//! [report]
//! seeds = 20
//! ```

use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;
use simplex_assembly::census::CompatibilityMode;
use simplex_assembly::growth::GrowthConfig;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    #[serde(default)]
    pub growth: GrowthSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub report: ReportSection,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthSection {
    pub nodes: Option<usize>,
    pub nu: Option<f64>,
    pub p_defect: Option<f64>,
    pub alpha: Option<f64>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub mode: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisSection {
    pub samples: Option<u64>,
    pub exhaustive_threshold: Option<usize>,
    pub restarts: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSection {
    pub seeds: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).context("invalid config file")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }
}

/// Growth flags as given on the command line; `None` means not given.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GrowthOverrides {
    pub nodes: Option<usize>,
    pub nu: Option<f64>,
    pub p_defect: Option<f64>,
    pub alpha: Option<f64>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub mode: Option<CompatibilityMode>,
    pub seed: Option<u64>,
}

/// Resolves flag > file > default and validates the result.
pub fn resolve_growth(file: &FileConfig, flags: &GrowthOverrides) -> Result<GrowthConfig> {
    let d = GrowthConfig::default();
    let g = &file.growth;
    let file_mode = g
        .mode
        .as_deref()
        .map(|m| m.parse::<CompatibilityMode>().map_err(anyhow::Error::msg))
        .transpose()?;
    let config = GrowthConfig {
        target_nodes: flags.nodes.or(g.nodes).unwrap_or(d.target_nodes),
        affinity: flags.nu.or(g.nu).unwrap_or(d.affinity),
        defect_probability: flags.p_defect.or(g.p_defect).unwrap_or(d.defect_probability),
        size_exponent: flags.alpha.or(g.alpha).unwrap_or(d.size_exponent),
        min_size: flags.n_min.or(g.n_min).unwrap_or(d.min_size),
        max_size: flags.n_max.or(g.n_max).unwrap_or(d.max_size),
        seed: flags.seed.or(file.seed).unwrap_or(d.seed),
        mode: flags.mode.or(file_mode).unwrap_or(d.mode),
    };
    config.validate()?;
    Ok(config)
}
