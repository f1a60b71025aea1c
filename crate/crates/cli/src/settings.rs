//! Tuning knobs: defaults, overridden by a `key = value` config file, overridden by flags.

use std::path::Path;

use clap::Args;
use qpcount::eval::{CountOptions, Method};
use qpcount::fit::FitConfig;
use serde::Deserialize;

use crate::input::UsageError;

#[derive(Args, Debug, Clone, Default)]
pub struct Knobs {
    /// Largest constituent degree tried by the fitter [default: 8]
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
    /// Largest period tried by the fitter [default: 360]
    #[arg(long, global = true)]
    pub max_period: Option<usize>,
    /// First parameter value sampled by the fitter [default: 1]
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub sample_start: Option<i64>,
    /// Extrapolation checks per residue class [default: 3]
    #[arg(long, global = true)]
    pub verify_points_per_class: Option<usize>,
    /// Largest number of points scanned below the window for exceptions [default: 5000]
    #[arg(long, global = true)]
    pub threshold_scan_limit: Option<usize>,
    /// Half-width of the first probe box for unbounded variables [default: 64]
    #[arg(long, global = true)]
    pub probe_start: Option<i64>,
    /// Number of probe box doublings [default: 3]
    #[arg(long, global = true)]
    pub probe_doublings: Option<u32>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileKnobs {
    max_degree: Option<usize>,
    max_period: Option<usize>,
    sample_start: Option<i64>,
    verify_points_per_class: Option<usize>,
    threshold_scan_limit: Option<usize>,
    probe_start: Option<i64>,
    probe_doublings: Option<u32>,
    jobs: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub fit: FitConfig,
    pub count: CountOptions,
    pub jobs: Option<usize>,
}

impl Settings {
    pub fn load(config: Option<&Path>, flags: &Knobs, jobs: Option<usize>) -> Result<Settings, UsageError> {
        let file = match config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str::<FileKnobs>(&text)
                    .map_err(|e| UsageError(format!("bad config file {}: {}", path.display(), e.message())))?
            }
            None => FileKnobs::default(),
        };
        let d = FitConfig::default();
        let fit = FitConfig {
            max_degree: flags.max_degree.or(file.max_degree).unwrap_or(d.max_degree),
            max_period: flags.max_period.or(file.max_period).unwrap_or(d.max_period),
            sample_start: flags.sample_start.or(file.sample_start).unwrap_or(d.sample_start),
            verify_points_per_class: flags
                .verify_points_per_class
                .or(file.verify_points_per_class)
                .unwrap_or(d.verify_points_per_class),
            threshold_scan_limit: flags
                .threshold_scan_limit
                .or(file.threshold_scan_limit)
                .unwrap_or(d.threshold_scan_limit),
        };
        let c = CountOptions::default();
        let jobs = jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err(UsageError("--jobs must be at least 1".into()));
        }
        let count = CountOptions {
            probe_start: flags.probe_start.or(file.probe_start).unwrap_or(c.probe_start),
            probe_doublings: flags
                .probe_doublings
                .or(file.probe_doublings)
                .unwrap_or(c.probe_doublings),
            parallel: jobs != Some(1),
            ..c
        };
        if count.probe_start < 1 {
            return Err(UsageError("probe_start must be positive".into()));
        }
        Ok(Settings { fit, count, jobs })
    }

    pub fn with_method(&self, method: Method) -> CountOptions {
        CountOptions {
            method,
            ..self.count.clone()
        }
    }
}
