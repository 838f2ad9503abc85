use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::params::{Localization, PstParams};
use crate::synth::PatternSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "2d")]
    TwoD,
    #[serde(rename = "1d")]
    OneD,
    #[serde(rename = "synth")]
    Synth,
    #[serde(rename = "oracle-compare")]
    OracleCompare,
    #[serde(rename = "baseline-compare")]
    BaselineCompare,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| {
            format!("unknown mode `{s}` (expected 2d, 1d, synth, oracle-compare, baseline-compare)")
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("mode serializes");
        f.write_str(s.as_str().unwrap_or_default())
    }
}

/// Output container for a raster or trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Portable float map, 32-bit, radians unscaled.
    Pfm,
    /// 32-bit float grayscale TIFF, radians unscaled.
    Tiff,
    /// 8-bit edge map, 0/255.
    Png,
    /// `index,value` rows for traces.
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        serde_json::from_value(serde_json::Value::String(s.trim().to_ascii_lowercase()))
            .map_err(|_| format!("unknown format `{s}` (expected pfm, tiff, png, csv)"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "pst", version, about = "Phase Stretch Transform feature extraction")]
#[command(allow_negative_numbers = true)]
pub struct Args {
    /// 2d, 1d, synth, oracle-compare or baseline-compare
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Input raster (PNG/PGM) or CSV trace; repeatable
    #[arg(long = "input", num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Kernel strength S (radians at the largest frequency radius)
    #[arg(long)]
    pub strength: Option<f64>,
    /// Kernel warp W
    #[arg(long)]
    pub warp: Option<f64>,
    /// Gaussian localization sigma in cycles/sample; omit for identity
    #[arg(long)]
    pub lpf_sigma: Option<f64>,
    #[arg(long)]
    pub threshold_min: Option<f64>,
    #[arg(long)]
    pub threshold_max: Option<f64>,
    /// Even Taylor order of the closed-form oracle
    #[arg(long)]
    pub taylor_order: Option<usize>,
    /// Symmetric padding in pixels on every side, cropped after the transform
    #[arg(long)]
    pub pad: Option<usize>,
    /// Remove 8-connected edge components up to this many pixels (0 = off)
    #[arg(long)]
    pub morph_min_size: Option<usize>,
    /// Comma-separated output formats: pfm, tiff, png, csv
    #[arg(long, value_delimiter = ',')]
    pub formats: Option<Vec<Format>>,
    /// JSON run configuration; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for synthetic noise patterns
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the kernel phase as a float raster
    #[arg(long)]
    pub dump_kernel: bool,
}

fn default_mode() -> Mode {
    Mode::TwoD
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("pst-out")
}

fn default_baseline_threshold() -> f64 {
    0.1
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub params: PstParams,
    #[serde(default)]
    pub pad: usize,
    #[serde(default)]
    pub morph_min_size: usize,
    /// Empty means the mode's defaults.
    #[serde(default)]
    pub formats: Vec<Format>,
    /// Pattern for `synth` mode (and for `oracle-compare` without inputs).
    #[serde(default)]
    pub pattern: Option<PatternSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Sobel edge threshold as a fraction of the peak gradient.
    #[serde(default = "default_baseline_threshold")]
    pub baseline_threshold: f64,
    #[serde(default)]
    pub dump_kernel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config deserializes")
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))
    }

    /// Merges the JSON config (if any) with flag overrides and validates.
    pub fn resolve(args: &Args) -> Result<Self, CliError> {
        let mut cfg = match &args.config {
            Some(path) => Self::from_json_file(path)?,
            None => Self::default(),
        };
        if let Some(mode) = args.mode {
            cfg.mode = mode;
        }
        if !args.inputs.is_empty() {
            cfg.inputs = args.inputs.clone();
        }
        if let Some(dir) = &args.out_dir {
            cfg.out_dir = dir.clone();
        }
        let p = &mut cfg.params;
        if let Some(s) = args.strength {
            p.strength = s;
        }
        if let Some(w) = args.warp {
            p.warp = w;
        }
        if let Some(sigma) = args.lpf_sigma {
            p.localization = Localization::Gaussian { sigma };
        }
        if let Some(t) = args.threshold_min {
            p.threshold_min = t;
        }
        if let Some(t) = args.threshold_max {
            p.threshold_max = t;
        }
        if let Some(m) = args.taylor_order {
            p.taylor_order = m;
        }
        if let Some(pad) = args.pad {
            cfg.pad = pad;
        }
        if let Some(n) = args.morph_min_size {
            cfg.morph_min_size = n;
        }
        if let Some(formats) = &args.formats {
            cfg.formats = formats.clone();
        }
        if let Some(seed) = args.seed {
            cfg.seed = Some(seed);
        }
        cfg.dump_kernel |= args.dump_kernel;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let p = &self.params;
        if !(p.strength.is_finite() && p.strength >= 0.0) {
            return Err(CliError::config("strength", format!("must be >= 0, got {}", p.strength)));
        }
        if !(p.warp.is_finite() && p.warp > 0.0) {
            return Err(CliError::config("warp", format!("must be > 0, got {}", p.warp)));
        }
        if let Localization::Gaussian { sigma } = p.localization {
            if !(sigma.is_finite() && sigma > 0.0) {
                return Err(CliError::config("lpf-sigma", format!("must be > 0, got {sigma}")));
            }
        }
        if p.threshold_min > 0.0 {
            return Err(CliError::config("threshold-min", format!("must be <= 0, got {}", p.threshold_min)));
        }
        if p.threshold_max < 0.0 {
            return Err(CliError::config("threshold-max", format!("must be >= 0, got {}", p.threshold_max)));
        }
        if p.taylor_order < 2 || !p.taylor_order.is_multiple_of(2) {
            return Err(CliError::config(
                "taylor-order",
                format!("must be even and >= 2, got {}", p.taylor_order),
            ));
        }
        if !(self.baseline_threshold > 0.0 && self.baseline_threshold <= 1.0) {
            return Err(CliError::config(
                "baseline_threshold",
                format!("must lie in (0, 1], got {}", self.baseline_threshold),
            ));
        }
        let needs_inputs = !matches!(self.mode, Mode::Synth | Mode::OracleCompare);
        if needs_inputs && self.inputs.is_empty() {
            return Err(CliError::config("input", format!("mode {} needs at least one input", self.mode)));
        }
        if self.mode == Mode::OracleCompare && self.inputs.is_empty() && self.pattern.is_none() {
            return Err(CliError::config("input", "oracle-compare needs inputs or a pattern"));
        }
        for path in &self.inputs {
            if !path.is_file() {
                return Err(CliError::io(
                    path,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "input not found"),
                ));
            }
        }
        Ok(())
    }

    /// Output formats in effect for this mode.
    pub fn effective_formats(&self) -> Vec<Format> {
        if !self.formats.is_empty() {
            return self.formats.clone();
        }
        match self.mode {
            Mode::OneD => vec![Format::Csv],
            _ => vec![Format::Pfm, Format::Png, Format::Csv],
        }
    }
}
