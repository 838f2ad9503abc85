use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Format, Mode, RunConfig};
use super::io::{decode_image, encode_edge_png, encode_gray_png, encode_pfm, encode_tiff_f32, encode_trace_csv};
use super::CliError;
use crate::image::Image;
use crate::oracle::closed_form_pst;
use crate::params::PstParams;
use crate::postproc::{derivative_baseline, morphological_clean, threshold_feature_map, EdgeMap};
use crate::synth::{generate, Pattern, PatternSpec};
use crate::transform::{FeatureMap, StretchPipeline};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stats {
    pub max_abs_phase: f64,
    pub mean_abs_phase: f64,
    pub edge_pixel_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_max_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_mean_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline_edge_pixel_count: Option<usize>,
    /// Peak |phase| near each ground-truth jump of a synthetic pattern.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_peaks: Option<Vec<f64>>,
}

/// One machine-readable summary line per processed input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub input: String,
    pub mode: String,
    pub params: PstParams,
    pub stats: Stats,
}

enum Job {
    File(PathBuf),
    Pattern(PatternSpec),
}

fn default_pattern() -> PatternSpec {
    PatternSpec::Staircase {
        levels: vec![100.0, 200.0, 400.0, 800.0],
        contrast: 10.0,
        plateau_width: 256,
        rows: 1,
    }
}

/// Runs every input of `cfg` (concurrently) and writes artifacts plus
/// `summary.jsonl` into the output directory.
pub fn run(cfg: &RunConfig) -> Result<Vec<Summary>, CliError> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| CliError::io(&cfg.out_dir, e))?;

    let jobs: Vec<(Job, String)> = if cfg.mode == Mode::Synth || cfg.inputs.is_empty() {
        let mut spec = cfg.pattern.clone().unwrap_or_else(default_pattern);
        if let Some(seed) = cfg.seed {
            spec = spec.with_seed(seed);
        }
        vec![(Job::Pattern(spec), "synth".to_string())]
    } else {
        let stems: Vec<String> = cfg
            .inputs
            .iter()
            .map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default())
            .collect();
        let unique = stems.iter().collect::<HashSet<_>>().len() == stems.len();
        cfg.inputs
            .iter()
            .zip(stems)
            .enumerate()
            .map(|(i, (p, s))| {
                let stem = if unique { s } else { format!("{i}-{s}") };
                (Job::File(p.clone()), stem)
            })
            .collect()
    };

    let summaries = jobs
        .par_iter()
        .map(|(job, stem)| process(cfg, job, stem))
        .collect::<Result<Vec<_>, _>>()?;

    let path = cfg.out_dir.join("summary.jsonl");
    let mut text = String::new();
    for s in &summaries {
        text.push_str(&serde_json::to_string(s).expect("summary serializes"));
        text.push('\n');
    }
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    Ok(summaries)
}

fn process(cfg: &RunConfig, job: &Job, stem: &str) -> Result<Summary, CliError> {
    let (image, label, pattern) = match job {
        Job::File(path) => (decode_image(path)?, path.display().to_string(), None),
        Job::Pattern(spec) => {
            let pattern = generate(spec)?;
            let kind = serde_json::to_value(spec)
                .ok()
                .and_then(|v| v.get("kind").and_then(|k| k.as_str()).map(str::to_string))
                .unwrap_or_default();
            (pattern.image.clone(), format!("synth:{kind}"), Some(pattern))
        }
    };
    let image = match cfg.mode {
        Mode::OneD => as_trace(image, &label)?,
        _ => image,
    };
    let out = Outputs {
        dir: &cfg.out_dir,
        stem,
        formats: cfg.effective_formats(),
    };

    if let Some(p) = &pattern {
        out.write_real("input", &p.image)?;
    }

    let (fm, pipeline) = feature_map(cfg, &image)?;
    if cfg.dump_kernel {
        let k = pipeline.phase_kernel();
        let (rows, cols) = k.shape();
        encode_pfm(&out.path("kernel_phi", "pfm"), rows, cols, k.phi())?;
    }
    let edges = morphological_clean(
        &threshold_feature_map(&fm, cfg.params.threshold_min, cfg.params.threshold_max)?,
        cfg.morph_min_size,
    );

    let mut stats = Stats {
        max_abs_phase: fm.max_abs(),
        mean_abs_phase: fm.mean_abs(),
        edge_pixel_count: edges.count(),
        oracle_max_diff: None,
        oracle_mean_diff: None,
        baseline_edge_pixel_count: None,
        step_peaks: pattern.as_ref().map(|p| step_peaks(&fm, p)),
    };

    match cfg.mode {
        Mode::TwoD | Mode::OneD | Mode::Synth => {
            out.write_phase("phase", &fm)?;
            out.write_edges("edges", &edges)?;
        }
        Mode::OracleCompare => {
            let oracle = closed_form_pst(&image, &cfg.params, cfg.params.taylor_order)?;
            let diff: Vec<f64> = fm
                .phase()
                .iter()
                .zip(oracle.phase())
                .map(|(a, b)| (a - b).abs())
                .collect();
            stats.oracle_max_diff = Some(diff.iter().fold(0.0, |m: f64, d| m.max(*d)));
            stats.oracle_mean_diff = Some(diff.iter().sum::<f64>() / diff.len() as f64);
            out.write_phase("pst", &fm)?;
            out.write_phase("oracle", &oracle)?;
            out.write_real("diff", &Image::new(fm.rows(), fm.cols(), diff)?)?;
        }
        Mode::BaselineCompare => {
            let gradient = derivative_baseline(&image)?;
            let cut = cfg.baseline_threshold * gradient.max_abs();
            let bits = gradient.pixels().iter().map(|&g| g > cut).collect();
            let sobel = morphological_clean(
                &EdgeMap::new(gradient.rows(), gradient.cols(), bits)?,
                cfg.morph_min_size,
            );
            stats.baseline_edge_pixel_count = Some(sobel.count());
            out.write_phase("phase", &fm)?;
            out.write_real("sobel", &gradient)?;
            encode_edge_png(&out.path("pst_edges", "png"), &edges)?;
            encode_edge_png(&out.path("sobel_edges", "png"), &sobel)?;
            write_side_by_side(&out.path("compare", "png"), &edges, &sobel)?;
        }
    }

    Ok(Summary {
        input: label,
        mode: cfg.mode.to_string(),
        params: cfg.params,
        stats,
    })
}

fn as_trace(img: Image, label: &str) -> Result<Image, CliError> {
    match img.shape() {
        (_, 1) => Ok(img),
        (1, _) => Ok(Image::from_trace(img.into_pixels())?),
        (r, c) => Err(CliError::format(
            label,
            format!("1d mode needs a single row or column, got {r}x{c}"),
        )),
    }
}

/// Runs the transform, with optional symmetric padding cropped afterwards.
fn feature_map(cfg: &RunConfig, img: &Image) -> Result<(FeatureMap, StretchPipeline), CliError> {
    let pad = cfg.pad;
    let (rows, cols) = img.shape();
    let pad_cols = if cols > 1 { pad } else { 0 };
    if pad > 0 && (pad > rows || pad_cols > cols) {
        return Err(CliError::config(
            "pad",
            format!("padding {pad} exceeds the {rows}x{cols} input"),
        ));
    }
    let padded = if pad > 0 { pad_symmetric(img, pad, pad_cols)? } else { img.clone() };
    let pipeline = StretchPipeline::new(padded.rows(), padded.cols(), &cfg.params)?;
    let fm = pipeline.apply(&padded)?;
    if pad == 0 {
        return Ok((fm, pipeline));
    }
    let mut phase = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            phase.push(fm.get(r + pad, c + pad_cols));
        }
    }
    Ok((FeatureMap::new(rows, cols, phase)?, pipeline))
}

/// Mirror padding that repeats the edge sample (`abc|cba`).
fn pad_symmetric(img: &Image, pad_rows: usize, pad_cols: usize) -> crate::Result<Image> {
    let (rows, cols) = img.shape();
    let reflect = |i: isize, n: usize| -> usize {
        let n = n as isize;
        if i < 0 {
            (-i - 1) as usize
        } else if i >= n {
            (2 * n - i - 1) as usize
        } else {
            i as usize
        }
    };
    Image::from_fn(rows + 2 * pad_rows, cols + 2 * pad_cols, |r, c| {
        let sr = reflect(r as isize - pad_rows as isize, rows);
        let sc = reflect(c as isize - pad_cols as isize, cols);
        img.get(sr, sc)
    })
}

/// Peak |phase| in a window around each jump, along the varying axis of
/// the middle row. The window spans half the gap to the nearest other
/// discontinuity.
fn step_peaks(fm: &FeatureMap, pattern: &Pattern) -> Vec<f64> {
    let trace: Vec<f64> = if fm.cols() == 1 {
        fm.phase().to_vec()
    } else {
        let r = fm.rows() / 2;
        (0..fm.cols()).map(|c| fm.get(r, c)).collect()
    };
    let n = trace.len();
    let mut marks: Vec<usize> = pattern.jumps.iter().chain(&pattern.boundaries).copied().collect();
    marks.sort_unstable();
    pattern
        .jumps
        .iter()
        .map(|&j| {
            let gap = marks
                .iter()
                .filter(|&&m| m != j)
                .map(|&m| m.abs_diff(j).min(n - m.abs_diff(j)))
                .min()
                .unwrap_or(n);
            let half = (gap / 2).max(1);
            (0..2 * half)
                .map(|k| trace[(j + n + k - half) % n].abs())
                .fold(0.0, f64::max)
        })
        .collect()
}

struct Outputs<'a> {
    dir: &'a Path,
    stem: &'a str,
    formats: Vec<Format>,
}

impl Outputs<'_> {
    fn path(&self, what: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{}.{what}.{ext}", self.stem))
    }

    fn has(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn write_values(&self, what: &str, rows: usize, cols: usize, values: &[f64]) -> Result<(), CliError> {
        if cols == 1 && self.has(Format::Csv) {
            encode_trace_csv(&self.path(what, "csv"), what, values)?;
        }
        if self.has(Format::Pfm) {
            encode_pfm(&self.path(what, "pfm"), rows, cols, values)?;
        }
        if self.has(Format::Tiff) {
            encode_tiff_f32(&self.path(what, "tiff"), rows, cols, values)?;
        }
        Ok(())
    }

    fn write_phase(&self, what: &str, fm: &FeatureMap) -> Result<(), CliError> {
        self.write_values(what, fm.rows(), fm.cols(), fm.phase())
    }

    fn write_real(&self, what: &str, img: &Image) -> Result<(), CliError> {
        self.write_values(what, img.rows(), img.cols(), img.pixels())
    }

    fn write_edges(&self, what: &str, em: &EdgeMap) -> Result<(), CliError> {
        if self.has(Format::Png) {
            encode_edge_png(&self.path(what, "png"), em)?;
        }
        if em.cols() == 1 && self.has(Format::Csv) {
            let flags: Vec<f64> = em.bits().iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
            encode_trace_csv(&self.path(what, "csv"), what, &flags)?;
        }
        Ok(())
    }
}

fn write_side_by_side(path: &Path, left: &EdgeMap, right: &EdgeMap) -> Result<(), CliError> {
    let (rows, cols) = left.shape();
    let width = 2 * cols + 1;
    let mut data = vec![0u8; rows * width];
    for r in 0..rows {
        data[r * width + cols] = 128;
        for c in 0..cols {
            if left.get(r, c) {
                data[r * width + c] = 255;
            }
            if right.get(r, c) {
                data[r * width + cols + 1 + c] = 255;
            }
        }
    }
    encode_gray_png(path, rows, width, &data)
}
