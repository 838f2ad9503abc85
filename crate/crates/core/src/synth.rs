//! Synthetic test inputs: equal-contrast staircases, steps, ramps, smooth
//! bumps and band-limited noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};
use crate::fft::{forward_spectrum, inverse_field};
use crate::grid::make_frequency_grid;
use crate::image::{ComplexField, Image};

fn one() -> usize {
    1
}

fn unit() -> f64 {
    1.0
}

/// Description of a synthetic input. Traces are `length × 1`; setting
/// `rows > 1` on the 1-D kinds replicates the trace along rows, giving a
/// `rows × length` image that varies along columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PatternSpec {
    /// One plateau per brightness level; each plateau rises by `contrast`
    /// halfway across.
    Staircase {
        levels: Vec<f64>,
        contrast: f64,
        plateau_width: usize,
        #[serde(default = "one")]
        rows: usize,
    },
    Step {
        length: usize,
        low: f64,
        high: f64,
        position: usize,
        #[serde(default = "one")]
        rows: usize,
    },
    /// `start + (end − start)·k/(length − 1)`.
    Ramp {
        length: usize,
        #[serde(default)]
        start: f64,
        #[serde(default = "unit")]
        end: f64,
        #[serde(default = "one")]
        rows: usize,
    },
    /// `background + amplitude·exp(−d²/(2σ²))` around the image centre.
    GaussianBump {
        rows: usize,
        cols: usize,
        background: f64,
        amplitude: f64,
        sigma: f64,
    },
    /// Uniform noise with every bin beyond `cutoff` (cycles/sample, per
    /// axis) removed, rescaled to peak deviation `amplitude` around `offset`.
    BandlimitedNoise {
        rows: usize,
        cols: usize,
        cutoff: f64,
        offset: f64,
        amplitude: f64,
        seed: u64,
    },
}

/// A generated image and its ground-truth discontinuities (indices along
/// the varying axis; index `i` means the jump lies between `i − 1` and `i`).
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub image: Image,
    /// Equal-contrast jumps, one per staircase level.
    pub jumps: Vec<usize>,
    /// Plateau-to-plateau transitions of a staircase.
    pub boundaries: Vec<usize>,
}

impl PatternSpec {
    pub fn with_seed(self, new_seed: u64) -> Self {
        match self {
            PatternSpec::BandlimitedNoise {
                rows,
                cols,
                cutoff,
                offset,
                amplitude,
                ..
            } => PatternSpec::BandlimitedNoise {
                rows,
                cols,
                cutoff,
                offset,
                amplitude,
                seed: new_seed,
            },
            other => other,
        }
    }
}

fn trace_image(trace: Vec<f64>, rows: usize) -> Result<Image> {
    if rows == 0 {
        return Err(invalid_arg("rows must be >= 1"));
    }
    if rows == 1 {
        return Image::from_trace(trace);
    }
    let cols = trace.len();
    Image::from_fn(rows, cols, |_, c| trace[c])
}

pub fn generate(spec: &PatternSpec) -> Result<Pattern> {
    match spec {
        PatternSpec::Staircase {
            levels,
            contrast,
            plateau_width,
            rows,
        } => staircase(levels, *contrast, *plateau_width, *rows),
        PatternSpec::Step {
            length,
            low,
            high,
            position,
            rows,
        } => {
            if *length < 2 || *position == 0 || position >= length {
                return Err(invalid_arg(format!(
                    "step position {position} must lie in 1..{length}"
                )));
            }
            let trace = (0..*length).map(|i| if i < *position { *low } else { *high }).collect();
            Ok(Pattern {
                image: trace_image(trace, *rows)?,
                jumps: if low != high { vec![*position] } else { vec![] },
                boundaries: vec![],
            })
        }
        PatternSpec::Ramp {
            length,
            start,
            end,
            rows,
        } => {
            if *length < 2 {
                return Err(invalid_arg("ramp needs at least 2 samples"));
            }
            let denom = (*length - 1) as f64;
            let trace = (0..*length).map(|k| start + (end - start) * (k as f64 / denom)).collect();
            Ok(Pattern {
                image: trace_image(trace, *rows)?,
                jumps: vec![],
                boundaries: vec![],
            })
        }
        PatternSpec::GaussianBump {
            rows,
            cols,
            background,
            amplitude,
            sigma,
        } => {
            if sigma.is_nan() || *sigma <= 0.0 {
                return Err(invalid_arg(format!("bump sigma must be > 0, got {sigma}")));
            }
            let (cr, cc) = (*rows as f64 / 2.0, *cols as f64 / 2.0);
            let two_var = 2.0 * sigma * sigma;
            let flat_cols = *cols == 1;
            let image = Image::from_fn(*rows, *cols, |r, c| {
                let dr = r as f64 - cr;
                let dc = if flat_cols { 0.0 } else { c as f64 - cc };
                background + amplitude * (-(dr * dr + dc * dc) / two_var).exp()
            })?;
            Ok(Pattern {
                image,
                jumps: vec![],
                boundaries: vec![],
            })
        }
        PatternSpec::BandlimitedNoise {
            rows,
            cols,
            cutoff,
            offset,
            amplitude,
            seed,
        } => bandlimited_noise(*rows, *cols, *cutoff, *offset, *amplitude, *seed),
    }
}

fn staircase(levels: &[f64], contrast: f64, width: usize, rows: usize) -> Result<Pattern> {
    if levels.is_empty() {
        return Err(invalid_arg("staircase needs at least one brightness level"));
    }
    if levels.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(invalid_arg("staircase brightness levels must be strictly increasing"));
    }
    if !(contrast > 0.0 && contrast.is_finite()) {
        return Err(invalid_arg(format!("staircase contrast must be > 0, got {contrast}")));
    }
    if width < 2 {
        return Err(invalid_arg("plateau width must be >= 2"));
    }
    let half = width / 2;
    let mut trace = Vec::with_capacity(levels.len() * width);
    let mut jumps = Vec::with_capacity(levels.len());
    let mut boundaries = Vec::new();
    for (k, &level) in levels.iter().enumerate() {
        let start = k * width;
        if k > 0 {
            boundaries.push(start);
        }
        jumps.push(start + half);
        trace.extend(std::iter::repeat_n(level, half));
        trace.extend(std::iter::repeat_n(level + contrast, width - half));
    }
    Ok(Pattern {
        image: trace_image(trace, rows)?,
        jumps,
        boundaries,
    })
}

fn bandlimited_noise(
    rows: usize,
    cols: usize,
    cutoff: f64,
    offset: f64,
    amplitude: f64,
    seed: u64,
) -> Result<Pattern> {
    if !(cutoff > 0.0 && cutoff < 0.5) {
        return Err(invalid_arg(format!("noise cutoff must lie in (0, 0.5), got {cutoff}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let white: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let white = Image::new(rows, cols, white)?;
    let grid = make_frequency_grid(rows, cols)?;
    let spectrum = forward_spectrum(&white)?;
    let masked: Vec<Complex64> = spectrum
        .values()
        .iter()
        .zip(grid.u().iter().zip(grid.v()))
        .enumerate()
        .map(|(i, (&s, (&u, &v)))| {
            // DC is replaced by the offset below.
            if i == 0 || u.abs() > cutoff || v.abs() > cutoff {
                Complex64::default()
            } else {
                s
            }
        })
        .collect();
    let field = inverse_field(&ComplexField::new(rows, cols, masked)?)?;
    let smooth = field.real_part();
    let peak = smooth.max_abs();
    let scale = if peak > 0.0 { amplitude / peak } else { 0.0 };
    let pixels = smooth.pixels().iter().map(|p| offset + scale * p).collect();
    Ok(Pattern {
        image: Image::new(rows, cols, pixels)?,
        jumps: vec![],
        boundaries: vec![],
    })
}
