//! The stretch operator and its phase readout.

use log::warn;
use rustfft::num_complex::Complex64;

use crate::error::{invalid_arg, Error, Result};
use crate::fft::{forward_spectrum, inverse_field};
use crate::grid::make_frequency_grid;
use crate::image::{ComplexField, Image};
use crate::kernel::{build_localization_kernel, build_warped_kernel, LocalizationKernel, PhaseKernel};
use crate::params::PstParams;

/// Per-pixel phase of the stretched field, in (−π, π].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMap {
    rows: usize,
    cols: usize,
    phase: Vec<f64>,
}

impl FeatureMap {
    pub fn new(rows: usize, cols: usize, phase: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || phase.len() != rows * cols {
            return Err(invalid_arg(format!(
                "{} phase values for a {rows}x{cols} map",
                phase.len()
            )));
        }
        let pi = std::f64::consts::PI;
        if let Some(p) = phase.iter().find(|p| !(p.is_finite() && **p > -pi && **p <= pi)) {
            return Err(Error::InvalidInput(format!("phase value {p} outside (-pi, pi]")));
        }
        Ok(Self { rows, cols, phase })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.phase[row * self.cols + col]
    }

    pub fn max_abs(&self) -> f64 {
        self.phase.iter().fold(0.0, |m, p| m.max(p.abs()))
    }

    pub fn mean_abs(&self) -> f64 {
        self.phase.iter().map(|p| p.abs()).sum::<f64>() / self.phase.len() as f64
    }
}

fn check_shape(expected: (usize, usize), actual: (usize, usize)) -> Result<()> {
    if expected != actual {
        return Err(Error::ShapeMismatch { expected, actual });
    }
    Ok(())
}

/// `IFFT2{ K̃ · L̃ · FFT2{img} }`.
pub fn stretch_operator(
    img: &Image,
    pk: &PhaseKernel,
    lk: &LocalizationKernel,
) -> Result<ComplexField> {
    check_shape(img.shape(), pk.shape())?;
    check_shape(img.shape(), lk.shape())?;
    let spectrum = forward_spectrum(img)?;
    let (rows, cols) = spectrum.shape();
    let filtered: Vec<Complex64> = spectrum
        .into_values()
        .into_iter()
        .zip(pk.kernel())
        .zip(lk.weights())
        .map(|((s, k), w)| s * k * w)
        .collect();
    inverse_field(&ComplexField::from_parts_unchecked(rows, cols, filtered))
}

/// Phase readout of a stretched field.
pub fn phase_of(field: &ComplexField) -> FeatureMap {
    FeatureMap {
        rows: field.rows(),
        cols: field.cols(),
        phase: field.phase(),
    }
}

/// Kernels prepared once for a given raster shape, reusable across images
/// of that shape (and across threads).
#[derive(Debug, Clone)]
pub struct StretchPipeline {
    params: PstParams,
    phase_kernel: PhaseKernel,
    localization: LocalizationKernel,
}

impl StretchPipeline {
    pub fn new(rows: usize, cols: usize, params: &PstParams) -> Result<Self> {
        params.validate()?;
        if rows * cols < 2 {
            return Err(invalid_arg(format!(
                "PST needs at least 2 samples along a transformed axis, got {rows}x{cols}"
            )));
        }
        let grid = make_frequency_grid(rows, cols)?;
        let phase_kernel = build_warped_kernel(&grid, params)?;
        let localization = build_localization_kernel(&grid, params.localization)?;
        Ok(Self {
            params: *params,
            phase_kernel,
            localization,
        })
    }

    pub fn params(&self) -> &PstParams {
        &self.params
    }

    pub fn phase_kernel(&self) -> &PhaseKernel {
        &self.phase_kernel
    }

    pub fn localization(&self) -> &LocalizationKernel {
        &self.localization
    }

    pub fn stretch(&self, img: &Image) -> Result<ComplexField> {
        stretch_operator(img, &self.phase_kernel, &self.localization)
    }

    pub fn apply(&self, img: &Image) -> Result<FeatureMap> {
        if img.pixels().iter().all(|&p| p == 0.0) {
            warn!("all-zero input: phase reads as 0 everywhere");
        }
        Ok(phase_of(&self.stretch(img)?))
    }
}

/// Phase Stretch Transform of an image (a trace when `cols == 1`).
pub fn pst(img: &Image, params: &PstParams) -> Result<FeatureMap> {
    StretchPipeline::new(img.rows(), img.cols(), params)?.apply(img)
}

/// Phase Stretch Transform of a 1-D trace; the kernel radius is `|u|`.
pub fn pst_1d(signal: &Image, params: &PstParams) -> Result<FeatureMap> {
    if signal.cols() != 1 {
        return Err(invalid_arg(format!(
            "pst_1d expects a single-column trace, got {} columns",
            signal.cols()
        )));
    }
    if signal.rows() < 2 {
        return Err(invalid_arg("pst_1d needs at least 2 samples"));
    }
    pst(signal, params)
}
