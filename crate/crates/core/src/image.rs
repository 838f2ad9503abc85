//! Real rasters and complex fields.

use rustfft::num_complex::Complex64;

use crate::error::{invalid_arg, Error, Result};

/// A real-valued raster stored row-major. A 1-D trace is an image with
/// `cols == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    rows: usize,
    cols: usize,
    pixels: Vec<f64>,
}

impl Image {
    /// Wraps row-major `pixels`. Fails on a zero dimension, a length
    /// mismatch or a non-finite pixel.
    pub fn new(rows: usize, cols: usize, pixels: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid_arg(format!("image shape {rows}x{cols} has a zero dimension")));
        }
        if pixels.len() != rows * cols {
            return Err(invalid_arg(format!(
                "{} pixels supplied for a {rows}x{cols} image",
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "pixel {i} is not finite ({})",
                pixels[i]
            )));
        }
        Ok(Self { rows, cols, pixels })
    }

    /// A 1-D trace of `samples.len()` rows and one column.
    pub fn from_trace(samples: Vec<f64>) -> Result<Self> {
        Self::new(samples.len(), 1, samples)
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                pixels.push(f(r, c));
            }
        }
        Self::new(rows, cols, pixels)
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

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn is_trace(&self) -> bool {
        self.cols == 1
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.cols + col]
    }

    /// Multiplies every pixel by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.rows, self.cols, self.pixels.iter().map(|p| p * factor).collect())
    }

    /// Adds `offset` to every pixel.
    pub fn offset(&self, offset: f64) -> Result<Self> {
        Self::new(self.rows, self.cols, self.pixels.iter().map(|p| p + offset).collect())
    }

    /// Circular shift: pixel `(r, c)` moves to `(r + dr, c + dc)` modulo the shape.
    pub fn circular_shift(&self, dr: isize, dc: isize) -> Self {
        let (rows, cols) = (self.rows, self.cols);
        let mut out = vec![0.0; self.pixels.len()];
        for r in 0..rows {
            let nr = (r as isize + dr).rem_euclid(rows as isize) as usize;
            for c in 0..cols {
                let nc = (c as isize + dc).rem_euclid(cols as isize) as usize;
                out[nr * cols + nc] = self.pixels[r * cols + c];
            }
        }
        Self { rows, cols, pixels: out }
    }

    pub fn max_abs(&self) -> f64 {
        self.pixels.iter().fold(0.0, |m, p| m.max(p.abs()))
    }
}

/// A complex-valued grid: either a spectrum or a spatial output field.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    rows: usize,
    cols: usize,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(rows: usize, cols: usize, values: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid_arg(format!("field shape {rows}x{cols} has a zero dimension")));
        }
        if values.len() != rows * cols {
            return Err(invalid_arg(format!(
                "{} values supplied for a {rows}x{cols} field",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidInput("field contains non-finite values".into()));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_real(img: &Image) -> Self {
        Self {
            rows: img.rows(),
            cols: img.cols(),
            values: img.pixels().iter().map(|&p| Complex64::new(p, 0.0)).collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(rows: usize, cols: usize, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), rows * cols);
        Self { rows, cols, values }
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

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.values[row * self.cols + col]
    }

    /// Per-sample magnitude.
    pub fn magnitude(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Per-sample four-quadrant angle in (−π, π]; `angle(0) = 0`.
    pub fn phase(&self) -> Vec<f64> {
        self.values.iter().map(|&v| angle(v)).collect()
    }

    /// Real part as an image.
    pub fn real_part(&self) -> Image {
        Image {
            rows: self.rows,
            cols: self.cols,
            pixels: self.values.iter().map(|v| v.re).collect(),
        }
    }

    pub fn imag_part(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.im).collect()
    }
}

/// Four-quadrant angle folded into (−π, π]. The origin reads as zero.
pub fn angle(z: Complex64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        return 0.0;
    }
    let a = z.im.atan2(z.re);
    // atan2 can return -π for a negative real axis with im = -0.0
    if a <= -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}
