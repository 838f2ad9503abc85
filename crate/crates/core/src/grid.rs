//! Per-bin frequency coordinates in standard DFT ordering.

use crate::error::{invalid_arg, Result};

/// Frequency of DFT bin `k` out of `n`, in cycles/sample: `k/n` below
/// `n/2`, `(k-n)/n` from `n/2` on.
pub fn bin_frequency(k: usize, n: usize) -> f64 {
    if 2 * k < n {
        k as f64 / n as f64
    } else {
        (k as f64 - n as f64) / n as f64
    }
}

/// Frequency coordinates `(u, v)` of every bin of a `rows × cols` spectrum,
/// the radius `r = √(u² + v²)`, and the largest radius on the grid.
///
/// `u` runs along rows and `v` along columns. A trace (`cols == 1`) gets
/// `v ≡ 0`, so `r = |u|`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    rows: usize,
    cols: usize,
    u: Vec<f64>,
    v: Vec<f64>,
    radius: Vec<f64>,
    r_max: f64,
}

/// Builds the grid for a `rows × cols` raster.
pub fn make_frequency_grid(rows: usize, cols: usize) -> Result<FrequencyGrid> {
    if rows == 0 || cols == 0 {
        return Err(invalid_arg(format!("grid shape {rows}x{cols} has a zero dimension")));
    }
    let us: Vec<f64> = (0..rows).map(|k| bin_frequency(k, rows)).collect();
    let vs: Vec<f64> = (0..cols).map(|k| bin_frequency(k, cols)).collect();
    let n = rows * cols;
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    let mut radius = Vec::with_capacity(n);
    let mut r_max = 0.0f64;
    for &fu in &us {
        for &fv in &vs {
            let r = (fu * fu + fv * fv).sqrt();
            u.push(fu);
            v.push(fv);
            radius.push(r);
            r_max = r_max.max(r);
        }
    }
    Ok(FrequencyGrid {
        rows,
        cols,
        u,
        v,
        radius,
        r_max,
    })
}

impl FrequencyGrid {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn radius(&self) -> &[f64] {
        &self.radius
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    /// Flat index of the bin holding the negated frequency of `(row, col)`.
    pub fn mirror_index(&self, row: usize, col: usize) -> usize {
        let mr = (self.rows - row) % self.rows;
        let mc = (self.cols - col) % self.cols;
        mr * self.cols + mc
    }
}
