//! Binary edge maps and the Sobel gradient baseline.

use std::collections::VecDeque;

use crate::error::{invalid_arg, Result};
use crate::image::Image;
use crate::transform::FeatureMap;

/// Per-pixel edge flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl EdgeMap {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self> {
        if rows == 0 || cols == 0 || bits.len() != rows * cols {
            return Err(invalid_arg(format!("{} bits for a {rows}x{cols} edge map", bits.len())));
        }
        Ok(Self { rows, cols, bits })
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

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Flags pixels whose phase lies strictly outside `[tmin, tmax]`.
pub fn threshold_feature_map(fm: &FeatureMap, tmin: f64, tmax: f64) -> Result<EdgeMap> {
    if !(tmin <= 0.0 && 0.0 <= tmax) {
        return Err(invalid_arg(format!(
            "thresholds must satisfy tmin <= 0 <= tmax, got [{tmin}, {tmax}]"
        )));
    }
    let bits = fm.phase().iter().map(|&p| p > tmax || p < tmin).collect();
    EdgeMap::new(fm.rows(), fm.cols(), bits)
}

/// Clears 8-connected components of at most `max_isolated_size` pixels.
/// `0` leaves the map unchanged.
pub fn morphological_clean(em: &EdgeMap, max_isolated_size: usize) -> EdgeMap {
    if max_isolated_size == 0 {
        return em.clone();
    }
    let (rows, cols) = em.shape();
    let mut out = em.bits.clone();
    let mut seen = vec![false; out.len()];
    let mut component = Vec::new();
    let mut queue = VecDeque::new();

    for start in 0..out.len() {
        if !em.bits[start] || seen[start] {
            continue;
        }
        component.clear();
        seen[start] = true;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            component.push(i);
            let (r, c) = (i / cols, i % cols);
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    if nr < 0 || nc < 0 || nr >= rows as isize || nc >= cols as isize {
                        continue;
                    }
                    let j = nr as usize * cols + nc as usize;
                    if em.bits[j] && !seen[j] {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
            }
        }
        if component.len() <= max_isolated_size {
            for &i in &component {
                out[i] = false;
            }
        }
    }
    EdgeMap {
        rows,
        cols,
        bits: out,
    }
}

/// 3×3 Sobel gradient magnitude `√(Gx² + Gy²)` with replicated borders.
pub fn derivative_baseline(img: &Image) -> Result<Image> {
    let (rows, cols) = img.shape();
    if rows < 3 || cols < 3 {
        return Err(invalid_arg(format!(
            "Sobel baseline needs at least 3x3 pixels, got {rows}x{cols}"
        )));
    }
    let at = |r: isize, c: isize| {
        let r = r.clamp(0, rows as isize - 1) as usize;
        let c = c.clamp(0, cols as isize - 1) as usize;
        img.get(r, c)
    };
    Image::from_fn(rows, cols, |r, c| {
        let (r, c) = (r as isize, c as isize);
        let gx = (at(r - 1, c + 1) + 2.0 * at(r, c + 1) + at(r + 1, c + 1))
            - (at(r - 1, c - 1) + 2.0 * at(r, c - 1) + at(r + 1, c - 1));
        let gy = (at(r + 1, c - 1) + 2.0 * at(r + 1, c) + at(r + 1, c + 1))
            - (at(r - 1, c - 1) + 2.0 * at(r - 1, c) + at(r - 1, c + 1));
        gx.hypot(gy)
    })
}
