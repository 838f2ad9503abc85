//! Test-only oracles, independent of the crate's FFT and kernel code.
#![allow(dead_code)]

use std::f64::consts::PI;

use phase_stretch::Image;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

/// Direct O(N²) 2-D DFT with sign `e^{∓j2π(km/R + ln/C)}`; `inverse`
/// flips the sign and divides by `R·C`.
pub fn direct_dft(rows: usize, cols: usize, x: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut out = vec![Complex64::default(); rows * cols];
    for k in 0..rows {
        for l in 0..cols {
            let mut acc = Complex64::default();
            for m in 0..rows {
                for n in 0..cols {
                    // Reduce the index products first to keep the angles small.
                    let a = ((k * m) % rows) as f64 / rows as f64 + ((l * n) % cols) as f64 / cols as f64;
                    acc += x[m * cols + n] * Complex64::from_polar(1.0, sign * 2.0 * PI * a);
                }
            }
            out[k * cols + l] = if inverse { acc / (rows * cols) as f64 } else { acc };
        }
    }
    out
}

pub fn freq(k: usize, n: usize) -> f64 {
    let k = k as f64;
    let n = n as f64;
    if 2.0 * k < n {
        k / n
    } else {
        (k - n) / n
    }
}

/// Kernel phase straight from the closed formula, with `∫₀ˣ atan`.
pub fn oracle_phi(rows: usize, cols: usize, warp: f64, strength: f64) -> Vec<f64> {
    let g = |x: f64| x * x.atan() - 0.5 * (1.0 + x * x).ln();
    let mut radii = Vec::with_capacity(rows * cols);
    for k in 0..rows {
        for l in 0..cols {
            radii.push(freq(k, rows).hypot(freq(l, cols)));
        }
    }
    let r_max = radii.iter().cloned().fold(0.0, f64::max);
    radii.iter().map(|&r| strength * g(warp * r) / g(warp * r_max)).collect()
}

/// Direct-DFT evaluation of `IFFT{ e^{jφ} · FFT{img} }`.
pub fn oracle_stretch(img: &Image, warp: f64, strength: f64) -> Vec<Complex64> {
    let (rows, cols) = img.shape();
    let x: Vec<Complex64> = img.pixels().iter().map(|&p| Complex64::new(p, 0.0)).collect();
    let spec = direct_dft(rows, cols, &x, false);
    let phi = oracle_phi(rows, cols, warp, strength);
    let filtered: Vec<Complex64> = spec
        .iter()
        .zip(&phi)
        .map(|(s, &p)| s * Complex64::from_polar(1.0, p))
        .collect();
    direct_dft(rows, cols, &filtered, true)
}

pub fn random_image(rows: usize, cols: usize, lo: f64, hi: f64, seed: u64) -> Image {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Image::new(rows, cols, (0..rows * cols).map(|_| rng.gen_range(lo..hi)).collect()).unwrap()
}

/// `max|a − b| / max|b|`.
pub fn rel_linf(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let den = b.iter().map(|y| y.abs()).fold(0.0, f64::max);
    num / den
}

pub fn rel_linf_complex(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let den = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    num / den
}

/// Central finite difference of order `m` (even) at 0 of an even function
/// sampled on `[0, ∞)`.
pub fn even_fd(f: impl Fn(f64) -> f64, m: usize, h: f64) -> f64 {
    // Binomial stencil Σ (−1)^k C(m,k) f((m/2 − k)h) / h^m.
    let mut acc = 0.0;
    let mut binom = 1.0;
    for k in 0..=m {
        let x = ((m / 2) as f64 - k as f64).abs() * h;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom * f(x);
        binom = binom * (m - k) as f64 / (k + 1) as f64;
    }
    acc / h.powi(m as i32)
}
