//! Small-phase closed form of the transform.
//!
//! For `|φ| ≪ 1`, `e^{jφ} ≈ 1 + jφ`. Expanding the radial phase in even
//! powers, `φ(r) = Σ φ⁽ᵐ⁾ rᵐ / m!`, and trading each `rᵐ` for the spectral
//! derivative multiplier `(j2πr)ᵐ` gives
//!
//! ```text
//! PST{E}[x] ≈ Σ_{m even} (−1)^{m/2} φ⁽ᵐ⁾ / (m! (2π)ᵐ) · Dᵐ E[x]  /  E[x]
//! ```
//!
//! The division by `E[x]` is what makes equal-contrast features respond
//! more strongly in dark regions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use log::warn;
use rustfft::num_complex::Complex64;

use crate::error::{invalid_arg, Error, Result};
use crate::fft::{forward_spectrum, inverse_field};
use crate::grid::{make_frequency_grid, FrequencyGrid};
use crate::image::{ComplexField, Image};
use crate::kernel::{build_localization_kernel, phase_profile, profile_denominator, LocalizationKernel, PhaseKernel};
use crate::params::PstParams;
use crate::transform::FeatureMap;

/// Relative brightness floor guarding the division by `E[x]`.
pub const BRIGHTNESS_FLOOR: f64 = 1e-6;

/// Even-order derivatives of the radial kernel phase at `r = 0` and the
/// matching closed-form weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorWeights {
    order: usize,
    phi_derivs: BTreeMap<usize, f64>,
    weights: BTreeMap<usize, f64>,
}

impl TaylorWeights {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `φ⁽ᵐ⁾(0)`; zero for odd `m` and for `m` beyond the order.
    pub fn phi_derivative(&self, m: usize) -> f64 {
        self.phi_derivs.get(&m).copied().unwrap_or(0.0)
    }

    /// `(−1)^{m/2} φ⁽ᵐ⁾ / (m! (2π)ᵐ)`; zero for odd `m`.
    pub fn weight(&self, m: usize) -> f64 {
        self.weights.get(&m).copied().unwrap_or(0.0)
    }

    /// `(m, weight)` pairs for the even orders kept.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().map(|(&m, &w)| (m, w))
    }
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `m`-th derivative at 0 of the even extension of the profile, by a
/// central difference of width `m·h`.
fn profile_derivative_fd(m: usize, warp: f64, strength: f64, r_max: f64) -> Result<f64> {
    let step = f64::EPSILON.powf(1.0 / (m as f64 + 2.0)) / warp;
    let step = step.min(r_max / m as f64);
    let half = (m / 2) as isize;
    let mut acc = 0.0;
    for k in 0..=m {
        let x = ((half - k as isize).unsigned_abs()) as f64 * step;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(m, k) * phase_profile(x, warp, strength, r_max)?;
    }
    Ok(acc / step.powi(m as i32))
}

/// Taylor coefficients of the kernel phase on `grid`, up to even order `order`.
///
/// Orders 2 and 4 come from the series of `x·atan(x) − ½ln(1+x²)`:
/// `φ⁽²⁾ = S·W²/D`, `φ⁽⁴⁾ = −2·S·W⁴/D`. Higher orders use finite
/// differences of the profile.
pub fn taylor_coefficients(
    params: &PstParams,
    grid: &FrequencyGrid,
    order: usize,
) -> Result<TaylorWeights> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(invalid_arg(format!("Taylor order must be even and >= 2, got {order}")));
    }
    let (s, w, r_max) = (params.strength, params.warp, grid.r_max());
    // Validates warp / r_max / strength.
    phase_profile(0.0, w, s, r_max)?;
    let d = profile_denominator(w, r_max);

    let mut phi_derivs = BTreeMap::new();
    let mut weights = BTreeMap::new();
    for m in (2..=order).step_by(2) {
        let deriv = match m {
            2 => s * w.powi(2) / d,
            4 => -2.0 * s * w.powi(4) / d,
            _ => profile_derivative_fd(m, w, s, r_max)?,
        };
        let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let weight = sign * deriv / (factorial(m) * (2.0 * PI).powi(m as i32));
        phi_derivs.insert(m, deriv);
        weights.insert(m, weight);
    }
    Ok(TaylorWeights {
        order,
        phi_derivs,
        weights,
    })
}

/// `IFFT{ (1 + jφ) · L̃ · FFT{img} }`: the first-order expansion of the
/// stretch operator in `φ`, without truncating `φ` itself.
pub fn linearized_transform(
    img: &Image,
    pk: &PhaseKernel,
    lk: &LocalizationKernel,
) -> Result<ComplexField> {
    for shape in [pk.shape(), lk.shape()] {
        if shape != img.shape() {
            return Err(Error::ShapeMismatch {
                expected: img.shape(),
                actual: shape,
            });
        }
    }
    let spectrum = forward_spectrum(img)?;
    let (rows, cols) = spectrum.shape();
    let values: Vec<Complex64> = spectrum
        .into_values()
        .into_iter()
        .zip(pk.phi())
        .zip(lk.weights())
        .map(|((s, &phi), &w)| s * Complex64::new(1.0, phi) * w)
        .collect();
    inverse_field(&ComplexField::new(rows, cols, values)?)
}

/// Spectral `m`-th radial derivative: multiplies the spectrum by `(j2πr)ᵐ`.
/// For even `m` this is `(−4π²r²)^{m/2}`, a power of the Laplacian.
pub fn spectral_derivative(spectrum: &ComplexField, grid: &FrequencyGrid, m: usize) -> Result<Image> {
    if !m.is_multiple_of(2) {
        return Err(invalid_arg(format!("radial derivative order must be even, got {m}")));
    }
    let values: Vec<Complex64> = spectrum
        .values()
        .iter()
        .zip(grid.radius())
        .map(|(&s, &r)| s * (-(2.0 * PI * r).powi(2)).powi((m / 2) as i32))
        .collect();
    let out = inverse_field(&ComplexField::new(spectrum.rows(), spectrum.cols(), values)?)?;
    Ok(out.real_part())
}

/// Closed-form small-phase PST of order `order`.
///
/// Pixels with `|E| < 1e−6·max|E|` are replaced by `±1e−6·max|E|` before
/// dividing. Values are clamped into (−π, π].
pub fn closed_form_pst(img: &Image, params: &PstParams, order: usize) -> Result<FeatureMap> {
    let grid = make_frequency_grid(img.rows(), img.cols())?;
    let taylor = taylor_coefficients(params, &grid, order)?;
    let lk = build_localization_kernel(&grid, params.localization)?;

    let mut spectrum = forward_spectrum(img)?;
    if !lk.is_identity() {
        let weights = lk.weights().to_vec();
        let (rows, cols) = spectrum.shape();
        let filtered = spectrum.into_values().into_iter().zip(weights).map(|(s, w)| s * w).collect();
        spectrum = ComplexField::new(rows, cols, filtered)?;
    }
    let brightness = if lk.is_identity() {
        img.clone()
    } else {
        inverse_field(&spectrum)?.real_part()
    };

    let mut numerator = vec![0.0; img.len()];
    for (m, weight) in taylor.iter() {
        let deriv = spectral_derivative(&spectrum, &grid, m)?;
        for (n, d) in numerator.iter_mut().zip(deriv.pixels()) {
            *n += weight * d;
        }
    }

    let peak = brightness.max_abs();
    let floor = BRIGHTNESS_FLOOR * peak;
    let mut floored = 0usize;
    let lowest = -PI + f64::EPSILON * PI;
    let phase: Vec<f64> = numerator
        .iter()
        .zip(brightness.pixels())
        .map(|(&n, &e)| {
            if peak == 0.0 {
                return 0.0;
            }
            let e = if e.abs() < floor {
                floored += 1;
                if e.is_sign_negative() {
                    -floor
                } else {
                    floor
                }
            } else {
                e
            };
            (n / e).clamp(lowest, PI)
        })
        .collect();
    if floored > 0 {
        warn!("{floored} pixel(s) below the brightness floor {floor:e} were clamped");
    }
    FeatureMap::new(img.rows(), img.cols(), phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::build_warped_kernel;
    use crate::params::Localization;

    fn params() -> PstParams {
        PstParams::new(0.48, 12.15)
    }

    #[test]
    fn odd_orders_are_absent() {
        let grid = make_frequency_grid(4, 4).unwrap();
        let t = taylor_coefficients(&params(), &grid, 6).unwrap();
        for m in [1, 3, 5, 7] {
            assert_eq!(t.phi_derivative(m), 0.0);
            assert_eq!(t.weight(m), 0.0);
        }
        assert_eq!(t.iter().map(|(m, _)| m).collect::<Vec<_>>(), vec![2, 4, 6]);
        assert!(taylor_coefficients(&params(), &grid, 3).is_err());
        assert!(taylor_coefficients(&params(), &grid, 0).is_err());
    }

    #[test]
    fn sixth_order_matches_series() {
        // x·atan(x) − ½ln(1+x²) = Σ_k (−1)^k x^{2k+2} / ((2k+1)(2k+2)),
        // so the x⁶ coefficient is 1/30.
        let grid = make_frequency_grid(4, 4).unwrap();
        let p = params();
        let t = taylor_coefficients(&p, &grid, 6).unwrap();
        let d = profile_denominator(p.warp, grid.r_max());
        let expected = p.strength * p.warp.powi(6) * factorial(6) / 30.0 / d;
        let got = t.phi_derivative(6);
        assert!(((got - expected) / expected).abs() < 1e-2, "{got} vs {expected}");
    }

    #[test]
    fn weights_follow_sign_pattern() {
        let grid = make_frequency_grid(8, 8).unwrap();
        let t = taylor_coefficients(&params(), &grid, 4).unwrap();
        // φ⁽²⁾ > 0 with sign (−1)¹, φ⁽⁴⁾ < 0 with sign (−1)²: both negative.
        assert!(t.weight(2) < 0.0);
        assert!(t.weight(4) < 0.0);
        let expected2 = -t.phi_derivative(2) / (2.0 * (2.0 * PI).powi(2));
        assert_eq!(t.weight(2), expected2);
    }

    #[test]
    fn linearized_zero_strength_is_identity() {
        let img = Image::from_fn(5, 6, |r, c| 1.0 + (r * 6 + c) as f64).unwrap();
        let grid = make_frequency_grid(5, 6).unwrap();
        let pk = build_warped_kernel(&grid, &PstParams::new(0.0, 3.0)).unwrap();
        let lk = build_localization_kernel(&grid, Localization::Identity).unwrap();
        let out = linearized_transform(&img, &pk, &lk).unwrap();
        for (o, p) in out.values().iter().zip(img.pixels()) {
            assert!((o.re - p).abs() < 1e-12 && o.im.abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_constant_is_zero() {
        let img = Image::filled(8, 8, 5.0).unwrap();
        let fm = closed_form_pst(&img, &params(), 4).unwrap();
        assert!(fm.max_abs() < 1e-15);
    }

    #[test]
    fn closed_form_floors_dark_pixels() {
        let mut px = vec![1.0; 16];
        px[5] = 0.0;
        px[6] = -1e-9;
        let img = Image::new(16, 1, px).unwrap();
        let fm = closed_form_pst(&img, &PstParams::new(1e-3, 2.0), 2).unwrap();
        assert!(fm.phase().iter().all(|p| p.is_finite()));
        let zeros = Image::filled(4, 4, 0.0).unwrap();
        assert_eq!(closed_form_pst(&zeros, &params(), 2).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn spectral_second_derivative_of_cosine() {
        let n = 32;
        let f = 3.0 / n as f64;
        let img = Image::from_trace((0..n).map(|i| (2.0 * PI * f * i as f64).cos()).collect()).unwrap();
        let grid = make_frequency_grid(n, 1).unwrap();
        let d2 = spectral_derivative(&forward_spectrum(&img).unwrap(), &grid, 2).unwrap();
        let k2 = (2.0 * PI * f).powi(2);
        for (d, p) in d2.pixels().iter().zip(img.pixels()) {
            assert!((d + k2 * p).abs() < 1e-12);
        }
        assert!(spectral_derivative(&forward_spectrum(&img).unwrap(), &grid, 3).is_err());
    }
}
