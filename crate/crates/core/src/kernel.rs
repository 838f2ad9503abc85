//! Warped phase kernel and localization kernel synthesis.
//!
//! The kernel phase is a radial profile whose derivative follows an arctan
//! law: `φ'(r) ∝ atan(W·r)`. Integrating gives
//!
//! ```text
//! φ(r) = S · g(W·r) / g(W·r_max),   g(x) = x·atan(x) − ½·ln(1 + x²)
//! ```
//!
//! so `φ(0) = 0`, `φ(r_max) = S`, and `φ` is nondecreasing in `r`.

use rustfft::num_complex::Complex64;

use crate::error::{invalid_arg, Error, Result};
use crate::grid::FrequencyGrid;
use crate::params::{Localization, PstParams};

/// `x·atan(x) − ½·ln(1 + x²)`, the antiderivative of `atan`.
pub(crate) fn arctan_integral(x: f64) -> f64 {
    x * x.atan() - 0.5 * (x * x).ln_1p()
}

/// Normalizing denominator `g(W·r_max)`.
pub fn profile_denominator(warp: f64, r_max: f64) -> f64 {
    arctan_integral(warp * r_max)
}

fn check_profile_params(warp: f64, r_max: f64) -> Result<f64> {
    if !(warp.is_finite() && warp > 0.0) {
        return Err(Error::DegenerateParameter(format!(
            "warp must be > 0 for the arctan profile, got {warp}"
        )));
    }
    if !(r_max.is_finite() && r_max > 0.0) {
        return Err(Error::DegenerateParameter(format!(
            "r_max must be > 0, got {r_max} (a 1x1 grid has no nonzero frequency)"
        )));
    }
    let denom = profile_denominator(warp, r_max);
    if denom <= 0.0 || !denom.is_finite() {
        return Err(Error::DegenerateParameter(format!(
            "profile denominator underflows for warp={warp}, r_max={r_max}"
        )));
    }
    Ok(denom)
}

/// Kernel phase in radians at radius `r` (cycles/sample).
pub fn phase_profile(r: f64, warp: f64, strength: f64, r_max: f64) -> Result<f64> {
    let denom = check_profile_params(warp, r_max)?;
    if !(strength.is_finite() && strength >= 0.0) {
        return Err(invalid_arg(format!("strength must be >= 0, got {strength}")));
    }
    if !(r.is_finite() && (0.0..=r_max).contains(&r)) {
        return Err(invalid_arg(format!("radius {r} outside [0, {r_max}]")));
    }
    Ok(strength * (arctan_integral(warp * r) / denom))
}

/// Per-bin kernel phase and the unit-modulus kernel `e^{jφ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseKernel {
    phi: Vec<f64>,
    kernel: Vec<Complex64>,
    grid: FrequencyGrid,
    strength: f64,
    warp: f64,
}

impl PhaseKernel {
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn kernel(&self) -> &[Complex64] {
        &self.kernel
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn shape(&self) -> (usize, usize) {
        self.grid.shape()
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn warp(&self) -> f64 {
        self.warp
    }

    pub fn max_phase(&self) -> f64 {
        self.phi.iter().fold(0.0, |m, &p| m.max(p.abs()))
    }
}

/// Evaluates the arctan profile at every bin of `grid`.
pub fn build_warped_kernel(grid: &FrequencyGrid, params: &PstParams) -> Result<PhaseKernel> {
    let (warp, strength) = (params.warp, params.strength);
    let denom = check_profile_params(warp, grid.r_max())?;
    if !(strength.is_finite() && strength >= 0.0) {
        return Err(invalid_arg(format!("strength must be >= 0, got {strength}")));
    }
    // Same arithmetic as `phase_profile`, so per-bin values agree bit for bit.
    let phi: Vec<f64> = grid
        .radius()
        .iter()
        .map(|&r| strength * (arctan_integral(warp * r) / denom))
        .collect();
    let kernel = phi.iter().map(|&p| Complex64::from_polar(1.0, p)).collect();
    Ok(PhaseKernel {
        phi,
        kernel,
        grid: grid.clone(),
        strength,
        warp,
    })
}

/// Real frequency-domain weights in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationKernel {
    weights: Vec<f64>,
    shape: (usize, usize),
    mode: Localization,
}

impl LocalizationKernel {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    pub fn mode(&self) -> Localization {
        self.mode
    }

    pub fn is_identity(&self) -> bool {
        self.mode == Localization::Identity
    }
}

pub fn build_localization_kernel(
    grid: &FrequencyGrid,
    mode: Localization,
) -> Result<LocalizationKernel> {
    let weights = match mode {
        Localization::Identity => vec![1.0; grid.radius().len()],
        Localization::Gaussian { sigma } => {
            if sigma.is_nan() || sigma <= 0.0 {
                return Err(invalid_arg(format!("localization sigma must be > 0, got {sigma}")));
            }
            let two_var = 2.0 * sigma * sigma;
            grid.radius().iter().map(|&r| (-(r * r) / two_var).exp()).collect()
        }
    };
    Ok(LocalizationKernel {
        weights,
        shape: grid.shape(),
        mode,
    })
}
