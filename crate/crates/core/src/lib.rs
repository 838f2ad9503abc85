//! Phase Stretch Transform (PST) feature extraction for images and 1-D
//! waveforms.
//!
//! The transform multiplies an image's spectrum by a unit-modulus kernel
//! whose phase grows nonlinearly with frequency radius, inverts, and reads
//! out the phase of the result:
//!
//! ```text
//! PST{E} = ∠ IFFT2{ K̃[u,v] · L̃[u,v] · FFT2{E} },   K̃ = e^{jφ(r)}
//! ```
//!
//! Because that phase is approximately a weighted sum of even derivatives
//! divided by local brightness, equal-contrast features produce larger
//! responses in dark regions than in bright ones.
//!
//! ```
//! use phase_stretch::{pst, Image, PstParams};
//!
//! let img = Image::from_fn(32, 32, |_, c| if c < 16 { 10.0 } else { 20.0 })?;
//! let features = pst(&img, &PstParams::new(0.48, 12.15))?;
//! assert_eq!(features.shape(), (32, 32));
//! assert!(features.max_abs() > 0.0);
//! # Ok::<(), phase_stretch::Error>(())
//! ```
//!
//! The [`oracle`] module holds an independent small-phase closed form used
//! to check the transform. A longer walk-through lives in the `book/`
//! directory of the repository.

pub mod cli;
pub mod error;
pub mod fft;
pub mod grid;
pub mod image;
pub mod kernel;
pub mod oracle;
pub mod params;
pub mod postproc;
pub mod synth;
pub mod transform;

pub use error::{Error, Result};
pub use fft::{forward_spectrum, inverse_field};
pub use grid::{make_frequency_grid, FrequencyGrid};
pub use image::{angle, ComplexField, Image};
pub use kernel::{
    build_localization_kernel, build_warped_kernel, phase_profile, LocalizationKernel, PhaseKernel,
};
pub use oracle::{closed_form_pst, linearized_transform, taylor_coefficients, TaylorWeights};
pub use params::{Localization, PstParams};
pub use postproc::{derivative_baseline, morphological_clean, threshold_feature_map, EdgeMap};
pub use synth::{generate, Pattern, PatternSpec};
pub use transform::{pst, pst_1d, stretch_operator, FeatureMap, StretchPipeline};

// Runs the guide's code blocks as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/kernel.md")]
    mod kernel {}
    #[doc = include_str!("../../../book/src/transform.md")]
    mod transform {}
    #[doc = include_str!("../../../book/src/closed_form.md")]
    mod closed_form {}
    #[doc = include_str!("../../../book/src/equalization.md")]
    mod equalization {}
    #[doc = include_str!("../../../book/src/edges.md")]
    mod edges {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
