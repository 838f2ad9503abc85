//! Two-dimensional DFT with a fixed convention: the forward transform uses
//! `e^{-j2πux}` and is unnormalized, the inverse carries `1/(rows·cols)`.

use rustfft::num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::image::{ComplexField, Image};

/// Unnormalized forward 2-D DFT of a real image.
pub fn forward_spectrum(img: &Image) -> Result<ComplexField> {
    if img.pixels().iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidInput("image contains non-finite pixels".into()));
    }
    let mut field = ComplexField::from_real(img);
    transform_in_place(&mut field, FftDirection::Forward);
    Ok(field)
}

/// Forward DFT of a complex field (same convention as [`forward_spectrum`]).
pub fn forward_field(field: &ComplexField) -> Result<ComplexField> {
    let mut out = field.clone();
    transform_in_place(&mut out, FftDirection::Forward);
    Ok(out)
}

/// Inverse 2-D DFT, normalized by `1/(rows·cols)`.
pub fn inverse_field(spectrum: &ComplexField) -> Result<ComplexField> {
    if spectrum
        .values()
        .iter()
        .any(|v| !v.re.is_finite() || !v.im.is_finite())
    {
        return Err(Error::InvalidInput("spectrum contains non-finite values".into()));
    }
    let mut out = spectrum.clone();
    transform_in_place(&mut out, FftDirection::Inverse);
    let scale = 1.0 / (out.rows() * out.cols()) as f64;
    for v in out.values_mut() {
        *v *= scale;
    }
    Ok(out)
}

fn transform_in_place(field: &mut ComplexField, direction: FftDirection) {
    let (rows, cols) = field.shape();
    let mut planner = FftPlanner::<f64>::new();
    let data = field.values_mut();

    if cols > 1 {
        let fft = planner.plan_fft(cols, direction);
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        for row in data.chunks_exact_mut(cols) {
            fft.process_with_scratch(row, &mut scratch);
        }
    }

    if rows > 1 {
        let fft = planner.plan_fft(rows, direction);
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        if cols == 1 {
            fft.process_with_scratch(data, &mut scratch);
        } else {
            // Columns are processed in a transposed copy so each FFT sees
            // contiguous memory.
            let mut transposed = transpose(data, rows, cols);
            for col in transposed.chunks_exact_mut(rows) {
                fft.process_with_scratch(col, &mut scratch);
            }
            let back = transpose(&transposed, cols, rows);
            data.copy_from_slice(&back);
        }
    }
}

fn transpose(data: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); data.len()];
    const BLOCK: usize = 32;
    for rb in (0..rows).step_by(BLOCK) {
        for cb in (0..cols).step_by(BLOCK) {
            for r in rb..(rb + BLOCK).min(rows) {
                for c in cb..(cb + BLOCK).min(cols) {
                    out[c * rows + r] = data[r * cols + c];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_image_has_only_dc() {
        let img = Image::filled(3, 5, 2.5).unwrap();
        let s = forward_spectrum(&img).unwrap();
        assert!((s.values()[0].re - 2.5 * 15.0).abs() < 1e-12);
        for v in &s.values()[1..] {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn impulse_has_flat_spectrum() {
        let mut px = vec![0.0; 12];
        px[0] = 1.0;
        let img = Image::new(4, 3, px).unwrap();
        let s = forward_spectrum(&img).unwrap();
        for v in s.values() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_spectrum_and_dc_only_spectrum() {
        let zero = ComplexField::new(4, 4, vec![Complex64::default(); 16]).unwrap();
        assert!(inverse_field(&zero).unwrap().values().iter().all(|v| v.norm() == 0.0));

        let mut dc = vec![Complex64::default(); 12];
        dc[0] = Complex64::new(12.0, 0.0);
        let out = inverse_field(&ComplexField::new(3, 4, dc).unwrap()).unwrap();
        for v in out.values() {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_finite_spectrum() {
        let mut vals = vec![Complex64::default(); 4];
        vals[1] = Complex64::new(f64::NAN, 0.0);
        let field = ComplexField::from_parts_unchecked(2, 2, vals);
        assert!(matches!(inverse_field(&field), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn transpose_round_trip() {
        let data: Vec<Complex64> = (0..70).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let t = transpose(&data, 7, 10);
        assert_eq!(t[0], data[0]);
        assert_eq!(t[3 * 7 + 2], data[2 * 10 + 3]);
        assert_eq!(transpose(&t, 10, 7), data);
    }
}
