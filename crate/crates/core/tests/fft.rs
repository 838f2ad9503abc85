mod common;

use common::{direct_dft, random_image, rel_linf, rel_linf_complex};
use phase_stretch::{forward_spectrum, inverse_field, make_frequency_grid, ComplexField, Error, Image};
use proptest::prelude::*;
use rustfft::num_complex::Complex64;

#[test]
fn forward_matches_direct_dft() {
    for (rows, cols, seed) in [(8, 8, 1), (5, 7, 2), (12, 1, 3), (1, 9, 4), (6, 10, 5)] {
        let img = random_image(rows, cols, -1.0, 1.0, seed);
        let fast = forward_spectrum(&img).unwrap();
        let x: Vec<Complex64> = img.pixels().iter().map(|&p| Complex64::new(p, 0.0)).collect();
        let slow = direct_dft(rows, cols, &x, false);
        assert!(rel_linf_complex(fast.values(), &slow) < 1e-12, "{rows}x{cols}");
    }
}

#[test]
fn inverse_matches_direct_dft() {
    let rows = 6;
    let cols = 9;
    let spec = random_image(rows, cols * 2, -1.0, 1.0, 11);
    let values: Vec<Complex64> = spec.pixels().chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    let field = ComplexField::new(rows, cols, values.clone()).unwrap();
    let fast = inverse_field(&field).unwrap();
    let slow = direct_dft(rows, cols, &values, true);
    assert!(rel_linf_complex(fast.values(), &slow) < 1e-12);
}

#[test]
fn random_8x8_round_trip() {
    let img = random_image(8, 8, 0.0, 255.0, 7);
    let back = inverse_field(&forward_spectrum(&img).unwrap()).unwrap();
    assert!(rel_linf(&back.real_part().into_pixels(), img.pixels()) < 1e-10);
    assert!(back.imag_part().iter().all(|v| v.abs() < 1e-10 * 255.0));
}

#[test]
fn random_spectrum_round_trip() {
    let rows = 7;
    let cols = 8;
    let raw = random_image(rows, 2 * cols, -3.0, 3.0, 9);
    let values: Vec<Complex64> = raw.pixels().chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    let field = ComplexField::new(rows, cols, values).unwrap();
    let back = phase_stretch::fft::forward_field(&inverse_field(&field).unwrap()).unwrap();
    assert!(rel_linf_complex(back.values(), field.values()) < 1e-10);
}

#[test]
fn non_finite_input_is_rejected_at_construction() {
    assert!(matches!(
        Image::new(2, 2, vec![0.0, 1.0, f64::NAN, 2.0]),
        Err(Error::InvalidInput(_))
    ));
}

fn image_strategy() -> impl Strategy<Value = Image> {
    (1usize..20, 1usize..20).prop_flat_map(|(r, c)| {
        prop::collection::vec(-1e3f64..1e3, r * c).prop_map(move |px| Image::new(r, c, px).unwrap())
    })
}

proptest! {
    #[test]
    fn round_trip_identity(img in image_strategy()) {
        let back = inverse_field(&forward_spectrum(&img).unwrap()).unwrap().real_part();
        let scale = img.max_abs().max(1e-300);
        let err = back.pixels().iter().zip(img.pixels()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err / scale < 1e-10);
    }

    #[test]
    fn parseval(img in image_strategy()) {
        let spec = forward_spectrum(&img).unwrap();
        let space: f64 = img.pixels().iter().map(|p| p * p).sum();
        let freq: f64 = spec.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / img.len() as f64;
        prop_assert!((space - freq).abs() <= 1e-9 * space.max(1e-300));
    }

    #[test]
    fn grid_symmetry(rows in 1usize..40, cols in 1usize..40) {
        let g = make_frequency_grid(rows, cols).unwrap();
        prop_assert_eq!(g.radius()[0], 0.0);
        let rmax = g.radius().iter().cloned().fold(0.0, f64::max);
        prop_assert_eq!(g.r_max(), rmax);
        for j in 0..rows {
            for k in 0..cols {
                let i = j * cols + k;
                let mu = ((rows - j) % rows) * cols + k;
                let mv = j * cols + (cols - k) % cols;
                // Exact negation except at a Nyquist bin, which aliases (−0.5 ≡ 0.5).
                let su = g.u()[i] + g.u()[mu];
                let sv = g.v()[i] + g.v()[mv];
                prop_assert!(su == 0.0 || (su == -1.0 && 2 * j == rows));
                prop_assert!(sv == 0.0 || (sv == -1.0 && 2 * k == cols));
            }
        }
    }
}
