mod common;

use common::{oracle_phi, oracle_stretch, random_image, rel_linf, rel_linf_complex};
use phase_stretch::{
    build_localization_kernel, build_warped_kernel, make_frequency_grid, pst, pst_1d, stretch_operator,
    Image, Localization, PstParams,
};
use proptest::prelude::*;

const WARP: f64 = 12.15;
const STRENGTH: f64 = 0.48;

#[test]
fn kernel_matches_formula_oracle() {
    let grid = make_frequency_grid(64, 64).unwrap();
    let k = build_warped_kernel(&grid, &PstParams::new(STRENGTH, WARP)).unwrap();
    let phi = oracle_phi(64, 64, WARP, STRENGTH);
    for (a, b) in k.phi().iter().zip(&phi) {
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn step_trace_matches_direct_dft() {
    let n = 64;
    let img = Image::from_trace((0..n).map(|i| if i < n / 2 { 1.0 } else { 3.0 }).collect()).unwrap();
    let grid = make_frequency_grid(n, 1).unwrap();
    let pk = build_warped_kernel(&grid, &PstParams::new(STRENGTH, WARP)).unwrap();
    let lk = build_localization_kernel(&grid, Localization::Identity).unwrap();
    let fast = stretch_operator(&img, &pk, &lk).unwrap();
    let slow = oracle_stretch(&img, WARP, STRENGTH);
    assert!(rel_linf_complex(fast.values(), &slow) < 1e-9);
}

#[test]
fn zero_strength_returns_input() {
    let img = random_image(9, 13, 0.0, 10.0, 3);
    let grid = make_frequency_grid(9, 13).unwrap();
    let pk = build_warped_kernel(&grid, &PstParams::new(0.0, WARP)).unwrap();
    let lk = build_localization_kernel(&grid, Localization::Identity).unwrap();
    let out = stretch_operator(&img, &pk, &lk).unwrap();
    assert!(rel_linf(&out.real_part().into_pixels(), img.pixels()) < 1e-10);
    assert!(out.imag_part().iter().all(|v| v.abs() < 1e-10 * img.max_abs()));
}

#[test]
fn constant_image_stays_constant_and_real() {
    let img = Image::filled(10, 6, 4.0).unwrap();
    let grid = make_frequency_grid(10, 6).unwrap();
    let pk = build_warped_kernel(&grid, &PstParams::new(STRENGTH, WARP)).unwrap();
    let lk = build_localization_kernel(&grid, Localization::Gaussian { sigma: 0.2 }).unwrap();
    let out = stretch_operator(&img, &pk, &lk).unwrap();
    for v in out.values() {
        assert!((v.re - 4.0).abs() < 1e-12 && v.im.abs() < 1e-12);
    }
}

#[test]
fn strength_doubling_at_small_phase() {
    let img = random_image(24, 24, 5.0, 10.0, 21);
    let a = pst(&img, &PstParams::new(1e-3, WARP)).unwrap();
    let b = pst(&img, &PstParams::new(2e-3, WARP)).unwrap();
    let doubled: Vec<f64> = a.phase().iter().map(|p| 2.0 * p).collect();
    assert!(rel_linf(b.phase(), &doubled) < 0.01);
}

#[test]
fn single_sample_trace_rejected() {
    let one = Image::from_trace(vec![5.0]).unwrap();
    assert!(pst_1d(&one, &PstParams::default()).is_err());
}

#[test]
fn gaussian_localization_smooths_response() {
    let img = random_image(32, 32, 1.0, 2.0, 5);
    let plain = pst(&img, &PstParams::new(0.3, WARP)).unwrap();
    let local = pst(
        &img,
        &PstParams::new(0.3, WARP).with_localization(Localization::Gaussian { sigma: 0.05 }),
    )
    .unwrap();
    assert!(local.mean_abs() < plain.mean_abs());
}

fn positive_image() -> impl Strategy<Value = Image> {
    (2usize..16, 2usize..16, any::<u64>()).prop_map(|(r, c, seed)| random_image(r, c, 0.5, 50.0, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn phase_stays_in_range(img in positive_image(), s in 0.0f64..20.0, w in 0.1f64..40.0) {
        let fm = pst(&img, &PstParams::new(s, w)).unwrap();
        let pi = std::f64::consts::PI;
        prop_assert!(fm.phase().iter().all(|&p| p > -pi && p <= pi));
    }

    #[test]
    fn shift_equivariance(img in positive_image(), dr in -20isize..20, dc in -20isize..20) {
        let params = PstParams::new(STRENGTH, WARP);
        let shifted = pst(&img.circular_shift(dr, dc), &params).unwrap();
        let base = pst(&img, &params).unwrap();
        let base_img = Image::new(base.rows(), base.cols(), base.phase().to_vec()).unwrap();
        let expected = base_img.circular_shift(dr, dc);
        for (a, b) in shifted.phase().iter().zip(expected.pixels()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn scale_invariance(img in positive_image(), c in 0.01f64..1e4) {
        let params = PstParams::new(STRENGTH, WARP);
        let a = pst(&img, &params).unwrap();
        let b = pst(&img.scaled(c).unwrap(), &params).unwrap();
        for (x, y) in a.phase().iter().zip(b.phase()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_invariants(rows in 2usize..40, cols in 1usize..40, s in 0.0f64..5.0, w in 0.01f64..50.0) {
        let grid = make_frequency_grid(rows, cols).unwrap();
        let k = build_warped_kernel(&grid, &PstParams::new(s, w)).unwrap();
        prop_assert_eq!(k.phi()[0], 0.0);
        for j in 0..rows {
            for l in 0..cols {
                let i = j * cols + l;
                prop_assert_eq!(k.phi()[i], k.phi()[grid.mirror_index(j, l)]);
                prop_assert!(k.phi()[i] >= 0.0 && k.phi()[i] <= s);
                prop_assert!((k.kernel()[i].norm() - 1.0).abs() < 1e-12);
                if grid.radius()[i] == grid.r_max() {
                    prop_assert_eq!(k.phi()[i], s);
                }
            }
        }
    }

    #[test]
    fn profile_is_monotone(w in 0.01f64..50.0, s in 0.0f64..5.0) {
        let rm = std::f64::consts::FRAC_1_SQRT_2;
        let mut last = 0.0;
        for i in 0..=200 {
            let v = phase_stretch::phase_profile(rm * i as f64 / 200.0, w, s, rm).unwrap();
            prop_assert!(v >= last);
            last = v;
        }
    }
}
