mod common;

use qspectra::quaternion::{embed_matrix, Quaternion, QuaternionMatrix};
use qspectra::sampling::{preprocess, sample_covariance, sample_matrix, EntryDistribution};
use qspectra::spectra::eigenvalues_hermitian;

#[test]
fn rademacher_entry_has_half_coefficients_and_unit_norm() {
    let m = sample_matrix(1, 1, EntryDistribution::QRademacher, 7).unwrap();
    let q = m[(0, 0)];
    for coeff in [q.a, q.b, q.c, q.d] {
        assert_eq!(coeff.abs(), 0.5);
    }
    assert_eq!(q.norm(), 1.0);
}

#[test]
fn gaussian_mean_norm_sqr_near_one() {
    let m = sample_matrix(50, 200, EntryDistribution::QGaussian, 1).unwrap();
    let mean: f64 = m.entries().iter().map(|q| q.norm_sqr()).sum::<f64>() / 10_000.0;
    assert!((0.95..=1.05).contains(&mean), "mean norm^2 = {mean}");
}

#[test]
fn sampling_is_deterministic_in_the_seed() {
    for dist in [
        EntryDistribution::QGaussian,
        EntryDistribution::QRademacher,
        EntryDistribution::QBoundedMix,
    ] {
        let a = sample_matrix(5, 9, dist, 123).unwrap();
        let b = sample_matrix(5, 9, dist, 123).unwrap();
        assert_eq!(a, b);
        let c = sample_matrix(5, 9, dist, 124).unwrap();
        assert_ne!(a, c);
    }
}

#[test]
fn zero_dimensions_rejected() {
    assert!(sample_matrix(0, 5, EntryDistribution::QGaussian, 1).is_err());
    assert!(sample_matrix(5, 0, EntryDistribution::QGaussian, 1).is_err());
}

#[test]
fn preprocess_is_identity_for_rademacher() {
    let x = sample_matrix(4, 8, EntryDistribution::QRademacher, 3).unwrap();
    let (out, report) = preprocess(&x, EntryDistribution::QRademacher, 8).unwrap();
    assert_eq!(out, x);
    assert_eq!(report.truncated_count, 0);
    assert_eq!(report.recentering_shift, Quaternion::ZERO);
    assert!(report.rescale_factors.iter().all(|&f| f == 1.0));
}

#[test]
fn entry_at_threshold_is_zeroed() {
    // n = 16 gives threshold 16^{1/4} = 2; norm exactly 2 fails the strict inequality
    let mut x = QuaternionMatrix::zeros(1, 16);
    x[(0, 0)] = Quaternion::new(2.0, 0.0, 0.0, 0.0);
    x[(0, 1)] = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    let (out, report) = preprocess(&x, EntryDistribution::QGaussian, 16).unwrap();
    assert_eq!(report.truncation_threshold, 2.0);
    assert_eq!(report.truncated_count, 1);
    assert_eq!(out[(0, 0)], Quaternion::ZERO);
    assert!(out[(0, 1)].a > 1.0); // rescaled by 1/sigma > 1
}

/// Closed-form truncated second moment for the gaussian kind: with
/// ||x||^2 ~ chi2(4)/4 (density 4 s e^{-2s}), the mass below threshold t is
/// 1 - e^{-2T}(2T^2 + 2T + 1) with T = t^2.
fn gaussian_sigma2_closed_form(n: usize) -> f64 {
    let t = (n as f64).sqrt(); // threshold^2 = n^{1/2}
    1.0 - (-2.0 * t).exp() * (2.0 * t * t + 2.0 * t + 1.0)
}

#[test]
fn gaussian_rescale_matches_closed_form() {
    let x = sample_matrix(2, 16, EntryDistribution::QGaussian, 9).unwrap();
    let (_, report) = preprocess(&x, EntryDistribution::QGaussian, 16).unwrap();
    let inv_sigma = report.rescale_factors[0];
    let sigma2 = 1.0 / (inv_sigma * inv_sigma);
    assert!((sigma2 - gaussian_sigma2_closed_form(16)).abs() <= 1e-10);
}

#[test]
fn gaussian_sigma2_near_one_at_large_n() {
    let x = sample_matrix(1, 10_000, EntryDistribution::QGaussian, 4).unwrap();
    let (_, report) = preprocess(&x, EntryDistribution::QGaussian, 10_000).unwrap();
    let inv_sigma = report.rescale_factors[0];
    let sigma2 = 1.0 / (inv_sigma * inv_sigma);
    assert!(sigma2 <= 1.0 && sigma2 >= 1.0 - 1e-3, "sigma2 = {sigma2}");
}

#[test]
fn bounded_mix_identity_iff_threshold_clears_support() {
    // support bound sqrt(3); 9^{1/4} = sqrt(3) exactly, 8^{1/4} falls short
    let x = sample_matrix(2, 9, EntryDistribution::QBoundedMix, 5).unwrap();
    let (out, report) = preprocess(&x, EntryDistribution::QBoundedMix, 9).unwrap();
    assert_eq!(out, x);
    assert_eq!(report.truncated_count, 0);

    let x = sample_matrix(2, 8, EntryDistribution::QBoundedMix, 5).unwrap();
    assert!(preprocess(&x, EntryDistribution::QBoundedMix, 8).is_err());
}

#[test]
fn preprocess_output_norms_stay_below_scaled_threshold() {
    let x = sample_matrix(10, 50, EntryDistribution::QGaussian, 6).unwrap();
    let (out, report) = preprocess(&x, EntryDistribution::QGaussian, 50).unwrap();
    let sigma_min_inv = report
        .rescale_factors
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let cap = report.truncation_threshold * sigma_min_inv * (1.0 + 1e-6);
    assert!(out.entries().iter().all(|q| q.norm() < cap));
}

#[test]
fn covariance_of_unit_entry_is_identity() {
    let x = QuaternionMatrix::from_fn(1, 1, |_, _| Quaternion::ONE);
    let s = sample_covariance(&x);
    assert_eq!(s.rows(), 2);
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert_eq!(s[(i, j)], num_complex::Complex64::new(want, 0.0));
        }
    }
}

#[test]
fn covariance_of_two_unit_columns_is_identity() {
    let x = QuaternionMatrix::from_fn(1, 2, |_, _| Quaternion::ONE);
    let s = sample_covariance(&x);
    for i in 0..2 {
        for j in 0..2 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((s[(i, j)] - num_complex::Complex64::new(want, 0.0)).norm() <= 1e-15);
        }
    }
}

#[test]
fn covariance_trace_matches_frobenius_identity() {
    let x = sample_matrix(4, 16, EntryDistribution::QGaussian, 2).unwrap();
    let s = sample_covariance(&x);
    let spec = eigenvalues_hermitian(&s, 1e-10).unwrap();
    let sum: f64 = spec.eigenvalues().iter().sum();
    let frob = embed_matrix(&x).frobenius_norm();
    let want = frob * frob / 16.0;
    assert!((sum - want).abs() <= 1e-10 * want.max(1.0));
}

#[test]
fn covariance_is_hermitian_and_psd() {
    let x = sample_matrix(6, 20, EntryDistribution::QBoundedMix, 8).unwrap();
    let s = sample_covariance(&x);
    assert!(s.hermitian_deviation() <= 1e-13 * s.max_abs().max(1.0));
    let spec = eigenvalues_hermitian(&s, 1e-10).unwrap();
    assert!(spec.min() >= -1e-10 * s.max_abs().max(1.0));
}
