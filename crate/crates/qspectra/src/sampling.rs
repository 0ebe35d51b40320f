//! Entry generators (mean-zero, unit second moment, bounded sixth moment)
//! and the truncation / centralization / rescaling pipeline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::quaternion::{embed_matrix, Quaternion, QuaternionMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryDistribution {
    /// Each coefficient independent N(0, 1/4).
    QGaussian,
    /// Each coefficient uniform on {-1/2, +1/2}; entry norm exactly 1.
    QRademacher,
    /// Each coefficient uniform on [-sqrt(3)/2, sqrt(3)/2], variance 1/4.
    QBoundedMix,
}

impl EntryDistribution {
    /// A valid uniform bound M on the sixth absolute moment E||x||^6.
    pub fn sixth_moment_bound(&self) -> f64 {
        match self {
            // ||x||^2 = chi2(4)/4 and E chi2(4)^3 = 4*6*8, so E||x||^6 = 192/64
            EntryDistribution::QGaussian => 3.0,
            EntryDistribution::QRademacher => 1.0,
            // ||x||^2 <= 3, so E||x||^6 <= 27
            EntryDistribution::QBoundedMix => 27.0,
        }
    }

    /// Largest possible entry norm, or None when unbounded.
    fn norm_bound(&self) -> Option<f64> {
        match self {
            EntryDistribution::QGaussian => None,
            EntryDistribution::QRademacher => Some(1.0),
            EntryDistribution::QBoundedMix => Some(3f64.sqrt()),
        }
    }

    fn sample(&self, rng: &mut impl Rng) -> Quaternion {
        match self {
            EntryDistribution::QGaussian => {
                let normal = Normal::new(0.0, 0.5).expect("valid normal params");
                Quaternion::new(
                    normal.sample(rng),
                    normal.sample(rng),
                    normal.sample(rng),
                    normal.sample(rng),
                )
            }
            EntryDistribution::QRademacher => {
                let mut coeff = || if rng.gen::<bool>() { 0.5 } else { -0.5 };
                let (a, b, c, d) = (coeff(), coeff(), coeff(), coeff());
                Quaternion::new(a, b, c, d)
            }
            EntryDistribution::QBoundedMix => {
                let half = 3f64.sqrt() / 2.0;
                Quaternion::new(
                    rng.gen_range(-half..=half),
                    rng.gen_range(-half..=half),
                    rng.gen_range(-half..=half),
                    rng.gen_range(-half..=half),
                )
            }
        }
    }
}

/// Splittable per-replication stream: mixing (master_seed, index) through
/// SplitMix64 so parallel scheduling cannot change the draw order.
pub fn replication_seed(master_seed: u64, replication_index: u64) -> u64 {
    let mut z = master_seed
        .wrapping_mul(0x9e3779b97f4a7c15)
        .wrapping_add(replication_index.wrapping_mul(0xbf58476d1ce4e5b9))
        .wrapping_add(0x94d049bb133111eb);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// i.i.d. p x n quaternion matrix; a pure function of (p, n, dist, seed).
pub fn sample_matrix(
    p: usize,
    n: usize,
    dist: EntryDistribution,
    seed: u64,
) -> Result<QuaternionMatrix> {
    if p == 0 || n == 0 {
        return Err(Error::Dimension(format!("dimensions must be positive, got p={p}, n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = QuaternionMatrix::zeros(p, n);
    for i in 0..p {
        for j in 0..n {
            m[(i, j)] = dist.sample(&mut rng);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessReport {
    pub truncation_threshold: f64,
    pub truncated_count: usize,
    pub recentering_shift: Quaternion,
    /// sigma_jk^{-1} per entry, row-major p x n.
    pub rescale_factors: Vec<f64>,
}

/// Truncated second moment of ||x|| for q_gaussian at threshold t:
/// E ||x||^2 I(||x|| < t), where ||x||^2 ~ chi2(4)/4 with density 4 s e^{-2s}.
fn gaussian_truncated_second_moment(t: f64) -> Result<f64> {
    let cap = (t * t).min(40.0); // tail mass beyond s=40 is ~e^{-80}, far below tolerance
    // truncation can only shrink the second moment; clamp away quadrature roundoff
    adaptive_simpson(|s| 4.0 * s * s * (-2.0 * s).exp(), 0.0, cap, 1e-12).map(|m| m.min(1.0))
}

/// The truncation -> centralization -> rescaling pipeline at threshold n^{1/4}.
///
/// Expectations are the analytic truncated moments of the generating
/// distribution, not plug-in sample moments. All three supported kinds are
/// coefficient-symmetric, so the truncated mean is the zero quaternion and
/// only the rescaling factor carries information.
pub fn preprocess(
    x: &QuaternionMatrix,
    dist: EntryDistribution,
    n: usize,
) -> Result<(QuaternionMatrix, PreprocessReport)> {
    if n != x.cols() {
        return Err(Error::Dimension(format!(
            "n = {n} does not match column count {}",
            x.cols()
        )));
    }
    let threshold = (n as f64).powf(0.25);
    let sigma2 = match dist.norm_bound() {
        // bounded entries: the pipeline is the identity once the threshold
        // clears the support (norm = bound has probability zero)
        Some(bound) if threshold >= bound => 1.0,
        Some(bound) => {
            return Err(Error::UnsupportedTruncation(format!(
                "threshold {threshold:.4} cuts into the bounded support (norm bound {bound:.4}); \
                 no closed-form truncated moments"
            )));
        }
        None => gaussian_truncated_second_moment(threshold)?,
    };
    if !(sigma2 > 0.0) {
        return Err(Error::Degenerate("truncated variance vanished".into()));
    }
    let inv_sigma = 1.0 / sigma2.sqrt();
    let truncated_count = x.entries().iter().filter(|q| q.norm() >= threshold).count();
    let out = x.map(|q| {
        if q.norm() >= threshold {
            Quaternion::ZERO
        } else {
            q.scale(inv_sigma)
        }
    });
    let report = PreprocessReport {
        truncation_threshold: threshold,
        truncated_count,
        recentering_shift: Quaternion::ZERO,
        rescale_factors: vec![inv_sigma; x.rows() * x.cols()],
    };
    Ok((out, report))
}

/// S_n = (1/n) psi(X) psi(X)*, exactly Hermitian by construction (upper
/// triangle computed, mirror filled).
pub fn sample_covariance(x: &QuaternionMatrix) -> CMatrix {
    let y = embed_matrix(x);
    y.scaled_gram(1.0 / x.cols() as f64)
}
