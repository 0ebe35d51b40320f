//! Seeded Monte Carlo harness: rate sweeps over n, variance scaling of the
//! empirical Stieltjes transform, extreme-eigenvalue checks, and the
//! reflection identity for y_p > 1. Replications run in parallel on
//! independent RNG streams and are reduced in replication-index order, so
//! results are a pure function of the config.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixed_point::empirical_stieltjes;
use crate::mp_law::{MPLaw, UpperHalfPoint};
use crate::quaternion::{embed_matrix, QuaternionMatrix};
use crate::sampling::{
    preprocess, replication_seed, sample_covariance, sample_matrix, EntryDistribution,
};
use crate::spectra::{
    eigenvalues_hermitian, esd, kolmogorov_distance, pooled_esd, Spectrum,
};

pub const EIGEN_HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VPolicy {
    Fixed(f64),
    Named(String),
}

impl Default for VPolicy {
    fn default() -> Self {
        VPolicy::Named("auto".into())
    }
}

impl VPolicy {
    /// Imaginary offset for bound evaluation at sample size n. The "auto"
    /// policy follows the weak-rate proof's choice v ~ n^{-2/5} a_n^{1/10}
    /// (multiplier 1) in the a_n > n^{-2/5} regime and n^{-2/5} otherwise.
    pub fn value(&self, n: usize, a_n: f64) -> Result<f64> {
        match self {
            VPolicy::Fixed(v) if *v > 0.0 => Ok(*v),
            VPolicy::Fixed(v) => Err(Error::Config(format!("v must be positive, got {v}"))),
            VPolicy::Named(s) if s == "auto" => {
                let nf = n as f64;
                let base = nf.powf(-0.4);
                Ok(if a_n > nf.powf(-0.4) {
                    base * a_n.powf(0.1)
                } else {
                    base
                })
            }
            VPolicy::Named(s) => Err(Error::Config(format!("unknown v policy '{s}'"))),
        }
    }
}

fn default_v() -> VPolicy {
    VPolicy::default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub distribution: EntryDistribution,
    /// Target ratio y; per grid point p = round(y * n) and y_p = p/n.
    pub y: f64,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    #[serde(default = "default_v")]
    pub v: VPolicy,
    #[serde(default)]
    pub out: Option<String>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.y > 0.0) || !self.y.is_finite() {
            return Err(Error::Config(format!("y must be positive, got {}", self.y)));
        }
        if self.n_grid.is_empty() {
            return Err(Error::Config("n_grid must be nonempty".into()));
        }
        if !self.n_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Config("n_grid must be strictly increasing".into()));
        }
        if self.replications < 1 {
            return Err(Error::Config("replications must be >= 1".into()));
        }
        for &n in &self.n_grid {
            if self.rows_for(n) < 1 {
                return Err(Error::Config(format!("p = round(y*n) < 1 at n = {n}")));
            }
        }
        Ok(())
    }

    pub fn rows_for(&self, n: usize) -> usize {
        (self.y * n as f64).round() as usize
    }
}

/// Theorem-shaped expected-ESD bound: n^{-1/2} a_n^{-3/4} when a_n > n^{-2/5},
/// n^{-1/5} otherwise.
pub fn bound_thm1(n: usize, a_n: f64) -> f64 {
    let nf = n as f64;
    if a_n > nf.powf(-0.4) {
        nf.powf(-0.5) * a_n.powf(-0.75)
    } else {
        nf.powf(-0.2)
    }
}

/// In-probability bound shape: n^{-2/5} a_n^{-2/5} when a_n > n^{-2/5},
/// n^{-1/5} otherwise.
pub fn bound_thm2(n: usize, a_n: f64) -> f64 {
    let nf = n as f64;
    if a_n > nf.powf(-0.4) {
        nf.powf(-0.4) * a_n.powf(-0.4)
    } else {
        nf.powf(-0.2)
    }
}

/// sample -> preprocess -> covariance -> spectrum for one replication stream.
pub fn run_replication(
    p: usize,
    n: usize,
    dist: EntryDistribution,
    master_seed: u64,
    rep: u64,
) -> Result<Spectrum> {
    let seed = replication_seed(master_seed, rep);
    let x = sample_matrix(p, n, dist, seed)?;
    let (x, _report) = preprocess(&x, dist, n)?;
    let s = sample_covariance(&x);
    eigenvalues_hermitian(&s, EIGEN_HERMITIAN_TOL).map_err(|e| {
        Error::Degenerate(format!("eigensolver failed at n={n}, p={p}, seed={seed}: {e}"))
    })
}

/// All replication spectra for one grid point, in replication-index order.
pub fn replication_spectra(cfg: &ExperimentConfig, n: usize) -> Result<Vec<Spectrum>> {
    let p = cfg.rows_for(n);
    (0..cfg.replications as u64)
        .into_par_iter()
        .map(|rep| run_replication(p, n, cfg.distribution, cfg.seed, rep))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub n: usize,
    pub p: usize,
    pub y_p: f64,
    pub a_n: f64,
    pub mean_ks: f64,
    pub ks_std: f64,
    pub pooled_ks: f64,
    pub bound_thm1: f64,
    pub bound_thm2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub rows: Vec<RateRow>,
    /// least-squares slope of log(mean_ks) against log(n)
    pub slope_mean: f64,
    /// least-squares slope of log(pooled_ks) against log(n)
    pub slope_pooled: f64,
}

pub fn rate_sweep(cfg: &ExperimentConfig) -> Result<RateReport> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.n_grid.len());
    for &n in &cfg.n_grid {
        let p = cfg.rows_for(n);
        let y_p = p as f64 / n as f64;
        let law = MPLaw::new(y_p)?;
        let a_n = law.support_lower();
        let spectra = replication_spectra(cfg, n)?;
        let g = |x: f64| law.cdf(x).expect("M-P cdf quadrature");
        let distances: Vec<f64> = spectra
            .iter()
            .map(|s| esd(s).map(|f| kolmogorov_distance(&f, g)))
            .collect::<Result<_>>()?;
        let mean_ks = distances.iter().sum::<f64>() / distances.len() as f64;
        let ks_std = if distances.len() > 1 {
            (distances.iter().map(|d| (d - mean_ks).powi(2)).sum::<f64>()
                / (distances.len() - 1) as f64)
                .sqrt()
        } else {
            0.0
        };
        let pooled = pooled_esd(&spectra)?;
        let pooled_ks = kolmogorov_distance(&pooled, g);
        rows.push(RateRow {
            n,
            p,
            y_p,
            a_n,
            mean_ks,
            ks_std,
            pooled_ks,
            bound_thm1: bound_thm1(n, a_n),
            bound_thm2: bound_thm2(n, a_n),
        });
    }
    let slope_mean = loglog_slope(rows.iter().map(|r| (r.n as f64, r.mean_ks)));
    let slope_pooled = loglog_slope(rows.iter().map(|r| (r.n as f64, r.pooled_ks)));
    Ok(RateReport { rows, slope_mean, slope_pooled })
}

/// Least-squares slope of log(y) vs log(x); NaN for fewer than two points.
pub fn loglog_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceRow {
    pub n: usize,
    pub p: usize,
    pub var_re: f64,
    pub var_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceReport {
    pub rows: Vec<VarianceRow>,
    pub slope_re: f64,
    pub slope_im: f64,
    /// replications too small for meaningful sample variances
    pub low_confidence: bool,
}

/// Sample variance of Re/Im s_p(z) across replications, per grid n.
pub fn variance_scaling(cfg: &ExperimentConfig, z: UpperHalfPoint) -> Result<VarianceReport> {
    cfg.validate()?;
    if let Some(&n_max) = cfg.n_grid.last() {
        if z.v <= (n_max as f64).powf(-0.5) {
            return Err(Error::Config(format!(
                "v = {} must exceed n^(-1/2) = {} at the largest grid point",
                z.v,
                (n_max as f64).powf(-0.5)
            )));
        }
    }
    let mut rows = Vec::new();
    for &n in &cfg.n_grid {
        let p = cfg.rows_for(n);
        let spectra = replication_spectra(cfg, n)?;
        let vals: Vec<_> = spectra.iter().map(|s| empirical_stieltjes(s, z)).collect();
        let var = |f: &dyn Fn(&num_complex::Complex64) -> f64| -> f64 {
            let xs: Vec<f64> = vals.iter().map(f).collect();
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            if xs.len() > 1 {
                xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
            } else {
                0.0
            }
        };
        rows.push(VarianceRow {
            n,
            p,
            var_re: var(&|c| c.re),
            var_im: var(&|c| c.im),
        });
    }
    let slope_re = loglog_slope(rows.iter().map(|r| (r.n as f64, r.var_re)));
    let slope_im = loglog_slope(rows.iter().map(|r| (r.n as f64, r.var_im)));
    Ok(VarianceReport {
        rows,
        slope_re,
        slope_im,
        low_confidence: cfg.replications < 10,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaMaxRow {
    pub n: usize,
    pub p: usize,
    pub lambda_max: f64,
    pub threshold: f64,
    pub exceedances: usize,
    pub per_replication: Vec<f64>,
}

/// Largest eigenvalue per replication against the a.s. edge (1+sqrt(y_p))^2
/// plus a margin; exceedances are counted, never asserted here.
pub fn lambda_max_check(cfg: &ExperimentConfig, margin: f64) -> Result<Vec<LambdaMaxRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &n in &cfg.n_grid {
        let p = cfg.rows_for(n);
        let y_p = p as f64 / n as f64;
        let edge = (1.0 + y_p.sqrt()).powi(2);
        let threshold = edge + margin;
        let spectra = replication_spectra(cfg, n)?;
        let per_replication: Vec<f64> = spectra.iter().map(|s| s.max()).collect();
        let lambda_max = per_replication.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exceedances = per_replication.iter().filter(|&&l| l > threshold).count();
        rows.push(LambdaMaxRow {
            n,
            p,
            lambda_max,
            threshold,
            exceedances,
            per_replication,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReflectionReport {
    pub p: usize,
    pub n: usize,
    pub y_p: f64,
    /// max relative deviation between the nonzero-eigenvalue multisets of
    /// (1/n) X X* and (1/n) X* X
    pub multiset_deviation: f64,
    pub zero_count: usize,
    pub expected_zero_count: usize,
    /// sup deviation of the printed reflection identity across both jump sets
    pub identity_deviation: f64,
}

/// Checks the reflection identity for y_p > 1: the companion 2n x 2n Gram
/// matrix carries the nonzero spectrum, and the ESDs match after rescaling
/// plus the point mass at zero.
pub fn reflection_check(x: &QuaternionMatrix) -> Result<ReflectionReport> {
    let (p, n) = (x.rows(), x.cols());
    if p <= n {
        return Err(Error::InvalidParameter(format!(
            "reflection check requires p > n, got p={p}, n={n}"
        )));
    }
    let y_p = p as f64 / n as f64;
    let s_n = sample_covariance(x); // (1/n) psi(X) psi(X)*, 2p x 2p
    let companion = embed_matrix(x)
        .conj_transpose()
        .scaled_gram(1.0 / n as f64); // (1/n) psi(X)* psi(X), 2n x 2n
    let spec_s = eigenvalues_hermitian(&s_n, EIGEN_HERMITIAN_TOL)?;
    let spec_c = eigenvalues_hermitian(&companion, EIGEN_HERMITIAN_TOL)?;
    let scale = spec_s.max().abs().max(1.0);

    // nonzero spectrum of S_n = top 2n eigenvalues; compare sorted
    let top: Vec<f64> = spec_s.eigenvalues()[2 * (p - n)..].to_vec();
    let multiset_deviation = top
        .iter()
        .zip(spec_c.eigenvalues())
        .map(|(a, b)| (a - b).abs() / scale)
        .fold(0.0, f64::max);

    let zero_tol = 1e-9 * scale;
    let zero_count = spec_s.eigenvalues().iter().filter(|&&l| l.abs() <= zero_tol).count();

    // printed identity: F^{S_n}(x) = y_p^{-1} G_n(y_p^{-1} x) + (1 - y_p^{-1}) I(x >= 0),
    // with G_n the ESD of W_p = (1/p) X* X = (1/y_p) * companion spectrum
    let f_s = esd(&spec_s)?;
    let w_eigs: Vec<f64> = spec_c.eigenvalues().iter().map(|&l| l / y_p).collect();
    let g_n = esd(&Spectrum::from_sorted(w_eigs))?;
    let rhs = |x: f64| -> f64 {
        let ind = if x >= 0.0 { 1.0 } else { 0.0 };
        g_n.value(x / y_p) / y_p + (1.0 - 1.0 / y_p) * ind
    };
    let mut identity_deviation: f64 = 0.0;
    let mut candidates: Vec<f64> = f_s.jump_points().to_vec();
    candidates.extend(g_n.jump_points().iter().map(|&x| x * y_p));
    candidates.push(0.0);
    for x in candidates {
        identity_deviation = identity_deviation.max((f_s.value(x) - rhs(x)).abs());
    }
    Ok(ReflectionReport {
        p,
        n,
        y_p,
        multiset_deviation,
        zero_count,
        expected_zero_count: 2 * (p - n),
        identity_deviation,
    })
}

/// Helper shared by the acceptance checks: pooled distance can exceed the
/// mean distance only by sampling noise.
pub fn pooled_mean_slack(replications: usize, dim: usize) -> f64 {
    2.0 / ((replications * dim) as f64).sqrt()
}

/// Build the per-row CSV body for a rate sweep (header + one record per n).
pub fn rate_csv(report: &RateReport) -> String {
    let mut out = String::from("n,p,y_p,a_n,mean_ks,ks_std,pooled_ks,bound_thm1,bound_thm2\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.n, r.p, r.y_p, r.a_n, r.mean_ks, r.ks_std, r.pooled_ks, r.bound_thm1, r.bound_thm2
        ));
    }
    out
}

pub fn variance_csv(report: &VarianceReport) -> String {
    let mut out = String::from("n,p,var_re,var_im\n");
    for r in &report.rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, r.p, r.var_re, r.var_im));
    }
    out
}

pub fn lambda_max_csv(rows: &[LambdaMaxRow]) -> String {
    let mut out = String::from("n,p,lambda_max,threshold,exceedances\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n, r.p, r.lambda_max, r.threshold, r.exceedances
        ));
    }
    out
}
