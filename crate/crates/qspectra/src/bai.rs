//! Numerical evaluation of the Bai smoothing inequality: constant selection
//! and the three right-hand-side terms, as a computable upper bound on the
//! Kolmogorov distance between an ESD and the M-P law.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::mp_law::{MPLaw, UpperHalfPoint};
use crate::quadrature::adaptive_simpson;
use crate::spectra::StepCDF;

/// Constants (a, gamma, A, B, kappa) of the inequality. The field is named
/// `bai_a` to keep it apart from the M-P lower support edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaiConstants {
    pub bai_a: f64,
    pub gamma: f64,
    pub a_big: f64,
    pub b_big: f64,
    pub kappa: f64,
}

/// Fixed choice: bai_a = sqrt(3) (so gamma = 2/3 exactly), B = b_support + 1
/// as in the extreme-eigenvalue tail argument, A = 5B + 1 which keeps
/// kappa = 12B / (pi (4B + 1)) < 3/pi < 1.
pub fn make_constants(b_support: f64) -> BaiConstants {
    assert!(b_support > 0.0, "upper support edge must be positive");
    let bai_a = 3f64.sqrt();
    let gamma = (2.0 / PI) * bai_a.atan();
    let b_big = b_support + 1.0;
    let a_big = 5.0 * b_big + 1.0;
    let kappa = 4.0 * b_big / (PI * (a_big - b_big) * (2.0 * gamma - 1.0));
    let c = BaiConstants { bai_a, gamma, a_big, b_big, kappa };
    debug_assert!(c.is_valid());
    c
}

impl BaiConstants {
    pub fn is_valid(&self) -> bool {
        self.gamma > 0.5 && self.a_big > self.b_big && self.b_big > 0.0 && self.kappa < 1.0
    }

    pub fn prefactor(&self) -> f64 {
        1.0 / (PI * (1.0 - self.kappa) * (2.0 * self.gamma - 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaiBoundReport {
    /// integral of |f - g| over u in [-A, A] at height v
    pub term_stieltjes: f64,
    /// 2 pi v^{-1} integral of |F - G| outside [-B, B]
    pub term_tail: f64,
    /// v^{-1} sup_x integral of |G(x+s) - G(x)| over |s| <= 2 v a
    pub term_smoothing: f64,
    pub prefactor: f64,
    pub total: f64,
    pub observed_ks: f64,
}

const STIELTJES_QUAD_TOL: f64 = 1e-8;
const TAIL_QUAD_TOL: f64 = 1e-10;

/// Evaluate the three-term right-hand side of the inequality for a step CDF
/// against the M-P law, plus the observed Kolmogorov distance.
pub fn bai_rhs(f: &StepCDF, law: &MPLaw, v: f64, c: &BaiConstants) -> Result<BaiBoundReport> {
    assert!(v > 0.0, "v must be positive");
    let term_stieltjes = stieltjes_term(f, law, v, c.a_big)?;
    let term_tail = tail_term(f, law, v, c.b_big)?;
    let term_smoothing = smoothing_term(law, v, c)? / v;
    let prefactor = c.prefactor();
    let total = prefactor * (term_stieltjes + term_tail + term_smoothing);
    let mut observed_ks: f64 = 0.0;
    let mut prev = 0.0;
    for (&x, &w) in f.jump_points().iter().zip(f.cumulative_weights()) {
        let gx = law.cdf(x)?;
        observed_ks = observed_ks.max((gx - w).abs()).max((gx - prev).abs());
        prev = w;
    }
    Ok(BaiBoundReport {
        term_stieltjes,
        term_tail,
        term_smoothing,
        prefactor,
        total,
        observed_ks,
    })
}

fn stieltjes_term(f: &StepCDF, law: &MPLaw, v: f64, a_big: f64) -> Result<f64> {
    // the empirical transform is an exact finite sum over jumps; only the
    // u-integral is numerical
    let integrand = |u: f64| -> f64 {
        let z = Complex64::new(u, v);
        let fe = f.stieltjes(z);
        let g = law
            .stieltjes(UpperHalfPoint { u, v })
            .expect("v > 0 and sigma2 = 1 hold here");
        (fe - g).norm()
    };
    // split at 0 and the support to keep the adaptive rule local
    let a = law.support_lower();
    let b = law.support_upper();
    let mut cuts = vec![-a_big, 0.0, a, b, a_big];
    cuts.retain(|&x| (-a_big..=a_big).contains(&x));
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        acc += adaptive_simpson(&integrand, w[0], w[1], STIELTJES_QUAD_TOL)?;
    }
    Ok(acc)
}

fn tail_term(f: &StepCDF, law: &MPLaw, v: f64, b_big: f64) -> Result<f64> {
    // below -B both CDFs are identically zero (everything lives on [0, inf));
    // above max(lambda_max, b) both are identically one
    let b_sup = law.support_upper();
    let top = f
        .jump_points()
        .last()
        .copied()
        .unwrap_or(b_sup)
        .max(b_sup);
    if top <= b_big {
        return Ok(0.0);
    }
    // F is constant between its jumps: per-interval quadrature against the smooth G
    let mut cuts: Vec<f64> = vec![b_big, top];
    for &x in f.jump_points() {
        if x > b_big && x < top {
            cuts.push(x);
        }
    }
    if b_sup > b_big && b_sup < top {
        cuts.push(b_sup);
    }
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();
    let mut integral = 0.0;
    for w in cuts.windows(2) {
        let fc = f.value(0.5 * (w[0] + w[1]));
        if w[0] >= b_sup {
            // G = 1 exactly: the piece is a rectangle
            integral += (1.0 - fc).abs() * (w[1] - w[0]);
        } else {
            let piece = adaptive_simpson(
                |x| (fc - law.cdf(x).expect("cdf quadrature")).abs(),
                w[0],
                w[1],
                TAIL_QUAD_TOL,
            )?;
            integral += piece;
        }
    }
    Ok(2.0 * PI * integral / v)
}

/// sup_x of the windowed variation integral, taking the larger of the
/// closed-form modulus bound (y <= 1) and a direct grid sup.
fn smoothing_term(law: &MPLaw, v: f64, c: &BaiConstants) -> Result<f64> {
    let w = 2.0 * v * c.bai_a;
    let closed_form = if law.y <= 1.0 {
        // integral of g(|s|) over |s| <= w with g(s) = 2s/(y (sqrt(a)+sqrt(s)))
        let r = w.sqrt();
        let sc = law.support_lower().sqrt();
        let inner = if sc == 0.0 {
            r.powi(3) / 3.0
        } else {
            r.powi(3) / 3.0 - sc * r * r / 2.0 + sc * sc * r - sc.powi(3) * ((r + sc) / sc).ln()
        };
        Some(2.0 * (4.0 / law.y) * inner)
    } else {
        None
    };
    // direct sup on an x-grid spanning the support (and the atom at 0)
    let lo = (law.support_lower() - w).min(-w);
    let hi = law.support_upper() + w;
    let grid = 200;
    let mut sup: f64 = 0.0;
    for i in 0..=grid {
        let x = lo + (hi - lo) * i as f64 / grid as f64;
        let gx = law.cdf(x)?;
        let integral = adaptive_simpson(
            |s| (law.cdf(x + s).expect("cdf quadrature") - gx).abs(),
            -w,
            w,
            1e-9,
        )?;
        sup = sup.max(integral);
    }
    Ok(match closed_form {
        Some(cf) => cf.max(sup),
        None => sup,
    })
}
