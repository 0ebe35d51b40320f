//! Empirical Stieltjes transforms, the self-consistency fixed point of the
//! M-P equation, the delta_n residual, and the b_n diagnostic conditions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mp_law::{MPLaw, UpperHalfPoint};
use crate::spectra::Spectrum;

/// s_p(z) = (1/2p) sum_j 1/(lambda_j - z).
pub fn empirical_stieltjes(s: &Spectrum, z: UpperHalfPoint) -> Complex64 {
    let zc = z.as_complex();
    let n = s.dimension() as f64;
    s.eigenvalues()
        .iter()
        .map(|&l| 1.0 / (Complex64::new(l, 0.0) - zc))
        .sum::<Complex64>()
        / n
}

/// delta_n = sp_mean - 1 / (1 - z - y_p - y_p z sp_mean).
pub fn delta_residual(sp_mean: Complex64, z: UpperHalfPoint, y_p: f64) -> Result<Complex64> {
    let zc = z.as_complex();
    let denom = Complex64::new(1.0 - y_p, 0.0) - zc - y_p * zc * sp_mean;
    if denom.norm() < 1e-300 {
        return Err(Error::Degenerate(format!(
            "fixed-point denominator vanished at z = {} + {}i",
            z.u, z.v
        )));
    }
    Ok(sp_mean - 1.0 / denom)
}

/// Root of y_p z m^2 - ((1 - z - y_p) + y_p z delta) m + (1 + delta (1 - z - y_p)) = 0
/// with Im m > 0; this is the quadratic form of the fixed-point equation, so
/// delta = 0 recovers the M-P Stieltjes transform.
pub fn solve_fixed_point(z: UpperHalfPoint, y_p: f64, delta: Complex64) -> Result<Complex64> {
    if !(y_p > 0.0) {
        return Err(Error::InvalidParameter(format!("y_p must be positive, got {y_p}")));
    }
    let zc = z.as_complex();
    let qa = y_p * zc;
    let lin = Complex64::new(1.0 - y_p, 0.0) - zc;
    let qb = -(lin + y_p * zc * delta);
    let qc = Complex64::new(1.0, 0.0) + delta * lin;
    let disc = qb * qb - 4.0 * qa * qc;
    let root = disc.sqrt();
    // evaluate both quadratic roots with the numerically stable split
    let denom = 2.0 * qa;
    let m1 = (-qb + root) / denom;
    let m2 = (-qb - root) / denom;
    if m1.im > 0.0 {
        Ok(m1)
    } else if m2.im > 0.0 {
        Ok(m2)
    } else {
        Err(Error::BranchFailure)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointDiagnostics {
    pub z: UpperHalfPoint,
    pub sp_mean: Complex64,
    pub delta_n: Complex64,
    pub b_n: Complex64,
    pub v_y: f64,
    /// |delta_n| <= v / (v_y * 10 (A+1)^2), the hypothesis gating the b_n bound.
    pub leb_condition: bool,
    /// |b_n| <= 2 / sqrt(y_p |z|), the gated conclusion.
    pub leb_bound_holds: bool,
}

/// b_n, delta_n and the two Lemma-style condition flags at a single z.
pub fn diagnostics(
    sp_mean: Complex64,
    z: UpperHalfPoint,
    y_p: f64,
    a_const: f64,
) -> Result<FixedPointDiagnostics> {
    if !(a_const > 0.0) {
        return Err(Error::InvalidParameter(format!("A must be positive, got {a_const}")));
    }
    let zc = z.as_complex();
    let delta_n = delta_residual(sp_mean, z, y_p)?;
    let b_n = 1.0 / (zc + Complex64::new(y_p - 1.0, 0.0) + y_p * zc * sp_mean);
    let law = MPLaw::new(y_p)?;
    let a_n = law.support_lower();
    let v_y = a_n.sqrt() + z.v.sqrt();
    let leb_condition = delta_n.norm() <= z.v / (v_y * 10.0 * (a_const + 1.0) * (a_const + 1.0));
    let leb_bound_holds = b_n.norm() <= 2.0 / (y_p * zc.norm()).sqrt();
    Ok(FixedPointDiagnostics {
        z,
        sp_mean,
        delta_n,
        b_n,
        v_y,
        leb_condition,
        leb_bound_holds,
    })
}
