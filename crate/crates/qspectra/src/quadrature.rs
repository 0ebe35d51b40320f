//! Adaptive Simpson quadrature for real- and complex-valued integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Value types the adaptive integrator can accumulate.
pub trait Integrable: Copy + std::ops::Add<Output = Self> + std::ops::Sub<Output = Self> {
    fn scale(self, s: f64) -> Self;
    fn magnitude(self) -> f64;
    fn zero() -> Self;
}

impl Integrable for f64 {
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn zero() -> Self {
        0.0
    }
}

impl Integrable for Complex64 {
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

const MAX_DEPTH: u32 = 60;

/// Adaptive Simpson integration of `f` over `[lo, hi]` to absolute tolerance `tol`.
pub fn adaptive_simpson<T, F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<T>
where
    T: Integrable,
    F: Fn(f64) -> T,
{
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::NonFinite("integration bounds"));
    }
    if lo == hi {
        return Ok(T::zero());
    }
    let mid = 0.5 * (lo + hi);
    let flo = f(lo);
    let fmid = f(mid);
    let fhi = f(hi);
    let whole = simpson(flo, fmid, fhi, hi - lo);
    recurse(&f, lo, hi, flo, fmid, fhi, whole, tol, MAX_DEPTH)
}

fn simpson<T: Integrable>(fa: T, fm: T, fb: T, h: f64) -> T {
    (fa + fm.scale(4.0) + fb).scale(h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn recurse<T, F>(f: &F, lo: f64, hi: f64, flo: T, fmid: T, fhi: T, whole: T, tol: f64, depth: u32) -> Result<T>
where
    T: Integrable,
    F: Fn(f64) -> T,
{
    let mid = 0.5 * (lo + hi);
    let lm = 0.5 * (lo + mid);
    let rm = 0.5 * (mid + hi);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(flo, flm, fmid, mid - lo);
    let right = simpson(fmid, frm, fhi, hi - mid);
    let err = (left + right - whole).magnitude();
    if err <= 15.0 * tol || (hi - lo) < f64::EPSILON * (lo.abs() + hi.abs() + 1.0) {
        if depth == 0 && err > 15.0 * tol {
            return Err(Error::Quadrature { tol, estimate: err / 15.0 });
        }
        // Richardson extrapolation of the two panel estimates.
        return Ok(left + right + (left + right - whole).scale(1.0 / 15.0));
    }
    if depth == 0 {
        return Err(Error::Quadrature { tol, estimate: err / 15.0 });
    }
    let a = recurse(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1)?;
    let b = recurse(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1)?;
    Ok(a + b)
}

/// Fixed-grid composite Simpson rule with `panels` panels (`panels` must be even and >= 2).
/// Independent of the adaptive path; used as a cross-check oracle.
pub fn fixed_simpson<T, F>(f: F, lo: f64, hi: f64, panels: usize) -> T
where
    T: Integrable,
    F: Fn(f64) -> T,
{
    assert!(panels >= 2 && panels % 2 == 0, "panels must be even");
    let h = (hi - lo) / panels as f64;
    let mut acc = f(lo) + f(hi);
    for i in 1..panels {
        let x = lo + h * i as f64;
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc = acc + f(x).scale(w);
    }
    acc.scale(h / 3.0)
}
