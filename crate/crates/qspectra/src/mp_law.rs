//! The Marchenko-Pastur reference law: density, CDF (with the point mass at
//! zero for y > 1), Stieltjes transform with Herglotz branch selection, and
//! the smoothing modulus.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

pub const CDF_QUAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MPLaw {
    pub y: f64,
    pub sigma2: f64,
}

/// z = u + iv with v > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfPoint {
    pub u: f64,
    pub v: f64,
}

impl UpperHalfPoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) {
            return Err(Error::InvalidParameter(format!("v must be positive, got {v}")));
        }
        Ok(Self { u, v })
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }
}

/// v_y = sqrt(a_n) + sqrt(v), the smoothing scale coupling the lower support
/// edge and the imaginary offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingScale {
    pub v: f64,
    pub v_y: f64,
}

impl SmoothingScale {
    pub fn new(a_n: f64, v: f64) -> Result<Self> {
        if !(v > 0.0) {
            return Err(Error::InvalidParameter(format!("v must be positive, got {v}")));
        }
        Ok(Self { v, v_y: a_n.sqrt() + v.sqrt() })
    }
}

impl MPLaw {
    pub fn new(y: f64) -> Result<Self> {
        Self::with_scale(y, 1.0)
    }

    pub fn with_scale(y: f64, sigma2: f64) -> Result<Self> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::InvalidParameter(format!("y must be positive, got {y}")));
        }
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::InvalidParameter(format!("sigma2 must be positive, got {sigma2}")));
        }
        Ok(Self { y, sigma2 })
    }

    /// Lower support edge a = sigma2 (1 - sqrt(y))^2.
    pub fn support_lower(&self) -> f64 {
        let s = 1.0 - self.y.sqrt();
        self.sigma2 * s * s
    }

    /// Upper support edge b = sigma2 (1 + sqrt(y))^2.
    pub fn support_upper(&self) -> f64 {
        let s = 1.0 + self.y.sqrt();
        self.sigma2 * s * s
    }

    /// Mass of the atom at zero (nonzero only for y > 1).
    pub fn atom(&self) -> f64 {
        if self.y > 1.0 {
            1.0 - 1.0 / self.y
        } else {
            0.0
        }
    }

    /// Continuous density; zero outside [a, b] and exactly zero at both edges.
    pub fn density(&self, x: f64) -> f64 {
        let a = self.support_lower();
        let b = self.support_upper();
        // zero at both edges; covers x = 0 when y = 1 via the one-sided limit convention
        if x <= a || x >= b {
            return 0.0;
        }
        ((b - x) * (x - a)).sqrt() / (2.0 * std::f64::consts::PI * x * self.y * self.sigma2)
    }

    /// F(x) = atom * I(x >= 0) + integral of the density up to x.
    ///
    /// The continuous part is integrated under x = a + (b-a) sin^2(t), which
    /// removes the square-root endpoint behavior and leaves a smooth
    /// integrand for the adaptive rule.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        let a = self.support_lower();
        let b = self.support_upper();
        let atom = if x >= 0.0 { self.atom() } else { 0.0 };
        if x <= a {
            return Ok(atom);
        }
        if x >= b {
            return Ok(1.0);
        }
        let theta = (((x - a) / (b - a)).sqrt()).asin();
        let cont = adaptive_simpson(|t| self.density_theta(t), 0.0, theta, CDF_QUAD_TOL)?;
        Ok((atom + cont).min(1.0))
    }

    /// Integrand of the continuous CDF mass after the sin^2 substitution.
    fn density_theta(&self, t: f64) -> f64 {
        let a = self.support_lower();
        let b = self.support_upper();
        let (s, c) = t.sin_cos();
        let x = a + (b - a) * s * s;
        if x == 0.0 {
            // y = 1 limit: integrand tends to b cos^2(t) / pi
            return b * c * c / (std::f64::consts::PI * self.y * self.sigma2);
        }
        (b - a) * (b - a) * s * s * c * c / (std::f64::consts::PI * self.y * self.sigma2 * x)
    }

    /// Closed-form Stieltjes transform (sigma2 = 1 only), branch chosen so
    /// that Im s(z) > 0.
    pub fn stieltjes(&self, z: UpperHalfPoint) -> Result<Complex64> {
        if self.sigma2 != 1.0 {
            return Err(Error::InvalidParameter("stieltjes requires sigma2 = 1".into()));
        }
        let zc = z.as_complex();
        let y = Complex64::new(self.y, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let w = (zc - one - y) * (zc - one - y) - 4.0 * y;
        let root = w.sqrt();
        let denom = 2.0 * y * zc;
        let s_plus = (one - y - zc + root) / denom;
        let s_minus = (one - y - zc - root) / denom;
        if s_plus.im > 0.0 {
            Ok(s_plus)
        } else if s_minus.im > 0.0 {
            Ok(s_minus)
        } else {
            Err(Error::BranchFailure)
        }
    }

    /// Smoothing modulus g(v) = 2v / (y (sqrt(a) + sqrt(v))), valid for y <= 1:
    /// sup_x |F(x + theta) - F(x)| <= g(theta).
    pub fn smoothing_modulus(&self, v: f64) -> Result<f64> {
        if self.y > 1.0 {
            return Err(Error::InvalidParameter(
                "smoothing modulus is stated for y <= 1 only".into(),
            ));
        }
        if !(v > 0.0) {
            return Err(Error::InvalidParameter(format!("v must be positive, got {v}")));
        }
        let a = self.support_lower();
        Ok(2.0 * v / (self.y * (a.sqrt() + v.sqrt())))
    }
}
