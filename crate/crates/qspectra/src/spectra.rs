//! Complex Hermitian eigensolver (Householder tridiagonalization followed by
//! implicit-shift QL), empirical spectral distributions, and CDF distances.

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};

/// Sorted eigenvalues of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn from_sorted(eigenvalues: Vec<f64>) -> Self {
        debug_assert!(eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Right-continuous step CDF: F(x) = weight of jump points <= x.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCDF {
    jump_points: Vec<f64>,
    cumulative_weights: Vec<f64>,
}

impl StepCDF {
    /// Build from a sorted list of atoms with equal mass 1/len.
    fn from_sorted_atoms(atoms: &[f64]) -> Self {
        assert!(!atoms.is_empty());
        let mass = 1.0 / atoms.len() as f64;
        let mut jump_points = Vec::new();
        let mut cumulative_weights = Vec::new();
        let mut count = 0usize;
        let mut idx = 0usize;
        while idx < atoms.len() {
            let x = atoms[idx];
            let mut j = idx;
            while j < atoms.len() && atoms[j] == x {
                j += 1;
            }
            count += j - idx;
            jump_points.push(x);
            cumulative_weights.push(count as f64 * mass);
            idx = j;
        }
        *cumulative_weights.last_mut().unwrap() = 1.0;
        Self { jump_points, cumulative_weights }
    }

    pub fn jump_points(&self) -> &[f64] {
        &self.jump_points
    }

    pub fn cumulative_weights(&self) -> &[f64] {
        &self.cumulative_weights
    }

    /// F(x), right-continuous.
    pub fn value(&self, x: f64) -> f64 {
        match self.jump_points.partition_point(|&p| p <= x) {
            0 => 0.0,
            k => self.cumulative_weights[k - 1],
        }
    }

    /// F(x-), the left limit.
    pub fn value_left(&self, x: f64) -> f64 {
        match self.jump_points.partition_point(|&p| p < x) {
            0 => 0.0,
            k => self.cumulative_weights[k - 1],
        }
    }

    /// Mass of each jump, aligned with `jump_points`.
    pub fn jump_masses(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.cumulative_weights
            .iter()
            .map(|&w| {
                let m = w - prev;
                prev = w;
                m
            })
            .collect()
    }

    /// Empirical Stieltjes transform: sum of mass_j / (x_j - z).
    pub fn stieltjes(&self, z: Complex64) -> Complex64 {
        self.jump_points
            .iter()
            .zip(self.jump_masses())
            .map(|(&x, m)| m / (Complex64::new(x, 0.0) - z))
            .sum()
    }
}

/// ESD of a spectrum: mass 1/(2p) at each eigenvalue.
pub fn esd(s: &Spectrum) -> Result<StepCDF> {
    if s.dimension() == 0 {
        return Err(Error::Dimension("empty spectrum".into()));
    }
    Ok(StepCDF::from_sorted_atoms(s.eigenvalues()))
}

/// Pooled ESD across replications (the mixture of the individual ESDs).
pub fn pooled_esd(spectra: &[Spectrum]) -> Result<StepCDF> {
    let mut all: Vec<f64> = spectra.iter().flat_map(|s| s.eigenvalues().iter().copied()).collect();
    if all.is_empty() {
        return Err(Error::Dimension("no spectra to pool".into()));
    }
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(StepCDF::from_sorted_atoms(&all))
}

/// Exact Kolmogorov distance between a step CDF and a continuous CDF,
/// taking the sup over jump points from both sides of each jump.
pub fn kolmogorov_distance<G: Fn(f64) -> f64>(f: &StepCDF, g: G) -> f64 {
    let mut sup: f64 = 0.0;
    let mut prev = 0.0;
    for (&x, &w) in f.jump_points.iter().zip(&f.cumulative_weights) {
        let gx = g(x);
        sup = sup.max((gx - w).abs()).max((gx - prev).abs());
        prev = w;
    }
    sup
}

/// sup |F - G| for two step CDFs, evaluated around all jumps of either.
pub fn ks_between_steps(f: &StepCDF, g: &StepCDF) -> f64 {
    let mut sup: f64 = 0.0;
    for &x in f.jump_points.iter().chain(g.jump_points.iter()) {
        sup = sup.max((f.value(x) - g.value(x)).abs());
        sup = sup.max((f.value_left(x) - g.value_left(x)).abs());
    }
    sup
}

/// Levy distance between two step CDFs by bisection on the band half-width.
///
/// feasible(eps) checks F(x-eps)-eps <= G(x) <= F(x+eps)+eps for all x; for
/// step functions the sup of each side deviation is attained at a jump of one
/// of the two functions (from the left or the right), which is what we sweep.
pub fn levy_distance(f: &StepCDF, g: &StepCDF) -> f64 {
    const TOL: f64 = 1e-9;
    let feasible = |eps: f64| -> bool {
        // sup_x [F(x-eps) - G(x)] <= eps  and  sup_x [G(x) - F(x+eps)] <= eps
        sup_shifted_diff(f, g, -eps) <= eps + 1e-15 && sup_shifted_diff(g, f, -eps) <= eps + 1e-15
    };
    if feasible(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// sup over x of A(x + shift) - B(x) for step CDFs (shift <= 0 in our use).
fn sup_shifted_diff(a: &StepCDF, b: &StepCDF, shift: f64) -> f64 {
    let mut sup = f64::NEG_INFINITY;
    // candidates: jumps of A shifted back (A just jumped), and left limits at jumps of B
    for &xa in &a.jump_points {
        let x = xa - shift;
        sup = sup.max(a.value(x + shift) - b.value(x));
    }
    for &xb in &b.jump_points {
        sup = sup.max(a.value_left(xb + shift) - b.value_left(xb));
    }
    sup
}

const QL_MAX_SWEEPS: usize = 50;

/// All eigenvalues of a complex Hermitian matrix, ascending.
///
/// Rejects inputs whose Hermitian deviation exceeds `tol * (1 + max |entry|)`.
pub fn eigenvalues_hermitian(h: &CMatrix, tol: f64) -> Result<Spectrum> {
    if h.rows() != h.cols() {
        return Err(Error::Dimension(format!("expected square, got {}x{}", h.rows(), h.cols())));
    }
    let dev = h.hermitian_deviation();
    let scale = 1.0 + h.max_abs();
    if dev > tol * scale {
        return Err(Error::NotHermitian { deviation: dev, tol: tol * scale });
    }
    let n = h.rows();
    if n == 0 {
        return Ok(Spectrum::from_sorted(vec![]));
    }
    let (mut d, mut e) = tridiagonalize(h);
    ql_implicit_shift(&mut d, &mut e)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(Spectrum::from_sorted(d))
}

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form; the complex subdiagonal phases are absorbed into a unitary diagonal
/// similarity, which leaves eigenvalues unchanged.
fn tridiagonalize(h: &CMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = h.rows();
    let mut a = h.clone();
    let mut e = vec![0.0; n.saturating_sub(1)];
    for k in 0..n.saturating_sub(2) {
        // column below the diagonal
        let m = n - k - 1; // length of trailing column
        let mut xnorm2 = 0.0;
        for i in k + 1..n {
            xnorm2 += a[(i, k)].norm_sqr();
        }
        let xnorm = xnorm2.sqrt();
        if xnorm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        // v = x - alpha e1
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            e[k] = xnorm;
            continue;
        }
        // p = (2/vnorm2) B v, on the trailing block B = a[k+1.., k+1..]
        let mut p = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..m {
                acc += a[(k + 1 + i, k + 1 + j)] * v[j];
            }
            p[i] = acc * (2.0 / vnorm2);
        }
        // K = v* p / vnorm2 (real up to rounding since B is Hermitian)
        let kappa: Complex64 =
            v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum::<Complex64>() / vnorm2;
        // q = p - K v
        let q: Vec<Complex64> = p.iter().zip(&v).map(|(pi, vi)| pi - kappa * vi).collect();
        // B <- B - v q* - q v*
        for i in 0..m {
            for j in 0..m {
                let upd = v[i] * q[j].conj() + q[i] * v[j].conj();
                a[(k + 1 + i, k + 1 + j)] -= upd;
            }
        }
        a[(k + 1, k)] = alpha;
        e[k] = xnorm; // |alpha|: phase absorbed
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1, n - 2)].norm();
    }
    let d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    (d, e)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, eigenvalues only.
fn ql_implicit_shift(d: &mut [f64], e: &mut Vec<f64>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    e.push(0.0); // sentinel
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_SWEEPS {
                return Err(Error::NoConvergence(QL_MAX_SWEEPS * n));
            }
            // Wilkinson-style shift
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if i == l {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
        }
    }
    e.pop();
    Ok(())
}

/// One inverse-iteration eigenvector for a spot-check residual.
pub fn inverse_iteration(h: &CMatrix, lambda: f64, iters: usize) -> Result<Vec<Complex64>> {
    let n = h.rows();
    // tiny imaginary shift keeps the solve nonsingular at an exact eigenvalue
    let shift = Complex64::new(lambda, 1e-10 * (1.0 + lambda.abs()));
    let shifted = h.shift(shift);
    let mut v = CMatrix::from_fn(n, 1, |i, _| {
        Complex64::new(1.0 + (i as f64 * 0.7).sin(), (i as f64 * 0.3).cos())
    });
    for _ in 0..iters {
        v = shifted.solve(&v)?;
        let norm = v.frobenius_norm();
        if norm == 0.0 {
            return Err(Error::Degenerate("inverse iteration collapsed".into()));
        }
        v = CMatrix::from_fn(n, 1, |i, _| v[(i, 0)] / norm);
    }
    Ok((0..n).map(|i| v[(i, 0)]).collect())
}

/// ||H v - lambda v|| for a unit vector v.
pub fn eigen_residual(h: &CMatrix, lambda: f64, v: &[Complex64]) -> f64 {
    let n = h.rows();
    let mut res = 0.0;
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += h[(i, j)] * v[j];
        }
        acc -= Complex64::new(lambda, 0.0) * v[i];
        res += acc.norm_sqr();
    }
    res.sqrt()
}

/// Operator 2-norm via the largest eigenvalue of A A* (or A* A, whichever is smaller).
pub fn operator_norm(a: &CMatrix) -> Result<f64> {
    let g = if a.rows() <= a.cols() {
        a.scaled_gram(1.0)
    } else {
        a.conj_transpose().scaled_gram(1.0)
    };
    let s = eigenvalues_hermitian(&g, 1e-10)?;
    Ok(s.max().max(0.0).sqrt())
}
