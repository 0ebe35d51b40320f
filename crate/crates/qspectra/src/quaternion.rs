//! Quaternion scalars and matrices represented through their 2x2 complex
//! blocks, plus the structural Type-I / Type-III predicates.
//!
//! A quaternion x = a e + b i + c j + d k embeds as
//! [[a+bi, c+di], [-c+di, a-bi]] = [[lambda, omega], [-conj(omega), conj(lambda)]].
//! Multiplication goes through the block product, so the embedding is a
//! homomorphism by construction; the coefficient formulas live only in tests.

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};

pub type ComplexBlock2x2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion { a: 0.0, b: 0.0, c: 0.0, d: 0.0 };
    pub const ONE: Quaternion = Quaternion { a: 1.0, b: 0.0, c: 0.0, d: 0.0 };

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// lambda = a + bi, omega = c + di
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }

    pub fn omega(&self) -> Complex64 {
        Complex64::new(self.c, self.d)
    }

    pub fn from_block_parts(lambda: Complex64, omega: Complex64) -> Quaternion {
        Quaternion::new(lambda.re, lambda.im, omega.re, omega.im)
    }

    pub fn scale(&self, s: f64) -> Quaternion {
        Quaternion::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn add(&self, other: &Quaternion) -> Quaternion {
        Quaternion::new(
            self.a + other.a,
            self.b + other.b,
            self.c + other.c,
            self.d + other.d,
        )
    }

    pub fn sub(&self, other: &Quaternion) -> Quaternion {
        self.add(&other.scale(-1.0))
    }

    /// Product through the embedded 2x2 block product.
    pub fn mul(&self, other: &Quaternion) -> Quaternion {
        let l = self.lambda() * other.lambda() - self.omega() * other.omega().conj();
        let w = self.lambda() * other.omega() + self.omega() * other.lambda().conj();
        Quaternion::from_block_parts(l, w)
    }
}

/// The psi embedding of a single quaternion.
pub fn embed(q: &Quaternion) -> Result<ComplexBlock2x2> {
    if !q.is_finite() {
        return Err(Error::NonFinite("quaternion coefficients"));
    }
    let l = q.lambda();
    let w = q.omega();
    Ok([[l, w], [-w.conj(), l.conj()]])
}

pub fn quaternion_conj(q: &Quaternion) -> Quaternion {
    q.conj()
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Quaternion>,
}

impl QuaternionMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Quaternion::ZERO; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Quaternion) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn map(&self, f: impl Fn(&Quaternion) -> Quaternion) -> QuaternionMatrix {
        QuaternionMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    /// Quaternion matrix product (through the blockwise quaternion product).
    pub fn mul(&self, other: &QuaternionMatrix) -> QuaternionMatrix {
        assert_eq!(self.cols, other.rows);
        QuaternionMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Quaternion::ZERO;
            for k in 0..self.cols {
                acc = acc.add(&self[(i, k)].mul(&other[(k, j)]));
            }
            acc
        })
    }

    /// Conjugate transpose in the quaternion sense.
    pub fn conj_transpose(&self) -> QuaternionMatrix {
        QuaternionMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }
}

impl std::ops::Index<(usize, usize)> for QuaternionMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QuaternionMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.entries[i * self.cols + j]
    }
}

/// psi(M): the 2p x 2n complex representation, blockwise `embed`.
pub fn embed_matrix(m: &QuaternionMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(2 * m.rows(), 2 * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let q = &m[(i, j)];
            let l = q.lambda();
            let w = q.omega();
            out[(2 * i, 2 * j)] = l;
            out[(2 * i, 2 * j + 1)] = w;
            out[(2 * i + 1, 2 * j)] = -w.conj();
            out[(2 * i + 1, 2 * j + 1)] = l.conj();
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureReport {
    pub is_type1: bool,
    pub is_type3: bool,
    /// Deviation from the nearest of the two structure classes.
    pub max_violation: f64,
    pub type1_violation: f64,
    pub type3_violation: f64,
}

/// Classify a 2n x 2n complex matrix against the Type-I / Type-III block patterns.
///
/// Type-I: scalar diagonal 2x2 blocks t_k I; off-diagonal block (j,k) = [[a,b],[c,d]]
/// mirrored at (k,j) as [[d,-b],[-c,a]].
/// Type-III: scalar diagonal blocks; block (j,k) = [[a,b],[-conj(b),conj(a)]] with
/// (k,j) = [[conj(a),-b],[conj(b),a]].
pub fn classify_structure(c: &CMatrix, tol: f64) -> Result<StructureReport> {
    if c.rows() != c.cols() {
        return Err(Error::Dimension(format!(
            "expected square matrix, got {}x{}",
            c.rows(),
            c.cols()
        )));
    }
    if c.rows() % 2 != 0 {
        return Err(Error::OddDimension(c.rows()));
    }
    let n = c.rows() / 2;
    let blk = |j: usize, k: usize| -> ComplexBlock2x2 {
        [
            [c[(2 * j, 2 * k)], c[(2 * j, 2 * k + 1)]],
            [c[(2 * j + 1, 2 * k)], c[(2 * j + 1, 2 * k + 1)]],
        ]
    };
    let mut v1: f64 = 0.0;
    let mut v3: f64 = 0.0;
    for j in 0..n {
        let d = blk(j, j);
        let diag_dev = (d[0][0] - d[1][1]).norm().max(d[0][1].norm()).max(d[1][0].norm());
        v1 = v1.max(diag_dev);
        v3 = v3.max(diag_dev);
        for k in j + 1..n {
            let upper = blk(j, k);
            let lower = blk(k, j);
            let (a, b, cc, dd) = (upper[0][0], upper[0][1], upper[1][0], upper[1][1]);
            // Type-I mirror: lower = [[d,-b],[-c,a]]
            let t1 = (lower[0][0] - dd)
                .norm()
                .max((lower[0][1] + b).norm())
                .max((lower[1][0] + cc).norm())
                .max((lower[1][1] - a).norm());
            v1 = v1.max(t1);
            // Type-III: upper itself quaternion-shaped, lower = [[conj(a),-b],[conj(b),a]]
            let t3 = (cc + b.conj())
                .norm()
                .max((dd - a.conj()).norm())
                .max((lower[0][0] - a.conj()).norm())
                .max((lower[0][1] + b).norm())
                .max((lower[1][0] - b.conj()).norm())
                .max((lower[1][1] - a).norm());
            v3 = v3.max(t3);
        }
    }
    Ok(StructureReport {
        is_type1: v1 <= tol,
        is_type3: v3 <= tol,
        max_violation: v1.min(v3),
        type1_violation: v1,
        type3_violation: v3,
    })
}

/// Default structural tolerance, scaled with entry magnitude.
pub fn structure_tolerance(c: &CMatrix) -> f64 {
    1e-10 * (1.0 + c.max_abs())
}
