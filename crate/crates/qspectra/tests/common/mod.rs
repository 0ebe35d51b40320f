#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qspectra::cmatrix::CMatrix;
use qspectra::mp_law::MPLaw;
use qspectra::quaternion::{Quaternion, QuaternionMatrix};
use qspectra::spectra::{esd, Spectrum, StepCDF};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_quaternion(r: &mut impl Rng) -> Quaternion {
    Quaternion::new(
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0),
    )
}

pub fn rand_quaternion_matrix(r: &mut impl Rng, p: usize, n: usize) -> QuaternionMatrix {
    let mut m = QuaternionMatrix::zeros(p, n);
    for i in 0..p {
        for j in 0..n {
            m[(i, j)] = rand_quaternion(r);
        }
    }
    m
}

pub fn rand_hermitian(r: &mut impl Rng, n: usize) -> CMatrix {
    let mut h = CMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(r.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Quantile of the law at probability q, by bisection on the CDF.
pub fn mp_quantile(law: &MPLaw, q: f64) -> f64 {
    let (mut lo, mut hi) = (law.support_lower().min(0.0), law.support_upper());
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if law.cdf(mid).expect("cdf") < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Equal-mass discretization of the law at its (k - 1/2)/n quantiles.
pub fn quantile_step(law: &MPLaw, n: usize) -> StepCDF {
    let atoms: Vec<f64> = (0..n)
        .map(|k| mp_quantile(law, (k as f64 + 0.5) / n as f64))
        .collect();
    esd(&Spectrum::from_sorted(atoms)).expect("nonempty")
}

/// Determinant of a square complex matrix by Gaussian elimination with
/// partial pivoting; test-local oracle, independent of the eigensolver.
pub fn det(m: &CMatrix) -> Complex64 {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let mut a: Vec<Vec<Complex64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut d = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[i][k].norm().partial_cmp(&a[j][k].norm()).unwrap())
            .unwrap();
        if a[piv][k].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != k {
            a.swap(piv, k);
            d = -d;
        }
        d *= a[k][k];
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            for j in k..n {
                let sub = f * a[k][j];
                a[i][j] -= sub;
            }
        }
    }
    d
}
