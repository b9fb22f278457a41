//! Small dense complex-matrix helpers shared by the spectral and curvature
//! modules: norms, Gram-Schmidt frames, determinants, random ensembles.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

pub type CMat = Array2<Complex64>;

pub fn identity(n: usize) -> CMat {
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn adjoint(m: &CMat) -> CMat {
    let (r, c) = m.dim();
    Array2::from_shape_fn((c, r), |(i, j)| m[[j, i]].conj())
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermitian inner product `<u, v> = sum u_l conj(v_l)` of two columns.
pub fn col_inner(u: &CMat, uc: usize, v: &CMat, vc: usize) -> Complex64 {
    let n = u.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for l in 0..n {
        acc += u[[l, uc]] * v[[l, vc]].conj();
    }
    acc
}

/// Modified Gram-Schmidt on the columns: returns orthonormal `Q` with the
/// upper-triangular factor having strictly positive diagonal, so the
/// orientation of the input frame is preserved.
pub fn orthonormalize_columns(m: &CMat) -> Result<CMat> {
    let (n, k) = m.dim();
    let mut q = m.clone();
    for j in 0..k {
        for i in 0..j {
            // subtract projection onto earlier column
            let mut proj = Complex64::new(0.0, 0.0);
            for l in 0..n {
                proj += q[[l, i]].conj() * q[[l, j]];
            }
            for l in 0..n {
                let qi = q[[l, i]];
                q[[l, j]] -= proj * qi;
            }
        }
        let norm: f64 = (0..n).map(|l| q[[l, j]].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidInput(format!(
                "column {j} is numerically dependent; cannot orthonormalize"
            )));
        }
        for l in 0..n {
            q[[l, j]] /= norm;
        }
    }
    Ok(q)
}

/// Determinant by LU with partial pivoting; adequate for the small overlap
/// matrices used in frame transport.
pub fn det(m: &CMat) -> Complex64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "determinant of a non-square matrix");
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| {
            a[[x, col]]
                .norm()
                .partial_cmp(&a[[y, col]].norm())
                .unwrap()
        });
        let pivot = pivot.unwrap();
        if a[[pivot, col]].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..n {
                let tmp = a[[pivot, j]];
                a[[pivot, j]] = a[[col, j]];
                a[[col, j]] = tmp;
            }
            det = -det;
        }
        let p = a[[col, col]];
        det *= p;
        for row in col + 1..n {
            let factor = a[[row, col]] / p;
            for j in col..n {
                let sub = factor * a[[col, j]];
                a[[row, j]] -= sub;
            }
        }
    }
    det
}

/// Gaussian matrix with independent real (and, when `complex` is set,
/// imaginary) standard-normal entries.
pub fn random_gaussian<R: Rng>(rng: &mut R, n: usize, complex: bool) -> CMat {
    Array2::from_shape_fn((n, n), |_| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if complex { rng.sample(StandardNormal) } else { 0.0 };
        Complex64::new(re, im)
    })
}

/// Haar-like random orthogonal/unitary matrix from the QR of a Gaussian.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize, complex: bool) -> CMat {
    let g = random_gaussian(rng, n, complex);
    orthonormalize_columns(&g).expect("Gaussian matrix is full rank almost surely")
}
