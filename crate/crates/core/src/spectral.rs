//! Self-adjoint operators and their spectral decomposition: the sphere
//! normalization (trace zero, Frobenius norm one), a cyclic Jacobi
//! eigensolver for both the real-symmetric and the complex-Hermitian case,
//! multiplicity and stratum tests, and the eigenvalue-only retraction of the
//! complement stratum onto the top-degeneracy wall.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{adjoint, frobenius, identity, max_abs, CMat};
use crate::schubert::FieldCase;

const HERMITICITY_RTOL: f64 = 1e-12;

/// A real-symmetric or complex-Hermitian matrix. In the real case the
/// imaginary parts of the stored entries are identically zero.
#[derive(Clone, Debug)]
pub struct SelfAdjointOperator {
    field: FieldCase,
    mat: CMat,
}

impl SelfAdjointOperator {
    pub fn new(field: FieldCase, mat: CMat) -> Result<Self> {
        let (r, c) = mat.dim();
        if r != c || r == 0 {
            return Err(Error::NotSelfAdjoint(format!("shape {r}x{c} is not square")));
        }
        let scale = 1.0 + max_abs(&mat);
        let dev = max_abs(&(&mat - &adjoint(&mat)));
        if dev > HERMITICITY_RTOL * scale {
            return Err(Error::NotSelfAdjoint(format!(
                "max |A - A*| = {dev:.3e} exceeds {:.3e}",
                HERMITICITY_RTOL * scale
            )));
        }
        if field == FieldCase::Real && mat.iter().any(|z| z.im != 0.0) {
            return Err(Error::NotSelfAdjoint(
                "real operator with nonzero imaginary entries".into(),
            ));
        }
        Ok(SelfAdjointOperator { field, mat })
    }

    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mat = Array2::from_shape_fn((n, n), |(i, j)| Complex64::new(rows[i][j], 0.0));
        SelfAdjointOperator::new(FieldCase::Real, mat)
    }

    pub fn from_complex(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        let mat = Array2::from_shape_fn((n, n), |(i, j)| rows[i][j]);
        SelfAdjointOperator::new(FieldCase::Hermitian, mat)
    }

    pub fn diagonal(field: FieldCase, values: &[f64]) -> Self {
        let n = values.len();
        let mat = Array2::from_shape_fn((n, n), |(i, j)| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        SelfAdjointOperator { field, mat }
    }

    pub fn field(&self) -> FieldCase {
        self.field
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.mat[[i, i]].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius(&self.mat)
    }

    /// `c1 * a1 + c2 * a2`; both operands must share field and size.
    pub fn combine(c1: f64, a1: &Self, c2: f64, a2: &Self) -> Self {
        assert_eq!(a1.field, a2.field, "field mismatch");
        assert_eq!(a1.n(), a2.n(), "size mismatch");
        let mat = Array2::from_shape_fn((a1.n(), a1.n()), |(i, j)| {
            a1.mat[[i, j]] * c1 + a2.mat[[i, j]] * c2
        });
        SelfAdjointOperator {
            field: a1.field,
            mat,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        SelfAdjointOperator {
            field: self.field,
            mat: self.mat.mapv(|z| z * c),
        }
    }

    /// Block direct sum, keeping the common field.
    pub fn direct_sum(blocks: &[&Self]) -> Self {
        let field = blocks
            .iter()
            .map(|b| b.field)
            .fold(FieldCase::Real, |acc, f| {
                if f == FieldCase::Hermitian {
                    FieldCase::Hermitian
                } else {
                    acc
                }
            });
        let n: usize = blocks.iter().map(|b| b.n()).sum();
        let mut mat = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n() {
                for j in 0..b.n() {
                    mat[[off + i, off + j]] = b.mat[[i, j]];
                }
            }
            off += b.n();
        }
        SelfAdjointOperator { field, mat }
    }
}

/// Sorted eigendecomposition: ascending eigenvalues, orthonormal eigenframe
/// columns, and the largest column residual `|A e_i - lambda_i e_i|`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub frame: CMat,
    pub residual: f64,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `lambda_n - lambda_1`.
    pub fn spread(&self) -> f64 {
        match (self.eigenvalues.first(), self.eigenvalues.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0.0,
        }
    }

    /// Gap `lambda_{k+1} - lambda_k` for 1-based `k`.
    pub fn gap(&self, k: usize) -> f64 {
        self.eigenvalues[k] - self.eigenvalues[k - 1]
    }
}

/// Relative degeneracy threshold: gaps below `rel_tol * (1 + spread)` are
/// treated as exact coincidences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapTolerance {
    pub rel_tol: f64,
}

impl Default for GapTolerance {
    fn default() -> Self {
        GapTolerance { rel_tol: 1e-8 }
    }
}

impl GapTolerance {
    pub fn new(rel_tol: f64) -> Result<Self> {
        if rel_tol.is_nan() || rel_tol < 0.0 {
            return Err(Error::InvalidInput(format!("bad tolerance {rel_tol}")));
        }
        Ok(GapTolerance { rel_tol })
    }

    pub fn threshold(&self, spread: f64) -> f64 {
        self.rel_tol * (1.0 + spread)
    }
}

fn off_diagonal_norm(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc += m[[p, q]].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi eigendecomposition with complex plane rotations. Sweeps run
/// until the off-diagonal Frobenius norm falls below `1e-13 * |A|_F`, capped
/// at 50 sweeps; the cap with an off-norm still above `1e-9 * |A|_F` is a
/// convergence failure.
pub fn jacobi_eigh(a: &SelfAdjointOperator) -> Result<Spectrum> {
    let n = a.n();
    let mut m = a.mat.clone();
    let mut frame = identity(n);
    let norm_f = frobenius(&m);
    let target = 1e-13 * norm_f;
    const MAX_SWEEPS: usize = 50;

    let mut off = off_diagonal_norm(&m);
    let mut sweeps = 0;
    while off > target && sweeps < MAX_SWEEPS {
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let beta = m[[p, q]];
                let babs = beta.norm();
                if babs == 0.0 {
                    continue;
                }
                let alpha = m[[p, p]].re;
                let gamma = m[[q, q]].re;
                let tau = (gamma - alpha) / (2.0 * babs);
                let t = if tau.is_finite() {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                } else {
                    0.0
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph = beta / Complex64::new(babs, 0.0); // e^{i phi}
                let ph_conj = ph.conj();

                // columns: col_p' = c col_p - s e^{-i phi} col_q,
                //          col_q' = s col_p + c e^{-i phi} col_q
                for r in 0..n {
                    let mp = m[[r, p]];
                    let mq = m[[r, q]] * ph_conj;
                    m[[r, p]] = mp * c - mq * s;
                    m[[r, q]] = mp * s + mq * c;
                }
                // rows: row_p' = c row_p - s e^{i phi} row_q,
                //       row_q' = s row_p + c e^{i phi} row_q
                for r in 0..n {
                    let mp = m[[p, r]];
                    let mq = m[[q, r]] * ph;
                    m[[p, r]] = mp * c - mq * s;
                    m[[q, r]] = mp * s + mq * c;
                }
                for r in 0..n {
                    let ep = frame[[r, p]];
                    let eq = frame[[r, q]] * ph_conj;
                    frame[[r, p]] = ep * c - eq * s;
                    frame[[r, q]] = ep * s + eq * c;
                }
                m[[p, q]] = Complex64::new(0.0, 0.0);
                m[[q, p]] = Complex64::new(0.0, 0.0);
                m[[p, p]] = Complex64::new(m[[p, p]].re, 0.0);
                m[[q, q]] = Complex64::new(m[[q, q]].re, 0.0);
            }
        }
        off = off_diagonal_norm(&m);
        sweeps += 1;
    }
    if off > 1e-9 * norm_f {
        return Err(Error::NoConvergence {
            off,
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[[i, i]].re.partial_cmp(&m[[j, j]].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[[i, i]].re).collect();
    let sorted_frame = Array2::from_shape_fn((n, n), |(r, c)| frame[[r, order[c]]]);

    let mut residual: f64 = 0.0;
    for (c, &lambda) in eigenvalues.iter().enumerate() {
        let mut col_err = 0.0;
        for r in 0..n {
            let mut av = Complex64::new(0.0, 0.0);
            for l in 0..n {
                av += a.mat[[r, l]] * sorted_frame[[l, c]];
            }
            col_err += (av - sorted_frame[[r, c]] * lambda).norm_sqr();
        }
        residual = residual.max(col_err.sqrt());
    }

    Ok(Spectrum {
        eigenvalues,
        frame: sorted_frame,
        residual,
    })
}

/// Projects onto the sphere of trace-zero, Frobenius-norm-one operators:
/// `(A - (tr A / n) I) / |A - (tr A / n) I|_F`. Eigenvectors and eigenvalue
/// order are untouched; a scalar operator has no image.
pub fn normalize_to_sphere(a: &SelfAdjointOperator) -> Result<SelfAdjointOperator> {
    let n = a.n();
    let mean = a.trace() / n as f64;
    let centered = Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j {
            a.mat[[i, j]] - Complex64::new(mean, 0.0)
        } else {
            a.mat[[i, j]]
        }
    });
    let norm = frobenius(&centered);
    if norm <= 1e-12 * (1.0 + a.frobenius_norm()) {
        return Err(Error::ScalarOperator);
    }
    Ok(SelfAdjointOperator {
        field: a.field,
        mat: centered.mapv(|z| z / norm),
    })
}

/// Groups the sorted eigenvalues into maximal runs separated by gaps above
/// the threshold; returns (mean value, count) per run.
pub fn multiplicities(s: &Spectrum, tol: &GapTolerance) -> Vec<(f64, usize)> {
    let thr = tol.threshold(s.spread());
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=s.n() {
        if i == s.n() || s.eigenvalues[i] - s.eigenvalues[i - 1] > thr {
            let run = &s.eigenvalues[start..i];
            let mean = run.iter().sum::<f64>() / run.len() as f64;
            out.push((mean, run.len()));
            start = i;
        }
    }
    out
}

/// Membership of a normalized operator in the three strata at level `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumMembership {
    /// `lambda_k != lambda_{k+1}`
    pub in_sigma: bool,
    /// `lambda_1 = lambda_{k+1}`
    pub in_m_k: bool,
    /// `lambda_{k+1} = lambda_n`
    pub in_w_k: bool,
}

pub fn stratum_membership(
    a: &SelfAdjointOperator,
    k: usize,
    tol: &GapTolerance,
) -> Result<StratumMembership> {
    let n = a.n();
    if k < 1 || k + 1 > n {
        return Err(Error::RangeError {
            what: "stratum level",
            value: k as i64,
            expected: format!("1 <= k <= {}", n - 1),
        });
    }
    let s = jacobi_eigh(a)?;
    let thr = tol.threshold(s.spread());
    Ok(StratumMembership {
        in_sigma: s.eigenvalues[k] - s.eigenvalues[k - 1] > thr,
        in_m_k: s.eigenvalues[k] - s.eigenvalues[0] <= thr,
        in_w_k: s.eigenvalues[n - 1] - s.eigenvalues[k] <= thr,
    })
}

/// The retraction of M^k onto W_k: eigenvalues above level k are replaced by
/// their mean, eigenvectors are kept, and the result is renormalized to the
/// sphere. Fixed points are exactly the operators already in W_k.
pub fn retract_phi(
    a: &SelfAdjointOperator,
    k: usize,
    tol: &GapTolerance,
) -> Result<SelfAdjointOperator> {
    let n = a.n();
    if k < 1 || k + 1 > n {
        return Err(Error::RangeError {
            what: "stratum level",
            value: k as i64,
            expected: format!("1 <= k <= {}", n - 1),
        });
    }
    let s = jacobi_eigh(a)?;
    let thr = tol.threshold(s.spread());
    let gap = s.eigenvalues[k] - s.eigenvalues[0];
    if gap <= thr {
        return Err(Error::NotInMk { k, gap });
    }
    let mean = s.eigenvalues[k..].iter().sum::<f64>() / (n - k) as f64;
    if s.eigenvalues[k - 1] > mean {
        return Err(Error::DegenerateCollapse { k });
    }
    let mut values = s.eigenvalues.clone();
    for v in values.iter_mut().skip(k) {
        *v = mean;
    }
    let recon = reconstruct(&s.frame, &values);
    let op = SelfAdjointOperator::new(a.field, recon)?;
    normalize_to_sphere(&op)
}

/// GOE/GUE-style random operator: symmetrized Gaussian with standard-normal
/// entries.
pub fn random_self_adjoint<R: rand::Rng>(
    rng: &mut R,
    field: FieldCase,
    n: usize,
) -> SelfAdjointOperator {
    let g = crate::linalg::random_gaussian(rng, n, field == FieldCase::Hermitian);
    let h = (&g + &adjoint(&g)).mapv(|z| z * 0.5);
    SelfAdjointOperator::new(field, h).expect("symmetrized matrix is self-adjoint")
}

/// `E diag(values) E*`.
fn reconstruct(frame: &CMat, values: &[f64]) -> CMat {
    let n = frame.nrows();
    Array2::from_shape_fn((n, n), |(i, j)| {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..n {
            acc += frame[[i, l]] * values[l] * frame[[j, l]].conj();
        }
        acc
    })
}

// --- JSON encoding of matrices -------------------------------------------

/// One serialized entry: a bare number in the real case, an `[re, im]` pair
/// in the Hermitian case (accepted interchangeably on input when the
/// imaginary part vanishes).
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryJson {
    Num(f64),
    Pair([f64; 2]),
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    field: String,
    n: usize,
    entries: Vec<Vec<EntryJson>>,
}

impl Serialize for SelfAdjointOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.n();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let z = self.mat[[i, j]];
                        match self.field {
                            FieldCase::Real => EntryJson::Num(z.re),
                            FieldCase::Hermitian => EntryJson::Pair([z.re, z.im]),
                        }
                    })
                    .collect()
            })
            .collect();
        MatrixJson {
            field: self.field.to_string(),
            n,
            entries,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SelfAdjointOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        let field: FieldCase = raw.field.parse().map_err(serde::de::Error::custom)?;
        if raw.entries.len() != raw.n || raw.entries.iter().any(|r| r.len() != raw.n) {
            return Err(serde::de::Error::custom(format!(
                "entries must form an {0}x{0} matrix",
                raw.n
            )));
        }
        let mat = Array2::from_shape_fn((raw.n, raw.n), |(i, j)| match raw.entries[i][j] {
            EntryJson::Num(x) => Complex64::new(x, 0.0),
            EntryJson::Pair([re, im]) => Complex64::new(re, im),
        });
        SelfAdjointOperator::new(field, mat).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{col_inner, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_non_hermitian() {
        let mat = Array2::from_shape_fn((2, 2), |(i, j)| {
            Complex64::new((i * 2 + j) as f64, 0.0)
        });
        assert!(SelfAdjointOperator::new(FieldCase::Real, mat).is_err());
    }

    #[test]
    fn jacobi_diagonal_and_2x2() {
        let s = jacobi_eigh(&SelfAdjointOperator::diagonal(FieldCase::Real, &[3.0, 1.0, 2.0]))
            .unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 2.0, 3.0]);
        // permutation frame: column c has a single unit entry
        for c in 0..3 {
            let ones = (0..3)
                .filter(|&r| (s.frame[[r, c]].norm() - 1.0).abs() < 1e-12)
                .count();
            assert_eq!(ones, 1);
        }

        let s = jacobi_eigh(
            &SelfAdjointOperator::from_real(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);

        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let s = jacobi_eigh(
            &SelfAdjointOperator::from_complex(&[vec![z, -i], vec![i, z]]).unwrap(),
        )
        .unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
        assert!(s.residual < 1e-12);
    }

    #[test]
    fn jacobi_backward_error_small_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [FieldCase::Real, FieldCase::Hermitian] {
            for n in 2..=6 {
                for _ in 0..20 {
                    let a = random_self_adjoint(&mut rng, field, n);
                    let s = jacobi_eigh(&a).unwrap();
                    let scale = 1.0 + max_abs(a.matrix());
                    assert!(s.residual <= 1e-10 * scale);
                    let gram = adjoint(&s.frame).dot(&s.frame);
                    assert!(max_abs(&(&gram - &identity(n))) <= 1e-10);
                    let recon = reconstruct(&s.frame, &s.eigenvalues);
                    assert!(max_abs(&(&recon - a.matrix())) <= 1e-10 * scale);
                    assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
                    // real field keeps the frame real
                    if field == FieldCase::Real {
                        assert!(s.frame.iter().all(|z| z.im == 0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn spectra_invariant_under_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for field in [FieldCase::Real, FieldCase::Hermitian] {
            let a = random_self_adjoint(&mut rng, field, 5);
            let q = random_unitary(&mut rng, 5, field == FieldCase::Hermitian);
            let conj = adjoint(&q).dot(a.matrix()).dot(&q);
            let b = SelfAdjointOperator::new(field, conj).unwrap();
            let sa = jacobi_eigh(&a).unwrap();
            let sb = jacobi_eigh(&b).unwrap();
            for (x, y) in sa.eigenvalues.iter().zip(&sb.eigenvalues) {
                assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn normalization_examples() {
        let a = SelfAdjointOperator::diagonal(FieldCase::Real, &[3.0, 1.0]);
        let nrm = normalize_to_sphere(&a).unwrap();
        let d0 = nrm.matrix()[[0, 0]].re;
        let d1 = nrm.matrix()[[1, 1]].re;
        assert!((d0 - 1.0 / 2f64.sqrt()).abs() < 1e-14);
        assert!((d1 + 1.0 / 2f64.sqrt()).abs() < 1e-14);

        let id = SelfAdjointOperator::diagonal(FieldCase::Real, &[2.0, 2.0, 2.0]);
        assert!(matches!(normalize_to_sphere(&id), Err(Error::ScalarOperator)));

        let again = normalize_to_sphere(&nrm).unwrap();
        assert!(max_abs(&(again.matrix() - nrm.matrix())) < 1e-12);
        assert!(nrm.trace().abs() < 1e-12);
        assert!((nrm.frobenius_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normalization_commutes_with_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random_self_adjoint(&mut rng, FieldCase::Hermitian, 4);
        let q = random_unitary(&mut rng, 4, true);
        let conj =
            |m: &SelfAdjointOperator| adjoint(&q).dot(m.matrix()).dot(&q);
        let lhs = conj(&normalize_to_sphere(&a).unwrap());
        let rhs = normalize_to_sphere(
            &SelfAdjointOperator::new(FieldCase::Hermitian, conj(&a)).unwrap(),
        )
        .unwrap();
        assert!(max_abs(&(&lhs - rhs.matrix())) < 1e-12);
    }

    #[test]
    fn multiplicity_grouping() {
        let tol = GapTolerance::default();
        let spectrum = |vals: &[f64]| Spectrum {
            eigenvalues: vals.to_vec(),
            frame: identity(vals.len()),
            residual: 0.0,
        };
        let runs = multiplicities(&spectrum(&[0.0, 0.0, 1.0]), &tol);
        assert_eq!(runs, vec![(0.0, 2), (1.0, 1)]);

        let runs = multiplicities(&spectrum(&[-1.0, 0.0, 1.0]), &tol);
        assert_eq!(runs.iter().map(|r| r.1).collect::<Vec<_>>(), vec![1, 1, 1]);

        let runs = multiplicities(&spectrum(&[0.0, 1e-12, 1.0]), &tol);
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].1, 2);
        assert!(runs[0].0.abs() < 1e-12);
    }

    #[test]
    fn stratum_membership_examples() {
        let tol = GapTolerance::default();
        let norm = |vals: &[f64]| {
            normalize_to_sphere(&SelfAdjointOperator::diagonal(FieldCase::Real, vals)).unwrap()
        };
        let m = stratum_membership(&norm(&[0.0, 0.0, 1.0]), 1, &tol).unwrap();
        assert_eq!(
            m,
            StratumMembership {
                in_sigma: false,
                in_m_k: true,
                in_w_k: false
            }
        );
        let m = stratum_membership(&norm(&[-1.0, 0.0, 1.0]), 1, &tol).unwrap();
        assert_eq!(
            m,
            StratumMembership {
                in_sigma: true,
                in_m_k: false,
                in_w_k: false
            }
        );
        let m = stratum_membership(&norm(&[0.0, 1.0, 1.0]), 1, &tol).unwrap();
        assert_eq!(
            m,
            StratumMembership {
                in_sigma: true,
                in_m_k: false,
                in_w_k: true
            }
        );
        assert!(stratum_membership(&norm(&[0.0, 1.0]), 2, &tol).is_err());
    }

    #[test]
    fn retraction_examples_and_projection_property() {
        let tol = GapTolerance::default();
        let a = normalize_to_sphere(&SelfAdjointOperator::diagonal(
            FieldCase::Real,
            &[-3.0, -1.0, 1.0, 3.0],
        ))
        .unwrap();
        let r = retract_phi(&a, 1, &tol).unwrap();
        let s = jacobi_eigh(&r).unwrap();
        // eigenvalues proportional to (-3, 1, 1, 1)
        let scale = s.eigenvalues[3] / 1.0;
        assert!((s.eigenvalues[0] / scale + 3.0).abs() < 1e-10);
        for i in 1..4 {
            assert!((s.eigenvalues[i] / scale - 1.0).abs() < 1e-10);
        }
        assert!(r.trace().abs() < 1e-10);
        assert!((r.frobenius_norm() - 1.0).abs() < 1e-10);

        // projection: applying twice equals applying once
        let rr = retract_phi(&r, 1, &tol).unwrap();
        assert!(max_abs(&(rr.matrix() - r.matrix())) < 1e-10);

        // membership after retraction
        let m = stratum_membership(&r, 1, &tol).unwrap();
        assert!(m.in_sigma && m.in_w_k && !m.in_m_k);

        // degenerate bottom is rejected
        let bad = normalize_to_sphere(&SelfAdjointOperator::diagonal(
            FieldCase::Real,
            &[0.0, 0.0, 1.0],
        ))
        .unwrap();
        assert!(matches!(retract_phi(&bad, 1, &tol), Err(Error::NotInMk { .. })));
    }

    #[test]
    fn retraction_keeps_eigenframe() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let a = normalize_to_sphere(&random_self_adjoint(&mut rng, FieldCase::Hermitian, 5))
            .unwrap();
        let tol = GapTolerance::default();
        let k = 2;
        let before = jacobi_eigh(&a).unwrap();
        if before.gap(k) <= tol.threshold(before.spread()) {
            return; // random draw degenerate; astronomically unlikely
        }
        let r = retract_phi(&a, k, &tol).unwrap();
        let after = jacobi_eigh(&r).unwrap();
        // the lower-k eigenspaces agree: projectors coincide
        let proj = |s: &Spectrum| {
            let n = s.n();
            let mut p = Array2::from_elem((n, n), Complex64::new(0.0, 0.0));
            for c in 0..k {
                for i in 0..n {
                    for j in 0..n {
                        let add = s.frame[[i, c]] * s.frame[[j, c]].conj();
                        p[[i, j]] += add;
                    }
                }
            }
            p
        };
        assert!(max_abs(&(&proj(&before) - &proj(&after))) < 1e-8);
        let _ = col_inner(&before.frame, 0, &after.frame, 0);
    }

    #[test]
    fn matrix_json_round_trip() {
        let a = SelfAdjointOperator::from_real(&[vec![1.0, 0.5], vec![0.5, -1.0]]).unwrap();
        let j = serde_json::to_value(&a).unwrap();
        assert_eq!(j["field"], "real");
        assert_eq!(j["entries"][0][1], serde_json::json!(0.5));
        let b: SelfAdjointOperator = serde_json::from_value(j).unwrap();
        assert!(max_abs(&(a.matrix() - b.matrix())) == 0.0);

        let i = Complex64::new(0.0, 1.0);
        let z = Complex64::new(0.0, 0.0);
        let h = SelfAdjointOperator::from_complex(&[vec![z, -i], vec![i, z]]).unwrap();
        let j = serde_json::to_value(&h).unwrap();
        assert_eq!(j["entries"][0][1], serde_json::json!([0.0, -1.0]));
        let b: SelfAdjointOperator = serde_json::from_value(j).unwrap();
        assert!(max_abs(&(h.matrix() - b.matrix())) == 0.0);

        // malformed: ragged entries
        let bad = serde_json::json!({"field": "real", "n": 2, "entries": [[1.0]]});
        assert!(serde_json::from_value::<SelfAdjointOperator>(bad).is_err());
    }
}
