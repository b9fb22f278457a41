//! Exact linear algebra over GF(2) and the integers: bit-matrix rank, Smith
//! normal form with unimodular transforms, and homology of finite cochain
//! complexes. All integer arithmetic is arbitrary precision.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Dense matrix over the 2-element field, rows packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GF2Matrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64).max(1);
        GF2Matrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut m = GF2Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v % 2 == 1);
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GF2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        let w = self.data[r * self.words_per_row + c / 64];
        (w >> (c % 64)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let idx = r * self.words_per_row + c / 64;
        let mask = 1u64 << (c % 64);
        if v {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (a, b) = (src * self.words_per_row, dst * self.words_per_row);
        for w in 0..self.words_per_row {
            self.data[b + w] ^= self.data[a + w];
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Matrix product over GF(2); panics on dimension mismatch.
    pub fn mul(&self, rhs: &GF2Matrix) -> GF2Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = GF2Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    let (src, dst) = (c * rhs.words_per_row, r * out.words_per_row);
                    for w in 0..rhs.words_per_row {
                        out.data[dst + w] ^= rhs.data[src + w];
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> GF2Matrix {
        let mut out = GF2Matrix::zeros(row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                out.set(i, j, self.get(r, c));
            }
        }
        out
    }

    pub fn transpose(&self) -> GF2Matrix {
        let mut out = GF2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(c, r, true);
                }
            }
        }
        out
    }
}

/// Row rank over GF(2) by Gaussian elimination on the packed rows.
pub fn rank_gf2(m: &GF2Matrix) -> usize {
    let mut work = m.clone();
    let mut rank = 0;
    for col in 0..work.cols {
        let pivot = (rank..work.rows).find(|&r| work.get(r, col));
        let Some(pivot) = pivot else { continue };
        if pivot != rank {
            for w in 0..work.words_per_row {
                work.data.swap(
                    pivot * work.words_per_row + w,
                    rank * work.words_per_row + w,
                );
            }
        }
        for r in 0..work.rows {
            if r != rank && work.get(r, col) {
                work.xor_row_into(rank, r);
            }
        }
        rank += 1;
        if rank == work.rows {
            break;
        }
    }
    rank
}

/// Dense matrix with arbitrary-precision integer entries, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = BigInt::from(v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(row_idx.len(), col_idx.len());
        for (i, &r) in row_idx.iter().enumerate() {
            for (j, &c) in col_idx.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let delta = q * self.get(src, c);
            self.data[dst * self.cols + c] -= delta;
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let delta = q * self.get(r, src);
            self.data[r * self.cols + dst] -= delta;
        }
    }
}

/// Smith normal form `U * M * V = S` with `S = diag(d_1, ..., d_r)`,
/// `d_i | d_{i+1}`, all `d_i > 0`, and `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

/// Position of a nonzero entry of minimal absolute value in the trailing
/// block starting at `(t, t)`.
fn min_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..m.rows() {
        for c in t..m.cols() {
            let v = m.get(r, c);
            if v.is_zero() {
                continue;
            }
            match best {
                Some((br, bc)) if m.get(br, bc).abs() <= v.abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

/// Smith normal form by row/column reduction, pivoting on the entry of
/// minimal absolute value. The identity `U * M * V = S` is re-checked before
/// returning.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let steps = m.rows().min(m.cols());

    for t in 0..steps {
        'stage: loop {
            let Some((pr, pc)) = min_pivot(&s, t) else {
                break 'stage;
            };
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);
            if s.get(t, t).is_negative() {
                s.negate_row(t);
                u.negate_row(t);
            }

            let pivot = s.get(t, t).clone();
            let mut clean = true;
            for r in t + 1..s.rows() {
                let q = s.get(r, t) / &pivot;
                s.row_axpy(r, t, &q);
                u.row_axpy(r, t, &q);
                if !s.get(r, t).is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..s.cols() {
                let q = s.get(t, c) / &pivot;
                s.col_axpy(c, t, &q);
                v.col_axpy(c, t, &q);
                if !s.get(t, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue 'stage;
            }

            // Enforce divisibility of the trailing block by the pivot.
            let mut offender = None;
            'search: for r in t + 1..s.rows() {
                for c in t + 1..s.cols() {
                    if !(s.get(r, c) % &pivot).is_zero() {
                        offender = Some(r);
                        break 'search;
                    }
                }
            }
            match offender {
                Some(r) => {
                    // Adding the offending row to row t puts a non-multiple
                    // next to the pivot; the next pass shrinks the pivot.
                    let minus_one = -BigInt::one();
                    s.row_axpy(t, r, &minus_one);
                    u.row_axpy(t, r, &minus_one);
                }
                None => break 'stage,
            }
        }
    }

    let mut diagonal = Vec::new();
    for t in 0..steps {
        let d = s.get(t, t);
        if !d.is_zero() {
            diagonal.push(d.clone());
        }
    }

    let form = SmithForm { diagonal, u, v };
    debug_checks(&form, m, &s);
    form
}

fn debug_checks(form: &SmithForm, m: &IntMatrix, s: &IntMatrix) {
    let umv = form.u.mul(m).mul(&form.v);
    assert_eq!(&umv, s, "U*M*V does not reproduce the Smith form");
    for w in form.diagonal.windows(2) {
        assert!((&w[1] % &w[0]).is_zero(), "invariant factors out of order");
    }
}

/// Coefficient ring for a complex verification.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ring {
    GF2,
    Int,
}

/// A finite cochain complex presented by its consecutive differentials
/// `d_i : C_i -> C_{i+1}` (matrix rows index the target basis).
pub enum ComplexData {
    GF2(Vec<GF2Matrix>),
    Int(Vec<IntMatrix>),
}

/// Homology of one term: free rank and the torsion orders (each >= 2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermHomology {
    pub free_rank: usize,
    pub torsion: Vec<String>,
}

/// Per-term homology of a complex; exact iff every entry is trivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologySummary {
    pub terms: Vec<TermHomology>,
}

impl HomologySummary {
    pub fn is_exact(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.free_rank == 0 && t.torsion.is_empty())
    }
}

fn check_shapes(shapes: &[(usize, usize)]) -> Result<()> {
    for (i, w) in shapes.windows(2).enumerate() {
        if w[1].1 != w[0].0 {
            return Err(Error::NotAComplex(format!(
                "d_{} has {} rows but d_{} has {} columns",
                i + 1,
                w[0].0,
                i + 2,
                w[1].1
            )));
        }
    }
    Ok(())
}

/// Verifies the complex property and computes homology at every term.
///
/// Over GF(2) the homology at term `i` is `dim ker d_i - rank d_{i-1}`. Over
/// the integers the free rank is the same expression with Smith ranks, and
/// the torsion orders are the invariant factors of the incoming map that
/// exceed 1.
pub fn complex_check(data: &ComplexData) -> Result<HomologySummary> {
    match data {
        ComplexData::GF2(diffs) => {
            if diffs.is_empty() {
                return Err(Error::NotAComplex("no differentials given".into()));
            }
            let shapes: Vec<(usize, usize)> = diffs.iter().map(|d| (d.rows(), d.cols())).collect();
            check_shapes(&shapes)?;
            for (i, w) in diffs.windows(2).enumerate() {
                if !w[1].mul(&w[0]).is_zero() {
                    return Err(Error::NotAComplex(format!(
                        "d_{} o d_{} is nonzero",
                        i + 2,
                        i + 1
                    )));
                }
            }
            let ranks: Vec<usize> = diffs.iter().map(rank_gf2).collect();
            Ok(summary_from_ranks(&shapes, &ranks, |_| Vec::new()))
        }
        ComplexData::Int(diffs) => {
            if diffs.is_empty() {
                return Err(Error::NotAComplex("no differentials given".into()));
            }
            let shapes: Vec<(usize, usize)> = diffs.iter().map(|d| (d.rows(), d.cols())).collect();
            check_shapes(&shapes)?;
            for (i, w) in diffs.windows(2).enumerate() {
                if !w[1].mul(&w[0]).is_zero() {
                    return Err(Error::NotAComplex(format!(
                        "d_{} o d_{} is nonzero",
                        i + 2,
                        i + 1
                    )));
                }
            }
            let forms: Vec<SmithForm> = diffs.iter().map(smith_normal_form).collect();
            let ranks: Vec<usize> = forms.iter().map(SmithForm::rank).collect();
            Ok(summary_from_ranks(&shapes, &ranks, |incoming| {
                forms[incoming]
                    .diagonal
                    .iter()
                    .filter(|d| **d > BigInt::one())
                    .map(|d| d.to_string())
                    .collect()
            }))
        }
    }
}

fn summary_from_ranks(
    shapes: &[(usize, usize)],
    ranks: &[usize],
    torsion_of_incoming: impl Fn(usize) -> Vec<String>,
) -> HomologySummary {
    let m = shapes.len();
    let dim = |i: usize| -> usize {
        // term i (0-based) has dimension cols(d_i) for i < m, rows(d_{m-1}) at the end
        if i < m {
            shapes[i].1
        } else {
            shapes[m - 1].0
        }
    };
    let mut terms = Vec::with_capacity(m + 1);
    for i in 0..=m {
        let rank_out = if i < m { ranks[i] } else { 0 };
        let rank_in = if i > 0 { ranks[i - 1] } else { 0 };
        let free_rank = dim(i) - rank_out - rank_in;
        let torsion = if i > 0 {
            torsion_of_incoming(i - 1)
        } else {
            Vec::new()
        };
        terms.push(TermHomology { free_rank, torsion });
    }
    HomologySummary { terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gf2_rank_examples() {
        assert_eq!(rank_gf2(&GF2Matrix::from_rows(&[vec![1, 1], vec![1, 1]])), 1);
        assert_eq!(rank_gf2(&GF2Matrix::identity(3)), 3);
        assert_eq!(
            rank_gf2(&GF2Matrix::from_rows(&[
                vec![1, 0, 1],
                vec![0, 1, 1],
                vec![1, 1, 0]
            ])),
            2
        );
        assert_eq!(rank_gf2(&GF2Matrix::zeros(3, 5)), 0);
    }

    #[test]
    fn snf_examples() {
        let f = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(f.diagonal, vec![BigInt::from(1), BigInt::from(6)]);

        let f = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(f.diagonal, vec![BigInt::from(2), BigInt::from(4)]);

        let f = smith_normal_form(&IntMatrix::zeros(2, 2));
        assert!(f.diagonal.is_empty());
    }

    fn big_det(m: &IntMatrix) -> BigInt {
        let n = m.rows();
        assert_eq!(n, m.cols());
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut det = BigInt::zero();
        let cols: Vec<usize> = (1..n).collect();
        for r in 0..n {
            let a = m.get(r, 0);
            if a.is_zero() {
                continue;
            }
            let rows: Vec<usize> = (0..n).filter(|&i| i != r).collect();
            let minor = big_det(&m.submatrix(&rows, &cols));
            let term = a * minor;
            if r % 2 == 0 {
                det += term;
            } else {
                det -= term;
            }
        }
        det
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(out: &mut Vec<Vec<usize>>, cur: &mut Vec<usize>, start: usize, n: usize, k: usize) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(out, cur, i + 1, n, k);
                cur.pop();
            }
        }
        rec(&mut out, &mut cur, 0, n, k);
        out
    }

    /// gcd of the absolute values of all nonzero r x r minors (zero when all
    /// vanish); the classical determinantal-divisor oracle for the SNF.
    fn gcd_of_minors(m: &IntMatrix, r: usize) -> BigInt {
        let mut acc = BigInt::zero();
        for rows in combinations(m.rows(), r) {
            for cols in combinations(m.cols(), r) {
                let d = big_det(&m.submatrix(&rows, &cols));
                if !d.is_zero() {
                    acc = num_integer_gcd(&acc, &d.abs());
                }
            }
        }
        acc
    }

    fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
        let (mut a, mut b) = (a.abs(), b.abs());
        while !b.is_zero() {
            let r = &a % &b;
            a = b;
            b = r;
        }
        a
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntMatrix {
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-5..=5)).collect())
            .collect();
        IntMatrix::from_rows(&data)
    }

    #[test]
    fn snf_against_minor_gcd_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let m = random_matrix(&mut rng, rows, cols);
            let f = smith_normal_form(&m);
            let r = f.rank();
            if r > 0 {
                let product: BigInt = f.diagonal.iter().product();
                assert_eq!(product, gcd_of_minors(&m, r), "matrix {m:?}");
            }
            if r < rows.min(cols) {
                assert!(gcd_of_minors(&m, r + 1).is_zero());
            }
            assert_eq!(big_det(&f.u).abs(), BigInt::one());
            assert_eq!(big_det(&f.v).abs(), BigInt::one());
        }
    }

    #[test]
    fn gf2_rank_counts_odd_invariant_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let bits: Vec<Vec<u8>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(0..=1)).collect())
                .collect();
            let g = GF2Matrix::from_rows(&bits);
            let lifted = IntMatrix::from_rows(
                &bits
                    .iter()
                    .map(|row| row.iter().map(|&b| b as i64).collect())
                    .collect::<Vec<_>>(),
            );
            let odd = smith_normal_form(&lifted)
                .diagonal
                .iter()
                .filter(|d| !(*d % BigInt::from(2)).is_zero())
                .count();
            assert_eq!(rank_gf2(&g), odd);
        }
    }

    #[test]
    fn complex_check_torsion_example() {
        // 0 -> Z --(x2)--> Z -> 0
        let data = ComplexData::Int(vec![IntMatrix::from_rows(&[vec![2]])]);
        let h = complex_check(&data).unwrap();
        assert_eq!(h.terms.len(), 2);
        assert_eq!(h.terms[0].free_rank, 0);
        assert!(h.terms[0].torsion.is_empty());
        assert_eq!(h.terms[1].free_rank, 0);
        assert_eq!(h.terms[1].torsion, vec!["2".to_string()]);
        assert!(!h.is_exact());

        let iso = ComplexData::Int(vec![IntMatrix::from_rows(&[vec![1]])]);
        assert!(complex_check(&iso).unwrap().is_exact());
    }

    #[test]
    fn complex_check_rejects_nonzero_composition() {
        let d1 = IntMatrix::from_rows(&[vec![1]]);
        let d2 = IntMatrix::from_rows(&[vec![1]]);
        let err = complex_check(&ComplexData::Int(vec![d1, d2])).unwrap_err();
        assert!(matches!(err, Error::NotAComplex(_)));
    }

    #[test]
    fn complex_free_ranks_match_reversed_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            // Random three-term complex: d2 chosen in the kernel of nothing,
            // built as d2 = B, d1 = C with B*C = 0 via a shared middle factor.
            let a = rng.gen_range(1..=4);
            let b = rng.gen_range(1..=4);
            let c = rng.gen_range(1..=4);
            // Block shape d1 = [X; 0], d2 = [0 Y] guarantees d2 * d1 = 0.
            let x = random_matrix(&mut rng, b, a);
            let y = random_matrix(&mut rng, c, b);
            let mut d1 = IntMatrix::zeros(2 * b, a);
            for r in 0..b {
                for col in 0..a {
                    d1.set(r, col, x.get(r, col).clone());
                }
            }
            let mut d2 = IntMatrix::zeros(c, 2 * b);
            for r in 0..c {
                for col in 0..b {
                    d2.set(r, b + col, y.get(r, col).clone());
                }
            }
            assert!(d2.mul(&d1).is_zero());

            let fwd = complex_check(&ComplexData::Int(vec![d1.clone(), d2.clone()])).unwrap();
            let rev = complex_check(&ComplexData::Int(vec![d2.transpose(), d1.transpose()]))
                .unwrap();
            let fwd_ranks: Vec<usize> = fwd.terms.iter().map(|t| t.free_rank).collect();
            let mut rev_ranks: Vec<usize> = rev.terms.iter().map(|t| t.free_rank).collect();
            rev_ranks.reverse();
            assert_eq!(fwd_ranks, rev_ranks);

            // Euler characteristic both ways.
            let dims = [a as i64, 2 * b as i64, c as i64];
            let chi_dims = dims[0] - dims[1] + dims[2];
            let chi_h = fwd_ranks[0] as i64 - fwd_ranks[1] as i64 + fwd_ranks[2] as i64;
            assert_eq!(chi_dims, chi_h);
        }
    }
}
