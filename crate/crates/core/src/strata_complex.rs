//! The cochain complex of the multiplicity filtration in its Schubert model:
//! term bases with degree bookkeeping, the differential matrices, kernel
//! dimensions through two independent routes, Thom-space Betti numbers and
//! the full machine verification of exactness.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::homalg::{complex_check, rank_gf2, smith_normal_form, ComplexData, GF2Matrix, IntMatrix};
use crate::schubert::{
    binomial, enumerate_box, in_image_rho, pieri, rho_k, BoxContext, FieldCase, Partition,
};

/// Ambient dimension and coefficient setting for the complex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ComplexSpec {
    pub n: usize,
    pub case: FieldCase,
}

impl ComplexSpec {
    pub fn new(n: usize, case: FieldCase) -> Result<Self> {
        if n < 2 {
            return Err(Error::RangeError {
                what: "ambient dimension",
                value: n as i64,
                expected: "n >= 2".to_string(),
            });
        }
        Ok(ComplexSpec { n, case })
    }
}

/// Rank of the normal bundle appearing in the Thom-space description of M^k:
/// `k(k+1)/2 + k - 1` real, `k^2 + 2k - 1` Hermitian; equals -1 at k = 0.
pub fn nu(k: usize, case: FieldCase) -> i64 {
    let k = k as i64;
    match case {
        FieldCase::Real => k * (k + 1) / 2 + k - 1,
        FieldCase::Hermitian => k * k + 2 * k - 1,
    }
}

/// Basis of the k-th term: Schubert classes of `Gr_{k-1}(n-1)` in the
/// `(k-1) x (n-k)` box, carrying the Thom-shifted degree
/// `cell_factor * |lambda| + nu_{k-1} + 1`.
#[derive(Clone, Debug)]
pub struct TermBasis {
    pub k: usize,
    pub basis: Vec<Partition>,
    pub degrees: Vec<i64>,
}

impl TermBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn term_basis(k: usize, spec: &ComplexSpec) -> Result<TermBasis> {
    if k < 1 || k > spec.n {
        return Err(Error::RangeError {
            what: "term index",
            value: k as i64,
            expected: format!("1 <= k <= {}", spec.n),
        });
    }
    let ctx = BoxContext::new(k - 1, spec.n - 1)?;
    let basis: Vec<Partition> = enumerate_box(ctx).into_iter().flatten().collect();
    let shift = nu(k - 1, spec.case) + 1;
    let factor = spec.case.cell_factor() as i64;
    let degrees = basis
        .iter()
        .map(|p| factor * p.weight() as i64 + shift)
        .collect();
    Ok(TermBasis { k, basis, degrees })
}

/// The differential from term k to term k+1 as a column map: each basis
/// class with exactly k-1 parts is sent to the class with every part
/// decremented (coefficient 1); classes with fewer parts map to zero.
#[derive(Clone, Debug)]
pub struct DifferentialModel {
    pub k: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    /// `column_target[j] = Some(i)` when column j has its single unit entry
    /// in row i.
    pub column_target: Vec<Option<usize>>,
}

impl DifferentialModel {
    pub fn to_gf2(&self) -> GF2Matrix {
        let mut m = GF2Matrix::zeros(self.target_dim, self.source_dim);
        for (j, t) in self.column_target.iter().enumerate() {
            if let Some(i) = t {
                m.set(*i, j, true);
            }
        }
        m
    }

    pub fn to_int(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target_dim, self.source_dim);
        for (j, t) in self.column_target.iter().enumerate() {
            if let Some(i) = t {
                m.set(*i, j, 1.into());
            }
        }
        m
    }
}

pub fn differential(k: usize, spec: &ComplexSpec) -> Result<DifferentialModel> {
    if k < 1 || k + 1 > spec.n {
        return Err(Error::RangeError {
            what: "differential index",
            value: k as i64,
            expected: format!("1 <= k <= {}", spec.n - 1),
        });
    }
    let source = term_basis(k, spec)?;
    let target = term_basis(k + 1, spec)?;
    let index_of: BTreeMap<&Partition, usize> =
        target.basis.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let column_target = source
        .basis
        .iter()
        .map(|p| {
            if p.len() + 1 != k {
                return None;
            }
            let decremented =
                Partition::from_unsorted(p.parts().iter().map(|&x| x - 1).collect());
            let row = index_of
                .get(&decremented)
                .copied()
                .expect("decremented class stays in the target box");
            Some(row)
        })
        .collect();

    Ok(DifferentialModel {
        k,
        source_dim: source.dim(),
        target_dim: target.dim(),
        column_target,
    })
}

/// Kernel dimension of the k-th differential via the inclusion-image
/// criterion: a basis class `zeta` of term k is in the kernel iff the Pieri
/// product of the hyperplane class with `rho_k(zeta)` stays inside the image
/// of the inclusion (every summand has fewer than k parts).
pub fn kernel_dim_via_pieri(k: usize, spec: &ComplexSpec) -> Result<usize> {
    if k < 1 || k + 1 > spec.n {
        return Err(Error::RangeError {
            what: "differential index",
            value: k as i64,
            expected: format!("1 <= k <= {}", spec.n - 1),
        });
    }
    let term = term_basis(k, spec)?;
    let ambient = BoxContext::new(k, spec.n)?;
    let mut count = 0;
    for zeta in &term.basis {
        let included = rho_k(zeta, k, spec.n)?;
        let product = pieri(1, &included, ambient)?;
        if in_image_rho(product.iter(), k) {
            count += 1;
        }
    }
    Ok(count)
}

/// Reduced Betti numbers of the complement stratum M^k: the box of
/// `Gr_k(n-1)` shifted into degree `cell_factor * |lambda| + nu_k`; the
/// degenerate k = 0 case yields the empty table.
pub fn betti_mk(k: usize, spec: &ComplexSpec) -> Result<BTreeMap<i64, u64>> {
    if k + 1 > spec.n {
        return Err(Error::RangeError {
            what: "stratum index",
            value: k as i64,
            expected: format!("0 <= k <= {}", spec.n - 1),
        });
    }
    let ctx = BoxContext::new(k, spec.n - 1)?;
    let shift = nu(k, spec.case);
    let factor = spec.case.cell_factor() as i64;
    let mut betti = BTreeMap::new();
    for (weight, bucket) in enumerate_box(ctx).iter().enumerate() {
        if bucket.is_empty() {
            continue;
        }
        let degree = factor * weight as i64 + shift;
        if degree < 0 {
            continue;
        }
        *betti.entry(degree).or_insert(0) += bucket.len() as u64;
    }
    Ok(betti)
}

#[derive(Clone, Debug, Serialize)]
pub struct TermReport {
    pub k: usize,
    pub dim: usize,
    pub degrees: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub k: usize,
    pub matrix: usize,
    pub pieri: usize,
    pub expected: u64,
}

/// Either the string "zero" or the list of named homology failures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomologyStatus {
    Zero,
    Failures(Vec<String>),
}

impl Serialize for HomologyStatus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HomologyStatus::Zero => s.serialize_str("zero"),
            HomologyStatus::Failures(v) => v.serialize(s),
        }
    }
}

/// Outcome of the full verification; `failures` aggregates every named
/// sub-check failure and is empty iff `exact`.
#[derive(Clone, Debug, Serialize)]
pub struct ExactnessReport {
    pub n: usize,
    pub case: FieldCase,
    pub degree_shift: u32,
    pub terms: Vec<TermReport>,
    pub kernels: Vec<KernelReport>,
    pub homology: HomologyStatus,
    pub failures: Vec<String>,
    pub exact: bool,
}

/// Builds the complex for `spec` and runs the six sub-checks: term
/// dimensions, vanishing composites, homology over the case ring, the two
/// kernel counts against the binomial, the degree audit, and per-degree
/// exactness.
pub fn verify_exactness(spec: &ComplexSpec) -> Result<ExactnessReport> {
    let n = spec.n;
    let eps = spec.case.codim_eps();
    let mut failures: Vec<String> = Vec::new();

    let terms: Vec<TermBasis> = (1..=n)
        .map(|k| term_basis(k, spec))
        .collect::<Result<_>>()?;
    let diffs: Vec<DifferentialModel> = (1..n)
        .map(|k| differential(k, spec))
        .collect::<Result<_>>()?;

    // (a) term dimensions
    let mut term_reports = Vec::new();
    for t in &terms {
        let expected = binomial(n - 1, t.k - 1);
        if t.dim() as u64 != expected {
            failures.push(format!(
                "term {}: dimension {} != binomial({},{}) = {}",
                t.k,
                t.dim(),
                n - 1,
                t.k - 1,
                expected
            ));
        }
        term_reports.push(TermReport {
            k: t.k,
            dim: t.dim(),
            degrees: t.degrees.clone(),
        });
    }

    // (b) composites vanish
    for w in diffs.windows(2) {
        let composite = w[1].to_int().mul(&w[0].to_int());
        if !composite.is_zero() {
            failures.push(format!("composite d_{} o d_{} is nonzero", w[1].k, w[0].k));
        }
    }

    // (c) homology over the case ring
    let data = match spec.case {
        FieldCase::Real => ComplexData::GF2(diffs.iter().map(|d| d.to_gf2()).collect()),
        FieldCase::Hermitian => ComplexData::Int(diffs.iter().map(|d| d.to_int()).collect()),
    };
    let homology = match complex_check(&data) {
        Ok(summary) => {
            let mut bad = Vec::new();
            for (i, t) in summary.terms.iter().enumerate() {
                if t.free_rank != 0 {
                    bad.push(format!("term {}: free rank {}", i + 1, t.free_rank));
                }
                if !t.torsion.is_empty() {
                    bad.push(format!("term {}: torsion {:?}", i + 1, t.torsion));
                }
            }
            if bad.is_empty() {
                HomologyStatus::Zero
            } else {
                HomologyStatus::Failures(bad)
            }
        }
        Err(e) => HomologyStatus::Failures(vec![format!("complex check failed: {e}")]),
    };
    if let HomologyStatus::Failures(list) = &homology {
        for f in list {
            failures.push(format!("homology: {f}"));
        }
    }

    // (d) kernel dimensions: matrix rank vs Pieri criterion vs binomial
    let mut kernels = Vec::new();
    for d in &diffs {
        let rank = match spec.case {
            FieldCase::Real => rank_gf2(&d.to_gf2()),
            FieldCase::Hermitian => smith_normal_form(&d.to_int()).rank(),
        };
        let matrix_kernel = d.source_dim - rank;
        let pieri_kernel = kernel_dim_via_pieri(d.k, spec)?;
        let expected = if d.k >= 2 { binomial(n - 2, d.k - 2) } else { 0 };
        if matrix_kernel as u64 != expected || pieri_kernel as u64 != expected {
            failures.push(format!(
                "kernel at k={}: matrix {}, pieri {}, expected {}",
                d.k, matrix_kernel, pieri_kernel, expected
            ));
        }
        kernels.push(KernelReport {
            k: d.k,
            matrix: matrix_kernel,
            pieri: pieri_kernel,
            expected,
        });
    }

    // (e) degree audit: every unit entry shifts degree by exactly codim_eps
    for d in &diffs {
        let src = &terms[d.k - 1];
        let dst = &terms[d.k];
        for (j, t) in d.column_target.iter().enumerate() {
            if let Some(i) = t {
                let shift = dst.degrees[*i] - src.degrees[j];
                if shift != eps as i64 {
                    failures.push(format!(
                        "degree audit at k={}: column {} shifts degree by {} != {}",
                        d.k, j, shift, eps
                    ));
                }
            }
        }
    }

    // (f) graded exactness: restrict to each degree line and recheck
    let mut grades: Vec<i64> = Vec::new();
    for t in &terms {
        for &deg in &t.degrees {
            let c = deg - (eps as i64) * t.k as i64;
            if !grades.contains(&c) {
                grades.push(c);
            }
        }
    }
    grades.sort_unstable();
    for &c in &grades {
        let picks: Vec<Vec<usize>> = terms
            .iter()
            .map(|t| {
                t.degrees
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &deg)| (deg - (eps as i64) * t.k as i64 == c).then_some(i))
                    .collect()
            })
            .collect();
        let graded_data = match spec.case {
            FieldCase::Real => ComplexData::GF2(
                diffs
                    .iter()
                    .map(|d| d.to_gf2().submatrix(&picks[d.k], &picks[d.k - 1]))
                    .collect(),
            ),
            FieldCase::Hermitian => ComplexData::Int(
                diffs
                    .iter()
                    .map(|d| d.to_int().submatrix(&picks[d.k], &picks[d.k - 1]))
                    .collect(),
            ),
        };
        match complex_check(&graded_data) {
            Ok(summary) if summary.is_exact() => {}
            Ok(summary) => {
                for (i, t) in summary.terms.iter().enumerate() {
                    if t.free_rank != 0 || !t.torsion.is_empty() {
                        failures.push(format!(
                            "graded piece {c}: homology at term {} nonzero",
                            i + 1
                        ));
                    }
                }
            }
            Err(e) => failures.push(format!("graded piece {c}: {e}")),
        }
    }

    let exact = failures.is_empty();
    Ok(ExactnessReport {
        n,
        case: spec.case,
        degree_shift: eps,
        terms: term_reports,
        kernels,
        homology,
        failures,
        exact,
    })
}
