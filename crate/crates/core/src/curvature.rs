//! The curvature two-form of the lowest-k eigenbundle, Chern numbers of
//! two-parameter Hermitian families by direct integration and by the lattice
//! field-strength method, first Stiefel-Whitney holonomies of real loops, and
//! eigenvalue-gap scans over sampled families.

use ndarray::s;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{adjoint, det, orthonormalize_columns, CMat};
use crate::schubert::FieldCase;
use crate::spectral::{jacobi_eigh, GapTolerance, SelfAdjointOperator, Spectrum};

/// Deterministic pairwise reduction; fixed grid => bit-stable sum regardless
/// of how the per-cell values were produced.
pub(crate) fn tree_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => {
            let mid = n / 2;
            tree_sum(&xs[..mid]) + tree_sum(&xs[mid..])
        }
    }
}

/// The curvature value on a precomputed spectrum:
/// `sum_{i<=k<j} Im(conj(<B1 e_i, e_j>) <B2 e_i, e_j>) / (pi (l_i - l_j)^2)`,
/// the real determinant of the two overlap columns. Gauge invariant.
pub fn omega_from_spectrum(
    spectrum: &Spectrum,
    b1: &SelfAdjointOperator,
    b2: &SelfAdjointOperator,
    k: usize,
) -> f64 {
    let n = spectrum.n();
    assert!(k >= 1 && k < n, "level k out of range");
    assert_eq!(b1.n(), n, "tangent size mismatch");
    assert_eq!(b2.n(), n, "tangent size mismatch");
    let e = &spectrum.frame;
    let m1 = adjoint(e).dot(b1.matrix()).dot(e);
    let m2 = adjoint(e).dot(b2.matrix()).dot(e);
    let mut acc = 0.0;
    for i in 0..k {
        for j in k..n {
            let z1 = m1[[j, i]];
            let z2 = m2[[j, i]];
            let wedge = (z1.conj() * z2).im;
            let gap = spectrum.eigenvalues[i] - spectrum.eigenvalues[j];
            acc += wedge / (std::f64::consts::PI * gap * gap);
        }
    }
    acc
}

/// The curvature form at `a` evaluated on the tangent pair `(b1, b2)`.
/// Requires the level-k gap of `a` to be open.
pub fn omega_k(
    a: &SelfAdjointOperator,
    b1: &SelfAdjointOperator,
    b2: &SelfAdjointOperator,
    k: usize,
    tol: &GapTolerance,
) -> Result<f64> {
    let n = a.n();
    if k < 1 || k + 1 > n {
        return Err(Error::RangeError {
            what: "curvature level",
            value: k as i64,
            expected: format!("1 <= k <= {}", n - 1),
        });
    }
    if b1.n() != n || b2.n() != n {
        return Err(Error::InvalidInput(
            "tangent operators must match the base size".into(),
        ));
    }
    let spectrum = jacobi_eigh(a)?;
    let gap = spectrum.gap(k);
    if gap <= tol.threshold(spectrum.spread()) {
        return Err(Error::DegenerateAtK {
            k,
            gap,
            location: "given operator".into(),
        });
    }
    Ok(omega_from_spectrum(&spectrum, b1, b2, k))
}

/// Grid geometry of a two-parameter family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GridKind {
    /// `u` in (0, pi) sampled at cell centers, `v` in [0, 2pi) periodic.
    Sphere,
    /// Both directions periodic on [0, 1).
    Closed,
}

type Sampler2 = Box<dyn Fn(f64, f64) -> SelfAdjointOperator + Sync + Send>;
type Tangents2 = Box<dyn Fn(f64, f64) -> (SelfAdjointOperator, SelfAdjointOperator) + Sync + Send>;

enum Source {
    Analytic {
        sampler: Sampler2,
        tangents: Option<Tangents2>,
    },
    Stored {
        grid: Vec<SelfAdjointOperator>,
    },
}

/// A two-parameter family of Hermitian operators sampled on an
/// `nu x nv` grid, either by formula (with optional analytic tangents) or
/// from stored matrices.
pub struct SurfaceFamily {
    pub kind: GridKind,
    pub nu: usize,
    pub nv: usize,
    source: Source,
}

impl SurfaceFamily {
    pub fn new_analytic(
        kind: GridKind,
        nu: usize,
        nv: usize,
        sampler: Sampler2,
        tangents: Option<Tangents2>,
    ) -> Result<Self> {
        if nu < 2 || nv < 2 {
            return Err(Error::RangeError {
                what: "grid size",
                value: nu.min(nv) as i64,
                expected: "at least 2x2".to_string(),
            });
        }
        Ok(SurfaceFamily {
            kind,
            nu,
            nv,
            source: Source::Analytic { sampler, tangents },
        })
    }

    pub fn new_stored(kind: GridKind, rows: Vec<Vec<SelfAdjointOperator>>) -> Result<Self> {
        let nu = rows.len();
        let nv = rows.first().map(|r| r.len()).unwrap_or(0);
        if nu < 2 || nv < 2 {
            return Err(Error::InvalidInput("stored grid must be at least 2x2".into()));
        }
        if rows.iter().any(|r| r.len() != nv) {
            return Err(Error::InvalidInput("ragged grid".into()));
        }
        let n = rows[0][0].n();
        let field = rows[0][0].field();
        let mut grid = Vec::with_capacity(nu * nv);
        for row in rows {
            for op in row {
                if op.n() != n || op.field() != field {
                    return Err(Error::InvalidInput(
                        "grid entries must share size and field".into(),
                    ));
                }
                grid.push(op);
            }
        }
        Ok(SurfaceFamily {
            kind,
            nu,
            nv,
            source: Source::Stored { grid },
        })
    }

    /// Parameter steps `(du, dv)`.
    pub fn steps(&self) -> (f64, f64) {
        match self.kind {
            GridKind::Sphere => (
                std::f64::consts::PI / self.nu as f64,
                2.0 * std::f64::consts::PI / self.nv as f64,
            ),
            GridKind::Closed => (1.0 / self.nu as f64, 1.0 / self.nv as f64),
        }
    }

    /// Parameter point of the grid node `(i, j)`.
    pub fn param(&self, i: usize, j: usize) -> (f64, f64) {
        let (du, dv) = self.steps();
        match self.kind {
            GridKind::Sphere => ((i as f64 + 0.5) * du, (j as f64 + 0.5) * dv),
            GridKind::Closed => (i as f64 * du, j as f64 * dv),
        }
    }

    pub fn operator_at(&self, i: usize, j: usize) -> SelfAdjointOperator {
        match &self.source {
            Source::Analytic { sampler, .. } => {
                let (u, v) = self.param(i, j);
                sampler(u, v)
            }
            Source::Stored { grid } => grid[i * self.nv + j].clone(),
        }
    }

    /// Tangent pair at the node: analytic when available, otherwise central
    /// differences with one grid cell of step (one-sided at the u-edges of a
    /// stored sphere grid; v always wraps).
    pub fn tangents_at(&self, i: usize, j: usize) -> (SelfAdjointOperator, SelfAdjointOperator) {
        let (du, dv) = self.steps();
        match &self.source {
            Source::Analytic { sampler, tangents } => {
                if let Some(t) = tangents {
                    let (u, v) = self.param(i, j);
                    return t(u, v);
                }
                let (u, v) = self.param(i, j);
                let tu = SelfAdjointOperator::combine(
                    0.5 / du,
                    &sampler(u + du, v),
                    -0.5 / du,
                    &sampler(u - du, v),
                );
                let tv = SelfAdjointOperator::combine(
                    0.5 / dv,
                    &sampler(u, v + dv),
                    -0.5 / dv,
                    &sampler(u, v - dv),
                );
                (tu, tv)
            }
            Source::Stored { .. } => {
                let jp = (j + 1) % self.nv;
                let jm = (j + self.nv - 1) % self.nv;
                let tv = SelfAdjointOperator::combine(
                    0.5 / dv,
                    &self.operator_at(i, jp),
                    -0.5 / dv,
                    &self.operator_at(i, jm),
                );
                let tu = match self.kind {
                    GridKind::Closed => {
                        let ip = (i + 1) % self.nu;
                        let im = (i + self.nu - 1) % self.nu;
                        SelfAdjointOperator::combine(
                            0.5 / du,
                            &self.operator_at(ip, j),
                            -0.5 / du,
                            &self.operator_at(im, j),
                        )
                    }
                    GridKind::Sphere => {
                        if i == 0 {
                            SelfAdjointOperator::combine(
                                1.0 / du,
                                &self.operator_at(1, j),
                                -1.0 / du,
                                &self.operator_at(0, j),
                            )
                        } else if i + 1 == self.nu {
                            SelfAdjointOperator::combine(
                                1.0 / du,
                                &self.operator_at(i, j),
                                -1.0 / du,
                                &self.operator_at(i - 1, j),
                            )
                        } else {
                            SelfAdjointOperator::combine(
                                0.5 / du,
                                &self.operator_at(i + 1, j),
                                -0.5 / du,
                                &self.operator_at(i - 1, j),
                            )
                        }
                    }
                };
                (tu, tv)
            }
        }
    }

    /// The two pole operators of a sphere family; available only for
    /// formula-backed families.
    fn sphere_poles(&self) -> Option<(SelfAdjointOperator, SelfAdjointOperator)> {
        match (&self.source, self.kind) {
            (Source::Analytic { sampler, .. }, GridKind::Sphere) => {
                let (_, v0) = self.param(0, 0);
                Some((sampler(0.0, v0), sampler(std::f64::consts::PI, v0)))
            }
            _ => None,
        }
    }
}

/// Chern number of the lowest-k eigenbundle by Riemann summation of the
/// curvature form over the grid. Returns the raw real value.
pub fn chern_via_form(family: &SurfaceFamily, k: usize, tol: &GapTolerance) -> Result<f64> {
    let (du, dv) = family.steps();
    let cells: Vec<(usize, usize)> = (0..family.nu)
        .flat_map(|i| (0..family.nv).map(move |j| (i, j)))
        .collect();
    let contributions: Vec<Result<f64>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let a = family.operator_at(i, j);
            let spectrum = jacobi_eigh(&a)?;
            let gap = spectrum.gap(k);
            if gap <= tol.threshold(spectrum.spread()) {
                let (u, v) = family.param(i, j);
                return Err(Error::DegenerateAtK {
                    k,
                    gap,
                    location: format!("(u, v) = ({u:.6}, {v:.6})"),
                });
            }
            let (tu, tv) = family.tangents_at(i, j);
            Ok(omega_from_spectrum(&spectrum, &tu, &tv, k) * du * dv)
        })
        .collect();
    let mut values = Vec::with_capacity(contributions.len());
    for c in contributions {
        values.push(c?);
    }
    Ok(tree_sum(&values))
}

fn lowest_k_frame(a: &SelfAdjointOperator, k: usize) -> Result<CMat> {
    let spectrum = jacobi_eigh(a)?;
    Ok(spectrum.frame.slice(s![.., 0..k]).to_owned())
}

/// Overlap determinant of two k-frames.
fn link(fx: &CMat, fy: &CMat) -> Complex64 {
    det(&adjoint(fx).dot(fy))
}

const SINGULAR_LINK_TOL: f64 = 1e-6;

/// Signed flux through one plaquette from the four corner frames, in Chern
/// units (the sign convention matches the curvature form: the flux of a
/// plaquette spanned by `(+u, +v)` approximates `Omega_k(T_u, T_v) du dv`).
fn plaquette_flux_frames(
    c00: &CMat,
    c10: &CMat,
    c11: &CMat,
    c01: &CMat,
    location: &dyn Fn() -> String,
) -> Result<f64> {
    let l1 = link(c00, c10);
    let l2 = link(c10, c11);
    let l3 = link(c11, c01);
    let l4 = link(c01, c00);
    for l in [l1, l2, l3, l4] {
        if l.norm() < SINGULAR_LINK_TOL {
            return Err(Error::SingularLink {
                location: location(),
                modulus: l.norm(),
            });
        }
    }
    let product = l1 * l2 * l3 * l4;
    Ok(product.arg() / (2.0 * std::f64::consts::PI))
}

/// Flux through a small plaquette given its four corner operators in cyclic
/// order `A(u,v), A(u+h,v), A(u+h,v+h), A(u,v+h)`.
pub fn fhs_plaquette_flux(corners: [&SelfAdjointOperator; 4], k: usize) -> Result<f64> {
    let frames: Vec<CMat> = corners
        .iter()
        .map(|a| lowest_k_frame(a, k))
        .collect::<Result<_>>()?;
    plaquette_flux_frames(&frames[0], &frames[1], &frames[2], &frames[3], &|| {
        "plaquette".to_string()
    })
}

/// Chern number by the lattice field-strength method: frame overlap
/// determinants on links, principal-value flux per plaquette, summed over a
/// closed lattice. The result is an exact integer whenever no link is
/// singular; sphere grids are closed off with the two pole points.
pub fn chern_fhs(family: &SurfaceFamily, k: usize) -> Result<i64> {
    let nv = family.nv;
    let inner: Vec<(usize, usize)> = (0..family.nu)
        .flat_map(|i| (0..nv).map(move |j| (i, j)))
        .collect();
    let frames: Vec<Result<CMat>> = inner
        .par_iter()
        .map(|&(i, j)| lowest_k_frame(&family.operator_at(i, j), k))
        .collect();
    let mut grid_frames = Vec::with_capacity(frames.len());
    for f in frames {
        grid_frames.push(f?);
    }
    let frame_at = |i: usize, j: usize| &grid_frames[i * nv + j];

    let mut fluxes: Vec<f64> = Vec::new();
    match family.kind {
        GridKind::Closed => {
            for i in 0..family.nu {
                for j in 0..nv {
                    let ip = (i + 1) % family.nu;
                    let jp = (j + 1) % nv;
                    let loc = || format!("plaquette ({i}, {j})");
                    fluxes.push(plaquette_flux_frames(
                        frame_at(i, j),
                        frame_at(ip, j),
                        frame_at(ip, jp),
                        frame_at(i, jp),
                        &loc,
                    )?);
                }
            }
        }
        GridKind::Sphere => {
            let (north, south) = family.sphere_poles().ok_or_else(|| {
                Error::InvalidInput(
                    "field-strength method on a sphere grid needs a formula-backed family \
                     (stored sphere grids have no pole samples)"
                        .into(),
                )
            })?;
            let north_frame = lowest_k_frame(&north, k)?;
            let south_frame = lowest_k_frame(&south, k)?;
            // rows: north pole, the nu sampled rows, south pole
            let row_frame = |r: usize, j: usize| -> &CMat {
                if r == 0 {
                    &north_frame
                } else if r == family.nu + 1 {
                    &south_frame
                } else {
                    frame_at(r - 1, j)
                }
            };
            for r in 0..=family.nu {
                for j in 0..nv {
                    let jp = (j + 1) % nv;
                    let loc = || format!("plaquette row {r}, column {j}");
                    fluxes.push(plaquette_flux_frames(
                        row_frame(r, j),
                        row_frame(r + 1, j),
                        row_frame(r + 1, jp),
                        row_frame(r, jp),
                        &loc,
                    )?);
                }
            }
        }
    }
    let total = tree_sum(&fluxes);
    let rounded = total.round();
    debug_assert!(
        (total - rounded).abs() < 1e-6,
        "field-strength sum {total} is not an integer"
    );
    Ok(rounded as i64)
}

type Sampler1 = Box<dyn Fn(f64) -> SelfAdjointOperator + Sync + Send>;

enum LoopSource {
    Analytic(Sampler1),
    Stored(Vec<SelfAdjointOperator>),
}

/// A closed one-parameter family `t in [0, 1] -> A(t)`, `A(0) = A(1)`,
/// sampled at `steps` points.
pub struct LoopFamily {
    pub steps: usize,
    source: LoopSource,
}

const LOOP_CLOSURE_TOL: f64 = 1e-10;

impl LoopFamily {
    pub fn new_analytic(steps: usize, sampler: Sampler1) -> Result<Self> {
        if steps < 3 {
            return Err(Error::RangeError {
                what: "loop steps",
                value: steps as i64,
                expected: "at least 3".to_string(),
            });
        }
        let start = sampler(0.0);
        let end = sampler(1.0);
        let deviation = crate::linalg::max_abs(&(start.matrix() - end.matrix()));
        if deviation > LOOP_CLOSURE_TOL {
            return Err(Error::LoopNotClosed { deviation });
        }
        Ok(LoopFamily {
            steps,
            source: LoopSource::Analytic(sampler),
        })
    }

    /// Stored samples at `t = s / len`; closure holds by construction.
    pub fn new_stored(samples: Vec<SelfAdjointOperator>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InvalidInput("need at least 3 loop samples".into()));
        }
        let n = samples[0].n();
        let field = samples[0].field();
        if samples.iter().any(|a| a.n() != n || a.field() != field) {
            return Err(Error::InvalidInput(
                "loop samples must share size and field".into(),
            ));
        }
        Ok(LoopFamily {
            steps: samples.len(),
            source: LoopSource::Stored(samples),
        })
    }

    /// Sample index `s` (mod steps).
    pub fn operator_at(&self, s: usize) -> SelfAdjointOperator {
        let s = s % self.steps;
        match &self.source {
            LoopSource::Analytic(f) => f(s as f64 / self.steps as f64),
            LoopSource::Stored(v) => v[s].clone(),
        }
    }

    pub fn field(&self) -> FieldCase {
        self.operator_at(0).field()
    }
}

/// First Stiefel-Whitney holonomy of the lowest-k eigenbundle along a real
/// loop: parallel-transport an orthonormal k-frame by projection onto the
/// next eigenspace followed by orientation-preserving re-orthonormalization,
/// and read off the sign of the end-to-start determinant.
pub fn sw1_holonomy(l: &LoopFamily, k: usize, tol: &GapTolerance) -> Result<i32> {
    let first = l.operator_at(0);
    if first.field() != FieldCase::Real {
        return Err(Error::InvalidInput(
            "Stiefel-Whitney holonomy is defined for real loops".into(),
        ));
    }
    let n = first.n();
    if k < 1 || k + 1 > n {
        return Err(Error::RangeError {
            what: "holonomy level",
            value: k as i64,
            expected: format!("1 <= k <= {}", n - 1),
        });
    }

    let eigenbases: Vec<Result<CMat>> = (0..l.steps)
        .into_par_iter()
        .map(|s| {
            let spectrum = jacobi_eigh(&l.operator_at(s))?;
            let gap = spectrum.gap(k);
            if gap <= tol.threshold(spectrum.spread()) {
                return Err(Error::DegenerateAtK {
                    k,
                    gap,
                    location: format!("t = {:.6}", s as f64 / l.steps as f64),
                });
            }
            Ok(spectrum.frame.slice(s![.., 0..k]).to_owned())
        })
        .collect();
    let mut bases = Vec::with_capacity(l.steps);
    for b in eigenbases {
        bases.push(b?);
    }

    let start = bases[0].clone();
    let mut transported = start.clone();
    for s in 1..=l.steps {
        let target = &bases[s % l.steps];
        let overlap = adjoint(target).dot(&transported);
        let modulus = det(&overlap).norm();
        if modulus <= 0.5 {
            return Err(Error::StepTooCoarse {
                t: s as f64 / l.steps as f64,
                modulus,
            });
        }
        let projected = target.dot(&overlap);
        transported = orthonormalize_columns(&projected)?;
    }
    let closing = det(&adjoint(&start).dot(&transported));
    Ok(if closing.re >= 0.0 { 1 } else { -1 })
}

/// A one- or two-parameter family being probed for gap closings.
pub enum ParamFamily<'a> {
    Curve {
        sampler: &'a (dyn Fn(f64) -> SelfAdjointOperator + Sync),
        samples: usize,
    },
    Surface {
        sampler: &'a (dyn Fn(f64, f64) -> SelfAdjointOperator + Sync),
        samples: (usize, usize),
    },
}

/// Smallest observed gap and where it was attained.
#[derive(Clone, Debug, serde::Serialize)]
pub struct GapScanReport {
    pub min_gap: f64,
    pub argmin: Vec<f64>,
    pub argmin_index: Vec<usize>,
}

/// Minimum of `lambda_{k+1} - lambda_k` over the sampled parameter values
/// (endpoints included).
pub fn min_gap_scan(family: &ParamFamily, k: usize) -> Result<GapScanReport> {
    let gap_of = |a: &SelfAdjointOperator| -> Result<f64> {
        let n = a.n();
        if k < 1 || k + 1 > n {
            return Err(Error::RangeError {
                what: "scan level",
                value: k as i64,
                expected: format!("1 <= k <= {}", n - 1),
            });
        }
        Ok(jacobi_eigh(a)?.gap(k))
    };
    match family {
        ParamFamily::Curve { sampler, samples } => {
            let m = (*samples).max(2);
            let gaps: Vec<Result<f64>> = (0..m)
                .into_par_iter()
                .map(|i| gap_of(&sampler(i as f64 / (m - 1) as f64)))
                .collect();
            let mut best = (f64::INFINITY, 0usize);
            for (i, g) in gaps.into_iter().enumerate() {
                let g = g?;
                if g < best.0 {
                    best = (g, i);
                }
            }
            Ok(GapScanReport {
                min_gap: best.0,
                argmin: vec![best.1 as f64 / (m - 1) as f64],
                argmin_index: vec![best.1],
            })
        }
        ParamFamily::Surface { sampler, samples } => {
            let (mu, mv) = (samples.0.max(2), samples.1.max(2));
            let cells: Vec<(usize, usize)> = (0..mu)
                .flat_map(|i| (0..mv).map(move |j| (i, j)))
                .collect();
            let gaps: Vec<Result<f64>> = cells
                .par_iter()
                .map(|&(i, j)| {
                    gap_of(&sampler(
                        i as f64 / (mu - 1) as f64,
                        j as f64 / (mv - 1) as f64,
                    ))
                })
                .collect();
            let mut best = (f64::INFINITY, (0usize, 0usize));
            for ((i, j), g) in cells.iter().zip(gaps) {
                let g = g?;
                if g < best.0 {
                    best = (g, (*i, *j));
                }
            }
            Ok(GapScanReport {
                min_gap: best.0,
                argmin: vec![
                    best.1 .0 as f64 / (mu - 1) as f64,
                    best.1 .1 as f64 / (mv - 1) as f64,
                ],
                argmin_index: vec![best.1 .0, best.1 .1],
            })
        }
    }
}
