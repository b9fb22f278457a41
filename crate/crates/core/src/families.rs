//! Builtin operator families (the Pauli sphere, its block embedding, the
//! half-turn real loop), engineered and random probe families, and loading
//! of family files.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;

use crate::curvature::{GridKind, LoopFamily, SurfaceFamily};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::schubert::FieldCase;
use crate::spectral::{random_self_adjoint, SelfAdjointOperator};

pub const DEFAULT_SPHERE_GRID: (usize, usize) = (200, 100);
pub const DEFAULT_LOOP_STEPS: usize = 400;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli_x() -> CMat {
    Array2::from_shape_vec((2, 2), vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
        .unwrap()
}

fn pauli_y() -> CMat {
    Array2::from_shape_vec((2, 2), vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
        .unwrap()
}

fn pauli_z() -> CMat {
    Array2::from_shape_vec((2, 2), vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
        .unwrap()
}

/// The normalized Pauli operator at spherical direction `(theta, phi)`:
/// `(sin t cos p sigma_x + sin t sin p sigma_y + cos t sigma_z) / sqrt(2)`,
/// which has trace 0 and Frobenius norm 1.
pub fn pauli_matrix(theta: f64, phi: f64) -> SelfAdjointOperator {
    let s = 2f64.sqrt().recip();
    let m = pauli_x().mapv(|z| z * (theta.sin() * phi.cos() * s))
        + pauli_y().mapv(|z| z * (theta.sin() * phi.sin() * s))
        + pauli_z().mapv(|z| z * (theta.cos() * s));
    SelfAdjointOperator::new(FieldCase::Hermitian, m).expect("Pauli combination is Hermitian")
}

fn pauli_tangents(theta: f64, phi: f64) -> (SelfAdjointOperator, SelfAdjointOperator) {
    let s = 2f64.sqrt().recip();
    let du = pauli_x().mapv(|z| z * (theta.cos() * phi.cos() * s))
        + pauli_y().mapv(|z| z * (theta.cos() * phi.sin() * s))
        + pauli_z().mapv(|z| z * (-theta.sin() * s));
    let dv = pauli_x().mapv(|z| z * (-theta.sin() * phi.sin() * s))
        + pauli_y().mapv(|z| z * (theta.sin() * phi.cos() * s));
    (
        SelfAdjointOperator::new(FieldCase::Hermitian, du).unwrap(),
        SelfAdjointOperator::new(FieldCase::Hermitian, dv).unwrap(),
    )
}

/// The 2x2 Pauli family over the whole sphere, with analytic tangents.
pub fn pauli_sphere(nu: usize, nv: usize) -> Result<SurfaceFamily> {
    SurfaceFamily::new_analytic(
        GridKind::Sphere,
        nu,
        nv,
        Box::new(pauli_matrix),
        Some(Box::new(pauli_tangents)),
    )
}

fn check_simple_sorted(values: &[f64], what: &str) -> Result<()> {
    if values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!(
            "{what} eigenvalues must be strictly increasing, got {values:?}"
        )));
    }
    Ok(())
}

/// The sphere worth of operators `A_- (+) S_2 (+) A_+`: fixed simple
/// eigenvalues below -1 and above +1 sandwiching the normalized 2x2 Pauli
/// block, so that the level-k gap stays open everywhere while the surface
/// links the degeneracy locus once.
pub fn block_family(
    k: usize,
    below: Vec<f64>,
    above: Vec<f64>,
    nu: usize,
    nv: usize,
) -> Result<SurfaceFamily> {
    if k != below.len() + 1 {
        return Err(Error::InvalidInput(format!(
            "block family needs k = |below| + 1; got k = {k} with {} lower eigenvalues",
            below.len()
        )));
    }
    check_simple_sorted(&below, "lower block")?;
    check_simple_sorted(&above, "upper block")?;
    if below.iter().any(|&x| x >= -1.0) {
        return Err(Error::InvalidInput(
            "lower block eigenvalues must lie below -1".into(),
        ));
    }
    if above.iter().any(|&x| x <= 1.0) {
        return Err(Error::InvalidInput(
            "upper block eigenvalues must lie above 1".into(),
        ));
    }

    let assemble = move |mid: SelfAdjointOperator,
                         lower: &[f64],
                         upper: &[f64],
                         zero_ends: bool|
          -> SelfAdjointOperator {
        let scale = if zero_ends { 0.0 } else { 1.0 };
        let lo: Vec<f64> = lower.iter().map(|&x| x * scale).collect();
        let hi: Vec<f64> = upper.iter().map(|&x| x * scale).collect();
        let a_minus = SelfAdjointOperator::diagonal(FieldCase::Hermitian, &lo);
        let a_plus = SelfAdjointOperator::diagonal(FieldCase::Hermitian, &hi);
        SelfAdjointOperator::direct_sum(&[&a_minus, &mid, &a_plus])
    };

    let below_s = below.clone();
    let above_s = above.clone();
    let sampler = move |u: f64, v: f64| assemble(pauli_matrix(u, v), &below_s, &above_s, false);
    let below_t = below;
    let above_t = above;
    let tangents = move |u: f64, v: f64| {
        let (du, dv) = pauli_tangents(u, v);
        (
            assemble(du, &below_t, &above_t, true),
            assemble(dv, &below_t, &above_t, true),
        )
    };
    SurfaceFamily::new_analytic(
        GridKind::Sphere,
        nu,
        nv,
        Box::new(sampler),
        Some(Box::new(tangents)),
    )
}

/// The half-turn loop `A(t) = (cos 2 pi t sigma_z + sin 2 pi t sigma_x) / sqrt 2`
/// of real symmetric operators; its lowest eigenvector sweeps a Moebius band.
pub fn real_loop_2x2(steps: usize) -> Result<LoopFamily> {
    LoopFamily::new_analytic(
        steps,
        Box::new(|t| {
            let a = 2.0 * std::f64::consts::PI * t;
            let s = 2f64.sqrt().recip();
            SelfAdjointOperator::from_real(&[
                vec![a.cos() * s, a.sin() * s],
                vec![a.sin() * s, -a.cos() * s],
            ])
            .unwrap()
        }),
    )
}

/// Constant family; every tangent vanishes, so both Chern routes return 0.
pub fn constant_surface(
    op: SelfAdjointOperator,
    kind: GridKind,
    nu: usize,
    nv: usize,
) -> Result<SurfaceFamily> {
    SurfaceFamily::new_analytic(kind, nu, nv, Box::new(move |_, _| op.clone()), None)
}

/// A real 4x4 segment whose level-2 gap closes exactly at t = 1/2 with cubic
/// contact, so any reasonably fine scan lands within 1e-8 of the crossing.
pub fn planted_crossing_segment() -> impl Fn(f64) -> SelfAdjointOperator + Sync {
    move |t: f64| {
        let coef = 4.0 * (t - 0.5).powi(3);
        let angle = 2.0 * std::f64::consts::PI * t;
        let (co, si) = (angle.cos(), angle.sin());
        SelfAdjointOperator::from_real(&[
            vec![-2.0, 0.0, 0.0, 0.0],
            vec![0.0, coef * co, coef * si, 0.0],
            vec![0.0, coef * si, -coef * co, 0.0],
            vec![0.0, 0.0, 0.0, 2.0],
        ])
        .unwrap()
    }
}

/// Random affine segment `(1 - t) A_0 + t A_1` between two draws of the
/// Gaussian ensemble.
pub fn random_segment<R: Rng>(
    rng: &mut R,
    field: FieldCase,
    n: usize,
) -> impl Fn(f64) -> SelfAdjointOperator + Sync {
    let a0 = random_self_adjoint(rng, field, n);
    let a1 = random_self_adjoint(rng, field, n);
    move |t: f64| SelfAdjointOperator::combine(1.0 - t, &a0, t, &a1)
}

// --- family files ----------------------------------------------------------

fn parse_grid_kind(v: &serde_json::Value) -> Result<GridKind> {
    match v.get("kind").and_then(|k| k.as_str()) {
        None | Some("closed") => Ok(GridKind::Closed),
        Some("sphere") => Ok(GridKind::Sphere),
        Some(other) => Err(Error::InvalidInput(format!("unknown grid kind {other:?}"))),
    }
}

fn stored_matrices<T: serde::de::DeserializeOwned>(v: &serde_json::Value) -> Result<T> {
    serde_json::from_value(v.clone())
        .map_err(|e| Error::InvalidInput(format!("bad matrices array: {e}")))
}

/// Loads a surface family: either `{"builtin": name, "params": {...}}` with
/// name in {"pauli_sphere", "block"}, or `{"grid": {"Nu", "Nv", "matrices",
/// "kind"?}}`. The grid override applies to builtins only.
pub fn load_surface_family(
    v: &serde_json::Value,
    grid_override: Option<(usize, usize)>,
) -> Result<SurfaceFamily> {
    let (nu, nv) = grid_override.unwrap_or(DEFAULT_SPHERE_GRID);
    if let Some(name) = v.get("builtin").and_then(|b| b.as_str()) {
        let params = v.get("params").cloned().unwrap_or(serde_json::json!({}));
        return match name {
            "pauli_sphere" => pauli_sphere(nu, nv),
            "block" => {
                let below: Vec<f64> = match params.get("below") {
                    Some(x) => stored_matrices(x)?,
                    None => vec![-2.0],
                };
                let above: Vec<f64> = match params.get("above") {
                    Some(x) => stored_matrices(x)?,
                    None => vec![2.0],
                };
                let k = match params.get("k") {
                    Some(x) => x.as_u64().ok_or_else(|| {
                        Error::InvalidInput("block parameter k must be an integer".into())
                    })? as usize,
                    None => below.len() + 1,
                };
                block_family(k, below, above, nu, nv)
            }
            other => Err(Error::InvalidInput(format!(
                "unknown builtin surface family {other:?}"
            ))),
        };
    }
    if let Some(grid) = v.get("grid") {
        let kind = parse_grid_kind(grid)?;
        let rows: Vec<Vec<SelfAdjointOperator>> = stored_matrices(
            grid.get("matrices")
                .ok_or_else(|| Error::InvalidInput("grid needs a matrices array".into()))?,
        )?;
        let family = SurfaceFamily::new_stored(kind, rows)?;
        let (want_u, want_v) = (
            grid.get("Nu").and_then(|x| x.as_u64()),
            grid.get("Nv").and_then(|x| x.as_u64()),
        );
        if want_u.is_some_and(|x| x as usize != family.nu)
            || want_v.is_some_and(|x| x as usize != family.nv)
        {
            return Err(Error::InvalidInput(
                "declared Nu/Nv do not match the matrices array".into(),
            ));
        }
        return Ok(family);
    }
    Err(Error::InvalidInput(
        "family file needs either a builtin name or a grid".into(),
    ))
}

/// Loads an open sampled path `{"grid": {"Nt", "matrices"}}`; sample `i`
/// sits at `t = i / (Nt - 1)`, endpoints included, no closure requirement.
pub fn load_path_samples(v: &serde_json::Value) -> Result<Vec<SelfAdjointOperator>> {
    let grid = v
        .get("grid")
        .ok_or_else(|| Error::InvalidInput("path file needs a grid".into()))?;
    let samples: Vec<SelfAdjointOperator> = stored_matrices(
        grid.get("matrices")
            .ok_or_else(|| Error::InvalidInput("path grid needs a matrices array".into()))?,
    )?;
    if samples.len() < 2 {
        return Err(Error::InvalidInput("need at least 2 path samples".into()));
    }
    let n = samples[0].n();
    let field = samples[0].field();
    if samples.iter().any(|a| a.n() != n || a.field() != field) {
        return Err(Error::InvalidInput(
            "path samples must share size and field".into(),
        ));
    }
    if grid
        .get("Nt")
        .and_then(|x| x.as_u64())
        .is_some_and(|x| x as usize != samples.len())
    {
        return Err(Error::InvalidInput(
            "declared Nt does not match the matrices array".into(),
        ));
    }
    Ok(samples)
}

/// Loads a loop family: `{"builtin": "real_loop_2x2"}` or
/// `{"grid": {"Nt", "matrices"}}`. The step override applies to builtins.
pub fn load_loop_family(
    v: &serde_json::Value,
    steps_override: Option<usize>,
) -> Result<LoopFamily> {
    let steps = steps_override.unwrap_or(DEFAULT_LOOP_STEPS);
    if let Some(name) = v.get("builtin").and_then(|b| b.as_str()) {
        return match name {
            "real_loop_2x2" => real_loop_2x2(steps),
            other => Err(Error::InvalidInput(format!(
                "unknown builtin loop family {other:?}"
            ))),
        };
    }
    if let Some(grid) = v.get("grid") {
        let samples: Vec<SelfAdjointOperator> = stored_matrices(
            grid.get("matrices")
                .ok_or_else(|| Error::InvalidInput("loop grid needs a matrices array".into()))?,
        )?;
        let family = LoopFamily::new_stored(samples)?;
        if grid
            .get("Nt")
            .and_then(|x| x.as_u64())
            .is_some_and(|x| x as usize != family.steps)
        {
            return Err(Error::InvalidInput(
                "declared Nt does not match the matrices array".into(),
            ));
        }
        return Ok(family);
    }
    Err(Error::InvalidInput(
        "loop file needs either a builtin name or a grid".into(),
    ))
}
