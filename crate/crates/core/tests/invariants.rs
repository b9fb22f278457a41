//! Cross-module invariants that sit above any single unit: grid-refinement
//! behaviour of the two Chern routes, additivity of band Chern numbers,
//! integrality on the builtin families, and stratum preservation under the
//! retraction.

use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use strata_core::curvature::{chern_fhs, chern_via_form, GridKind, SurfaceFamily};
use strata_core::families::{block_family, pauli_sphere};
use strata_core::schubert::FieldCase;
use strata_core::spectral::{
    jacobi_eigh, normalize_to_sphere, random_self_adjoint, retract_phi, stratum_membership,
    GapTolerance, SelfAdjointOperator,
};

#[test]
fn grid_refinement_shrinks_form_fhs_discrepancy() {
    let tol = GapTolerance::default();
    let mut errors = Vec::new();
    for (nu, nv) in [(25, 13), (50, 26), (100, 52)] {
        let fam = pauli_sphere(nu, nv).unwrap();
        let form = chern_via_form(&fam, 1, &tol).unwrap();
        let fhs = chern_fhs(&fam, 1).unwrap();
        assert_eq!(fhs, -1);
        errors.push((form - fhs as f64).abs());
    }
    assert!(errors[1] <= errors[0] + 1e-3, "{errors:?}");
    assert!(errors[2] <= errors[1] + 1e-3, "{errors:?}");
}

#[test]
fn integrality_of_builtin_families_at_default_grids() {
    let tol = GapTolerance::default();

    let fam = pauli_sphere(200, 100).unwrap();
    let form = chern_via_form(&fam, 1, &tol).unwrap();
    assert!((form - form.round()).abs() < 0.05);
    assert_eq!(form.round() as i64, chern_fhs(&fam, 1).unwrap());

    let fam = block_family(2, vec![-2.0], vec![2.0], 200, 100).unwrap();
    let form = chern_via_form(&fam, 2, &tol).unwrap();
    assert!((form - form.round()).abs() < 0.05);
    assert_eq!(form.round() as i64, chern_fhs(&fam, 2).unwrap());
}

/// Spin-1 moment matrices.
fn spin1(axis: usize) -> Array2<Complex64> {
    let z = Complex64::new(0.0, 0.0);
    let r = Complex64::new(2f64.sqrt().recip(), 0.0);
    let i = Complex64::new(0.0, 2f64.sqrt().recip());
    match axis {
        0 => Array2::from_shape_vec((3, 3), vec![z, r, z, r, z, r, z, r, z]).unwrap(),
        1 => Array2::from_shape_vec((3, 3), vec![z, -i, z, i, z, -i, z, i, z]).unwrap(),
        _ => Array2::from_shape_fn((3, 3), |(a, b)| {
            if a == b {
                Complex64::new(1.0 - a as f64, 0.0)
            } else {
                z
            }
        }),
    }
}

fn spin1_sphere(nu: usize, nv: usize) -> SurfaceFamily {
    let field = |u: f64, v: f64| {
        let m = spin1(0).mapv(|z| z * (u.sin() * v.cos()))
            + spin1(1).mapv(|z| z * (u.sin() * v.sin()))
            + spin1(2).mapv(|z| z * u.cos());
        SelfAdjointOperator::new(FieldCase::Hermitian, m).unwrap()
    };
    SurfaceFamily::new_analytic(GridKind::Sphere, nu, nv, Box::new(field), None).unwrap()
}

/// Chern numbers of nested eigenbundles add up band by band, consistently
/// across the two computation routes.
#[test]
fn band_chern_additivity_on_spin1() {
    let tol = GapTolerance::default();
    let fam = spin1_sphere(80, 40);
    let form1 = chern_via_form(&fam, 1, &tol).unwrap();
    let form2 = chern_via_form(&fam, 2, &tol).unwrap();
    let fhs1 = chern_fhs(&fam, 1).unwrap();
    let fhs2 = chern_fhs(&fam, 2).unwrap();

    assert_eq!(form1.round() as i64, fhs1);
    assert_eq!(form2.round() as i64, fhs2);
    assert!((form1 - fhs1 as f64).abs() < 0.05);
    assert!((form2 - fhs2 as f64).abs() < 0.05);

    // middle band as the difference of nested bundles, same on both routes
    let middle_fhs = fhs2 - fhs1;
    let middle_form = form2 - form1;
    assert_eq!(middle_form.round() as i64, middle_fhs);

    // the lowest spin-1 band over the sphere is twice the Pauli value
    assert_eq!(fhs1, -2);
}

#[test]
fn retraction_preserves_lower_nondegeneracy() {
    let tol = GapTolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5150);
    let mut done = 0;
    while done < 25 {
        let n = 6;
        let k = 3;
        let a = normalize_to_sphere(&random_self_adjoint(&mut rng, FieldCase::Hermitian, n))
            .unwrap();
        let s = jacobi_eigh(&a).unwrap();
        if s.gap(k) <= tol.threshold(s.spread()) {
            continue;
        }
        let before: Vec<bool> = (1..=k)
            .map(|j| stratum_membership(&a, j, &tol).unwrap().in_sigma)
            .collect();
        let r = retract_phi(&a, k, &tol).unwrap();
        let after: Vec<bool> = (1..=k)
            .map(|j| stratum_membership(&r, j, &tol).unwrap().in_sigma)
            .collect();
        assert_eq!(before, after, "nondegeneracy below k changed");
        done += 1;
    }
}

#[test]
fn retraction_keeps_planted_degeneracy_below_k() {
    let tol = GapTolerance::default();
    // lambda_1 = lambda_2 planted below k = 3; the retraction must keep it
    let a = normalize_to_sphere(&SelfAdjointOperator::diagonal(
        FieldCase::Real,
        &[-1.0, -1.0, 0.2, 0.9, 1.5],
    ))
    .unwrap();
    let k = 3;
    let before = stratum_membership(&a, 1, &tol).unwrap();
    assert!(!before.in_sigma);
    let r = retract_phi(&a, k, &tol).unwrap();
    let after = stratum_membership(&r, 1, &tol).unwrap();
    assert!(!after.in_sigma);
    assert!(stratum_membership(&r, k, &tol).unwrap().in_w_k);
}
