use std::collections::BTreeMap;

use num_complex::Complex64;
use qdouble::anyon::enumerate_anyons;
use qdouble::group::FiniteGroup;
use qdouble::hamiltonian::{
    build_massive6, build_refined, flavor_resolved_site, masses_from_couplings, resolve_masses, site_refined, Couplings,
};
use qdouble::lattice::build_torus;
use qdouble::operators::{OperatorBuilder, Region, SiteOperators};
use qdouble::QdError;

#[test]
fn s3_massive6_matches_projectors_and_refined() {
    let g = FiniteGroup::s3();
    let model = enumerate_anyons(&g).unwrap();
    let lat = build_torus(2, 2).unwrap();
    let site = lat.site_of(0).unwrap();
    let b = OperatorBuilder::new(&g, &lat, Region::site(&site, 6).unwrap()).unwrap();
    let ops = SiteOperators::new(&b, &site).unwrap();

    let mut masses: BTreeMap<String, f64> = model.anyons.iter().map(|a| (a.name.clone(), 0.0)).collect();
    masses.insert("D".into(), 1.0);
    let m = resolve_masses(&model, &masses).unwrap();
    let h = build_massive6(&b, &model, std::slice::from_ref(&site), &m).unwrap();
    let pd = ops.anyon_projector(&model, model.anyon("D").unwrap(), 0).unwrap();
    assert!(h.max_abs_diff(&pd).unwrap() < 1e-12);

    masses.remove("H");
    assert!(matches!(resolve_masses(&model, &masses), Err(QdError::Config(_))));

    // flavors with distinct energies: only the flavor-resolved form reproduces the refined one
    let couplings = Couplings { alpha: vec![0.0, 1.0, 2.0], beta: vec![0.0, 3.0, 5.0] };
    assert!(matches!(masses_from_couplings(&model, &couplings), Err(QdError::Config(_))));
    let refined = site_refined(&ops, &couplings).unwrap();
    let resolved = flavor_resolved_site(&ops, &model, &couplings).unwrap();
    assert!(refined.max_abs_diff(&resolved).unwrap() < 1e-12);

    // flux-only couplings keep every anyon at one energy
    let couplings = Couplings { alpha: vec![0.0; 3], beta: vec![0.5, 3.0, 5.0] };
    let m = masses_from_couplings(&model, &couplings).unwrap();
    let h = build_massive6(&b, &model, std::slice::from_ref(&site), &m).unwrap();
    assert!(h.max_abs_diff(&site_refined(&ops, &couplings).unwrap()).unwrap() < 1e-12);
}

#[test]
fn z2_torus_massive6_over_all_sites() {
    let g = FiniteGroup::cyclic(2).unwrap();
    let model = enumerate_anyons(&g).unwrap();
    let lat = build_torus(2, 2).unwrap();
    let b = OperatorBuilder::new(&g, &lat, Region::full(&lat, 2).unwrap()).unwrap();
    let couplings = Couplings { alpha: vec![0.0, 2.0], beta: vec![0.0, 3.0] };
    // abelian: every anyon sits in exactly one sector
    let m = masses_from_couplings(&model, &couplings).unwrap();
    let h6 = build_massive6(&b, &model, &lat.sites(), &m).unwrap();
    let refined = build_refined(&b, &couplings).unwrap();
    assert!(h6.max_abs_diff(&refined).unwrap() < 1e-12);
    assert!((h6.trace() - Complex64::new(refined.trace().re, 0.0)).norm() < 1e-9);
}
