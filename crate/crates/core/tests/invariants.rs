use std::collections::BTreeMap;

use proptest::prelude::*;
use qdouble::anyon::{enumerate_anyons, total_quantum_dimension_sq};
use qdouble::group::FiniteGroup;
use qdouble::hamiltonian::{site_refined, Couplings};
use qdouble::io::group_from_json;
use qdouble::lattice::build_torus;
use qdouble::operators::{OperatorBuilder, Region, SiteOperators};
use qdouble::sectors::{anyon_to_sectors, energy_sectors, sector_to_anyons, splitting_diagram};
use qdouble::spectrum::{spectrum, SpectrumMode};

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..9).prop_map(|n| FiniteGroup::cyclic(n).unwrap()),
        (2usize..7).prop_map(|n| FiniteGroup::dihedral(n).unwrap()),
        (2usize..5).prop_map(|n| FiniteGroup::symmetric(n).unwrap()),
        Just(
            group_from_json(r#"{"name": "Q8", "generators": [[2, 3, 1, 0, 6, 7, 5, 4], [4, 5, 7, 6, 1, 0, 2, 3]]}"#)
                .unwrap()
        ),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn anyon_and_sector_bookkeeping(g in small_group()) {
        let model = enumerate_anyons(&g).unwrap();
        let n = g.order();
        prop_assert_eq!(total_quantum_dimension_sq(&model).unwrap(), n * n);
        prop_assert!(model.table.orthogonality_deviation() < 1e-9);

        let sectors = energy_sectors(&model, None).unwrap();
        prop_assert_eq!(sectors.iter().map(|s| s.dim).sum::<usize>(), n * n);
        for s in &sectors {
            prop_assert_eq!(s.dim, s.class_size * s.irrep_dim * s.irrep_dim);
            prop_assert!(!s.anyons.is_empty());
        }
        // the two directions of the anyon/sector correspondence agree
        for (ai, a) in model.anyons.iter().enumerate() {
            for (irrep, mult, _) in anyon_to_sectors(&model, a).unwrap() {
                let back = sector_to_anyons(&model, a.class, irrep).unwrap();
                prop_assert!(back.contains(&(ai, mult)));
            }
        }
        prop_assert!(splitting_diagram(&model, None).is_ok());
    }

    #[test]
    fn site_spectrum_is_sector_energies(n in 2usize..4, alpha in prop::collection::vec(-3i32..4, 3), beta in prop::collection::vec(-3i32..4, 3)) {
        let g = FiniteGroup::cyclic(n).unwrap();
        let lat = build_torus(2, 2).unwrap();
        let site = lat.site_of(0).unwrap();
        let b = OperatorBuilder::new(&g, &lat, Region::site(&site, n).unwrap()).unwrap();
        let ops = SiteOperators::new(&b, &site).unwrap();
        let couplings = Couplings {
            alpha: alpha[..n].iter().map(|&x| x as f64).collect(),
            beta: beta[..n].iter().map(|&x| x as f64).collect(),
        };
        let report = spectrum(&site_refined(&ops, &couplings).unwrap(), SpectrumMode::Full).unwrap();
        let mut expected: BTreeMap<i64, usize> = BTreeMap::new();
        for class in 0..n {
            for irrep in 0..n {
                *expected.entry(couplings.sector_energy(irrep, class) as i64).or_default() += n.pow(4);
            }
        }
        let got: BTreeMap<i64, usize> = report.levels.iter().map(|l| (l.eigenvalue.round() as i64, l.multiplicity)).collect();
        prop_assert_eq!(got, expected);
    }
}
