use chargeneg_core::cumulants::wick_cumulants;
use chargeneg_core::expansion::{evaluate_expansion, negativity_coefficients, rational};
use chargeneg_core::gaussian::{blocks, thermal_correlations};
use chargeneg_core::harness::{build_hamiltonian, case_ensemble, random_partition};
use chargeneg_core::negativity::CovariancePipeline;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn negativity_is_symmetric_and_non_negative(seed in 0u64..10_000, n in 4usize..14, beta in 0.05f64..8.0) {
        let h = build_hamiltonian(&case_ensemble(seed), n, seed).unwrap();
        let p = random_partition(n, seed).unwrap();
        let c = thermal_correlations(&h, beta, 0.0).unwrap();
        let ab = CovariancePipeline::new(&c, &p).unwrap();
        let ba = CovariancePipeline::new(&c, &p.swapped()).unwrap();
        let e = ab.log_negativity().unwrap().value;
        prop_assert!(e >= -1e-12);
        prop_assert!((e - ba.log_negativity().unwrap().value).abs() < 1e-10);
        for n_e in [2, 4] {
            let x = ab.renyi_negativity(n_e).unwrap().value;
            prop_assert!((x - ba.renyi_negativity(n_e).unwrap().value).abs() < 1e-10);
        }
        // E_ne is non-increasing in the even index.
        prop_assert!(ab.renyi_negativity(4).unwrap().value <= ab.renyi_negativity(2).unwrap().value + 1e-10);
    }

    #[test]
    fn replica_limit_expansion_vanishes_at_infinite_temperature(seed in 0u64..10_000, n in 4usize..30) {
        let h = build_hamiltonian(&case_ensemble(seed), n, seed).unwrap();
        let p = random_partition(n, seed).unwrap();
        let c = thermal_correlations(&h, 0.0, 0.0).unwrap();
        let cums = wick_cumulants(&blocks(&c, &p).unwrap()).unwrap();
        let orders = [negativity_coefficients(2).unwrap(), negativity_coefficients(4).unwrap()];
        let sums = evaluate_expansion(&orders, &rational(1, 1), &cums).unwrap();
        prop_assert!(sums.through(4).unwrap().abs() < 1e-10);
        prop_assert!(CovariancePipeline::new(&c, &p).unwrap().log_negativity().unwrap().value.abs() < 1e-10);
    }

    #[test]
    fn cumulants_are_symmetric_under_region_swap(seed in 0u64..10_000, n in 4usize..20, beta in 0.05f64..8.0) {
        let h = build_hamiltonian(&case_ensemble(seed), n, seed).unwrap();
        let p = random_partition(n, seed).unwrap();
        let c = thermal_correlations(&h, beta, 0.0).unwrap();
        let ab = wick_cumulants(&blocks(&c, &p).unwrap()).unwrap();
        let ba = wick_cumulants(&blocks(&c, &p.swapped()).unwrap()).unwrap();
        for ((a, b), v) in ab.iter() {
            prop_assert!((v - ba.get(b, a).unwrap()).abs() < 1e-10);
        }
        // Variances are non-negative.
        prop_assert!(ab.get(2, 0).unwrap() >= -1e-12 && ab.get(0, 2).unwrap() >= -1e-12);
    }
}

#[test]
fn coefficient_tables_are_symmetric() {
    for m in [2, 4, 6, 8] {
        let c = negativity_coefficients(m).unwrap();
        for (&(a, b), f) in c.terms() {
            assert_eq!(c.get(b, a), Some(f), "M = {m}, ({a}, {b})");
        }
        // Single-region terms drop out in the replica limit.
        let lim = c.at(&rational(1, 1)).unwrap();
        assert!(lim.get(m, 0).unwrap().is_zero());
    }
}
