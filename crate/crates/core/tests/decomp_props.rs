mod common;

use common::hypergraphs;
use hgd_core::augment::{self, solve_ghd, GhdMode, GhdOptions};
use hgd_core::decomp::{bag_maximalize, check_c_bounded, check_weak_special, lift_to_original, validate, DecompKind};
use hgd_core::hd::solve_hd;
use hgd_core::oracle::brute_value;
use hgd_core::properties;
use hgd_core::rational::int;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maximalize_idempotent(h in hypergraphs(7, 6), kind in 0usize..3) {
        let kind = [DecompKind::Hd, DecompKind::Ghd, DecompKind::Fhd][kind];
        let (w, d) = brute_value(&h, kind).unwrap();
        let m = bag_maximalize(&h, &d).unwrap();
        prop_assert_eq!(m.width(), w.clone());
        // Maximalization may break the HD special condition; the result
        // is checked as a GHD/FHD.
        let as_kind = if kind == DecompKind::Hd { m.clone().with_kind(DecompKind::Ghd) } else { m.clone() };
        prop_assert!(validate(&h, &as_kind, &w).unwrap().is_empty());
        let mm = bag_maximalize(&h, &m).unwrap();
        prop_assert_eq!(mm.nodes(), m.nodes());
    }

    #[test]
    fn hd_implies_weak_special(h in hypergraphs(7, 6)) {
        for k in 1..=3 {
            if let Some(d) = solve_hd(&h, k).unwrap() {
                prop_assert!(validate(&h, &d, &int(k as i64)).unwrap().is_empty());
                prop_assert!(check_weak_special(&h, &d).is_empty());
                prop_assert!(check_c_bounded(&h, &d, 0));
            }
        }
    }

    #[test]
    fn lift_keeps_bags_width_validity(h in hypergraphs(7, 6)) {
        prop_assume!(properties::iwidth(&h) <= 2);
        for k in 1..=3usize {
            let set = augment::f_bip(&h, k, augment::DEFAULT_SUBEDGE_BUDGET).unwrap();
            let aug = augment::augment(&h, &set);
            if let Some(d) = solve_hd(&aug.hypergraph, k).unwrap() {
                let lifted = lift_to_original(&h, &aug, &d).unwrap().with_kind(DecompKind::Ghd);
                prop_assert_eq!(lifted.width(), d.width());
                for (a, b) in lifted.nodes().iter().zip(d.nodes()) {
                    prop_assert_eq!(&a.bag, &b.bag);
                }
                prop_assert!(validate(&h, &lifted, &int(k as i64)).unwrap().is_empty());
                let direct = solve_ghd(&h, k, GhdMode::Bip, &GhdOptions::default()).unwrap();
                prop_assert!(direct.decomposition.is_some());
            }
        }
    }
}
