use hgd_core::decomp::validate;
use hgd_core::hardness::{reduce_3sat, witness_ghd, CnfFormula, UNVERIFIED_TAG};
use hgd_core::random;
use hgd_core::rational::int;
use hgd_core::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn satisfiable_side(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (phi, sigma) = random::satisfiable_cnf(&mut r, n, m);
        let (h, lay) = reduce_3sat(&phi).unwrap();

        let positions = (2 * n + 3) * m;
        prop_assert_eq!(lay.s.len(), 6 * (positions + 3));
        prop_assert_eq!(h.num_edges(), 32 + (positions - 1) * 7 + n + 4);
        prop_assert_eq!(h.num_vertices(), lay.s.len() + 2 * positions + 2 * n + 2 + 16);

        let s = h.vertex_set(&lay.s).unwrap();
        prop_assert!(h.edges().iter().all(|e| !s.is_subset(&e.vertices)));
        for &(i, j) in &lay.positions[..positions - 1] {
            for k in 1..=3 {
                let a = &h.edge(h.edge_id(&format!("e_{k}_0_{i}_{j}")).unwrap()).vertices;
                let b = &h.edge(h.edge_id(&format!("e_{k}_1_{i}_{j}")).unwrap()).vertices;
                let (a, b) = (a.intersection(&s), b.intersection(&s));
                prop_assert!(a.is_disjoint(&b));
                prop_assert_eq!(a.union(&b), s.clone());
            }
        }

        let d = witness_ghd(&h, &lay, &sigma).unwrap();
        prop_assert!(validate(&h, &d, &int(2)).unwrap().is_empty());
        prop_assert_eq!(d.width(), int(2));
        prop_assert_eq!(d.len(), 3 + 1 + (positions - 1) + 1 + 3);
        prop_assert_eq!(lay.status(), "satisfiable");
    }
}

#[test]
fn unsatisfiable_is_tagged_and_has_no_witness() {
    let mut clauses = Vec::new();
    for bits in 0..8u32 {
        clauses.push([0, 1, 2].map(|i| (i + 1, bits >> i & 1 == 1)));
    }
    let phi = CnfFormula::new(3, clauses).unwrap();
    assert!(phi.find_model().is_none());
    let (h, lay) = reduce_3sat(&phi).unwrap();
    assert_eq!(lay.status(), UNVERIFIED_TAG);
    assert!(lay.to_text().contains(UNVERIFIED_TAG));
    for bits in 0..8u32 {
        let sigma: Vec<bool> = (0..3).map(|i| bits >> i & 1 == 1).collect();
        assert!(matches!(witness_ghd(&h, &lay, &sigma), Err(Error::Falsified { .. })));
    }
}
