use std::collections::BTreeSet;

use proptest::prelude::*;

use unital::aut::{are_isomorphic, automorphism_group, canonical_form, is_isomorphism, AutOptions};
use unital::design::IncidenceStructure;
use unital::gf::Field;
use unital::perm::{PermGroup, Permutation};

fn structure() -> impl Strategy<Value = IncidenceStructure> {
    (4usize..12).prop_flat_map(|n| {
        proptest::collection::btree_set(proptest::collection::btree_set(0..n, 2..4), 1..2 * n).prop_map(move |blocks| {
            let blocks: Vec<Vec<usize>> = blocks.into_iter().map(|b| b.into_iter().collect()).collect();
            IncidenceStructure::plain(n, blocks).unwrap()
        })
    })
}

fn with_shuffle() -> impl Strategy<Value = (IncidenceStructure, Vec<usize>)> {
    structure().prop_flat_map(|u| {
        let n = u.num_points();
        (Just(u), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certificate_ignores_labels((u, images) in with_shuffle()) {
        let g = Permutation::from_images(images).unwrap();
        let v = u.relabel(&g);
        let opts = AutOptions::default();
        prop_assert_eq!(canonical_form(&u, opts).unwrap().certificate, canonical_form(&v, opts).unwrap().certificate);
        let iso = are_isomorphic(&u, &v, opts).unwrap().unwrap();
        prop_assert!(is_isomorphism(&u, &v, &iso));
    }

    #[test]
    fn automorphisms_are_automorphisms(u in structure()) {
        let g = automorphism_group(&u, AutOptions::default()).unwrap();
        prop_assert!(g.generators().iter().all(|x| u.is_automorphism(x)));
        let order = g.order();
        let n = u.num_points() as u128;
        prop_assert_eq!((1..=n).product::<u128>() % order, 0);
    }

    #[test]
    fn extra_block_changes_certificate(u in structure(), a in 0usize..12, b in 0usize..12) {
        let n = u.num_points();
        let extra = BTreeSet::from([a % n, b % n]).into_iter().collect::<Vec<_>>();
        prop_assume!(extra.len() == 2 && !u.blocks().contains(&extra));
        let mut blocks = u.blocks().to_vec();
        blocks.push(extra);
        let v = IncidenceStructure::plain(n, blocks).unwrap();
        let opts = AutOptions::default();
        prop_assert_ne!(canonical_form(&u, opts).unwrap().certificate, canonical_form(&v, opts).unwrap().certificate);
    }

    #[test]
    fn group_order_matches_elements(images in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
                                    other in Just((0..6).collect::<Vec<usize>>()).prop_shuffle()) {
        let g = PermGroup::new(6, [Permutation::from_images(images).unwrap(), Permutation::from_images(other).unwrap()]).unwrap();
        let elements = g.elements();
        prop_assert_eq!(elements.len() as u128, g.order());
        prop_assert!(elements.iter().all(|x| g.contains(x)));
    }

    #[test]
    fn field_power_laws(q in prop::sample::select(vec![2u64, 4, 8, 9, 25, 27, 49, 64, 81, 121]), x in 0u32..121, n in 0u64..300) {
        let f = Field::of_order(q).unwrap();
        let a = f.element(x % f.order()).unwrap();
        let m = (f.order() - 1) as u64;
        if !a.is_zero() {
            prop_assert_eq!(f.pow(a, m), f.one());
            prop_assert_eq!(f.pow(a, n), f.pow(a, n % m));
        }
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }
}
