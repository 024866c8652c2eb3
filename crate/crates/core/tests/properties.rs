use proptest::prelude::*;

use nsqs_core::catalog::{bool8, catalog_get, sqs10_uniform, sqs8_uniform, CATALOG_NAMES};
use nsqs_core::design::all_pairs;
use nsqs_core::{
    bounds_profile, classify, difference_census, doubling_b, pair_census, parse_design, parse_rotational_spec,
    rotational_expand, serialize_design, serialize_rotational_spec, validate_bounds, verify_steiner, NestedDesign,
    Point,
};

fn small_designs() -> Vec<NestedDesign> {
    vec![bool8(), sqs8_uniform(), sqs10_uniform(), doubling_b(&sqs8_uniform()).unwrap()]
}

/// Re-split blocks according to `choices` (taken cyclically).
fn resplit(d: &NestedDesign, choices: &[u8]) -> NestedDesign {
    let mut out = d.clone();
    for (i, q) in d.quads().iter().enumerate() {
        let s = choices[i % choices.len()] as usize % 3;
        out = out.repartition(i, q.splits()[s]).unwrap();
    }
    out
}

fn permutation(v: u32, keys: &[u64]) -> Vec<u32> {
    let mut idx: Vec<u32> = (0..v).collect();
    idx.sort_by_key(|&i| (keys[i as usize % keys.len()].wrapping_mul(i as u64 + 1), i));
    idx
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resplits_stay_steiner_and_within_bounds(which in 0usize..4, choices in prop::collection::vec(any::<u8>(), 1..64)) {
        let d = resplit(&small_designs()[which], &choices);
        prop_assert!(verify_steiner(&d).passed);
        let c = pair_census(&d);
        prop_assert_eq!(c.total(), NestedDesign::total_pair_slots_for(d.v()));
        prop_assert!(validate_bounds(&d).unwrap().is_empty());
    }

    #[test]
    fn census_multiset_is_relabel_invariant(which in 0usize..4, choices in prop::collection::vec(any::<u8>(), 1..32),
                                           keys in prop::collection::vec(any::<u64>(), 1..16)) {
        let d = resplit(&small_designs()[which], &choices);
        let perm = permutation(d.v(), &keys);
        let r = d.relabel(|p| Point(perm[p.0 as usize])).unwrap();
        prop_assert!(verify_steiner(&r).passed);
        let (a, b) = (pair_census(&d), pair_census(&r));
        prop_assert_eq!(a.histogram(), b.histogram());
        for pair in all_pairs(d.v()) {
            let mapped = nsqs_core::Pair::new(perm[pair.lo().0 as usize], perm[pair.hi().0 as usize]).unwrap();
            prop_assert_eq!(a.count(pair), b.count(mapped));
        }
        let (ka, kb) = (classify(&d), classify(&r));
        prop_assert_eq!((ka.kind, ka.nd_pairs, ka.mu_min, ka.mu_max), (kb.kind, kb.nd_pairs, kb.mu_min, kb.mu_max));
    }

    #[test]
    fn serialize_then_parse_is_identity(which in 0usize..4, choices in prop::collection::vec(any::<u8>(), 1..32)) {
        let d = resplit(&small_designs()[which], &choices);
        prop_assert_eq!(parse_design(&serialize_design(&d)).unwrap(), d);
    }

    #[test]
    fn rotational_resplits_match_difference_census(name in prop::sample::select(vec!["ro20", "ro26", "bool32"]),
                                                   choices in prop::collection::vec(any::<u8>(), 1..32)) {
        let spec = catalog_get(name).unwrap().rotational_spec().unwrap().unwrap();
        let quads = spec.base_quads();
        let splits = quads.iter().enumerate().map(|(i, q)| q.splits()[choices[i % choices.len()] as usize % 3]).collect();
        // some splits are not fixed by a block's stabilizer; those specs are rejected
        if let Ok(s) = spec.with_splits(splits) {
            if let (Ok(dc), Ok(d)) = (difference_census(&s), rotational_expand(&s)) {
                let c = pair_census(&d);
                for pair in all_pairs(d.v()) {
                    prop_assert_eq!(dc.predicted(pair), c.count(pair) as u64);
                }
            }
        }
    }

    #[test]
    fn bounds_hold_for_admissible_orders(k in 1u64..60, r in prop::sample::select(vec![2u64, 4])) {
        let v = 6 * k + r;
        let b = bounds_profile(v).unwrap();
        prop_assert!(b.min_mult_upper >= 1);
        prop_assert!(b.max_mult_lower <= b.max_mult);
        prop_assert!(b.min_nd_pairs <= b.max_nd_pairs);
        prop_assert_eq!(b.max_nd_pairs, v * (v - 1) / 2);
        prop_assert_eq!(b.total_pair_slots, v * (v - 1) * (v - 2) / 12);
        // a census with every ND-pair at max multiplicity needs at least min_nd pairs
        prop_assert!(b.min_nd_pairs * b.max_mult >= b.total_pair_slots);
    }
}

#[test]
fn catalog_specs_round_trip() {
    for name in CATALOG_NAMES {
        let entry = catalog_get(name).unwrap();
        if let Some(spec) = entry.rotational_spec().unwrap() {
            let text = serialize_rotational_spec(&spec);
            assert_eq!(parse_rotational_spec(&text).unwrap(), spec, "{name}");
        }
        let d = entry.design().unwrap();
        assert_eq!(parse_design(&serialize_design(&d)).unwrap(), d, "{name}");
    }
}
