use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polyforge::constructions::verify_tgood;
use polyforge::field::{Fe, FieldSpec};
use polyforge::io::{to_json_string, PolygonFile};
use polyforge::permgroup::{collineation_generators, OrbitMultiset, PermGroup};
use polyforge::polygon::{build, build_w3, Family, IncidencePolygon};
use polyforge::search::{enumerate_with_group, SearchOptions};

const ORDERS: [u32; 9] = [2, 3, 4, 5, 7, 8, 9, 16, 25];

fn w33() -> &'static (IncidencePolygon, PermGroup) {
    static CELL: OnceLock<(IncidencePolygon, PermGroup)> = OnceLock::new();
    CELL.get_or_init(|| {
        let w = build_w3(3).unwrap();
        let g = collineation_generators(&w).unwrap();
        (w, g)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_operations_form_a_field(qi in 0..ORDERS.len(), a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
        let f = FieldSpec::of_order(ORDERS[qi]).unwrap();
        let [a, b, c] = [a, b, c].map(|x| Fe((x % f.q()) as u16));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.from_int(1));
        }
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
    }

    #[test]
    fn polygon_files_rebuild_the_same_polygon(which in 0usize..6) {
        let (family, q) = [(Family::Pg2, 2), (Family::Pg2, 4), (Family::Pg2, 9), (Family::W3, 2), (Family::W3, 4), (Family::Hexagon, 2)][which];
        let p = build(family, q).unwrap();
        let text = to_json_string(&PolygonFile::from_polygon(&p));
        let back = serde_json::from_str::<PolygonFile>(&text).unwrap().into_polygon("mem").unwrap();
        prop_assert_eq!(back.points(), p.points());
        prop_assert_eq!(to_json_string(&PolygonFile::from_polygon(&back)), text);
    }

    #[test]
    fn orbit_multisets_print_and_parse(lengths in proptest::collection::vec(1usize..50, 0..12)) {
        let m = OrbitMultiset::from_lengths(lengths.iter().copied());
        prop_assert_eq!(m.total(), lengths.iter().sum::<usize>());
        prop_assert_eq!(OrbitMultiset::parse(&m.to_string()), Some(m));
    }

    #[test]
    fn permutation_inverse_reverses_composition(seed in any::<u64>()) {
        let (_, g) = w33();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = g.random_element(&mut rng);
        let b = g.random_word(&mut rng, 6);
        prop_assert_eq!(a.then(&b).inverse(), b.inverse().then(&a.inverse()));
        prop_assert!(a.then(&a.inverse()).is_identity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn minimal_image_is_constant_on_orbits(seed in any::<u64>(), mask in any::<u64>()) {
        let (w, g) = w33();
        let s: Vec<usize> = (0..64).filter(|i| mask >> i & 1 == 1).map(|i| (i * 5 + 3) % w.num_elements()).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = g.random_element(&mut rng);
        prop_assert!(g.contains(&x));
        let moved: Vec<usize> = x.image_of_set(&s.iter().map(|&e| e as u32).collect::<Vec<_>>()).into_iter().map(|e| e as usize).collect();
        prop_assert_eq!(g.minimal_image(&s).unwrap(), g.minimal_image(&moved).unwrap());
    }

    #[test]
    fn orbit_search_outputs_are_good_and_invariant(seed in any::<u64>()) {
        let (w, g) = w33();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = g.random_element(&mut rng);
        let h = PermGroup::new(g.degree(), vec![x.clone()]).unwrap();
        prop_assume!(h.order() > 2);
        let out = enumerate_with_group(w, &h, &SearchOptions::default()).unwrap();
        prop_assert!(out.complete);
        for s in &out.solutions {
            prop_assert!(verify_tgood(w, s).valid);
            let e: Vec<u32> = s.elements(w.num_points()).into_iter().map(|e| e as u32).collect();
            prop_assert_eq!(x.image_of_set(&e), e);
        }
    }
}
