use std::collections::BTreeSet;

use polyforge::constructions::{verify_tgood, GoodStructure};
use polyforge::permgroup::{collineation_generators, PermGroup, Permutation};
use polyforge::polygon::{build_pg2, build_w3, IncidencePolygon};
use polyforge::search::{
    brute_force_tgood, classify_solutions, enumerate_one_good, enumerate_with_group, CheckpointedSearch, SearchOptions,
};

fn all_structures(p: &IncidencePolygon, t: u32) -> Vec<GoodStructure> {
    let opts = SearchOptions { t, symmetry_breaking: false, include_full: true, ..Default::default() };
    let out = enumerate_one_good(p, &opts).unwrap();
    assert!(out.complete);
    out.solutions
}

#[test]
fn search_equals_brute_force() {
    for p in [build_pg2(2).unwrap(), build_pg2(3).unwrap(), build_w3(2).unwrap()] {
        for t in 1..=2 {
            let mut brute = brute_force_tgood(&p, t).unwrap();
            brute.sort_by(|a, b| (a.size(), &a.points, &a.lines).cmp(&(b.size(), &b.points, &b.lines)));
            let found = all_structures(&p, t);
            assert_eq!(found, brute, "{} q={} t={t}", p.family(), p.q());
            assert!(found.iter().all(|g| verify_tgood(&p, g).valid));
        }
    }
}

#[test]
fn pg23_sizes_are_q_plus_one_and_two() {
    let p = build_pg2(3).unwrap();
    let sizes: BTreeSet<usize> = all_structures(&p, 1).iter().map(|g| g.size()).filter(|&s| s < 13).collect();
    assert_eq!(sizes, [4, 5].into());
}

#[test]
fn symmetry_breaking_keeps_every_class() {
    let w = build_w3(3).unwrap();
    let g = collineation_generators(&w).unwrap();
    let mut images = Vec::new();
    for symmetry_breaking in [true, false] {
        let out = enumerate_one_good(&w, &SearchOptions { symmetry_breaking, ..Default::default() }).unwrap();
        assert_eq!(out.symmetry_breaking, symmetry_breaking);
        let classes = classify_solutions(&w, &out.solutions, &g, &[], None).unwrap();
        let mins: BTreeSet<_> = classes.into_iter().map(|c| c.representative).collect();
        images.push(mins);
    }
    assert_eq!(images[0].len(), 13);
    assert_eq!(images[0], images[1]);
}

#[test]
fn orbit_mode_finds_a_subset_of_plain_search() {
    let w = build_w3(3).unwrap();
    let g = collineation_generators(&w).unwrap();
    let all = all_structures(&w, 1);
    // an element of order 3
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
    let h = loop {
        let x = g.random_element(&mut rng);
        let x3 = x.then(&x).then(&x);
        if !x.is_identity() && x3.is_identity() {
            break PermGroup::new(80, vec![x]).unwrap();
        }
    };
    assert_eq!(h.order(), 3);
    let opts = SearchOptions { include_full: true, ..Default::default() };
    let fixed = enumerate_with_group(&w, &h, &opts).unwrap();
    assert!(!fixed.solutions.is_empty());
    for s in &fixed.solutions {
        assert!(all
            .binary_search_by(|a| (a.size(), &a.points, &a.lines).cmp(&(s.size(), &s.points, &s.lines)))
            .is_ok());
        let e: Vec<u32> = s.elements(40).iter().map(|&x| x as u32).collect();
        assert_eq!(h.generators()[0].image_of_set(&e), e);
    }
    let expected = all
        .iter()
        .filter(|s| {
            let e: Vec<u32> = s.elements(40).iter().map(|&x| x as u32).collect();
            h.generators()[0].image_of_set(&e) == e
        })
        .count();
    assert_eq!(fixed.solutions.len(), expected);
}

#[test]
fn orbit_mode_rejects_non_collineations() {
    let p = build_pg2(2).unwrap();
    let mut images: Vec<u32> = (0..14).collect();
    images.swap(0, 1);
    let bad = PermGroup::new(14, vec![Permutation::from_images(images).unwrap()]).unwrap();
    assert!(enumerate_with_group(&p, &bad, &SearchOptions::default()).is_err());
}

#[test]
fn checkpoint_resume_gives_the_same_solutions() {
    let w = build_w3(3).unwrap();
    let dir = std::env::temp_dir().join(format!("polyforge-ckpt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w33.json");
    let _ = std::fs::remove_file(&path);
    let opts = SearchOptions { split_depth: 6, ..Default::default() };
    let reference = enumerate_one_good(&w, &opts).unwrap().solutions;
    {
        let s = CheckpointedSearch::new(&w, &opts, None, Some(&path)).unwrap();
        assert!(s.pending() > 4);
    }
    // run a partial job by limiting nodes, then resume without the limit
    let limited = SearchOptions { node_limit: Some(2000), ..opts.clone() };
    let mut first = CheckpointedSearch::new(&w, &limited, None, Some(&path)).unwrap();
    let partial = first.run(2).unwrap();
    assert!(!partial.complete);
    let mut second = CheckpointedSearch::new(&w, &opts, None, Some(&path)).unwrap();
    let done = second.run(8).unwrap();
    assert!(done.complete);
    assert_eq!(done.solutions, reference);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn dual_classes_match_stabilizers_in_the_extended_group() {
    use polyforge::permgroup::{w3_duality, StabilizerMethod};
    use polyforge::search::merge_dual_pairs;
    let w = build_w3(2).unwrap();
    let g = collineation_generators(&w).unwrap();
    let d = w3_duality(&w).unwrap();
    let mut gens = g.generators().to_vec();
    gens.push(d.clone());
    let full = PermGroup::new(30, gens).unwrap();
    let out = enumerate_one_good(&w, &SearchOptions::default()).unwrap();
    let classes = classify_solutions(&w, &out.solutions, &g, &[], Some(&d)).unwrap();
    for c in &classes {
        let e = c.representative.elements(15);
        let s = full.set_stabilizer(&e, StabilizerMethod::Backtrack).unwrap();
        assert_eq!(Some(s.order()), c.full_stabilizer_order);
        let j = c.dual_class.unwrap();
        assert_eq!(classes[j].dual_class, Some(classes.iter().position(|x| x == c).unwrap()));
    }
    let merged = merge_dual_pairs(&classes);
    let mut seen = std::collections::HashSet::new();
    for c in &merged {
        let orbit = full.set_orbit(&c.representative.elements(15), 1 << 20).unwrap();
        assert!(orbit.iter().all(|x| seen.insert(x.clone())));
    }
}

#[test]
fn weighted_propagation_matches_naive_rescans() {
    use polyforge::search::{naive_propagate, Model, SearchState, Status};
    use rand::Rng;
    let w = build_w3(3).unwrap();
    let g = collineation_generators(&w).unwrap();
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9);
    for _ in 0..20 {
        let h = PermGroup::new(80, vec![g.random_element(&mut rng)]).unwrap();
        let all: Vec<usize> = (0..80).collect();
        let orbits = h.orbits(&all);
        let mut var_of = vec![0u32; 80];
        for (i, o) in orbits.iter().enumerate() {
            for &e in o {
                var_of[e] = i as u32;
            }
        }
        let adjacency = w.adjacency();
        let adj: Vec<Vec<(u32, u32)>> = orbits
            .iter()
            .map(|o| {
                let mut m = std::collections::BTreeMap::new();
                for &u in &adjacency[o[0]] {
                    *m.entry(var_of[u as usize]).or_insert(0u32) += 1;
                }
                m.into_iter().collect()
            })
            .collect();
        let model = Model::new(1, adj);
        for _ in 0..50 {
            let seed: Vec<Status> = (0..model.len())
                .map(|_| match rng.gen_range(0..8) {
                    0 => Status::In,
                    1 => Status::Out,
                    _ => Status::Undecided,
                })
                .collect();
            let mut st = SearchState::new(&model);
            for (v, &s) in seed.iter().enumerate() {
                if s != Status::Undecided {
                    st.assign(v, s).unwrap();
                }
            }
            let fast = st.propagate().ok().map(|_| st.status().to_vec());
            assert_eq!(fast, naive_propagate(&model, &seed));
        }
    }
}
