use kltgeom::arrangements::{build_coble_lattice_example, check_pair, dual_hesse_pair};
use kltgeom::cohom::{h1_z2, no_relation_search, semidirect_order2_classes, small_groups, IntMatrix2, DEFAULT_MAX_BITS};
use kltgeom::models::sample::{random_isometry, random_point};
use kltgeom::models::{distance, Isometry, IsometryKind};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn shuffled(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn h1_is_invariant_under_relabeling(group in 0usize..14, twist in 0usize..8, seed in any::<u64>()) {
        let groups = small_groups();
        let g = &groups[group].1;
        let autos = g.involutive_automorphisms();
        let sigma = autos[twist % autos.len()].clone();
        let a = g.clone().with_sigma(sigma).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = a.relabel(&shuffled(&mut rng, a.order())).unwrap();
        prop_assert_eq!(h1_z2(&a).count, h1_z2(&b).count);
        prop_assert_eq!(semidirect_order2_classes(&a).count, semidirect_order2_classes(&b).count);
    }

    #[test]
    fn relation_search_is_monotone(x in 1i64..4, y in 1i64..4, l in 2usize..7) {
        let gens = [IntMatrix2::from_i64([[1, x], [0, 1]]), IntMatrix2::from_i64([[1, 0], [y, 1]])];
        let long = no_relation_search(&gens, l, None, DEFAULT_MAX_BITS).unwrap();
        let short = no_relation_search(&gens, l - 1, None, DEFAULT_MAX_BITS).unwrap();
        if long.free_up_to_l {
            prop_assert!(short.free_up_to_l);
        }
        if let Some(w) = &short.witness {
            prop_assert_eq!(long.witness.as_ref().map(Vec::len), Some(w.len()));
        }
    }

    #[test]
    fn classification_is_conjugation_invariant(seed in any::<u64>(), n in 2usize..5, t in 0.2f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Isometry::boost(n, 1, t);
        let h = random_isometry(&mut rng, n, 3, 1.0);
        let conj = h.compose(&g).compose(&h.inverse());
        let a = g.classify();
        let b = conj.classify();
        prop_assert_eq!(a.kind, IsometryKind::Hyperbolic);
        prop_assert_eq!(b.kind, a.kind);
        prop_assert!((a.translation_length - t).abs() < 1e-9);
        prop_assert!((b.translation_length - t).abs() < 1e-7);
    }

    #[test]
    fn distance_is_a_metric(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_point(&mut rng, n, 4.0);
        let y = random_point(&mut rng, n, 4.0);
        let z = random_point(&mut rng, n, 4.0);
        let dxy = distance(&x, &y).unwrap();
        prop_assert!(distance(&x, &x).unwrap().abs() < 1e-12);
        prop_assert!((dxy - distance(&y, &x).unwrap()).abs() < 1e-12);
        prop_assert!(dxy <= distance(&x, &z).unwrap() + distance(&z, &y).unwrap() + 1e-9);
    }

    #[test]
    fn pair_verdicts_ignore_labels(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for spec in [dual_hesse_pair(), build_coble_lattice_example().spec] {
            let base = check_pair(&spec).unwrap();
            let k = spec.lattice.k();
            let points: Vec<usize> = shuffled(&mut rng, k).into_iter().map(|i| i + 1).collect();
            let comps = shuffled(&mut rng, spec.components.len());
            let moved = spec.relabel_points(&points).unwrap().permute_components(&comps).unwrap();
            let v = check_pair(&moved).unwrap();
            prop_assert_eq!(v.overall, base.overall);
            prop_assert_eq!(v.snc, base.snc);
            prop_assert_eq!(v.coefficient_class, base.coefficient_class);
        }
    }
}
