use proptest::prelude::*;

use thurston_core::braid::BraidAut;
use thurston_core::cover::LiftKind;
use thurston_core::format::{parse_presentation, save_string};
use thurston_core::generate::{generate_one, Family, GeneratorConfig};
use thurston_core::obstruction::{default_tolerance, leading_eigenvalue_bounds, TransitionMatrix};
use thurston_core::perm::Perm;
use thurston_core::sphere_group::{
    canonical_curve_class, canonical_word, cyclic_reduce, free_conjugate, round_curve_word, MarkedSet, Word,
};
use thurston_core::CoverPresentation;

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=rank as i32, any::<bool>()), 0..=max_len)
        .prop_map(|xs| Word::from_signed(&xs.into_iter().map(|(g, inv)| if inv { -g } else { g }).collect::<Vec<_>>()))
}

fn perm(d: usize) -> impl Strategy<Value = Perm> {
    Just((0..d).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::from_images(v).unwrap())
}

fn instance() -> impl Strategy<Value = CoverPresentation> {
    (any::<bool>(), 0u64..10_000).prop_map(|(cubic, index)| {
        let family = if cubic { Family::CubicTwoFixed } else { Family::Quadratic };
        generate_one(family, &GeneratorConfig { seed: 99, ..Default::default() }, index)
    })
}

proptest! {
    #[test]
    fn canonical_word_is_a_class_invariant(w in word(5, 16), h in word(5, 6)) {
        let k = canonical_word(&w);
        prop_assert_eq!(canonical_word(&k), k.clone());
        prop_assert_eq!(canonical_word(&w.conjugate_by(&h)), k.clone());
        prop_assert_eq!(canonical_word(&w.inverse()), k);
    }

    #[test]
    fn conjugates_are_detected(w in word(4, 12), h in word(4, 6)) {
        prop_assert!(free_conjugate(&w, &w.conjugate_by(&h)));
        prop_assert!(cyclic_reduce(&w).len() <= w.free_reduce().len());
    }

    #[test]
    fn permutation_group_laws(a in perm(5), b in perm(5), c in perm(5)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.cycles().iter().map(Vec::len).sum::<usize>(), 5);
        prop_assert_eq!(a.branching() + a.cycle_count(), 5);
    }

    #[test]
    fn braid_images_of_round_curves_stay_simple(side in 1u64..63, seed in any::<u64>(), len in 0usize..4) {
        use rand::SeedableRng;
        let n = 6;
        prop_assume!((2..=4).contains(&side.count_ones()));
        let m = MarkedSet::standard(n).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let twisted = BraidAut::random_pure(n, len, &mut rng).apply(&round_curve_word(side, n));
        let class = canonical_curve_class(&twisted, &m).unwrap();
        prop_assert!(class.partition().sides().contains(&side));
    }

    #[test]
    fn collatz_wielandt_bounds_bracket_the_radius(entries in prop::collection::vec((0i64..4, 1i64..4), 9)) {
        let rows: Vec<Vec<(i64, i64)>> = entries.chunks(3).map(<[_]>::to_vec).collect();
        let refs: Vec<&[(i64, i64)]> = rows.iter().map(Vec::as_slice).collect();
        let m = TransitionMatrix::from_ratios(&refs).unwrap();
        let b = leading_eigenvalue_bounds(&m, &default_tolerance());
        prop_assert!(b.lower <= b.upper);
        for block in &b.blocks {
            prop_assert!(block.vector.iter().all(|x| *x > num_rational::BigRational::from_integer(0.into())));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lifts_partition_the_degree(p in instance(), w in word(3, 10)) {
        let lifts = p.lift_curve(&w);
        prop_assert_eq!(lifts.iter().map(|l| l.degree).sum::<usize>(), p.degree());
        let mut sheets: Vec<usize> = lifts.iter().flat_map(|l| l.sheets.clone()).collect();
        sheets.sort_unstable();
        prop_assert_eq!(sheets, (0..p.degree()).collect::<Vec<_>>());
    }

    #[test]
    fn peripheral_lifts_follow_the_monodromy(p in instance()) {
        for i in 0..p.n() - 1 {
            let lifts = p.lift_curve(&Word::generator(i + 1));
            let mut degrees: Vec<usize> = lifts.iter().map(|l| l.degree).collect();
            let mut cycles: Vec<usize> = p.perm(i).cycles().iter().map(Vec::len).collect();
            degrees.sort_unstable();
            cycles.sort_unstable();
            prop_assert_eq!(degrees, cycles);
            prop_assert!(lifts.iter().all(|l| l.kind != LiftKind::Essential));
        }
    }

    #[test]
    fn disk_preimage_arithmetic(p in instance(), side in 1u64..63) {
        let n = p.n();
        let side = side & ((1 << n) - 1);
        prop_assume!((2..=n - 2).contains(&(side.count_ones() as usize)));
        let t = p.disk_preimage_topology(&round_curve_word(side, n), side).unwrap();
        let b = t.boundary_lifts.len() as i64;
        prop_assert_eq!(t.component_count as i64, (t.total_chi + b) / 2);
        prop_assert_eq!(t.all_disks, t.total_chi == b);
    }

    #[test]
    fn save_and_parse_round_trip(p in instance()) {
        let text = save_string(&p);
        let back = parse_presentation(&text).unwrap().presentation;
        prop_assert_eq!(back, p);
    }

    #[test]
    fn generated_instances_are_valid_and_reproducible(index in 0u64..10_000) {
        let cfg = GeneratorConfig { seed: 5, ..Default::default() };
        let p = generate_one(Family::CubicTwoFixed, &cfg, index);
        prop_assert!(p.validate().passed());
        prop_assert_eq!(p.fixed_critical_points().len(), 2);
        prop_assert_eq!(generate_one(Family::CubicTwoFixed, &cfg, index), p);
    }
}
