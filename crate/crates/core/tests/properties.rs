//! Property tests over randomly generated small games.

mod common;

use pflab_core::adversaries::{optimal_adversary, random_adversary};
use pflab_core::bits::{Label, LabelSet};
use pflab_core::dims::{naive_tree_oracle, pfl_dim, ppfl_dim, within_budget, DEFAULT_TREE_BUDGET};
use pflab_core::game::{
    build_admissible_collections, play_game, GameSpec, HypothesisClass, SetSystem, Threshold,
};
use pflab_core::learners::{cvsp_learner, dpfla_learner, frpfl_learner};
use pflab_core::measure_dims::{minimax_rand_regret, pms_dim};
use pflab_core::setsys::{
    helly_number, inseparability_report, nested_empty_chain, nested_truncation,
};
use pflab_core::Rational;
use proptest::prelude::*;

/// Games with 1..=2 instances, 2..=3 labels, a random set system and up to
/// three distinct hypotheses, keeping only those with an admissible
/// collection.
fn small_game() -> impl Strategy<Value = GameSpec> {
    (1usize..=2, 2usize..=3)
        .prop_flat_map(|(n_inst, n_labels)| {
            let n_sets = (1u32 << n_labels) - 1;
            let table = proptest::collection::vec(0..n_labels as Label, n_inst);
            (
                Just((n_inst, n_labels)),
                1u64..(1u64 << n_sets),
                proptest::collection::btree_set(table, 1..=3),
                1usize..=3,
            )
        })
        .prop_filter_map(
            "no admissible collection",
            |((n_inst, n_labels), sys, tables, horizon)| {
                let sets: Vec<LabelSet> = (0..63)
                    .filter(|i| sys >> i & 1 == 1)
                    .map(|i| LabelSet(i + 1))
                    .collect();
                let system = SetSystem::listed(n_labels, sets).ok()?;
                let spec = GameSpec::new(
                    n_inst,
                    n_labels,
                    system,
                    HypothesisClass::Tables(tables.into_iter().collect()),
                    horizon,
                )
                .ok()?;
                (!common::admissible_images(&spec).is_empty()).then_some(spec)
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn pfl_matches_game_tree(spec in small_game()) {
        for d in 0..=3 {
            prop_assert_eq!(pfl_dim(&spec, d).unwrap(), common::pfl(&spec, d));
        }
    }

    #[test]
    fn pfl_grows_by_at_most_one_per_round(spec in small_game()) {
        let vals: Vec<u32> = (0..=4).map(|d| pfl_dim(&spec, d).unwrap()).collect();
        prop_assert_eq!(vals[0], 0);
        for w in vals.windows(2) {
            prop_assert!(w[0] <= w[1] && w[1] <= w[0] + 1, "{:?}", vals);
        }
        for (d, &v) in vals.iter().enumerate() {
            prop_assert_eq!(ppfl_dim(&spec, &[], &[], &[], d).unwrap(), v);
        }
    }

    #[test]
    fn tree_enumeration_finds_exactly_the_value(spec in small_game(), d in 1usize..=2) {
        prop_assume!(within_budget(&spec, d, DEFAULT_TREE_BUDGET));
        let v = pfl_dim(&spec, d).unwrap();
        for q in 0..=d as u32 + 1 {
            let tree = naive_tree_oracle(&spec, d, q).unwrap();
            prop_assert_eq!(tree.is_some(), v >= q, "q = {}", q);
            if let Some(t) = tree {
                prop_assert!(t.verify(&spec).is_ok());
            }
        }
    }

    #[test]
    fn admissible_collections_have_valid_images(spec in small_game()) {
        let adm = build_admissible_collections(&spec).unwrap();
        let tables = spec.hypotheses.tables().unwrap();
        for (c, imgs) in adm.collections.iter().zip(&adm.image_table) {
            for (x, img) in imgs.iter().enumerate() {
                let direct = (0..tables.len())
                    .filter(|h| c.mask >> h & 1 == 1)
                    .fold(LabelSet::EMPTY, |s, h| s.with(tables[h][x]));
                prop_assert_eq!(*img, direct);
                prop_assert!(spec.set_system.contains(*img));
            }
        }
    }

    #[test]
    fn helly_number_matches_subcollection_scan(spec in small_game()) {
        let sets = common::members(&spec);
        let h = helly_number(&spec.set_system).unwrap();
        prop_assert_eq!(h, common::helly(&sets, spec.n_labels));
        prop_assert!(h <= sets.len().max(1));
        let r = inseparability_report(&spec.set_system, h, LabelSet::EMPTY).unwrap();
        prop_assert!(r.condition2_holds);
        let has_empty = (1u32..1 << sets.len()).any(|c| {
            (0..sets.len()).filter(|i| c >> i & 1 == 1).fold(LabelSet::full(spec.n_labels), |a, i| a.intersect(sets[i])).is_empty()
        });
        if has_empty && h > 1 {
            prop_assert!(!inseparability_report(&spec.set_system, h - 1, LabelSet::EMPTY).unwrap().condition2_holds);
        }
    }

    #[test]
    fn pms_is_monotone_and_below_pfl(spec in small_game()) {
        let t = spec.horizon.min(2);
        let pfl = pfl_dim(&spec, t).unwrap();
        let gammas = [Threshold::zero(), Threshold::new(1, 3).unwrap(), Threshold::new(1, 2).unwrap(), Threshold::new(1, 1).unwrap()];
        for g in [1u32, 2, 4] {
            let vals: Vec<u32> = gammas.iter().map(|&gm| pms_dim(&spec, t, gm, g).unwrap().value).collect();
            prop_assert!(vals.windows(2).all(|w| w[1] <= w[0]), "g {} {:?}", g, vals);
            prop_assert!(vals[..3].iter().all(|&v| v <= pfl));
        }
        for gm in gammas {
            let chain: Vec<u32> = [1u32, 2, 4].iter().map(|&g| pms_dim(&spec, t, gm, g).unwrap().value).collect();
            prop_assert!(chain.windows(2).all(|w| w[1] <= w[0]), "gamma {} {:?}", gm, chain);
        }
    }

    #[test]
    fn scaled_pms_bounds_randomized_value(spec in small_game()) {
        let t = spec.horizon.min(2);
        let v = minimax_rand_regret(&spec, t, 2).unwrap();
        for (a, b) in [(1u64, 4u64), (1, 2), (1, 1)] {
            let pms = pms_dim(&spec, t, Threshold::new(a, b).unwrap(), 2).unwrap().value;
            let lower = Rational::new(((a * pms as u64) as i64).into(), (b as i64).into());
            prop_assert!(lower <= v, "gamma {}/{}: {} > {}", a, b, lower, v);
        }
    }

    #[test]
    fn optimal_adversary_forces_pfl_against_dpfla(spec in small_game()) {
        let o = play_game(&spec, Box::new(dpfla_learner(&spec).unwrap()), Box::new(optimal_adversary(&spec).unwrap())).unwrap();
        let tr = o.transcript();
        prop_assert_eq!(tr.mistakes() as u32, pfl_dim(&spec, spec.horizon).unwrap());
        prop_assert_eq!(o.expected_loss.clone(), Rational::from_integer((tr.mistakes() as i64).into()));
    }

    #[test]
    fn transcripts_are_consistent(spec in small_game(), seed in 0u64..1000) {
        let play = || play_game(&spec, Box::new(cvsp_learner(&spec).unwrap()), Box::new(random_adversary(&spec, seed).unwrap())).unwrap();
        let (a, b) = (play(), play());
        let tr = a.transcript();
        prop_assert_eq!(tr, b.transcript());
        prop_assert_eq!(tr.comparator_loss.clone(), Rational::from_integer(0.into()));
        let adm = build_admissible_collections(&spec).unwrap();
        let w = tr.witness.as_ref().unwrap();
        prop_assert!(adm.collections.iter().any(|c| Some(c.mask) == w.mask));
        for (round, set) in tr.rounds.iter().zip(&tr.final_sets) {
            prop_assert!(set.contains(round.revealed));
            prop_assert!(spec.set_system.contains(*set));
        }
    }

    #[test]
    fn learners_replay_deterministically(spec in small_game(), seed in 0u64..1000) {
        let g = 2;
        let gamma = Threshold::new(1, 2).unwrap();
        let run = || play_game(&spec, Box::new(frpfl_learner(&spec, gamma, g).unwrap()), Box::new(random_adversary(&spec, seed).unwrap())).unwrap();
        let (a, b) = (run(), run());
        prop_assert_eq!(a.transcript(), b.transcript());
        prop_assert_eq!(a.expected_loss, b.expected_loss);
    }

    #[test]
    fn nested_chains_are_nested_and_end_in_the_tail(m in 2usize..=6) {
        let (sys, tail) = nested_truncation(m).unwrap();
        let sets = sys.sets().unwrap();
        let chain = nested_empty_chain(&sys, tail).unwrap().unwrap();
        prop_assert_eq!(chain.len(), m);
        for w in chain.windows(2) {
            prop_assert!(sets[w[1]].is_subset(sets[w[0]]) && sets[w[1]] != sets[w[0]]);
        }
        let last = sets[*chain.last().unwrap()];
        prop_assert!(last.is_subset(tail));
        prop_assert!(nested_empty_chain(&sys, LabelSet::EMPTY).unwrap().is_none());
    }
}
