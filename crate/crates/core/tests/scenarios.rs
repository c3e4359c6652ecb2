//! Worked examples: small games whose values are known in closed form or
//! from a reference computation.

mod common;

use pflab_core::adversaries::*;
use pflab_core::bits::{Label, LabelSet};
use pflab_core::dims::*;
use pflab_core::game::*;
use pflab_core::games::*;
use pflab_core::learners::*;
use pflab_core::measure_dims::*;
use pflab_core::{Error, Rational};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn constants(n_instances: usize, labels: &[Label]) -> HypothesisClass {
    HypothesisClass::Tables(labels.iter().map(|&y| vec![y; n_instances]).collect())
}

fn spec_with(n_labels: usize, sets: &[&[Label]], labels: &[Label], horizon: usize) -> GameSpec {
    let sets: Vec<Vec<Label>> = sets.iter().map(|s| s.to_vec()).collect();
    GameSpec::new(
        1,
        n_labels,
        SetSystem::from_lists(n_labels, &sets).unwrap(),
        constants(1, labels),
        horizon,
    )
    .unwrap()
}

fn masks(spec: &GameSpec) -> Vec<u128> {
    build_admissible_collections(spec)
        .unwrap()
        .collections
        .iter()
        .map(|c| c.mask)
        .collect()
}

fn play(spec: &GameSpec, l: impl Learner + 'static, a: impl Adversary + 'static) -> Outcome {
    play_game(spec, Box::new(l), Box::new(a)).unwrap()
}

mod game_core {
    use super::*;

    #[test]
    fn admissible_collections() {
        assert_eq!(
            masks(&two_constant_full(1).unwrap()),
            vec![0b01, 0b10, 0b11]
        );
        assert_eq!(
            masks(&two_constant_singletons(1).unwrap()),
            vec![0b01, 0b10]
        );
        let three = spec_with(3, &[&[0, 1], &[1, 2]], &[0, 1, 2], 1);
        assert_eq!(masks(&three), vec![0b011, 0b110]);
        let sets = [LabelSet::from_labels([0, 1]), LabelSet::from_labels([1, 2])];
        let direct: Vec<u128> = (1u128..8)
            .filter(|m| {
                sets.contains(&LabelSet::from_labels(
                    (0..3).filter(|h| m >> h & 1 == 1).map(|h| h as Label),
                ))
            })
            .collect();
        assert_eq!(masks(&three), direct);
    }

    #[test]
    fn cvsp_on_the_two_constant_game() {
        let spec = two_constant_full(2).unwrap();
        let o = play(
            &spec,
            cvsp_learner(&spec).unwrap(),
            optimal_adversary(&spec).unwrap(),
        );
        assert!(o.expected_regret <= r(2, 1));
    }

    /// Reveals whatever was predicted and finalizes the full pair.
    #[derive(Clone)]
    struct Echo;

    impl Adversary for Echo {
        fn name(&self) -> String {
            "echo".into()
        }
        fn choose_instance(&mut self, _: &[Round]) -> pflab_core::Result<usize> {
            Ok(0)
        }
        fn reveal(&mut self, _: &[Round], _: usize, p: &Prediction) -> pflab_core::Result<Label> {
            Ok(p.label().unwrap())
        }
        fn finalize_sets(&mut self, history: &[Round]) -> pflab_core::Result<Vec<LabelSet>> {
            Ok(vec![LabelSet::from_labels([0, 1]); history.len()])
        }
        fn clone_box(&self) -> Box<dyn Adversary> {
            Box::new(self.clone())
        }
    }

    #[test]
    fn echoed_predictions_cost_nothing() {
        let spec = two_constant_full(4).unwrap();
        for l in [
            Box::new(constant_learner(1)) as Box<dyn Learner>,
            Box::new(cvsp_learner(&spec).unwrap()),
        ] {
            let o = play_game(&spec, l, Box::new(Echo)).unwrap();
            assert_eq!(o.expected_regret, r(0, 1));
        }
    }

    #[test]
    fn dpfla_against_its_shattering_tree() {
        for spec in [
            two_constant_singletons(3).unwrap(),
            binary_singleton(2).unwrap(),
            helly_six(2).unwrap(),
        ] {
            let q = pfl_dim(&spec, spec.horizon).unwrap();
            let tree = witness_tree(&mut label_solver(&spec).unwrap(), spec.horizon).unwrap();
            let o = play(
                &spec,
                dpfla_learner(&spec).unwrap(),
                shattering_tree_adversary(&spec, tree).unwrap(),
            );
            assert_eq!(o.expected_regret, r(q as i64, 1));
        }
    }

    #[test]
    fn comparator_loss_counts_misses_of_the_best_constant() {
        let spec = GameSpec::new(2, 2, SetSystem::singletons(2), constants(2, &[0, 1]), 2)
            .unwrap()
            .with_realizability(Realizability::Agnostic);
        let space = CollectionSpace::build(&spec).unwrap();
        let rounds = |ys: [Label; 2]| {
            (0..2)
                .map(|x| Round {
                    instance: x,
                    prediction: Prediction::Label(0),
                    revealed: ys[x],
                    draw: None,
                    committed: None,
                })
                .collect::<Vec<_>>()
        };
        let s = |y: Label| LabelSet::singleton(y);
        let same = build_transcript(&space, rounds([0, 0]), vec![s(0), s(0)]).unwrap();
        assert_eq!(same.comparator_loss, r(0, 1));
        let split = build_transcript(&space, rounds([0, 1]), vec![s(0), s(1)]).unwrap();
        assert_eq!(split.comparator_loss, r(1, 1));
        // Under set realizability the split sequence has no generating collection.
        let realizable = CollectionSpace::build(
            &spec
                .clone()
                .with_realizability(Realizability::SetRealizable),
        )
        .unwrap();
        assert!(matches!(
            build_transcript(&realizable, rounds([0, 1]), vec![s(0), s(1)]),
            Err(Error::ProtocolViolation(_))
        ));
        assert_eq!(
            build_transcript(&realizable, rounds([0, 0]), vec![s(0), s(0)])
                .unwrap()
                .comparator_loss,
            r(0, 1)
        );
    }

    #[test]
    fn revealed_label_must_be_in_its_set() {
        let spec = two_constant_full(1).unwrap();
        let space = CollectionSpace::build(&spec).unwrap();
        let round = Round {
            instance: 0,
            prediction: Prediction::Label(0),
            revealed: 1,
            draw: None,
            committed: None,
        };
        assert!(matches!(
            build_transcript(&space, vec![round], vec![LabelSet::singleton(0)]),
            Err(Error::ProtocolViolation(_))
        ));
    }
}

mod set_systems {
    use super::*;
    use pflab_core::setsys::*;

    fn system(n: usize, sets: &[&[Label]]) -> SetSystem {
        let sets: Vec<Vec<Label>> = sets.iter().map(|s| s.to_vec()).collect();
        SetSystem::from_lists(n, &sets).unwrap()
    }

    #[test]
    fn helly_numbers() {
        assert_eq!(helly_number(&helly_six(1).unwrap().set_system).unwrap(), 3);
        assert_eq!(helly_number(&system(2, &[&[0, 1]])).unwrap(), 1);
        assert_eq!(helly_number(&system(2, &[&[0], &[1]])).unwrap(), 2);
    }

    #[test]
    fn nested_chains() {
        assert_eq!(
            nested_empty_chain(&system(2, &[&[0, 1], &[0]]), LabelSet::EMPTY).unwrap(),
            None
        );
        assert_eq!(
            nested_empty_chain(&system(2, &[&[0, 1], &[1], &[0]]), LabelSet::EMPTY).unwrap(),
            None
        );
        let (sys, tail) = nested_truncation(4).unwrap();
        assert_eq!(nested_empty_chain(&sys, tail).unwrap().unwrap().len(), 4);
    }

    #[test]
    fn inseparability() {
        let helly = helly_six(1).unwrap().set_system;
        assert!(
            inseparability_report(&helly, 3, LabelSet::EMPTY)
                .unwrap()
                .condition2_holds
        );
        let single = inseparability_report(&system(2, &[&[0, 1]]), 1, LabelSet::EMPTY).unwrap();
        assert!(single.condition1_holds && single.condition2_holds);
        let five = system(3, &[&[0], &[1], &[2], &[0, 1], &[1, 2]]);
        let sets = five.sets().unwrap();
        for p in 1..=3 {
            let lib = inseparability_report(&five, p, LabelSet::EMPTY)
                .unwrap()
                .condition2_holds;
            assert_eq!(lib, common::small_empty_parts(&sets, 3, p), "p = {p}");
        }
        assert!(
            !inseparability_report(&five, 1, LabelSet::EMPTY)
                .unwrap()
                .condition2_holds
        );
        assert!(
            inseparability_report(&five, 2, LabelSet::EMPTY)
                .unwrap()
                .condition2_holds
        );
    }
}

mod dimensions {
    use super::*;

    #[test]
    fn pfl_examples() {
        assert_eq!(pfl_dim(&two_constant_singletons(1).unwrap(), 1).unwrap(), 1);
        assert_eq!(pfl_dim(&two_constant_full(2).unwrap(), 2).unwrap(), 1);
        // Label 1 lies in every set.
        let common_label = spec_with(3, &[&[0, 1], &[1, 2]], &[0, 1, 2], 3);
        assert_eq!(pfl_dim(&common_label, 3).unwrap(), 0);
        for n in 1..=3 {
            let labels: Vec<Label> = (0..n).map(|h| (h % 2) as Label).collect();
            let tables: Vec<Vec<Label>> =
                (0..n).map(|h| vec![labels[h], (h / 2) as Label]).collect();
            let spec = GameSpec::new(
                2,
                2,
                SetSystem::all_nonempty(2),
                HypothesisClass::Tables(tables),
                4,
            )
            .unwrap();
            assert!(pfl_dim(&spec, 4).unwrap() <= n as u32);
        }
    }

    #[test]
    fn one_step_prefixes() {
        let spec = two_constant_singletons(3).unwrap();
        for yhat in 0..2u8 {
            for y in 0..2u8 {
                for d in 0..3 {
                    // The reveal identifies the hypothesis; only the prefix event remains.
                    assert_eq!(
                        ppfl_dim(&spec, &[0], &[yhat], &[y], d).unwrap(),
                        (yhat != y) as u32
                    );
                }
            }
        }
        assert_eq!(
            ppfl_dim(&spec, &[], &[], &[], 2).unwrap(),
            pfl_dim(&spec, 2).unwrap()
        );
    }

    #[test]
    fn minimax_examples() {
        assert_eq!(
            minimax_det_regret(&two_constant_singletons(5).unwrap(), 5).unwrap(),
            1
        );
        assert!(minimax_det_regret(&agnostic_two_constant(3).unwrap(), 3).is_err());
    }

    #[test]
    fn tree_oracle_examples() {
        let spec = two_constant_singletons(1).unwrap();
        let tree = naive_tree_oracle(&spec, 1, 1).unwrap().unwrap();
        assert_eq!((tree.annotation(&[0]), tree.annotation(&[1])), (1, 0));
        tree.verify(&spec).unwrap();
        assert!(naive_tree_oracle(&spec, 1, 2).unwrap().is_none());
        assert!(naive_tree_oracle(&spec, 1, 0).unwrap().is_some());
    }

    #[test]
    fn littlestone_examples() {
        let two = two_constant_singletons(1).unwrap();
        assert_eq!(ml_sl_bl_dim(&two, Variant::Ml, 5).unwrap(), 1);
        let one = spec_with(2, &[&[0], &[1]], &[0], 1);
        for v in [Variant::Ml, Variant::Sl, Variant::Bl] {
            assert_eq!(ml_sl_bl_dim(&one, v, 5).unwrap(), 0);
        }
        let helly = helly_six(1).unwrap();
        let sets = helly.set_system.sets().unwrap();
        assert_eq!(
            ml_sl_bl_dim(&helly, Variant::Sl, 5).unwrap(),
            common::littlestone(&helly, &sets, 5)
        );
        let full = two_constant_full(2).unwrap();
        let rel = dimension_relations_report(&full, 2).unwrap();
        assert_eq!((rel.ml, rel.pfl, rel.ml_le_pfl), (1, 1, Some(true)));
    }

    #[test]
    fn key_inequality_examples() {
        let full = two_constant_full(4).unwrap();
        let rel = dimension_relations_report(&full, 4).unwrap();
        assert_eq!(rel.sl, 1);
        assert_eq!(rel.key_bound, Some(2));
        assert!(rel.pfl <= 2);
        let helly = dimension_relations_report(&helly_six(2).unwrap(), 2).unwrap();
        assert_eq!(helly.key_ineq, None);
    }
}

mod measure_dims {
    use super::*;

    #[test]
    fn grids() {
        let two = measure_grid(2, 2).unwrap();
        let want = [
            Measure::new(vec![2, 0], 2).unwrap(),
            Measure::new(vec![1, 1], 2).unwrap(),
            Measure::new(vec![0, 2], 2).unwrap(),
        ];
        assert_eq!(two, want);
        assert_eq!(
            measure_grid(3, 1).unwrap(),
            (0..3).map(|y| Measure::delta(3, y)).collect::<Vec<_>>()
        );
        let stars_and_bars = (1..=5u64).fold(1, |c, i| c * (3 + i) / i);
        assert_eq!(stars_and_bars, 56);
        assert_eq!(measure_grid(6, 3).unwrap().len() as u64, stars_and_bars);
    }

    #[test]
    fn pms_examples() {
        let helly = helly_six(2).unwrap();
        let pfl = pfl_dim(&helly, 2).unwrap();
        for gamma in [
            Threshold::zero(),
            Threshold::new(1, 2).unwrap(),
            Threshold::new(9, 10).unwrap(),
        ] {
            assert_eq!(pms_dim(&helly, 2, gamma, 1).unwrap().value, pfl);
        }
        let one = Threshold::new(1, 1).unwrap();
        // Only point masses on the coarsest grid; any mixing avoids the event.
        assert_eq!(
            pms_dim(&two_constant_full(1).unwrap(), 1, one, 1)
                .unwrap()
                .value,
            1
        );
        assert_eq!(
            pms_dim(&two_constant_full(1).unwrap(), 1, one, 2)
                .unwrap()
                .value,
            0
        );
        for t in 1..=3 {
            let v = pms_dim(&helly_six(t).unwrap(), t, Threshold::new(1, 3).unwrap(), 6).unwrap();
            assert_eq!(v.value, 1);
            assert!(v.grid_restricted);
        }
    }

    #[test]
    fn ppms_examples() {
        let spec = two_constant_singletons(3).unwrap();
        let half = Threshold::new(1, 2).unwrap();
        assert_eq!(
            ppms_dim(&spec, &[], &[], &[], 2, half, 2).unwrap().value,
            pms_dim(&spec, 2, half, 2).unwrap().value
        );
        for yhat in 0..2u8 {
            for y in 0..2u8 {
                let seeded = ppms_dim(&spec, &[0], &[Measure::delta(2, yhat)], &[y], 2, half, 2)
                    .unwrap()
                    .value;
                assert_eq!(seeded, ppfl_dim(&spec, &[0], &[yhat], &[y], 2).unwrap());
            }
        }
        let three = spec_with(3, &[&[0], &[1], &[2]], &[0, 1], 2);
        assert!(ppms_dim(&three, &[0], &[Measure::delta(3, 0)], &[2], 1, half, 2).is_err());
    }

    #[test]
    fn scale_selection_examples() {
        let m = Measure::uniform_over(2, LabelSet::full(2));
        let th = vec![r(1, 4); 3];
        let sets = [LabelSet::singleton(0), LabelSet::singleton(1)];
        assert_eq!(msp(&[m.clone(), m.clone(), m], &th, &sets), 3);
        let pair = [Measure::delta(2, 0), Measure::delta(2, 1)];
        assert_eq!(msp(&pair, &th[..2], &sets), 1);
        // A stair: two close steps, then a jump.
        let stair = [
            Measure::new(vec![4, 0], 4).unwrap(),
            Measure::new(vec![3, 1], 4).unwrap(),
            Measure::new(vec![0, 4], 4).unwrap(),
        ];
        let th = vec![r(1, 4), r(1, 4), r(1, 8)];
        let want = common::scale_select(&stair, &th, &sets);
        assert_eq!(want, 2);
        assert_eq!(msp(&stair, &th, &sets), want);
    }

    #[test]
    fn randomized_values() {
        assert_eq!(
            minimax_rand_regret(&helly_six(2).unwrap(), 2, 6).unwrap(),
            r(1, 3)
        );
        for g in [2, 4] {
            assert_eq!(
                minimax_rand_regret(&binary_singleton(1).unwrap(), 1, g).unwrap(),
                r(1, 2)
            );
        }
        let common_label = spec_with(3, &[&[0, 1], &[1, 2]], &[0, 1, 2], 2);
        assert_eq!(minimax_rand_regret(&common_label, 2, 2).unwrap(), r(0, 1));
    }
}

mod learners {
    use super::*;

    #[test]
    fn cvsp_examples() {
        let spec = two_constant_full(5).unwrap();
        assert!(
            play(
                &spec,
                cvsp_learner(&spec).unwrap(),
                optimal_adversary(&spec).unwrap()
            )
            .transcript()
            .mistakes()
                <= 2
        );
        let four = GameSpec::new(
            1,
            4,
            SetSystem::all_nonempty(4),
            constants(1, &[0, 1, 2, 3]),
            6,
        )
        .unwrap();
        let o = play(
            &four,
            cvsp_learner(&four).unwrap(),
            optimal_adversary(&four).unwrap(),
        );
        assert!(o.transcript().mistakes() <= 10);
        // Repeating an instance after its reveal never errs.
        let helly = helly_six(4).unwrap();
        for set in HELLY_SETS {
            let mask = set.iter().fold(0u128, |m, &y| m | 1 << y);
            let adv = fixed_collection_adversary(&helly, mask, vec![0; 4]).unwrap();
            let tr = play(&helly, cvsp_learner(&helly).unwrap(), adv)
                .transcript()
                .clone();
            assert!(tr
                .rounds
                .iter()
                .zip(&tr.final_sets)
                .skip(1)
                .all(|(r, s)| s.contains(r.prediction.label().unwrap())));
        }
    }

    #[test]
    fn dpfla_examples() {
        for spec in [
            two_constant_full(3).unwrap(),
            helly_six(3).unwrap(),
            binary_singleton(3).unwrap(),
        ] {
            let q = pfl_dim(&spec, spec.horizon).unwrap() as usize;
            let o = play(
                &spec,
                dpfla_learner(&spec).unwrap(),
                optimal_adversary(&spec).unwrap(),
            );
            assert_eq!(o.transcript().mistakes(), q);
            let tree = naive_best(&spec, spec.horizon, DEFAULT_TREE_BUDGET);
            if let Ok((_, tree)) = tree {
                let o = play(
                    &spec,
                    dpfla_learner(&spec).unwrap(),
                    shattering_tree_adversary(&spec, tree).unwrap(),
                );
                assert!(o.transcript().mistakes() >= q);
            }
        }
        let easy = spec_with(3, &[&[0, 1], &[1, 2]], &[0, 1, 2], 4);
        for seed in 0..5 {
            let o = play(
                &easy,
                dpfla_learner(&easy).unwrap(),
                random_adversary(&easy, seed).unwrap(),
            );
            assert_eq!(o.transcript().mistakes(), 0);
        }
    }

    #[test]
    fn frpfl_on_the_helly_game() {
        let spec = helly_six(3).unwrap();
        let third = Threshold::new(1, 3).unwrap();
        let o = play(
            &spec,
            frpfl_learner(&spec, third, 6).unwrap(),
            optimal_scale_adversary(&spec, third, 6).unwrap(),
        );
        let excess = o
            .transcript()
            .rounds
            .iter()
            .zip(&o.transcript().final_sets)
            .filter(|(round, s)| round.prediction.loss(**s) > r(1, 3))
            .count();
        assert!(excess <= 1);
    }

    #[test]
    fn single_scale_mrpfl_is_frpfl_at_one_half() {
        let half = Threshold::new(1, 2).unwrap();
        for spec in [two_constant_full(3).unwrap(), binary_singleton(2).unwrap()] {
            for seed in 0..4 {
                let a = play(
                    &spec,
                    mrpfl_learner(&spec, 1, 4).unwrap(),
                    random_adversary(&spec, seed).unwrap(),
                );
                let b = play(
                    &spec,
                    frpfl_learner(&spec, half, 4).unwrap(),
                    random_adversary(&spec, seed).unwrap(),
                );
                assert_eq!(a.transcript().rounds, b.transcript().rounds);
            }
        }
    }

    #[test]
    fn mrpfl_loss_bound() {
        let g = 4;
        for spec in [two_constant_full(3).unwrap(), binary_singleton(2).unwrap()] {
            let t = spec.horizon;
            let n = default_scale_count(t);
            let scales = dyadic_scales(n);
            let mut bound = scales[n - 1].clone() * r(t as i64, 1);
            for s in &scales {
                let pms = pms_dim(&spec, t, Threshold::from_rational(s).unwrap(), g)
                    .unwrap()
                    .value;
                bound += r(16, 1) * s * r(pms as i64, 1);
            }
            let mut adversaries: Vec<Box<dyn Adversary>> = vec![Box::new(
                optimal_scale_adversary(&spec, Threshold::zero(), g).unwrap(),
            )];
            adversaries.extend((0..3).map(|seed| {
                Box::new(random_adversary(&spec, seed).unwrap()) as Box<dyn Adversary>
            }));
            for a in adversaries {
                let o = play_game(&spec, Box::new(mrpfl_learner(&spec, n, g).unwrap()), a).unwrap();
                assert!(o.expected_loss <= bound, "{} > {bound}", o.expected_loss);
            }
        }
    }

    #[test]
    fn helly_intersection_rule() {
        let spec = helly_six(3).unwrap();
        let transversal = LabelSet::from_labels(HELLY_TRANSVERSAL);
        let first = helly_intersection_learner(&spec, transversal)
            .unwrap()
            .predict(0)
            .unwrap();
        assert_eq!(
            first,
            Prediction::Measure(Measure::uniform_over(6, transversal))
        );
        let sets: Vec<LabelSet> = HELLY_SETS
            .iter()
            .map(|s| LabelSet::from_labels(s.iter().copied()))
            .collect();
        for y in 0..6u8 {
            let mut l = helly_intersection_learner(&spec, transversal).unwrap();
            l.predict(0).unwrap();
            l.observe(
                0,
                &Observation {
                    revealed: Some(y),
                    ..Default::default()
                },
            )
            .unwrap();
            let next = l.predict(1).unwrap().as_measure(6);
            let guess = next.as_delta().expect("a single safe label");
            assert!(
                sets.iter()
                    .filter(|s| s.contains(y))
                    .all(|s| s.contains(guess)),
                "reveal {y}"
            );
            assert!(!l.fell_back());
        }
        let w = worst_case_expected_loss(
            &spec,
            Box::new(helly_intersection_learner(&spec, transversal).unwrap()),
        )
        .unwrap();
        assert_eq!(w, r(1, 3));
    }

    #[test]
    fn uniform_cube_learner_examples() {
        let spec = cube(1, 4).unwrap();
        let p = uniform_cube_learner(1, 4).unwrap().predict(0).unwrap();
        assert_eq!(p.as_measure(4).as_delta(), Some(0));
        assert_eq!(p.loss(LabelSet::from_labels([0, 1, 2])), r(0, 1));
        let spec3 = cube(3, 6).unwrap();
        assert_eq!(
            worst_case_expected_loss(&spec3, Box::new(uniform_cube_learner(3, 6).unwrap()))
                .unwrap(),
            r(1, 1)
        );
        drop(spec);
    }
}

mod adversaries {
    use super::*;

    #[test]
    fn always_zero_learner_loses_every_round() {
        let spec = two_constant_singletons(3).unwrap();
        let o = play(
            &spec,
            constant_learner(0),
            optimal_adversary(&spec).unwrap(),
        );
        let tr = o.transcript();
        assert_eq!(tr.mistakes(), 3);
        assert!(tr.rounds.iter().all(|r| r.revealed == 1));
        assert_eq!(tr.final_sets, vec![LabelSet::singleton(1); 3]);
    }

    #[test]
    fn tree_adversaries() {
        let spec = two_constant_singletons(1).unwrap();
        let tree = naive_tree_oracle(&spec, 1, 1).unwrap().unwrap();
        let learners: Vec<Box<dyn Learner>> = vec![
            Box::new(constant_learner(0)),
            Box::new(constant_learner(1)),
            Box::new(cvsp_learner(&spec).unwrap()),
            Box::new(dpfla_learner(&spec).unwrap()),
        ];
        for l in learners {
            let o = play_game(
                &spec,
                l,
                Box::new(shattering_tree_adversary(&spec, tree.clone()).unwrap()),
            )
            .unwrap();
            assert_eq!(o.transcript().mistakes(), 1);
        }
        let helly = helly_six(2).unwrap();
        let q = pfl_dim(&helly, 2).unwrap();
        let tree = witness_tree(&mut label_solver(&helly).unwrap(), 2).unwrap();
        let o = play(
            &helly,
            dpfla_learner(&helly).unwrap(),
            shattering_tree_adversary(&helly, tree).unwrap(),
        );
        assert_eq!(o.transcript().mistakes() as u32, q);
        let easy = spec_with(3, &[&[0, 1], &[1, 2]], &[0, 1, 2], 2);
        let zero = naive_tree_oracle(&easy, 2, 0).unwrap().unwrap();
        let o = play(
            &easy,
            dpfla_learner(&easy).unwrap(),
            shattering_tree_adversary(&easy, zero).unwrap(),
        );
        assert_eq!(o.transcript().mistakes(), 0);
    }

    #[test]
    fn tree_depth_must_match_the_horizon() {
        let spec = two_constant_singletons(2).unwrap();
        let tree = naive_tree_oracle(&spec, 1, 1).unwrap().unwrap();
        assert!(shattering_tree_adversary(&spec, tree).is_err());
    }

    #[test]
    fn collision_construction() {
        let fam = CollisionFamily::new(127, 8).unwrap();
        let adv = collision_adversary(&fam.spec, fam.window()).unwrap();
        let log = adv.log();
        let o = play(&fam.spec, cvsp_learner(&fam.spec).unwrap(), adv);
        assert!(o.expected_regret >= r(4, 1), "regret {}", o.expected_regret);
        let log = log.borrow();
        assert_eq!(log.pool_sizes.len(), 8);
        assert!(log.pool_sizes.iter().all(|&n| n > 0));
        assert!(log.slot_increments.iter().all(|&k| k <= 1));
        let one = CollisionFamily::new(11, 1).unwrap();
        for l in [
            Box::new(cvsp_learner(&one.spec).unwrap()) as Box<dyn Learner>,
            Box::new(constant_learner(2)),
        ] {
            let o = play_game(
                &one.spec,
                l,
                Box::new(collision_adversary(&one.spec, one.window()).unwrap()),
            )
            .unwrap();
            assert_eq!(o.expected_regret, r(1, 1));
        }
    }

    #[test]
    fn agnostic_two_constant_construction() {
        let t = 10;
        let spec = agnostic_two_constant(t).unwrap();
        let learners: Vec<Box<dyn Learner>> = vec![
            Box::new(constant_learner(0)),
            Box::new(constant_learner(1)),
            Box::new(cvsp_learner(&spec).unwrap()),
            Box::new(dpfla_learner(&spec).unwrap()),
            Box::new(uniform_learner(2)),
        ];
        for l in learners {
            let name = l.name();
            let o = play_game(&spec, l, Box::new(agnostic_two_constant_adversary(t))).unwrap();
            assert!(
                o.expected_regret >= r(5, 1),
                "{name}: {}",
                o.expected_regret
            );
            let adv = agnostic_two_constant_adversary(t);
            let tr = o.transcript();
            let k = adv.comparator(&tr.rounds);
            for (round, s) in tr.rounds.iter().zip(&tr.final_sets) {
                assert!(s.contains(round.revealed) && s.contains(k));
            }
        }
    }

    #[test]
    fn public_cube_and_parity() {
        let (t, m) = (6, 8);
        let spec = cube(t, m).unwrap().with_visibility(Visibility::Public);
        let o = play(
            &spec,
            uniform_cube_learner(t, m).unwrap(),
            public_cube_adversary(m, r(1, 2)).unwrap(),
        );
        assert!(o.expected_loss >= r(3, 1));
        let game = ParityGame::new(6, 8).unwrap();
        let o = play(
            &game.spec,
            cvsp_learner(&game.spec).unwrap(),
            pf_not_sv_adversary(&game),
        );
        assert_eq!(
            (o.expected_regret, o.expected_comparator),
            (r(6, 1), r(0, 1))
        );
    }
}
