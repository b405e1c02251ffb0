use gpb_core::bounds;
use gpb_core::grammar::cyk::cyk_min_parse;
use gpb_core::random::{
    random_cnf, random_general_instance, random_interaction_instance, random_weights, random_word, CnfShape, Draw,
    InteractionShape, VocabularyShape, WeightKind,
};
use gpb_core::{
    run_algorithm1, run_algorithm2, run_d1_earley, score_labeling, Algorithm2Options, CostTables, Grammar,
    InteractionGrammar, PatternIndex, Tropical, Weight,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vocab(sigma: usize) -> VocabularyShape {
    VocabularyShape {
        sigma,
        max_words: 6,
        max_len: 4,
    }
}

fn interaction_shape(depth: usize, kinds: &'static [WeightKind]) -> InteractionShape {
    InteractionShape {
        depth,
        max_pairs: 3,
        max_word_len: 2,
        kinds,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_prefix_closed_and_forests_are_trees(seed: u64, n in 0usize..12, sigma in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = random_weights(&mut rng, n, vocab(sigma), Draw::Integer(-5, 5));
        let index = PatternIndex::build(&weights);
        for id in 0..index.len() {
            match index.prefix(id) {
                Some(pre) => {
                    prop_assert_eq!(index.pattern_len(pre) + 1, index.pattern_len(id));
                    prop_assert_eq!(index.start(pre), index.start(id));
                }
                None => prop_assert_eq!(index.pattern_len(id), 0),
            }
        }
        for s in 0..=n {
            let group = index.group(s);
            // Every non-root has exactly one parent inside the group, and
            // parents are shorter, so following them reaches ε_s.
            for id in group.clone() {
                let mut cur = id;
                while let Some(parent) = index.suffix_parent(cur) {
                    prop_assert!(group.contains(&parent));
                    prop_assert!(index.pattern_len(parent) < index.pattern_len(cur));
                    cur = parent;
                }
                prop_assert_eq!(cur, index.empty(s));
            }
        }
    }

    #[test]
    fn cost_table_work_is_linear(seed: u64, n in 0usize..30, sigma in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = random_weights(&mut rng, n, vocab(sigma), Draw::Integer(-5, 5));
        let index = PatternIndex::build(&weights);
        let tables = CostTables::compute(&index, &weights);
        prop_assert!(tables.additions() as u128 <= bounds::table_additions(weights.total_length(), &index));
    }

    #[test]
    fn general_minimum_bounds_every_labeling(seed: u64, n in 0usize..7, sigma in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shape = CnfShape { max_nonterminals: 3, max_rules: 8, max_word_len: 3, epsilon: 0.1 };
        let inst = random_general_instance(&mut rng, n, vocab(sigma), shape, Draw::Real(-3.0, 3.0));
        let Grammar::Cnf(g) = &inst.grammar else { unreachable!() };
        let prep = inst.prepare().unwrap();
        let run = run_algorithm1::<Tropical, f64>(&prep.index, &prep.tables, g, false).unwrap();
        prop_assert!(run.stats.inner_iterations as u128 <= bounds::general_iterations(g.rules().len(), &prep.index));
        for _ in 0..10 {
            let x = random_word(&mut rng, sigma, n);
            prop_assert!(run.value <= score_labeling(&x, &inst.weights, g) + 1e-9);
        }
    }

    #[test]
    fn interaction_work_counters(seed: u64, n in 0usize..25, sigma in 1usize..4, depth in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kinds = &[WeightKind::Const, WeightKind::Span, WeightKind::Separable];
        let inst = random_interaction_instance(&mut rng, n, vocab(sigma), interaction_shape(depth, kinds), Draw::Real(-2.0, 2.0));
        let Grammar::Interaction(ig) = &inst.grammar else { unreachable!() };
        let prep = inst.prepare().unwrap();
        let run = run_algorithm2(&prep.index, &prep.tables, ig, Algorithm2Options::default()).unwrap();
        prop_assert!(run.stats.m0_steps as u128 <= bounds::m0_steps(&prep.index));
        prop_assert!(
            run.stats.max_anchor_triples as u128 <= bounds::vertical_triples_per_anchor(ig.pairs().len(), &prep.index)
        );
    }

    #[test]
    fn earley_work_counter(seed: u64, n in 0usize..40, sigma in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kinds = &[WeightKind::Const, WeightKind::Separable];
        let inst = random_interaction_instance(&mut rng, n, vocab(sigma), interaction_shape(1, kinds), Draw::Real(-2.0, 2.0));
        let Grammar::Interaction(ig) = &inst.grammar else { unreachable!() };
        let prep = inst.prepare().unwrap();
        let (_, stats) = run_d1_earley(&prep.index, &prep.tables, ig).unwrap();
        prop_assert!(stats.steps as u128 <= bounds::earley_steps(ig.pairs().len(), &prep.index));
    }

    #[test]
    fn deeper_grammars_never_cost_more(seed: u64, n in 0usize..14, sigma in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kinds = &[WeightKind::Const, WeightKind::Span];
        let inst = random_interaction_instance(&mut rng, n, vocab(sigma), interaction_shape(3, kinds), Draw::Real(-3.0, 0.0));
        let Grammar::Interaction(ig) = &inst.grammar else { unreachable!() };
        let prep = inst.prepare().unwrap();
        let mut last = f64::INFINITY;
        for depth in 1..=3 {
            let shallow = ig.truncated(depth).unwrap();
            let run = run_algorithm2(&prep.index, &prep.tables, &shallow, Algorithm2Options::default()).unwrap();
            prop_assert!(run.value <= last + 1e-9);
            last = run.value;
        }
    }

    #[test]
    fn parse_trees_rescore_to_their_cost(seed: u64, len in 0usize..8, sigma in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = random_weights(&mut rng, len, vocab(sigma), Draw::Integer(-5, 5));
        let shape = CnfShape { max_nonterminals: 4, max_rules: 10, max_word_len: 3, epsilon: 0.2 };
        let g = random_cnf(&mut rng, &weights, shape, Draw::Integer(-5, 5));
        let x = random_word(&mut rng, sigma, len);
        let (cost, tree) = cyk_min_parse(&x, &g);
        match tree {
            Some(t) => {
                prop_assert!(t.check(&g, &x).is_ok());
                prop_assert_eq!(t.cost(&g), cost);
            }
            None => prop_assert_eq!(cost, f64::INFINITY),
        }
    }

    #[test]
    fn constant_weights_equal_their_span_tables(seed: u64, n in 1usize..12, c in -3i32..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights = random_weights(&mut rng, n, vocab(2), Draw::Integer(-5, 5));
        let mut constant = InteractionGrammar::new(2).unwrap();
        constant.add_pair_uniform(&[0], &[1], Weight::Const(c as f64)).unwrap();
        let mut table = gpb_core::SpanTable::new(n, 0.0);
        for i in 1..=n {
            for j in i..=n {
                table.set(i, j, c as f64);
            }
        }
        let mut spans = InteractionGrammar::new(2).unwrap();
        spans.add_pair_uniform(&[0], &[1], Weight::Span(table)).unwrap();
        let value = |ig: &InteractionGrammar<f64>| {
            let inst = gpb_core::Instance { weights: weights.clone(), grammar: Grammar::Interaction(ig.clone()) };
            let prep = inst.prepare().unwrap();
            run_algorithm2(&prep.index, &prep.tables, ig, Algorithm2Options::default()).unwrap().value
        };
        prop_assert_eq!(value(&constant), value(&spans));
    }
}
