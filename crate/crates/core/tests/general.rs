use gpb_core::grammar::cyk::{cyk_log_inside, cyk_min_parse};
use gpb_core::grammar::enumerate::{count_derivations, derivation_costs, enumerate_derivations};
use gpb_core::oracle::{brute_log_z, brute_min, interaction_parse_cost, naive_f, MAX_DERIVATIONS};
use gpb_core::random::{
    letters, random_cnf, random_general_instance, random_interaction, random_weights, random_word, CnfShape, Draw,
    InteractionShape, VocabularyShape, WeightKind,
};
use gpb_core::{
    compile_interaction_grammar, extract_argmin, log_partition, minimize, run_algorithm1, score_labeling, Alphabet,
    CnfGrammar, Grammar, Instance, MaxProduct, PatternWeights, Tropical,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Tiny words under ambiguous grammars can have ~10⁶ derivations.
const COST_CAP: usize = 4_000_000;

const VOCAB: VocabularyShape = VocabularyShape {
    sigma: 3,
    max_words: 5,
    max_len: 3,
};
const CNF: CnfShape = CnfShape {
    max_nonterminals: 3,
    max_rules: 8,
    max_word_len: 3,
    epsilon: 0.1,
};

fn tiny(rng: &mut ChaCha8Rng, n: usize) -> Instance<f64> {
    let sigma = rng.gen_range(1..=3);
    random_general_instance(rng, n, VocabularyShape { sigma, ..VOCAB }, CNF, Draw::Integer(-5, 5))
}

fn cnf(inst: &Instance<f64>) -> &CnfGrammar<f64> {
    match &inst.grammar {
        Grammar::Cnf(g) => g,
        Grammar::Interaction(_) => unreachable!(),
    }
}

#[test]
fn algorithm1_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut derivable = 0;
    for _ in 0..200 {
        let n = rng.gen_range(0..=7);
        let inst = tiny(&mut rng, n);
        let prep = inst.prepare().unwrap();
        let run = run_algorithm1::<Tropical, f64>(&prep.index, &prep.tables, cnf(&inst), true).unwrap();
        let (brute, witness) = brute_min(&inst).unwrap();
        assert_eq!(run.value, brute);
        if witness.is_some() {
            derivable += 1;
            let arg = extract_argmin(&run, &prep.index, cnf(&inst)).unwrap();
            arg.derivation.check(cnf(&inst), &arg.labeling).unwrap();
            let rescored = naive_f(&arg.labeling, &inst.weights) + arg.derivation.cost(cnf(&inst));
            assert_eq!(rescored, brute);
            assert_eq!(score_labeling(&arg.labeling, &inst.weights, cnf(&inst)), brute);
        }
    }
    assert!(derivable > 50, "too few derivable instances: {derivable}");
}

#[test]
fn partition_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..150 {
        let n = rng.gen_range(0..=6);
        let inst = tiny(&mut rng, n);
        let prep = inst.prepare().unwrap();
        let z = log_partition(&prep.index, &prep.tables, cnf(&inst)).unwrap();
        let brute = brute_log_z(&inst).unwrap();
        if brute == f64::NEG_INFINITY {
            assert_eq!(z, brute);
        } else {
            assert!(((z.exp() - brute.exp()) / brute.exp()).abs() <= 1e-9, "{z} vs {brute}");
        }
    }
}

#[test]
fn max_product_is_exp_of_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..100 {
        let n = rng.gen_range(0..=7);
        let inst = tiny(&mut rng, n);
        let prep = inst.prepare().unwrap();
        let min = run_algorithm1::<Tropical, f64>(&prep.index, &prep.tables, cnf(&inst), false).unwrap();
        let max = run_algorithm1::<MaxProduct, f64>(&prep.index, &prep.tables, cnf(&inst), false).unwrap();
        let expected = (-min.value).exp();
        if expected == 0.0 {
            assert_eq!(max.value, 0.0);
        } else {
            assert!(((max.value - expected) / expected).abs() <= 1e-9);
        }
    }
}

#[test]
fn cyk_matches_derivation_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..300 {
        let sigma = rng.gen_range(1..=3);
        let len = rng.gen_range(0..=6);
        let vocab = random_weights(&mut rng, len, VocabularyShape { sigma, ..VOCAB }, Draw::Integer(-5, 5));
        let shape = CnfShape {
            max_nonterminals: 4,
            max_rules: 10,
            ..CNF
        };
        let g = random_cnf(&mut rng, &vocab, shape, Draw::Integer(-5, 5));
        let x = random_word(&mut rng, sigma, len);
        let costs = derivation_costs(&x, &g, COST_CAP).unwrap();
        let (best, tree) = cyk_min_parse(&x, &g);
        let min = costs.iter().copied().fold(f64::INFINITY, f64::min);
        assert_eq!(best, min);
        if count_derivations(&x, &g) <= MAX_DERIVATIONS as u128 {
            let trees = enumerate_derivations(&x, &g, MAX_DERIVATIONS).unwrap();
            assert_eq!(trees.len(), costs.len());
            for t in &trees {
                t.check(&g, &x).unwrap();
            }
            assert_eq!(trees.iter().map(|d| d.cost(&g)).fold(f64::INFINITY, f64::min), best);
        }
        if let Some(tree) = tree {
            tree.check(&g, &x).unwrap();
            assert_eq!(tree.cost(&g), best);
        }
        let log_sum = costs
            .iter()
            .fold(f64::NEG_INFINITY, |acc, &c| gpb_core::Scalar::log_add_exp(acc, -c));
        let inside = cyk_log_inside(&x, &g);
        // exp(−f(x)) · Σ_λ exp(−cost(λ)), checked on the sum itself.
        let f = naive_f(&x, &vocab);
        if log_sum == f64::NEG_INFINITY {
            assert_eq!(inside, log_sum);
        } else {
            let (a, b) = ((-f + inside).exp(), (-f + log_sum).exp());
            assert!(((a - b) / b).abs() <= 1e-9);
        }
    }
}

#[test]
fn compilation_preserves_least_costs() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..200 {
        let sigma = rng.gen_range(1..=3);
        let len = rng.gen_range(0..=6);
        let depth = rng.gen_range(1..=3);
        let shape = InteractionShape {
            depth,
            max_pairs: 3,
            max_word_len: 2,
            kinds: &[WeightKind::Const, WeightKind::Span, WeightKind::Separable],
        };
        let ig = random_interaction(&mut rng, len, sigma, shape, Draw::Integer(-5, 5));
        let g = compile_interaction_grammar(&ig, sigma);
        let x = random_word(&mut rng, sigma, len);
        assert_eq!(cyk_min_parse(&x, &g).0, interaction_parse_cost(&x, &ig));
    }
}

fn rna_grammar() -> (Alphabet, CnfGrammar<f64>) {
    let alphabet = Alphabet::from_chars("GAUC").unwrap();
    let mut g = CnfGrammar::new("S");
    let s = g.start();
    for a in 0..4 {
        g.add_word(s, &[a], 0.0);
    }
    g.add_binary(s, s, s, 0.0);
    for (open, close) in [("G", "C"), ("C", "G"), ("U", "A"), ("A", "U")] {
        let x = g.add_nonterminal(&format!("L{open}"));
        let y = g.add_nonterminal(&format!("R{close}"));
        let rest = g.add_nonterminal(&format!("P{open}{close}"));
        g.add_word(x, &alphabet.parse(open).unwrap(), 0.0);
        g.add_word(y, &alphabet.parse(close).unwrap(), 0.0);
        g.add_binary(s, x, rest, -1.0);
        g.add_binary(rest, s, y, 0.0);
    }
    (alphabet, g)
}

/// Maximum number of complementary pairs in a nested structure where every
/// pair encloses at least one base.
fn nussinov(x: &[u16]) -> i64 {
    let pairs = |a: u16, b: u16| matches!((a, b), (0, 3) | (3, 0) | (2, 1) | (1, 2));
    let n = x.len();
    if n == 0 {
        return 0;
    }
    let mut best = vec![vec![0i64; n]; n];
    for span in 2..n {
        for i in 0..n - span {
            let j = i + span;
            let mut v = best[i + 1][j].max(best[i][j - 1]);
            if pairs(x[i], x[j]) {
                v = v.max(best[i + 1][j - 1] + 1);
            }
            for k in i + 1..j {
                v = v.max(best[i][k] + best[k + 1][j]);
            }
            best[i][j] = v;
        }
    }
    best[0][n - 1]
}

/// Exhaustive search over nested structures.
fn most_pairs(x: &[u16]) -> i64 {
    let pairs = |a: u16, b: u16| matches!((a, b), (0, 3) | (3, 0) | (2, 1) | (1, 2));
    if x.len() < 3 {
        return 0;
    }
    // Either the first base is unpaired, or it pairs with some k ≥ 2.
    let mut best = most_pairs(&x[1..]);
    for k in 2..x.len() {
        if pairs(x[0], x[k]) {
            best = best.max(1 + most_pairs(&x[1..k]) + most_pairs(&x[k + 1..]));
        }
    }
    best
}

#[test]
fn rna_structure_cost() {
    let (alphabet, g) = rna_grammar();
    let x = alphabet.parse("UGCUCCUAGUACGUAAGGACCGGAGUG").unwrap();
    assert_eq!(x.len(), 27);
    let (cost, tree) = cyk_min_parse(&x, &g);
    assert_eq!(cost, -(nussinov(&x) as f64));
    // The structure drawn with the sequence has five pairs.
    assert!(cost <= -5.0);
    tree.unwrap().check(&g, &x).unwrap();
    for len in 1..=12 {
        let prefix = &x[..len];
        assert_eq!(cyk_min_parse(prefix, &g).0, -(most_pairs(prefix) as f64), "prefix {len}");
    }
}

#[test]
fn zero_cost_patterns_do_not_change_the_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    for _ in 0..100 {
        let n = rng.gen_range(1..=7);
        let inst = tiny(&mut rng, n);
        let prep = inst.prepare().unwrap();
        let before = minimize(&prep.index, &prep.tables, cnf(&inst)).map(|a| a.value);
        let mut more = inst.clone();
        let len = rng.gen_range(1..=n.min(4));
        let word = random_word(&mut rng, inst.weights.alphabet().len(), len);
        if more.weights.word_index(&word).is_none() {
            more.weights.set_uniform_cost(&word, 0.0).unwrap();
        }
        let prep = more.prepare().unwrap();
        let after = minimize(&prep.index, &prep.tables, cnf(&more)).map(|a| a.value);
        assert_eq!(before, after);
    }
}

#[test]
fn lowering_a_cost_never_raises_the_minimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let mut checked = 0;
    for _ in 0..150 {
        let n = rng.gen_range(1..=7);
        let inst = tiny(&mut rng, n);
        if inst.weights.words().is_empty() {
            continue;
        }
        let prep = inst.prepare().unwrap();
        let before = run_algorithm1::<Tropical, f64>(&prep.index, &prep.tables, cnf(&inst), false)
            .unwrap()
            .value;
        let mut lower = inst.clone();
        let w = rng.gen_range(0..lower.weights.words().len());
        let len = lower.weights.words()[w].len();
        if len > n {
            continue;
        }
        let start = rng.gen_range(1..=n + 1 - len);
        let cost = lower.weights.cost(w, start) - rng.gen_range(1..=5) as f64;
        lower.weights.override_cost(w, start, cost);
        let prep = lower.prepare().unwrap();
        let after = run_algorithm1::<Tropical, f64>(&prep.index, &prep.tables, cnf(&lower), false)
            .unwrap()
            .value;
        assert!(after <= before);
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn general_on_minimal_example() {
    let alphabet = letters(2);
    let mut weights = PatternWeights::<f64>::new(2, alphabet.clone());
    weights.set_cost(&alphabet.parse("ab").unwrap(), 1, -1.0).unwrap();
    let mut g = CnfGrammar::new("S");
    for w in ["aa", "ab", "ba", "bb"] {
        g.add_word(0, &alphabet.parse(w).unwrap(), 0.0);
    }
    let inst = Instance {
        weights,
        grammar: Grammar::Cnf(g.clone()),
    };
    let prep = inst.prepare().unwrap();
    let arg = minimize(&prep.index, &prep.tables, &g).unwrap();
    assert_eq!(arg.value, -1.0);
    assert_eq!(alphabet.render(&arg.labeling), "ab");
}
