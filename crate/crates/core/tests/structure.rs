use gpb_core::oracle::{naive_closure, naive_forest, naive_lsp, naive_pattern_cost, naive_phi};
use gpb_core::random::{random_weights, random_word, Draw, VocabularyShape};
use gpb_core::{Alphabet, CostTables, Pattern, PatternIndex, PatternWeights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn vocabulary(rng: &mut ChaCha8Rng, n: usize, max_words: usize, max_len: usize) -> PatternWeights<f64> {
    let sigma = rng.gen_range(1..=3);
    random_weights(
        rng,
        n,
        VocabularyShape {
            sigma,
            max_words,
            max_len,
        },
        Draw::Integer(-5, 5),
    )
}

#[test]
fn lsp_matches_suffix_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=10);
        let weights = vocabulary(&mut rng, n, 8, 5);
        let index = PatternIndex::build(&weights);
        let len = rng.gen_range(0..=n);
        let start = rng.gen_range(1..=n + 1 - len);
        let word = random_word(&mut rng, weights.alphabet().len(), len);
        let pattern = Pattern::new(start, word);
        let expected = naive_lsp(&weights, &pattern);
        assert_eq!(index.pattern(index.lsp(&pattern)), expected, "{pattern}");
    }
}

#[test]
fn closure_and_forest_match_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..1000 {
        let n = rng.gen_range(0..=8);
        let weights = vocabulary(&mut rng, n, 8, 5);
        let index = PatternIndex::build(&weights);
        let closure = naive_closure(&weights);
        assert_eq!(index.len(), closure.len());
        for id in 0..index.len() {
            assert!(closure.contains(&index.pattern(id)));
        }
        for s in 0..=n {
            let mut edges: Vec<(Pattern, Pattern)> = index
                .forest_edges(s)
                .into_iter()
                .map(|(a, b)| (index.pattern(a), index.pattern(b)))
                .collect();
            edges.sort();
            assert_eq!(edges, naive_forest(&weights, s));
        }
    }
}

#[test]
fn ids_are_topological_for_precedence() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let weights = vocabulary(&mut rng, n, 5, 3);
        let index = PatternIndex::build(&weights);
        for a in 0..index.len() {
            for b in 0..index.len() {
                if index.precedes(a, b) {
                    assert!(a < b);
                    // Definition: β ≻ α iff j_β > j_α, i_β ≥ i_α and the
                    // overlap agrees.
                    let (pa, pb) = (index.pattern(a), index.pattern(b));
                    assert!(pb.succeeds(&pa));
                }
            }
        }
    }
}

#[test]
fn cost_tables_match_naive_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..1000 {
        let n = rng.gen_range(0..=10);
        let weights = vocabulary(&mut rng, n, 6, 4);
        let index = PatternIndex::build(&weights);
        let tables = CostTables::compute(&index, &weights);
        for id in 0..index.len() {
            let p = index.pattern(id);
            assert_eq!(tables.phi(id), naive_phi(&weights, &p), "phi {p}");
            assert_eq!(tables.f(id), naive_pattern_cost(&weights, &p), "f {p}");
        }
        // Pairs: α ends right before β starts; f(α, β) is the cost of αβ.
        for beta in 0..index.len() {
            let pb = index.pattern(beta);
            for alpha in index.group(pb.start() - 1) {
                let pa = index.pattern(alpha);
                let glued = pa.extend(pb.word());
                assert_eq!(tables.f_pair(alpha, beta), naive_pattern_cost(&weights, &glued), "f({pa}, {pb})");
                let lsp = index.pattern(tables.lsp_pair(alpha, beta));
                assert_eq!(lsp, naive_lsp(&weights, &glued));
            }
        }
    }
}

#[test]
fn four_word_vocabulary_against_naive_forest() {
    let alphabet = Alphabet::from_chars("01").unwrap();
    let mut weights = PatternWeights::<f64>::new(8, alphabet.clone());
    for w in ["0", "1", "1000", "1010"] {
        weights.add_word(&alphabet.parse(w).unwrap()).unwrap();
    }
    let index = PatternIndex::build(&weights);
    assert_eq!(index.group(6).len(), 8);
    let render = |p: &Pattern| alphabet.render(p.word());
    let mut edges: Vec<(String, String)> = naive_forest(&weights, 6)
        .iter()
        .map(|(a, b)| (render(a), render(b)))
        .collect();
    edges.sort();
    let expected = [
        ("", "0"),
        ("", "1"),
        ("0", "10"),
        ("0", "100"),
        ("0", "1000"),
        ("1", "101"),
        ("10", "1010"),
    ];
    assert_eq!(edges.len(), expected.len());
    for (got, want) in edges.iter().zip(expected) {
        assert_eq!((got.0.as_str(), got.1.as_str()), want);
    }
}
