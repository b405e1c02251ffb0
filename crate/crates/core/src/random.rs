//! Seeded random instances.
//!
//! All generators draw from a caller-supplied [`rand::Rng`]; tests and the
//! benchmark use ChaCha8 seeded with `seed_from_u64` so instances are
//! reproducible across platforms.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::grammar::interaction::InteractionGrammar;
use crate::grammar::CnfGrammar;
use crate::instance::{Grammar, Instance};
use crate::pattern::{Alphabet, PatternWeights, Symbol};
use crate::weight::{SpanTable, Weight};

/// How weights are drawn.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Draw {
    /// Uniform integer in `[lo, hi]`, stored as a float.
    Integer(i32, i32),
    /// Uniform real in `[lo, hi)`.
    Real(f64, f64),
}

impl Draw {
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            Draw::Integer(lo, hi) => rng.gen_range(lo..=hi) as f64,
            Draw::Real(lo, hi) if lo < hi => rng.gen_range(lo..hi),
            Draw::Real(lo, _) => lo,
        }
    }
}

/// Labels `a`, `b`, `c`, ...
pub fn letters(size: usize) -> Alphabet {
    let chars: String = (b'a'..=b'z').take(size).map(char::from).collect();
    Alphabet::from_chars(&chars).expect("at most 26 distinct letters")
}

pub fn random_word<R: Rng + ?Sized>(rng: &mut R, sigma: usize, len: usize) -> Vec<Symbol> {
    (0..len).map(|_| rng.gen_range(0..sigma) as Symbol).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct VocabularyShape {
    pub sigma: usize,
    pub max_words: usize,
    pub max_len: usize,
}

/// Random vocabulary with independent per-placement costs; half of the
/// words get one shared cost for every placement.
pub fn random_weights<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    shape: VocabularyShape,
    draw: Draw,
) -> PatternWeights<f64> {
    let mut weights = PatternWeights::new(n, letters(shape.sigma));
    let count = rng.gen_range(0..=shape.max_words);
    for _ in 0..count {
        let len = rng.gen_range(1..=shape.max_len);
        let word = random_word(rng, shape.sigma, len);
        if weights.word_index(&word).is_some() {
            continue;
        }
        if rng.gen_bool(0.5) {
            weights.set_uniform_cost(&word, draw.sample(rng)).expect("fresh word");
        } else {
            weights.add_word(&word).expect("valid word");
            for start in 1..=(n + 1).saturating_sub(len) {
                weights.set_cost(&word, start, draw.sample(rng)).expect("in range");
            }
        }
    }
    weights
}

#[derive(Clone, Copy, Debug)]
pub struct CnfShape {
    pub max_nonterminals: usize,
    pub max_rules: usize,
    pub max_word_len: usize,
    /// Probability of adding `S → ε`.
    pub epsilon: f64,
}

/// Random extended-CNF grammar. Terminal words are drawn from the
/// vocabulary when possible so patterns and rules interact.
pub fn random_cnf<R: Rng + ?Sized>(
    rng: &mut R,
    vocabulary: &PatternWeights<f64>,
    shape: CnfShape,
    draw: Draw,
) -> CnfGrammar<f64> {
    let sigma = vocabulary.alphabet().len();
    let mut g = CnfGrammar::new("S");
    let count = rng.gen_range(1..=shape.max_nonterminals);
    for k in 1..count {
        g.add_nonterminal(&format!("A{k}"));
    }
    let rules = rng.gen_range(1..=shape.max_rules);
    let short: Vec<&Vec<Symbol>> = vocabulary
        .words()
        .iter()
        .filter(|w| w.len() <= shape.max_word_len)
        .collect();
    for r in 0..rules {
        let lhs = rng.gen_range(0..count);
        // The first rule is terminal so something is derivable more often.
        if r == 0 || rng.gen_bool(0.45) {
            let word = match short.choose(rng) {
                Some(w) if rng.gen_bool(0.6) => (*w).clone(),
                _ => {
                    let len = rng.gen_range(1..=shape.max_word_len);
                    random_word(rng, sigma, len)
                }
            };
            g.add_word(lhs, &word, draw.sample(rng));
        } else {
            let (b, c) = (rng.gen_range(0..count), rng.gen_range(0..count));
            g.add_binary(lhs, b, c, draw.sample(rng));
        }
    }
    if rng.gen_bool(shape.epsilon) {
        g.add_epsilon(draw.sample(rng));
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightKind {
    Const,
    Span,
    Separable,
}

#[derive(Clone, Copy, Debug)]
pub struct InteractionShape {
    pub depth: usize,
    pub max_pairs: usize,
    pub max_word_len: usize,
    pub kinds: &'static [WeightKind],
}

pub fn random_weight<R: Rng + ?Sized>(rng: &mut R, n: usize, kind: WeightKind, draw: Draw) -> Weight<f64> {
    match kind {
        WeightKind::Const => Weight::Const(draw.sample(rng)),
        WeightKind::Span => {
            let mut table = SpanTable::new(n, 0.0);
            for i in 1..=n {
                for j in i..=n {
                    table.set(i, j, draw.sample(rng));
                }
            }
            Weight::Span(table)
        }
        WeightKind::Separable => Weight::Separable {
            start: (0..=n + 1).map(|_| draw.sample(rng)).collect(),
            end: (0..=n + 1).map(|_| draw.sample(rng)).collect(),
        },
    }
}

/// Random interaction grammar with `1..=max_pairs` pairs (duplicates
/// allowed) and one weight per level and pair.
pub fn random_interaction<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    sigma: usize,
    shape: InteractionShape,
    draw: Draw,
) -> InteractionGrammar<f64> {
    let mut ig = InteractionGrammar::new(shape.depth).expect("depth at least one");
    let pairs = rng.gen_range(1..=shape.max_pairs);
    for _ in 0..pairs {
        let lu = rng.gen_range(1..=shape.max_word_len);
        let lv = rng.gen_range(1..=shape.max_word_len);
        let u = random_word(rng, sigma, lu);
        let v = random_word(rng, sigma, lv);
        let kind = *shape.kinds.choose(rng).unwrap_or(&WeightKind::Const);
        let weights = (0..shape.depth).map(|_| random_weight(rng, n, kind, draw)).collect();
        ig.add_pair(&u, &v, weights).expect("non-empty words");
    }
    ig
}

/// Random general instance with the grammar words added to the vocabulary.
pub fn random_general_instance<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    vocabulary: VocabularyShape,
    grammar: CnfShape,
    draw: Draw,
) -> Instance<f64> {
    let weights = random_weights(rng, n, vocabulary, draw);
    let g = random_cnf(rng, &weights, grammar, draw);
    Instance {
        weights,
        grammar: Grammar::Cnf(g),
    }
    .normalized()
    .expect("generated grammar is well formed")
}

/// Random interaction instance with the pair words added to the vocabulary.
pub fn random_interaction_instance<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    vocabulary: VocabularyShape,
    grammar: InteractionShape,
    draw: Draw,
) -> Instance<f64> {
    let weights = random_weights(rng, n, vocabulary, draw);
    let ig = random_interaction(rng, n, vocabulary.sigma, grammar, draw);
    Instance {
        weights,
        grammar: Grammar::Interaction(ig),
    }
    .normalized()
    .expect("generated grammar is well formed")
}

/// The benchmark family: labels `0`/`1`, every word of length four with
/// per-placement costs uniform on `[0, 1)`, and a depth-2 grammar with the
/// single pair `(11, 11)` whose span weights are uniform on `[0, c)` and
/// shared by both levels.
///
/// Draw order: the sixteen words in binary order, each over its placements
/// left to right, then spans `(i, j)` with `i` outer, `j` inner.
pub fn synthetic<R: Rng + ?Sized>(rng: &mut R, n: usize, c: f64) -> Instance<f64> {
    let alphabet = Alphabet::from_chars("01").expect("two labels");
    let mut weights = PatternWeights::new(n, alphabet);
    for code in 0..16u16 {
        let word: Vec<Symbol> = (0..4).rev().map(|b| (code >> b) & 1).collect();
        weights.add_word(&word).expect("binary word");
        for start in 1..=(n + 1).saturating_sub(4) {
            weights.set_cost(&word, start, rng.gen_range(0.0..1.0)).expect("in range");
        }
    }
    let mut table = SpanTable::new(n, 0.0);
    for i in 1..=n {
        for j in i..=n {
            let v = if c > 0.0 { rng.gen_range(0.0..c) } else { 0.0 };
            table.set(i, j, v);
        }
    }
    let mut ig = InteractionGrammar::new(2).expect("depth two");
    let span = Weight::Span(table);
    ig.add_pair(&[1, 1], &[1, 1], vec![span.clone(), span])
        .expect("non-empty words");
    Instance {
        weights,
        grammar: Grammar::Interaction(ig),
    }
    .normalized()
    .expect("pair words are binary")
}
