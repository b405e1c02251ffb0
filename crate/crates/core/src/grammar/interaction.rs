//! Interaction grammars of bounded depth.
//!
//! Level `k ≥ 1` has rules `S^k → S^k S^k | S^{k−1} | u S^{k−1} v` for every
//! pair `(u, v)`, and level 0 derives any word at zero cost. Only the
//! interaction rules carry weights.

use crate::error::{Error, Result};
use crate::grammar::{CnfGrammar, RuleBody};
use crate::pattern::{PatternWeights, Symbol};
use crate::scalar::Scalar;
use crate::weight::Weight;

#[derive(Clone, Debug, PartialEq)]
pub struct InteractionPair<T> {
    pub left: Vec<Symbol>,
    pub right: Vec<Symbol>,
    /// `weights[k − 1]` is the weight of the pair's rule at level `k`.
    pub weights: Vec<Weight<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InteractionGrammar<T> {
    depth: usize,
    pairs: Vec<InteractionPair<T>>,
}

impl<T: Scalar> InteractionGrammar<T> {
    pub fn new(depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidInteraction("depth must be at least 1".into()));
        }
        Ok(InteractionGrammar {
            depth,
            pairs: Vec::new(),
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn pairs(&self) -> &[InteractionPair<T>] {
        &self.pairs
    }

    /// Weight of pair `p` at level `k ∈ [1, depth]`.
    #[inline]
    pub fn weight(&self, k: usize, p: usize) -> &Weight<T> {
        &self.pairs[p].weights[k - 1]
    }

    pub fn add_pair(&mut self, left: &[Symbol], right: &[Symbol], weights: Vec<Weight<T>>) -> Result<usize> {
        if left.is_empty() || right.is_empty() {
            return Err(Error::InvalidInteraction("pair words must be non-empty".into()));
        }
        if weights.len() != self.depth {
            return Err(Error::InvalidInteraction(format!(
                "pair has {} level weights, depth is {}",
                weights.len(),
                self.depth
            )));
        }
        self.pairs.push(InteractionPair {
            left: left.to_vec(),
            right: right.to_vec(),
            weights,
        });
        Ok(self.pairs.len() - 1)
    }

    /// Same weight at every level.
    pub fn add_pair_uniform(&mut self, left: &[Symbol], right: &[Symbol], weight: Weight<T>) -> Result<usize> {
        let weights = vec![weight; self.depth];
        self.add_pair(left, right, weights)
    }

    /// Fails when a pair word is missing from the vocabulary.
    pub fn check_vocabulary(&self, weights: &PatternWeights<T>) -> Result<()> {
        for pair in &self.pairs {
            for word in [&pair.left, &pair.right] {
                if weights.word_index(word).is_none() {
                    return Err(Error::WordNotInVocabulary {
                        word: weights.alphabet().render(word),
                    });
                }
            }
        }
        Ok(())
    }

    /// Adds missing pair words to the vocabulary with zero cost.
    pub fn normalize_vocabulary(&self, weights: &PatternWeights<T>) -> Result<PatternWeights<T>> {
        let mut out = weights.clone();
        for pair in &self.pairs {
            out.add_word(&pair.left)?;
            out.add_word(&pair.right)?;
        }
        Ok(out)
    }

    /// Copy restricted to the first `depth` levels.
    pub fn truncated(&self, depth: usize) -> Result<Self> {
        let mut out = InteractionGrammar::new(depth)?;
        for p in &self.pairs {
            out.add_pair(&p.left, &p.right, p.weights[..depth].to_vec())?;
        }
        Ok(out)
    }

    pub fn map_weights<U: Scalar>(&self, map: impl Fn(T) -> U + Copy) -> InteractionGrammar<U> {
        InteractionGrammar {
            depth: self.depth,
            pairs: self
                .pairs
                .iter()
                .map(|p| InteractionPair {
                    left: p.left.clone(),
                    right: p.right.clone(),
                    weights: p.weights.iter().map(|w| w.map(map)).collect(),
                })
                .collect(),
        }
    }
}

fn word_name(word: &[Symbol]) -> String {
    let parts: Vec<String> = word.iter().map(ToString::to_string).collect();
    format!("X:{}", parts.join("."))
}

/// Extended-CNF grammar with the same least derivation cost on every word.
///
/// Nullable elimination runs first, then unit closure, then binarization:
///
/// * `S^0 → a` for every label, `S^k → S^j S^j` for `j ≤ k`;
/// * for each level `m ≤ k` and pair `p`: `S^k → X_u R_{m,p}` and
///   `S^k → X_u X_v`, both weighted by `θ^m_p` on their own (outer) span;
/// * `R_{m,p} → S^{m−1} X_v`, `X_w → w`;
/// * a fresh start `S` copies the rules of `S^d` and adds `S → ε`.
pub fn compile_interaction_grammar<T: Scalar>(ig: &InteractionGrammar<T>, alphabet_size: usize) -> CnfGrammar<T> {
    let d = ig.depth();
    let mut g = CnfGrammar::new("S");
    let levels: Vec<usize> = (0..=d).map(|k| g.add_nonterminal(&format!("S{k}"))).collect();
    let word_nt = |g: &mut CnfGrammar<T>, w: &[Symbol]| {
        let name = word_name(w);
        match g.nonterminal(&name) {
            Some(id) => id,
            None => {
                let id = g.add_nonterminal(&name);
                g.add_word(id, w, T::zero());
                id
            }
        }
    };
    let mut carriers = Vec::new();
    for (p, pair) in ig.pairs().iter().enumerate() {
        let xu = word_nt(&mut g, &pair.left);
        let xv = word_nt(&mut g, &pair.right);
        for m in 1..=d {
            let r = g.add_nonterminal(&format!("R{m}:{p}"));
            g.add_binary(r, levels[m - 1], xv, T::zero());
            carriers.push((m, p, xu, xv, r));
        }
    }

    let rules_for = |g: &mut CnfGrammar<T>, lhs: usize, k: usize| {
        for &level in &levels[..=k] {
            g.add_binary(lhs, level, level, T::zero());
        }
        for a in 0..alphabet_size {
            g.add_word(lhs, &[a as Symbol], T::zero());
        }
        for &(m, p, xu, xv, r) in carriers.iter().filter(|c| c.0 <= k) {
            let w = ig.weight(m, p).clone();
            g.add_binary(lhs, xu, r, w.clone());
            g.add_binary(lhs, xu, xv, w);
        }
    };
    for k in 0..=d {
        rules_for(&mut g, levels[k], k);
    }
    let top = g.start();
    rules_for(&mut g, top, d);
    g.add_epsilon(T::zero());
    debug_assert!(g
        .rules()
        .iter()
        .all(|r| !matches!(r.body, RuleBody::Binary(b, c) if b == top || c == top)));
    g
}
