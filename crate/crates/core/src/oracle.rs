//! Exhaustive reference evaluators.
//!
//! Nothing here touches the pattern index, the cost tables or the message
//! tables; grammar costs come from chart parsing of each labeling, or, for
//! interaction grammars, from a memoized recursion over the original rules.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::grammar::cyk::cyk_min_parse;
use crate::grammar::enumerate::derivation_cost_histogram;
use crate::grammar::interaction::InteractionGrammar;
use crate::instance::{Grammar, Instance};
use crate::pattern::{Pattern, PatternWeights, Symbol};
use crate::scalar::Scalar;

/// Largest labeling space the brute-force evaluators accept.
pub const MAX_LABELINGS: u128 = 1_000_000;
/// Enumeration cap of the brute-force evaluators (distinct costs per
/// sub-span for partition sums).
pub const MAX_DERIVATIONS: usize = 10_000;

/// Pattern energy by direct substring comparison.
pub fn naive_f<T: Scalar>(x: &[Symbol], weights: &PatternWeights<T>) -> T {
    let mut total = T::zero();
    for (w, word) in weights.words().iter().enumerate() {
        let len = word.len();
        if len > x.len() {
            continue;
        }
        for start in 1..=x.len() + 1 - len {
            let mut hit = true;
            for k in 0..len {
                if x[start - 1 + k] != word[k] {
                    hit = false;
                    break;
                }
            }
            if hit {
                total = total + weights.cost(w, start);
            }
        }
    }
    total
}

/// Least derivation cost of `x` under an interaction grammar, straight from
/// the unnormalized rules (unit and empty rules included).
pub fn interaction_parse_cost<T: Scalar>(x: &[Symbol], ig: &InteractionGrammar<T>) -> T {
    let mut memo = HashMap::new();
    raw_best(x, ig, ig.depth(), 1, x.len(), &mut memo)
}

fn raw_best<T: Scalar>(
    x: &[Symbol],
    ig: &InteractionGrammar<T>,
    level: usize,
    i: usize,
    j: usize,
    memo: &mut HashMap<(usize, usize, usize), T>,
) -> T {
    if level == 0 || j < i {
        return T::zero();
    }
    if let Some(&v) = memo.get(&(level, i, j)) {
        return v;
    }
    // S^k → S^{k−1}
    let mut best = raw_best(x, ig, level - 1, i, j, memo);
    // S^k → S^k S^k with both parts non-empty
    for m in i..j {
        let v = raw_best(x, ig, level, i, m, memo) + raw_best(x, ig, level, m + 1, j, memo);
        best = best.min(v);
    }
    // S^k → u S^{k−1} v
    let span = &x[i - 1..j];
    for (p, pair) in ig.pairs().iter().enumerate() {
        let (lu, lv) = (pair.left.len(), pair.right.len());
        if lu + lv > span.len() || !span.starts_with(&pair.left) || !span.ends_with(&pair.right) {
            continue;
        }
        let inner = raw_best(x, ig, level - 1, i + lu, j - lv, memo);
        best = best.min(ig.weight(level, p).eval(i, j) + inner);
    }
    memo.insert((level, i, j), best);
    best
}

fn labeling_count(sigma: usize, n: usize) -> u128 {
    let mut total = 1u128;
    for _ in 0..n {
        total = total.saturating_mul(sigma as u128);
    }
    total
}

/// Calls `visit` on every labeling in lexicographic order.
fn for_each_labeling(sigma: usize, n: usize, mut visit: impl FnMut(&[Symbol]) -> Result<()>) -> Result<()> {
    let required = labeling_count(sigma, n);
    if required > MAX_LABELINGS {
        return Err(Error::SizeRefused {
            what: "labeling enumeration",
            required,
            limit: MAX_LABELINGS,
        });
    }
    if sigma == 0 && n > 0 {
        return Ok(());
    }
    let mut x = vec![0 as Symbol; n];
    loop {
        visit(&x)?;
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if (x[k] as usize) + 1 < sigma {
                x[k] += 1;
                break;
            }
            x[k] = 0;
        }
    }
}

/// Grammar cost of `x` under either grammar kind.
pub fn grammar_cost<T: Scalar>(x: &[Symbol], grammar: &Grammar<T>) -> T {
    match grammar {
        Grammar::Cnf(g) => cyk_min_parse(x, g).0,
        Grammar::Interaction(ig) => interaction_parse_cost(x, ig),
    }
}

/// Exhaustive minimum of `f(x) + C(x)` and the lexicographically first
/// minimizer (`None` when nothing is derivable).
pub fn brute_min<T: Scalar>(inst: &Instance<T>) -> Result<(T, Option<Vec<Symbol>>)> {
    let mut best = (T::infinity(), None);
    for_each_labeling(inst.weights.alphabet().len(), inst.n(), |x| {
        let g = grammar_cost(x, &inst.grammar);
        if g == T::infinity() {
            return Ok(());
        }
        let v = naive_f(x, &inst.weights) + g;
        if v < best.0 {
            best = (v, Some(x.to_vec()));
        }
        Ok(())
    })?;
    Ok(best)
}

/// Exhaustive `log Σ_{x,λ} exp(−f(x) − cost(λ))` for an extended-CNF
/// grammar.
pub fn brute_log_z<T: Scalar>(inst: &Instance<T>) -> Result<T> {
    let Grammar::Cnf(g) = &inst.grammar else {
        return Err(Error::Unsupported(
            "derivation sums of interaction grammars diverge".into(),
        ));
    };
    let mut acc = f64::NEG_INFINITY;
    for_each_labeling(inst.weights.alphabet().len(), inst.n(), |x| {
        let f = naive_f(x, &inst.weights).as_f64();
        for (c, count) in derivation_cost_histogram(x, g, MAX_DERIVATIONS)? {
            acc = f64::log_add_exp(acc, (count as f64).ln() - (f + c.as_f64()));
        }
        Ok(())
    })?;
    Ok(T::of(acc))
}

/// All placements and their prefixes, plus the empty pattern at every
/// position.
pub fn naive_closure<T: Scalar>(weights: &PatternWeights<T>) -> HashSet<Pattern> {
    let n = weights.n();
    let mut out: HashSet<Pattern> = (0..=n).map(Pattern::empty).collect();
    for word in weights.words() {
        if word.len() > n {
            continue;
        }
        for start in 1..=n + 1 - word.len() {
            for k in 1..=word.len() {
                out.insert(Pattern::new(start, word[..k].to_vec()));
            }
        }
    }
    out
}

/// Longest suffix of `pattern` in the closure, by trying every suffix.
pub fn naive_lsp<T: Scalar>(weights: &PatternWeights<T>, pattern: &Pattern) -> Pattern {
    let closure = naive_closure(weights);
    (0..=pattern.len())
        .rev()
        .map(|len| if len == 0 { Pattern::empty(pattern.end()) } else { pattern.suffix(len) })
        .find(|s| closure.contains(s))
        .expect("the empty pattern is always present")
}

fn is_suffix(short: &Pattern, long: &Pattern) -> bool {
    short.end() == long.end() && short.len() <= long.len() && long.word().ends_with(short.word())
}

/// Parent-child edges among closure patterns ending at `s`: `α` is a proper
/// suffix of `β` with no closure pattern strictly in between.
pub fn naive_forest<T: Scalar>(weights: &PatternWeights<T>, s: usize) -> Vec<(Pattern, Pattern)> {
    let group: Vec<Pattern> = naive_closure(weights).into_iter().filter(|p| p.end() == s).collect();
    let mut edges = Vec::new();
    for beta in &group {
        for alpha in &group {
            if alpha.len() >= beta.len() || !is_suffix(alpha, beta) {
                continue;
            }
            let blocked = group
                .iter()
                .any(|g| g.len() > alpha.len() && g.len() < beta.len() && is_suffix(g, beta));
            if !blocked {
                edges.push((alpha.clone(), beta.clone()));
            }
        }
    }
    edges.sort();
    edges
}

/// Total cost of placements that are suffixes of `pattern`.
pub fn naive_phi<T: Scalar>(weights: &PatternWeights<T>, pattern: &Pattern) -> T {
    let mut total = T::zero();
    for (w, word) in weights.words().iter().enumerate() {
        if word.len() <= pattern.len() && pattern.word().ends_with(word) {
            total = total + weights.cost(w, pattern.end() + 1 - word.len());
        }
    }
    total
}

/// Total cost of placements contained in `pattern`.
pub fn naive_pattern_cost<T: Scalar>(weights: &PatternWeights<T>, pattern: &Pattern) -> T {
    let mut total = T::zero();
    for (w, word) in weights.words().iter().enumerate() {
        if word.len() > pattern.len() {
            continue;
        }
        for off in 0..=pattern.len() - word.len() {
            if pattern.word()[off..off + word.len()] == word[..] {
                total = total + weights.cost(w, pattern.start() + off);
            }
        }
    }
    total
}

/// Minimum pattern energy over all labelings, by a forward pass whose state
/// is the window of the last `ℓ_max − 1` labels.
pub fn pattern_viterbi<T: Scalar>(weights: &PatternWeights<T>) -> T {
    let n = weights.n();
    let sigma = weights.alphabet().len();
    let window = weights.words().iter().map(Vec::len).max().unwrap_or(1).max(1) - 1;
    let mut layer: HashMap<Vec<Symbol>, T> = HashMap::from([(Vec::new(), T::zero())]);
    for t in 1..=n {
        let mut next: HashMap<Vec<Symbol>, T> = HashMap::new();
        for (hist, &v) in &layer {
            for a in 0..sigma {
                let mut ext = hist.clone();
                ext.push(a as Symbol);
                // Placements ending at t.
                let mut add = T::zero();
                for (w, word) in weights.words().iter().enumerate() {
                    if word.len() <= ext.len() && ext.ends_with(word) {
                        add = add + weights.cost(w, t + 1 - word.len());
                    }
                }
                let keep = ext.len().saturating_sub(window);
                let key = ext[keep..].to_vec();
                let cand = v + add;
                let slot = next.entry(key).or_insert(T::infinity());
                if cand < *slot {
                    *slot = cand;
                }
            }
        }
        layer = next;
    }
    layer.values().copied().fold(T::infinity(), T::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::CnfGrammar;
    use crate::pattern::Alphabet;

    #[test]
    fn naive_f_counts_occurrences() {
        let a = Alphabet::from_chars("ab").unwrap();
        let mut w = PatternWeights::<f64>::new(4, a.clone());
        w.set_uniform_cost(&a.parse("ab").unwrap(), -1.0).unwrap();
        assert_eq!(naive_f(&a.parse("abab").unwrap(), &w), -2.0);
        assert_eq!(naive_f(&a.parse("bbba").unwrap(), &w), 0.0);
    }

    #[test]
    fn brute_min_on_two_letter_words() {
        let a = Alphabet::from_chars("ab").unwrap();
        let mut w = PatternWeights::<f64>::new(2, a.clone());
        w.set_cost(&[0, 1], 1, -1.0).unwrap();
        let mut g = CnfGrammar::new("S");
        for x in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            g.add_word(0, &x, 0.0);
        }
        let inst = Instance {
            weights: w,
            grammar: Grammar::Cnf(g.clone()),
        };
        assert_eq!(brute_min(&inst).unwrap(), (-1.0, Some(vec![0, 1])));
        let z = brute_log_z(&inst).unwrap();
        assert!((z - (1f64.exp() + 3.0).ln()).abs() < 1e-12);

        let mut empty = CnfGrammar::<f64>::new("S");
        empty.add_word(0, &[0], 0.0);
        let inst = Instance {
            weights: PatternWeights::new(2, a),
            grammar: Grammar::Cnf(empty),
        };
        assert_eq!(brute_min(&inst).unwrap(), (f64::INFINITY, None));
        assert_eq!(brute_log_z(&inst).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn size_guard() {
        let a = Alphabet::from_chars("abc").unwrap();
        let inst = Instance {
            weights: PatternWeights::<f64>::new(13, a),
            grammar: Grammar::Interaction(InteractionGrammar::new(1).unwrap()),
        };
        assert!(matches!(brute_min(&inst), Err(Error::SizeRefused { .. })));
    }

    #[test]
    fn raw_interaction_cost() {
        let mut ig = InteractionGrammar::<f64>::new(1).unwrap();
        ig.add_pair_uniform(&[1, 1], &[1, 1], (-1.0).into()).unwrap();
        assert_eq!(interaction_parse_cost(&[1, 1, 1, 1], &ig), -1.0);
        assert_eq!(interaction_parse_cost(&[1; 8], &ig), -2.0);
        assert_eq!(interaction_parse_cost(&[1, 1, 1], &ig), 0.0);
        assert_eq!(interaction_parse_cost(&[], &ig), 0.0);
    }

    #[test]
    fn pattern_viterbi_small() {
        let a = Alphabet::from_chars("ab").unwrap();
        let mut w = PatternWeights::<f64>::new(4, a.clone());
        w.set_uniform_cost(&a.parse("ab").unwrap(), -1.0).unwrap();
        w.set_uniform_cost(&a.parse("ba").unwrap(), 0.5).unwrap();
        assert_eq!(pattern_viterbi(&w), -1.5);
    }
}
