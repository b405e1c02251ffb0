//! Exact inference for an arbitrary extended-CNF grammar.
//!
//! `M_A(α, β)` aggregates, over labelings of `[i_α, j_β]` that start with `α`
//! and whose longest closure suffix at `j_β` is `β`, the pattern cost of the
//! whole span plus the cost of deriving `[j_α + 1, j_β]` from `A`.

use crate::costs::CostTables;
use crate::error::{Error, Result};
use crate::grammar::cyk::cyk_min_parse;
use crate::grammar::{CnfGrammar, Derivation, RuleBody};
use crate::pairs::PairLayout;
use crate::pattern::{PatternIndex, PatternWeights, Symbol};
use crate::scalar::Scalar;
use crate::semiring::{LogSum, Tropical, ValueAlgebra};

const TERMINAL: u64 = u32::MAX as u64;
const UNSET: u64 = u64::MAX;

/// Per-nonterminal pair tables plus optional backpointers.
#[derive(Clone, Debug)]
pub struct MessageTable<T> {
    layout: PairLayout,
    values: Vec<Vec<T>>,
    back: Option<Vec<Vec<u64>>>,
}

impl<T: Scalar> MessageTable<T> {
    pub fn layout(&self) -> &PairLayout {
        &self.layout
    }

    /// `M_A(α, β)`, or `None` when the pair has no slot.
    pub fn get(&self, nt: usize, alpha: usize, beta: usize) -> Option<T> {
        self.layout.slot(alpha, beta).map(|s| self.values[nt][s])
    }

    pub fn has_backpointers(&self) -> bool {
        self.back.is_some()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GeneralStats {
    /// Innermost `(α, γ, rule, β)` combinations evaluated.
    pub inner_iterations: u64,
}

#[derive(Clone, Debug)]
pub struct GeneralRun<T> {
    /// Final aggregate in the algebra's value domain.
    pub value: T,
    pub messages: MessageTable<T>,
    pub stats: GeneralStats,
    final_pattern: Option<usize>,
    epsilon_rule: Option<usize>,
}

struct TerminalRule {
    rule: usize,
    lhs: usize,
    vocab: usize,
    len: usize,
}

/// Fills the message tables bottom-up by span length and returns the
/// aggregate over all labelings and derivations.
pub fn run_algorithm1<A: ValueAlgebra, T: Scalar>(
    index: &PatternIndex,
    tables: &CostTables<T>,
    g: &CnfGrammar<T>,
    backpointers: bool,
) -> Result<GeneralRun<T>> {
    let backpointers = backpointers && A::SUPPORTS_ARGMIN;
    let n = index.n();
    let nts = g.nonterminals().len();
    let layout = PairLayout::for_patterns(index);

    let mut terminals = Vec::new();
    let mut binaries = Vec::new();
    let mut epsilon = Vec::new();
    for (k, rule) in g.rules().iter().enumerate() {
        match &rule.body {
            RuleBody::Word(w) => {
                let vocab = index.vocabulary_index(w).ok_or_else(|| Error::WordNotInVocabulary {
                    word: format!("{w:?}"),
                })?;
                terminals.push(TerminalRule {
                    rule: k,
                    lhs: rule.lhs,
                    vocab,
                    len: w.len(),
                });
            }
            RuleBody::Binary(b, c) => binaries.push((k, rule.lhs, *b, *c)),
            RuleBody::Epsilon if rule.lhs == g.start() => epsilon.push(k),
            RuleBody::Epsilon => {
                return Err(Error::InvalidGrammar(format!(
                    "rule {k}: only the start symbol may derive the empty word"
                )))
            }
        }
    }

    let mut values = vec![vec![A::zero::<T>(); layout.len()]; nts];
    let mut back = backpointers.then(|| vec![vec![UNSET; layout.len()]; nts]);
    let mut stats = GeneralStats::default();

    // Single-rule spans.
    for t in &terminals {
        for alpha in 0..index.len() {
            let start = index.end(alpha) + 1;
            if start + t.len - 1 > n {
                break;
            }
            let placed = index.placement(t.vocab, start).expect("placement in range");
            let beta = tables.lsp_pair(alpha, placed);
            let weight = g.rules()[t.rule].weight.eval(start, start + t.len - 1);
            let v = A::extend(A::lift(tables.f_pair(alpha, placed)), A::lift(weight));
            let slot = layout.slot_unchecked(alpha, beta);
            update::<A, T>(&mut values[t.lhs], back.as_mut().map(|b| &mut b[t.lhs]), slot, v, pack(t.rule, TERMINAL));
        }
    }

    // Binary splits by increasing span length; every γ lies strictly inside.
    for len in 2..=n {
        for alpha in 0..index.len() {
            let ja = index.end(alpha);
            if ja + len > n {
                break;
            }
            let jb = ja + len;
            let targets = index.group(jb);
            let row_a = layout.row(alpha).start + targets.start - layout.first_col(alpha);
            for gamma in index.first_after(ja)..index.group(jb).start {
                let f_gamma = A::lift(tables.f(gamma));
                let row_g = layout.row(gamma).start + targets.start - layout.first_col(gamma);
                let slot_ag = layout.slot_unchecked(alpha, gamma);
                for &(rule, lhs, b, c) in &binaries {
                    let mb = values[b][slot_ag];
                    if A::is_zero(mb) {
                        continue;
                    }
                    let weight = A::lift(g.rules()[rule].weight.eval(ja + 1, jb));
                    let base = A::retract(A::extend(mb, weight), f_gamma);
                    stats.inner_iterations += targets.len() as u64;
                    for k in 0..targets.len() {
                        let mc = values[c][row_g + k];
                        if A::is_zero(mc) {
                            continue;
                        }
                        let v = A::extend(base, mc);
                        update::<A, T>(
                            &mut values[lhs],
                            back.as_mut().map(|b| &mut b[lhs]),
                            row_a + k,
                            v,
                            pack(rule, gamma as u64),
                        );
                    }
                }
            }
        }
    }

    let mut value = A::zero::<T>();
    let mut final_pattern = None;
    let mut epsilon_rule = None;
    if n == 0 {
        for &k in &epsilon {
            let v = A::lift(g.rules()[k].weight.eval(1, 0));
            if A::improves(v, value) {
                epsilon_rule = Some(k);
            }
            value = A::combine(value, v);
        }
    } else {
        let root = index.empty(0);
        for beta in index.group(n) {
            let v = values[g.start()][layout.slot_unchecked(root, beta)];
            if A::improves(v, value) {
                final_pattern = Some(beta);
            }
            value = A::combine(value, v);
        }
    }

    Ok(GeneralRun {
        value,
        messages: MessageTable { layout, values, back },
        stats,
        final_pattern,
        epsilon_rule,
    })
}

#[inline]
fn pack(rule: usize, gamma: u64) -> u64 {
    (rule as u64) << 32 | gamma
}

#[inline]
fn update<A: ValueAlgebra, T: Scalar>(values: &mut [T], back: Option<&mut Vec<u64>>, slot: usize, v: T, bp: u64) {
    match back {
        Some(back) => {
            if A::improves(v, values[slot]) {
                values[slot] = v;
                back[slot] = bp;
            }
        }
        None => values[slot] = A::combine(values[slot], v),
    }
}

/// A minimizing labeling with a witness derivation.
#[derive(Clone, Debug, PartialEq)]
pub struct Argmin<T> {
    pub labeling: Vec<Symbol>,
    pub derivation: Derivation,
    pub value: T,
}

/// Walks the backpointers of a tropical run.
pub fn extract_argmin<T: Scalar>(run: &GeneralRun<T>, index: &PatternIndex, g: &CnfGrammar<T>) -> Result<Argmin<T>> {
    let Some(back) = run.messages.back.as_ref() else {
        return Err(Error::NoBackpointers);
    };
    if run.value == T::infinity() {
        return Err(Error::NoDerivableLabeling);
    }
    if index.n() == 0 {
        let rule = run.epsilon_rule.ok_or(Error::NoDerivableLabeling)?;
        return Ok(Argmin {
            labeling: Vec::new(),
            derivation: Derivation::leaf(rule, 1, 0),
            value: run.value,
        });
    }
    let beta = run.final_pattern.ok_or(Error::NoDerivableLabeling)?;
    let mut labeling = vec![0 as Symbol; index.n()];
    let derivation = walk(run, back, index, g, g.start(), index.empty(0), beta, &mut labeling);
    Ok(Argmin {
        labeling,
        derivation,
        value: run.value,
    })
}

#[allow(clippy::too_many_arguments)]
fn walk<T: Scalar>(
    run: &GeneralRun<T>,
    back: &[Vec<u64>],
    index: &PatternIndex,
    g: &CnfGrammar<T>,
    nt: usize,
    alpha: usize,
    beta: usize,
    labeling: &mut [Symbol],
) -> Derivation {
    let slot = run.messages.layout.slot_unchecked(alpha, beta);
    let bp = back[nt][slot];
    debug_assert_ne!(bp, UNSET, "walked into an unset message");
    let rule = (bp >> 32) as usize;
    let start = index.end(alpha) + 1;
    let end = index.end(beta);
    match &g.rules()[rule].body {
        RuleBody::Word(w) => {
            labeling[start - 1..end].copy_from_slice(w);
            Derivation::leaf(rule, start, end)
        }
        RuleBody::Binary(b, c) => {
            let gamma = (bp & TERMINAL) as usize;
            let left = walk(run, back, index, g, *b, alpha, gamma, labeling);
            let right = walk(run, back, index, g, *c, gamma, beta, labeling);
            Derivation {
                rule,
                start,
                end,
                children: vec![left, right],
            }
        }
        RuleBody::Epsilon => unreachable!("empty rules never enter the chart"),
    }
}

/// Minimum of `f(x) + C(x)` with a witness.
pub fn minimize<T: Scalar>(index: &PatternIndex, tables: &CostTables<T>, g: &CnfGrammar<T>) -> Result<Argmin<T>> {
    let run = run_algorithm1::<Tropical, T>(index, tables, g, true)?;
    extract_argmin(&run, index, g)
}

/// `log Σ_{x,λ} exp(−E(x, λ))`.
pub fn log_partition<T: Scalar>(index: &PatternIndex, tables: &CostTables<T>, g: &CnfGrammar<T>) -> Result<T> {
    Ok(run_algorithm1::<LogSum, T>(index, tables, g, false)?.value)
}

/// `f(x) + C(x)` for a full labeling, without the pattern index.
pub fn score_labeling<T: Scalar>(x: &[Symbol], weights: &PatternWeights<T>, g: &CnfGrammar<T>) -> T {
    weights.energy(x) + cyk_min_parse(x, g).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Alphabet;

    fn ab_instance(n: usize) -> (PatternWeights<f64>, CnfGrammar<f64>) {
        let a = Alphabet::from_chars("ab").unwrap();
        let mut w = PatternWeights::new(n, a);
        w.set_cost(&[0, 1], 1, -1.0).unwrap();
        let mut g = CnfGrammar::new("S");
        for x in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            g.add_word(0, &x, 0.0);
        }
        let (g, w) = crate::grammar::normalize_terminal_words(&g, &w).unwrap();
        (w, g)
    }

    #[test]
    fn two_letter_words() {
        let (w, g) = ab_instance(2);
        let index = PatternIndex::build(&w);
        let tables = CostTables::compute(&index, &w);
        let best = minimize(&index, &tables, &g).unwrap();
        assert_eq!(best.value, -1.0);
        assert_eq!(best.labeling, vec![0, 1]);
        assert_eq!(score_labeling(&best.labeling, &w, &g), -1.0);
        let z = log_partition(&index, &tables, &g).unwrap();
        let expected = (1f64.exp() + 3.0).ln();
        assert!((z - expected).abs() < 1e-12);
    }

    #[test]
    fn single_derivable_word() {
        let a = Alphabet::from_chars("ab").unwrap();
        let mut w = PatternWeights::new(2, a);
        w.set_cost(&[0, 1], 1, -1.0).unwrap();
        let mut g = CnfGrammar::new("S");
        g.add_word(0, &[1, 0], 2.0);
        let (g, w) = crate::grammar::normalize_terminal_words(&g, &w).unwrap();
        let index = PatternIndex::build(&w);
        let tables = CostTables::compute(&index, &w);
        assert_eq!(minimize(&index, &tables, &g).unwrap().value, 2.0);
    }

    #[test]
    fn underivable_and_empty_chain() {
        let a = Alphabet::from_chars("ab").unwrap();
        let mut w = PatternWeights::<f64>::new(3, a.clone());
        w.add_word(&[0]).unwrap();
        let mut g = CnfGrammar::new("S");
        g.add_word(0, &[0], 0.0);
        let index = PatternIndex::build(&w);
        let tables = CostTables::compute(&index, &w);
        assert_eq!(minimize(&index, &tables, &g), Err(Error::NoDerivableLabeling));

        let w0 = PatternWeights::<f64>::new(0, a);
        let mut g0 = CnfGrammar::new("S");
        g0.add_epsilon(4.0);
        let index = PatternIndex::build(&w0);
        let tables = CostTables::compute(&index, &w0);
        let best = minimize(&index, &tables, &g0).unwrap();
        assert_eq!((best.value, best.labeling.len()), (4.0, 0));
    }
}
