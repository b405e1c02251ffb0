//! Weighted grammars in extended Chomsky normal form.
//!
//! Allowed shapes are `A → B C`, `A → w` for a non-empty word `w`, and
//! `S → ε` on the start symbol when the start symbol never occurs on a
//! right-hand side.

pub mod cyk;
pub mod derivation;
pub mod enumerate;
pub mod interaction;

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::pattern::{Alphabet, PatternWeights, Symbol};
use crate::scalar::Scalar;
use crate::weight::Weight;

pub use derivation::Derivation;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleBody {
    Binary(usize, usize),
    Word(Vec<Symbol>),
    Epsilon,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rule<T> {
    pub lhs: usize,
    pub body: RuleBody,
    pub weight: Weight<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CnfGrammar<T> {
    nonterminals: Vec<String>,
    lookup: HashMap<String, usize>,
    start: usize,
    rules: Vec<Rule<T>>,
}

impl<T: Scalar> CnfGrammar<T> {
    /// A grammar with a single start nonterminal and no rules.
    pub fn new(start: &str) -> Self {
        let mut g = CnfGrammar {
            nonterminals: Vec::new(),
            lookup: HashMap::new(),
            start: 0,
            rules: Vec::new(),
        };
        g.start = g.add_nonterminal(start);
        g
    }

    /// Returns the id of `name`, creating it when missing.
    pub fn add_nonterminal(&mut self, name: &str) -> usize {
        if let Some(&id) = self.lookup.get(name) {
            return id;
        }
        let id = self.nonterminals.len();
        self.nonterminals.push(name.to_string());
        self.lookup.insert(name.to_string(), id);
        id
    }

    pub fn nonterminal(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn name(&self, id: usize) -> &str {
        &self.nonterminals[id]
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn rules(&self) -> &[Rule<T>] {
        &self.rules
    }

    pub fn add_rule(&mut self, lhs: usize, body: RuleBody, weight: impl Into<Weight<T>>) -> usize {
        self.rules.push(Rule {
            lhs,
            body,
            weight: weight.into(),
        });
        self.rules.len() - 1
    }

    pub fn add_binary(&mut self, lhs: usize, left: usize, right: usize, weight: impl Into<Weight<T>>) -> usize {
        self.add_rule(lhs, RuleBody::Binary(left, right), weight)
    }

    pub fn add_word(&mut self, lhs: usize, word: &[Symbol], weight: impl Into<Weight<T>>) -> usize {
        self.add_rule(lhs, RuleBody::Word(word.to_vec()), weight)
    }

    pub fn add_epsilon(&mut self, weight: impl Into<Weight<T>>) -> usize {
        self.add_rule(self.start, RuleBody::Epsilon, weight)
    }

    /// Distinct terminal words, in order of first use.
    pub fn terminal_words(&self) -> Vec<Vec<Symbol>> {
        let mut seen = HashSet::new();
        self.rules
            .iter()
            .filter_map(|r| match &r.body {
                RuleBody::Word(w) if seen.insert(w.clone()) => Some(w.clone()),
                _ => None,
            })
            .collect()
    }

    /// Structural and vocabulary checks on an already-typed grammar.
    pub fn validate(&self, vocabulary: Option<&PatternWeights<T>>) -> ValidationReport {
        let mut report = ValidationReport::default();
        let on_rhs: HashSet<usize> = self
            .rules
            .iter()
            .flat_map(|r| match r.body {
                RuleBody::Binary(b, c) => vec![b, c],
                _ => Vec::new(),
            })
            .collect();
        for (k, rule) in self.rules.iter().enumerate() {
            match &rule.body {
                RuleBody::Epsilon if rule.lhs != self.start => {
                    report.push(Violation::EpsilonNotOnStart { rule: k });
                }
                RuleBody::Epsilon if on_rhs.contains(&self.start) => {
                    report.push(Violation::EpsilonWithStartOnRhs { rule: k });
                }
                RuleBody::Word(w) if w.is_empty() => {
                    report.push(Violation::RuleArity { rule: k, len: 0 });
                }
                _ => {}
            }
        }
        for id in self.unreachable() {
            report.push(Violation::Unreachable(self.nonterminals[id].clone()));
        }
        if let Some(weights) = vocabulary {
            for (k, rule) in self.rules.iter().enumerate() {
                if let RuleBody::Word(w) = &rule.body {
                    if !w.is_empty() && weights.word_index(w).is_none() {
                        report.push(Violation::TerminalNotInVocabulary {
                            rule: k,
                            word: weights.alphabet().render(w),
                        });
                    }
                }
            }
        }
        report
    }

    fn unreachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nonterminals.len()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(a) = stack.pop() {
            for rule in self.rules.iter().filter(|r| r.lhs == a) {
                if let RuleBody::Binary(b, c) = rule.body {
                    for x in [b, c] {
                        if !seen[x] {
                            seen[x] = true;
                            stack.push(x);
                        }
                    }
                }
            }
        }
        (0..seen.len()).filter(|&i| !seen[i]).collect()
    }

    /// Fails on shape errors; vocabulary membership is not checked.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate(None);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidGrammar(report.to_string()))
        }
    }

    /// Builds a typed grammar from name-level rules.
    pub fn from_spec(spec: &GrammarSpec<T>, alphabet: &Alphabet) -> Result<Self> {
        let (grammar, report) = typed(spec, alphabet);
        match grammar {
            Some(g) if report.is_valid() => Ok(g),
            _ => Err(Error::InvalidGrammar(report.to_string())),
        }
    }

    pub fn map_weights<U: Scalar>(&self, map: impl Fn(T) -> U + Copy) -> CnfGrammar<U> {
        CnfGrammar {
            nonterminals: self.nonterminals.clone(),
            lookup: self.lookup.clone(),
            start: self.start,
            rules: self
                .rules
                .iter()
                .map(|r| Rule {
                    lhs: r.lhs,
                    body: r.body.clone(),
                    weight: r.weight.map(map),
                })
                .collect(),
        }
    }
}

/// A rule written with names: each right-hand token is a nonterminal name
/// or an alphabet label.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleSpec<T> {
    pub lhs: String,
    pub rhs: Vec<String>,
    pub weight: Weight<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrammarSpec<T> {
    pub nonterminals: Vec<String>,
    pub start: String,
    pub rules: Vec<RuleSpec<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownStart(String),
    DuplicateNonterminal(String),
    NameClash(String),
    UnknownLhs { rule: usize, name: String },
    UnknownSymbol { rule: usize, token: String },
    RuleArity { rule: usize, len: usize },
    MixedBody { rule: usize },
    EpsilonNotOnStart { rule: usize },
    EpsilonWithStartOnRhs { rule: usize },
    Unreachable(String),
    TerminalNotInVocabulary { rule: usize, word: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownStart(s) => write!(f, "start symbol `{s}` is not a declared nonterminal"),
            Violation::DuplicateNonterminal(s) => write!(f, "nonterminal `{s}` declared twice"),
            Violation::NameClash(s) => write!(f, "`{s}` is both a nonterminal and a label"),
            Violation::UnknownLhs { rule, name } => {
                write!(f, "rule {rule}: left-hand side `{name}` is not a declared nonterminal")
            }
            Violation::UnknownSymbol { rule, token } => {
                write!(f, "rule {rule}: `{token}` is neither a nonterminal nor a label")
            }
            Violation::RuleArity { rule, len } => {
                write!(f, "rule arity: rule {rule} has {len} nonterminals on its right-hand side")
            }
            Violation::MixedBody { rule } => {
                write!(f, "rule arity: rule {rule} mixes nonterminals and labels")
            }
            Violation::EpsilonNotOnStart { rule } => {
                write!(f, "rule {rule}: only the start symbol may derive the empty word")
            }
            Violation::EpsilonWithStartOnRhs { rule } => write!(
                f,
                "rule {rule}: empty rule on a start symbol that appears on a right-hand side"
            ),
            Violation::Unreachable(s) => write!(f, "nonterminal `{s}` is unreachable"),
            Violation::TerminalNotInVocabulary { rule, word } => {
                write!(f, "rule {rule}: terminal word `{word}` not in the pattern vocabulary")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let lines: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", lines.join("; "))
    }
}

fn typed<T: Scalar>(spec: &GrammarSpec<T>, alphabet: &Alphabet) -> (Option<CnfGrammar<T>>, ValidationReport) {
    let mut report = ValidationReport::default();
    let mut seen = HashSet::new();
    for name in &spec.nonterminals {
        if !seen.insert(name.as_str()) {
            report.push(Violation::DuplicateNonterminal(name.clone()));
        }
        if alphabet.contains(name) {
            report.push(Violation::NameClash(name.clone()));
        }
    }
    if !seen.contains(spec.start.as_str()) {
        report.push(Violation::UnknownStart(spec.start.clone()));
        return (None, report);
    }
    let mut g = CnfGrammar::new(&spec.start);
    for name in &spec.nonterminals {
        g.add_nonterminal(name);
    }
    for (k, rule) in spec.rules.iter().enumerate() {
        let Some(lhs) = g.nonterminal(&rule.lhs) else {
            report.push(Violation::UnknownLhs {
                rule: k,
                name: rule.lhs.clone(),
            });
            continue;
        };
        let mut nts = Vec::new();
        let mut word = Vec::new();
        let mut ok = true;
        for token in &rule.rhs {
            if let Some(id) = g.nonterminal(token) {
                nts.push(id);
            } else if let Ok(sym) = alphabet.symbol(token) {
                word.push(sym);
            } else {
                report.push(Violation::UnknownSymbol {
                    rule: k,
                    token: token.clone(),
                });
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        let body = match (nts.len(), word.len()) {
            (0, 0) => RuleBody::Epsilon,
            (0, _) => RuleBody::Word(word),
            (2, 0) => RuleBody::Binary(nts[0], nts[1]),
            (len, 0) => {
                report.push(Violation::RuleArity { rule: k, len });
                continue;
            }
            _ => {
                report.push(Violation::MixedBody { rule: k });
                continue;
            }
        };
        g.add_rule(lhs, body, rule.weight.clone());
    }
    if report.is_valid() {
        report = g.validate(None);
    }
    (Some(g), report)
}

/// Lists every violation of a name-level grammar, including terminal words
/// missing from `vocabulary` when it is given.
pub fn validate_cnf<T: Scalar>(
    spec: &GrammarSpec<T>,
    alphabet: &Alphabet,
    vocabulary: Option<&PatternWeights<T>>,
) -> ValidationReport {
    let (grammar, mut report) = typed(spec, alphabet);
    if let (Some(g), Some(weights)) = (grammar, vocabulary) {
        for v in g.validate(Some(weights)).violations {
            if matches!(v, Violation::TerminalNotInVocabulary { .. }) {
                report.push(v);
            }
        }
    }
    report
}

/// Adds every terminal word of `g` missing from the vocabulary, with zero
/// cost at all placements. Energies are unchanged.
pub fn normalize_terminal_words<T: Scalar>(
    g: &CnfGrammar<T>,
    weights: &PatternWeights<T>,
) -> Result<(CnfGrammar<T>, PatternWeights<T>)> {
    let mut out = weights.clone();
    for word in g.terminal_words() {
        out.add_word(&word)?;
    }
    Ok((g.clone(), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(rules: &[(&str, &[&str])]) -> GrammarSpec<f64> {
        GrammarSpec {
            nonterminals: vec!["S".into(), "A".into()],
            start: "S".into(),
            rules: rules
                .iter()
                .map(|(l, r)| RuleSpec {
                    lhs: l.to_string(),
                    rhs: r.iter().map(|s| s.to_string()).collect(),
                    weight: Weight::Const(0.0),
                })
                .collect(),
        }
    }

    #[test]
    fn accepts_plain_cnf() {
        let a = Alphabet::from_chars("ab").unwrap();
        let mut s = spec(&[("S", &["S", "S"]), ("S", &["a"]), ("S", &["b"])]);
        s.nonterminals.pop();
        let mut w = PatternWeights::new(3, a.clone());
        w.add_word(&[0]).unwrap();
        w.add_word(&[1]).unwrap();
        assert!(validate_cnf(&s, &a, Some(&w)).is_valid());
    }

    #[test]
    fn reports_arity_and_vocabulary() {
        let a = Alphabet::from_chars("ab").unwrap();
        let s = spec(&[("S", &["S", "A", "S"]), ("S", &["A", "A"]), ("A", &["a", "b"])]);
        let w = PatternWeights::new(3, a.clone());
        let report = validate_cnf(&s, &a, Some(&w));
        let text = report.to_string();
        assert!(text.contains("rule arity"), "{text}");
        assert!(text.contains("not in the pattern vocabulary"), "{text}");
    }

    #[test]
    fn epsilon_rules_are_restricted() {
        let a = Alphabet::from_chars("ab").unwrap();
        let s = spec(&[("S", &["A", "A"]), ("A", &[]), ("A", &["a"])]);
        let r = validate_cnf(&s, &a, None);
        assert!(r.violations.contains(&Violation::EpsilonNotOnStart { rule: 1 }));
        let s = spec(&[("S", &["S", "A"]), ("S", &[]), ("A", &["a"])]);
        let r = validate_cnf(&s, &a, None);
        assert!(r.violations.contains(&Violation::EpsilonWithStartOnRhs { rule: 1 }));
    }

    #[test]
    fn unreachable_nonterminal() {
        let a = Alphabet::from_chars("ab").unwrap();
        let s = spec(&[("S", &["a"]), ("A", &["b"])]);
        let r = validate_cnf(&s, &a, None);
        assert_eq!(r.violations, vec![Violation::Unreachable("A".into())]);
    }

    #[test]
    fn normalization_adds_missing_words() {
        let a = Alphabet::from_chars("ab").unwrap();
        let mut g = CnfGrammar::<f64>::new("S");
        let s = g.start();
        g.add_word(s, &[0, 1], 0.0);
        let mut w = PatternWeights::new(3, a);
        w.set_uniform_cost(&[1, 0], 2.0).unwrap();
        let (g2, w2) = normalize_terminal_words(&g, &w).unwrap();
        assert_eq!(g2, g);
        assert_eq!(w2.words(), &[vec![1, 0], vec![0, 1]]);
        assert_eq!(w2.cost(1, 1), 0.0);
        assert!(g2.validate(Some(&w2)).is_valid());
    }
}
