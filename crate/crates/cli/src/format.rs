//! JSON instance files.
//!
//! ```json
//! {
//!   "n": 2,
//!   "alphabet": ["a", "b"],
//!   "patterns": [{ "word": ["a", "b"], "position": 1, "cost": -1 }],
//!   "grammar": {
//!     "type": "cnf",
//!     "nonterminals": ["S"],
//!     "start": "S",
//!     "rules": [{ "lhs": "S", "rhs": ["a", "b"], "weight": 0 }]
//!   }
//! }
//! ```
//!
//! A pattern entry without `position` gives every placement the same cost;
//! one without `cost` only adds the word to the vocabulary. Weights are a
//! number, `{"span": [[i, j, w], ...]}` or
//! `{"separable": {"start": [...], "end": [...]}}`. Unknown fields are
//! rejected everywhere. See `docs/instance.schema.json`.

use gpb_core::grammar::{GrammarSpec, RuleSpec};
use gpb_core::{
    Alphabet, CnfGrammar, Grammar, Instance, InteractionGrammar, PatternWeights, RuleBody, SpanTable, Symbol, Weight,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub alphabet: Vec<String>,
    #[serde(default)]
    pub patterns: Vec<PatternEntry>,
    pub grammar: GrammarFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternEntry {
    pub word: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GrammarFile {
    Cnf {
        nonterminals: Vec<String>,
        start: String,
        rules: Vec<RuleEntry>,
    },
    Interaction {
        depth: usize,
        pairs: Vec<PairEntry>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleEntry {
    pub lhs: String,
    pub rhs: Vec<String>,
    #[serde(default = "WeightEntry::zero")]
    pub weight: WeightEntry,
}

/// One weight per level, innermost level first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub weights: Vec<WeightEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightEntry {
    Const(f64),
    Table(WeightTable),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightTable {
    /// `[i, j, w]` triples; unlisted spans weigh zero.
    Span(Vec<(usize, usize, f64)>),
    Separable { start: Vec<f64>, end: Vec<f64> },
}

impl WeightEntry {
    fn zero() -> Self {
        WeightEntry::Const(0.0)
    }

    fn to_weight(&self, n: usize, what: &str) -> Result<Weight<f64>, CliError> {
        Ok(match self {
            WeightEntry::Const(v) => Weight::Const(*v),
            WeightEntry::Table(WeightTable::Span(entries)) => {
                let mut table = SpanTable::new(n, 0.0);
                for &(i, j, v) in entries {
                    if i == 0 || j < i || j > n {
                        return Err(CliError::Invalid(format!(
                            "{what}: span [{i}, {j}] is not inside [1, {n}]"
                        )));
                    }
                    table.set(i, j, v);
                }
                Weight::Span(table)
            }
            WeightEntry::Table(WeightTable::Separable { start, end }) => Weight::Separable {
                start: start.clone(),
                end: end.clone(),
            },
        })
    }

    fn from_weight(weight: &Weight<f64>) -> Self {
        match weight {
            Weight::Const(v) => WeightEntry::Const(*v),
            Weight::Span(table) => {
                let n = table.n();
                let mut entries = Vec::new();
                for i in 1..=n {
                    for j in i..=n {
                        let v = table.get(i, j);
                        if v != 0.0 {
                            entries.push((i, j, v));
                        }
                    }
                }
                WeightEntry::Table(WeightTable::Span(entries))
            }
            Weight::Separable { start, end } => WeightEntry::Table(WeightTable::Separable {
                start: start.clone(),
                end: end.clone(),
            }),
        }
    }
}

fn word(alphabet: &Alphabet, labels: &[String], what: &str) -> Result<Vec<Symbol>, CliError> {
    alphabet
        .word(labels)
        .map_err(|e| CliError::Invalid(format!("{what}: {e}")))
}

fn labels(alphabet: &Alphabet, word: &[Symbol]) -> Vec<String> {
    word.iter().map(|&s| alphabet.label(s).to_string()).collect()
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("instance file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance files always serialize")
    }

    pub fn to_instance(&self) -> Result<Instance<f64>, CliError> {
        let alphabet = Alphabet::new(self.alphabet.iter()).map_err(|e| CliError::Invalid(format!("alphabet: {e}")))?;
        let mut weights = PatternWeights::new(self.n, alphabet.clone());
        for (k, entry) in self.patterns.iter().enumerate() {
            let what = format!("patterns[{k}]");
            let w = word(&alphabet, &entry.word, &what)?;
            let done = match (entry.position, entry.cost) {
                (None, None) => weights.add_word(&w).map(|_| ()),
                (None, Some(c)) => weights.set_uniform_cost(&w, c),
                (Some(p), Some(c)) => weights.set_cost(&w, p, c),
                (Some(_), None) => {
                    return Err(CliError::Invalid(format!("{what}: a position needs a cost")));
                }
            };
            done.map_err(|e| CliError::Invalid(format!("{what}: {e}")))?;
        }
        let grammar = match &self.grammar {
            GrammarFile::Cnf {
                nonterminals,
                start,
                rules,
            } => {
                let spec = GrammarSpec {
                    nonterminals: nonterminals.clone(),
                    start: start.clone(),
                    rules: rules
                        .iter()
                        .enumerate()
                        .map(|(k, r)| {
                            Ok(RuleSpec {
                                lhs: r.lhs.clone(),
                                rhs: r.rhs.clone(),
                                weight: r.weight.to_weight(self.n, &format!("grammar.rules[{k}]"))?,
                            })
                        })
                        .collect::<Result<_, CliError>>()?,
                };
                let g = CnfGrammar::from_spec(&spec, &alphabet)
                    .map_err(|e| CliError::Invalid(format!("grammar: {e}")))?;
                Grammar::Cnf(g)
            }
            GrammarFile::Interaction { depth, pairs } => {
                let mut ig =
                    InteractionGrammar::new(*depth).map_err(|e| CliError::Invalid(format!("grammar: {e}")))?;
                for (k, pair) in pairs.iter().enumerate() {
                    let what = format!("grammar.pairs[{k}]");
                    let left = word(&alphabet, &pair.left, &what)?;
                    let right = word(&alphabet, &pair.right, &what)?;
                    let ws = pair
                        .weights
                        .iter()
                        .map(|w| w.to_weight(self.n, &what))
                        .collect::<Result<Vec<_>, _>>()?;
                    ig.add_pair(&left, &right, ws)
                        .map_err(|e| CliError::Invalid(format!("{what}: {e}")))?;
                }
                Grammar::Interaction(ig)
            }
        };
        Ok(Instance { weights, grammar })
    }

    pub fn from_instance(inst: &Instance<f64>) -> Self {
        let alphabet = inst.weights.alphabet();
        let n = inst.n();
        let mut patterns = Vec::new();
        for (w, wd) in inst.weights.words().iter().enumerate() {
            let word = labels(alphabet, wd);
            let placements = (n + 1).saturating_sub(wd.len());
            let assigned: Vec<usize> = (1..=placements)
                .filter(|&s| inst.weights.is_assigned(w, s))
                .collect();
            let costs: Vec<f64> = assigned.iter().map(|&s| inst.weights.cost(w, s)).collect();
            if assigned.is_empty() {
                patterns.push(PatternEntry {
                    word,
                    position: None,
                    cost: None,
                });
            } else if assigned.len() == placements && costs.iter().all(|&c| c == costs[0]) {
                patterns.push(PatternEntry {
                    word,
                    position: None,
                    cost: Some(costs[0]),
                });
            } else {
                for (&s, &c) in assigned.iter().zip(&costs) {
                    patterns.push(PatternEntry {
                        word: word.clone(),
                        position: Some(s),
                        cost: Some(c),
                    });
                }
            }
        }
        let grammar = match &inst.grammar {
            Grammar::Cnf(g) => GrammarFile::Cnf {
                nonterminals: g.nonterminals().to_vec(),
                start: g.name(g.start()).to_string(),
                rules: g
                    .rules()
                    .iter()
                    .map(|r| RuleEntry {
                        lhs: g.name(r.lhs).to_string(),
                        rhs: match &r.body {
                            RuleBody::Binary(b, c) => vec![g.name(*b).to_string(), g.name(*c).to_string()],
                            RuleBody::Word(w) => labels(alphabet, w),
                            RuleBody::Epsilon => Vec::new(),
                        },
                        weight: WeightEntry::from_weight(&r.weight),
                    })
                    .collect(),
            },
            Grammar::Interaction(ig) => GrammarFile::Interaction {
                depth: ig.depth(),
                pairs: ig
                    .pairs()
                    .iter()
                    .map(|p| PairEntry {
                        left: labels(alphabet, &p.left),
                        right: labels(alphabet, &p.right),
                        weights: p.weights.iter().map(WeightEntry::from_weight).collect(),
                    })
                    .collect(),
            },
        };
        InstanceFile {
            n,
            alphabet: alphabet.labels().to_vec(),
            patterns,
            grammar,
        }
    }
}
