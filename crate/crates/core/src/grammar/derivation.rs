use crate::grammar::{CnfGrammar, RuleBody};
use crate::pattern::{Alphabet, Symbol};
use crate::scalar::Scalar;

/// Parse tree node: the applied rule and the span `[start, end]` it derives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: usize,
    pub start: usize,
    pub end: usize,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(rule: usize, start: usize, end: usize) -> Self {
        Derivation {
            rule,
            start,
            end,
            children: Vec::new(),
        }
    }

    /// Sum of rule weights over all nodes.
    pub fn cost<T: Scalar>(&self, g: &CnfGrammar<T>) -> T {
        let own = g.rules()[self.rule].weight.eval(self.start, self.end);
        self.children.iter().fold(own, |acc, c| acc + c.cost(g))
    }

    pub fn yield_word<T: Scalar>(&self, g: &CnfGrammar<T>) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.collect(g, &mut out);
        out
    }

    fn collect<T: Scalar>(&self, g: &CnfGrammar<T>, out: &mut Vec<Symbol>) {
        match &g.rules()[self.rule].body {
            RuleBody::Word(w) => out.extend_from_slice(w),
            RuleBody::Epsilon => {}
            RuleBody::Binary(..) => self.children.iter().for_each(|c| c.collect(g, out)),
        }
    }

    /// Checks that the tree is a derivation of `x` from the start symbol.
    pub fn check<T: Scalar>(&self, g: &CnfGrammar<T>, x: &[Symbol]) -> Result<(), String> {
        if g.rules()[self.rule].lhs != g.start() {
            return Err("root rule does not expand the start symbol".into());
        }
        if self.start != 1 || self.end != x.len() {
            return Err(format!("root span [{}, {}] does not cover the word", self.start, self.end));
        }
        self.check_node(g, x)
    }

    fn check_node<T: Scalar>(&self, g: &CnfGrammar<T>, x: &[Symbol]) -> Result<(), String> {
        let rule = g.rules().get(self.rule).ok_or("rule id out of range")?;
        match &rule.body {
            RuleBody::Epsilon => {
                if self.end + 1 != self.start || !self.children.is_empty() {
                    return Err("empty rule must derive an empty span".into());
                }
            }
            RuleBody::Word(w) => {
                let span = x.get(self.start - 1..self.end).ok_or("span outside word")?;
                if span != w.as_slice() || !self.children.is_empty() {
                    return Err(format!("terminal rule {} does not match [{}, {}]", self.rule, self.start, self.end));
                }
            }
            RuleBody::Binary(b, c) => {
                let [left, right] = self.children.as_slice() else {
                    return Err("binary rule needs two children".into());
                };
                if g.rules()[left.rule].lhs != *b || g.rules()[right.rule].lhs != *c {
                    return Err("child nonterminals do not match the rule".into());
                }
                if left.start != self.start
                    || right.end != self.end
                    || left.end + 1 != right.start
                    || left.end < left.start
                    || right.end < right.start
                {
                    return Err("children do not split the span".into());
                }
                left.check_node(g, x)?;
                right.check_node(g, x)?;
            }
        }
        Ok(())
    }

    /// Bracketed rendering, e.g. `(S (A a) (B b))`.
    pub fn render<T: Scalar>(&self, g: &CnfGrammar<T>, alphabet: &Alphabet) -> String {
        let rule = &g.rules()[self.rule];
        let head = g.name(rule.lhs);
        match &rule.body {
            RuleBody::Epsilon => format!("({head})"),
            RuleBody::Word(w) => format!("({head} {})", alphabet.render(w)),
            RuleBody::Binary(..) => {
                let inner: Vec<String> = self.children.iter().map(|c| c.render(g, alphabet)).collect();
                format!("({head} {})", inner.join(" "))
            }
        }
    }
}
