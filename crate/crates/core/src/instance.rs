//! A complete problem: pattern costs plus a grammar.

use crate::error::Result;
use crate::grammar::interaction::{compile_interaction_grammar, InteractionGrammar};
use crate::grammar::{normalize_terminal_words, CnfGrammar};
use crate::costs::CostTables;
use crate::pattern::{PatternIndex, PatternWeights};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Grammar<T> {
    Cnf(CnfGrammar<T>),
    Interaction(InteractionGrammar<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance<T> {
    pub weights: PatternWeights<T>,
    pub grammar: Grammar<T>,
}

impl<T: Scalar> Instance<T> {
    pub fn n(&self) -> usize {
        self.weights.n()
    }

    /// Adds every grammar word missing from the vocabulary at zero cost.
    pub fn normalized(&self) -> Result<Self> {
        let weights = match &self.grammar {
            Grammar::Cnf(g) => normalize_terminal_words(g, &self.weights)?.1,
            Grammar::Interaction(ig) => {
                // The compiled form also derives single labels.
                let weights = ig.normalize_vocabulary(&self.weights)?;
                normalize_terminal_words(&self.cnf(), &weights)?.1
            }
        };
        Ok(Instance {
            weights,
            grammar: self.grammar.clone(),
        })
    }

    /// The grammar as extended CNF (interaction grammars are compiled).
    pub fn cnf(&self) -> CnfGrammar<T> {
        match &self.grammar {
            Grammar::Cnf(g) => g.clone(),
            Grammar::Interaction(ig) => compile_interaction_grammar(ig, self.weights.alphabet().len()),
        }
    }
}

/// Pattern index and cost tables of a normalized instance.
#[derive(Clone, Debug)]
pub struct Prepared<T> {
    pub index: PatternIndex,
    pub tables: CostTables<T>,
}

impl<T: Scalar> Instance<T> {
    /// Normalizes the vocabulary, then builds the index and cost tables.
    pub fn prepare(&self) -> Result<Prepared<T>> {
        let norm = self.normalized()?;
        let index = PatternIndex::build(&norm.weights);
        let tables = CostTables::compute(&index, &norm.weights);
        Ok(Prepared { index, tables })
    }
}
