//! Parse trees of interaction grammars.

use crate::grammar::interaction::InteractionGrammar;
use crate::pattern::{Alphabet, Symbol};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseItem {
    /// A label derived at level 0.
    Symbol(Symbol),
    Block(Block),
}

/// One application of `S^level → u S^{level−1} v` to `[start, end]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub level: usize,
    pub pair: usize,
    pub start: usize,
    pub end: usize,
    /// Derivation of the middle part, between `u` and `v`.
    pub inner: Vec<ParseItem>,
}

/// A derivation flattened into the top-level sequence of labels and blocks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InteractionParse {
    pub items: Vec<ParseItem>,
}

impl InteractionParse {
    /// Sum of block weights.
    pub fn cost<T: Scalar>(&self, ig: &InteractionGrammar<T>) -> T {
        fn walk<T: Scalar>(items: &[ParseItem], ig: &InteractionGrammar<T>) -> T {
            items.iter().fold(T::zero(), |acc, item| match item {
                ParseItem::Symbol(_) => acc,
                ParseItem::Block(b) => acc + ig.weight(b.level, b.pair).eval(b.start, b.end) + walk(&b.inner, ig),
            })
        }
        walk(&self.items, ig)
    }

    /// The derived word.
    pub fn labeling<T: Scalar>(&self, ig: &InteractionGrammar<T>) -> Vec<Symbol> {
        fn walk<T: Scalar>(items: &[ParseItem], ig: &InteractionGrammar<T>, out: &mut Vec<Symbol>) {
            for item in items {
                match item {
                    ParseItem::Symbol(a) => out.push(*a),
                    ParseItem::Block(b) => {
                        let pair = &ig.pairs()[b.pair];
                        out.extend_from_slice(&pair.left);
                        walk(&b.inner, ig, out);
                        out.extend_from_slice(&pair.right);
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.items, ig, &mut out);
        out
    }

    /// Checks spans and nesting levels against the grammar's depth.
    pub fn check<T: Scalar>(&self, ig: &InteractionGrammar<T>) -> Result<(), String> {
        fn walk<T: Scalar>(
            items: &[ParseItem],
            ig: &InteractionGrammar<T>,
            mut pos: usize,
            max_level: usize,
        ) -> Result<usize, String> {
            for item in items {
                match item {
                    ParseItem::Symbol(_) => pos += 1,
                    ParseItem::Block(b) => {
                        if b.level == 0 || b.level > max_level {
                            return Err(format!("block at level {} inside level {max_level}", b.level));
                        }
                        if b.start != pos + 1 {
                            return Err(format!("block starts at {}, expected {}", b.start, pos + 1));
                        }
                        let pair = ig.pairs().get(b.pair).ok_or("unknown pair")?;
                        let inner_end = walk(&b.inner, ig, pos + pair.left.len(), b.level - 1)?;
                        pos = inner_end + pair.right.len();
                        if b.end != pos {
                            return Err(format!("block ends at {pos}, recorded {}", b.end));
                        }
                    }
                }
            }
            Ok(pos)
        }
        walk(&self.items, ig, 0, ig.depth()).map(|_| ())
    }

    /// Labels with blocks shown as `[u … v]`.
    pub fn render<T: Scalar>(&self, ig: &InteractionGrammar<T>, alphabet: &Alphabet) -> String {
        fn walk<T: Scalar>(items: &[ParseItem], ig: &InteractionGrammar<T>, a: &Alphabet, out: &mut Vec<String>) {
            for item in items {
                match item {
                    ParseItem::Symbol(s) => out.push(a.label(*s).to_string()),
                    ParseItem::Block(b) => {
                        let pair = &ig.pairs()[b.pair];
                        out.push(format!("[{}", a.render(&pair.left)));
                        walk(&b.inner, ig, a, out);
                        out.push(format!("{}]", a.render(&pair.right)));
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.items, ig, alphabet, &mut out);
        out.join(" ")
    }
}
