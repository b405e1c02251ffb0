//! Patterns, per-instance pattern costs, and the prefix-closed pattern index.
//!
//! Positions are 1-based. A pattern is a word pinned to an interval
//! `[start, end]` with `end = start + len - 1`; the empty pattern at
//! position `s` has `start = s + 1` and `end = s`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Index of a label in an [`Alphabet`].
pub type Symbol = u16;

/// Dense id of a pattern inside a [`PatternIndex`].
pub type PatternId = u32;

pub(crate) const NONE: u32 = u32::MAX;

/// Ordered set of labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
    lookup: HashMap<String, Symbol>,
}

impl Alphabet {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Alphabet {
            labels: Vec::new(),
            lookup: HashMap::new(),
        };
        for label in labels {
            let label = label.into();
            if out.lookup.contains_key(&label) {
                return Err(Error::DuplicateLabel(label));
            }
            if out.labels.len() >= Symbol::MAX as usize {
                return Err(Error::AlphabetTooLarge(out.labels.len() + 1));
            }
            out.lookup.insert(label.clone(), out.labels.len() as Symbol);
            out.labels.push(label);
        }
        Ok(out)
    }

    /// Alphabet whose labels are the characters of `chars`.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Self::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, symbol: Symbol) -> &str {
        &self.labels[symbol as usize]
    }

    pub fn symbol(&self, label: &str) -> Result<Symbol> {
        self.lookup
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.lookup.contains_key(label)
    }

    pub fn word<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<Symbol>> {
        labels.iter().map(|l| self.symbol(l.as_ref())).collect()
    }

    /// Parses a word written as a plain string; only valid when every label
    /// is a single character.
    pub fn parse(&self, text: &str) -> Result<Vec<Symbol>> {
        let mut buf = [0u8; 4];
        text.chars()
            .map(|c| self.symbol(c.encode_utf8(&mut buf)))
            .collect()
    }

    /// Renders a word; labels are concatenated when all are one character
    /// long and space-separated otherwise.
    pub fn render(&self, word: &[Symbol]) -> String {
        let compact = self.labels.iter().all(|l| l.chars().count() == 1);
        let sep = if compact { "" } else { " " };
        word.iter()
            .map(|&s| self.label(s))
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// A word placed on an interval of the chain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    start: usize,
    word: Vec<Symbol>,
}

impl Pattern {
    /// Panics if `start == 0`.
    pub fn new(start: usize, word: Vec<Symbol>) -> Self {
        assert!(start >= 1, "pattern positions are 1-based");
        Pattern { start, word }
    }

    /// The empty pattern ending at `s`.
    pub fn empty(s: usize) -> Self {
        Pattern {
            start: s + 1,
            word: Vec::new(),
        }
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.start + self.word.len() - 1
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[Symbol] {
        &self.word
    }

    /// Symbol at absolute position `pos`, if covered.
    pub fn at(&self, pos: usize) -> Option<Symbol> {
        if pos >= self.start && pos <= self.end() {
            Some(self.word[pos - self.start])
        } else {
            None
        }
    }

    /// Appends a word on the right.
    pub fn extend(&self, tail: &[Symbol]) -> Pattern {
        let mut word = self.word.clone();
        word.extend_from_slice(tail);
        Pattern {
            start: self.start,
            word,
        }
    }

    /// The suffix of length `len`.
    pub fn suffix(&self, len: usize) -> Pattern {
        let cut = self.word.len() - len;
        Pattern {
            start: self.start + cut,
            word: self.word[cut..].to_vec(),
        }
    }

    /// `self ≻ other`: ends strictly later, starts no earlier, and agrees on
    /// the overlap.
    pub fn succeeds(&self, other: &Pattern) -> bool {
        if self.end() <= other.end() || self.start < other.start {
            return false;
        }
        (self.start..=other.end()).all(|p| self.at(p) == other.at(p))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]{:?}", self.start, self.end(), self.word)
    }
}

/// Pattern vocabulary with per-placement costs for a chain of length `n`.
///
/// Every placement of every vocabulary word belongs to the model; placements
/// without an explicit cost cost zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PatternWeights<T> {
    n: usize,
    alphabet: Alphabet,
    words: Vec<Vec<Symbol>>,
    lookup: HashMap<Vec<Symbol>, usize>,
    costs: Vec<Vec<T>>,
    assigned: Vec<Vec<bool>>,
}

impl<T: Scalar> PatternWeights<T> {
    pub fn new(n: usize, alphabet: Alphabet) -> Self {
        PatternWeights {
            n,
            alphabet,
            words: Vec::new(),
            lookup: HashMap::new(),
            costs: Vec::new(),
            assigned: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn words(&self) -> &[Vec<Symbol>] {
        &self.words
    }

    pub fn word_index(&self, word: &[Symbol]) -> Option<usize> {
        self.lookup.get(word).copied()
    }

    fn placements_of(&self, len: usize) -> usize {
        (self.n + 1).saturating_sub(len)
    }

    /// Adds `word` to the vocabulary (no-op if present) and returns its index.
    pub fn add_word(&mut self, word: &[Symbol]) -> Result<usize> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&idx) = self.lookup.get(word) {
            return Ok(idx);
        }
        if let Some(&bad) = word.iter().find(|&&s| s as usize >= self.alphabet.len()) {
            return Err(Error::UnknownLabel(format!("#{bad}")));
        }
        let idx = self.words.len();
        let slots = self.placements_of(word.len());
        self.words.push(word.to_vec());
        self.lookup.insert(word.to_vec(), idx);
        self.costs.push(vec![T::zero(); slots]);
        self.assigned.push(vec![false; slots]);
        Ok(idx)
    }

    /// Sets the cost of the placement of `word` starting at `start`.
    pub fn set_cost(&mut self, word: &[Symbol], start: usize, cost: T) -> Result<()> {
        let w = self.add_word(word)?;
        if start == 0 || start + word.len() - 1 > self.n {
            return Err(Error::PlacementOutOfRange {
                word: self.alphabet.render(word),
                start,
                n: self.n,
            });
        }
        let slot = &mut self.assigned[w][start - 1];
        if *slot {
            return Err(Error::DuplicateCost {
                word: self.alphabet.render(word),
                start,
            });
        }
        *slot = true;
        self.costs[w][start - 1] = cost;
        Ok(())
    }

    /// Sets the same cost on every placement of `word`.
    pub fn set_uniform_cost(&mut self, word: &[Symbol], cost: T) -> Result<()> {
        let w = self.add_word(word)?;
        if let Some(i) = self.assigned[w].iter().position(|&a| a) {
            return Err(Error::DuplicateCost {
                word: self.alphabet.render(word),
                start: i + 1,
            });
        }
        for (slot, c) in self.assigned[w].iter_mut().zip(self.costs[w].iter_mut()) {
            *slot = true;
            *c = cost;
        }
        Ok(())
    }

    /// Cost of the placement of vocabulary word `w` at `start`.
    pub fn cost(&self, w: usize, start: usize) -> T {
        self.costs[w]
            .get(start.wrapping_sub(1))
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Whether the placement of `w` at `start` has an explicit cost.
    pub fn is_assigned(&self, w: usize, start: usize) -> bool {
        self.assigned[w].get(start.wrapping_sub(1)).copied().unwrap_or(false)
    }

    /// Sum of `L = Σ|w|` over the vocabulary.
    pub fn total_length(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }

    /// Pattern energy of a full labeling: sum of costs of matched placements.
    pub fn energy(&self, x: &[Symbol]) -> T {
        let mut total = T::zero();
        for (w, word) in self.words.iter().enumerate() {
            for (i, window) in x.windows(word.len()).enumerate() {
                if window == word.as_slice() {
                    total = total + self.costs[w][i];
                }
            }
        }
        total
    }

    /// Same instance with every cost replaced by `map(cost)`.
    pub fn map_costs<U: Scalar>(&self, map: impl Fn(T) -> U) -> PatternWeights<U> {
        PatternWeights {
            n: self.n,
            alphabet: self.alphabet.clone(),
            words: self.words.clone(),
            lookup: self.lookup.clone(),
            costs: self
                .costs
                .iter()
                .map(|row| row.iter().map(|&c| map(c)).collect())
                .collect(),
            assigned: self.assigned.clone(),
        }
    }

    /// Overwrites one placement cost regardless of earlier assignments.
    pub fn override_cost(&mut self, w: usize, start: usize, cost: T) {
        self.costs[w][start - 1] = cost;
        self.assigned[w][start - 1] = true;
    }
}

/// Prefix closure of all placements, grouped by end position.
///
/// Ids are assigned in order of end position and, within a group, by
/// increasing length, so `ε_s` is the first id of group `s` and every edge
/// of the order `≻` goes from a smaller id to a larger one.
#[derive(Clone, Debug)]
pub struct PatternIndex {
    n: usize,
    alphabet_size: usize,
    start: Vec<u32>,
    len: Vec<u32>,
    word_offset: Vec<u32>,
    symbols: Vec<Symbol>,
    prefix: Vec<u32>,
    suffix_parent: Vec<u32>,
    vocab_word: Vec<u32>,
    group_start: Vec<usize>,
    goto_table: Vec<u32>,
    placements: Vec<Vec<u32>>,
    vocabulary: HashMap<Vec<Symbol>, usize>,
    word_lengths: Vec<usize>,
}

impl PatternIndex {
    pub fn build<T: Scalar>(weights: &PatternWeights<T>) -> Self {
        let n = weights.n();
        let sigma = weights.alphabet().len();

        let mut per_end: Vec<HashSet<&[Symbol]>> = vec![HashSet::new(); n + 1];
        for word in weights.words() {
            for start in 1..=(n + 1).saturating_sub(word.len()) {
                for k in 1..=word.len() {
                    per_end[start + k - 1].insert(&word[..k]);
                }
            }
        }

        let mut index = PatternIndex {
            n,
            alphabet_size: sigma,
            start: Vec::new(),
            len: Vec::new(),
            word_offset: Vec::new(),
            symbols: Vec::new(),
            prefix: Vec::new(),
            suffix_parent: Vec::new(),
            vocab_word: Vec::new(),
            group_start: Vec::with_capacity(n + 2),
            goto_table: Vec::new(),
            placements: Vec::new(),
            vocabulary: weights.lookup.clone(),
            word_lengths: weights.words().iter().map(Vec::len).collect(),
        };

        let mut lookup: Vec<HashMap<&[Symbol], u32>> = Vec::with_capacity(n + 1);
        for (s, set) in per_end.iter().enumerate() {
            let mut words: Vec<&[Symbol]> = set.iter().copied().collect();
            words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            index.group_start.push(index.start.len());
            let mut map = HashMap::with_capacity(words.len() + 1);
            let empty: &[Symbol] = &[];
            for word in std::iter::once(empty).chain(words) {
                let id = index.start.len() as u32;
                index.start.push((s + 1 - word.len()) as u32);
                index.len.push(word.len() as u32);
                index.word_offset.push(index.symbols.len() as u32);
                index.symbols.extend_from_slice(word);
                index.prefix.push(if word.is_empty() {
                    NONE
                } else {
                    lookup[s - 1][&word[..word.len() - 1]]
                });
                index.suffix_parent.push(NONE);
                index.vocab_word.push(NONE);
                map.insert(word, id);
            }
            lookup.push(map);
        }
        index.group_start.push(index.start.len());

        for (w, word) in weights.words().iter().enumerate() {
            let row: Vec<u32> = (1..=(n + 1).saturating_sub(word.len()))
                .map(|start| lookup[start + word.len() - 1][word.as_slice()])
                .collect();
            for &id in &row {
                index.vocab_word[id as usize] = w as u32;
            }
            index.placements.push(row);
        }

        // Failure links and transitions, one group at a time: the suffix
        // parent of `β⁻a` is `goto(parent(β⁻), a)`, and `goto(α, a)` falls
        // back to `goto(parent(α), a)` when `αa` is not in the closure.
        let total = index.start.len();
        index.goto_table = vec![NONE; index.group_start[n] * sigma];
        for s in 0..=n {
            for id in index.group(s) {
                let len = index.len[id];
                index.suffix_parent[id] = match len {
                    0 => NONE,
                    1 => index.group_start[s] as u32,
                    _ => {
                        let pre = index.prefix[id] as usize;
                        let last = index.last_symbol(id);
                        index.goto(index.suffix_parent[pre] as usize, last)
                    }
                };
            }
            if s == n {
                break;
            }
            for id in index.group(s + 1) {
                if index.len[id] > 0 {
                    let pre = index.prefix[id] as usize;
                    let last = index.last_symbol(id) as usize;
                    index.goto_table[pre * sigma + last] = id as u32;
                }
            }
            let next_empty = index.group_start[s + 1] as u32;
            for id in index.group(s) {
                for a in 0..sigma {
                    if index.goto_table[id * sigma + a] != NONE {
                        continue;
                    }
                    index.goto_table[id * sigma + a] = match index.suffix_parent[id] {
                        NONE => next_empty,
                        parent => index.goto_table[parent as usize * sigma + a],
                    };
                }
            }
        }
        debug_assert_eq!(index.start.len(), total);
        index
    }

    /// Chain length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// `|Π|`.
    pub fn len(&self) -> usize {
        self.start.len()
    }

    pub fn is_empty(&self) -> bool {
        self.start.is_empty()
    }

    /// Ids of `Π_s`.
    pub fn group(&self, s: usize) -> Range<usize> {
        self.group_start[s]..self.group_start[s + 1]
    }

    /// First id of the groups ending strictly after `s`.
    pub fn first_after(&self, s: usize) -> usize {
        self.group_start[(s + 1).min(self.n + 1)]
    }

    pub fn group_starts(&self) -> &[usize] {
        &self.group_start
    }

    /// `ε_s`.
    pub fn empty(&self, s: usize) -> usize {
        self.group_start[s]
    }

    pub fn start(&self, id: usize) -> usize {
        self.start[id] as usize
    }

    pub fn end(&self, id: usize) -> usize {
        (self.start[id] + self.len[id]) as usize - 1
    }

    pub fn pattern_len(&self, id: usize) -> usize {
        self.len[id] as usize
    }

    pub fn word(&self, id: usize) -> &[Symbol] {
        let off = self.word_offset[id] as usize;
        &self.symbols[off..off + self.len[id] as usize]
    }

    pub fn pattern(&self, id: usize) -> Pattern {
        Pattern {
            start: self.start(id),
            word: self.word(id).to_vec(),
        }
    }

    fn last_symbol(&self, id: usize) -> Symbol {
        let off = self.word_offset[id] as usize;
        self.symbols[off + self.len[id] as usize - 1]
    }

    /// `α⁻`, undefined for empty patterns.
    pub fn prefix(&self, id: usize) -> Option<usize> {
        opt(self.prefix[id])
    }

    /// Parent in the suffix forest of the pattern's group: its longest
    /// proper suffix in the closure.
    pub fn suffix_parent(&self, id: usize) -> Option<usize> {
        opt(self.suffix_parent[id])
    }

    /// Vocabulary index when the pattern is a full placement.
    pub fn vocabulary_word(&self, id: usize) -> Option<usize> {
        opt(self.vocab_word[id])
    }

    /// Id of the placement of vocabulary word `w` at `start`.
    pub fn placement(&self, w: usize, start: usize) -> Option<usize> {
        self.placements
            .get(w)?
            .get(start.wrapping_sub(1))
            .map(|&id| id as usize)
    }

    /// `lsp(αa)` for `α` ending before `n`.
    #[inline]
    pub fn goto(&self, id: usize, symbol: Symbol) -> u32 {
        self.goto_table[id * self.alphabet_size + symbol as usize]
    }

    /// `lsp(α w)` for a closure member `α` and a word `w`.
    pub fn extend_lsp(&self, id: usize, tail: &[Symbol]) -> usize {
        tail.iter()
            .fold(id, |cur, &a| self.goto(cur, a) as usize)
    }

    /// Longest suffix of an arbitrary pattern that belongs to the closure.
    ///
    /// Panics if the pattern does not fit in `[1, n]`.
    pub fn lsp(&self, pattern: &Pattern) -> usize {
        assert!(
            pattern.start() >= 1 && pattern.end() <= self.n,
            "pattern {pattern} outside chain"
        );
        self.extend_lsp(self.empty(pattern.start() - 1), pattern.word())
    }

    /// Id of `pattern` if it belongs to the closure.
    pub fn find(&self, pattern: &Pattern) -> Option<usize> {
        if pattern.start() == 0 || pattern.end() > self.n {
            return None;
        }
        let id = self.lsp(pattern);
        (self.pattern_len(id) == pattern.len()).then_some(id)
    }

    /// `β ≻ α` over closure ids.
    pub fn precedes(&self, alpha: usize, beta: usize) -> bool {
        let (ja, jb) = (self.end(alpha), self.end(beta));
        let (ia, ib) = (self.start(alpha), self.start(beta));
        if jb <= ja || ib < ia {
            return false;
        }
        if ib > ja {
            return true;
        }
        let wa = &self.word(alpha)[ib - ia..];
        let wb = &self.word(beta)[..ja + 1 - ib];
        wa == wb
    }

    /// Edges `(parent, child)` of the suffix forest of `Π_s`.
    pub fn forest_edges(&self, s: usize) -> Vec<(usize, usize)> {
        self.group(s)
            .filter_map(|id| self.suffix_parent(id).map(|p| (p, id)))
            .collect()
    }

    /// Vocabulary index of `word`.
    pub fn vocabulary_index(&self, word: &[Symbol]) -> Option<usize> {
        self.vocabulary.get(word).copied()
    }

    /// Vocabulary word lengths, in vocabulary order.
    pub fn word_lengths(&self) -> &[usize] {
        &self.word_lengths
    }
}

#[inline]
fn opt(v: u32) -> Option<usize> {
    (v != NONE).then_some(v as usize)
}
