//! Level-by-level inference for interaction grammars.
//!
//! `M_k(α, β)` is the least pattern cost of `[i_α, j_β]` plus the cost of
//! deriving `[j_α + 1, j_β]` from `S^k`. Level 0 is a plain forward pass;
//! level `k` first applies one interaction rule around level `k − 1`
//! messages (vertical pass), keeps level `k − 1` through the unit rule, and
//! then closes the result under concatenation with a shortest-path pass
//! over the pattern order (horizontal pass).

use crate::costs::CostTables;
use crate::error::{Error, Result};
use crate::grammar::interaction::InteractionGrammar;
use crate::interaction::apsp::{apsp_in_place, ApspBackend, ApspStats, DIRECT};
use crate::interaction::m0::{compute_m0, m0_path};
use crate::interaction::parse::{Block, InteractionParse, ParseItem};
use crate::pairs::PairLayout;
use crate::pattern::{PatternIndex, Symbol};
use crate::scalar::Scalar;

const TAG_SHIFT: u32 = 62;
const CARRY: u64 = 0;
const VERTICAL: u64 = 1 << TAG_SHIFT;
const SPLIT: u64 = 2 << TAG_SHIFT;
const EMPTY_MIDDLE: u64 = u32::MAX as u64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Algorithm2Options {
    pub backend: ApspBackend,
    pub backpointers: bool,
}

impl Default for Algorithm2Options {
    fn default() -> Self {
        Algorithm2Options {
            backend: ApspBackend::useful_edge(),
            backpointers: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InteractionStats {
    pub m0_steps: u64,
    /// Vertical-pass triples `(α, pair, γ)` per level, level 1 first.
    pub vertical_triples: Vec<u64>,
    /// Largest number of triples charged to a single anchor `α`.
    pub max_anchor_triples: u64,
    pub apsp: Vec<ApspStats>,
}

#[derive(Clone, Debug)]
pub struct InteractionRun<T> {
    pub value: T,
    pub stats: InteractionStats,
    layout: PairLayout,
    back: Option<Vec<Vec<u64>>>,
    final_pattern: Option<usize>,
}

/// Vocabulary data of one pair.
#[derive(Clone, Copy, Debug)]
pub(crate) struct PairInfo {
    pub left: usize,
    pub left_len: usize,
    pub right: usize,
    pub right_len: usize,
}

pub(crate) fn pair_info<T: Scalar>(index: &PatternIndex, ig: &InteractionGrammar<T>) -> Result<Vec<PairInfo>> {
    ig.pairs()
        .iter()
        .map(|p| {
            let find = |w: &[Symbol]| {
                index
                    .vocabulary_index(w)
                    .ok_or_else(|| Error::WordNotInVocabulary { word: format!("{w:?}") })
            };
            Ok(PairInfo {
                left: find(&p.left)?,
                left_len: p.left.len(),
                right: find(&p.right)?,
                right_len: p.right.len(),
            })
        })
        .collect()
}

/// Candidates `M̃_k` from `M_{k−1}`, written into `out`; `out` starts as a
/// copy of `prev`. Returns total triples and the per-anchor maximum.
#[allow(clippy::too_many_arguments)]
pub(crate) fn vertical_pass<T: Scalar>(
    index: &PatternIndex,
    tables: &CostTables<T>,
    layout: &PairLayout,
    ig: &InteractionGrammar<T>,
    pairs: &[PairInfo],
    level: usize,
    prev: &[T],
    out: &mut [T],
    mut back: Option<&mut [u64]>,
) -> (u64, u64) {
    out.copy_from_slice(prev);
    if let Some(b) = back.as_deref_mut() {
        b.fill(CARRY);
    }
    let mut total = 0u64;
    let mut max_anchor = 0u64;
    for alpha in 0..index.len() {
        let row_triples = vertical_row(index, tables, layout, ig, pairs, level, prev, alpha, |beta, value, bp| {
            let slot = layout.slot_unchecked(alpha, beta);
            if value < out[slot] {
                out[slot] = value;
                if let Some(b) = back.as_deref_mut() {
                    b[slot] = bp;
                }
            }
        });
        total += row_triples;
        max_anchor = max_anchor.max(row_triples);
    }
    (total, max_anchor)
}

/// Emits every interaction candidate `(β, value, backpointer)` anchored at
/// `α` and returns the number of triples examined.
#[allow(clippy::too_many_arguments)]
pub(crate) fn vertical_row<T: Scalar>(
    index: &PatternIndex,
    tables: &CostTables<T>,
    layout: &PairLayout,
    ig: &InteractionGrammar<T>,
    pairs: &[PairInfo],
    level: usize,
    prev: &[T],
    alpha: usize,
    mut emit: impl FnMut(usize, T, u64),
) -> u64 {
    let n = index.n();
    let ja = index.end(alpha);
    let mut triples = 0u64;
    for (p, info) in pairs.iter().enumerate() {
        if ja + info.left_len + info.right_len > n {
            continue;
        }
        let weight = ig.weight(level, p);
        let placed_u = index.placement(info.left, ja + 1).expect("in range");
        let delta = tables.lsp_pair(alpha, placed_u);
        let jd = ja + info.left_len;
        let base = tables.f_pair(alpha, placed_u) - tables.f(delta);
        let tag = VERTICAL | (p as u64) << 32;

        // Empty middle: v directly after u.
        let placed_v = index.placement(info.right, jd + 1).expect("in range");
        let beta = tables.lsp_pair(delta, placed_v);
        let value = base + weight.eval(ja + 1, jd + info.right_len) + tables.f_pair(delta, placed_v);
        emit(beta, value, tag | EMPTY_MIDDLE);
        triples += 1;

        let first = layout.first_col(delta);
        let last = index.group(n + 1 - info.right_len).start;
        let row = &prev[layout.row(delta)];
        for gamma in first..last {
            triples += 1;
            let inner = row[gamma - first];
            if inner == T::infinity() {
                continue;
            }
            let jg = index.end(gamma);
            let placed_v = index.placement(info.right, jg + 1).expect("in range");
            let beta = tables.lsp_pair(gamma, placed_v);
            let value = inner + base + weight.eval(ja + 1, jg + info.right_len) + tables.f_pair(gamma, placed_v)
                - tables.f(gamma);
            emit(beta, value, tag | gamma as u64);
        }
    }
    triples
}

/// Closes `table` under `M(α, γ) + M(γ, β) − f(γ)` in place.
pub(crate) fn horizontal_pass<T: Scalar>(
    index: &PatternIndex,
    tables: &CostTables<T>,
    layout: &PairLayout,
    table: &mut [T],
    back: Option<&mut [u64]>,
    backend: ApspBackend,
) -> ApspStats {
    shift_by_f(index, tables, layout, table, true);
    let stats = match back {
        Some(back) => {
            let mut pred = vec![DIRECT; layout.len()];
            let stats = apsp_in_place(layout, table, backend, Some(&mut pred));
            for (b, &p) in back.iter_mut().zip(&pred) {
                if p != DIRECT {
                    *b = SPLIT | p as u64;
                }
            }
            stats
        }
        None => apsp_in_place(layout, table, backend, None),
    };
    shift_by_f(index, tables, layout, table, false);
    stats
}

fn shift_by_f<T: Scalar>(index: &PatternIndex, tables: &CostTables<T>, layout: &PairLayout, table: &mut [T], down: bool) {
    for u in 0..index.len() {
        let first = layout.first_col(u);
        for (k, v) in table[layout.row(u)].iter_mut().enumerate() {
            if *v == T::infinity() {
                continue;
            }
            let f = tables.f(first + k);
            *v = if down { *v - f } else { *v + f };
        }
    }
}

/// Minimum of `f(x) + C(x)` for a depth-`d` interaction grammar.
pub fn run_algorithm2<T: Scalar>(
    index: &PatternIndex,
    tables: &CostTables<T>,
    ig: &InteractionGrammar<T>,
    options: Algorithm2Options,
) -> Result<InteractionRun<T>> {
    let pairs = pair_info(index, ig)?;
    let layout = PairLayout::for_patterns(index);
    let mut stats = InteractionStats::default();
    let (mut prev, steps) = compute_m0(index, tables, &layout);
    stats.m0_steps = steps;

    let mut backs = options.backpointers.then(Vec::new);
    let mut out = vec![T::infinity(); layout.len()];
    for level in 1..=ig.depth() {
        let mut back = options.backpointers.then(|| vec![CARRY; layout.len()]);
        let (triples, max_anchor) =
            vertical_pass(index, tables, &layout, ig, &pairs, level, &prev, &mut out, back.as_deref_mut());
        stats.vertical_triples.push(triples);
        stats.max_anchor_triples = stats.max_anchor_triples.max(max_anchor);
        stats
            .apsp
            .push(horizontal_pass(index, tables, &layout, &mut out, back.as_deref_mut(), options.backend));
        std::mem::swap(&mut prev, &mut out);
        if let (Some(all), Some(b)) = (backs.as_mut(), back) {
            all.push(b);
        }
    }
    drop(out);

    let (value, final_pattern) = if index.n() == 0 {
        (T::zero(), None)
    } else {
        let root = index.empty(0);
        let mut best = (T::infinity(), None);
        for beta in index.group(index.n()) {
            let v = prev[layout.slot_unchecked(root, beta)];
            if v < best.0 {
                best = (v, Some(beta));
            }
        }
        best
    };
    Ok(InteractionRun {
        value,
        stats,
        layout,
        back: backs,
        final_pattern,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InteractionArgmin<T> {
    pub labeling: Vec<Symbol>,
    pub parse: InteractionParse,
    pub value: T,
}

/// Rebuilds a minimizing labeling and its parse from a run with
/// backpointers.
pub fn extract_interaction_argmin<T: Scalar>(
    run: &InteractionRun<T>,
    index: &PatternIndex,
    tables: &CostTables<T>,
    ig: &InteractionGrammar<T>,
) -> Result<InteractionArgmin<T>> {
    let back = run.back.as_ref().ok_or(Error::NoBackpointers)?;
    if run.value == T::infinity() {
        return Err(Error::NoDerivableLabeling);
    }
    let mut parse = InteractionParse::default();
    if let Some(beta) = run.final_pattern {
        let pairs = pair_info(index, ig)?;
        let walker = Walker {
            index,
            tables,
            layout: &run.layout,
            back,
            pairs: &pairs,
        };
        walker.walk(ig.depth(), index.empty(0), beta, &mut parse.items);
    }
    Ok(InteractionArgmin {
        labeling: parse.labeling(ig),
        parse,
        value: run.value,
    })
}

struct Walker<'a, T> {
    index: &'a PatternIndex,
    tables: &'a CostTables<T>,
    layout: &'a PairLayout,
    back: &'a [Vec<u64>],
    pairs: &'a [PairInfo],
}

impl<T: Scalar> Walker<'_, T> {
    fn walk(&self, level: usize, alpha: usize, beta: usize, out: &mut Vec<ParseItem>) {
        if level == 0 {
            out.extend(m0_path(self.index, self.tables, alpha, beta).into_iter().map(ParseItem::Symbol));
            return;
        }
        let bp = self.back[level - 1][self.layout.slot_unchecked(alpha, beta)];
        let low = (bp & EMPTY_MIDDLE) as usize;
        match bp & (3 << TAG_SHIFT) {
            CARRY => self.walk(level - 1, alpha, beta, out),
            SPLIT => {
                self.walk(level, alpha, low, out);
                self.walk(level, low, beta, out);
            }
            VERTICAL => {
                let p = ((bp >> 32) & 0x3fff_ffff) as usize;
                let ja = self.index.end(alpha);
                let placed_u = self.index.placement(self.pairs[p].left, ja + 1).expect("in range");
                let delta = self.tables.lsp_pair(alpha, placed_u);
                let mut inner = Vec::new();
                if bp & EMPTY_MIDDLE != EMPTY_MIDDLE {
                    self.walk(level - 1, delta, low, &mut inner);
                }
                out.push(ParseItem::Block(Block {
                    level,
                    pair: p,
                    start: ja + 1,
                    end: self.index.end(beta),
                    inner,
                }));
            }
            _ => unreachable!("unknown backpointer tag"),
        }
    }
}
