//! Level-0 messages: pattern cost only, any labeling allowed.

use crate::costs::CostTables;
use crate::pairs::PairLayout;
use crate::pattern::{PatternIndex, Symbol};
use crate::scalar::Scalar;

/// Reusable buffers for the per-anchor forward pass.
pub(crate) struct Sweep<T> {
    cur: Vec<T>,
    next: Vec<T>,
}

impl<T: Scalar> Sweep<T> {
    pub(crate) fn new() -> Self {
        Sweep {
            cur: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Writes `M_0(α, ·)` into `row` (laid out as row `α` of `layout`) and
    /// returns the number of transitions taken.
    pub(crate) fn fill_row(
        &mut self,
        index: &PatternIndex,
        tables: &CostTables<T>,
        layout: &PairLayout,
        alpha: usize,
        row: &mut [T],
    ) -> u64 {
        let sigma = index.alphabet_size();
        let first = layout.first_col(alpha);
        let mut steps = 0u64;
        let mut s = index.end(alpha);
        let mut group = index.group(s);
        self.cur.clear();
        self.cur.resize(group.len(), T::infinity());
        self.cur[alpha - group.start] = tables.f(alpha);
        while s < index.n() {
            let next_group = index.group(s + 1);
            self.next.clear();
            self.next.resize(next_group.len(), T::infinity());
            for (k, &v) in self.cur.iter().enumerate() {
                if v == T::infinity() {
                    continue;
                }
                let beta = group.start + k;
                steps += sigma as u64;
                for a in 0..sigma {
                    let gamma = index.goto(beta, a as Symbol) as usize;
                    let cand = v + tables.phi(gamma);
                    let slot = &mut self.next[gamma - next_group.start];
                    if cand < *slot {
                        *slot = cand;
                    }
                }
            }
            let off = next_group.start - first;
            row[off..off + next_group.len()].copy_from_slice(&self.next);
            std::mem::swap(&mut self.cur, &mut self.next);
            group = next_group;
            s += 1;
        }
        steps
    }
}

/// Full level-0 table and its step count.
pub fn compute_m0<T: Scalar>(index: &PatternIndex, tables: &CostTables<T>, layout: &PairLayout) -> (Vec<T>, u64) {
    let mut table = vec![T::infinity(); layout.len()];
    let mut sweep = Sweep::new();
    let mut steps = 0;
    for alpha in 0..index.len() {
        let row = layout.row(alpha);
        steps += sweep.fill_row(index, tables, layout, alpha, &mut table[row]);
    }
    (table, steps)
}

/// A cheapest labeling of `[j_α + 1, j_β]` realizing `M_0(α, β)`.
pub fn m0_path<T: Scalar>(index: &PatternIndex, tables: &CostTables<T>, alpha: usize, beta: usize) -> Vec<Symbol> {
    let sigma = index.alphabet_size();
    let (ja, jb) = (index.end(alpha), index.end(beta));
    let mut cost = vec![T::infinity(); index.len()];
    let mut pred: Vec<(u32, Symbol)> = vec![(u32::MAX, 0); index.len()];
    cost[alpha] = tables.f(alpha);
    for s in ja..jb {
        for b in index.group(s) {
            if cost[b] == T::infinity() {
                continue;
            }
            for a in 0..sigma {
                let gamma = index.goto(b, a as Symbol) as usize;
                let cand = cost[b] + tables.phi(gamma);
                if cand < cost[gamma] {
                    cost[gamma] = cand;
                    pred[gamma] = (b as u32, a as Symbol);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(jb - ja);
    let mut cur = beta;
    while cur != alpha {
        let (p, a) = pred[cur];
        debug_assert_ne!(p, u32::MAX, "no level-0 path");
        out.push(a);
        cur = p as usize;
    }
    out.reverse();
    out
}
