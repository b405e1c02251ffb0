//! Suffix-cost and containment-cost tables over the pattern index.

use crate::pattern::{PatternIndex, PatternWeights};
use crate::scalar::Scalar;

/// `φ(α)`, `f(α)` and the pair table `f(αβ)` for `α ∈ Π_{i_β−1}`.
///
/// The pair table also stores `lsp(αβ)`, which every consumer needs next to
/// the cost.
#[derive(Clone, Debug)]
pub struct CostTables<T> {
    phi: Vec<T>,
    single: Vec<T>,
    // Slot of (α, β) is `pair_base[β] + α` (wrapping), so callers need not
    // know the group of α.
    pair_base: Vec<usize>,
    pair_cost: Vec<T>,
    pair_lsp: Vec<u32>,
    additions: u64,
}

impl<T: Scalar> CostTables<T> {
    pub fn compute(index: &PatternIndex, weights: &PatternWeights<T>) -> Self {
        assert_eq!(index.n(), weights.n(), "index built for another chain length");
        let total = index.len();
        let mut additions = 0u64;

        let mut phi = vec![T::zero(); total];
        let mut single = vec![T::zero(); total];
        for id in 0..total {
            // Parents precede children inside each group, and prefixes live
            // in earlier groups, so one pass in id order suffices.
            if let Some(parent) = index.suffix_parent(id) {
                phi[id] = phi[parent];
                if let Some(w) = index.vocabulary_word(id) {
                    phi[id] = phi[id] + weights.cost(w, index.start(id));
                    additions += 1;
                }
            }
            if let Some(pre) = index.prefix(id) {
                single[id] = single[pre] + phi[id];
                additions += 1;
            }
        }

        let mut pair_offset = Vec::with_capacity(total);
        let mut pair_base = Vec::with_capacity(total);
        let mut size = 0usize;
        for id in 0..total {
            let left = index.group(index.start(id) - 1);
            pair_offset.push(size);
            pair_base.push(size.wrapping_sub(left.start));
            size += left.len();
        }
        let mut pair_cost = vec![T::zero(); size];
        let mut pair_lsp = vec![0u32; size];
        for beta in 0..total {
            let left = index.group(index.start(beta) - 1);
            let off = pair_offset[beta];
            match index.prefix(beta) {
                None => {
                    for (k, alpha) in left.enumerate() {
                        pair_cost[off + k] = single[alpha];
                        pair_lsp[off + k] = alpha as u32;
                    }
                }
                Some(pre) => {
                    let last = *index.word(beta).last().expect("non-empty");
                    let pre_off = pair_offset[pre];
                    for k in 0..left.len() {
                        let joined = index.goto(pair_lsp[pre_off + k] as usize, last);
                        pair_lsp[off + k] = joined;
                        pair_cost[off + k] = pair_cost[pre_off + k] + phi[joined as usize];
                        additions += 1;
                    }
                }
            }
        }

        CostTables {
            phi,
            single,
            pair_base,
            pair_cost,
            pair_lsp,
            additions,
        }
    }

    /// `φ(α)`: total cost of vocabulary placements that are suffixes of `α`.
    #[inline]
    pub fn phi(&self, id: usize) -> T {
        self.phi[id]
    }

    /// `f(α)`: total cost of vocabulary placements contained in `α`.
    #[inline]
    pub fn f(&self, id: usize) -> T {
        self.single[id]
    }

    #[inline]
    fn slot(&self, alpha: usize, beta: usize) -> usize {
        self.pair_base[beta].wrapping_add(alpha)
    }

    /// `f(αβ)`; `α` must end right before `β` starts.
    #[inline]
    pub fn f_pair(&self, alpha: usize, beta: usize) -> T {
        self.pair_cost[self.slot(alpha, beta)]
    }

    /// `lsp(αβ)` under the same convention as [`Self::f_pair`].
    #[inline]
    pub fn lsp_pair(&self, alpha: usize, beta: usize) -> usize {
        self.pair_lsp[self.slot(alpha, beta)] as usize
    }

    /// Number of scalar additions performed while building the tables.
    pub fn additions(&self) -> u64 {
        self.additions
    }

    pub fn map<U: Scalar>(&self, map: impl Fn(T) -> U) -> CostTables<U> {
        CostTables {
            phi: self.phi.iter().map(|&v| map(v)).collect(),
            single: self.single.iter().map(|&v| map(v)).collect(),
            pair_base: self.pair_base.clone(),
            pair_cost: self.pair_cost.iter().map(|&v| map(v)).collect(),
            pair_lsp: self.pair_lsp.clone(),
            additions: self.additions,
        }
    }
}
