//! Depth-1 inference with a single-source shortest-path pass.

use crate::costs::CostTables;
use crate::error::{Error, Result};
use crate::grammar::interaction::InteractionGrammar;
use crate::interaction::algorithm2::{pair_info, vertical_row};
use crate::interaction::m0::compute_m0;
use crate::pairs::PairLayout;
use crate::pattern::PatternIndex;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SingleSourceStats {
    pub m0_steps: u64,
    pub vertical_triples: u64,
    pub relaxations: u64,
}

/// Same value as the level-by-level algorithm with `d = 1`, computing
/// shortest paths from `ε_0` only.
pub fn run_d1_single_source<T: Scalar>(
    index: &PatternIndex,
    tables: &CostTables<T>,
    ig: &InteractionGrammar<T>,
) -> Result<(T, SingleSourceStats)> {
    if ig.depth() != 1 {
        return Err(Error::Unsupported(format!(
            "single-source inference needs depth 1, got {}",
            ig.depth()
        )));
    }
    let mut stats = SingleSourceStats::default();
    if index.n() == 0 {
        return Ok((T::zero(), stats));
    }
    let pairs = pair_info(index, ig)?;
    let layout = PairLayout::for_patterns(index);
    let (m0, steps) = compute_m0(index, tables, &layout);
    stats.m0_steps = steps;

    let inf = T::infinity();
    let root = index.empty(0);
    // dist[β]: shortest path from ε_0 with edge costs M̃_1(α, β) − f(β).
    let mut dist = vec![inf; index.len()];
    let mut row = Vec::new();
    for alpha in 0..index.len() {
        let from = if alpha == root { T::zero() } else { dist[alpha] };
        if from == inf {
            continue;
        }
        let first = layout.first_col(alpha);
        row.clear();
        row.extend_from_slice(&m0[layout.row(alpha)]);
        stats.vertical_triples += vertical_row(index, tables, &layout, ig, &pairs, 1, &m0, alpha, |beta, v, _| {
            let slot = beta - first;
            if v < row[slot] {
                row[slot] = v;
            }
        });
        for (k, &m) in row.iter().enumerate() {
            stats.relaxations += 1;
            if m == inf {
                continue;
            }
            let beta = first + k;
            let cand = from + m - tables.f(beta);
            if cand < dist[beta] {
                dist[beta] = cand;
            }
        }
    }
    let value = index
        .group(index.n())
        .map(|beta| if dist[beta] == inf { inf } else { dist[beta] + tables.f(beta) })
        .fold(inf, T::min);
    Ok((value, stats))
}
