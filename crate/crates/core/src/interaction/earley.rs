//! Linear-in-`n` inference for depth-1 interaction grammars.
//!
//! The chart runs left to right over positions; its states pair a pattern
//! state `β ∈ Π_t` with a dotted rule position:
//!
//! * outside every block;
//! * inside `u` after its first `k` labels (`k = |u|` means `u` is done);
//! * inside the free middle after at least one label;
//! * inside `v` after its first `k < |v|` labels.
//!
//! Reading the last label of `v` closes the block and returns outside.

use crate::costs::CostTables;
use crate::error::{Error, Result};
use crate::grammar::interaction::InteractionGrammar;
use crate::pattern::{PatternIndex, Symbol};
use crate::scalar::Scalar;
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Charge {
    None,
    /// Start part of pair `p`'s weight, at the position being read.
    Open(usize),
    /// End part (or the whole constant weight) of pair `p`.
    Close(usize),
}

#[derive(Clone, Copy, Debug)]
struct Move {
    symbol: Symbol,
    target: usize,
    charge: Charge,
}

const OUTSIDE: usize = 0;

/// Dotted-rule automaton; state 0 is "outside".
struct Automaton {
    moves: Vec<Vec<Move>>,
    /// States that accept every label with a self-loop or a move to a single
    /// target (outside, `u` done, middle).
    free: Vec<Option<usize>>,
}

fn build_automaton<T: Scalar>(ig: &InteractionGrammar<T>) -> Automaton {
    let mut moves: Vec<Vec<Move>> = vec![Vec::new()];
    let mut free: Vec<Option<usize>> = vec![Some(OUTSIDE)];
    for (p, pair) in ig.pairs().iter().enumerate() {
        let (u, v) = (&pair.left, &pair.right);
        let base = moves.len();
        // base + k - 1: u read up to k (k = 1..=|u|); then middle; then
        // v read up to k (k = 1..|v|).
        let u_state = |k: usize| base + k - 1;
        let middle = base + u.len();
        let v_state = |k: usize| middle + k;
        let count = u.len() + 1 + (v.len() - 1);
        moves.extend(std::iter::repeat_with(Vec::new).take(count));
        free.extend(std::iter::repeat(None).take(count));

        moves[OUTSIDE].push(Move {
            symbol: u[0],
            target: u_state(1),
            charge: Charge::Open(p),
        });
        for k in 1..u.len() {
            moves[u_state(k)].push(Move {
                symbol: u[k],
                target: u_state(k + 1),
                charge: Charge::None,
            });
        }
        let close_or_continue = if v.len() == 1 {
            Move {
                symbol: v[0],
                target: OUTSIDE,
                charge: Charge::Close(p),
            }
        } else {
            Move {
                symbol: v[0],
                target: v_state(1),
                charge: Charge::None,
            }
        };
        for state in [u_state(u.len()), middle] {
            free[state] = Some(middle);
            moves[state].push(close_or_continue);
        }
        for k in 1..v.len() {
            let last = k + 1 == v.len();
            moves[v_state(k)].push(Move {
                symbol: v[k],
                target: if last { OUTSIDE } else { v_state(k + 1) },
                charge: if last { Charge::Close(p) } else { Charge::None },
            });
        }
    }
    Automaton { moves, free }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EarleyStats {
    pub steps: u64,
    pub states: usize,
}

/// Depth-1 minimum via the dotted-rule chart. Rule weights must be
/// constant or separable.
pub fn run_d1_earley<T: Scalar>(
    index: &PatternIndex,
    tables: &CostTables<T>,
    ig: &InteractionGrammar<T>,
) -> Result<(T, EarleyStats)> {
    if ig.depth() != 1 {
        return Err(Error::Unsupported(format!(
            "the dotted-rule chart needs depth 1, got {}",
            ig.depth()
        )));
    }
    for (p, pair) in ig.pairs().iter().enumerate() {
        if matches!(pair.weights[0], Weight::Span(_)) {
            return Err(Error::Unsupported(format!(
                "pair {p} has a non-separable span weight"
            )));
        }
        if index.vocabulary_index(&pair.left).is_none() || index.vocabulary_index(&pair.right).is_none() {
            return Err(Error::WordNotInVocabulary { word: format!("pair {p}") });
        }
    }
    let n = index.n();
    let sigma = index.alphabet_size();
    let automaton = build_automaton(ig);
    let states = automaton.moves.len();
    let mut stats = EarleyStats { steps: 0, states };
    if n == 0 {
        return Ok((T::zero(), stats));
    }
    let open = |p: usize, i: usize| match &ig.weight(1, p) {
        Weight::Separable { start, .. } => start.get(i).copied().unwrap_or_else(T::zero),
        _ => T::zero(),
    };
    let close = |p: usize, j: usize| match &ig.weight(1, p) {
        Weight::Const(c) => *c,
        Weight::Separable { end, .. } => end.get(j).copied().unwrap_or_else(T::zero),
        Weight::Span(_) => unreachable!("rejected above"),
    };

    let inf = T::infinity();
    let mut cur = vec![inf; states * index.group(0).len()];
    cur[OUTSIDE] = T::zero();
    for t in 0..n {
        let here = index.group(t);
        let there = index.group(t + 1);
        let (w_here, w_there) = (here.len(), there.len());
        let mut next = vec![inf; states * w_there];
        let pos = t + 1;
        for state in 0..states {
            for local in 0..w_here {
                let v = cur[state * w_here + local];
                if v == inf {
                    continue;
                }
                let beta = here.start + local;
                if let Some(target) = automaton.free[state] {
                    stats.steps += sigma as u64;
                    for a in 0..sigma {
                        let gamma = index.goto(beta, a as Symbol) as usize;
                        let cand = v + tables.phi(gamma);
                        let slot = &mut next[target * w_there + gamma - there.start];
                        if cand < *slot {
                            *slot = cand;
                        }
                    }
                }
                for mv in &automaton.moves[state] {
                    stats.steps += 1;
                    let gamma = index.goto(beta, mv.symbol) as usize;
                    let charge = match mv.charge {
                        Charge::None => T::zero(),
                        Charge::Open(p) => open(p, pos),
                        Charge::Close(p) => close(p, pos),
                    };
                    let cand = v + tables.phi(gamma) + charge;
                    let slot = &mut next[mv.target * w_there + gamma - there.start];
                    if cand < *slot {
                        *slot = cand;
                    }
                }
            }
        }
        cur = next;
    }
    let value = cur[..index.group(n).len()].iter().copied().fold(inf, T::min);
    Ok((value, stats))
}
