//! Work bounds checked against the instrumented counters.
//!
//! `|Π|` stands in for `nL` throughout; the closure never has more than
//! `nL + n + 1` members.

use crate::pattern::PatternIndex;

/// Constant shared by every bound below.
pub const WORK_CONSTANT: u128 = 16;

/// Inner iterations of the general algorithm: `K·|R|·|Π|³`.
pub fn general_iterations(rules: usize, index: &PatternIndex) -> u128 {
    let p = index.len() as u128;
    WORK_CONSTANT * rules.max(1) as u128 * p * p * p
}

/// Level-0 table steps: `K·|Π|²·|D|`.
pub fn m0_steps(index: &PatternIndex) -> u128 {
    let p = index.len() as u128;
    WORK_CONSTANT * p * p * index.alphabet_size().max(1) as u128
}

/// Vertical-pass triples enumerated for one left pattern: `K·|P|·|Π|`.
pub fn vertical_triples_per_anchor(pairs: usize, index: &PatternIndex) -> u128 {
    WORK_CONSTANT * pairs as u128 * index.len() as u128
}

/// Dotted-rule chart steps:
/// `K·|P|·|Π|·(ℓ_min·min(|D|, log₂ ℓ_min) + |P|)`, with `|P|` and the
/// middle factor floored at one.
pub fn earley_steps(pairs: usize, index: &PatternIndex) -> u128 {
    let pairs = pairs.max(1) as u128;
    let l_min = index.word_lengths().iter().copied().min().unwrap_or(1).max(1);
    let log = (usize::BITS - 1 - l_min.leading_zeros()) as usize;
    let per_label = log.min(index.alphabet_size()).max(1);
    WORK_CONSTANT * pairs * index.len() as u128 * ((l_min * per_label) as u128 + pairs)
}

/// Cost-table additions: `K·L·|Π| + K·|Π|`.
pub fn table_additions(total_length: usize, index: &PatternIndex) -> u128 {
    let p = index.len() as u128;
    WORK_CONSTANT * (total_length as u128 * p + p)
}
