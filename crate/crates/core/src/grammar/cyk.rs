//! Chart parsing of a fixed word.

use crate::grammar::{CnfGrammar, Derivation, RuleBody};
use crate::pattern::Symbol;
use crate::scalar::Scalar;
use crate::semiring::{LogSum, Tropical, ValueAlgebra};

const NO_BACK: u64 = u64::MAX;

/// Span-major chart: one dense row of nonterminal values per `(len, start)`.
struct Chart<T> {
    nts: usize,
    offsets: Vec<usize>,
    values: Vec<T>,
    back: Vec<u64>,
}

impl<T: Scalar> Chart<T> {
    fn slot(&self, start: usize, end: usize) -> usize {
        (self.offsets[end + 1 - start] + start - 1) * self.nts
    }
}

fn fill<A: ValueAlgebra, T: Scalar>(x: &[Symbol], g: &CnfGrammar<T>, backpointers: bool) -> Chart<T> {
    let n = x.len();
    let nts = g.nonterminals().len();
    let cells = n * (n + 1) / 2;
    let mut offsets = vec![0usize; n + 2];
    for len in 1..=n {
        offsets[len + 1] = offsets[len] + (n + 1 - len);
    }
    let slot = |start: usize, end: usize| (offsets[end + 1 - start] + start - 1) * nts;
    let mut chart = Chart {
        nts,
        offsets: offsets.clone(),
        values: vec![A::zero::<T>(); cells * nts],
        back: if backpointers { vec![NO_BACK; cells * nts] } else { Vec::new() },
    };

    for len in 1..=n {
        for start in 1..=n + 1 - len {
            let end = start + len - 1;
            let here = slot(start, end);
            for (k, rule) in g.rules().iter().enumerate() {
                let cell = here + rule.lhs;
                match &rule.body {
                    RuleBody::Word(w) if w.len() == len && &x[start - 1..end] == w.as_slice() => {
                        let v = A::lift(rule.weight.eval(start, end));
                        relax::<A, T>(&mut chart, cell, v, (k as u64) << 32 | u32::MAX as u64);
                    }
                    RuleBody::Binary(b, c) if len >= 2 => {
                        let w = A::lift(rule.weight.eval(start, end));
                        for mid in start..end {
                            let left = chart.values[slot(start, mid) + b];
                            let right = chart.values[slot(mid + 1, end) + c];
                            if A::is_zero(left) || A::is_zero(right) {
                                continue;
                            }
                            let v = A::extend(A::extend(left, right), w);
                            relax::<A, T>(&mut chart, cell, v, (k as u64) << 32 | mid as u64);
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    chart
}

#[inline]
fn relax<A: ValueAlgebra, T: Scalar>(chart: &mut Chart<T>, cell: usize, v: T, back: u64) {
    let cur = chart.values[cell];
    if chart.back.is_empty() {
        chart.values[cell] = A::combine(cur, v);
    } else if A::improves(v, cur) {
        chart.values[cell] = v;
        chart.back[cell] = back;
    }
}

fn epsilon_value<A: ValueAlgebra, T: Scalar>(g: &CnfGrammar<T>) -> (T, Option<usize>) {
    let mut best = A::zero::<T>();
    let mut arg = None;
    for (k, rule) in g.rules().iter().enumerate() {
        if rule.lhs == g.start() && rule.body == RuleBody::Epsilon {
            let v = A::lift(rule.weight.eval(1, 0));
            if A::improves(v, best) {
                arg = Some(k);
            }
            best = A::combine(best, v);
        }
    }
    (best, arg)
}

/// Aggregate over all derivations of `x` from the start symbol in algebra `A`.
pub fn cyk_inside<A: ValueAlgebra, T: Scalar>(x: &[Symbol], g: &CnfGrammar<T>) -> T {
    if x.is_empty() {
        return epsilon_value::<A, T>(g).0;
    }
    let chart = fill::<A, T>(x, g, false);
    chart.values[chart.slot(1, x.len()) + g.start()]
}

/// Least derivation cost and a witness; `+∞` and `None` when underivable.
pub fn cyk_min_parse<T: Scalar>(x: &[Symbol], g: &CnfGrammar<T>) -> (T, Option<Derivation>) {
    if x.is_empty() {
        let (v, arg) = epsilon_value::<Tropical, T>(g);
        return (v, arg.map(|k| Derivation::leaf(k, 1, 0)));
    }
    let chart = fill::<Tropical, T>(x, g, true);
    let root = chart.slot(1, x.len()) + g.start();
    let value = chart.values[root];
    if value == T::infinity() {
        return (value, None);
    }
    (value, Some(unwind(&chart, g, g.start(), 1, x.len())))
}

fn unwind<T: Scalar>(chart: &Chart<T>, g: &CnfGrammar<T>, nt: usize, start: usize, end: usize) -> Derivation {
    let back = chart.back[chart.slot(start, end) + nt];
    let rule = (back >> 32) as usize;
    let mid = (back & u32::MAX as u64) as u32;
    match g.rules()[rule].body {
        RuleBody::Binary(b, c) => {
            let mid = mid as usize;
            Derivation {
                rule,
                start,
                end,
                children: vec![unwind(chart, g, b, start, mid), unwind(chart, g, c, mid + 1, end)],
            }
        }
        _ => Derivation::leaf(rule, start, end),
    }
}

/// `log Σ_λ exp(−cost(λ))` over derivations of `x`; `−∞` when underivable.
pub fn cyk_log_inside<T: Scalar>(x: &[Symbol], g: &CnfGrammar<T>) -> T {
    cyk_inside::<LogSum, T>(x, g)
}
