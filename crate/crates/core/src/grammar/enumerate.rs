//! Exhaustive derivation listing for tiny words, with hard caps.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grammar::{CnfGrammar, Derivation, RuleBody};
use crate::pattern::Symbol;
use crate::scalar::Scalar;

type Span = (usize, usize, usize);

/// Number of derivations of `x` from the start symbol (saturating).
pub fn count_derivations<T: Scalar>(x: &[Symbol], g: &CnfGrammar<T>) -> u128 {
    let mut memo = HashMap::new();
    if x.is_empty() {
        return epsilon_rules(g).len() as u128;
    }
    count(x, g, g.start(), 1, x.len(), &mut memo)
}

fn epsilon_rules<T: Scalar>(g: &CnfGrammar<T>) -> Vec<usize> {
    g.rules()
        .iter()
        .enumerate()
        .filter(|(_, r)| r.lhs == g.start() && r.body == RuleBody::Epsilon)
        .map(|(k, _)| k)
        .collect()
}

fn count<T: Scalar>(
    x: &[Symbol],
    g: &CnfGrammar<T>,
    nt: usize,
    i: usize,
    j: usize,
    memo: &mut HashMap<Span, u128>,
) -> u128 {
    if let Some(&c) = memo.get(&(nt, i, j)) {
        return c;
    }
    let mut total = 0u128;
    for rule in g.rules().iter().filter(|r| r.lhs == nt) {
        match &rule.body {
            RuleBody::Word(w) if x[i - 1..j] == w[..] => total = total.saturating_add(1),
            RuleBody::Binary(b, c) => {
                for m in i..j {
                    let left = count(x, g, *b, i, m, memo);
                    if left == 0 {
                        continue;
                    }
                    let right = count(x, g, *c, m + 1, j, memo);
                    total = total.saturating_add(left.saturating_mul(right));
                }
            }
            _ => {}
        }
    }
    memo.insert((nt, i, j), total);
    total
}

fn check_cap(required: u128, cap: usize) -> Result<()> {
    if required > cap as u128 {
        return Err(Error::SizeRefused {
            what: "derivation enumeration",
            required,
            limit: cap as u128,
        });
    }
    Ok(())
}

/// Every derivation of `x` from the start symbol; refuses when there are
/// more than `cap`.
pub fn enumerate_derivations<T: Scalar>(x: &[Symbol], g: &CnfGrammar<T>, cap: usize) -> Result<Vec<Derivation>> {
    check_cap(count_derivations(x, g), cap)?;
    if x.is_empty() {
        return Ok(epsilon_rules(g).into_iter().map(|k| Derivation::leaf(k, 1, 0)).collect());
    }
    let mut memo = HashMap::new();
    Ok(trees(x, g, g.start(), 1, x.len(), &mut memo))
}

fn trees<T: Scalar>(
    x: &[Symbol],
    g: &CnfGrammar<T>,
    nt: usize,
    i: usize,
    j: usize,
    memo: &mut HashMap<Span, Vec<Derivation>>,
) -> Vec<Derivation> {
    if let Some(v) = memo.get(&(nt, i, j)) {
        return v.clone();
    }
    let mut out = Vec::new();
    for (k, rule) in g.rules().iter().enumerate().filter(|(_, r)| r.lhs == nt) {
        match &rule.body {
            RuleBody::Word(w) if x[i - 1..j] == w[..] => out.push(Derivation::leaf(k, i, j)),
            RuleBody::Binary(b, c) => {
                for m in i..j {
                    let left = trees(x, g, *b, i, m, memo);
                    if left.is_empty() {
                        continue;
                    }
                    let right = trees(x, g, *c, m + 1, j, memo);
                    for l in &left {
                        for r in &right {
                            out.push(Derivation {
                                rule: k,
                                start: i,
                                end: j,
                                children: vec![l.clone(), r.clone()],
                            });
                        }
                    }
                }
            }
            _ => {}
        }
    }
    memo.insert((nt, i, j), out.clone());
    out
}

/// Costs of all derivations of `x`, as a multiset; same cap semantics as
/// [`enumerate_derivations`] but without materializing trees.
pub fn derivation_costs<T: Scalar>(x: &[Symbol], g: &CnfGrammar<T>, cap: usize) -> Result<Vec<T>> {
    check_cap(count_derivations(x, g), cap)?;
    if x.is_empty() {
        return Ok(epsilon_rules(g)
            .into_iter()
            .map(|k| g.rules()[k].weight.eval(1, 0))
            .collect());
    }
    let mut memo = HashMap::new();
    Ok(costs(x, g, g.start(), 1, x.len(), &mut memo))
}

fn costs<T: Scalar>(
    x: &[Symbol],
    g: &CnfGrammar<T>,
    nt: usize,
    i: usize,
    j: usize,
    memo: &mut HashMap<Span, Vec<T>>,
) -> Vec<T> {
    if let Some(v) = memo.get(&(nt, i, j)) {
        return v.clone();
    }
    let mut out = Vec::new();
    for rule in g.rules().iter().filter(|r| r.lhs == nt) {
        let own = rule.weight.eval(i, j);
        match &rule.body {
            RuleBody::Word(w) if x[i - 1..j] == w[..] => out.push(own),
            RuleBody::Binary(b, c) => {
                for m in i..j {
                    let left = costs(x, g, *b, i, m, memo);
                    if left.is_empty() {
                        continue;
                    }
                    let right = costs(x, g, *c, m + 1, j, memo);
                    for &l in &left {
                        for &r in &right {
                            out.push(own + l + r);
                        }
                    }
                }
            }
            _ => {}
        }
    }
    memo.insert((nt, i, j), out.clone());
    out
}

/// Costs of all derivations of `x` grouped as `(cost, multiplicity)` with
/// equal costs merged, sorted by cost. Refuses when some sub-span has more
/// than `cap` distinct costs.
pub fn derivation_cost_histogram<T: Scalar>(x: &[Symbol], g: &CnfGrammar<T>, cap: usize) -> Result<Vec<(T, u128)>> {
    if x.is_empty() {
        let costs = epsilon_rules(g)
            .into_iter()
            .map(|k| (g.rules()[k].weight.eval(1, 0), 1))
            .collect();
        return Ok(merge(costs));
    }
    let mut memo = HashMap::new();
    histogram(x, g, g.start(), 1, x.len(), cap, &mut memo)
}

fn merge<T: Scalar>(mut items: Vec<(T, u128)>) -> Vec<(T, u128)> {
    items.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite costs"));
    let mut out: Vec<(T, u128)> = Vec::with_capacity(items.len());
    for (c, m) in items {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = last.1.saturating_add(m),
            _ => out.push((c, m)),
        }
    }
    out
}

fn histogram<T: Scalar>(
    x: &[Symbol],
    g: &CnfGrammar<T>,
    nt: usize,
    i: usize,
    j: usize,
    cap: usize,
    memo: &mut HashMap<Span, Vec<(T, u128)>>,
) -> Result<Vec<(T, u128)>> {
    if let Some(v) = memo.get(&(nt, i, j)) {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    for rule in g.rules().iter().filter(|r| r.lhs == nt) {
        let own = rule.weight.eval(i, j);
        match &rule.body {
            RuleBody::Word(w) if x[i - 1..j] == w[..] => out.push((own, 1)),
            RuleBody::Binary(b, c) => {
                for m in i..j {
                    let left = histogram(x, g, *b, i, m, cap, memo)?;
                    if left.is_empty() {
                        continue;
                    }
                    let right = histogram(x, g, *c, m + 1, j, cap, memo)?;
                    for &(l, ml) in &left {
                        for &(r, mr) in &right {
                            out.push((own + l + r, ml.saturating_mul(mr)));
                        }
                    }
                    out = merge(out);
                    check_cap(out.len() as u128, cap)?;
                }
            }
            _ => {}
        }
    }
    let out = merge(out);
    memo.insert((nt, i, j), out.clone());
    Ok(out)
}
