//! All-pairs shortest paths on DAGs stored in a [`PairLayout`].
//!
//! Vertex ids are a topological order and every edge `(u, v)` has a slot in
//! row `u`. A missing edge is `+∞`. Costs may be negative.

use crate::error::{Error, Result};
use crate::pairs::PairLayout;
use crate::scalar::Scalar;

/// Marker in the predecessor table for "reached by the direct edge".
pub const DIRECT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ApspBackend {
    /// One topological relaxation per source, `O(|V|(|V| + |E|))`.
    Reference,
    /// Johnson-style reweighting, then per-source relaxation restricted to
    /// edges that are strictly shortest paths between their endpoints.
    ///
    /// An edge counts as a strict shortest path only when every alternative
    /// path is longer by more than `tie_tolerance`; zero is exact for
    /// integer-valued costs.
    UsefulEdge { tie_tolerance: f64 },
}

impl ApspBackend {
    pub fn useful_edge() -> Self {
        ApspBackend::UsefulEdge { tie_tolerance: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ApspStats {
    pub relaxations: u64,
    pub useful_edges: u64,
}

/// Replaces edge costs by shortest-path distances (`+∞` when unreachable).
///
/// When `pred` is given, it receives for every pair either [`DIRECT`] or a
/// vertex `w` with `d(u, v) = d(u, w) + d(w, v)`.
pub fn apsp_in_place<T: Scalar>(
    layout: &PairLayout,
    costs: &mut [T],
    backend: ApspBackend,
    pred: Option<&mut [u32]>,
) -> ApspStats {
    assert_eq!(costs.len(), layout.len());
    match backend {
        ApspBackend::Reference => reference(layout, costs, pred),
        ApspBackend::UsefulEdge { tie_tolerance } => useful_edge(layout, costs, T::of(tie_tolerance), pred),
    }
}

fn reference<T: Scalar>(layout: &PairLayout, costs: &mut [T], mut pred: Option<&mut [u32]>) -> ApspStats {
    let nv = layout.vertices();
    let mut stats = ApspStats::default();
    let mut best: Vec<T> = Vec::with_capacity(nv);
    let mut via: Vec<u32> = Vec::with_capacity(nv);
    for u in (0..nv).rev() {
        let first = layout.first_col(u);
        let row = layout.row(u);
        best.clear();
        best.extend_from_slice(&costs[row.clone()]);
        via.clear();
        via.resize(best.len(), DIRECT);
        for w in first..nv {
            let edge = costs[row.start + w - first];
            if edge == T::infinity() {
                continue;
            }
            let wrow = layout.row(w);
            let wfirst = layout.first_col(w);
            for (k, &d) in costs[wrow].iter().enumerate() {
                stats.relaxations += 1;
                let cand = edge + d;
                let target = wfirst + k - first;
                if cand < best[target] {
                    best[target] = cand;
                    via[target] = w as u32;
                }
            }
        }
        costs[row.clone()].copy_from_slice(&best);
        if let Some(p) = pred.as_deref_mut() {
            p[row].copy_from_slice(&via);
        }
    }
    stats
}

fn useful_edge<T: Scalar>(layout: &PairLayout, costs: &mut [T], eps: T, mut pred: Option<&mut [u32]>) -> ApspStats {
    let nv = layout.vertices();
    let inf = T::infinity();
    let mut stats = ApspStats::default();

    // Potentials: shortest distance from a virtual source joined to every
    // vertex by a zero edge.
    let mut potential = vec![T::zero(); nv];
    for u in 0..nv {
        let first = layout.first_col(u);
        let pu = potential[u];
        for (k, &c) in costs[layout.row(u)].iter().enumerate() {
            let cand = pu + c;
            if cand < potential[first + k] {
                potential[first + k] = cand;
            }
        }
    }

    let mut useful: Vec<Vec<(u32, T)>> = vec![Vec::new(); nv];
    let mut direct: Vec<T> = Vec::with_capacity(nv);
    let mut via: Vec<T> = Vec::with_capacity(nv);
    let mut via_pred: Vec<u32> = Vec::with_capacity(nv);
    for u in (0..nv).rev() {
        let first = layout.first_col(u);
        let row = layout.row(u);
        let pu = potential[u];
        direct.clear();
        direct.extend(
            costs[row.clone()]
                .iter()
                .enumerate()
                .map(|(k, &c)| if c == inf { inf } else { c + pu - potential[first + k] }),
        );
        via.clear();
        via.resize(direct.len(), inf);
        via_pred.clear();
        via_pred.resize(direct.len(), DIRECT);
        let mut out = Vec::new();
        for k in 0..direct.len() {
            let w = first + k;
            let (dc, vc) = (direct[k], via[k]);
            if dc != inf && vc - dc > eps {
                out.push((w as u32, dc));
            }
            let dist = if vc < dc {
                direct[k] = vc;
                vc
            } else {
                via_pred[k] = DIRECT;
                dc
            };
            if dist == inf {
                continue;
            }
            for &(x, cx) in &useful[w] {
                stats.relaxations += 1;
                let slot = x as usize - first;
                let cand = dist + cx;
                if cand < via[slot] {
                    via[slot] = cand;
                    via_pred[slot] = w as u32;
                }
            }
        }
        stats.useful_edges += out.len() as u64;
        useful[u] = out;
        for (k, d) in direct.iter().enumerate() {
            costs[row.start + k] = if *d == inf { inf } else { *d - pu + potential[first + k] };
        }
        if let Some(p) = pred.as_deref_mut() {
            p[row].copy_from_slice(&via_pred);
        }
    }
    stats
}

/// Distances between all vertex pairs of an arbitrary DAG given as an edge
/// list; `dist[u][u] = 0`. Parallel edges keep the cheapest.
pub fn apsp_dag<T: Scalar>(vertices: usize, edges: &[(usize, usize, T)], backend: ApspBackend) -> Result<Vec<Vec<T>>> {
    let mut indegree = vec![0usize; vertices];
    let mut adj = vec![Vec::new(); vertices];
    for &(u, v, _) in edges {
        if u == v {
            return Err(Error::CycleDetected);
        }
        adj[u].push(v);
        indegree[v] += 1;
    }
    let mut order = Vec::with_capacity(vertices);
    let mut ready: Vec<usize> = (0..vertices).filter(|&v| indegree[v] == 0).collect();
    while let Some(u) = ready.pop() {
        order.push(u);
        for &v in &adj[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                ready.push(v);
            }
        }
    }
    if order.len() != vertices {
        return Err(Error::CycleDetected);
    }
    let mut rank = vec![0usize; vertices];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let layout = PairLayout::upper_triangle(vertices);
    let mut costs = vec![T::infinity(); layout.len()];
    for &(u, v, c) in edges {
        let slot = layout.slot_unchecked(rank[u], rank[v]);
        if c < costs[slot] {
            costs[slot] = c;
        }
    }
    apsp_in_place(&layout, &mut costs, backend, None);
    let mut dist = vec![vec![T::infinity(); vertices]; vertices];
    for u in 0..vertices {
        dist[u][u] = T::zero();
        for v in 0..vertices {
            if let Some(slot) = layout.slot(rank[u], rank[v]) {
                dist[u][v] = costs[slot];
            }
        }
    }
    Ok(dist)
}
