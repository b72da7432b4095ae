//! Deterministic generators for the tree and parasol families.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Marks, WeightedGraph, WeightedRootedTree};
use crate::error::{Error, Result};

/// Upper limit on generated vertex counts.
pub const MAX_VERTICES: usize = 1 << 24;

/// Largest height accepted by [`make_geometric_binary`].
pub const MAX_GEOMETRIC_HEIGHT: usize = 50;

fn size_error(what: &str) -> Error {
    Error::Size(format!("{what} exceeds {MAX_VERTICES} vertices"))
}

/// Complete `b`-ary tree of height `h` with unit weights. Vertex `i` has
/// children `b*i + 1 ..= b*i + b`, so ids are breadth-first.
pub fn make_complete_tree(b: usize, h: usize) -> Result<WeightedRootedTree> {
    if b == 0 {
        return Err(Error::Argument("branching must be at least 1".into()));
    }
    let mut n: usize = 1;
    let mut level: usize = 1;
    for _ in 0..h {
        level = level.checked_mul(b).ok_or_else(|| size_error("complete tree"))?;
        n = n.checked_add(level).ok_or_else(|| size_error("complete tree"))?;
        if n > MAX_VERTICES {
            return Err(size_error("complete tree"));
        }
    }
    let parent = (0..n).map(|i| (i > 0).then(|| (i - 1) / b)).collect();
    let weight = (0..n).map(|i| if i == 0 { 0.0 } else { 1.0 }).collect();
    WeightedRootedTree::from_parents(0, parent, weight)
}

/// Root `0`, center `1`, tips `2..=b+1`; unit weights.
pub fn make_umbel(b: usize) -> WeightedRootedTree {
    let b = b.max(1);
    let mut parent = vec![None, Some(0)];
    parent.extend(std::iter::repeat_n(Some(1), b));
    let mut weight = vec![1.0; b + 2];
    weight[0] = 0.0;
    WeightedRootedTree::from_parents(0, parent, weight).expect("umbel is a tree")
}

/// Complete binary tree of height `height` where the edge entering depth
/// `n` weighs `2^-n`.
pub fn make_geometric_binary(height: usize) -> Result<WeightedRootedTree> {
    if height > MAX_GEOMETRIC_HEIGHT {
        return Err(Error::Size(format!(
            "geometric tree height {height} exceeds {MAX_GEOMETRIC_HEIGHT}"
        )));
    }
    let shape = make_complete_tree(2, height)?;
    let weight = (0..shape.len())
        .map(|v| if v == 0 { 0.0 } else { 0.5f64.powi(shape.depth(v) as i32) })
        .collect();
    let parent = (0..shape.len()).map(|v| shape.parent(v)).collect();
    WeightedRootedTree::from_parents(0, parent, weight)
}

/// Random recursive tree: vertex `i >= 1` picks a uniform parent in
/// `0..i`; weights are log-uniform in `[weight_low, weight_high]`.
pub fn make_random_tree(
    n: usize,
    weight_low: f64,
    weight_high: f64,
    seed: u64,
) -> Result<WeightedRootedTree> {
    if n == 0 {
        return Err(Error::Argument("a tree needs at least one vertex".into()));
    }
    if n > MAX_VERTICES {
        return Err(size_error("random tree"));
    }
    if !(weight_low > 0.0 && weight_low <= weight_high && weight_high.is_finite()) {
        return Err(Error::Argument(format!(
            "weight bounds must satisfy 0 < low <= high, got [{weight_low}, {weight_high}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (ln_lo, ln_hi) = (weight_low.ln(), weight_high.ln());
    let mut parent = vec![None];
    let mut weight = vec![0.0];
    for i in 1..n {
        parent.push(Some(rng.gen_range(0..i)));
        let w = if weight_low == weight_high {
            weight_low
        } else {
            rng.gen_range(ln_lo..ln_hi).exp().clamp(weight_low, weight_high)
        };
        weight.push(w);
    }
    WeightedRootedTree::from_parents(0, parent, weight)
}

/// The level-1 parasol: root `0`, center `1`, tips `2..=b+1`, summit `b+2`.
fn parasol_one(b: usize) -> WeightedGraph {
    let (center, summit) = (1, b + 2);
    let mut edges = vec![(0, center, 1.0)];
    for t in 2..=b + 1 {
        edges.push((center, t, 1.0));
    }
    for t in 2..=b + 1 {
        edges.push((t, summit, 1.0));
    }
    let marks = Some(Marks { r: 0, s: Some(summit) });
    WeightedGraph::new(b + 3, edges, marks).expect("parasol is simple")
}

/// Parasol graph of level `levels` with `b` tips per copy.
pub fn make_parasol(b: usize, levels: usize) -> Result<WeightedGraph> {
    if b == 0 || levels == 0 {
        return Err(Error::Argument("parasol needs b >= 1 and at least one level".into()));
    }
    let mut g = parasol_one(b);
    for _ in 1..levels {
        g = parasol_refinement(&g, b)?.0;
    }
    Ok(g)
}

/// Replaces every edge of `prev` by a fresh level-1 parasol with `b`
/// tips. Each copy's root is glued to the edge endpoint nearer to the
/// marked root of `prev`, its summit to the other endpoint.
///
/// Returns the refined graph (ids breadth-first from the root) and the
/// new id of every vertex of `prev`.
pub fn parasol_refinement(prev: &WeightedGraph, b: usize) -> Result<(WeightedGraph, Vec<usize>)> {
    let marks = prev
        .marks()
        .and_then(|m| m.s.map(|s| (m.r, s)))
        .ok_or_else(|| Error::Argument("parasol refinement needs marked r and s".into()))?;
    if b == 0 {
        return Err(Error::Argument("parasol needs b >= 1".into()));
    }
    let n_prev = prev.len();
    let total = prev
        .edges()
        .len()
        .checked_mul(b + 1)
        .and_then(|k| k.checked_add(n_prev))
        .filter(|&k| k <= MAX_VERTICES)
        .ok_or_else(|| size_error("parasol"))?;

    let depth = prev.distances_from(marks.0);
    let mut edges = Vec::with_capacity(prev.edges().len() * (2 * b + 1));
    let mut next = n_prev;
    for &(u, v, _) in prev.edges() {
        let (low, high) = if depth[u] < depth[v] { (u, v) } else { (v, u) };
        let center = next;
        edges.push((low, center, 1.0));
        for t in center + 1..=center + b {
            edges.push((center, t, 1.0));
            edges.push((t, high, 1.0));
        }
        next += b + 1;
    }
    debug_assert_eq!(next, total);

    let relabel = bfs_relabel(total, &edges, marks.0);
    let edges = edges.into_iter().map(|(u, v, w)| (relabel[u], relabel[v], w)).collect();
    let marks = Some(Marks { r: relabel[marks.0], s: Some(relabel[marks.1]) });
    let g = WeightedGraph::new(total, edges, marks)?;
    Ok((g, relabel[..n_prev].to_vec()))
}

fn bfs_relabel(n: usize, edges: &[(usize, usize, f64)], root: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v, _) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let mut id = vec![usize::MAX; n];
    let mut next = 0;
    id[root] = next;
    next += 1;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if id[u] == usize::MAX {
                id[u] = next;
                next += 1;
                queue.push_back(u);
            }
        }
    }
    id
}
