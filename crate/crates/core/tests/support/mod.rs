//! Independent oracles and instance families shared by the integration
//! and acceptance suites. Nothing here calls the code path it checks.

#![allow(dead_code)]

use treemb::coloring::EdgeColoring;
use treemb::embedding::EmbeddedPointSet;
use treemb::graphs::{make_complete_tree, make_random_tree, make_umbel};
use treemb::metric::{FiniteMetricSpace, Metric};
use treemb::WeightedRootedTree;

/// Lip and Lip⁻¹ by a plain double loop over a dense copy of the
/// embedding, with the norm computed on dense vectors.
pub fn dense_lips(tree: &WeightedRootedTree, points: &EmbeddedPointSet) -> (f64, f64) {
    let dim = (0..points.len())
        .flat_map(|v| points.coords(v).iter().map(|&(c, _)| c + 1))
        .max()
        .unwrap_or(0);
    let dense: Vec<Vec<f64>> = (0..points.len())
        .map(|v| {
            let mut x = vec![0.0; dim];
            for &(c, a) in points.coords(v) {
                x[c] = a;
            }
            x
        })
        .collect();
    let p = points.p();
    let (mut lip, mut lip_inv) = (0.0f64, 0.0f64);
    for x in 0..dense.len() {
        for y in 0..x {
            let e: f64 = dense[x]
                .iter()
                .zip(&dense[y])
                .map(|(a, b)| (a - b).abs().powf(p))
                .sum::<f64>()
                .powf(1.0 / p);
            let t = tree.tree_distance(x, y);
            lip = lip.max(e / t);
            lip_inv = lip_inv.max(t / e);
        }
    }
    (lip, lip_inv)
}

/// Least C such that `B_T(f x, r/C) ⊆ f(B_S(x, r))` (closed balls) for
/// every x and every radius, found by searching the sorted candidate
/// ratios against explicit ball contents.
pub fn colip_by_balls(source: &FiniteMetricSpace, target: &FiniteMetricSpace, assign: &[usize]) -> f64 {
    const SLACK: f64 = 1e-12;
    let (ns, nt) = (source.len(), target.len());
    let mut candidates = Vec::new();
    for a in 0..ns {
        for b in 0..ns {
            for u in 0..nt {
                for v in 0..nt {
                    if u != v {
                        candidates.push(source.dist(a, b) / target.dist(u, v));
                    }
                }
            }
        }
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let inclusion_holds = |c: f64| {
        (0..ns).all(|x| {
            let fx = assign[x];
            let radii = (0..nt)
                .map(|y| c * target.dist(fx, y))
                .chain((0..ns).map(|z| source.dist(x, z)));
            radii.into_iter().all(|r| {
                // every target point in the small ball is hit from the big ball
                (0..nt).filter(|&y| c * target.dist(fx, y) <= r).all(|y| {
                    (0..ns).any(|z| assign[z] == y && source.dist(x, z) <= r * (1.0 + SLACK))
                })
            })
        })
    };
    candidates.retain(|&c| c > 0.0);
    // a larger C shrinks the target ball, so inclusion is monotone in C
    let first = candidates.partition_point(|&c| !inclusion_holds(c));
    candidates.get(first).copied().unwrap_or(0.0)
}

/// All symmetric tables on `n` points with off-diagonal entries in
/// `{1, 2, 3}` that satisfy the triangle inequality.
pub fn grid_metrics(n: usize) -> Vec<FiniteMetricSpace> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = 3usize.pow(pairs.len() as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut d = vec![0.0; n * n];
        let mut c = code;
        for &(i, j) in &pairs {
            let v = (c % 3 + 1) as f64;
            c /= 3;
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
        if let Ok(m) = FiniteMetricSpace::new(n, d) {
            out.push(m);
        }
    }
    out
}

/// All surjections `0..n -> 0..m`.
pub fn surjections(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut f = vec![0usize; n];
    loop {
        let mut hit = vec![false; m];
        f.iter().for_each(|&t| hit[t] = true);
        if hit.iter().all(|&h| h) {
            out.push(f.clone());
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            f[k] += 1;
            if f[k] < m {
                break;
            }
            f[k] = 0;
            k += 1;
        }
    }
}

/// Largest δ accepted by `verify_strong`, by bisection.
pub fn delta_by_bisection(coloring: &EdgeColoring<'_>) -> f64 {
    if coloring.verify_strong(1.0).passed() {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if coloring.verify_strong(mid).passed() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

pub fn path(len: usize) -> WeightedRootedTree {
    make_complete_tree(1, len).unwrap()
}

/// Star with `k` leaves hanging off the root.
pub fn star(k: usize) -> WeightedRootedTree {
    let mut parent = vec![None];
    parent.extend(std::iter::repeat_n(Some(0), k));
    let mut weight = vec![1.0; k + 1];
    weight[0] = 0.0;
    WeightedRootedTree::from_parents(0, parent, weight).unwrap()
}

/// Trees with at most nine edges: paths, stars, umbels, binary trees of
/// height <= 2 (height 3 has 14 edges), and 200 random trees.
pub fn small_trees() -> Vec<WeightedRootedTree> {
    let mut out = Vec::new();
    for len in 0..=9 {
        out.push(path(len));
    }
    for k in 1..=9 {
        out.push(star(k));
    }
    for b in 1..=8 {
        out.push(make_umbel(b));
    }
    for h in 0..=3 {
        let t = make_complete_tree(2, h).unwrap();
        if t.edge_count() <= 9 {
            out.push(t);
        }
    }
    for seed in 0..200u64 {
        let n = 2 + (seed % 9) as usize;
        out.push(make_random_tree(n, 0.5, 2.0, seed).unwrap());
    }
    out
}

/// Every root-containing subtree of the complete binary tree of height 3
/// with at most `max_edges` edges, unit weights.
pub fn binary_subtrees(max_edges: usize) -> Vec<WeightedRootedTree> {
    let full = make_complete_tree(2, 3).unwrap();
    let n = full.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        // bit v-1 set: vertex v kept
        let keep = |v: usize| v == 0 || mask & (1 << (v - 1)) != 0;
        if (1..n).filter(|&v| keep(v)).count() > max_edges {
            continue;
        }
        if (1..n).any(|v| keep(v) && !keep(full.parent(v).unwrap())) {
            continue;
        }
        let kept: Vec<usize> = (0..n).filter(|&v| keep(v)).collect();
        let mut id = vec![usize::MAX; n];
        for (k, &v) in kept.iter().enumerate() {
            id[v] = k;
        }
        let parent = kept.iter().map(|&v| full.parent(v).map(|p| id[p])).collect();
        let weight = kept.iter().map(|&v| if v == 0 { 0.0 } else { 1.0 }).collect();
        out.push(WeightedRootedTree::from_parents(0, parent, weight).unwrap());
    }
    out
}

/// A random finite quotient onto a random tree: `|Z| <= 30`, `|T| <= 8`.
/// `Z` is a set of distinct points in the plane with the Euclidean metric,
/// `f` a uniformly random surjection.
pub fn random_quotient(seed: u64) -> (FiniteMetricSpace, WeightedRootedTree, Vec<usize>) {
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let t_len = rng.gen_range(2..=8);
    let tree = make_random_tree(t_len, 0.1, 10.0, rng.gen()).unwrap();
    let z_len = rng.gen_range(t_len..=30);
    let pts: Vec<(f64, f64)> = (0..z_len).map(|_| (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))).collect();
    let mut d = vec![0.0; z_len * z_len];
    for i in 0..z_len {
        for j in 0..z_len {
            if i != j {
                d[i * z_len + j] = ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt();
            }
        }
    }
    let z = FiniteMetricSpace::new(z_len, d).unwrap();
    let mut assign: Vec<usize> = (0..t_len).collect();
    assign.extend((t_len..z_len).map(|_| rng.gen_range(0..t_len)));
    assign.shuffle(&mut rng);
    (z, tree, assign)
}
