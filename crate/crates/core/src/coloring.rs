//! Monotone edge colorings of rooted trees: the caterpillar number, an
//! optimal caterpillar coloring, and δ-strong coloring checks.
//!
//! An edge is identified with its lower endpoint, so colorings are stored
//! per vertex with `None` at the root.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::WeightedRootedTree;
use crate::par::{self, Execution};

/// Relative slack used when comparing class lengths against `δ·ρ` and
/// covered length against `ρ/2`.
pub const STRONG_TOL: f64 = 1e-12;

/// Edge count above which [`brute_force_kappa`] refuses to enumerate.
pub const BRUTE_FORCE_MAX_EDGES: usize = 9;

/// A validated monotone coloring of the edges of a tree.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeColoring<'t> {
    tree: &'t WeightedRootedTree,
    color: Vec<Option<usize>>,
    classes: usize,
    /// `top[v]`: the edge of `v` starts its class (its parent edge differs).
    top: Vec<bool>,
}

/// Summary statistics of a coloring.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ColoringStats {
    pub kappa: usize,
    pub delta: Option<f64>,
    pub classes: usize,
}

/// Result of [`EdgeColoring::verify_strong`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrongCheck {
    Pass,
    Counterexample(usize, usize),
}

impl StrongCheck {
    pub fn passed(&self) -> bool {
        matches!(self, StrongCheck::Pass)
    }
}

/// The largest δ for which a coloring is δ-strong, with the pair that
/// attains it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BestDelta {
    pub delta: f64,
    pub pair: (usize, usize),
}

impl<'t> EdgeColoring<'t> {
    /// Validates `color` (one entry per vertex, `None` exactly at the root)
    /// for density of ids and monotonicity.
    pub fn new(tree: &'t WeightedRootedTree, color: Vec<Option<usize>>) -> Result<Self> {
        let n = tree.len();
        if color.len() != n {
            return Err(Error::Argument(format!("expected {n} colors, found {}", color.len())));
        }
        if color[tree.root()].is_some() {
            return Err(Error::Argument("the root carries no edge and takes no color".into()));
        }
        let mut classes = 0;
        for v in tree.edges() {
            match color[v] {
                None => return Err(Error::Argument(format!("edge of vertex {v} is uncolored"))),
                Some(c) => classes = classes.max(c + 1),
            }
        }
        let mut used = vec![false; classes];
        let mut tops = vec![0usize; classes];
        let mut top = vec![false; n];
        for v in tree.edges() {
            let c = color[v].unwrap();
            used[c] = true;
            let p = tree.parent(v).unwrap();
            if color[p] != Some(c) {
                top[v] = true;
                tops[c] += 1;
                if tops[c] > 1 {
                    return Err(Error::NotMonotone(format!(
                        "class {c} is not connected along a root-leaf path (vertex {v})"
                    )));
                }
            }
        }
        if let Some(c) = used.iter().position(|u| !u) {
            return Err(Error::Argument(format!("color ids are not dense: {c} is unused")));
        }
        for v in 0..n {
            let kids = tree.children(v);
            for (a, &x) in kids.iter().enumerate() {
                if kids[a + 1..].iter().any(|&y| color[y] == color[x]) {
                    return Err(Error::NotMonotone(format!(
                        "class {} branches at vertex {v}",
                        color[x].unwrap()
                    )));
                }
            }
        }
        Ok(Self { tree, color, classes, top })
    }

    /// Every edge in its own class, numbered in breadth-first order.
    pub fn all_distinct(tree: &'t WeightedRootedTree) -> Self {
        let mut color = vec![None; tree.len()];
        for (c, v) in tree.edges().enumerate() {
            color[v] = Some(c);
        }
        Self::new(tree, color).expect("distinct colors are monotone")
    }

    /// Builds a coloring from continuation choices: `next[v]` is the child
    /// of `v` whose edge continues the class of `v`'s parent edge.
    pub(crate) fn from_continuations(tree: &'t WeightedRootedTree, next: &[Option<usize>]) -> Self {
        let mut color = vec![None; tree.len()];
        let mut classes = 0;
        for v in tree.edges() {
            let p = tree.parent(v).unwrap();
            color[v] = if next[p] == Some(v) && color[p].is_some() {
                color[p]
            } else {
                classes += 1;
                Some(classes - 1)
            };
        }
        Self::new(tree, color).expect("continuations give monotone colorings")
    }

    pub fn tree(&self) -> &'t WeightedRootedTree {
        self.tree
    }

    pub fn color(&self, v: usize) -> Option<usize> {
        self.color[v]
    }

    pub fn colors(&self) -> &[Option<usize>] {
        &self.color
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub(crate) fn starts_class(&self, v: usize) -> bool {
        self.top[v]
    }

    /// Maximum number of distinct classes on a root-leaf path.
    pub fn kappa_achieved(&self) -> usize {
        let mut count = vec![0usize; self.tree.len()];
        let mut best = 0;
        for v in self.tree.edges() {
            let p = self.tree.parent(v).unwrap();
            count[v] = count[p] + usize::from(self.top[v]);
            best = best.max(count[v]);
        }
        best
    }

    /// Total weight of class-`c` edges on the `x`–`y` path.
    pub fn color_length(&self, c: usize, x: usize, y: usize) -> f64 {
        let a = self.tree.lca_unchecked(x, y);
        self.tree
            .path_up(x, a)
            .chain(self.tree.path_up(y, a))
            .filter(|&e| self.color[e] == Some(c))
            .map(|e| self.tree.weight(e))
            .sum()
    }

    /// `(class, length)` for every class met on the `x`–`y` path, sorted
    /// by class id.
    pub fn class_lengths(&self, x: usize, y: usize) -> Vec<(usize, f64)> {
        let a = self.tree.lca_unchecked(x, y);
        let mut runs: Vec<(usize, f64)> = Vec::new();
        for e in self.tree.path_up(x, a).chain(self.tree.path_up(y, a)) {
            let c = self.color[e].unwrap();
            match runs.last_mut() {
                Some((last, len)) if *last == c => *len += self.tree.weight(e),
                _ => runs.push((c, self.tree.weight(e))),
            }
        }
        runs.sort_by_key(|&(c, _)| c);
        runs.dedup_by(|next, prev| {
            if next.0 == prev.0 {
                prev.1 += next.1;
                true
            } else {
                false
            }
        });
        runs
    }

    fn pair_is_strong(&self, x: usize, y: usize, delta: f64) -> bool {
        let rho = self.tree.tree_distance(x, y);
        let threshold = delta * rho * (1.0 - STRONG_TOL);
        let covered: f64 = self
            .class_lengths(x, y)
            .into_iter()
            .map(|(_, len)| len)
            .filter(|&len| len >= threshold)
            .sum();
        covered >= 0.5 * rho * (1.0 - STRONG_TOL)
    }

    /// Checks that, for every pair, classes of length at least `δ·ρ(x,y)`
    /// jointly cover at least half of the path.
    pub fn verify_strong(&self, delta: f64) -> StrongCheck {
        self.verify_strong_with(delta, Execution::default())
    }

    pub fn verify_strong_with(&self, delta: f64, exec: Execution) -> StrongCheck {
        match par::first_pair(self.tree.len(), exec, |x, y| !self.pair_is_strong(x, y, delta)) {
            None => StrongCheck::Pass,
            Some((x, y)) => StrongCheck::Counterexample(x, y),
        }
    }

    /// Largest δ for the single pair `(x, y)`, `x != y`.
    pub fn pair_delta(&self, x: usize, y: usize) -> f64 {
        let rho = self.tree.tree_distance(x, y);
        let mut lens: Vec<f64> = self.class_lengths(x, y).into_iter().map(|(_, l)| l).collect();
        lens.sort_by(|a, b| b.total_cmp(a));
        let half = 0.5 * rho * (1.0 - STRONG_TOL);
        let mut acc = 0.0;
        for &l in &lens {
            acc += l;
            if acc >= half {
                return l / rho;
            }
        }
        lens.last().map_or(1.0, |l| l / rho)
    }

    /// Largest δ for which the coloring is δ-strong: the minimum of
    /// [`Self::pair_delta`] over all pairs.
    pub fn best_delta(&self) -> Result<BestDelta> {
        self.best_delta_with(Execution::default())
    }

    pub fn best_delta_with(&self, exec: Execution) -> Result<BestDelta> {
        par::min_over_pairs(self.tree.len(), exec, |x, y| Some(self.pair_delta(x, y)))
            .map(|s| BestDelta { delta: s.value, pair: s.pair })
            .ok_or_else(|| Error::Argument("δ is undefined on a single-vertex tree".into()))
    }

    pub fn stats(&self) -> ColoringStats {
        ColoringStats {
            kappa: self.kappa_achieved(),
            delta: self.best_delta().ok().map(|b| b.delta),
            classes: self.classes,
        }
    }
}

/// Bottom-up caterpillar recursion. `m[v]` is the least achievable number
/// of classes on any downward path starting with the parent edge of `v`;
/// `next[v]` is the child chosen to continue that edge's class.
fn caterpillar_table(tree: &WeightedRootedTree) -> (Vec<usize>, Vec<Option<usize>>) {
    let n = tree.len();
    let mut m = vec![0usize; n];
    let mut next = vec![None; n];
    for &v in tree.bfs_order().iter().rev() {
        let kids = tree.children(v);
        if kids.is_empty() {
            m[v] = 1;
            continue;
        }
        // top two child values, for max over j != i
        let (mut first, mut second) = (0usize, 0usize);
        let mut first_at = usize::MAX;
        for &u in kids {
            if m[u] > first {
                second = first;
                first = m[u];
                first_at = u;
            } else if m[u] > second {
                second = m[u];
            }
        }
        let mut best = (usize::MAX, usize::MAX);
        for &u in kids {
            let others = if u == first_at { second } else { first };
            let val = if kids.len() == 1 { m[u] } else { m[u].max(1 + others) };
            if val < best.0 {
                best = (val, u);
            }
        }
        m[v] = best.0;
        next[v] = Some(best.1);
    }
    (m, next)
}

/// κ*: the least κ admitting a κ-caterpillar coloring (0 for a single vertex).
pub fn caterpillar_number(tree: &WeightedRootedTree) -> usize {
    let (m, _) = caterpillar_table(tree);
    tree.children(tree.root()).iter().map(|&u| m[u]).max().unwrap_or(0)
}

/// A monotone coloring achieving [`caterpillar_number`]; ties between
/// children go to the smallest id.
pub fn optimal_caterpillar_coloring(tree: &WeightedRootedTree) -> EdgeColoring<'_> {
    let (_, next) = caterpillar_table(tree);
    EdgeColoring::from_continuations(tree, &next)
}

/// Exhaustive minimum of the achieved κ over all monotone colorings,
/// enumerated as per-vertex continuation choices (continue into one child
/// or stop). Independent of the recursion above.
pub fn brute_force_kappa(tree: &WeightedRootedTree) -> Result<usize> {
    if tree.edge_count() > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::Size(format!(
            "brute force is limited to {BRUTE_FORCE_MAX_EDGES} edges, tree has {}",
            tree.edge_count()
        )));
    }
    let root = tree.root();
    let choosers: Vec<usize> =
        (0..tree.len()).filter(|&v| v != root && !tree.is_leaf(v)).collect();
    let mut choice = vec![0usize; choosers.len()];
    let mut next = vec![None; tree.len()];
    let mut best = usize::MAX;
    loop {
        for (k, &v) in choosers.iter().enumerate() {
            next[v] = tree.children(v).get(choice[k]).copied();
        }
        best = best.min(max_classes_on_paths(tree, &next, root, None, 0));
        // odometer over (children + 1) options per chooser
        let mut k = 0;
        loop {
            if k == choosers.len() {
                return Ok(if tree.edge_count() == 0 { 0 } else { best });
            }
            choice[k] += 1;
            if choice[k] <= tree.children(choosers[k]).len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Depth-first count of classes along every root-leaf path, where the
/// edge into `u` continues the current class iff `next[parent] == u`.
fn max_classes_on_paths(
    tree: &WeightedRootedTree,
    next: &[Option<usize>],
    v: usize,
    entered_from: Option<usize>,
    classes: usize,
) -> usize {
    let mut best = classes;
    for &u in tree.children(v) {
        let continues = entered_from.is_some() && next[v] == Some(u);
        let c = if continues { classes } else { classes + 1 };
        best = best.max(max_classes_on_paths(tree, next, u, Some(v), c));
    }
    best
}
