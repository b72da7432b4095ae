//! Weighted rooted trees, general weighted graphs, and their exact
//! shortest-path metrics.

mod generators;
mod json;

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet, VecDeque};

pub use generators::{
    make_complete_tree, make_geometric_binary, make_parasol, make_random_tree, make_umbel,
    parasol_refinement, MAX_VERTICES,
};
pub use json::{parse_space, AnyGraph, GraphDoc, Marks};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, Metric};
use crate::par::{self, Execution};

/// A rooted tree with positive weights on parent edges.
///
/// Vertex `v != root` owns the edge to its parent; `weight(v)` is that
/// edge's weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedRootedTree {
    root: usize,
    parent: Vec<Option<usize>>,
    weight: Vec<f64>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    bfs: Vec<usize>,
}

impl WeightedRootedTree {
    /// `parent[root]` must be `None` and `weight[root]` is ignored.
    pub fn from_parents(root: usize, parent: Vec<Option<usize>>, weight: Vec<f64>) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::InvalidGraph("a tree needs at least one vertex".into()));
        }
        if weight.len() != n {
            return Err(Error::InvalidGraph("parent and weight lengths differ".into()));
        }
        if root >= n {
            return Err(Error::InvalidGraph(format!("root {root} out of range")));
        }
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            match (*p, v == root) {
                (None, true) => {}
                (Some(_), true) => return Err(Error::InvalidGraph("root has a parent".into())),
                (None, false) => {
                    return Err(Error::InvalidGraph(format!("vertex {v} has no parent")))
                }
                (Some(p), false) => {
                    if p >= n {
                        return Err(Error::InvalidGraph(format!("parent {p} out of range")));
                    }
                    let w = weight[v];
                    if !(w > 0.0 && w.is_finite()) {
                        return Err(Error::InvalidGraph(format!(
                            "edge weight must be positive and finite, got {w} at vertex {v}"
                        )));
                    }
                    children[p].push(v);
                }
            }
        }
        for c in &mut children {
            c.sort_unstable();
        }
        let mut depth = vec![usize::MAX; n];
        let mut bfs = Vec::with_capacity(n);
        depth[root] = 0;
        bfs.push(root);
        let mut head = 0;
        while head < bfs.len() {
            let v = bfs[head];
            head += 1;
            for &c in &children[v] {
                depth[c] = depth[v] + 1;
                bfs.push(c);
            }
        }
        if bfs.len() != n {
            return Err(Error::InvalidGraph("parent pointers contain a cycle".into()));
        }
        let mut weight = weight;
        weight[root] = 0.0;
        Ok(Self { root, parent, weight, children, depth, bfs })
    }

    pub fn single_vertex() -> Self {
        Self::from_parents(0, vec![None], vec![0.0]).expect("valid")
    }

    /// Roots an undirected edge list at `root`.
    pub fn from_edges(n: usize, root: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotATree("no vertices".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::NotATree(format!("{n} vertices but {} edges", edges.len())));
        }
        let g = WeightedGraph::new(n, edges.to_vec(), None)?;
        if root >= n {
            return Err(Error::InvalidGraph(format!("root {root} out of range")));
        }
        let mut parent = vec![None; n];
        let mut weight = vec![0.0; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(u, w) in &g.adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    weight[u] = w;
                    queue.push_back(u);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::NotATree(format!("vertex {v} is unreachable from the root")));
        }
        Self::from_parents(root, parent, weight)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn edge_count(&self) -> usize {
        self.len() - 1
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Weight of the edge from `v` to its parent (0 for the root).
    pub fn weight(&self, v: usize) -> f64 {
        self.weight[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Number of edges between `v` and the root.
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&v| self.is_leaf(v))
    }

    /// Vertices in breadth-first order from the root, children by id.
    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs
    }

    /// Non-root vertices, each standing for its parent edge.
    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.bfs.iter().copied().skip(1)
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::Argument(format!("vertex {v} out of range 0..{}", self.len())))
        }
    }

    /// Deepest common ancestor of `x` and `y`.
    pub fn lca(&self, x: usize, y: usize) -> Result<usize> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.lca_unchecked(x, y))
    }

    pub(crate) fn lca_unchecked(&self, mut x: usize, mut y: usize) -> usize {
        while self.depth[x] > self.depth[y] {
            x = self.parent[x].unwrap();
        }
        while self.depth[y] > self.depth[x] {
            y = self.parent[y].unwrap();
        }
        while x != y {
            x = self.parent[x].unwrap();
            y = self.parent[y].unwrap();
        }
        x
    }

    /// Sum of weights from `v` up to its ancestor `a`, accumulated
    /// root-ward.
    fn climb(&self, mut v: usize, a: usize) -> f64 {
        let mut s = 0.0;
        while v != a {
            s += self.weight[v];
            v = self.parent[v].unwrap();
        }
        s
    }

    /// Weighted length of the unique `x`–`y` path: the `x`–lca and
    /// `y`–lca legs are each summed root-ward, then added.
    ///
    /// Panics if either id is out of range.
    pub fn tree_distance(&self, x: usize, y: usize) -> f64 {
        let a = self.lca_unchecked(x, y);
        self.climb(x, a) + self.climb(y, a)
    }

    /// Edges (as child vertices) on the path from `x` up to its ancestor `a`.
    pub(crate) fn path_up(&self, mut x: usize, a: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::from_fn(move || {
            if x == a {
                None
            } else {
                let e = x;
                x = self.parent[x].unwrap();
                Some(e)
            }
        })
    }

    /// All-pairs table; identical to [`Self::tree_distance`] entry by entry.
    pub fn metric(&self) -> FiniteMetricSpace {
        self.metric_with(Execution::default())
    }

    pub fn metric_with(&self, exec: Execution) -> FiniteMetricSpace {
        let n = self.len();
        let rows = par::map_indices(n, exec, |i| {
            (0..n).map(|j| if i == j { 0.0 } else { self.tree_distance(i, j) }).collect::<Vec<_>>()
        });
        FiniteMetricSpace::from_table(n, rows.concat()).expect("tree distances form a metric")
    }

    /// Same tree with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let weight = self.weight.iter().map(|w| w * factor).collect();
        Self::from_parents(self.root, self.parent.clone(), weight)
    }

    /// Undirected edge list `(parent, child, weight)` in BFS order of the child.
    pub fn edge_list(&self) -> Vec<(usize, usize, f64)> {
        self.edges().map(|v| (self.parent[v].unwrap(), v, self.weight[v])).collect()
    }

    pub fn to_graph(&self) -> WeightedGraph {
        let marks = Some(Marks { r: self.root, s: None });
        WeightedGraph::new(self.len(), self.edge_list(), marks).expect("trees are simple graphs")
    }
}

impl Metric for WeightedRootedTree {
    fn len(&self) -> usize {
        self.parent.len()
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.tree_distance(i, j)
    }
}

/// Simple undirected graph with positive edge weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
    marks: Option<Marks>,
}

impl WeightedGraph {
    /// Checks ids, self-loops, duplicate edges and weights. Connectivity is
    /// checked when the metric is requested.
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>, marks: Option<Marks>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v, w) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidGraph(format!("edge ({u},{v}) has weight {w}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u},{v})")));
            }
            adjacency[u].push((v, w));
            adjacency[v].push((u, w));
        }
        for a in &mut adjacency {
            a.sort_by_key(|&(v, _)| v);
        }
        if let Some(m) = &marks {
            if m.r >= n || m.s.is_some_and(|s| s >= n) {
                return Err(Error::InvalidGraph("marked vertex out of range".into()));
            }
        }
        Ok(Self { n, edges, adjacency, marks })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    pub fn marks(&self) -> Option<Marks> {
        self.marks
    }

    /// Single-source shortest paths (Dijkstra); `f64::INFINITY` if unreachable.
    pub fn distances_from(&self, source: usize) -> Vec<f64> {
        #[derive(PartialEq)]
        struct Item(f64, usize);
        impl Eq for Item {}
        impl PartialOrd for Item {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for Item {
            fn cmp(&self, other: &Self) -> Ordering {
                other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
            }
        }

        let mut dist = vec![f64::INFINITY; self.n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(Item(0.0, source));
        while let Some(Item(d, v)) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(u, w) in &self.adjacency[v] {
                let nd = d + w;
                if nd < dist[u] {
                    dist[u] = nd;
                    heap.push(Item(nd, u));
                }
            }
        }
        dist
    }

    /// All-pairs shortest-path metric.
    pub fn metric(&self) -> Result<FiniteMetricSpace> {
        self.metric_with(Execution::default())
    }

    pub fn metric_with(&self, exec: Execution) -> Result<FiniteMetricSpace> {
        if self.n == 0 {
            return Err(Error::InvalidGraph("empty graph".into()));
        }
        if let Some(v) = self.distances_from(0).iter().position(|d| d.is_infinite()) {
            return Err(Error::Disconnected(v));
        }
        let n = self.n;
        let mut rows = par::map_indices(n, exec, |s| self.distances_from(s));
        // Dijkstra from i and from j may round differently; keep the table symmetric.
        for i in 0..n {
            for j in i + 1..n {
                let v = rows[i][j].min(rows[j][i]);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        FiniteMetricSpace::from_table(n, rows.concat())
    }
}

/// Shortest-path metric of a tree or a general graph.
pub fn metric_of(g: &AnyGraph) -> Result<FiniteMetricSpace> {
    match g {
        AnyGraph::Tree(t) => Ok(t.metric()),
        AnyGraph::Graph(g) => g.metric(),
    }
}
