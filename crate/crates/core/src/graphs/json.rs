//! JSON interchange:
//! `{"kind":"tree"|"graph","n":int,"root":int,"edges":[[u,v,w],...],"marks":{"r":int,"s":int}?}`.

use serde::{Deserialize, Serialize};

use super::{WeightedGraph, WeightedRootedTree};
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Marks {
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
}

/// On-disk form of a graph file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub kind: String,
    pub n: usize,
    #[serde(default)]
    pub root: usize,
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marks: Option<Marks>,
    /// Seed of the generator that produced the file, when random.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A parsed graph file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyGraph {
    Tree(WeightedRootedTree),
    Graph(WeightedGraph),
}

impl AnyGraph {
    pub fn len(&self) -> usize {
        match self {
            AnyGraph::Tree(t) => t.len(),
            AnyGraph::Graph(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_count(&self) -> usize {
        match self {
            AnyGraph::Tree(t) => t.edge_count(),
            AnyGraph::Graph(g) => g.edges().len(),
        }
    }

    pub fn to_doc(&self) -> GraphDoc {
        match self {
            AnyGraph::Tree(t) => GraphDoc {
                kind: "tree".into(),
                n: t.len(),
                root: t.root(),
                edges: t.edge_list(),
                marks: None,
                seed: None,
            },
            AnyGraph::Graph(g) => GraphDoc {
                kind: "graph".into(),
                n: g.len(),
                root: g.marks().map_or(0, |m| m.r),
                edges: g.edges().to_vec(),
                marks: g.marks(),
                seed: None,
            },
        }
    }

    pub fn from_doc(doc: GraphDoc) -> Result<Self> {
        match doc.kind.as_str() {
            "tree" => WeightedRootedTree::from_edges(doc.n, doc.root, &doc.edges).map(AnyGraph::Tree),
            "graph" => WeightedGraph::new(doc.n, doc.edges, doc.marks).map(AnyGraph::Graph),
            other => Err(Error::Parse(format!("unknown graph kind {other:?}"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_doc(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("graph docs serialize")
    }

    pub fn into_tree(self) -> Result<WeightedRootedTree> {
        match self {
            AnyGraph::Tree(t) => Ok(t),
            AnyGraph::Graph(_) => Err(Error::NotATree("expected a file of kind \"tree\"".into())),
        }
    }
}

/// Reads either a graph file (tree or graph) or a metric table file
/// (`{"kind":"metric",...}`) as a finite metric space.
pub fn parse_space(text: &str) -> Result<FiniteMetricSpace> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("kind").and_then(|k| k.as_str()) == Some("metric") {
        Ok(serde_json::from_value(value)?)
    } else {
        super::metric_of(&AnyGraph::from_doc(serde_json::from_value(value)?)?)
    }
}
