//! Low-distortion `ℓ_p` embeddings of weighted trees through caterpillar
//! colorings, exact distortion and codistortion of finite maps, and
//! power-type convexity lower bounds on tree and parasol distortion.
//!
//! Pair scans (distortion, δ-strength, shortest paths) run on rayon when
//! the default `parallel` feature is on; every reduction is deterministic,
//! so results do not depend on the number of workers.

pub mod beta_bounds;
pub mod coloring;
pub mod distortion;
pub mod embedding;
pub mod error;
pub mod graphs;
pub mod metric;
pub mod par;
pub mod pipeline;

pub use coloring::{
    brute_force_kappa, caterpillar_number, optimal_caterpillar_coloring, ColoringStats,
    EdgeColoring, StrongCheck,
};
pub use distortion::{
    codistortion, colipschitz, distortion, lift_tree_quotient, lipschitz, qc_equals_c_check,
    CodistortionReport, DistortionReport, Extremum,
};
pub use embedding::{embed_tree, EmbeddedPointSet};
pub use error::{Error, Result};
pub use graphs::{AnyGraph, WeightedGraph, WeightedRootedTree};
pub use metric::{FiniteMetricSpace, Metric};
pub use par::Execution;
