//! End-to-end run on one tree: caterpillar number, optimal coloring,
//! embedding, exact distortion, and comparison with the proven bounds.

use serde::Serialize;

use crate::coloring::{caterpillar_number, optimal_caterpillar_coloring};
use crate::distortion::distortion_with;
use crate::embedding::{embed_tree, lip_bound, lip_bound_ln, LIP_INVERSE_BOUND};
use crate::error::Result;
use crate::graphs::WeightedRootedTree;
use crate::par::Execution;

/// Default relative slack on the bound comparison.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub kappa: usize,
    pub delta_best: Option<f64>,
    pub lip: f64,
    pub lip_inv: f64,
    pub dist: f64,
    /// `(6 log₂(2κ))^{1/p}`.
    pub bound_lip: f64,
    /// `(6 ln(2κ))^{1/p}`, recorded alongside; not used for `within_bounds`.
    pub bound_lip_ln: f64,
    pub bound_lip_inv: f64,
    pub within_bounds: bool,
}

pub fn run_pipeline(tree: &WeightedRootedTree, p: f64) -> Result<PipelineReport> {
    run_pipeline_with(tree, p, BOUND_TOL, Execution::default())
}

pub fn run_pipeline_with(
    tree: &WeightedRootedTree,
    p: f64,
    tol: f64,
    exec: Execution,
) -> Result<PipelineReport> {
    let kappa = caterpillar_number(tree);
    let coloring = optimal_caterpillar_coloring(tree);
    debug_assert_eq!(coloring.kappa_achieved(), kappa);
    let points = embed_tree(&coloring, p)?;
    let identity: Vec<usize> = (0..tree.len()).collect();
    let report = distortion_with(tree, &points, &identity, exec)?;
    let delta_best = coloring.best_delta_with(exec).ok().map(|b| b.delta);
    let bound_lip = lip_bound(kappa, p);
    let (lip, lip_inv) = (report.lip.value, report.lip_inverse.value);
    let within_bounds =
        lip <= bound_lip * (1.0 + tol) && lip_inv <= LIP_INVERSE_BOUND * (1.0 + tol);
    Ok(PipelineReport {
        kappa,
        delta_best,
        lip,
        lip_inv,
        dist: report.dist,
        bound_lip,
        bound_lip_ln: lip_bound_ln(kappa, p),
        bound_lip_inv: LIP_INVERSE_BOUND,
        within_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::make_complete_tree;

    #[test]
    fn single_edge() {
        let t = WeightedRootedTree::from_parents(0, vec![None, Some(0)], vec![0.0, 4.0]).unwrap();
        let r = run_pipeline(&t, 2.0).unwrap();
        assert_eq!(r.kappa, 1);
        assert!((r.lip - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((r.lip_inv - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((r.dist - 1.0).abs() < 1e-12);
        assert!(r.within_bounds);
    }

    #[test]
    fn single_vertex_is_vacuous() {
        let r = run_pipeline(&WeightedRootedTree::single_vertex(), 2.0).unwrap();
        assert_eq!((r.kappa, r.dist, r.delta_best), (0, 1.0, None));
        assert!(r.within_bounds);
    }

    #[test]
    fn complete_binary_height_four() {
        let t = make_complete_tree(2, 4).unwrap();
        let r = run_pipeline(&t, 2.0).unwrap();
        assert_eq!(r.kappa, 4);
        assert!(r.within_bounds);
        assert!(r.dist >= 1.0);
    }
}
