//! Exact Lipschitz, co-Lipschitz, distortion and codistortion of maps
//! between finite metric spaces, and the lift of a Lipschitz quotient onto
//! a tree back to an embedding of the tree.
//!
//! Maps are given as assignments `assign[i] = f(i)` from the points of a
//! source [`Metric`] to the points of a target [`Metric`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::WeightedRootedTree;
use crate::metric::{Metric, Subspace};
use crate::par::{self, Execution};

/// Slack allowed in `dist(lift) <= codist`.
pub const QUOTIENT_TOL: f64 = 1e-9;

/// An extremal ratio and the pair attaining it; `witness` is `None` when
/// there is no pair to scan (fewer than two points).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extremum {
    pub value: f64,
    pub witness: Option<(usize, usize)>,
}

impl Extremum {
    const DEGENERATE: Extremum = Extremum { value: 0.0, witness: None };

    pub fn is_degenerate(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistortionReport {
    pub lip: Extremum,
    pub lip_inverse: Extremum,
    /// `lip · lip_inverse`, or 1 for spaces with fewer than two points.
    pub dist: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CodistortionReport {
    pub lip: Extremum,
    /// Witness is `(x, y')`: source point and target point.
    pub colip: Extremum,
    pub codist: f64,
}

fn check_assignment<S: Metric, T: Metric>(source: &S, target: &T, assign: &[usize]) -> Result<()> {
    if assign.len() != source.len() {
        return Err(Error::Argument(format!(
            "assignment has {} entries for {} source points",
            assign.len(),
            source.len()
        )));
    }
    if let Some(&t) = assign.iter().find(|&&t| t >= target.len()) {
        return Err(Error::Argument(format!("image {t} out of range 0..{}", target.len())));
    }
    Ok(())
}

fn check_injective(assign: &[usize], targets: usize) -> Result<()> {
    let mut seen = vec![usize::MAX; targets];
    for (i, &t) in assign.iter().enumerate() {
        if seen[t] != usize::MAX {
            return Err(Error::NotInjective(seen[t], i));
        }
        seen[t] = i;
    }
    Ok(())
}

fn fibers(assign: &[usize], targets: usize) -> Result<Vec<Vec<usize>>> {
    let mut fib = vec![Vec::new(); targets];
    for (i, &t) in assign.iter().enumerate() {
        fib[t].push(i);
    }
    match fib.iter().position(Vec::is_empty) {
        Some(t) => Err(Error::NotSurjective(t)),
        None => Ok(fib),
    }
}

/// `max d_T(f x, f y) / d_S(x, y)` over pairs of distinct source points.
pub fn lipschitz<S: Metric, T: Metric>(source: &S, target: &T, assign: &[usize]) -> Result<Extremum> {
    lipschitz_with(source, target, assign, Execution::default())
}

pub fn lipschitz_with<S: Metric, T: Metric>(
    source: &S,
    target: &T,
    assign: &[usize],
    exec: Execution,
) -> Result<Extremum> {
    check_assignment(source, target, assign)?;
    Ok(par::max_over_pairs(source.len(), exec, |i, j| {
        Some(target.dist(assign[i], assign[j]) / source.dist(i, j))
    })
    .map_or(Extremum::DEGENERATE, |s| Extremum { value: s.value, witness: Some(s.pair) }))
}

/// Distortion of an injective map.
pub fn distortion<S: Metric, T: Metric>(source: &S, target: &T, assign: &[usize]) -> Result<DistortionReport> {
    distortion_with(source, target, assign, Execution::default())
}

pub fn distortion_with<S: Metric, T: Metric>(
    source: &S,
    target: &T,
    assign: &[usize],
    exec: Execution,
) -> Result<DistortionReport> {
    check_assignment(source, target, assign)?;
    check_injective(assign, target.len())?;
    let lip = lipschitz_with(source, target, assign, exec)?;
    let lip_inverse = par::max_over_pairs(source.len(), exec, |i, j| {
        Some(source.dist(i, j) / target.dist(assign[i], assign[j]))
    })
    .map_or(Extremum::DEGENERATE, |s| Extremum { value: s.value, witness: Some(s.pair) });
    let dist = if lip.is_degenerate() { 1.0 } else { lip.value * lip_inverse.value };
    Ok(DistortionReport { lip, lip_inverse, dist })
}

/// Co-Lipschitz constant of a surjection between finite spaces:
///
/// ```text
/// max over x, y' != f(x) of  min_{z in f⁻¹(y')} d_S(x, z) / d_T(f(x), y')
/// ```
///
/// which is the least `C` with `B_T(f(x), r/C) ⊆ f(B_S(x, r))` for all
/// `x` and `r > 0`.
pub fn colipschitz<S: Metric, T: Metric>(source: &S, target: &T, assign: &[usize]) -> Result<Extremum> {
    colipschitz_with(source, target, assign, Execution::default())
}

pub fn colipschitz_with<S: Metric, T: Metric>(
    source: &S,
    target: &T,
    assign: &[usize],
    exec: Execution,
) -> Result<Extremum> {
    check_assignment(source, target, assign)?;
    let fib = fibers(assign, target.len())?;
    Ok(par::max_over_grid(source.len(), target.len(), exec, |x, y| {
        let fx = assign[x];
        if y == fx {
            return None;
        }
        let reach = fib[y].iter().map(|&z| source.dist(x, z)).fold(f64::INFINITY, f64::min);
        Some(reach / target.dist(fx, y))
    })
    .map_or(Extremum::DEGENERATE, |s| Extremum { value: s.value, witness: Some(s.pair) }))
}

/// `Lip(f) · coLip(f)` of a surjection.
pub fn codistortion<S: Metric, T: Metric>(source: &S, target: &T, assign: &[usize]) -> Result<CodistortionReport> {
    codistortion_with(source, target, assign, Execution::default())
}

pub fn codistortion_with<S: Metric, T: Metric>(
    source: &S,
    target: &T,
    assign: &[usize],
    exec: Execution,
) -> Result<CodistortionReport> {
    let colip = colipschitz_with(source, target, assign, exec)?;
    let lip = lipschitz_with(source, target, assign, exec)?;
    let codist = if colip.is_degenerate() { 1.0 } else { lip.value * colip.value };
    Ok(CodistortionReport { lip, colip, codist })
}

/// Lift of a quotient `f: Z -> T` onto a tree: one chosen point of each
/// fiber, `points[v] ∈ f⁻¹(v)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeLift {
    pub points: Vec<usize>,
}

/// Picks `z_root` as the lowest-id point of the root fiber, then, in
/// breadth-first order, `z_w` as the point of `f⁻¹(w)` nearest to
/// `z_parent(w)` (ties to the lower id). The map `v ↦ z_v` then has
/// distortion at most `codist(f)`.
pub fn lift_tree_quotient<Z: Metric>(
    space: &Z,
    tree: &WeightedRootedTree,
    assign: &[usize],
) -> Result<TreeLift> {
    check_assignment(space, tree, assign)?;
    let fib = fibers(assign, tree.len())?;
    let mut points = vec![usize::MAX; tree.len()];
    points[tree.root()] = fib[tree.root()][0];
    for w in tree.edges() {
        let from = points[tree.parent(w).unwrap()];
        let mut best = (f64::INFINITY, usize::MAX);
        for &z in &fib[w] {
            let d = space.dist(from, z);
            if d < best.0 {
                best = (d, z);
            }
        }
        points[w] = best.1;
    }
    Ok(TreeLift { points })
}

/// Outcome of [`lift_check`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LiftCheck {
    pub codist: f64,
    pub dist_lift: f64,
    pub holds: bool,
}

/// Lifts `f` and compares `dist(lift)` with `codist(f)`.
pub fn lift_check<Z: Metric>(space: &Z, tree: &WeightedRootedTree, assign: &[usize]) -> Result<(TreeLift, LiftCheck)> {
    let lift = lift_tree_quotient(space, tree, assign)?;
    let codist = codistortion(space, tree, assign)?.codist;
    let dist_lift = distortion(tree, space, &lift.points)?.dist;
    let holds = dist_lift <= codist + QUOTIENT_TOL;
    Ok((lift, LiftCheck { codist, dist_lift, holds }))
}

/// Both halves of `qc_Y(T) = c_Y(T)` on finite data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QcReport {
    /// `dist(e)` of the embedding `e: T -> Y`.
    pub dist_embedding: f64,
    /// `codist(e⁻¹)` of `e⁻¹: e(T) -> T` as a quotient.
    pub codist_inverse: f64,
    /// `dist(lift(f))` versus `codist(f)` for the supplied quotient.
    pub quotient: Option<LiftCheck>,
    pub holds: bool,
}

/// Checks `codist(e⁻¹) = dist(e)` for an embedding `e: T -> Y` and, when a
/// quotient `f: Z -> T` is supplied, `dist(lift(f)) <= codist(f)`.
pub fn qc_equals_c_check<Y: Metric, Z: Metric>(
    tree: &WeightedRootedTree,
    space: &Y,
    embedding: &[usize],
    quotient: Option<(&Z, &[usize])>,
) -> Result<QcReport> {
    let dist_embedding = distortion(tree, space, embedding)?.dist;
    let image = Subspace::new(space, embedding);
    let identity: Vec<usize> = (0..tree.len()).collect();
    let codist_inverse = codistortion(&image, tree, &identity)?.codist;
    let quotient = match quotient {
        Some((z, assign)) => Some(lift_check(z, tree, assign)?.1),
        None => None,
    };
    let holds = codist_inverse <= dist_embedding * (1.0 + QUOTIENT_TOL)
        && quotient.is_none_or(|q| q.holds);
    Ok(QcReport { dist_embedding, codist_inverse, quotient, holds })
}
