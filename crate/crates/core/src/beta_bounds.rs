//! Distortion lower bounds for trees and parasols in spaces whose
//! convexity modulus has power type `p`: `β̄(t) >= γ·t^p` on `[0, a]`.
//!
//! The modulus is represented only through that lower bound. Bending
//! bounds, the one-step improvement maps `D ↦ D(1 − β̄(2/D))` (trees) and
//! `D ↦ D(1 − ⅔β̄(2/D))` (parasols), their closed-form consequences, and a
//! numeric fixpoint of the tree recursion live here, along with the gap
//! report that sets the lower bounds against measured embeddings.

use serde::Serialize;

use crate::coloring::optimal_caterpillar_coloring;
use crate::distortion::distortion_with;
use crate::embedding::{embed_tree, lip_bound, LIP_INVERSE_BOUND};
use crate::error::{Error, Result};
use crate::graphs::make_complete_tree;
use crate::par::Execution;

/// Power-type lower model `γ·t^p` of a modulus on `[0, a]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaModulus {
    gamma: f64,
    p: f64,
    a: f64,
}

impl BetaModulus {
    /// Uses the largest admissible endpoint: `a = min(2, γ^{-1/p})`, so
    /// that `γ·a^p <= 1`. Requires `0 <= γ <= 1`.
    pub fn new(gamma: f64, p: f64) -> Result<Self> {
        Self::check(gamma, p)?;
        if gamma > 1.0 {
            return Err(Error::Argument(format!(
                "γ = {gamma} > 1 leaves no endpoint a >= 1 with γ·a^p <= 1"
            )));
        }
        let a = if gamma == 0.0 { 2.0 } else { gamma.powf(-1.0 / p).min(2.0) };
        Ok(Self { gamma, p, a })
    }

    pub fn with_endpoint(gamma: f64, p: f64, a: f64) -> Result<Self> {
        Self::check(gamma, p)?;
        if !(1.0..=2.0).contains(&a) {
            return Err(Error::Argument(format!("endpoint a = {a} must lie in [1, 2]")));
        }
        if gamma * a.powf(p) > 1.0 + 1e-12 {
            return Err(Error::Argument(format!("γ·a^p = {} exceeds 1", gamma * a.powf(p))));
        }
        Ok(Self { gamma, p, a })
    }

    fn check(gamma: f64, p: f64) -> Result<()> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::Argument(format!("γ must be a nonnegative real, got {gamma}")));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::Argument(format!("p must lie in (1, ∞), got {p}")));
        }
        Ok(())
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn endpoint(&self) -> f64 {
        self.a
    }

    /// `γ·t^p` for `t ∈ [0, a]`, capped at 1 so that rounding in
    /// `γ·a^p` never pushes it past the modulus' range.
    pub fn beta_value(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.a).contains(&t) {
            return Err(Error::Domain { t, a: self.a });
        }
        Ok((self.gamma * t.powf(self.p)).min(1.0))
    }

    /// Lower bound valid on all of `[0, ∞)`: monotonicity of the modulus
    /// extends `γ·a^p` past the endpoint.
    fn beta_extended(&self, t: f64) -> f64 {
        (self.gamma * t.min(self.a).powf(self.p)).min(1.0)
    }

    fn beta_at_ratio(&self, dist: f64) -> Result<f64> {
        if dist.is_nan() || dist < 1.0 {
            return Err(Error::Argument(format!("distortion must be at least 1, got {dist}")));
        }
        let t = 2.0 / dist;
        // D = 2/a itself must stay in the domain despite rounding in 2/D
        let t = if t > self.a && t <= self.a * (1.0 + 1e-12) { self.a } else { t };
        self.beta_value(t)
    }
}

/// Bound on `‖f(r) − f(t_i)‖` for the most bent pedicel of an umbel:
/// `2·lip·(1 − β̄(2/dist))`.
pub fn umbel_bending_bound(lip: f64, dist: f64, modulus: &BetaModulus) -> Result<f64> {
    Ok(2.0 * lip * (1.0 - modulus.beta_at_ratio(dist)?))
}

/// Bound on `‖f(r) − f(s)‖` for a level-1 parasol: `3·lip·(1 − ⅔β̄(2/dist))`.
pub fn parasol_bending_bound(lip: f64, dist: f64, modulus: &BetaModulus) -> Result<f64> {
    Ok(3.0 * lip * (1.0 - 2.0 / 3.0 * modulus.beta_at_ratio(dist)?))
}

/// Distortion achievable for the tree of half the height: `D(1 − β̄(2/D))`.
pub fn improve_tree(d: f64, modulus: &BetaModulus) -> Result<f64> {
    Ok(d * (1.0 - modulus.beta_at_ratio(d)?))
}

/// Distortion achievable for the parasol one level down: `D(1 − ⅔β̄(2/D))`.
pub fn improve_parasol(d: f64, modulus: &BetaModulus) -> Result<f64> {
    Ok(d * (1.0 - 2.0 / 3.0 * modulus.beta_at_ratio(d)?))
}

/// A bound value, flagged when the height is too small for the formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerBound {
    pub value: f64,
    pub degenerate: bool,
}

/// `2·γ^{1/p}·(log₂(h/2))^{1/p}`; zero (flagged) below `h = 2`.
pub fn tree_lower_bound(h: u64, modulus: &BetaModulus) -> LowerBound {
    if h < 2 {
        return LowerBound { value: 0.0, degenerate: true };
    }
    let p = modulus.p;
    let value = 2.0 * modulus.gamma.powf(1.0 / p) * (h as f64 / 2.0).log2().powf(1.0 / p);
    LowerBound { value, degenerate: false }
}

/// `2·(2γ/3)^{1/p}·ℓ^{1/p}`.
pub fn parasol_lower_bound(levels: u64, modulus: &BetaModulus) -> f64 {
    let p = modulus.p;
    2.0 * (2.0 * modulus.gamma / 3.0).powf(1.0 / p) * (levels as f64).powf(1.0 / p)
}

/// Bisection width for [`recursion_lower_bound`].
pub const RECURSION_TOL: f64 = 1e-10;

/// Applies `D ↦ D(1 − c·β̄(2/D))` `k` times from `d`, stopping early once
/// the value falls below the seed distortion 1.
fn improved_k_times(mut d: f64, k: u64, c: f64, modulus: &BetaModulus) -> f64 {
    for _ in 0..k {
        if d < 1.0 {
            break;
        }
        d *= 1.0 - c * modulus.beta_extended(2.0 / d);
    }
    d
}

/// Least `D` whose `k`-fold improvement stays at or above 1, by bisection.
fn least_surviving(k: u64, c: f64, modulus: &BetaModulus) -> f64 {
    let ok = |d: f64| improved_k_times(d, k, c, modulus) >= 1.0;
    if ok(1.0) {
        return 1.0;
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while !ok(hi) {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > RECURSION_TOL {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Least `D` such that `k = log₂ h` improvement steps from `D` never drop
/// below distortion 1. Any embedding of the height-`h` tree must have at
/// least this distortion.
pub fn recursion_lower_bound(h: u64, modulus: &BetaModulus) -> Result<f64> {
    if h == 0 || !h.is_power_of_two() {
        return Err(Error::Argument(format!("height {h} is not a power of two")));
    }
    Ok(least_surviving(h.trailing_zeros() as u64, 1.0, modulus))
}

/// Parasol analogue of [`recursion_lower_bound`]: one parasol improvement
/// step per level.
pub fn parasol_recursion_lower_bound(levels: u64, modulus: &BetaModulus) -> Result<f64> {
    if levels == 0 {
        return Err(Error::Argument("parasol needs at least one level".into()));
    }
    Ok(least_surviving(levels, 2.0 / 3.0, modulus))
}

/// Which family a [`LowerBoundCurve`] describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Tree,
    Parasol,
}

/// Closed-form and recursion-derived lower bounds over a parameter grid
/// (heights for trees, levels for parasols).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundCurve {
    pub family: Family,
    pub grid: Vec<u64>,
    pub closed_form: Vec<f64>,
    pub recursion: Vec<f64>,
}

/// Evaluates both lower bounds on every grid point. Tree heights that are
/// not powers of two use the recursion at the largest power of two below.
pub fn lower_bound_curve(family: Family, grid: &[u64], modulus: &BetaModulus) -> Result<LowerBoundCurve> {
    let mut closed_form = Vec::with_capacity(grid.len());
    let mut recursion = Vec::with_capacity(grid.len());
    for &g in grid {
        if g == 0 {
            return Err(Error::Argument("grid values must be at least 1".into()));
        }
        match family {
            Family::Tree => {
                closed_form.push(tree_lower_bound(g, modulus).value);
                recursion.push(recursion_lower_bound(1 << (63 - g.leading_zeros()), modulus)?);
            }
            Family::Parasol => {
                closed_form.push(parasol_lower_bound(g, modulus));
                recursion.push(parasol_recursion_lower_bound(g, modulus)?);
            }
        }
    }
    Ok(LowerBoundCurve { family, grid: grid.to_vec(), closed_form, recursion })
}

/// Renders a curve as CSV with a `#` header line echoing the modulus.
pub fn lower_bound_curve_csv(curve: &LowerBoundCurve, modulus: &BetaModulus, seed: u64) -> String {
    let family = match curve.family {
        Family::Tree => "tree",
        Family::Parasol => "parasol",
    };
    let mut out = format!("# seed={seed} family={family} p={} gamma={}\n", modulus.p, modulus.gamma);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([if curve.family == Family::Tree { "h" } else { "l" }, "lower_closed", "lower_recursion"])
        .expect("in-memory writer");
    for ((g, c), r) in curve.grid.iter().zip(&curve.closed_form).zip(&curve.recursion) {
        w.write_record([g.to_string(), c.to_string(), r.to_string()]).expect("in-memory writer");
    }
    out.push_str(std::str::from_utf8(&w.into_inner().expect("in-memory writer")).expect("utf-8"));
    out
}

/// Parameters of a gap report.
#[derive(Clone, Debug, PartialEq)]
pub struct GapConfig {
    pub heights: Vec<u64>,
    pub p: f64,
    pub gamma: f64,
    pub branching: usize,
    /// Trees larger than this are not embedded; `measured_dist` is left empty.
    pub max_vertices: usize,
    pub exec: Execution,
}

impl GapConfig {
    pub fn new(heights: Vec<u64>, p: f64, gamma: f64, branching: usize) -> Self {
        Self { heights, p, gamma, branching, max_vertices: 4096, exec: Execution::default() }
    }
}

/// One height of the gap report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapRow {
    pub h: u64,
    pub lower_closed: f64,
    pub lower_recursion: f64,
    pub measured_dist: Option<f64>,
    pub upper_theoretical: f64,
    /// `(log₂ h)^{1/p} / (log₂ h)^{1/2}`; empty for `h = 1` or `p > 2`.
    pub ratio_p413: Option<f64>,
    #[serde(skip)]
    pub invalid_modulus: bool,
}

/// Lower bounds, measured caterpillar-embedding distortion of the complete
/// `b`-ary tree, and the theoretical upper bound, per height.
pub fn gap_report(config: &GapConfig) -> Result<Vec<GapRow>> {
    let modulus = BetaModulus::new(config.gamma, config.p)?;
    if config.branching < 2 {
        return Err(Error::Argument("gap report needs branching b >= 2".into()));
    }
    let p = config.p;
    config
        .heights
        .iter()
        .map(|&h| {
            if h == 0 {
                return Err(Error::Argument("heights must be at least 1".into()));
            }
            let lower_closed = tree_lower_bound(h, &modulus).value;
            // the height-2^k subtree sits inside the height-h tree
            let lower_recursion = lower_bound_curve(Family::Tree, &[h], &modulus)?.recursion[0];
            let upper_theoretical = LIP_INVERSE_BOUND * lip_bound(h as usize, p);
            let measured_dist = measured_distortion(config, h)?;
            let log_h = (h as f64).log2();
            let ratio_p413 = (h >= 2 && p <= 2.0).then(|| log_h.powf(1.0 / p) / log_h.sqrt());
            Ok(GapRow {
                h,
                lower_closed,
                lower_recursion,
                measured_dist,
                upper_theoretical,
                ratio_p413,
                invalid_modulus: lower_closed.max(lower_recursion) > upper_theoretical,
            })
        })
        .collect()
}

fn measured_distortion(config: &GapConfig, h: u64) -> Result<Option<f64>> {
    let b = config.branching as f64;
    let count = (b.powf(h as f64 + 1.0) - 1.0) / (b - 1.0);
    if count > config.max_vertices as f64 {
        return Ok(None);
    }
    let tree = make_complete_tree(config.branching, h as usize)?;
    let coloring = optimal_caterpillar_coloring(&tree);
    let points = embed_tree(&coloring, config.p)?;
    let identity: Vec<usize> = (0..tree.len()).collect();
    Ok(Some(distortion_with(&tree, &points, &identity, config.exec)?.dist))
}

/// Renders the report as CSV with a `#` header line echoing the config.
pub fn gap_report_csv(config: &GapConfig, rows: &[GapRow], seed: u64) -> String {
    let mut out = format!(
        "# seed={seed} p={} gamma={} b={} max_vertices={}\n",
        config.p, config.gamma, config.branching, config.max_vertices
    );
    for r in rows.iter().filter(|r| r.invalid_modulus) {
        out.push_str(&format!("# invalid modulus at h={}: lower bound exceeds upper bound\n", r.h));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    out.push_str(std::str::from_utf8(&w.into_inner().expect("in-memory writer")).expect("utf-8"));
    out
}
