//! Embedding of a colored weighted tree into `ℓ_p(colors)`.
//!
//! For a vertex `x` whose root path meets classes `c_1, ..., c_m` with
//! accumulated weights `ℓ_1, ..., ℓ_m`, the image is
//!
//! ```text
//! f(x) = Σ_i ℓ_i^{1/p} · s_i^{(p-1)/p} · e_{c_i},
//! s_i  = Σ_{j >= i} (ℓ_j - ℓ_i / (2κ))⁺
//! ```
//!
//! where `κ` bounds the number of classes on any root-leaf path. The map
//! has `Lip(f⁻¹) <= 96` and `Lip(f) <= (6 log₂(2κ))^{1/p}`.

use std::io;

use serde::{Deserialize, Serialize};

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::graphs::WeightedRootedTree;
use crate::metric::Metric;

/// Bound on `Lip(f⁻¹)` for the caterpillar embedding.
pub const LIP_INVERSE_BOUND: f64 = 96.0;

/// `(6 log₂(2κ))^{1/p}`, the bound on `Lip(f)`; `κ` is taken as at least 1.
pub fn lip_bound(kappa: usize, p: f64) -> f64 {
    (6.0 * (2.0 * kappa.max(1) as f64).log2()).powf(1.0 / p)
}

/// Natural-log variant `(6 ln(2κ))^{1/p}`; never larger than [`lip_bound`].
pub fn lip_bound_ln(kappa: usize, p: f64) -> f64 {
    (6.0 * (2.0 * kappa.max(1) as f64).ln()).powf(1.0 / p)
}

/// One color class met on a root path, with the weight it contributes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassSegment {
    pub color: usize,
    pub length: f64,
}

/// Classes on the root–`x` path in root-to-`x` order.
pub fn profile(coloring: &EdgeColoring<'_>, x: usize) -> Vec<ClassSegment> {
    let tree = coloring.tree();
    let mut up: Vec<usize> = tree.path_up(x, tree.root()).collect();
    up.reverse();
    let mut out: Vec<ClassSegment> = Vec::new();
    for e in up {
        let color = coloring.color(e).unwrap();
        match out.last_mut() {
            Some(seg) if seg.color == color => seg.length += tree.weight(e),
            _ => out.push(ClassSegment { color, length: tree.weight(e) }),
        }
    }
    out
}

/// `s_1, ..., s_m` for one profile.
pub fn s_values(profile: &[ClassSegment], kappa: usize) -> Result<Vec<f64>> {
    if kappa < profile.len() || (kappa == 0 && !profile.is_empty()) {
        return Err(Error::Argument(format!(
            "κ = {kappa} is below the {} classes on this path",
            profile.len()
        )));
    }
    let two_kappa = 2.0 * kappa as f64;
    Ok((0..profile.len())
        .map(|i| {
            let cut = profile[i].length / two_kappa;
            profile[i..].iter().map(|seg| (seg.length - cut).max(0.0)).sum()
        })
        .collect())
}

/// Sparse images of the vertices of a tree in `ℓ_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedPointSet {
    p: f64,
    /// Per vertex: `(color, coordinate)` sorted by color.
    coords: Vec<Vec<(usize, f64)>>,
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("exponent p must lie in (1, ∞), got {p}")))
    }
}

/// Embeds with `κ` equal to the coloring's achieved value.
pub fn embed_tree(coloring: &EdgeColoring<'_>, p: f64) -> Result<EmbeddedPointSet> {
    embed_tree_with_kappa(coloring, p, coloring.kappa_achieved().max(1))
}

/// Embeds with an explicit `κ`, which must be at least the achieved value.
pub fn embed_tree_with_kappa(
    coloring: &EdgeColoring<'_>,
    p: f64,
    kappa: usize,
) -> Result<EmbeddedPointSet> {
    check_exponent(p)?;
    let tree = coloring.tree();
    let mut profiles: Vec<Vec<ClassSegment>> = vec![Vec::new(); tree.len()];
    let mut coords = vec![Vec::new(); tree.len()];
    let (a, b) = (1.0 / p, (p - 1.0) / p);
    for v in tree.edges() {
        let parent = tree.parent(v).unwrap();
        let mut prof = profiles[parent].clone();
        let color = coloring.color(v).unwrap();
        if coloring.starts_class(v) {
            prof.push(ClassSegment { color, length: tree.weight(v) });
        } else {
            prof.last_mut().unwrap().length += tree.weight(v);
        }
        let s = s_values(&prof, kappa)?;
        let mut c: Vec<(usize, f64)> = prof
            .iter()
            .zip(&s)
            .map(|(seg, s)| (seg.color, seg.length.powf(a) * s.powf(b)))
            .collect();
        c.sort_unstable_by_key(|&(color, _)| color);
        coords[v] = c;
        profiles[v] = prof;
    }
    Ok(EmbeddedPointSet { p, coords })
}

impl EmbeddedPointSet {
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Nonzero coordinates of vertex `v`, sorted by color.
    pub fn coords(&self, v: usize) -> &[(usize, f64)] {
        &self.coords[v]
    }

    /// `‖f(x) − f(y)‖_p`; `p` must match the point set's exponent.
    pub fn lp_distance(&self, x: usize, y: usize, p: f64) -> Result<f64> {
        if p != self.p {
            return Err(Error::Argument(format!(
                "point set uses p = {}, distance requested with p = {p}",
                self.p
            )));
        }
        Ok(self.distance(x, y))
    }

    fn distance(&self, x: usize, y: usize) -> f64 {
        let (u, v) = (&self.coords[x], &self.coords[y]);
        let p = self.p;
        let (mut i, mut j) = (0, 0);
        let mut acc = 0.0;
        while i < u.len() || j < v.len() {
            let d = match (u.get(i), v.get(j)) {
                (Some(&(cu, a)), Some(&(cv, b))) if cu == cv => {
                    i += 1;
                    j += 1;
                    a - b
                }
                (Some(&(cu, a)), Some(&(cv, _))) if cu < cv => {
                    i += 1;
                    a
                }
                (Some(&(_, a)), None) => {
                    i += 1;
                    a
                }
                (_, Some(&(_, b))) => {
                    j += 1;
                    b
                }
                (None, None) => unreachable!(),
            };
            acc += d.abs().powf(p);
        }
        acc.powf(1.0 / p)
    }

    /// One JSON object per vertex: `{"v":id,"coords":[[color,value],...]}`.
    pub fn write_jsonl<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        for (v, coords) in self.coords.iter().enumerate() {
            let line = serde_json::to_string(&PointLine { v, coords: coords.clone() })?;
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    pub fn from_jsonl(text: &str, p: f64) -> Result<Self> {
        check_exponent(p)?;
        let mut coords = Vec::new();
        for (k, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
            let PointLine { v, coords: mut c } = serde_json::from_str(line)?;
            if v != k {
                return Err(Error::Parse(format!("line {k} describes vertex {v}")));
            }
            c.sort_unstable_by_key(|&(color, _)| color);
            coords.push(c);
        }
        Ok(Self { p, coords })
    }

    /// CSV audit table `x,y,tree_dist,embed_dist,ratio` over all pairs `x < y`.
    pub fn write_ratio_csv<W: io::Write>(&self, tree: &WeightedRootedTree, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io_err = |e: csv::Error| Error::Parse(e.to_string());
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                let t = tree.tree_distance(x, y);
                let e = self.distance(x, y);
                w.serialize(RatioRow { x, y, tree_dist: t, embed_dist: e, ratio: e / t })
                    .map_err(io_err)?;
            }
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))
    }
}

impl Metric for EmbeddedPointSet {
    fn len(&self) -> usize {
        self.coords.len()
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.distance(i, j)
    }
}

#[derive(Serialize, Deserialize)]
struct PointLine {
    v: usize,
    coords: Vec<(usize, f64)>,
}

#[derive(Serialize)]
struct RatioRow {
    x: usize,
    y: usize,
    tree_dist: f64,
    embed_dist: f64,
    ratio: f64,
}
