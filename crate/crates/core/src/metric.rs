//! Finite metric spaces and the [`Metric`] view shared by every distance
//! carrier in the crate (tables, trees, embedded point sets).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for the triangle inequality on user-supplied tables.
pub const TRIANGLE_TOL: f64 = 1e-9;

/// A finite set of points `0..len()` with a distance function.
pub trait Metric: Sync {
    fn len(&self) -> usize;

    fn dist(&self, i: usize, j: usize) -> f64;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<M: Metric + ?Sized> Metric for &M {
    fn len(&self) -> usize {
        (**self).len()
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        (**self).dist(i, j)
    }
}

/// Symmetric distance table with zero diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MetricTable", into = "MetricTable")]
pub struct FiniteMetricSpace {
    n: usize,
    d: Vec<f64>,
}

impl FiniteMetricSpace {
    /// Builds a space from a row-major `n x n` table, checking every
    /// metric axiom (triangle inequality within [`TRIANGLE_TOL`]).
    pub fn new(n: usize, table: Vec<f64>) -> Result<Self> {
        let space = Self::from_table(n, table)?;
        if let Some((i, j, k)) = space.triangle_violation(TRIANGLE_TOL) {
            return Err(Error::InvalidMetric(format!(
                "triangle inequality fails for d({i},{k}) > d({i},{j}) + d({j},{k})"
            )));
        }
        Ok(space)
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric("distance table is not square".into()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    /// Checks everything except the triangle inequality. Used for tables
    /// that are metrics by construction (shortest paths).
    pub(crate) fn from_table(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(Error::InvalidMetric(format!(
                "expected {} entries, found {}",
                n * n,
                d.len()
            )));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::InvalidMetric(format!("nonzero diagonal at {i}")));
            }
            for j in i + 1..n {
                let a = d[i * n + j];
                if a != d[j * n + i] {
                    return Err(Error::InvalidMetric(format!("asymmetric at ({i},{j})")));
                }
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::InvalidMetric(format!(
                        "distance at ({i},{j}) must be positive and finite, got {a}"
                    )));
                }
            }
        }
        Ok(Self { n, d })
    }

    /// Materializes any metric as a table.
    pub fn from_metric<M: Metric>(m: &M) -> Self {
        let n = m.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = m.dist(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self { n, d }
    }

    /// First triple `(i, j, k)` with `d(i,k) > d(i,j) + d(j,k) + tol`.
    pub fn triangle_violation(&self, tol: f64) -> Option<(usize, usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for k in i + 1..n {
                let direct = self.d[i * n + k];
                for j in 0..n {
                    if direct > self.d[i * n + j] + self.d[j * n + k] + tol {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.d.chunks(self.n.max(1)).take(self.n).map(<[f64]>::to_vec).collect()
    }

    /// The subspace on `points` (in that order).
    pub fn restrict(&self, points: &[usize]) -> Self {
        Self::from_metric(&Subspace::new(self, points))
    }
}

impl Metric for FiniteMetricSpace {
    fn len(&self) -> usize {
        self.n
    }

    #[inline]
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

/// A metric restricted to a list of base points; point `k` of the view
/// is `points[k]` of the base.
#[derive(Clone, Debug)]
pub struct Subspace<'a, M: ?Sized> {
    base: &'a M,
    points: &'a [usize],
}

impl<'a, M: Metric + ?Sized> Subspace<'a, M> {
    pub fn new(base: &'a M, points: &'a [usize]) -> Self {
        Self { base, points }
    }
}

impl<M: Metric + ?Sized> Metric for Subspace<'_, M> {
    fn len(&self) -> usize {
        self.points.len()
    }
    fn dist(&self, i: usize, j: usize) -> f64 {
        self.base.dist(self.points[i], self.points[j])
    }
}

/// JSON form: `{"kind":"metric","n":3,"d":[[0,1,2],[1,0,1],[2,1,0]]}`.
#[derive(Serialize, Deserialize)]
struct MetricTable {
    kind: String,
    n: usize,
    d: Vec<Vec<f64>>,
}

impl TryFrom<MetricTable> for FiniteMetricSpace {
    type Error = Error;

    fn try_from(t: MetricTable) -> Result<Self> {
        if t.kind != "metric" {
            return Err(Error::Parse(format!("expected kind \"metric\", found {:?}", t.kind)));
        }
        if t.d.len() != t.n {
            return Err(Error::InvalidMetric(format!("n = {} but {} rows", t.n, t.d.len())));
        }
        Self::from_rows(t.d)
    }
}

impl From<FiniteMetricSpace> for MetricTable {
    fn from(s: FiniteMetricSpace) -> Self {
        MetricTable { kind: "metric".into(), n: s.n, d: s.rows() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_broken_axioms() {
        assert!(FiniteMetricSpace::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(FiniteMetricSpace::from_rows(vec![vec![1.0]]).is_err());
        assert!(FiniteMetricSpace::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
        let bad = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]];
        assert!(matches!(FiniteMetricSpace::from_rows(bad), Err(Error::InvalidMetric(_))));
    }

    #[test]
    fn json_roundtrip_and_restrict() {
        let s = FiniteMetricSpace::from_rows(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ])
        .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"kind\":\"metric\""));
        let back: FiniteMetricSpace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let sub = s.restrict(&[2, 0]);
        assert_eq!(sub.dist(0, 1), 2.0);
    }
}
