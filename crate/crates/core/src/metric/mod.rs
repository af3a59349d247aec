//! Finite metric-space models.
//!
//! A compact space is represented by a finite net at a declared resolution.
//! Distances are stored as a dense row-major matrix; all comparisons go through
//! the crate-wide tolerance helpers.

mod generators;
mod gh;

pub use generators::{
    circle, cube_grid, discrete, line, seq_window, torus_grid, window_index, window_symbols, SeqMetric,
};
pub use gh::{gh_distance, glue_realization, GhBudget, GhResult, GluedFamily, Realization};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::{approx_eq, lt, TOL};

/// Finite metric space with labelled points.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    resolution: f64,
}

/// One failed metric axiom.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum MetricViolation {
    Identity { point: usize, value: f64 },
    Positivity { a: usize, b: usize, value: f64 },
    Symmetry { a: usize, b: usize, ab: f64, ba: f64 },
    Triangle { a: usize, b: usize, c: usize, ac: f64, via: f64 },
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Identity { point, value } => write!(f, "d({point},{point}) = {value} != 0"),
            Self::Positivity { a, b, value } => write!(f, "d({a},{b}) = {value} <= 0 for distinct points"),
            Self::Symmetry { a, b, ab, ba } => write!(f, "d({a},{b}) = {ab} but d({b},{a}) = {ba}"),
            Self::Triangle { a, b, c, ac, via } => {
                write!(f, "d({a},{c}) = {ac} > d({a},{b}) + d({b},{c}) = {via}")
            }
        }
    }
}

impl MetricSpace {
    /// Builds a model from labels and a square distance matrix. Only shape and
    /// finiteness are enforced here; the axioms are checked by [`verify_metric`].
    ///
    /// [`verify_metric`]: MetricSpace::verify_metric
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<f64>>, resolution: f64) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidModel("metric space needs at least one point".into()));
        }
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidModel(format!("distance matrix must be {n}x{n}")));
        }
        if !(resolution > 0.0 && resolution.is_finite()) {
            return Err(Error::InvalidModel("resolution must be positive".into()));
        }
        let dist: Vec<f64> = matrix.into_iter().flatten().collect();
        if dist.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidModel("distances must be finite and nonnegative".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidModel(format!("duplicate point label `{l}`")));
            }
        }
        Ok(Self { labels, dist, resolution })
    }

    /// Builds a model from a distance function over `0..n`.
    pub fn from_fn(
        labels: Vec<String>,
        resolution: f64,
        f: impl Fn(usize, usize) -> f64,
    ) -> Result<Self> {
        let n = labels.len();
        let matrix = (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect();
        Self::new(labels, matrix, resolution)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn d(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.len() + b]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.len()).map(|r| r.to_vec()).collect()
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Diameter of a subset; 0 for empty or singleton sets.
    pub fn subset_diameter(&self, pts: impl IntoIterator<Item = usize> + Clone) -> f64 {
        let mut best: f64 = 0.0;
        for a in pts.clone() {
            for b in pts.clone() {
                best = best.max(self.d(a, b));
            }
        }
        best
    }

    /// Distance from a point to a set; `+inf` for the empty set.
    pub fn dist_to_set(&self, x: usize, set: impl IntoIterator<Item = usize>) -> f64 {
        set.into_iter().map(|y| self.d(x, y)).fold(f64::INFINITY, f64::min)
    }

    /// Sorted distinct distance values (with tolerance merging), including 0.
    pub fn distance_values(&self) -> Vec<f64> {
        let mut v = self.dist.clone();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup_by(|a, b| approx_eq(*a, *b));
        v
    }

    /// Checks identity, positivity, symmetry and every triangle.
    pub fn verify_metric(&self) -> Vec<MetricViolation> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            let v = self.d(a, a);
            if !approx_eq(v, 0.0) {
                out.push(MetricViolation::Identity { point: a, value: v });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let (ab, ba) = (self.d(a, b), self.d(b, a));
                if a < b && !approx_eq(ab, ba) {
                    out.push(MetricViolation::Symmetry { a, b, ab, ba });
                }
                if ab <= TOL {
                    out.push(MetricViolation::Positivity { a, b, value: ab });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let via = self.d(a, b) + self.d(b, c);
                    let ac = self.d(a, c);
                    if lt(via, ac) {
                        out.push(MetricViolation::Triangle { a, b, c, ac, via });
                    }
                }
            }
        }
        out
    }

    /// Hausdorff distance between two nonempty subsets.
    pub fn hausdorff(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::Domain("Hausdorff distance of an empty set".into()));
        }
        if let Some(&bad) = a.iter().chain(b).find(|&&p| p >= self.len()) {
            return Err(Error::Domain(format!("point {bad} outside the model")));
        }
        let one_sided = |from: &[usize], to: &[usize]| {
            from.iter()
                .map(|&x| to.iter().map(|&y| self.d(x, y)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        Ok(one_sided(a, b).max(one_sided(b, a)))
    }

    /// Submodel on the given points, in the given order.
    pub fn restrict(&self, pts: &[usize]) -> Result<Self> {
        let labels = pts.iter().map(|&p| self.labels[p].clone()).collect();
        Self::from_fn(labels, self.resolution, |i, j| self.d(pts[i], pts[j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("p{i}")).collect()
    }

    #[test]
    fn equilateral_simplex_is_a_metric() {
        let m = MetricSpace::from_fn(labels(3), 1.0, |i, j| if i == j { 0.0 } else { 1.0 }).unwrap();
        assert!(m.verify_metric().is_empty());
    }

    #[test]
    fn asymmetric_matrix_reports_symmetry() {
        let m = MetricSpace::new(labels(2), vec![vec![0.0, 1.0], vec![2.0, 0.0]], 1.0).unwrap();
        let v = m.verify_metric();
        assert!(v.iter().any(|x| matches!(x, MetricViolation::Symmetry { .. })));
    }

    #[test]
    fn long_side_reports_triangle() {
        let m = MetricSpace::new(
            labels(3),
            vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]],
            1.0,
        )
        .unwrap();
        assert!(m
            .verify_metric()
            .iter()
            .any(|x| matches!(x, MetricViolation::Triangle { a: 0, b: 1, c: 2, .. })));
    }

    #[test]
    fn hausdorff_on_two_point_line() {
        let m = line(2).unwrap();
        assert_eq!(m.hausdorff(&[0], &[0, 1]).unwrap(), 1.0);
        assert_eq!(m.hausdorff(&[0, 1], &[0, 1]).unwrap(), 0.0);
        assert!(m.hausdorff(&[], &[0]).is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(MetricSpace::new(labels(2), vec![vec![0.0]], 1.0).is_err());
        assert!(MetricSpace::new(vec![], vec![], 1.0).is_err());
        assert!(MetricSpace::new(labels(1), vec![vec![0.0]], 0.0).is_err());
    }
}
