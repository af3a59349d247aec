//! Gromov-Hausdorff distance between finite models and the glued realizations
//! that achieve it.
//!
//! The exact value is `1/2 min_R dis(R)` over correspondences `R`. For small
//! combined sizes every correspondence is searched (branch and bound over the
//! subset assigned to each left point); beyond the cap a matching heuristic
//! gives an upper bound and half the diameter difference a lower bound.

use serde::Serialize;

use super::MetricSpace;
use crate::error::{Error, Result};
use crate::{approx_eq, lt};

#[derive(Clone, Copy, Debug)]
pub struct GhBudget {
    /// Largest combined point count searched exhaustively.
    pub max_points: usize,
}

impl Default for GhBudget {
    fn default() -> Self {
        Self { max_points: 8 }
    }
}

/// A common space holding isometric copies of two models.
#[derive(Clone, Debug)]
pub struct Realization {
    pub glued: MetricSpace,
    pub embed_left: Vec<usize>,
    pub embed_right: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct GhResult {
    pub lower: f64,
    pub upper: f64,
    /// `lower == upper` was certified by exhaustive search.
    pub exact: bool,
    pub correspondence: Vec<(usize, usize)>,
    pub realization: Realization,
}

impl GhResult {
    /// The distance when exact, otherwise the upper bound.
    pub fn value(&self) -> f64 {
        self.upper
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GluedFamily {
    #[serde(skip)]
    pub space: MetricSpace,
    /// `embeddings[k][p]` is the glued index of point `p` of model `k`.
    pub embeddings: Vec<Vec<usize>>,
    /// False when any gluing step fell back to bounds.
    pub optimal: bool,
}

fn distortion(m1: &MetricSpace, m2: &MetricSpace, rel: &[(usize, usize)]) -> f64 {
    let mut dis: f64 = 0.0;
    for &(x, y) in rel {
        for &(x2, y2) in rel {
            dis = dis.max((m1.d(x, x2) - m2.d(y, y2)).abs());
        }
    }
    dis
}

struct Search<'a> {
    m1: &'a MetricSpace,
    m2: &'a MetricSpace,
    full: u64,
    best: f64,
    best_rel: Vec<u64>,
    rel: Vec<u64>,
}

impl Search<'_> {
    fn go(&mut self, i: usize, cur: f64, covered: u64) {
        let n1 = self.m1.len();
        if i == n1 {
            if covered == self.full && lt(cur, self.best) {
                self.best = cur;
                self.best_rel = self.rel.clone();
            }
            return;
        }
        let n2 = self.m2.len();
        // Points still uncovered must fit into the remaining left points.
        let remaining_left = (n1 - i) as u32;
        for mask in 1..=self.full {
            let missing = (self.full & !(covered | mask)).count_ones();
            if i + 1 == n1 && missing > 0 {
                continue;
            }
            if missing > (remaining_left - 1) * n2 as u32 {
                continue;
            }
            let mut d = cur;
            'outer: for y in (0..n2).filter(|y| mask >> y & 1 == 1) {
                for j in 0..i {
                    let prev = self.rel[j];
                    for y2 in (0..n2).filter(|y2| prev >> y2 & 1 == 1) {
                        d = d.max((self.m1.d(i, j) - self.m2.d(y, y2)).abs());
                    }
                }
                for y2 in (0..n2).filter(|y2| mask >> y2 & 1 == 1) {
                    d = d.max(self.m2.d(y, y2));
                }
                if !lt(d, self.best) {
                    break 'outer;
                }
            }
            if !lt(d, self.best) {
                continue;
            }
            self.rel[i] = mask;
            self.go(i + 1, d, covered | mask);
        }
        self.rel[i] = 0;
    }
}

fn exact_correspondence(m1: &MetricSpace, m2: &MetricSpace) -> (f64, Vec<(usize, usize)>) {
    let n2 = m2.len();
    let mut s = Search {
        m1,
        m2,
        full: (1u64 << n2) - 1,
        best: f64::INFINITY,
        best_rel: vec![],
        rel: vec![0; m1.len()],
    };
    s.go(0, 0.0, 0);
    let rel = s
        .best_rel
        .iter()
        .enumerate()
        .flat_map(|(x, &mask)| (0..n2).filter(move |y| mask >> y & 1 == 1).map(move |y| (x, y)))
        .collect();
    (s.best, rel)
}

fn eccentricities(m: &MetricSpace) -> Vec<f64> {
    (0..m.len()).map(|x| (0..m.len()).map(|y| m.d(x, y)).fold(0.0, f64::max)).collect()
}

fn greedy_correspondence(m1: &MetricSpace, m2: &MetricSpace) -> Vec<(usize, usize)> {
    let (e1, e2) = (eccentricities(m1), eccentricities(m2));
    let nearest = |e: f64, other: &[f64]| {
        let mut best = 0;
        for (k, &v) in other.iter().enumerate() {
            if lt((v - e).abs(), (other[best] - e).abs()) {
                best = k;
            }
        }
        best
    };
    let mut rel: Vec<(usize, usize)> = (0..m1.len()).map(|x| (x, nearest(e1[x], &e2))).collect();
    rel.extend((0..m2.len()).map(|y| (nearest(e2[y], &e1), y)));
    rel.sort_unstable();
    rel.dedup();
    rel
}

fn unique_label(taken: &std::collections::HashSet<String>, base: &str) -> String {
    let mut l = base.to_string();
    while taken.contains(&l) {
        l.push('\'');
    }
    l
}

/// Glues `m1` and `m2` along `rel` with cross distances
/// `min_{(x',y') in R} d1(x,x') + r + d2(y',y)`, `r = dis(R)/2`. Points at
/// cross distance 0 are identified.
fn glue_along(m1: &MetricSpace, m2: &MetricSpace, rel: &[(usize, usize)], r: f64) -> Result<Realization> {
    let (n1, n2) = (m1.len(), m2.len());
    let cross = |x: usize, y: usize| {
        rel.iter()
            .map(|&(a, b)| m1.d(x, a) + r + m2.d(b, y))
            .fold(f64::INFINITY, f64::min)
    };
    let mut embed_right = vec![usize::MAX; n2];
    let mut extra = Vec::new();
    for y in 0..n2 {
        if let Some(x) = (0..n1).find(|&x| approx_eq(cross(x, y), 0.0)) {
            embed_right[y] = x;
        } else {
            embed_right[y] = n1 + extra.len();
            extra.push(y);
        }
    }
    let mut labels: Vec<String> = m1.labels().to_vec();
    let mut taken: std::collections::HashSet<String> = labels.iter().cloned().collect();
    for &y in &extra {
        let l = unique_label(&taken, m2.label(y));
        taken.insert(l.clone());
        labels.push(l);
    }
    let n = labels.len();
    // which original side each glued point comes from
    let origin = |p: usize| if p < n1 { (true, p) } else { (false, extra[p - n1]) };
    let mut matrix = vec![vec![0.0; n]; n];
    for (p, row) in matrix.iter_mut().enumerate() {
        for (q, cell) in row.iter_mut().enumerate() {
            *cell = match (origin(p), origin(q)) {
                ((true, a), (true, b)) => m1.d(a, b),
                ((false, a), (false, b)) => m2.d(a, b),
                ((true, a), (false, b)) => cross(a, b),
                ((false, a), (true, b)) => cross(b, a),
            };
        }
    }
    let glued = MetricSpace::new(labels, matrix, m1.resolution().min(m2.resolution()))?;
    Ok(Realization { glued, embed_left: (0..n1).collect(), embed_right })
}

/// Gromov-Hausdorff distance with a realization achieving the reported upper
/// bound. Exact (and flagged so) when `m1.len() + m2.len() <= budget.max_points`.
pub fn gh_distance(m1: &MetricSpace, m2: &MetricSpace, budget: GhBudget) -> Result<GhResult> {
    for m in [m1, m2] {
        if let Some(v) = m.verify_metric().first() {
            return Err(Error::InvalidModel(format!("not a metric: {v}")));
        }
    }
    let lower_trivial = (m1.diameter() - m2.diameter()).abs() / 2.0;
    let (exact, dis, rel) = if m1.len() + m2.len() <= budget.max_points && m2.len() < 64 {
        let (dis, rel) = exact_correspondence(m1, m2);
        (true, dis, rel)
    } else {
        let rel = greedy_correspondence(m1, m2);
        (false, distortion(m1, m2, &rel), rel)
    };
    let upper = dis / 2.0;
    let realization = glue_along(m1, m2, &rel, upper)?;
    Ok(GhResult {
        lower: if exact { upper } else { lower_trivial.min(upper) },
        upper,
        exact,
        correspondence: rel,
        realization,
    })
}

/// Left-to-right gluing of an ordered family: `Z_1 = X_1`, `Z_{k+1}` realizes
/// `(Z_k, X_{k+1})`. Labels are prefixed with the model index.
pub fn glue_realization(models: &[MetricSpace], budget: GhBudget) -> Result<GluedFamily> {
    let first = models
        .first()
        .ok_or_else(|| Error::Domain("glue_realization needs at least one model".into()))?;
    let tag = |k: usize, m: &MetricSpace| {
        let labels = m.labels().iter().map(|l| format!("m{k}:{l}")).collect();
        MetricSpace::new(labels, m.matrix(), m.resolution())
    };
    let mut space = tag(0, first)?;
    if let Some(v) = space.verify_metric().first() {
        return Err(Error::InvalidModel(format!("model 0 is not a metric: {v}")));
    }
    let mut embeddings = vec![(0..first.len()).collect::<Vec<_>>()];
    let mut optimal = true;
    for (k, m) in models.iter().enumerate().skip(1) {
        let res = gh_distance(&space, &tag(k, m)?, budget)?;
        optimal &= res.exact;
        for e in embeddings.iter_mut() {
            for p in e.iter_mut() {
                *p = res.realization.embed_left[*p];
            }
        }
        embeddings.push(res.realization.embed_right.clone());
        space = res.realization.glued;
    }
    Ok(GluedFamily { space, embeddings, optimal })
}
