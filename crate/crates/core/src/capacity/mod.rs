//! Orbit capacity of point sets, the small-boundary check and the
//! partition-of-unity construction with its compatible map.
//!
//! Capacities are exact rationals. A prefix counts only if its endpoint lies
//! in the infinite core, so every prefix extends to a genuine sequence.

mod lsbp;
mod sbp;

pub use lsbp::{lsbp_partition, t2_map, LsbpCertificate, PartitionOfUnity, PremiseViolation, T2Report};
pub use sbp::{sbp_check, shell, SbpEntry, SbpReport};

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{AdmissibilityGraph, FunctionSystem, PointSet};

pub type Rational = Ratio<i64>;

/// `best[k-1][x]`: most visits to `A` among extendable `k`-point prefixes
/// from `x`, `None` off the core.
#[derive(Clone, Debug)]
pub struct CapacityTable {
    pub target: PointSet,
    best: Vec<Vec<Option<usize>>>,
}

impl CapacityTable {
    pub fn build(graph: &AdmissibilityGraph, target: &PointSet, n_max: usize) -> Self {
        let np = graph.succ.len();
        let hit = |x: usize| usize::from(target.contains(x));
        let mut best: Vec<Vec<Option<usize>>> = Vec::with_capacity(n_max);
        if n_max > 0 {
            best.push((0..np).map(|x| graph.in_core(x).then(|| hit(x))).collect());
        }
        for k in 1..n_max {
            let prev = &best[k - 1];
            let row = (0..np)
                .map(|x| {
                    if !graph.in_core(x) {
                        return None;
                    }
                    graph.core_successors(x).iter().filter_map(|&y| prev[y]).max().map(|m| m + hit(x))
                })
                .collect();
            best.push(row);
        }
        Self { target: target.clone(), best }
    }

    pub fn horizon(&self) -> usize {
        self.best.len()
    }

    /// Visit count behind `cap(n, x, A)`.
    pub fn visits(&self, n: usize, x: usize) -> Option<usize> {
        self.best.get(n.checked_sub(1)?)?.get(x).copied().flatten()
    }

    /// `cap(n, x, A)`, `None` when `Σ_x = ∅`.
    pub fn value(&self, n: usize, x: usize) -> Option<Rational> {
        self.visits(n, x).map(|v| Rational::new(v as i64, n as i64))
    }

    /// `max_x cap(n, x, A)` over points with `Σ_x ≠ ∅`.
    pub fn sup(&self, n: usize) -> Option<Rational> {
        let row = self.best.get(n.checked_sub(1)?)?;
        row.iter().flatten().max().map(|&v| Rational::new(v as i64, n as i64))
    }
}

/// `cap(n, x, A)`; `None` when `Σ_x = ∅`.
pub fn capacity(fs: &FunctionSystem, a: &PointSet, n: usize, x: usize) -> Result<Option<Rational>> {
    if n == 0 {
        return Err(Error::Domain("capacity horizon must be at least 1".into()));
    }
    if x >= fs.n_points() {
        return Err(Error::Domain(format!("point #{x} out of range")));
    }
    Ok(CapacityTable::build(&fs.graph(), a, n).value(n, x))
}

#[derive(Clone, Debug, Serialize)]
pub struct OcapReport {
    /// Maximum cycle mean of `1_A` on the core; `None` for an empty core.
    #[serde(serialize_with = "ser_ratio_opt")]
    pub value: Option<Rational>,
    /// `(n, max_x cap(n, x, A))` for `n = 1..=curve_len`.
    #[serde(serialize_with = "ser_curve")]
    pub curve: Vec<(usize, Rational)>,
}

/// Rationals are written as `"p/q"` strings.
pub fn ratio_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn ser_ratio_opt<S: serde::Serializer>(v: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => s.serialize_str(&ratio_string(r)),
        None => s.serialize_none(),
    }
}

fn ser_curve<S: serde::Serializer>(v: &[(usize, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (n, r) in v {
        seq.serialize_element(&(n, ratio_string(r)))?;
    }
    seq.end()
}

/// Karp's maximum cycle mean with vertex weights `1_A`, restricted to the
/// core. Walks start anywhere (`D_0 = 0`).
pub fn max_cycle_mean(graph: &AdmissibilityGraph, a: &PointSet) -> Option<Rational> {
    let nodes: Vec<usize> = graph.infinite_core.ones().collect();
    let m = nodes.len();
    if m == 0 {
        return None;
    }
    let mut pos = vec![usize::MAX; graph.succ.len()];
    for (i, &x) in nodes.iter().enumerate() {
        pos[x] = i;
    }
    let edges: Vec<(usize, usize, i64)> = nodes
        .iter()
        .flat_map(|&x| {
            let w = i64::from(a.contains(x));
            graph.core_successors(x).into_iter().map(move |y| (x, y, w))
        })
        .map(|(x, y, w)| (pos[x], pos[y], w))
        .collect();
    // d[k][v]: heaviest walk with exactly k edges ending at v
    let mut d = vec![vec![Some(0i64); m]];
    for k in 1..=m {
        let mut row = vec![None; m];
        for &(u, v, w) in &edges {
            if let Some(du) = d[k - 1][u] {
                let c = du + w;
                if row[v].is_none_or(|r| c > r) {
                    row[v] = Some(c);
                }
            }
        }
        d.push(row);
    }
    (0..m)
        .filter_map(|v| {
            let dn = d[m][v]?;
            (0..m)
                .filter_map(|k| d[k][v].map(|dk| Rational::new(dn - dk, (m - k) as i64)))
                .min()
        })
        .max()
}

/// `ocap(A)` and the finite-horizon curve behind it.
pub fn ocap(fs: &FunctionSystem, a: &PointSet, curve_len: usize) -> OcapReport {
    let graph = fs.graph();
    let value = max_cycle_mean(&graph, a);
    let table = CapacityTable::build(&graph, a, curve_len);
    let curve = (1..=curve_len).filter_map(|n| table.sup(n).map(|r| (n, r))).collect();
    OcapReport { value, curve }
}
