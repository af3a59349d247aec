//! Shell boundaries and the small-boundary search.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{max_cycle_mean, ratio_string, Rational};
use crate::ifs::{FunctionSystem, PointSet};
use crate::metric::MetricSpace;
use crate::{le, lt};

/// `∂_δ V = {y : d(y, V) <= δ and d(y, X - V) <= δ}`; empty when `V` or its
/// complement is empty.
pub fn shell(space: &MetricSpace, v: &PointSet, delta: f64) -> PointSet {
    let n = space.len();
    let inside: Vec<usize> = v.ones().filter(|&x| x < n).collect();
    let outside: Vec<usize> = (0..n).filter(|&x| !v.contains(x)).collect();
    let mut out = FixedBitSet::with_capacity(n);
    if inside.is_empty() || outside.is_empty() {
        return out;
    }
    for y in 0..n {
        if le(space.dist_to_set(y, inside.iter().copied()), delta) && le(space.dist_to_set(y, outside.iter().copied()), delta) {
            out.insert(y);
        }
    }
    out
}

fn open_ball(space: &MetricSpace, x: usize, r: f64) -> PointSet {
    let mut b = FixedBitSet::with_capacity(space.len());
    (0..space.len()).filter(|&y| lt(space.d(x, y), r)).for_each(|y| b.insert(y));
    b
}

#[derive(Clone, Debug, Serialize)]
pub struct SbpEntry {
    pub point: String,
    /// Radius of the neighbourhood `U = B(x, R)`.
    pub neighbourhood_radius: f64,
    /// Radius of a ball `V ⊆ U` around `x` whose shell has zero capacity.
    pub witness_radius: Option<f64>,
    /// Smallest shell capacity seen over the candidate balls.
    pub best_ocap: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SbpReport {
    pub delta: f64,
    pub entries: Vec<SbpEntry>,
    pub holds: bool,
}

/// For each sampled point and neighbourhood radius, looks for an open ball
/// `V` around the point inside the neighbourhood with `ocap(∂_δ V) = 0`.
/// Candidate radii are the distance values of the space up to `R`.
pub fn sbp_check(fs: &FunctionSystem, delta: f64, radii: &[f64], points: &[usize]) -> SbpReport {
    let space = fs.space();
    let graph = fs.graph();
    let values = space.distance_values();
    let mut entries = Vec::new();
    for &x in points {
        for &r in radii {
            let mut witness = None;
            let mut best: Option<Rational> = None;
            // open balls B(x, ρ) for ρ just above each distance value below r
            let cands: Vec<f64> = values.iter().copied().filter(|&d| lt(d, r)).collect();
            for (i, &d) in cands.iter().enumerate() {
                let rho = cands.get(i + 1).copied().unwrap_or(r);
                let v = open_ball(space, x, rho);
                debug_assert!(v.contains(x) && le(d, rho));
                let cap = max_cycle_mean(&graph, &shell(space, &v, delta)).unwrap_or(Rational::from_integer(0));
                if best.is_none_or(|b| cap < b) {
                    best = Some(cap);
                }
                if cap == Rational::from_integer(0) {
                    witness = Some(rho);
                    break;
                }
            }
            let best = best.unwrap_or(Rational::from_integer(0));
            entries.push(SbpEntry {
                point: space.label(x).to_string(),
                neighbourhood_radius: r,
                witness_radius: witness,
                best_ocap: ratio_string(&best),
                ok: witness.is_some(),
            });
        }
    }
    let holds = entries.iter().all(|e| e.ok);
    SbpReport { delta, entries, holds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{identity, rotation};
    use crate::metric::line;

    #[test]
    fn shell_of_an_arc() {
        let fs = rotation(12, 1).unwrap();
        let mut v = FixedBitSet::with_capacity(12);
        (1..=6).for_each(|i| v.insert(i));
        let s = shell(fs.space(), &v, 1.0 / 12.0);
        assert_eq!(s.ones().collect::<Vec<_>>(), vec![0, 1, 6, 7]);
        let cap = max_cycle_mean(&fs.graph(), &s).unwrap();
        assert_eq!(cap, Rational::new(4, 12));
        let mut all = FixedBitSet::with_capacity(12);
        all.insert_range(..);
        assert!(shell(fs.space(), &all, 1.0).is_clear());
    }

    #[test]
    fn rotation_fails_identity_fails() {
        let fs = rotation(12, 1).unwrap();
        let r = sbp_check(&fs, 1.0 / 12.0, &[0.3], &[0]);
        assert!(!r.holds);
        let fs = identity(line(4).unwrap()).unwrap();
        let r = sbp_check(&fs, 1.0, &[10.0], &[0]);
        // the whole line has an empty shell
        assert!(r.holds);
        let r = sbp_check(&fs, 1.0, &[2.5], &[0]);
        assert!(!r.holds);
    }
}
