//! Rigidity, returns, almost periodicity, continuity moduli, recurrence and
//! transitive points at a finite horizon.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifs::{FunctionSystem, PointSet};
use crate::orbit::{evaluate, evaluate_window, orbit_trace, sigma_sigma_exact, SigmaGenerator};
use crate::{le, lt};

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    /// `(m, sup_{x in Σ_σ} d(v^{σ(m)} x, x))`; `None` for an empty `Σ_σ`.
    pub rows: Vec<(usize, Option<f64>)>,
    pub tolerance: f64,
    pub rigid_at: Option<usize>,
}

/// Exact `sup_{x ∈ Σ_σ} d(v^{σ(m)} x, x)` for each `m`.
pub fn rigidity_deficit(fs: &FunctionSystem, sigma: &SigmaGenerator, ms: &[usize], tolerance: f64) -> Result<RigidityReport> {
    let sig = sigma_sigma_exact(fs, sigma)?;
    let space = fs.space();
    let mut rows = Vec::new();
    for &m in ms {
        let mut sup: Option<f64> = None;
        for x in sig.ones() {
            let y = evaluate(fs, x, sigma, m)?.expect("Σ_σ points have full orbits");
            sup = Some(sup.unwrap_or(0.0).max(space.d(x, y)));
        }
        rows.push((m, sup));
    }
    let rigid_at = rows.iter().find(|(_, d)| d.is_some_and(|d| lt(d, tolerance))).map(|r| r.0);
    Ok(RigidityReport { rows, tolerance, rigid_at })
}

/// `R(x, σ, ε) ∩ [0, horizon]`.
pub fn return_set(fs: &FunctionSystem, x: usize, sigma: &SigmaGenerator, eps: f64, horizon: usize) -> Result<Vec<usize>> {
    let t = orbit_trace(fs, x, sigma, horizon + 1)?
        .ok_or_else(|| Error::Domain(format!("orbit of {} is undefined before step {horizon}", fs.space().label(x))))?;
    Ok((0..=horizon).filter(|&n| lt(fs.space().d(t[n], x), eps)).collect())
}

/// Least `L` such that every window `[n, n+L-1] ⊆ [0, horizon]` meets the
/// (sorted) set; `None` for a set with no element in range.
pub fn syndetic_bound(set: &[usize], horizon: usize) -> Option<usize> {
    let inside: Vec<usize> = set.iter().copied().filter(|&n| n <= horizon).collect();
    let first = *inside.first()?;
    let last = *inside.last().unwrap();
    let mut l = (first + 1).max(horizon - last + 1);
    for w in inside.windows(2) {
        l = l.max(w[1] - w[0]);
    }
    Some(l)
}

#[derive(Clone, Debug, Serialize)]
pub struct ApReport {
    pub eps: f64,
    pub horizon: usize,
    /// `R(ε) ∩ [0, horizon]` over all points and all admissible sequences.
    pub returns: Vec<usize>,
    pub syndetic: Option<usize>,
}

/// `R(ε)` through the horizon, quantifying over every extendable prefix
/// from every point with `Σ_x ≠ ∅`.
pub fn uniform_ap_check(fs: &FunctionSystem, eps: f64, horizon: usize) -> ApReport {
    let g = fs.graph();
    let space = fs.space();
    let core: Vec<usize> = g.infinite_core.ones().collect();
    let mut reach: Vec<PointSet> = core
        .iter()
        .map(|&x| {
            let mut s = FixedBitSet::with_capacity(space.len());
            s.insert(x);
            s
        })
        .collect();
    let mut returns = Vec::new();
    for n in 0..=horizon {
        if n > 0 {
            reach = reach.iter().map(|s| g.core_post(s)).collect();
        }
        if core.iter().zip(&reach).all(|(&x, r)| r.ones().all(|y| lt(space.d(x, y), eps))) {
            returns.push(n);
        }
    }
    let syndetic = syndetic_bound(&returns, horizon);
    ApReport { eps, horizon, returns, syndetic }
}

fn modulus_over(candidates: Vec<f64>, holds: impl Fn(f64) -> bool) -> f64 {
    candidates.into_iter().rev().find(|&d| holds(d)).unwrap_or(0.0)
}

fn candidates(fs: &FunctionSystem, eps: f64) -> Vec<f64> {
    let mut c: Vec<f64> = fs.space().distance_values().into_iter().filter(|&d| d > 0.0 && le(d, eps)).collect();
    c.push(eps);
    c.sort_by(f64::total_cmp);
    c.dedup_by(|a, b| crate::approx_eq(*a, *b));
    c
}

/// Largest `δ` among the distance values up to `ε` (and `ε` itself) with
/// `d(x,y) < δ ⇒ d(v^{σ(n)}x, v^{σ(n)}y) < ε` for `x, y ∈ Σ_σ`, `n <= horizon`.
pub fn equicontinuity_modulus(fs: &FunctionSystem, sigma: &SigmaGenerator, eps: f64, horizon: usize) -> Result<f64> {
    let space = fs.space();
    let traces: Vec<Vec<usize>> = sigma_sigma_exact(fs, sigma)?
        .ones()
        .map(|x| orbit_trace(fs, x, sigma, horizon + 1).map(|t| t.expect("Σ_σ points have full orbits")))
        .collect::<Result<_>>()?;
    // worst later distance for each pair, then the threshold test
    let mut pairs = Vec::new();
    for a in 0..traces.len() {
        for b in a + 1..traces.len() {
            let worst = (0..=horizon).map(|n| space.d(traces[a][n], traces[b][n])).fold(0.0, f64::max);
            pairs.push((space.d(traces[a][0], traces[b][0]), worst));
        }
    }
    Ok(modulus_over(candidates(fs, eps), |d| pairs.iter().all(|&(d0, w)| !lt(d0, d) || lt(w, eps))))
}

/// Largest `δ` (same candidates) such that for every tail start `n`,
/// `1 <= j <= k` and `x, y ∈ Σ_{σ(+∞,n)}`: `d(x,y) < δ ⇒
/// d(v^{σ(n+j,n)}x, v^{σ(n+j,n)}y) < ε`. Exact: tails repeat after the
/// preperiod plus one period.
pub fn uniform_continuity_modulus(fs: &FunctionSystem, sigma: &SigmaGenerator, k: usize, eps: f64) -> Result<f64> {
    let space = fs.space();
    let mut pairs = Vec::new();
    for n in 0..sigma.distinct_tails() {
        let tail = sigma.shifted(n);
        let pts: Vec<usize> = sigma_sigma_exact(fs, &tail)?.ones().collect();
        for a in 0..pts.len() {
            for b in a + 1..pts.len() {
                let (x, y) = (pts[a], pts[b]);
                let mut worst: f64 = 0.0;
                for j in 1..=k {
                    let fx = evaluate_window(fs, x, sigma, n, n + j)?.expect("tail points have full orbits");
                    let fy = evaluate_window(fs, y, sigma, n, n + j)?.expect("tail points have full orbits");
                    worst = worst.max(space.d(fx, fy));
                }
                pairs.push((space.d(x, y), worst));
            }
        }
    }
    Ok(modulus_over(candidates(fs, eps), |d| pairs.iter().all(|&(d0, w)| !lt(d0, d) || lt(w, eps))))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Recurrence {
    Recurrent,
    /// An extendable branch avoiding `B(x, ε)` at steps `1..=horizon`.
    NonRecurrent { symbols: Vec<usize> },
    /// `Σ_x = ∅`.
    Vacuous,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceEntry {
    pub point: String,
    #[serde(flatten)]
    pub status: Recurrence,
}

/// Recurrence at scale `ε`: every extendable branch from `x` returns within
/// `ε` at some step `1..=horizon`.
pub fn recurrence_scan(fs: &FunctionSystem, eps: f64, horizon: usize) -> Vec<RecurrenceEntry> {
    let g = fs.graph();
    let space = fs.space();
    let np = space.len();
    let mut out = Vec::new();
    for x in 0..np {
        let point = space.label(x).to_string();
        if !g.in_core(x) || horizon == 0 {
            let status = if g.in_core(x) { Recurrence::NonRecurrent { symbols: vec![] } } else { Recurrence::Vacuous };
            out.push(RecurrenceEntry { point, status });
            continue;
        }
        let mut far = g.infinite_core.clone();
        (0..np).filter(|&y| lt(space.d(x, y), eps)).for_each(|y| far.set(y, false));
        // bad[t]: can stay far at steps t..=horizon
        let mut bad = vec![far.clone(); horizon + 1];
        for t in (1..horizon).rev() {
            let mut b = g.core_pre(&bad[t + 1]);
            b.intersect_with(&far);
            bad[t] = b;
        }
        let first = g.succ[x].iter().find(|&&(_, y)| bad[1].contains(y) && g.in_core(y));
        let status = match first {
            None => Recurrence::Recurrent,
            Some(&(m, y)) => {
                let mut symbols = vec![m];
                let mut p = y;
                for t in 2..=horizon {
                    let &(m, q) = g.succ[p].iter().find(|&&(_, q)| bad[t].contains(q)).unwrap();
                    symbols.push(m);
                    p = q;
                }
                Recurrence::NonRecurrent { symbols }
            }
        };
        out.push(RecurrenceEntry { point, status });
    }
    out
}

/// Points of `Σ_σ` whose orbit at steps `1..=horizon` comes within `ε` of
/// every point of the space.
pub fn transitive_points(fs: &FunctionSystem, sigma: &SigmaGenerator, eps: f64, horizon: usize) -> Result<Vec<usize>> {
    let space = fs.space();
    let mut out = Vec::new();
    for p in sigma_sigma_exact(fs, sigma)?.ones() {
        let t = orbit_trace(fs, p, sigma, horizon + 1)?.expect("Σ_σ points have full orbits");
        if (0..space.len()).all(|y| t[1..].iter().any(|&o| lt(space.d(o, y), eps))) {
            out.push(p);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Tec1Report {
    /// `max_{n <= horizon} d(v^{σ(n)} p, v^{σ(n+m)} p)`.
    pub gamma: f64,
    /// Largest `d(v^{σ(m)} u, v^{σ(m)} x)` over `d(u, x) < ε`, `u, x ∈ Σ_σ`.
    pub slack: f64,
    /// Points of `Σ_σ` that the orbit visits within `ε` at a step where the
    /// tail of `σ` equals `σ`.
    pub checked: Vec<usize>,
    pub worst: f64,
    pub holds: bool,
}

/// Finite-scale transfer of orbit displacement bounds to `Σ_σ`:
/// `d(x, v^{σ(m)} x) <= γ + ε + slack` for every checked `x`.
pub fn tec1_check(fs: &FunctionSystem, sigma: &SigmaGenerator, p: usize, m: usize, eps: f64, horizon: usize) -> Result<Tec1Report> {
    let space = fs.space();
    let t = orbit_trace(fs, p, sigma, horizon + m + 1)?
        .ok_or_else(|| Error::Domain("the base point's orbit is undefined".into()))?;
    let gamma = (0..=horizon).map(|n| space.d(t[n], t[n + m])).fold(0.0, f64::max);
    let sig: Vec<usize> = sigma_sigma_exact(fs, sigma)?.ones().collect();
    let image = |x: usize| evaluate(fs, x, sigma, m).map(|y| y.expect("Σ_σ points have full orbits"));
    let mut slack: f64 = 0.0;
    for &u in &sig {
        for &x in &sig {
            if lt(space.d(u, x), eps) {
                slack = slack.max(space.d(image(u)?, image(x)?));
            }
        }
    }
    let aligned: Vec<usize> = (0..=horizon).filter(|&n| sigma.shifted(n) == *sigma).collect();
    let mut checked = Vec::new();
    let mut worst: f64 = 0.0;
    for &x in &sig {
        if aligned.iter().any(|&n| sig.contains(&t[n]) && lt(space.d(t[n], x), eps)) {
            checked.push(x);
            worst = worst.max(space.d(x, image(x)?));
        }
    }
    let holds = le(worst, gamma + eps + slack);
    Ok(Tec1Report { gamma, slack, checked, worst, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{identity, rotation, shift_window, stray_arrow};
    use crate::metric::{line, SeqMetric};

    #[test]
    fn syndetic_windows() {
        assert_eq!(syndetic_bound(&(0..=10).collect::<Vec<_>>(), 10), Some(1));
        assert_eq!(syndetic_bound(&[0, 2, 4, 6, 8, 10], 10), Some(2));
        assert_eq!(syndetic_bound(&[0, 4, 8], 10), Some(4));
        assert_eq!(syndetic_bound(&[], 10), None);
    }

    #[test]
    fn rotation_returns_and_rigidity() {
        let fs = rotation(4, 1).unwrap();
        let s = SigmaGenerator::constant(0);
        assert_eq!(return_set(&fs, 0, &s, 0.1, 10).unwrap(), vec![0, 4, 8]);
        let r = rigidity_deficit(&fs, &s, &[1, 2, 3, 4], 1e-6).unwrap();
        assert_eq!(r.rigid_at, Some(4));
        let ap = uniform_ap_check(&fs, 0.1, 12);
        assert_eq!(ap.returns, vec![0, 4, 8, 12]);
        assert_eq!(ap.syndetic, Some(4));
        assert_eq!(equicontinuity_modulus(&fs, &s, 0.3, 8).unwrap(), 0.3);
        assert_eq!(transitive_points(&fs, &s, 0.1, 4).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn identity_is_recurrent() {
        let fs = identity(line(3).unwrap()).unwrap();
        assert!(recurrence_scan(&fs, 0.5, 3).iter().all(|e| e.status == Recurrence::Recurrent));
        assert_eq!(uniform_ap_check(&fs, 0.5, 5).syndetic, Some(1));
        assert_eq!(uniform_continuity_modulus(&fs, &SigmaGenerator::constant(0), 3, 0.5).unwrap(), 0.5);
    }

    #[test]
    fn stray_point_is_not_recurrent() {
        let fs = stray_arrow().unwrap();
        let r = recurrence_scan(&fs, 1.0, 6);
        assert!(matches!(r[2].status, Recurrence::NonRecurrent { .. }));
        assert_eq!(r[0].status, Recurrence::Recurrent);
    }

    #[test]
    fn shift_is_not_rigid() {
        let fs = shift_window(2, 3, SeqMetric::FirstDifference).unwrap();
        let s = SigmaGenerator::constant(fs.map_index("shift").unwrap());
        let r = rigidity_deficit(&fs, &s, &[1, 2], 1e-6).unwrap();
        assert!(r.rigid_at.is_none());
        assert!(r.rows.iter().all(|(_, d)| d.unwrap() > 0.2));
    }
}
