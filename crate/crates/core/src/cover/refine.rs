//! The refinement minimum `D(α)` over a finite pool of candidate sets.

use serde::Serialize;

use super::{alpha_join, set_of, Cover};
use crate::complexity::Mode;
use crate::error::{Error, Result};
use crate::ifs::{FunctionSystem, PointSet};
use crate::metric::MetricSpace;
use crate::orbit::SigmaGenerator;
use crate::{ge, le};

/// Candidate refinement elements.
#[derive(Clone, Debug)]
pub struct RefinementPool {
    pub candidates: Vec<PointSet>,
    pub floor: f64,
}

impl RefinementPool {
    /// Explicit pool; every candidate must reach the diameter floor.
    pub fn new(space: &MetricSpace, candidates: Vec<PointSet>, floor: f64) -> Result<Self> {
        if let Some(c) = candidates.iter().find(|c| !ge(space.subset_diameter(c.ones().collect::<Vec<_>>()), floor)) {
            return Err(Error::Domain(format!(
                "pool candidate {:?} has diameter below the floor {floor}",
                c.ones().collect::<Vec<_>>()
            )));
        }
        Ok(Self { candidates, floor })
    }

    /// Closed balls around carrier points (radius and diameter at least the
    /// floor), the elements of `alpha` and their pairwise intersections of
    /// diameter at least the floor. Elements of `alpha` are kept whatever their
    /// diameter.
    pub fn standard(space: &MetricSpace, alpha: &Cover, floor: f64) -> Self {
        let n = space.len();
        let carrier = alpha.carrier();
        let big = |s: &PointSet| ge(space.subset_diameter(s.ones().collect::<Vec<_>>()), floor);
        let mut c: Vec<PointSet> = Vec::new();
        let radii: Vec<f64> = space.distance_values().into_iter().filter(|&r| ge(r, floor)).collect();
        for x in carrier.ones() {
            for &r in &radii {
                let b = set_of(n, carrier.ones().filter(|&y| le(space.d(x, y), r)));
                if big(&b) {
                    c.push(b);
                }
            }
        }
        let els = alpha.elements();
        c.extend(els.iter().cloned());
        for i in 0..els.len() {
            for j in i + 1..els.len() {
                let mut e = els[i].clone();
                e.intersect_with(&els[j]);
                if !e.is_clear() && big(&e) {
                    c.push(e);
                }
            }
        }
        c.sort_by_key(|s| s.ones().collect::<Vec<_>>());
        c.dedup();
        Self { candidates: c, floor }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DResult {
    /// Minimum order found.
    pub order: usize,
    /// Certified minimum over pool covers (otherwise a greedy upper bound).
    pub exact: bool,
    /// Pool indices of the refinement achieving `order`.
    pub witness: Vec<usize>,
}

struct Search<'a> {
    cands: &'a [(usize, PointSet)],
    carrier: Vec<usize>,
    mult: Vec<usize>,
    used: Vec<bool>,
    picked: Vec<usize>,
    visited: usize,
    budget: usize,
}

impl Search<'_> {
    /// Some cover with multiplicity at most `cap` everywhere? `None` when the
    /// budget ran out.
    fn feasible(&mut self, cap: usize) -> Option<bool> {
        self.visited += 1;
        if self.visited > self.budget {
            return None;
        }
        let Some(&p) = self.carrier.iter().find(|&&x| self.mult[x] == 0) else {
            return Some(true);
        };
        for i in 0..self.cands.len() {
            let set = &self.cands[i].1;
            if self.used[i] || !set.contains(p) || set.ones().any(|x| self.mult[x] >= cap) {
                continue;
            }
            self.used[i] = true;
            self.picked.push(i);
            set.ones().for_each(|x| self.mult[x] += 1);
            let r = self.feasible(cap);
            if r != Some(false) {
                return r;
            }
            set.ones().for_each(|x| self.mult[x] -= 1);
            self.picked.pop();
            self.used[i] = false;
        }
        Some(false)
    }
}

fn greedy(cands: &[(usize, PointSet)], carrier: &PointSet, n: usize) -> (usize, Vec<usize>) {
    let mut mult = vec![0usize; n];
    let mut uncovered = carrier.clone();
    let mut used = vec![false; cands.len()];
    let mut picked = Vec::new();
    while !uncovered.is_clear() {
        let best = (0..cands.len())
            .filter(|&i| !used[i])
            .filter_map(|i| {
                let s = &cands[i].1;
                let gain = s.intersection(&uncovered).count();
                let peak = s.ones().map(|x| mult[x] + 1).max().unwrap_or(0);
                (gain > 0).then_some((peak, usize::MAX - gain, i))
            })
            .min()
            .expect("pool covers the carrier");
        let i = best.2;
        used[i] = true;
        picked.push(i);
        cands[i].1.ones().for_each(|x| mult[x] += 1);
        uncovered.difference_with(&cands[i].1);
    }
    let top = carrier.ones().map(|x| mult[x]).max().unwrap_or(1);
    (top, picked)
}

/// `D(α)` restricted to covers assembled from `pool` candidates that refine
/// `α`.
pub fn d_of(alpha: &Cover, pool: &RefinementPool, mode: Mode, budget: usize) -> Result<DResult> {
    let carrier = alpha.carrier();
    let n = carrier.len();
    let cands: Vec<(usize, PointSet)> = pool
        .candidates
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let mut c = c.clone();
            c.grow(n);
            c.intersect_with(carrier);
            let fits = !c.is_clear() && alpha.elements().iter().any(|a| c.is_subset(a));
            fits.then_some((i, c))
        })
        .collect();
    let mut reach = PointSet::with_capacity(n);
    cands.iter().for_each(|(_, c)| reach.union_with(c));
    if !carrier.is_subset(&reach) {
        return Err(Error::Infeasible("no pool refinement of the cover reaches every carrier point".into()));
    }
    if carrier.is_clear() {
        return Ok(DResult { order: 0, exact: true, witness: vec![] });
    }
    let (top, picked) = greedy(&cands, carrier, n);
    let as_pool = |v: Vec<usize>| {
        let mut w: Vec<usize> = v.into_iter().map(|i| cands[i].0).collect();
        w.sort_unstable();
        w
    };
    if mode == Mode::Greedy {
        return Ok(DResult { order: top - 1, exact: top == 1, witness: as_pool(picked) });
    }
    let mut s = Search {
        cands: &cands,
        carrier: carrier.ones().collect(),
        mult: vec![0; n],
        used: vec![false; cands.len()],
        picked: vec![],
        visited: 0,
        budget,
    };
    for cap in 1..top {
        s.mult.iter_mut().for_each(|m| *m = 0);
        s.used.iter_mut().for_each(|u| *u = false);
        s.picked.clear();
        match s.feasible(cap) {
            Some(true) => return Ok(DResult { order: cap - 1, exact: true, witness: as_pool(s.picked) }),
            Some(false) => {}
            None => return Ok(DResult { order: top - 1, exact: false, witness: as_pool(picked) }),
        }
    }
    Ok(DResult { order: top - 1, exact: true, witness: as_pool(picked) })
}

#[derive(Clone, Debug, Serialize)]
pub struct MdimRow {
    pub k: usize,
    pub n: usize,
    pub d: usize,
    pub per_n: f64,
    pub exact: bool,
}

/// Pool-restricted mean dimension along one sequence.
#[derive(Clone, Debug, Serialize)]
pub struct MdimReport {
    pub rows: Vec<MdimRow>,
    /// Per ladder cover, the clamped slope of `D` over the two largest `n`.
    pub slopes: Vec<f64>,
    pub estimate: f64,
    pub exact: bool,
    pub floor: f64,
}

/// Tabulates `D(α_0^{n-1}(σ, k)) / n` for every cover of the ladder and
/// horizon of the grid; the estimate is the largest large-`n` slope.
pub fn mdim_estimate(
    fs: &FunctionSystem,
    sigma: &SigmaGenerator,
    ladder: &[Cover],
    n_grid: &[usize],
    floor: f64,
    mode: Mode,
    budget: usize,
) -> Result<MdimReport> {
    let mut ns = n_grid.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 2 || ns[0] == 0 {
        return Err(Error::Config("mean dimension needs at least two positive horizons".into()));
    }
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for (k, alpha) in ladder.iter().enumerate() {
        let mut ds = Vec::new();
        for &n in &ns {
            let j = alpha_join(fs, sigma, alpha, 0, n - 1)?;
            let pool = RefinementPool::standard(fs.space(), &j, floor);
            let r = d_of(&j, &pool, mode, budget)?;
            rows.push(MdimRow { k, n, d: r.order, per_n: r.order as f64 / n as f64, exact: r.exact });
            ds.push(r.order as f64);
        }
        let m = ns.len();
        let slope = (ds[m - 1] - ds[m - 2]) / (ns[m - 1] - ns[m - 2]) as f64;
        slopes.push(slope.max(0.0));
    }
    let estimate = slopes.iter().copied().fold(0.0, f64::max);
    let exact = rows.iter().all(|r| r.exact);
    Ok(MdimReport { rows, slopes, estimate, exact, floor })
}
