//! Random instances and brute-force reference implementations.
#![allow(dead_code)]

use fixedbitset::FixedBitSet;
use ifs_mdim::capacity::Rational;
use ifs_mdim::cover::{Cover, RefinementPool};
use ifs_mdim::ifs::PointSet;
use ifs_mdim::{ge, lt, FunctionSystem, MetricSpace, PartialMap};
use rand::seq::SliceRandom;
use rand::Rng;

/// Shortest-path metric of a random graph with integer weights 1..=4.
pub fn random_metric(rng: &mut impl Rng, n: usize) -> MetricSpace {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in i + 1..n {
            let w = rng.gen_range(1..=4) as f64;
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    MetricSpace::new(labels, d, 1.0).unwrap()
}

pub fn random_map(rng: &mut impl Rng, id: &str, n: usize) -> PartialMap {
    let size = rng.gen_range(1..=n);
    let mut dom: Vec<usize> = (0..n).collect();
    dom.shuffle(rng);
    dom.truncate(size);
    let mut img: Vec<usize> = (0..n).collect();
    img.shuffle(rng);
    let pairs: Vec<(usize, usize)> = dom.into_iter().zip(img).collect();
    PartialMap::new(id, n, &pairs).unwrap()
}

pub fn random_system(rng: &mut impl Rng, max_points: usize, max_maps: usize) -> FunctionSystem {
    let n = rng.gen_range(2..=max_points);
    let k = rng.gen_range(1..=max_maps);
    let space = random_metric(rng, n);
    let maps = (0..k).map(|i| random_map(rng, &format!("v{i}"), n)).collect();
    FunctionSystem::new(space, maps).unwrap()
}

pub fn set(n: usize, pts: impl IntoIterator<Item = usize>) -> PointSet {
    let mut s = FixedBitSet::with_capacity(n);
    pts.into_iter().for_each(|x| s.insert(x));
    s
}

pub fn random_set(rng: &mut impl Rng, n: usize) -> PointSet {
    set(n, (0..n).filter(|_| rng.gen_bool(0.4)))
}

/// Every `len`-point path following any map from `x`.
pub fn paths(fs: &FunctionSystem, x: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![x]];
    for _ in 1..len {
        let mut next = vec![];
        for p in &out {
            let last = *p.last().unwrap();
            for m in fs.maps() {
                if let Some(y) = m.apply(last) {
                    let mut q = p.clone();
                    q.push(y);
                    next.push(q);
                }
            }
        }
        out = next;
    }
    out
}

/// Some path of `n_points + 1` points leaves `x`, hence a cycle is reachable.
pub fn has_infinite_path(fs: &FunctionSystem, x: usize) -> bool {
    !paths(fs, x, fs.n_points() + 1).is_empty()
}

pub fn brute_capacity(fs: &FunctionSystem, a: &PointSet, n: usize, x: usize) -> Option<Rational> {
    paths(fs, x, n)
        .into_iter()
        .filter(|p| has_infinite_path(fs, *p.last().unwrap()))
        .map(|p| p.iter().filter(|&&y| a.contains(y)).count())
        .max()
        .map(|v| Rational::new(v as i64, n as i64))
}

/// Maximum of `|C ∩ A| / |C|` over simple cycles `C` of the map graph.
pub fn brute_max_cycle_mean(fs: &FunctionSystem, a: &PointSet) -> Option<Rational> {
    let n = fs.n_points();
    let adj: Vec<Vec<usize>> = (0..n).map(|x| fs.maps().iter().filter_map(|m| m.apply(x)).collect()).collect();
    let mut best: Option<Rational> = None;
    fn dfs(
        start: usize,
        x: usize,
        adj: &[Vec<usize>],
        on: &mut Vec<bool>,
        path: &mut Vec<usize>,
        a: &PointSet,
        best: &mut Option<Rational>,
    ) {
        for &y in &adj[x] {
            if y == start {
                let hits = path.iter().filter(|&&p| a.contains(p)).count();
                let r = Rational::new(hits as i64, path.len() as i64);
                if best.is_none_or(|b| r > b) {
                    *best = Some(r);
                }
            } else if y > start && !on[y] {
                on[y] = true;
                path.push(y);
                dfs(start, y, adj, on, path, a, best);
                path.pop();
                on[y] = false;
            }
        }
    }
    for s in 0..n {
        let mut on = vec![false; n];
        on[s] = true;
        dfs(s, s, &adj, &mut on, &mut vec![s], a, &mut best);
    }
    best
}

/// Distinct `n`-point traces ending where an infinite path continues.
pub fn brute_traces(fs: &FunctionSystem, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..fs.n_points())
        .flat_map(|x| paths(fs, x, n))
        .filter(|p| has_infinite_path(fs, *p.last().unwrap()))
        .collect();
    out.sort();
    out.dedup();
    out
}

fn joint(space: &MetricSpace, a: &[usize], b: &[usize]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| space.d(x, y)).fold(0.0, f64::max)
}

/// Largest subset with pairwise joint distance `>= eps`.
pub fn brute_separated(space: &MetricSpace, traces: &[Vec<usize>], eps: f64) -> usize {
    let m = traces.len();
    assert!(m <= 20);
    (0u32..1 << m)
        .filter(|mask| {
            let idx: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            idx.iter().enumerate().all(|(k, &i)| idx[k + 1..].iter().all(|&j| ge(joint(space, &traces[i], &traces[j]), eps)))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Smallest subset with every trace at joint distance `< eps` from it.
pub fn brute_spanning(space: &MetricSpace, traces: &[Vec<usize>], eps: f64) -> usize {
    let m = traces.len();
    assert!(m <= 20);
    (0u32..1 << m)
        .filter(|mask| (0..m).all(|t| (0..m).any(|i| mask >> i & 1 == 1 && lt(joint(space, &traces[i], &traces[t]), eps))))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// `∅ ≠ ⋃ v(D(v) ∩ O) ⊂ ⋃ D(v) ∩ O`, written out directly.
pub fn witness_condition(fs: &FunctionSystem, o: &[usize]) -> bool {
    let doms: Vec<usize> = (0..fs.n_points()).filter(|&x| fs.maps().iter().any(|m| m.apply(x).is_some())).collect();
    let images: Vec<usize> = o.iter().flat_map(|&x| fs.maps().iter().filter_map(move |m| m.apply(x))).collect();
    !images.is_empty() && images.iter().all(|y| o.contains(y) && doms.contains(y))
}

/// Union of every subset satisfying the witness condition.
pub fn brute_witness(fs: &FunctionSystem) -> Option<Vec<usize>> {
    let n = fs.n_points();
    let mut union = vec![false; n];
    let mut any = false;
    for mask in 1u32..1 << n {
        let o: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if witness_condition(fs, &o) {
            any = true;
            o.iter().for_each(|&x| union[x] = true);
        }
    }
    any.then(|| (0..n).filter(|&x| union[x]).collect())
}

/// `2 d_GH = min_R dis(R)` over correspondences `R = graph(f) ∪ graph(g)^T`,
/// exhaustive with a running bound.
pub fn brute_gh(a: &MetricSpace, b: &MetricSpace) -> f64 {
    let (n, m) = (a.len(), b.len());
    let mut best = f64::INFINITY;
    fn rec(
        a: &MetricSpace,
        b: &MetricSpace,
        pairs: &mut Vec<(usize, usize)>,
        k: usize,
        cur: f64,
        best: &mut f64,
    ) {
        if cur >= *best {
            return;
        }
        let (n, m) = (a.len(), b.len());
        if k == n + m {
            *best = cur;
            return;
        }
        let options: Vec<(usize, usize)> =
            if k < n { (0..m).map(|y| (k, y)).collect() } else { (0..n).map(|x| (x, k - n)).collect() };
        for p in options {
            let worst = pairs.iter().map(|&(x, y)| (a.d(x, p.0) - b.d(y, p.1)).abs()).fold(cur, f64::max);
            pairs.push(p);
            rec(a, b, pairs, k + 1, worst, best);
            pairs.pop();
        }
    }
    rec(a, b, &mut Vec::with_capacity(n + m), 0, 0.0, &mut best);
    best / 2.0
}

/// `D(α)` over every subfamily of the pool that refines `α` and covers the
/// carrier.
pub fn brute_d(alpha: &Cover, pool: &RefinementPool) -> Option<usize> {
    let carrier = alpha.carrier();
    let cands: Vec<PointSet> = pool
        .candidates
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.grow(carrier.len());
            c.intersect_with(carrier);
            c
        })
        .filter(|c| !c.is_clear() && alpha.elements().iter().any(|a| c.is_subset(a)))
        .collect();
    let k = cands.len();
    let pts: Vec<usize> = carrier.ones().collect();
    if pts.is_empty() {
        return Some(0);
    }
    let mut best: Option<usize> = None;
    for mask in 1u32..1 << k {
        let mult: Vec<usize> = pts.iter().map(|&x| (0..k).filter(|&i| mask >> i & 1 == 1 && cands[i].contains(x)).count()).collect();
        if mult.iter().all(|&c| c > 0) {
            let ord = mult.iter().max().unwrap() - 1;
            best = Some(best.map_or(ord, |b: usize| b.min(ord)));
        }
    }
    best
}

/// Least distance value `r` with each set inside the closed `r`-neighbourhood
/// of the other.
pub fn brute_hausdorff(space: &MetricSpace, a: &[usize], b: &[usize]) -> f64 {
    let near = |x: usize, s: &[usize], r: f64| s.iter().any(|&y| ifs_mdim::le(space.d(x, y), r));
    let mut vals = space.distance_values();
    vals.push(0.0);
    vals.sort_by(f64::total_cmp);
    vals.into_iter()
        .find(|&r| a.iter().all(|&x| near(x, b, r)) && b.iter().all(|&y| near(y, a, r)))
        .unwrap()
}

/// A cover of at most 5 elements and a pool of at most 12 candidates on a
/// random metric of 3 to 8 points.
pub fn random_d_instance(rng: &mut impl Rng) -> (Cover, RefinementPool) {
    let n = rng.gen_range(3..=8);
    let space = random_metric(rng, n);
    let carrier = set(n, (0..n).filter(|_| rng.gen_bool(0.8)));
    let k = rng.gen_range(1..=4);
    let mut els: Vec<(String, PointSet)> = (0..k).map(|i| (format!("U{i}"), random_set(rng, n))).collect();
    if rng.gen_bool(0.5) {
        els.push(("rest".into(), carrier.clone()));
    }
    let alpha = Cover::new(carrier, els);
    let cands = (0..rng.gen_range(1..=12)).map(|_| random_set(rng, n)).collect();
    (alpha, RefinementPool::new(&space, cands, 0.0).unwrap())
}
