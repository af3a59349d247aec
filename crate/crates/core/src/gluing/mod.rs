//! Orbit sequences, gaps and tracing; gluing-orbit estimates, recurrence
//! diagnostics and the positive-entropy construction.

mod recurrence;
mod theorem3;

pub use recurrence::{
    equicontinuity_modulus, recurrence_scan, return_set, rigidity_deficit, syndetic_bound, tec1_check,
    transitive_points, uniform_ap_check, uniform_continuity_modulus, ApReport, Recurrence, RecurrenceEntry,
    RigidityReport, Tec1Report,
};
pub use theorem3::{gamma_scan, theorem3_construct, GammaScan, Theorem3Outcome, Theorem3Params, Theorem3Report};

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{AdmissibilityGraph, FunctionSystem, PointSet};
use crate::orbit::{orbit_trace, word_trace, SigmaGenerator};
use crate::{lt, MetricSpace};

/// How segment start times follow from lengths and gaps.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `s_j = Σ_{i<j} (m_i + t_i - 1)`: gap 1 means back-to-back segments.
    #[default]
    Definition,
    /// `s_j = Σ_{i<j} (m_i + t_i)`: gap `t` leaves `t` free steps.
    Shifted,
}

impl Convention {
    /// Steps from the last point of a segment to the first of the next.
    pub fn jump(self, t: usize) -> usize {
        match self {
            Convention::Definition => t,
            Convention::Shifted => t + 1,
        }
    }
}

/// `(x_j, σ_j, m_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub x: usize,
    pub sigma: SigmaGenerator,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSequence {
    pub segments: Vec<Segment>,
}

impl OrbitSequence {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() || segments.iter().any(|s| s.m == 0) {
            return Err(Error::Domain("orbit sequences need segments of positive length".into()));
        }
        Ok(Self { segments })
    }

    /// Points of every segment; errors if some segment is not admissible.
    pub fn points(&self, fs: &FunctionSystem) -> Result<Vec<Vec<usize>>> {
        self.segments
            .iter()
            .enumerate()
            .map(|(j, s)| {
                orbit_trace(fs, s.x, &s.sigma, s.m)?
                    .ok_or_else(|| Error::Domain(format!("segment {j} is undefined before step {}", s.m)))
            })
            .collect()
    }

    pub fn describe(&self, fs: &FunctionSystem) -> Vec<String> {
        self.segments
            .iter()
            .map(|s| format!("({}, {}, {})", fs.space().label(s.x), s.sigma, s.m))
            .collect()
    }
}

/// `t_1 .. t_{N-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gap {
    pub times: Vec<usize>,
}

/// Start times `s_j`.
pub fn offsets(seq: &OrbitSequence, gap: &Gap, conv: Convention) -> Result<Vec<usize>> {
    if gap.times.len() + 1 != seq.segments.len() || gap.times.contains(&0) {
        return Err(Error::Domain("a gap needs one positive time per junction".into()));
    }
    let mut s = vec![0];
    for (seg, &t) in seq.segments.iter().zip(&gap.times) {
        s.push(s.last().unwrap() + seg.m - 1 + conv.jump(t));
    }
    Ok(s)
}

/// A finite tracing orbit `(z, symbols)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tracer {
    pub z: usize,
    pub symbols: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceResult {
    pub offsets: Vec<usize>,
    pub max_deviation: f64,
    pub ok: bool,
    pub convention: Convention,
    /// Why the check could not be carried out.
    pub cause: Option<String>,
}

/// Evaluates every tracing inequality `d(z_{s_j + l}, x_{j,l}) < ε`.
pub fn check_trace(
    fs: &FunctionSystem,
    seq: &OrbitSequence,
    gap: &Gap,
    tracer: &Tracer,
    eps: f64,
    conv: Convention,
) -> Result<TraceResult> {
    let s = offsets(seq, gap, conv)?;
    let pts = seq.points(fs)?;
    let need = s.last().unwrap() + seq.segments.last().unwrap().m;
    let fail = |cause: String| TraceResult { offsets: s.clone(), max_deviation: f64::INFINITY, ok: false, convention: conv, cause: Some(cause) };
    if tracer.symbols.len() + 1 < need {
        return Ok(fail(format!("tracer has {} points, {need} needed", tracer.symbols.len() + 1)));
    }
    let Some(z) = word_trace(fs, tracer.z, &tracer.symbols[..need - 1]) else {
        return Ok(fail("tracer orbit is undefined".into()));
    };
    let space = fs.space();
    let mut dev: f64 = 0.0;
    for (j, seg) in pts.iter().enumerate() {
        for (l, &y) in seg.iter().enumerate() {
            dev = dev.max(space.d(z[s[j] + l], y));
        }
    }
    Ok(TraceResult { offsets: s, max_deviation: dev, ok: lt(dev, eps), convention: conv, cause: None })
}

fn ball(space: &MetricSpace, y: usize, eps: f64) -> PointSet {
    let mut b = FixedBitSet::with_capacity(space.len());
    (0..space.len()).filter(|&x| lt(space.d(x, y), eps)).for_each(|x| b.insert(x));
    b
}

fn post_k(g: &AdmissibilityGraph, set: &PointSet, k: usize) -> PointSet {
    (0..k).fold(set.clone(), |s, _| g.core_post(&s))
}

fn pre_k(g: &AdmissibilityGraph, set: &PointSet, k: usize) -> PointSet {
    (0..k).fold(set.clone(), |s, _| g.core_pre(&s))
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceSearch {
    pub witness: Option<(Gap, Tracer)>,
    /// False when the budget stopped the search; an absent witness is then
    /// inconclusive.
    pub complete: bool,
}

/// Lexicographically least gap in `[1, M]^{N-1}`, then least tracer, that
/// `ε`-traces `seq`. Tracers stay in the infinite core, so they extend to
/// genuine orbits. `budget` bounds `total length × |X|`.
pub fn find_trace(
    fs: &FunctionSystem,
    seq: &OrbitSequence,
    eps: f64,
    m_max: usize,
    conv: Convention,
    budget: usize,
) -> Result<TraceSearch> {
    if m_max == 0 {
        return Err(Error::Domain("M must be at least 1".into()));
    }
    let pts = seq.points(fs)?;
    let longest: usize = seq.segments.iter().map(|s| s.m + conv.jump(m_max)).sum();
    if longest.saturating_mul(fs.n_points()) > budget {
        return Ok(TraceSearch { witness: None, complete: false });
    }
    let space = fs.space();
    let g = fs.graph();
    let k = pts.len();
    let balls: Vec<Vec<PointSet>> = pts
        .iter()
        .map(|seg| seg.iter().map(|&y| {
            let mut b = ball(space, y, eps);
            b.intersect_with(&g.infinite_core);
            b
        }).collect())
        .collect();

    // feasible[j][l]: points at offset l of segment j that can finish the
    // sequence with some gaps
    let mut feasible: Vec<Vec<PointSet>> = vec![vec![]; k];
    let mut entry: Option<PointSet> = None;
    for j in (0..k).rev() {
        let m = pts[j].len();
        let mut rows = vec![PointSet::with_capacity(0); m];
        let mut last = balls[j][m - 1].clone();
        if let Some(next) = &entry {
            let mut reach = PointSet::with_capacity(space.len());
            for t in 1..=m_max {
                reach.union_with(&pre_k(&g, next, conv.jump(t)));
            }
            last.intersect_with(&reach);
        }
        rows[m - 1] = last;
        for l in (0..m - 1).rev() {
            let mut r = g.core_pre(&rows[l + 1]);
            r.intersect_with(&balls[j][l]);
            rows[l] = r;
        }
        entry = Some(rows[0].clone());
        feasible[j] = rows;
    }
    if feasible[0][0].is_clear() {
        return Ok(TraceSearch { witness: None, complete: true });
    }

    // forward: least gap at every junction
    let mut times = Vec::new();
    let mut cur = feasible[0][0].clone();
    for j in 0..k {
        for l in 1..pts[j].len() {
            let mut n = g.core_post(&cur);
            n.intersect_with(&feasible[j][l]);
            cur = n;
        }
        if j + 1 < k {
            let t = (1..=m_max)
                .find(|&t| {
                    let mut n = post_k(&g, &cur, conv.jump(t));
                    n.intersect_with(&feasible[j + 1][0]);
                    !n.is_clear()
                })
                .expect("backward sets guarantee a continuation");
            let mut n = post_k(&g, &cur, conv.jump(t));
            n.intersect_with(&feasible[j + 1][0]);
            cur = n;
            times.push(t);
        }
    }
    let gap = Gap { times };

    // with the gap fixed, time-indexed constraints and the least tracer
    let s = offsets(seq, &gap, conv)?;
    let total = s[k - 1] + pts[k - 1].len();
    let mut need: Vec<PointSet> = vec![g.infinite_core.clone(); total];
    for j in 0..k {
        for l in 0..pts[j].len() {
            need[s[j] + l].intersect_with(&balls[j][l]);
        }
    }
    for t in (0..total - 1).rev() {
        let p = g.core_pre(&need[t + 1]);
        need[t].intersect_with(&p);
    }
    let z = need[0].ones().next().expect("gap was chosen feasible");
    let mut symbols = Vec::with_capacity(total - 1);
    let mut x = z;
    for t in 1..total {
        let &(m, y) = g.succ[x].iter().find(|&&(_, y)| need[t].contains(y)).expect("backward sets guarantee a step");
        symbols.push(m);
        x = y;
    }
    Ok(TraceSearch { witness: Some((gap, Tracer { z, symbols })), complete: true })
}

/// Extends a core point by the least admissible core path of `len` steps.
pub fn least_core_path(g: &AdmissibilityGraph, x: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    let mut p = x;
    for _ in 0..len {
        let &(m, y) = g.succ[p].iter().find(|&&(_, y)| g.in_core(y)).expect("core points have core successors");
        out.push(m);
        p = y;
    }
    out
}

/// `word` from `x`, continued by the least core path until a point repeats;
/// the repeat closes the period. `x` must reach the core along `word`.
pub fn sigma_through(fs: &FunctionSystem, x: usize, word: &[usize]) -> Result<SigmaGenerator> {
    let g = fs.graph();
    let trace = word_trace(fs, x, word).ok_or_else(|| Error::Domain("word is not admissible".into()))?;
    let mut p = *trace.last().unwrap();
    if !g.in_core(p) {
        return Err(Error::Domain("word ends outside the infinite core".into()));
    }
    let mut seen = vec![usize::MAX; fs.n_points()];
    let mut tail = Vec::new();
    while seen[p] == usize::MAX {
        seen[p] = tail.len();
        let &(m, y) = g.succ[p].iter().find(|&&(_, y)| g.in_core(y)).unwrap();
        tail.push(m);
        p = y;
    }
    let cut = seen[p];
    let mut pre = word.to_vec();
    pre.extend_from_slice(&tail[..cut]);
    SigmaGenerator::new(pre, tail[cut..].to_vec())
}

/// Every ordered pair of core points as a two-segment sequence with segments
/// of `m` points following least core paths.
pub fn pair_sequences(fs: &FunctionSystem, m: usize) -> Result<Vec<OrbitSequence>> {
    let g = fs.graph();
    let core: Vec<usize> = g.infinite_core.ones().collect();
    let seg = |x: usize| -> Result<Segment> { Ok(Segment { x, sigma: sigma_through(fs, x, &[])?, m }) };
    let mut out = Vec::new();
    for &a in &core {
        for &b in &core {
            out.push(OrbitSequence::new(vec![seg(a)?, seg(b)?])?);
        }
    }
    Ok(out)
}

/// Random sequences of `segments` segments with lengths in `1..=max_len`,
/// each following a random admissible core walk.
pub fn random_sequences(fs: &FunctionSystem, count: usize, segments: usize, max_len: usize, rng: &mut impl Rng) -> Result<Vec<OrbitSequence>> {
    let g = fs.graph();
    let core: Vec<usize> = g.infinite_core.ones().collect();
    if core.is_empty() || max_len == 0 || segments == 0 {
        return Err(Error::Config("sampling needs a nonempty core and positive sizes".into()));
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut segs = Vec::with_capacity(segments);
        for _ in 0..segments {
            let x = core[rng.gen_range(0..core.len())];
            let m = rng.gen_range(1..=max_len);
            let mut word = Vec::new();
            let mut p = x;
            for _ in 1..m {
                let opts: Vec<(usize, usize)> = g.succ[p].iter().copied().filter(|&(_, y)| g.in_core(y)).collect();
                let (k, y) = opts[rng.gen_range(0..opts.len())];
                word.push(k);
                p = y;
            }
            segs.push(Segment { x, sigma: sigma_through(fs, x, &word)?, m });
        }
        out.push(OrbitSequence::new(segs)?);
    }
    Ok(out)
}

/// Least `M` for one radius, or the sequence that defeats `M = m_max`.
#[derive(Clone, Debug, Serialize)]
pub struct GopRow {
    pub eps: f64,
    pub m: Option<usize>,
    /// Index of a sample sequence with no tracer at `m_max`.
    pub failing_sequence: Option<usize>,
    pub failing_description: Option<Vec<String>>,
    /// Every search ran to completion.
    pub complete: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GopReport {
    pub m_max: usize,
    pub convention: Convention,
    pub samples: usize,
    pub rows: Vec<GopRow>,
}

/// For each radius, the least `M <= m_max` with a tracer for every sampled
/// sequence (binary search; success is monotone in `M`).
pub fn gop_estimate(
    fs: &FunctionSystem,
    eps_grid: &[f64],
    samples: &[OrbitSequence],
    m_max: usize,
    conv: Convention,
    budget: usize,
) -> Result<GopReport> {
    if samples.is_empty() {
        return Err(Error::Config("gluing estimate needs at least one sampled sequence".into()));
    }
    let mut rows = Vec::new();
    for &eps in eps_grid {
        let mut complete = true;
        let all_ok = |m: usize, complete: &mut bool| -> Result<Option<usize>> {
            for (i, s) in samples.iter().enumerate() {
                let r = find_trace(fs, s, eps, m, conv, budget)?;
                *complete &= r.complete;
                if r.witness.is_none() {
                    return Ok(Some(i));
                }
            }
            Ok(None)
        };
        if let Some(i) = all_ok(m_max, &mut complete)? {
            rows.push(GopRow {
                eps,
                m: None,
                failing_sequence: Some(i),
                failing_description: Some(samples[i].describe(fs)),
                complete,
            });
            continue;
        }
        let (mut lo, mut hi) = (1, m_max);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if all_ok(mid, &mut complete)?.is_none() {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        rows.push(GopRow { eps, m: Some(lo), failing_sequence: None, failing_description: None, complete });
    }
    Ok(GopReport { m_max, convention: conv, samples: samples.len(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{disjoint_cycles, shift_window};
    use crate::metric::SeqMetric;

    fn seg(fs: &FunctionSystem, label: &str, word: &[usize], m: usize) -> Segment {
        let x = fs.space().index_of(label).unwrap();
        Segment { x, sigma: sigma_through(fs, x, word).unwrap(), m }
    }

    #[test]
    fn single_segment_traces_itself() {
        let fs = shift_window(2, 3, SeqMetric::FirstDifference).unwrap();
        let s = OrbitSequence::new(vec![seg(&fs, "w010", &[], 4)]).unwrap();
        let r = find_trace(&fs, &s, 0.01, 1, Convention::Definition, 1 << 20).unwrap();
        let (gap, tr) = r.witness.unwrap();
        assert!(gap.times.is_empty());
        let c = check_trace(&fs, &s, &gap, &tr, 0.01, Convention::Definition).unwrap();
        assert!(c.ok && c.max_deviation == 0.0);
    }

    #[test]
    fn full_shift_glues_with_gap_one() {
        let fs = shift_window(2, 1, SeqMetric::FirstDifference).unwrap();
        let s = OrbitSequence::new(vec![seg(&fs, "w0", &[], 3), seg(&fs, "w1", &[], 2)]).unwrap();
        let (gap, tr) = find_trace(&fs, &s, 0.5, 3, Convention::Definition, 1 << 20).unwrap().witness.unwrap();
        assert_eq!(gap.times, vec![1]);
        let c = check_trace(&fs, &s, &gap, &tr, 0.5, Convention::Definition).unwrap();
        assert!(c.ok && c.max_deviation == 0.0);
        assert_eq!(c.offsets, vec![0, 3]);
    }

    #[test]
    fn disjoint_cycles_cannot_glue() {
        let fs = disjoint_cycles(3).unwrap();
        let s = OrbitSequence::new(vec![seg(&fs, "a0", &[], 2), seg(&fs, "b0", &[], 2)]).unwrap();
        let r = find_trace(&fs, &s, 0.5, 4, Convention::Definition, 1 << 20).unwrap();
        assert!(r.witness.is_none() && r.complete);
        let rep = gop_estimate(&fs, &[0.5], &pair_sequences(&fs, 2).unwrap(), 4, Convention::Definition, 1 << 20).unwrap();
        assert!(rep.rows[0].m.is_none() && rep.rows[0].failing_sequence.is_some());
    }
}
