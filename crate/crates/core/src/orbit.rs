//! Symbol sequences and orbit evaluation.
//!
//! Infinite sequences are eventually periodic: `preperiod · period^∞`. Step
//! `i` (0-based) applies `symbol(i)`, so `v^{σ(n)}` applies symbols
//! `0..n`. A horizon of `n` means the `n` orbit points at steps `0..n`.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::{AdmissibilityGraph, FunctionSystem, PointSet};
use crate::metric::MetricSpace;

/// Eventually periodic sequence of map indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaGenerator {
    pre: Vec<usize>,
    period: Vec<usize>,
}

/// Configuration form of a sequence: map ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaSpec {
    #[serde(default)]
    pub pre: Vec<String>,
    pub period: Vec<String>,
}

impl SigmaGenerator {
    pub fn new(pre: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Config("sequence period must be nonempty".into()));
        }
        Ok(Self { pre, period })
    }

    /// `σ_v = (v, v, v, ...)`.
    pub fn constant(map: usize) -> Self {
        Self { pre: vec![], period: vec![map] }
    }

    pub fn periodic(period: Vec<usize>) -> Result<Self> {
        Self::new(vec![], period)
    }

    pub fn from_ids(fs: &FunctionSystem, pre: &[&str], period: &[&str]) -> Result<Self> {
        let look = |ids: &[&str]| ids.iter().map(|id| fs.map_index(id)).collect::<Result<Vec<_>>>();
        Self::new(look(pre)?, look(period)?)
    }

    pub fn from_spec(fs: &FunctionSystem, spec: &SigmaSpec) -> Result<Self> {
        let pre: Vec<&str> = spec.pre.iter().map(String::as_str).collect();
        let period: Vec<&str> = spec.period.iter().map(String::as_str).collect();
        Self::from_ids(fs, &pre, &period)
    }

    /// Parses `const(v)` or `a,b|c,d` (preperiod `a,b`, period `c,d`); a bare
    /// list without `|` is a pure period.
    pub fn parse(fs: &FunctionSystem, text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix("const(").and_then(|r| r.strip_suffix(')')) {
            return Ok(Self::constant(fs.map_index(inner.trim())?));
        }
        let split = |s: &str| -> Vec<String> {
            s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect()
        };
        let spec = match t.split_once('|') {
            Some((pre, period)) => SigmaSpec { pre: split(pre), period: split(period) },
            None => SigmaSpec { pre: vec![], period: split(t) },
        };
        Self::from_spec(fs, &spec)
    }

    pub fn to_spec(&self, fs: &FunctionSystem) -> SigmaSpec {
        let ids = |v: &[usize]| v.iter().map(|&k| fs.maps()[k].id().to_string()).collect();
        SigmaSpec { pre: ids(&self.pre), period: ids(&self.period) }
    }

    pub fn preperiod(&self) -> &[usize] {
        &self.pre
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    /// Map index applied at step `i` (0-based).
    #[inline]
    pub fn symbol(&self, i: usize) -> usize {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.period[(i - self.pre.len()) % self.period.len()]
        }
    }

    /// First `len` symbols.
    pub fn word(&self, len: usize) -> Vec<usize> {
        (0..len).map(|i| self.symbol(i)).collect()
    }

    /// The tail `σ(+∞, n) = (v_{n+1}, v_{n+2}, ...)`.
    pub fn shifted(&self, n: usize) -> Self {
        if n <= self.pre.len() {
            Self { pre: self.pre[n..].to_vec(), period: self.period.clone() }
        } else {
            let mut period = self.period.clone();
            period.rotate_left((n - self.pre.len()) % self.period.len());
            Self { pre: vec![], period }
        }
    }

    /// Horizon past which `Σ_σ` no longer shrinks on an `n_points` model.
    pub fn stable_horizon(&self, n_points: usize) -> usize {
        self.pre.len() + n_points * self.period.len()
    }

    /// Number of distinct tails `σ(+∞, n)`.
    pub fn distinct_tails(&self) -> usize {
        self.pre.len() + self.period.len()
    }

    fn check(&self, fs: &FunctionSystem) -> Result<()> {
        let k = fs.maps().len();
        match self.pre.iter().chain(&self.period).find(|&&m| m >= k) {
            Some(bad) => Err(Error::UnknownMap(format!("#{bad}"))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for SigmaGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", j(&self.pre), j(&self.period))
    }
}

/// `v^{σ(n)}(x)`, or `None` when some step leaves the domains.
pub fn evaluate(fs: &FunctionSystem, x: usize, sigma: &SigmaGenerator, n: usize) -> Result<Option<usize>> {
    evaluate_window(fs, x, sigma, 0, n)
}

/// `v^{σ(b,a)}(x) = v_b ∘ ... ∘ v_{a+1}(x)`; the identity when `a == b`.
pub fn evaluate_window(
    fs: &FunctionSystem,
    x: usize,
    sigma: &SigmaGenerator,
    a: usize,
    b: usize,
) -> Result<Option<usize>> {
    sigma.check(fs)?;
    if b < a {
        return Err(Error::Domain(format!("window end {b} precedes start {a}")));
    }
    if x >= fs.n_points() {
        return Err(Error::Domain(format!("point {x} outside the model")));
    }
    let mut p = x;
    for i in a..b {
        match fs.apply(sigma.symbol(i), p) {
            Some(q) => p = q,
            None => return Ok(None),
        }
    }
    Ok(Some(p))
}

/// Orbit points at steps `0..n`, or `None` if undefined before step `n-1`.
pub fn orbit_trace(fs: &FunctionSystem, x: usize, sigma: &SigmaGenerator, n: usize) -> Result<Option<Vec<usize>>> {
    sigma.check(fs)?;
    let mut out = Vec::with_capacity(n);
    let mut p = x;
    for i in 0..n {
        if i > 0 {
            match fs.apply(sigma.symbol(i - 1), p) {
                Some(q) => p = q,
                None => return Ok(None),
            }
        }
        out.push(p);
    }
    Ok(Some(out))
}

/// Applies an explicit word of map indices, returning the visited points
/// (`word.len() + 1` of them) when defined.
pub fn word_trace(fs: &FunctionSystem, x: usize, word: &[usize]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(word.len() + 1);
    out.push(x);
    let mut p = x;
    for &m in word {
        p = fs.maps().get(m)?.apply(p)?;
        out.push(p);
    }
    Some(out)
}

/// An admissible finite orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPrefix {
    pub start: usize,
    pub symbols: Vec<usize>,
    pub trace: Vec<usize>,
    /// The endpoint lies in the infinite core, so the prefix continues forever.
    pub extendable: bool,
}

/// All admissible prefixes with `n` points from `x`, in lexicographic symbol
/// order. With `require_extendable` only those whose endpoint is in the core.
pub fn sigma_x_prefixes(
    fs: &FunctionSystem,
    graph: &AdmissibilityGraph,
    x: usize,
    n: usize,
    require_extendable: bool,
) -> Result<Vec<OrbitPrefix>> {
    if n == 0 {
        return Err(Error::Domain("prefix length must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut symbols = Vec::new();
    let mut trace = vec![x];
    fn rec(
        fs: &FunctionSystem,
        g: &AdmissibilityGraph,
        n: usize,
        req: bool,
        symbols: &mut Vec<usize>,
        trace: &mut Vec<usize>,
        out: &mut Vec<OrbitPrefix>,
    ) {
        let p = *trace.last().unwrap();
        if trace.len() == n {
            let extendable = g.in_core(p);
            if extendable || !req {
                out.push(OrbitPrefix { start: trace[0], symbols: symbols.clone(), trace: trace.clone(), extendable });
            }
            return;
        }
        for &(m, q) in &g.succ[p] {
            if req && !g.in_core(q) {
                continue;
            }
            symbols.push(m);
            trace.push(q);
            rec(fs, g, n, req, symbols, trace, out);
            symbols.pop();
            trace.pop();
        }
    }
    if !require_extendable || graph.in_core(x) {
        rec(fs, graph, n, require_extendable, &mut symbols, &mut trace, &mut out);
    }
    Ok(out)
}

/// Distinct traces of length `n` over all extendable prefixes, sorted. These
/// stand for `Ψ(X)` at horizon `n`; counts depend only on traces.
pub fn extendable_traces(graph: &AdmissibilityGraph, n: usize) -> Vec<Vec<usize>> {
    let mut layer: Vec<Vec<usize>> = graph.infinite_core.ones().map(|x| vec![x]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for t in &layer {
            for y in graph.core_successors(*t.last().unwrap()) {
                let mut u = t.clone();
                u.push(y);
                next.push(u);
            }
        }
        layer = next;
    }
    layer
}

/// `{x : v^{σ(i)}(x) defined for all i <= n}`.
pub fn sigma_sigma(fs: &FunctionSystem, sigma: &SigmaGenerator, n: usize) -> Result<PointSet> {
    sigma.check(fs)?;
    let mut out = FixedBitSet::with_capacity(fs.n_points());
    for x in 0..fs.n_points() {
        if evaluate(fs, x, sigma, n)?.is_some() {
            out.insert(x);
        }
    }
    Ok(out)
}

/// `Σ_σ` itself, evaluated at the stable horizon.
pub fn sigma_sigma_exact(fs: &FunctionSystem, sigma: &SigmaGenerator) -> Result<PointSet> {
    sigma_sigma(fs, sigma, sigma.stable_horizon(fs.n_points()))
}

/// `max_{i<n} d(a_i, b_i)` for two orbit traces.
pub fn joint_distance(space: &MetricSpace, a: &[usize], b: &[usize], n: usize) -> Result<f64> {
    if a.len() < n || b.len() < n {
        return Err(Error::Domain(format!(
            "orbit undefined before step {n} (lengths {} and {})",
            a.len(),
            b.len()
        )));
    }
    Ok((0..n).map(|i| space.d(a[i], b[i])).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{identity, rotation, stray_arrow};
    use crate::metric::line;

    #[test]
    fn identity_and_rotation() {
        let fs = identity(line(3).unwrap()).unwrap();
        assert_eq!(evaluate(&fs, 2, &SigmaGenerator::constant(0), 7).unwrap(), Some(2));
        let fs = rotation(4, 1).unwrap();
        let s = SigmaGenerator::constant(0);
        assert_eq!(evaluate(&fs, 0, &s, 3).unwrap(), Some(3));
        assert_eq!(evaluate_window(&fs, 0, &s, 2, 5).unwrap(), Some(3));
        assert_eq!(evaluate(&fs, 1, &s, 0).unwrap(), Some(1));
    }

    #[test]
    fn unknown_map_is_a_config_error() {
        let fs = rotation(4, 1).unwrap();
        assert!(matches!(evaluate(&fs, 0, &SigmaGenerator::constant(3), 1), Err(Error::UnknownMap(_))));
        assert!(SigmaGenerator::parse(&fs, "const(nope)").is_err());
    }

    #[test]
    fn parse_forms() {
        let fs = stray_arrow().unwrap();
        assert_eq!(SigmaGenerator::parse(&fs, "const(g)").unwrap(), SigmaGenerator::constant(1));
        let s = SigmaGenerator::parse(&fs, "g|f,g").unwrap();
        assert_eq!(s.word(5), vec![1, 0, 1, 0, 1]);
        assert_eq!(s.shifted(2).word(3), vec![1, 0, 1]);
    }

    #[test]
    fn stray_prefixes_and_sigma_sets() {
        let fs = stray_arrow().unwrap();
        let g = fs.graph();
        // c -> a -> b is extendable through the cycle
        let p = sigma_x_prefixes(&fs, &g, 2, 3, true).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].trace, vec![2, 0, 1]);
        let lone = crate::ifs::FunctionSystem::new(
            line(2).unwrap(),
            vec![crate::ifs::PartialMap::new("f", 2, &[(0, 1)]).unwrap()],
        )
        .unwrap();
        let gl = lone.graph();
        assert!(sigma_x_prefixes(&lone, &gl, 0, 3, true).unwrap().is_empty());
        assert_eq!(sigma_sigma(&lone, &SigmaGenerator::constant(0), 2).unwrap().count_ones(..), 0);
    }

    #[test]
    fn joint_distance_of_rotation_preserves_gaps() {
        let fs = rotation(4, 1).unwrap();
        let s = SigmaGenerator::constant(0);
        let a = orbit_trace(&fs, 0, &s, 4).unwrap().unwrap();
        let b = orbit_trace(&fs, 1, &s, 4).unwrap().unwrap();
        assert_eq!(joint_distance(fs.space(), &a, &b, 4).unwrap(), fs.space().d(0, 1));
        assert!(joint_distance(fs.space(), &a, &b, 5).is_err());
    }
}
