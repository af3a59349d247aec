//! Spanning and separated counts over orbit traces, and the entropy and
//! mean-dimension estimators built on them.
//!
//! Separation is `joint >= ε`, spanning is `joint < ε`, both compared through
//! the crate tolerance.

mod graph;
mod rates;

pub use graph::{max_independent_set, min_dominating_set, Graph, Solution};
pub use rates::{entropy_estimate, fit_slope, mmdim_estimate, rate_report, MmdimReport, RateReport};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::FunctionSystem;
use crate::orbit::{extendable_traces, orbit_trace, sigma_sigma_exact, SigmaGenerator};
use crate::{lt, MetricSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Certified optimum when the search budget allows, flagged downgrade
    /// otherwise.
    #[default]
    Exact,
    Greedy,
    /// Same as `Exact`; accepted for configuration symmetry.
    Auto,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "greedy" => Ok(Mode::Greedy),
            "auto" => Ok(Mode::Auto),
            _ => Err(Error::Config(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Budget {
    /// Largest trace set for which a graph is built at all.
    pub max_nodes: usize,
    /// Branch-and-bound node limit per component.
    pub max_search: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_nodes: 20_000, max_search: 200_000 }
    }
}

/// A counted cardinality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Count {
    pub value: usize,
    pub exact: bool,
    /// Indices into the trace list the count was taken over.
    #[serde(skip)]
    pub witness: Vec<usize>,
    /// Set when the node set was empty (e.g. `Σ_σ = ∅`).
    pub empty: bool,
}

fn closeness(space: &MetricSpace, traces: &[Vec<usize>], n: usize, eps: f64) -> Graph {
    Graph::from_fn(traces.len(), |a, b| {
        let (ta, tb) = (&traces[a], &traces[b]);
        (0..n).all(|i| lt(space.d(ta[i], tb[i]), eps))
    })
}

fn check_args(n: usize, eps: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("horizon must be at least 1".into()));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!("radius must be positive, got {eps}")));
    }
    Ok(())
}

fn guard(traces: &[Vec<usize>], budget: &Budget) -> Result<()> {
    if traces.len() > budget.max_nodes {
        return Err(Error::Infeasible(format!(
            "{} orbit prefixes exceed the node budget {}",
            traces.len(),
            budget.max_nodes
        )));
    }
    Ok(())
}

/// Maximum `ε`-separated subset of the given traces.
pub fn separated_in(space: &MetricSpace, traces: &[Vec<usize>], n: usize, eps: f64, mode: Mode, budget: &Budget) -> Result<Count> {
    check_args(n, eps)?;
    guard(traces, budget)?;
    if traces.is_empty() {
        return Ok(Count { value: 0, exact: true, witness: vec![], empty: true });
    }
    let g = closeness(space, traces, n, eps);
    let s = max_independent_set(&g, mode != Mode::Greedy, budget.max_search);
    Ok(Count { value: s.size, exact: s.exact, witness: s.witness, empty: false })
}

/// Minimum `ε`-spanning subset of the given traces.
pub fn spanning_in(space: &MetricSpace, traces: &[Vec<usize>], n: usize, eps: f64, mode: Mode, budget: &Budget) -> Result<Count> {
    check_args(n, eps)?;
    guard(traces, budget)?;
    if traces.is_empty() {
        return Ok(Count { value: 0, exact: true, witness: vec![], empty: true });
    }
    let g = closeness(space, traces, n, eps);
    let s = min_dominating_set(&g, mode != Mode::Greedy, budget.max_search);
    Ok(Count { value: s.size, exact: s.exact, witness: s.witness, empty: false })
}

/// `s(n, ε)` over extendable prefixes.
pub fn separated_count(fs: &FunctionSystem, n: usize, eps: f64, mode: Mode, budget: &Budget) -> Result<Count> {
    check_args(n, eps)?;
    let traces = extendable_traces(&fs.graph(), n);
    separated_in(fs.space(), &traces, n, eps, mode, budget)
}

/// `r(n, ε)` over extendable prefixes.
pub fn spanning_count(fs: &FunctionSystem, n: usize, eps: f64, mode: Mode, budget: &Budget) -> Result<Count> {
    check_args(n, eps)?;
    let traces = extendable_traces(&fs.graph(), n);
    spanning_in(fs.space(), &traces, n, eps, mode, budget)
}

/// Traces of `σ` from every point of `Σ_σ`.
pub fn sigma_traces(fs: &FunctionSystem, sigma: &SigmaGenerator, n: usize) -> Result<Vec<Vec<usize>>> {
    let starts = sigma_sigma_exact(fs, sigma)?;
    let mut out = Vec::new();
    for x in starts.ones() {
        if let Some(t) = orbit_trace(fs, x, sigma, n)? {
            out.push(t);
        }
    }
    Ok(out)
}

/// `s(σ, n, ε)`.
pub fn orbit_separated_count(
    fs: &FunctionSystem,
    sigma: &SigmaGenerator,
    n: usize,
    eps: f64,
    mode: Mode,
    budget: &Budget,
) -> Result<Count> {
    check_args(n, eps)?;
    let traces = sigma_traces(fs, sigma, n)?;
    separated_in(fs.space(), &traces, n, eps, mode, budget)
}

/// One `(n, ε)` cell.
#[derive(Clone, Debug, Serialize)]
pub struct CountEntry {
    pub n: usize,
    pub eps: f64,
    pub separated: Count,
    pub spanning: Option<Count>,
    /// `r(n, ε/2)`, for the sandwich.
    pub spanning_half: Option<Count>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CountGrid {
    pub entries: Vec<CountEntry>,
}

/// A failed order relation between grid values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridViolation {
    pub relation: String,
    pub n: usize,
    pub eps: f64,
    pub values: (usize, usize),
}

impl CountGrid {
    pub fn get(&self, n: usize, eps: f64) -> Option<&CountEntry> {
        self.entries.iter().find(|e| e.n == n && e.eps == eps)
    }

    pub fn ns(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.entries.iter().map(|e| e.n).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn epsilons(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.entries.iter().map(|e| e.eps).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v.dedup();
        v
    }

    /// Sandwich `r(n,ε) <= s(n,ε) <= r(n,ε/2)` and monotonicity of `s` and
    /// `r` in `n` and `ε`, checked on exact values only.
    pub fn violations(&self) -> Vec<GridViolation> {
        let mut out = Vec::new();
        let mut bad = |relation: &str, e: &CountEntry, a: usize, b: usize| {
            out.push(GridViolation { relation: relation.into(), n: e.n, eps: e.eps, values: (a, b) })
        };
        for e in &self.entries {
            let s = &e.separated;
            if let Some(r) = &e.spanning {
                if r.exact && s.exact && r.value > s.value {
                    bad("r <= s", e, r.value, s.value);
                }
            }
            if let Some(rh) = &e.spanning_half {
                if rh.exact && s.exact && s.value > rh.value {
                    bad("s <= r(eps/2)", e, s.value, rh.value);
                }
            }
        }
        let ns = self.ns();
        let es = self.epsilons();
        for &eps in &es {
            for w in ns.windows(2) {
                if let (Some(a), Some(b)) = (self.get(w[0], eps), self.get(w[1], eps)) {
                    mono(a, b, "nondecreasing in n", &mut out);
                }
            }
        }
        for &n in &ns {
            // es is descending, so counts must not decrease along it
            for w in es.windows(2) {
                if let (Some(a), Some(b)) = (self.get(n, w[0]), self.get(n, w[1])) {
                    mono(a, b, "nonincreasing in eps", &mut out);
                }
            }
        }
        out
    }
}

fn mono(a: &CountEntry, b: &CountEntry, what: &str, out: &mut Vec<GridViolation>) {
    let sa = &a.separated;
    let sb = &b.separated;
    if sa.exact && sb.exact && sa.value > sb.value {
        out.push(GridViolation { relation: format!("s {what}"), n: b.n, eps: b.eps, values: (sa.value, sb.value) });
    }
    if let (Some(ra), Some(rb)) = (&a.spanning, &b.spanning) {
        if ra.exact && rb.exact && ra.value > rb.value {
            out.push(GridViolation { relation: format!("r {what}"), n: b.n, eps: b.eps, values: (ra.value, rb.value) });
        }
    }
}

/// Sweeps the grid; cells run in parallel. With `sigma` the counts are
/// `s(σ, n, ε)` and spanning counts are skipped.
pub fn count_grid(
    fs: &FunctionSystem,
    sigma: Option<&SigmaGenerator>,
    n_grid: &[usize],
    eps_grid: &[f64],
    mode: Mode,
    budget: &Budget,
    with_spanning: bool,
) -> Result<CountGrid> {
    if n_grid.is_empty() || eps_grid.is_empty() {
        return Err(Error::Config("count grid needs at least one horizon and one radius".into()));
    }
    let graph = fs.graph();
    let mut traces = Vec::new();
    for &n in n_grid {
        let t = match sigma {
            Some(s) => sigma_traces(fs, s, n)?,
            None => extendable_traces(&graph, n),
        };
        traces.push(t);
    }
    let cells: Vec<(usize, usize)> =
        (0..n_grid.len()).flat_map(|i| (0..eps_grid.len()).map(move |j| (i, j))).collect();
    let space = fs.space();
    let entries = cells
        .par_iter()
        .map(|&(i, j)| {
            let (n, eps) = (n_grid[i], eps_grid[j]);
            let t = &traces[i];
            let separated = separated_in(space, t, n, eps, mode, budget)?;
            let (spanning, spanning_half) = if with_spanning && sigma.is_none() {
                (
                    Some(spanning_in(space, t, n, eps, mode, budget)?),
                    Some(spanning_in(space, t, n, eps / 2.0, mode, budget)?),
                )
            } else {
                (None, None)
            };
            Ok(CountEntry { n, eps, separated, spanning, spanning_half })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CountGrid { entries })
}
