//! Independent-set and dominating-set kernels on "closeness" graphs.
//!
//! Both solvers split the graph into connected components. A component that is
//! a clique is solved directly. Otherwise a greedy solution is compared with a
//! cheap opposite bound (clique cover for independence, 2-packing for
//! domination); when they meet the greedy answer is certified exact, and only
//! otherwise does branch and bound run, within a node budget.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

/// Symmetric adjacency without self loops.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
}

/// Result of a size-optimization kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub size: usize,
    pub witness: Vec<usize>,
    /// Certified optimal (otherwise a one-sided bound).
    pub exact: bool,
}

impl Graph {
    pub fn from_fn(n: usize, edge: impl Fn(usize, usize) -> bool + Sync) -> Self {
        let adj = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = FixedBitSet::with_capacity(n);
                for j in 0..n {
                    if i != j && edge(i, j) {
                        row.insert(j);
                    }
                }
                row
            })
            .collect();
        Self { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = FixedBitSet::with_capacity(n);
        let mut out = Vec::new();
        for s in 0..n {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for u in self.adj[v].ones() {
                    if !seen.contains(u) {
                        seen.insert(u);
                        comp.push(u);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn is_clique(&self, comp: &[usize]) -> bool {
        comp.iter().all(|&v| self.adj[v].count_ones(..) == comp.len() - 1)
    }

    fn mask(&self, comp: &[usize]) -> FixedBitSet {
        let mut m = FixedBitSet::with_capacity(self.len());
        for &v in comp {
            m.insert(v);
        }
        m
    }
}

/// First-fit independent set in index order.
fn greedy_independent(g: &Graph, nodes: &FixedBitSet) -> Vec<usize> {
    let mut blocked = FixedBitSet::with_capacity(g.len());
    let mut out = Vec::new();
    for v in nodes.ones() {
        if !blocked.contains(v) {
            out.push(v);
            blocked.union_with(&g.adj[v]);
        }
    }
    out
}

/// First-fit clique cover in index order; its size bounds any independent set.
fn clique_cover_size(g: &Graph, nodes: &FixedBitSet) -> usize {
    let mut cliques: Vec<FixedBitSet> = Vec::new();
    let mut owner = vec![usize::MAX; g.len()];
    for v in nodes.ones() {
        let mut placed = None;
        let mut tried: Vec<usize> = g.adj[v]
            .ones()
            .filter(|&u| nodes.contains(u) && owner[u] != usize::MAX)
            .map(|u| owner[u])
            .collect();
        tried.sort_unstable();
        tried.dedup();
        for c in tried {
            if cliques[c].is_subset(&g.adj[v]) {
                placed = Some(c);
                break;
            }
        }
        let c = placed.unwrap_or_else(|| {
            cliques.push(FixedBitSet::with_capacity(g.len()));
            cliques.len() - 1
        });
        cliques[c].insert(v);
        owner[v] = c;
    }
    cliques.len()
}

struct MisSearch<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    visited: usize,
    budget: usize,
}

impl MisSearch<'_> {
    fn go(&mut self, p: FixedBitSet, cur: &mut Vec<usize>) -> bool {
        self.visited += 1;
        if self.visited > self.budget {
            return false;
        }
        let Some(v) = p.ones().next() else {
            if cur.len() > self.best.len() {
                self.best = cur.clone();
            }
            return true;
        };
        if cur.len() + clique_cover_size(self.g, &p) <= self.best.len() {
            return true;
        }
        let mut with = p.clone();
        with.difference_with(&self.g.adj[v]);
        with.set(v, false);
        cur.push(v);
        let ok = self.go(with, cur);
        cur.pop();
        if !ok {
            return false;
        }
        let mut without = p;
        without.set(v, false);
        self.go(without, cur)
    }
}

/// Maximum independent set. `exact = false` marks a greedy lower bound used
/// after the search budget ran out on some component (or when
/// `allow_search` is false and no certificate was available).
pub fn max_independent_set(g: &Graph, allow_search: bool, budget: usize) -> Solution {
    let mut witness = Vec::new();
    let mut exact = true;
    for comp in g.components() {
        if g.is_clique(&comp) {
            witness.push(comp[0]);
            continue;
        }
        let nodes = g.mask(&comp);
        let greedy = greedy_independent(g, &nodes);
        if !allow_search {
            exact = false;
            witness.extend(greedy);
            continue;
        }
        if greedy.len() == clique_cover_size(g, &nodes) {
            witness.extend(greedy);
            continue;
        }
        let mut s = MisSearch { g, best: greedy, visited: 0, budget };
        let done = s.go(nodes, &mut Vec::new());
        exact &= done;
        witness.extend(s.best);
    }
    witness.sort_unstable();
    Solution { size: witness.len(), witness, exact }
}

fn closed(g: &Graph, v: usize) -> FixedBitSet {
    let mut s = g.adj[v].clone();
    s.insert(v);
    s
}

/// Greedy dominating set: repeatedly take the node dominating the most
/// undominated nodes (lowest index on ties).
fn greedy_dominating(g: &Graph, nodes: &FixedBitSet) -> Vec<usize> {
    let mut undominated = nodes.clone();
    let mut out = Vec::new();
    while undominated.count_ones(..) > 0 {
        let (v, _) = nodes
            .ones()
            .map(|v| (v, closed(g, v).intersection(&undominated).count()))
            .fold((usize::MAX, 0), |acc, (v, c)| if c > acc.1 { (v, c) } else { acc });
        out.push(v);
        undominated.difference_with(&closed(g, v));
    }
    out.sort_unstable();
    out
}

/// Nodes with pairwise disjoint closed neighbourhoods, first-fit.
fn greedy_two_packing(g: &Graph, nodes: &FixedBitSet) -> usize {
    let mut used = FixedBitSet::with_capacity(g.len());
    let mut count = 0;
    for v in nodes.ones() {
        let nb = closed(g, v);
        if nb.is_disjoint(&used) {
            used.union_with(&nb);
            count += 1;
        }
    }
    count
}

struct DomSearch<'a> {
    g: &'a Graph,
    best: Vec<usize>,
    max_cover: usize,
    visited: usize,
    budget: usize,
}

impl DomSearch<'_> {
    fn go(&mut self, undominated: FixedBitSet, cur: &mut Vec<usize>) -> bool {
        self.visited += 1;
        if self.visited > self.budget {
            return false;
        }
        let left = undominated.count_ones(..);
        let Some(u) = undominated.ones().next() else {
            if cur.len() < self.best.len() {
                self.best = cur.clone();
            }
            return true;
        };
        if cur.len() + left.div_ceil(self.max_cover) >= self.best.len() {
            return true;
        }
        for w in closed(self.g, u).ones() {
            let mut next = undominated.clone();
            next.difference_with(&closed(self.g, w));
            cur.push(w);
            let ok = self.go(next, cur);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Minimum dominating set (closed neighbourhoods).
pub fn min_dominating_set(g: &Graph, allow_search: bool, budget: usize) -> Solution {
    let mut witness = Vec::new();
    let mut exact = true;
    for comp in g.components() {
        if g.is_clique(&comp) {
            witness.push(comp[0]);
            continue;
        }
        let nodes = g.mask(&comp);
        let greedy = greedy_dominating(g, &nodes);
        if !allow_search {
            exact = false;
            witness.extend(greedy);
            continue;
        }
        if greedy.len() == greedy_two_packing(g, &nodes) {
            witness.extend(greedy);
            continue;
        }
        let max_cover = comp.iter().map(|&v| g.adj[v].count_ones(..) + 1).max().unwrap_or(1);
        let mut s = DomSearch { g, best: greedy, max_cover, visited: 0, budget };
        let done = s.go(nodes, &mut Vec::new());
        exact &= done;
        let mut b = s.best;
        b.sort_unstable();
        witness.extend(b);
    }
    witness.sort_unstable();
    Solution { size: witness.len(), witness, exact }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_mis(n: usize, e: &[(usize, usize)]) -> usize {
        (0u32..1 << n)
            .filter(|m| e.iter().all(|&(a, b)| !(m >> a & 1 == 1 && m >> b & 1 == 1)))
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    fn brute_dom(n: usize, e: &[(usize, usize)]) -> usize {
        (0u32..1 << n)
            .filter(|m| {
                (0..n).all(|v| {
                    m >> v & 1 == 1
                        || e.iter().any(|&(a, b)| (a == v && m >> b & 1 == 1) || (b == v && m >> a & 1 == 1))
                })
            })
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn five_cycle() {
        let e = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)];
        let g = Graph::from_fn(5, |a, b| e.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b)));
        let s = max_independent_set(&g, true, 10_000);
        assert_eq!((s.size, s.exact), (2, true));
        let d = min_dominating_set(&g, true, 10_000);
        assert_eq!((d.size, d.exact), (2, true));
    }

    proptest! {
        #[test]
        fn solvers_match_brute_force(n in 1usize..12, bits in proptest::collection::vec(any::<bool>(), 66)) {
            let mut e = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k % bits.len()] { e.push((a, b)); }
                    k += 1;
                }
            }
            let g = Graph::from_fn(n, |a, b| e.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b)));
            let s = max_independent_set(&g, true, 1_000_000);
            prop_assert!(s.exact);
            prop_assert_eq!(s.size, brute_mis(n, &e));
            let d = min_dominating_set(&g, true, 1_000_000);
            prop_assert!(d.exact);
            prop_assert_eq!(d.size, brute_dom(n, &e));
            let gr = max_independent_set(&g, false, 0);
            prop_assert!(gr.size <= s.size);
        }
    }
}
