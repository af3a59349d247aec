//! Partial maps, function systems and the admissibility graph.
//!
//! Every subset of a finite model is closed, so a domain is an arbitrary
//! nonempty point set and a "homeomorphism onto its image" is an injection.

mod systems;

pub use systems::{
    cat_map, disjoint_cycles, doubling_branches, identity, inverse_doubling_branches,
    power_family, rotation, shift_window, stray_arrow,
};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::metric::MetricSpace;

/// Point subset of a model, one bit per point.
pub type PointSet = FixedBitSet;

/// Injective map defined on a subset of the model.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialMap {
    id: String,
    table: Vec<Option<usize>>,
}

impl PartialMap {
    /// Builds a map over `n` points from `(source, image)` pairs.
    pub fn new(id: impl Into<String>, n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let id = id.into();
        if pairs.is_empty() {
            return Err(Error::InvalidModel(format!("map `{id}` has an empty domain")));
        }
        let mut table = vec![None; n];
        let mut hit = vec![false; n];
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::InvalidModel(format!("map `{id}` leaves the space at ({x},{y})")));
            }
            if table[x].is_some_and(|old| old != y) {
                return Err(Error::InvalidModel(format!("map `{id}` assigns two images to {x}")));
            }
            if table[x].is_none() {
                if hit[y] {
                    return Err(Error::InvalidModel(format!("map `{id}` is not injective at image {y}")));
                }
                hit[y] = true;
                table[x] = Some(y);
            }
        }
        Ok(Self { id, table })
    }

    pub fn from_fn(id: impl Into<String>, n: usize, f: impl Fn(usize) -> Option<usize>) -> Result<Self> {
        let pairs: Vec<_> = (0..n).filter_map(|x| f(x).map(|y| (x, y))).collect();
        Self::new(id, n, &pairs)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    #[inline]
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.table.get(x).copied().flatten()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.table.iter().enumerate().filter_map(|(x, y)| y.map(|_| x))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.table.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x, y)))
    }

    /// Preimage of a single point, if any.
    pub fn preimage(&self, y: usize) -> Option<usize> {
        self.table.iter().position(|t| *t == Some(y))
    }
}

/// A finite metric model with a finite ordered family of partial maps.
#[derive(Clone, Debug)]
pub struct FunctionSystem {
    space: MetricSpace,
    maps: Vec<PartialMap>,
}

impl FunctionSystem {
    pub fn new(space: MetricSpace, maps: Vec<PartialMap>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for m in &maps {
            if m.table.len() != space.len() {
                return Err(Error::InvalidModel(format!(
                    "map `{}` is defined over {} points, space has {}",
                    m.id,
                    m.table.len(),
                    space.len()
                )));
            }
            if !seen.insert(m.id.clone()) {
                return Err(Error::InvalidModel(format!("duplicate map id `{}`", m.id)));
            }
        }
        if maps.is_empty() {
            return Err(Error::InvalidModel("function system needs at least one map".into()));
        }
        Ok(Self { space, maps })
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn maps(&self) -> &[PartialMap] {
        &self.maps
    }

    pub fn n_points(&self) -> usize {
        self.space.len()
    }

    pub fn map_index(&self, id: &str) -> Result<usize> {
        self.maps
            .iter()
            .position(|m| m.id == id)
            .ok_or_else(|| Error::UnknownMap(id.to_string()))
    }

    #[inline]
    pub fn apply(&self, map: usize, x: usize) -> Option<usize> {
        self.maps[map].apply(x)
    }

    pub fn graph(&self) -> AdmissibilityGraph {
        AdmissibilityGraph::build(self)
    }

    /// Maximal witness set `O` for the iterated-function-system condition, or
    /// `None` when no nonempty witness exists.
    ///
    /// Witnesses are closed under union, so the maximal one is the greatest
    /// fixed point of deleting every `x in D(v) ∩ O` with `v(x)` outside
    /// `(⋃ D) ∩ O`.
    pub fn ifs_witness(&self) -> Option<PointSet> {
        let n = self.n_points();
        let mut in_domain = FixedBitSet::with_capacity(n);
        for m in &self.maps {
            for x in m.domain() {
                in_domain.insert(x);
            }
        }
        let mut o = FixedBitSet::with_capacity(n);
        o.insert_range(..);
        loop {
            let mut changed = false;
            for x in 0..n {
                if !o.contains(x) {
                    continue;
                }
                let bad = self.maps.iter().any(|m| {
                    m.apply(x).is_some_and(|y| !(in_domain.contains(y) && o.contains(y)))
                });
                if bad {
                    o.set(x, false);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let has_image = o.ones().any(|x| self.maps.iter().any(|m| m.apply(x).is_some()));
        has_image.then_some(o)
    }

    /// `(is an IFS, maximal witness)`.
    pub fn check_ifs(&self) -> (bool, Option<PointSet>) {
        let w = self.ifs_witness();
        (w.is_some(), w)
    }

    /// Does `o` satisfy `∅ ≠ ⋃ v(D(v)∩O) ⊂ ⋃ D(v) ∩ O`?
    pub fn satisfies_ifs_condition(&self, o: &PointSet) -> bool {
        let mut images = FixedBitSet::with_capacity(self.n_points());
        let mut dom = FixedBitSet::with_capacity(self.n_points());
        for m in &self.maps {
            for (x, y) in m.pairs() {
                dom.insert(x);
                if o.contains(x) {
                    images.insert(y);
                }
            }
        }
        dom.intersect_with(o);
        images.count_ones(..) > 0 && images.is_subset(&dom)
    }
}

/// Labelled edges `x -(v)-> v(x)` and the set of points admitting an infinite
/// admissible path.
#[derive(Clone, Debug)]
pub struct AdmissibilityGraph {
    /// `succ[x]` lists `(map index, image)` in map order.
    pub succ: Vec<Vec<(usize, usize)>>,
    /// `pred[y]` lists `(map index, source)`.
    pub pred: Vec<Vec<(usize, usize)>>,
    pub infinite_core: PointSet,
}

impl AdmissibilityGraph {
    pub fn build(fs: &FunctionSystem) -> Self {
        let n = fs.n_points();
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for (k, m) in fs.maps.iter().enumerate() {
            for (x, y) in m.pairs() {
                succ[x].push((k, y));
                pred[y].push((k, x));
            }
        }
        // greatest fixed point: drop nodes with no successor left in the core
        let mut core = FixedBitSet::with_capacity(n);
        core.insert_range(..);
        let mut out_deg: Vec<usize> = succ.iter().map(|s| s.len()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&x| out_deg[x] == 0).collect();
        for &x in &stack {
            core.set(x, false);
        }
        while let Some(y) = stack.pop() {
            for &(_, x) in &pred[y] {
                if core.contains(x) {
                    out_deg[x] -= 1;
                    if out_deg[x] == 0 {
                        core.set(x, false);
                        stack.push(x);
                    }
                }
            }
        }
        Self { succ, pred, infinite_core: core }
    }

    pub fn in_core(&self, x: usize) -> bool {
        self.infinite_core.contains(x)
    }

    /// Distinct successors of `x` inside the core, ascending.
    pub fn core_successors(&self, x: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.succ[x]
            .iter()
            .map(|&(_, y)| y)
            .filter(|&y| self.in_core(y))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `{x in core : some core edge x -> y with y in set}`.
    pub fn core_pre(&self, set: &PointSet) -> PointSet {
        let mut out = FixedBitSet::with_capacity(self.succ.len());
        for y in set.ones() {
            for &(_, x) in &self.pred[y] {
                if self.in_core(x) && self.in_core(y) {
                    out.insert(x);
                }
            }
        }
        out
    }

    /// Images of `set ∩ core` along core edges.
    pub fn core_post(&self, set: &PointSet) -> PointSet {
        let mut out = FixedBitSet::with_capacity(self.succ.len());
        for x in set.ones().filter(|&x| self.in_core(x)) {
            for &(_, y) in &self.succ[x] {
                if self.in_core(y) {
                    out.insert(y);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::line;

    #[test]
    fn rejects_non_injective_maps() {
        assert!(PartialMap::new("f", 3, &[(0, 1), (2, 1)]).is_err());
        assert!(PartialMap::new("f", 3, &[]).is_err());
        assert!(PartialMap::new("f", 3, &[(0, 5)]).is_err());
    }

    #[test]
    fn identity_core_and_witness_are_everything() {
        let fs = identity(line(4).unwrap()).unwrap();
        let g = fs.graph();
        assert_eq!(g.infinite_core.count_ones(..), 4);
        assert_eq!(fs.ifs_witness().unwrap().count_ones(..), 4);
    }

    #[test]
    fn single_stray_map_has_no_core_and_no_witness() {
        let fs = FunctionSystem::new(line(2).unwrap(), vec![PartialMap::new("f", 2, &[(0, 1)]).unwrap()]).unwrap();
        assert_eq!(fs.graph().infinite_core.count_ones(..), 0);
        assert!(fs.ifs_witness().is_none());
        assert!(!fs.check_ifs().0);
    }

    #[test]
    fn stray_arrow_feeding_a_cycle() {
        let fs = stray_arrow().unwrap();
        let g = fs.graph();
        assert_eq!(g.infinite_core.ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        let w = fs.ifs_witness().unwrap();
        assert!(w.contains(0) && w.contains(1));
        assert!(fs.satisfies_ifs_condition(&w));
    }
}
