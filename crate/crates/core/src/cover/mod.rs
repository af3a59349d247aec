//! Finite covers of point sets: order, join, pullback along a sequence,
//! refinement, the pool-restricted refinement minimum and compatibility.

mod compat;
mod refine;

pub use compat::{compatible, f_sigma_map, Compatibility, FSigma};
pub use refine::{d_of, mdim_estimate, DResult, MdimReport, MdimRow, RefinementPool};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::ifs::{FunctionSystem, PointSet};
use crate::metric::MetricSpace;
use crate::orbit::{evaluate, SigmaGenerator};

/// Labelled subsets of a carrier. Elements are stored intersected with the
/// carrier, without empties or duplicate sets.
#[derive(Clone, Debug)]
pub struct Cover {
    carrier: PointSet,
    elements: Vec<PointSet>,
    labels: Vec<String>,
}

fn set_of(n: usize, pts: impl IntoIterator<Item = usize>) -> PointSet {
    let mut s = FixedBitSet::with_capacity(n);
    for p in pts {
        s.insert(p);
    }
    s
}

impl Cover {
    pub fn new(carrier: PointSet, elements: Vec<(String, PointSet)>) -> Self {
        let mut c = Cover { carrier, elements: vec![], labels: vec![] };
        for (l, mut e) in elements {
            e.grow(c.carrier.len());
            e.intersect_with(&c.carrier);
            if e.is_clear() {
                continue;
            }
            if !c.elements.contains(&e) {
                c.elements.push(e);
                c.labels.push(l);
            }
        }
        c
    }

    /// Convenience constructor from index lists.
    pub fn from_lists(n: usize, carrier: &[usize], elements: &[&[usize]]) -> Self {
        let els = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (format!("U{i}"), set_of(n, e.iter().copied())))
            .collect();
        Self::new(set_of(n, carrier.iter().copied()), els)
    }

    /// `{carrier}`.
    pub fn trivial(carrier: PointSet) -> Self {
        let e = carrier.clone();
        Self::new(carrier, vec![("X".into(), e)])
    }

    /// Open balls `B(x, r)` around every carrier point.
    pub fn balls(space: &MetricSpace, carrier: PointSet, r: f64) -> Self {
        let n = space.len();
        let els = carrier
            .ones()
            .map(|x| (format!("B({})", space.label(x)), set_of(n, (0..n).filter(|&y| crate::lt(space.d(x, y), r)))))
            .collect();
        Self::new(carrier, els)
    }

    pub fn carrier(&self) -> &PointSet {
        &self.carrier
    }

    pub fn elements(&self) -> &[PointSet] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Membership count of every carrier point.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        self.carrier
            .ones()
            .map(|x| (x, self.elements.iter().filter(|e| e.contains(x)).count()))
            .collect()
    }

    pub fn uncovered(&self) -> Vec<usize> {
        self.multiplicities().into_iter().filter(|&(_, m)| m == 0).map(|(x, _)| x).collect()
    }

    pub fn covers(&self) -> bool {
        self.uncovered().is_empty()
    }

    /// `ord(α) = max_x #{U : x in U} - 1`; 0 on an empty carrier.
    pub fn order(&self) -> Result<usize> {
        if let Some(x) = self.uncovered().first() {
            return Err(Error::Domain(format!("carrier point #{x} is not covered")));
        }
        Ok(self.multiplicities().into_iter().map(|(_, m)| m).max().unwrap_or(1) - 1)
    }

    /// Same carrier, restricted further.
    pub fn restrict(&self, carrier: &PointSet) -> Self {
        let mut c = self.carrier.clone();
        c.intersect_with(carrier);
        Self::new(c, self.labels.iter().cloned().zip(self.elements.iter().cloned()).collect())
    }

    /// `α ∨ β`: nonempty pairwise intersections.
    pub fn join(&self, other: &Cover) -> Result<Cover> {
        if self.carrier != other.carrier {
            return Err(Error::Domain("join needs covers of the same carrier".into()));
        }
        let mut els = Vec::new();
        for (a, la) in self.elements.iter().zip(&self.labels) {
            for (b, lb) in other.elements.iter().zip(&other.labels) {
                let mut e = a.clone();
                e.intersect_with(b);
                els.push((format!("{la}∧{lb}"), e));
            }
        }
        Ok(Cover::new(self.carrier.clone(), els))
    }

    /// Every element of `self` lies inside some element of `coarser`.
    pub fn refines(&self, coarser: &Cover) -> bool {
        self.elements.iter().all(|b| coarser.elements.iter().any(|a| b.is_subset(a)))
    }

    /// Element sets sorted, for comparison as families.
    pub fn family(&self) -> Vec<Vec<usize>> {
        let mut f: Vec<Vec<usize>> = self.elements.iter().map(|e| e.ones().collect()).collect();
        f.sort();
        f
    }

    pub fn same_family(&self, other: &Cover) -> bool {
        self.carrier == other.carrier && self.family() == other.family()
    }
}

/// `v^{-σ(n)} α`, restricted to `{x : v^{σ(n)}(x) defined and in the carrier
/// of α}`. `n = 0` returns `α`.
pub fn pullback(fs: &FunctionSystem, sigma: &SigmaGenerator, n: usize, alpha: &Cover) -> Result<Cover> {
    let np = fs.n_points();
    let mut image = vec![None; np];
    let mut carrier = FixedBitSet::with_capacity(np);
    for (x, slot) in image.iter_mut().enumerate() {
        if let Some(y) = evaluate(fs, x, sigma, n)? {
            if alpha.carrier.contains(y) {
                carrier.insert(x);
                *slot = Some(y);
            }
        }
    }
    let els = alpha
        .elements
        .iter()
        .zip(&alpha.labels)
        .map(|(u, l)| {
            let pre = set_of(np, (0..np).filter(|&x| image[x].is_some_and(|y| u.contains(y))));
            let label = if n == 0 { l.clone() } else { format!("σ{n}^-1({l})") };
            (label, pre)
        })
        .collect();
    Ok(Cover::new(carrier, els))
}

/// `α_a^b(σ) = v^{-σ(a)}α ∨ ... ∨ v^{-σ(b)}α` on the common carrier of the
/// pullbacks.
pub fn alpha_join(fs: &FunctionSystem, sigma: &SigmaGenerator, alpha: &Cover, a: usize, b: usize) -> Result<Cover> {
    if b < a {
        return Err(Error::Domain(format!("empty index range {a}..={b}")));
    }
    let pulls = (a..=b).map(|j| pullback(fs, sigma, j, alpha)).collect::<Result<Vec<_>>>()?;
    let mut carrier = pulls[0].carrier.clone();
    for p in &pulls[1..] {
        carrier.intersect_with(&p.carrier);
    }
    let mut acc = pulls[0].restrict(&carrier);
    for p in &pulls[1..] {
        acc = acc.join(&p.restrict(&carrier))?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{identity, rotation};
    use crate::metric::line;

    #[test]
    fn order_of_simple_covers() {
        let part = Cover::from_lists(4, &[0, 1, 2, 3], &[&[0, 1], &[2, 3]]);
        assert_eq!(part.order().unwrap(), 0);
        let shared = Cover::from_lists(4, &[0, 1, 2, 3], &[&[0, 1, 2], &[2, 3]]);
        assert_eq!(shared.order().unwrap(), 1);
        let gap = Cover::from_lists(4, &[0, 1, 2, 3], &[&[0, 1]]);
        assert!(gap.order().is_err());
    }

    #[test]
    fn join_with_trivial_cover() {
        let a = Cover::from_lists(4, &[0, 1, 2, 3], &[&[0, 1], &[1, 2, 3]]);
        let t = Cover::trivial(a.carrier().clone());
        assert!(a.join(&t).unwrap().same_family(&a));
        let b = Cover::from_lists(4, &[0, 1, 2, 3], &[&[0, 3], &[1, 2]]);
        assert!(a.join(&b).unwrap().same_family(&b.join(&a).unwrap()));
    }

    #[test]
    fn pullbacks() {
        let fs = identity(line(3).unwrap()).unwrap();
        let a = Cover::from_lists(3, &[0, 1, 2], &[&[0, 1], &[2]]);
        let s = SigmaGenerator::constant(0);
        assert!(pullback(&fs, &s, 4, &a).unwrap().same_family(&a));

        let fs = rotation(4, 1).unwrap();
        let a = Cover::from_lists(4, &[0, 1, 2, 3], &[&[0, 1], &[2, 3]]);
        let p = pullback(&fs, &s, 1, &a).unwrap();
        assert_eq!(p.family(), vec![vec![0, 3], vec![1, 2]]);
        let j = alpha_join(&fs, &s, &a, 0, 1).unwrap();
        assert_eq!(j.family(), vec![vec![0], vec![1], vec![2], vec![3]]);
    }
}
