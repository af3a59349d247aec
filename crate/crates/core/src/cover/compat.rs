//! Fiber-wise compatibility of labelled maps with covers, and the `F_σ`
//! embedding built from two-set covers.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{alpha_join, Cover};
use crate::error::{Error, Result};
use crate::ifs::{FunctionSystem, PointSet};
use crate::orbit::{evaluate, sigma_sigma_exact, SigmaGenerator};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Compatibility {
    pub compatible: bool,
    /// A fiber contained in no single element.
    pub violating_fiber: Option<Vec<usize>>,
}

/// Is every fiber of `f` on the carrier inside one element of `alpha`?
pub fn compatible<L: Ord>(alpha: &Cover, f: impl Fn(usize) -> L) -> Compatibility {
    let mut fibers: BTreeMap<L, Vec<usize>> = BTreeMap::new();
    for x in alpha.carrier().ones() {
        fibers.entry(f(x)).or_default().push(x);
    }
    for fiber in fibers.into_values() {
        let inside = alpha.elements().iter().any(|e| fiber.iter().all(|&x| e.contains(x)));
        if !inside {
            return Compatibility { compatible: false, violating_fiber: Some(fiber) };
        }
    }
    Compatibility { compatible: true, violating_fiber: None }
}

/// `F_σ(N, ·)` on `Σ_σ`, with the checks on the `w_i`.
#[derive(Clone, Debug, Serialize)]
pub struct FSigma {
    pub carrier: Vec<usize>,
    /// `rN` coordinates per carrier point: `w_1..w_r` at steps `0..N`.
    pub values: Vec<Vec<f64>>,
    /// Human-readable cover defects; nonempty means `w` was not computable.
    pub defects: Vec<String>,
    /// `w_i ∈ [0,1]`, `U_i = {w_i < 1}`, `V_i = {w_i > 0}` on every point.
    pub level_sets_ok: bool,
    pub compatibility: Option<Compatibility>,
}

/// `w(x) = d(x, X-V) / (d(x, X-V) + d(x, X-U))` over the whole space.
pub fn w_values(fs: &FunctionSystem, u: &PointSet, v: &PointSet) -> std::result::Result<Vec<f64>, String> {
    let space = fs.space();
    let n = space.len();
    let comp = |s: &PointSet| (0..n).filter(|&x| !s.contains(x)).collect::<Vec<_>>();
    let (xu, xv) = (comp(u), comp(v));
    if xu.is_empty() || xv.is_empty() {
        return Err("a set of the pair is the whole space, so its complement is empty".into());
    }
    (0..n)
        .map(|x| {
            let a = space.dist_to_set(x, xv.iter().copied());
            let b = space.dist_to_set(x, xu.iter().copied());
            if a + b == 0.0 {
                Err(format!("point {} lies in neither set of the pair", space.label(x)))
            } else {
                Ok(a / (a + b))
            }
        })
        .collect()
}

/// Builds `F_σ(N, ·)` from the pairs `(U_i, V_i)` and checks it against
/// `α_0^{N-1}(σ)` with `α = {U_1, V_1} ∨ ... ∨ {U_r, V_r}`.
pub fn f_sigma_map(fs: &FunctionSystem, sigma: &SigmaGenerator, big_n: usize, pairs: &[(PointSet, PointSet)]) -> Result<FSigma> {
    if big_n == 0 || pairs.is_empty() {
        return Err(Error::Domain("F_σ needs N >= 1 and at least one pair".into()));
    }
    let np = fs.n_points();
    let sig = sigma_sigma_exact(fs, sigma)?;
    let carrier: Vec<usize> = sig.ones().collect();
    let mut defects = Vec::new();
    let mut ws = Vec::new();
    for (i, (u, v)) in pairs.iter().enumerate() {
        match w_values(fs, u, v) {
            Ok(w) => ws.push(w),
            Err(e) => defects.push(format!("pair {i}: {e}")),
        }
    }
    if !defects.is_empty() {
        return Ok(FSigma { carrier, values: vec![], defects, level_sets_ok: false, compatibility: None });
    }
    let level_sets_ok = pairs.iter().zip(&ws).all(|((u, v), w)| {
        (0..np).all(|x| (0.0..=1.0).contains(&w[x]) && (w[x] < 1.0) == u.contains(x) && (w[x] > 0.0) == v.contains(x))
    });
    let mut values = Vec::with_capacity(carrier.len());
    for &x in &carrier {
        let mut row = Vec::with_capacity(pairs.len() * big_n);
        for j in 0..big_n {
            let y = evaluate(fs, x, sigma, j)?.expect("Σ_σ points have full orbits");
            row.extend(ws.iter().map(|w| w[y]));
        }
        values.push(row);
    }
    let mut full = FixedBitSet::with_capacity(np);
    full.insert_range(..);
    let mut alpha = Cover::trivial(full.clone());
    for (i, (u, v)) in pairs.iter().enumerate() {
        let two = Cover::new(full.clone(), vec![(format!("U{i}"), u.clone()), (format!("V{i}"), v.clone())]);
        alpha = alpha.join(&two)?;
    }
    let joined = alpha_join(fs, sigma, &alpha, 0, big_n - 1)?.restrict(&sig);
    let row_of: BTreeMap<usize, Vec<u64>> =
        carrier.iter().zip(&values).map(|(&x, r)| (x, r.iter().map(|w| w.to_bits()).collect())).collect();
    let compatibility = compatible(&joined, |x| row_of[&x].clone());
    Ok(FSigma { carrier, values, defects, level_sets_ok, compatibility: Some(compatibility) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::rotation;

    fn set(n: usize, v: &[usize]) -> PointSet {
        let mut s = FixedBitSet::with_capacity(n);
        v.iter().for_each(|&x| s.insert(x));
        s
    }

    #[test]
    fn fiber_checks() {
        let a = Cover::from_lists(3, &[0, 1, 2], &[&[0, 1, 2]]);
        assert!(compatible(&a, |_| 0).compatible);
        let b = Cover::from_lists(3, &[0, 1, 2], &[&[0], &[1, 2]]);
        assert!(compatible(&b, |x| x).compatible);
        let c = compatible(&b, |x| x == 2);
        assert!(!c.compatible);
        assert_eq!(c.violating_fiber, Some(vec![0, 1]));
    }

    #[test]
    fn whole_space_pair_is_a_defect() {
        let fs = rotation(6, 1).unwrap();
        let all = set(6, &[0, 1, 2, 3, 4, 5]);
        let r = f_sigma_map(&fs, &SigmaGenerator::constant(0), 3, &[(all.clone(), all)]).unwrap();
        assert!(!r.defects.is_empty());
    }

    #[test]
    fn rotation_embedding_is_compatible() {
        let fs = rotation(6, 1).unwrap();
        let u = set(6, &[0, 1, 2, 3]);
        let v = set(6, &[3, 4, 5, 0]);
        let w = w_values(&fs, &u, &v).unwrap();
        assert!(w[1] == 0.0 && w[2] == 0.0 && w[4] == 1.0 && w[5] == 1.0);
        let r = f_sigma_map(&fs, &SigmaGenerator::constant(0), 3, &[(u, v)]).unwrap();
        assert!(r.defects.is_empty() && r.level_sets_ok);
        assert!(r.compatibility.unwrap().compatible);
    }
}
