//! Partitions of unity with small boundary region, and the map `f_N`.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{max_cycle_mean, ratio_string, CapacityTable, Rational};
use crate::cover::{alpha_join, compatible, Compatibility, Cover};
use crate::error::{Error, Result};
use crate::ifs::{FunctionSystem, PointSet};
use crate::orbit::{orbit_trace, sigma_sigma_exact, SigmaGenerator};
use crate::{approx_eq, lt};

#[derive(Clone, Debug, Serialize)]
pub struct PremiseViolation {
    pub pair: usize,
    pub point: Option<String>,
    pub detail: String,
}

/// `φ_j` on every point of the space, for pairs `(U_j, V_j)`.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionOfUnity {
    #[serde(skip)]
    pub pairs: Vec<(PointSet, PointSet)>,
    pub delta: f64,
    /// `phi[j][x]`.
    pub phi: Vec<Vec<f64>>,
    /// Points of `Σ_σ`.
    pub carrier: Vec<usize>,
    /// `⋃_j φ_j^{-1}(0, 1)`.
    #[serde(serialize_with = "ser_set")]
    pub boundary_region: PointSet,
}

fn ser_set<S: serde::Serializer>(v: &PointSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.ones())
}

#[derive(Clone, Debug, Serialize)]
pub struct LsbpCertificate {
    pub premises: Vec<PremiseViolation>,
    /// Largest `|Σ_j φ_j(x) - 1|` over the carrier.
    pub max_sum_error: f64,
    pub sum_to_one: bool,
    pub subordinate: bool,
    /// `max_x (1/N) Σ_{i<N} 1_A(v^{σ(i)} x)` over the carrier.
    pub horizon_capacity: String,
    pub below_eps: bool,
    /// `max_x cap(N, x, A)` over all sequences, and `ocap(A)`, for reference.
    pub cap_n: Option<String>,
    pub ocap: Option<String>,
    pub ok: bool,
}

fn visits_along(fs: &FunctionSystem, sigma: &SigmaGenerator, x: usize, n: usize, a: &PointSet, from: usize) -> Result<usize> {
    let t = orbit_trace(fs, x, sigma, n)?.expect("Σ_σ points have full orbits");
    Ok(t[from..].iter().filter(|&&y| a.contains(y)).count())
}

/// Builds `ψ_j` and `φ_j` for the pairs and certifies the result. Premise
/// failures are reported in the certificate; the construction still runs.
pub fn lsbp_partition(
    fs: &FunctionSystem,
    sigma: &SigmaGenerator,
    pairs: &[(PointSet, PointSet)],
    eps: f64,
    big_n: usize,
    delta: f64,
) -> Result<(PartitionOfUnity, LsbpCertificate)> {
    if pairs.is_empty() || big_n == 0 || !(eps > 0.0) || !(delta > 0.0) {
        return Err(Error::Domain("partition needs pairs, N >= 1, eps > 0 and delta > 0".into()));
    }
    let space = fs.space();
    let np = space.len();
    let carrier: Vec<usize> = sigma_sigma_exact(fs, sigma)?.ones().collect();
    let label = |x: usize| Some(space.label(x).to_string());
    let mut premises = Vec::new();

    let mut bands = Vec::new();
    for (j, (u, v)) in pairs.iter().enumerate() {
        if let Some(x) = v.ones().find(|&x| !u.contains(x)) {
            premises.push(PremiseViolation { pair: j, point: label(x), detail: "V_j is not inside U_j".into() });
        }
        let mut band = FixedBitSet::with_capacity(np);
        for y in (0..np).filter(|&y| !v.contains(y)) {
            if lt(space.dist_to_set(y, v.ones()), delta) {
                band.insert(y);
            }
        }
        if let Some(y) = band.ones().find(|&y| !u.contains(y)) {
            premises.push(PremiseViolation { pair: j, point: label(y), detail: "the δ-band of V_j leaves U_j".into() });
        }
        for &x in &carrier {
            let hits = visits_along(fs, sigma, x, big_n, &band, 0)?;
            if !lt(hits as f64 / big_n as f64, eps / pairs.len() as f64) {
                premises.push(PremiseViolation {
                    pair: j,
                    point: label(x),
                    detail: format!("orbit spends {hits}/{big_n} steps in the δ-band"),
                });
                break;
            }
        }
        bands.push(band);
    }
    if let Some(&x) = carrier.iter().find(|&&x| !pairs.iter().any(|(_, v)| v.contains(x))) {
        premises.push(PremiseViolation { pair: 0, point: label(x), detail: "the V_j do not cover Σ_σ".into() });
    }

    let psi: Vec<Vec<f64>> = pairs
        .iter()
        .map(|(_, v)| {
            (0..np)
                .map(|x| if v.contains(x) { 1.0 } else { (1.0 - space.dist_to_set(x, v.ones()) / delta).max(0.0) })
                .collect()
        })
        .collect();
    let mut phi: Vec<Vec<f64>> = Vec::with_capacity(pairs.len());
    for (j, p) in psi.iter().enumerate() {
        let row = (0..np)
            .map(|x| {
                let used: f64 = phi.iter().map(|f| f[x]).sum();
                if j == 0 { p[x] } else { p[x].min(1.0 - used) }
            })
            .collect();
        phi.push(row);
    }
    let mut region = FixedBitSet::with_capacity(np);
    for f in &phi {
        for x in 0..np {
            if f[x] > 0.0 && f[x] < 1.0 {
                region.insert(x);
            }
        }
    }

    let max_sum_error = carrier
        .iter()
        .map(|&x| (phi.iter().map(|f| f[x]).sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let sum_to_one = approx_eq(max_sum_error, 0.0);
    let subordinate = pairs.iter().zip(&phi).all(|((u, _), f)| (0..np).all(|x| f[x] <= 0.0 || u.contains(x)));
    let mut worst = 0;
    for &x in &carrier {
        worst = worst.max(visits_along(fs, sigma, x, big_n, &region, 0)?);
    }
    let horizon = Rational::new(worst as i64, big_n as i64);
    let below_eps = lt(worst as f64 / big_n as f64, eps);
    let graph = fs.graph();
    let cap_n = CapacityTable::build(&graph, &region, big_n).sup(big_n).map(|r| ratio_string(&r));
    let ocap = max_cycle_mean(&graph, &region).map(|r| ratio_string(&r));
    let ok = premises.is_empty() && sum_to_one && subordinate && below_eps;
    let cert = LsbpCertificate {
        premises,
        max_sum_error,
        sum_to_one,
        subordinate,
        horizon_capacity: ratio_string(&horizon),
        below_eps,
        cap_n,
        ocap,
        ok,
    };
    Ok((PartitionOfUnity { pairs: pairs.to_vec(), delta, phi, carrier, boundary_region: region }, cert))
}

#[derive(Clone, Debug, Serialize)]
pub struct T2Report {
    pub compatibility: Compatibility,
    /// Per carrier point, how many coordinates of `f_N(x)` lie in `(0, 1)`.
    pub open_counts: Vec<usize>,
    pub max_open: usize,
    /// `ε N |α|`.
    pub budget: f64,
    pub within_budget: bool,
    /// `max_x (1/N) Σ_{0<i<N} 1_A(v^{σ(i)} x)`.
    pub visit_fraction: String,
    pub visits_below_eps: bool,
}

/// `f_N(x) = (Φ(x), Φ(v^{σ(1)}x), ..., Φ(v^{σ(N-1)}x))` on `Σ_σ`, checked for
/// compatibility with `α_0^{N-1}(σ)`, `α = {U_j}`.
pub fn t2_map(fs: &FunctionSystem, sigma: &SigmaGenerator, p: &PartitionOfUnity, big_n: usize, eps: f64) -> Result<T2Report> {
    if big_n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let np = fs.n_points();
    let k = p.pairs.len();
    let mut rows: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    let mut open_counts = Vec::new();
    let mut worst = 0;
    for &x in &p.carrier {
        let t = orbit_trace(fs, x, sigma, big_n)?.expect("Σ_σ points have full orbits");
        let row: Vec<f64> = t.iter().flat_map(|&y| p.phi.iter().map(move |f| f[y])).collect();
        open_counts.push(row.iter().filter(|&&w| w > 0.0 && w < 1.0).count());
        rows.insert(x, row.iter().map(|w| w.to_bits()).collect());
        worst = worst.max(t[1..].iter().filter(|&&y| p.boundary_region.contains(y)).count());
    }
    let mut full = FixedBitSet::with_capacity(np);
    full.insert_range(..);
    let alpha = Cover::new(full, p.pairs.iter().enumerate().map(|(j, (u, _))| (format!("U{j}"), u.clone())).collect());
    let mut carrier = FixedBitSet::with_capacity(np);
    p.carrier.iter().for_each(|&x| carrier.insert(x));
    let joined = alpha_join(fs, sigma, &alpha, 0, big_n - 1)?.restrict(&carrier);
    let compatibility = compatible(&joined, |x| rows[&x].clone());
    let max_open = open_counts.iter().copied().max().unwrap_or(0);
    let budget = eps * big_n as f64 * k as f64;
    Ok(T2Report {
        compatibility,
        max_open,
        within_budget: lt(max_open as f64, budget),
        budget,
        open_counts,
        visit_fraction: ratio_string(&Rational::new(worst as i64, big_n as i64)),
        visits_below_eps: lt(worst as f64 / big_n as f64, eps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::rotation;

    fn set(n: usize, v: impl IntoIterator<Item = usize>) -> PointSet {
        let mut s = FixedBitSet::with_capacity(n);
        v.into_iter().for_each(|x| s.insert(x));
        s
    }

    #[test]
    fn single_pair_is_constant() {
        let fs = rotation(6, 1).unwrap();
        let all = set(6, 0..6);
        let s = SigmaGenerator::constant(0);
        let (p, c) = lsbp_partition(&fs, &s, &[(all.clone(), all)], 0.5, 6, 1.0 / 6.0).unwrap();
        assert!(c.ok && p.boundary_region.is_clear());
        assert!(p.phi[0].iter().all(|&v| v == 1.0));
        let t = t2_map(&fs, &s, &p, 4, 0.5).unwrap();
        assert!(t.compatibility.compatible && t.max_open == 0);
    }

    #[test]
    fn two_arcs_on_twelve_points() {
        let fs = rotation(12, 1).unwrap();
        let s = SigmaGenerator::constant(0);
        let pairs = vec![
            (set(12, 0..8), set(12, 1..7)),
            (set(12, (6..12).chain([0, 1])), set(12, (7..12).chain([0]))),
        ];
        let (p, c) = lsbp_partition(&fs, &s, &pairs, 0.5, 12, 2.0 / 12.0).unwrap();
        assert!(c.ok, "{c:?}");
        assert_eq!(p.boundary_region.ones().collect::<Vec<_>>(), vec![0, 7]);
        assert_eq!(c.horizon_capacity, "1/6");
        let t = t2_map(&fs, &s, &p, 12, 0.5).unwrap();
        assert!(t.compatibility.compatible);
        assert_eq!(t.max_open, 4);
        assert!(t.within_budget && t.visits_below_eps);
    }
}
