//! Curated example systems with closed-form or structural expectations.

use serde::Serialize;

use crate::complexity::{entropy_estimate, Budget, Mode};
use crate::error::Result;
use crate::gluing::{gop_estimate, pair_sequences, rigidity_deficit, Convention, GopReport};
use crate::ifs::{
    cat_map, disjoint_cycles, doubling_branches, identity, inverse_doubling_branches, power_family,
    rotation, shift_window, stray_arrow, FunctionSystem, PartialMap,
};
use crate::metric::{circle, discrete, glue_realization, line, GhBudget, SeqMetric};
use crate::orbit::SigmaGenerator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Immediate from the definitions.
    Trivial,
    /// Closed-form count or exhaustive enumeration.
    Derived,
}

/// Quantities the acceptance suite knows how to measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Largest fitted rate over the grid.
    Entropy,
    Umdim,
    Lmdim,
    /// 1 when an IFS witness exists.
    IsIfs,
    /// Smallest gap bound found for the gluing property on the first
    /// radius of the grid.
    GopM,
    /// 1 when the gluing search returns a failing sequence.
    GopFails,
    /// Smallest `m` with `v^m` the identity along the constant sequence.
    RigidAt,
}

#[derive(Clone, Debug, Serialize)]
pub struct Expectation {
    pub quantity: Quantity,
    pub value: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize)]
pub struct GallerySystem {
    pub name: String,
    /// Generator call with parameters.
    pub generator: String,
    #[serde(skip)]
    pub fs: FunctionSystem,
    pub n_grid: Vec<usize>,
    pub eps_grid: Vec<f64>,
    #[serde(skip)]
    pub sigmas: Vec<SigmaGenerator>,
    pub expectations: Vec<Expectation>,
}

impl GallerySystem {
    pub fn expect(&self, q: Quantity) -> Option<&Expectation> {
        self.expectations.iter().find(|e| e.quantity == q)
    }

    /// At most five points: usable in exhaustive metric oracles.
    pub fn is_micro(&self) -> bool {
        self.fs.n_points() <= 5
    }
}

fn exp(quantity: Quantity, value: f64, tolerance: f64, provenance: Provenance) -> Expectation {
    Expectation { quantity, value, tolerance, provenance }
}

fn sys(
    name: &str,
    generator: &str,
    fs: FunctionSystem,
    n_grid: &[usize],
    eps_grid: &[f64],
    sigmas: Vec<SigmaGenerator>,
    expectations: Vec<Expectation>,
) -> GallerySystem {
    GallerySystem {
        name: name.into(),
        generator: generator.into(),
        fs,
        n_grid: n_grid.to_vec(),
        eps_grid: eps_grid.to_vec(),
        sigmas,
        expectations,
    }
}

const DYADIC3: [f64; 3] = [0.5, 0.25, 0.125];

/// A rotation of `circle(3)` and the identity on a two-point space, carried
/// into a common metric space by the gluing realization.
pub fn glued_composite() -> Result<FunctionSystem> {
    let parts = [circle(3)?, discrete(2)?];
    let glued = glue_realization(&parts, GhBudget::default())?;
    let n = glued.space.len();
    let rot = &glued.embeddings[0];
    let pairs: Vec<(usize, usize)> = (0..3).map(|i| (rot[i], rot[(i + 1) % 3])).collect();
    let id: Vec<(usize, usize)> = glued.embeddings[1].iter().map(|&p| (p, p)).collect();
    FunctionSystem::new(
        glued.space,
        vec![PartialMap::new("rot", n, &pairs)?, PartialMap::new("id", n, &id)?],
    )
}

pub fn build_gallery() -> Result<Vec<GallerySystem>> {
    use Provenance::*;
    use Quantity::*;
    let ln = |x: f64| x.ln();
    let mut out = Vec::new();

    out.push(sys(
        "identity_line",
        "identity(line(4))",
        identity(line(4)?)?,
        &[1, 2, 3, 4],
        &DYADIC3,
        vec![SigmaGenerator::constant(0)],
        vec![
            exp(Entropy, 0.0, 1e-12, Trivial),
            exp(Umdim, 0.0, 1e-12, Trivial),
            exp(IsIfs, 1.0, 0.0, Trivial),
            exp(RigidAt, 1.0, 0.0, Trivial),
        ],
    ));

    out.push(sys(
        "rotation_circle",
        "rotation(8, 1)",
        rotation(8, 1)?,
        &[1, 2, 4, 8, 9],
        &DYADIC3,
        vec![SigmaGenerator::constant(0)],
        vec![
            exp(Entropy, 0.0, 1e-12, Derived),
            exp(Umdim, 0.0, 1e-12, Derived),
            exp(IsIfs, 1.0, 0.0, Trivial),
            exp(RigidAt, 8.0, 0.0, Derived),
        ],
    ));

    let fs = shift_window(2, 1, SeqMetric::FirstDifference)?;
    let alt = SigmaGenerator::periodic(vec![0, 1, 3, 2])?;
    out.push(sys(
        "full_shift_2",
        "shift_window(2, 1, first_difference)",
        fs,
        &[1, 2, 3, 4, 5, 6],
        &DYADIC3,
        vec![SigmaGenerator::constant(0), alt],
        vec![
            exp(Entropy, ln(2.0), 0.01 * ln(2.0), Derived),
            exp(IsIfs, 1.0, 0.0, Trivial),
            exp(GopM, 1.0, 0.0, Derived),
        ],
    ));

    let fs = shift_window(2, 5, SeqMetric::FirstDifference)?;
    let shift = fs.map_index("shift")?;
    out.push(sys(
        "shift_window_2",
        "shift_window(2, 5, first_difference)",
        fs,
        &[1, 2, 3, 4],
        &[0.5, 0.25, 0.125, 0.0625],
        vec![SigmaGenerator::constant(shift)],
        vec![
            exp(Entropy, ln(2.0), 0.01 * ln(2.0), Derived),
            exp(IsIfs, 1.0, 0.0, Trivial),
        ],
    ));

    let fs = shift_window(3, 3, SeqMetric::FirstDifference)?;
    let shift = fs.map_index("shift")?;
    out.push(sys(
        "shift_window_3",
        "shift_window(3, 3, first_difference)",
        fs,
        &[1, 2, 3],
        &DYADIC3,
        vec![SigmaGenerator::constant(shift)],
        vec![
            exp(Entropy, ln(3.0), 0.01 * ln(3.0), Derived),
            exp(IsIfs, 1.0, 0.0, Trivial),
        ],
    ));

    out.push(sys(
        "grid_shift_8",
        "shift_window(8, 1, levels)",
        shift_window(8, 1, SeqMetric::Levels)?,
        &[1, 2, 3],
        &DYADIC3,
        vec![SigmaGenerator::constant(0), SigmaGenerator::periodic(vec![0, 9])?],
        vec![
            exp(Umdim, 1.0, 0.2, Derived),
            exp(Entropy, ln(8.0), 0.01 * ln(8.0), Derived),
            exp(IsIfs, 1.0, 0.0, Trivial),
        ],
    ));

    out.push(sys(
        "cat_torus",
        "cat_map(3)",
        cat_map(3)?,
        &[1, 2, 3, 4],
        &DYADIC3,
        vec![SigmaGenerator::constant(0)],
        vec![exp(IsIfs, 1.0, 0.0, Trivial)],
    ));

    let cat = cat_map(3)?;
    let fs = power_family(&cat, "cat", 3)?;
    out.push(sys(
        "cat_powers",
        "power_family(cat_map(3), cat, 3)",
        fs,
        &[1, 2, 3],
        &DYADIC3,
        vec![SigmaGenerator::constant(0), SigmaGenerator::constant(1), SigmaGenerator::periodic(vec![0, 2])?],
        vec![exp(IsIfs, 1.0, 0.0, Trivial)],
    ));

    out.push(sys(
        "doubling_branches",
        "doubling_branches(7)",
        doubling_branches(7)?,
        &[1, 2, 3, 4],
        &DYADIC3,
        vec![SigmaGenerator::periodic(vec![0, 1])?],
        vec![exp(IsIfs, 1.0, 0.0, Trivial)],
    ));

    out.push(sys(
        "inverse_doubling",
        "inverse_doubling_branches(7)",
        inverse_doubling_branches(7)?,
        &[1, 2, 3, 4],
        &DYADIC3,
        vec![SigmaGenerator::periodic(vec![0, 1])?],
        vec![exp(IsIfs, 1.0, 0.0, Derived)],
    ));

    out.push(sys(
        "two_cycles",
        "disjoint_cycles(3)",
        disjoint_cycles(3)?,
        &[1, 2, 3, 4],
        &DYADIC3,
        vec![SigmaGenerator::constant(0)],
        vec![
            exp(Entropy, 0.0, 1e-12, Derived),
            exp(IsIfs, 1.0, 0.0, Trivial),
            exp(GopFails, 1.0, 0.0, Derived),
            exp(RigidAt, 3.0, 0.0, Derived),
        ],
    ));

    out.push(sys(
        "glued_composite",
        "glue(rotation(circle(3)), identity(discrete(2)))",
        glued_composite()?,
        &[1, 2, 3, 4],
        &DYADIC3,
        vec![SigmaGenerator::constant(0), SigmaGenerator::constant(1)],
        vec![exp(IsIfs, 1.0, 0.0, Trivial)],
    ));

    out.push(sys(
        "stray_arrow",
        "stray_arrow()",
        stray_arrow()?,
        &[1, 2, 3, 4],
        &DYADIC3,
        vec![SigmaGenerator::periodic(vec![0, 1])?],
        vec![exp(IsIfs, 1.0, 0.0, Derived)],
    ));

    Ok(out)
}

/// Value of `q` on `sys` from the matching estimator, and whether it is
/// certified exact.
pub fn measure(sys: &GallerySystem, q: Quantity, mode: Mode, budget: &Budget) -> Result<(f64, bool)> {
    let fs = &sys.fs;
    let gop = || -> Result<GopReport> {
        let samples = pair_sequences(fs, 2)?;
        gop_estimate(fs, &sys.eps_grid, &samples, 3, Convention::Definition, budget.max_search)
    };
    Ok(match q {
        Quantity::Entropy => {
            let (_, r) = entropy_estimate(fs, &sys.n_grid, &sys.eps_grid, mode, budget)?;
            (r.entropy, r.exact)
        }
        Quantity::Umdim | Quantity::Lmdim => {
            let (_, r) = entropy_estimate(fs, &sys.n_grid, &sys.eps_grid, mode, budget)?;
            let v = if q == Quantity::Umdim { r.umdim } else { r.lmdim };
            (v.unwrap_or(f64::NAN), r.exact)
        }
        Quantity::IsIfs => (fs.check_ifs().0 as u8 as f64, true),
        Quantity::GopM => {
            let r = gop()?;
            let m = r.rows.iter().map(|row| row.m.map_or(f64::INFINITY, |m| m as f64)).fold(0.0, f64::max);
            (m, r.rows.iter().all(|row| row.complete))
        }
        Quantity::GopFails => {
            let r = gop()?;
            (r.rows.iter().any(|row| row.failing_sequence.is_some()) as u8 as f64, true)
        }
        Quantity::RigidAt => {
            let sigma = sys.sigmas.first().cloned().unwrap_or_else(|| SigmaGenerator::constant(0));
            let ms: Vec<usize> = (1..=2 * fs.n_points()).collect();
            let r = rigidity_deficit(fs, &sigma, &ms, fs.space().resolution() / 2.0)?;
            (r.rigid_at.map_or(f64::INFINITY, |m| m as f64), true)
        }
    })
}

pub fn find(name: &str) -> Result<GallerySystem> {
    build_gallery()?
        .into_iter()
        .find(|s| s.name == name)
        .ok_or_else(|| crate::Error::Config(format!("no gallery system named `{name}`")))
}

/// Spaces of the gallery with at most five points.
pub fn micro_spaces() -> Result<Vec<(String, crate::metric::MetricSpace)>> {
    let mut out: Vec<_> = build_gallery()?
        .into_iter()
        .filter(GallerySystem::is_micro)
        .map(|s| (s.name, s.fs.space().clone()))
        .collect();
    out.push(("circle_3".into(), circle(3)?));
    out.push(("circle_5".into(), circle(5)?));
    out.push(("discrete_2".into(), discrete(2)?));
    out.push(("line_5".into(), line(5)?));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gallery_is_well_formed() {
        let g = build_gallery().unwrap();
        assert!(g.len() >= 8);
        for s in &g {
            assert!(s.eps_grid.len() >= 3 && s.eps_grid.iter().all(|&e| e < 1.0), "{}", s.name);
            assert!(s.n_grid.len() >= 2, "{}", s.name);
            assert!(s.fs.space().verify_metric().is_empty(), "{}", s.name);
            for e in &s.expectations {
                assert!(e.tolerance >= 0.0);
            }
        }
        for s in &g {
            for e in &s.expectations {
                let (v, _) = measure(s, e.quantity, Mode::Exact, &Budget::default()).unwrap();
                assert!((v - e.value).abs() <= e.tolerance, "{} {:?}: {v} vs {}", s.name, e.quantity, e.value);
            }
        }
        let mut names: Vec<_> = g.iter().map(|s| s.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), g.len());
    }

    #[test]
    fn glued_composite_keeps_both_parts() {
        let fs = glued_composite().unwrap();
        assert!(fs.n_points() >= 3);
        assert_eq!(fs.maps()[0].pairs().count(), 3);
        assert_eq!(fs.maps()[1].pairs().count(), 2);
    }
}
