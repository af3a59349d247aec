//! JSON file formats: system descriptions and run configurations.
//!
//! A system file names a space and a list of maps:
//!
//! ```json
//! {
//!   "space": {"kind": "circle", "n": 12},
//!   "maps": [
//!     {"generator": "rotation(1)"},
//!     {"id": "f", "pairs": [["c0", "c3"], ["c1", "c4"]]}
//!   ]
//! }
//! ```
//!
//! Explicit maps list `[source, image]` label pairs and may repeat their
//! domain under `domain`. Generators: `identity`, `rotation(k)` (circle),
//! `cat_map` (torus grid), `shift` (sequence windows), `doubling_branches` and
//! `inverse_branches(doubling)` (circle of odd size).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::complexity::{Budget, Mode};
use crate::error::{Error, Result};
use crate::gluing::Convention;
use crate::ifs::{
    cat_map, doubling_branches, identity, inverse_doubling_branches, rotation, shift_window, FunctionSystem,
    PartialMap,
};
use crate::metric::{circle, cube_grid, discrete, line, seq_window, torus_grid, MetricSpace, SeqMetric};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    Matrix {
        labels: Vec<String>,
        dist: Vec<Vec<f64>>,
        /// Defaults to the smallest positive distance.
        #[serde(default)]
        resolution: Option<f64>,
    },
    Line { n: usize },
    Circle { n: usize },
    Discrete { n: usize },
    TorusGrid { m: usize },
    CubeGrid { m: usize, dim: usize },
    SeqWindow { q: usize, len: usize, metric: SeqMetric },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<MetricSpace> {
        match self {
            SpaceSpec::Matrix { labels, dist, resolution } => {
                let res = resolution.unwrap_or_else(|| {
                    dist.iter().flatten().copied().filter(|&d| d > 0.0).fold(f64::INFINITY, f64::min)
                });
                let res = if res.is_finite() { res } else { 1.0 };
                MetricSpace::new(labels.clone(), dist.clone(), res)
            }
            SpaceSpec::Line { n } => line(*n),
            SpaceSpec::Circle { n } => circle(*n),
            SpaceSpec::Discrete { n } => discrete(*n),
            SpaceSpec::TorusGrid { m } => torus_grid(*m),
            SpaceSpec::CubeGrid { m, dim } => cube_grid(*m, *dim),
            SpaceSpec::SeqWindow { q, len, metric } => seq_window(*q, *len, *metric),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSpec {
    Generator {
        generator: String,
    },
    Explicit {
        id: String,
        #[serde(default)]
        domain: Option<Vec<String>>,
        pairs: Vec<(String, String)>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub space: SpaceSpec,
    pub maps: Vec<MapSpec>,
}

fn generator_arg(g: &str, name: &str) -> Option<Option<String>> {
    let rest = g.trim().strip_prefix(name)?;
    if rest.is_empty() {
        return Some(None);
    }
    rest.strip_prefix('(')?.strip_suffix(')').map(|a| Some(a.trim().to_string()))
}

fn expand_generator(space: &SpaceSpec, g: &str) -> Result<Vec<PartialMap>> {
    let bad_space = || Error::Config(format!("generator `{g}` does not apply to the space {space:?}"));
    if generator_arg(g, "identity").is_some() {
        let built = identity(space.build()?)?;
        return Ok(built.maps().to_vec());
    }
    if let Some(arg) = generator_arg(g, "rotation") {
        let k: usize = arg
            .unwrap_or_else(|| "1".into())
            .parse()
            .map_err(|_| Error::Config(format!("bad rotation step in `{g}`")))?;
        let SpaceSpec::Circle { n } = space else { return Err(bad_space()) };
        return Ok(rotation(*n, k)?.maps().to_vec());
    }
    if generator_arg(g, "cat_map").is_some() {
        let SpaceSpec::TorusGrid { m } = space else { return Err(bad_space()) };
        return Ok(cat_map(*m)?.maps().to_vec());
    }
    if generator_arg(g, "shift").is_some() {
        let SpaceSpec::SeqWindow { q, len, metric } = space else { return Err(bad_space()) };
        return Ok(shift_window(*q, *len, *metric)?.maps().to_vec());
    }
    if generator_arg(g, "doubling_branches").is_some() {
        let SpaceSpec::Circle { n } = space else { return Err(bad_space()) };
        return Ok(doubling_branches(*n)?.maps().to_vec());
    }
    if generator_arg(g, "inverse_branches") == Some(Some("doubling".into())) {
        let SpaceSpec::Circle { n } = space else { return Err(bad_space()) };
        return Ok(inverse_doubling_branches(*n)?.maps().to_vec());
    }
    Err(Error::Config(format!("unknown map generator `{g}`")))
}

impl SystemFile {
    pub fn build(&self) -> Result<FunctionSystem> {
        let space = self.space.build()?;
        let mut maps = Vec::new();
        for m in &self.maps {
            match m {
                MapSpec::Generator { generator } => maps.extend(expand_generator(&self.space, generator)?),
                MapSpec::Explicit { id, domain, pairs } => {
                    let idx = |l: &str| {
                        space
                            .index_of(l)
                            .ok_or_else(|| Error::Config(format!("map `{id}` names unknown point `{l}`")))
                    };
                    let p = pairs.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>>>()?;
                    if let Some(dom) = domain {
                        let mut d = dom.iter().map(|l| idx(l)).collect::<Result<Vec<_>>>()?;
                        let mut src: Vec<usize> = p.iter().map(|x| x.0).collect();
                        d.sort_unstable();
                        d.dedup();
                        src.sort_unstable();
                        src.dedup();
                        if d != src {
                            return Err(Error::Config(format!("map `{id}`: domain does not match the pair sources")));
                        }
                    }
                    maps.push(PartialMap::new(id.clone(), space.len(), &p)?);
                }
            }
        }
        FunctionSystem::new(space, maps)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Where the system of a run comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemRef {
    Gallery { gallery: String },
    Path { path: PathBuf },
    Inline(SystemFile),
}

impl SystemRef {
    pub fn describe(&self) -> String {
        match self {
            SystemRef::Gallery { gallery } => format!("gallery:{gallery}"),
            SystemRef::Path { path } => format!("file:{}", path.display()),
            SystemRef::Inline(_) => "inline".into(),
        }
    }
}

/// Segment of an orbit sequence in a configuration: point label, sequence in
/// the syntax of [`crate::SigmaGenerator::parse`] and length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub x: String,
    pub sigma: String,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracerSpec {
    pub z: String,
    /// Map ids applied from `z`.
    pub symbols: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SampleSpec {
    /// All two-segment sequences with segment lengths up to `m`.
    Pairs { m: usize },
    /// Seeded random sequences.
    Random { count: usize, segments: usize, max_len: usize },
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec::Pairs { m: 2 }
    }
}

fn default_curve() -> usize {
    16
}
fn default_m_max() -> usize {
    4
}
fn default_gh_points() -> usize {
    8
}

/// One analysis of a run, with its own parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "analysis", rename_all = "snake_case", deny_unknown_fields)]
pub enum Analysis {
    Check,
    Entropy {
        #[serde(default)]
        with_spanning: bool,
    },
    Mmdim,
    Mdim {
        /// Ball radii of the cover ladder; defaults to the radius grid.
        #[serde(default)]
        radii: Vec<f64>,
        /// Diameter floor of the pool; defaults to the space resolution.
        #[serde(default)]
        floor: Option<f64>,
    },
    Ocap {
        set: Vec<String>,
        #[serde(default = "default_curve")]
        curve_len: usize,
    },
    Sbp {
        delta: f64,
        radii: Vec<f64>,
        /// Point labels; all points when empty.
        #[serde(default)]
        points: Vec<String>,
    },
    Gop {
        #[serde(default = "default_m_max")]
        m_max: usize,
        #[serde(default)]
        samples: SampleSpec,
        #[serde(default)]
        convention: Convention,
    },
    Trace {
        segments: Vec<SegmentSpec>,
        eps: f64,
        #[serde(default = "default_m_max")]
        m_max: usize,
        #[serde(default)]
        convention: Convention,
        /// Explicit gap and tracer to verify instead of searching.
        #[serde(default)]
        gap: Option<Vec<usize>>,
        #[serde(default)]
        tracer: Option<TracerSpec>,
    },
    Theorem1 {
        #[serde(default)]
        floor: Option<f64>,
    },
    Theorem3 {
        sigma: String,
        p: String,
        eps: f64,
        m_gop: usize,
        big_n: usize,
        scan_horizon: usize,
        #[serde(default)]
        convention: Convention,
        /// Also estimate the entropy on the run grids for comparison.
        #[serde(default)]
        compare_entropy: bool,
    },
    Gh {
        other: SystemRef,
        #[serde(default = "default_gh_points")]
        max_points: usize,
    },
    Gallery,
}

impl Analysis {
    pub fn name(&self) -> &'static str {
        match self {
            Analysis::Check => "check",
            Analysis::Entropy { .. } => "entropy",
            Analysis::Mmdim => "mmdim",
            Analysis::Mdim { .. } => "mdim",
            Analysis::Ocap { .. } => "ocap",
            Analysis::Sbp { .. } => "sbp",
            Analysis::Gop { .. } => "gop",
            Analysis::Trace { .. } => "trace",
            Analysis::Theorem1 { .. } => "theorem1",
            Analysis::Theorem3 { .. } => "theorem3",
            Analysis::Gh { .. } => "gh",
            Analysis::Gallery => "gallery",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetSpec {
    pub max_nodes: usize,
    pub max_search: usize,
}

impl Default for BudgetSpec {
    fn default() -> Self {
        let b = Budget::default();
        Self { max_nodes: b.max_nodes, max_search: b.max_search }
    }
}

impl From<&BudgetSpec> for Budget {
    fn from(b: &BudgetSpec) -> Self {
        Budget { max_nodes: b.max_nodes, max_search: b.max_search }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub system: Option<SystemRef>,
    /// Horizons; gallery systems supply their own when absent.
    #[serde(default)]
    pub n_grid: Vec<usize>,
    #[serde(default)]
    pub eps_grid: Vec<f64>,
    /// Sampled sequences for orbit quantities.
    #[serde(default)]
    pub sigmas: Vec<String>,
    #[serde(default)]
    pub mode: String,
    #[serde(default)]
    pub budget: BudgetSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub analyses: Vec<Analysis>,
}

impl RunConfig {
    pub fn new(system: Option<SystemRef>, analysis: Analysis) -> Self {
        Self {
            system,
            n_grid: vec![],
            eps_grid: vec![],
            sigmas: vec![],
            mode: String::new(),
            budget: BudgetSpec::default(),
            seed: 0,
            output_dir: None,
            analyses: vec![analysis],
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn mode(&self) -> Result<Mode> {
        if self.mode.is_empty() {
            Ok(Mode::default())
        } else {
            self.mode.parse()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_and_explicit_maps() {
        let text = r#"{
            "space": {"kind": "circle", "n": 6},
            "maps": [
                {"generator": "rotation(2)"},
                {"id": "f", "domain": ["c0"], "pairs": [["c0", "c3"]]}
            ]
        }"#;
        let sys: SystemFile = serde_json::from_str(text).unwrap();
        let fs = sys.build().unwrap();
        assert_eq!(fs.maps().len(), 2);
        assert_eq!(fs.apply(0, 0), Some(2));
        assert_eq!(fs.apply(1, 0), Some(3));
        assert_eq!(fs.apply(1, 1), None);
    }

    #[test]
    fn rejects_mismatched_domain_and_bad_generator() {
        let sys = SystemFile {
            space: SpaceSpec::Line { n: 3 },
            maps: vec![MapSpec::Explicit {
                id: "f".into(),
                domain: Some(vec!["p1".into()]),
                pairs: vec![("p0".into(), "p1".into())],
            }],
        };
        assert!(sys.build().is_err());
        let sys = SystemFile { space: SpaceSpec::Line { n: 3 }, maps: vec![MapSpec::Generator { generator: "cat_map".into() }] };
        assert!(matches!(sys.build(), Err(Error::Config(_))));
    }

    #[test]
    fn run_config_round_trip() {
        let text = r#"{
            "system": {"gallery": "full_shift_2"},
            "seed": 7,
            "analyses": [{"analysis": "entropy"}, {"analysis": "gop", "m_max": 2}]
        }"#;
        let c: RunConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.analyses[1].name(), "gop");
        let back: RunConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
