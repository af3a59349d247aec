//! Runs the analyses of a [`RunConfig`] and assembles CSV tables, plot series
//! and a JSON summary.
//!
//! Exit codes: 0 on success, 2 when a declared invariant is violated (metric
//! axioms, count-grid sandwich and monotonicity, the estimator chain, gallery
//! expectations, separation of constructed tracers), 1 on usage or
//! configuration errors.

use std::path::Path;

use fixedbitset::FixedBitSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::capacity::{ocap, ratio_string, sbp_check};
use crate::complexity::{count_grid, mmdim_estimate, rate_report, Budget, CountGrid, Mode};
use crate::config::{Analysis, RunConfig, SampleSpec, SystemFile, SystemRef, SCHEMA_VERSION};
use crate::cover::{mdim_estimate, Cover};
use crate::error::{Error, Result};
use crate::gallery::{self, GallerySystem};
use crate::gluing::{
    check_trace, find_trace, gop_estimate, pair_sequences, random_sequences, theorem3_construct, Gap, OrbitSequence,
    Segment, Theorem3Outcome, Theorem3Params, Tracer,
};
use crate::ifs::{FunctionSystem, PointSet};
use crate::metric::{gh_distance, GhBudget, MetricSpace};
use crate::orbit::SigmaGenerator;
use crate::le;

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows: vec![] }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Two-column x-y series.
#[derive(Clone, Debug, Serialize)]
pub struct Plot {
    pub name: String,
    pub x: String,
    pub y: String,
    pub points: Vec<(f64, f64)>,
}

impl Plot {
    pub fn to_csv(&self) -> Result<String> {
        let t = Table {
            name: self.name.clone(),
            header: vec![self.x.clone(), self.y.clone()],
            rows: self.points.iter().map(|(x, y)| vec![num(*x), num(*y)]).collect(),
        };
        t.to_csv()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub analysis: String,
    pub result: Value,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct ReportBundle {
    pub system: String,
    pub seed: u64,
    pub sections: Vec<Section>,
    pub tables: Vec<Table>,
    pub plots: Vec<Plot>,
}

impl ReportBundle {
    pub fn violations(&self) -> usize {
        self.sections.iter().map(|s| s.violations.len()).sum()
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations() > 0 {
            2
        } else {
            0
        }
    }

    pub fn summary(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "system": self.system,
            "seed": self.seed,
            "status": if self.violations() > 0 { "violated" } else { "ok" },
            "violations": self.violations(),
            "sections": self.sections,
            "tables": self.tables.iter().map(|t| format!("{}.csv", t.name)).collect::<Vec<_>>(),
            "plots": self.plots.iter().map(|p| format!("plot_{}.csv", p.name)).collect::<Vec<_>>(),
        })
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serializes") + "\n"
    }

    /// Writes `summary.json`, one CSV per table and `plot_<name>.csv` per
    /// series.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("summary.json"), self.summary_json())?;
        for t in &self.tables {
            std::fs::write(dir.join(format!("{}.csv", t.name)), t.to_csv()?)?;
        }
        for p in &self.plots {
            std::fs::write(dir.join(format!("plot_{}.csv", p.name)), p.to_csv()?)?;
        }
        Ok(())
    }
}

/// Exit code for an error that stopped a run.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidModel(_) => 2,
        _ => 1,
    }
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// A loaded system with the defaults it brings along.
pub struct Loaded {
    pub name: String,
    pub fs: FunctionSystem,
    pub gallery: Option<GallerySystem>,
}

pub fn load_system(r: &SystemRef) -> Result<Loaded> {
    Ok(match r {
        SystemRef::Gallery { gallery: name } => {
            let g = gallery::find(name)?;
            Loaded { name: r.describe(), fs: g.fs.clone(), gallery: Some(g) }
        }
        SystemRef::Path { path } => Loaded { name: r.describe(), fs: SystemFile::load(path)?.build()?, gallery: None },
        SystemRef::Inline(s) => Loaded { name: r.describe(), fs: s.build()?, gallery: None },
    })
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    fs: &'a FunctionSystem,
    n_grid: Vec<usize>,
    eps_grid: Vec<f64>,
    sigmas: Vec<SigmaGenerator>,
    mode: Mode,
    budget: Budget,
}

#[derive(Default)]
struct Output {
    result: Value,
    violations: Vec<String>,
    tables: Vec<Table>,
    plots: Vec<Plot>,
}

fn point(fs: &FunctionSystem, label: &str) -> Result<usize> {
    fs.space().index_of(label).ok_or_else(|| Error::Config(format!("unknown point `{label}`")))
}

fn point_set(fs: &FunctionSystem, labels: &[String]) -> Result<PointSet> {
    let mut s = FixedBitSet::with_capacity(fs.n_points());
    for l in labels {
        s.insert(point(fs, l)?);
    }
    Ok(s)
}

fn labels_of(space: &MetricSpace, s: &PointSet) -> Vec<String> {
    s.ones().map(|i| space.label(i).to_string()).collect()
}

fn grid_table(name: &str, sigma: &str, grid: &CountGrid, t: &mut Option<Table>) {
    let t = t.get_or_insert_with(|| {
        Table::new(
            name,
            &["sigma", "n", "eps", "separated", "separated_exact", "spanning", "spanning_exact", "spanning_half", "spanning_half_exact"],
        )
    });
    for e in &grid.entries {
        t.push(vec![
            sigma.to_string(),
            e.n.to_string(),
            num(e.eps),
            e.separated.value.to_string(),
            e.separated.exact.to_string(),
            opt(e.spanning.as_ref().map(|c| c.value)),
            opt(e.spanning.as_ref().map(|c| c.exact)),
            opt(e.spanning_half.as_ref().map(|c| c.value)),
            opt(e.spanning_half.as_ref().map(|c| c.exact)),
        ]);
    }
}

fn grid_violations(grid: &CountGrid, tag: &str) -> Vec<String> {
    grid.violations()
        .into_iter()
        .map(|v| format!("{tag}: {} fails at n={}, eps={} ({} vs {})", v.relation, v.n, v.eps, v.values.0, v.values.1))
        .collect()
}

/// `s(σ, n, ε) <= s(n, ε)` entrywise on exact entries.
fn orbit_count_violations(full: &CountGrid, orbit: &CountGrid, sigma: &str) -> Vec<String> {
    let mut out = vec![];
    for e in &orbit.entries {
        if let Some(f) = full.get(e.n, e.eps) {
            if e.separated.exact && f.separated.exact && e.separated.value > f.separated.value {
                out.push(format!(
                    "s(σ={sigma}, n={}, eps={}) = {} exceeds s = {}",
                    e.n, e.eps, e.separated.value, f.separated.value
                ));
            }
        }
    }
    out
}

fn ladder(ctx: &Ctx, radii: &[f64]) -> Vec<Cover> {
    let mut all = FixedBitSet::with_capacity(ctx.fs.n_points());
    all.insert_range(..);
    let radii = if radii.is_empty() { &ctx.eps_grid[..] } else { radii };
    radii.iter().map(|&r| Cover::balls(ctx.fs.space(), all.clone(), r)).collect()
}

fn run_check(ctx: &Ctx) -> Result<Output> {
    let fs = ctx.fs;
    let space = fs.space();
    let (is_ifs, witness) = fs.check_ifs();
    let graph = fs.graph();
    let mut maps = Table::new("maps", &["id", "domain_size", "pairs"]);
    for m in fs.maps() {
        let pairs: Vec<String> = m.pairs().map(|(x, y)| format!("{}->{}", space.label(x), space.label(y))).collect();
        maps.push(vec![m.id().to_string(), m.domain().count().to_string(), pairs.join(" ")]);
    }
    Ok(Output {
        result: json!({
            "points": fs.n_points(),
            "maps": fs.maps().len(),
            "diameter": space.diameter(),
            "resolution": space.resolution(),
            "metric_ok": true,
            "is_ifs": is_ifs,
            "witness": witness.as_ref().map(|w| labels_of(space, w)),
            "infinite_core": labels_of(space, &graph.infinite_core),
        }),
        tables: vec![maps],
        ..Default::default()
    })
}

fn run_entropy(ctx: &Ctx, with_spanning: bool) -> Result<Output> {
    let grid = count_grid(ctx.fs, None, &ctx.n_grid, &ctx.eps_grid, ctx.mode, &ctx.budget, with_spanning)?;
    let rep = rate_report(&grid, None)?;
    let mut t = None;
    grid_table("entropy_counts", "", &grid, &mut t);
    let rates = Plot {
        name: "entropy_rates".into(),
        x: "eps".into(),
        y: "rate".into(),
        points: rep.eps.iter().copied().zip(rep.rates.iter().copied()).collect(),
    };
    let small = *rep.eps.last().expect("nonempty radius grid");
    let logs = Plot {
        name: "log_separated".into(),
        x: "n".into(),
        y: "ln_s".into(),
        points: grid
            .entries
            .iter()
            .filter(|e| e.eps == small)
            .map(|e| (e.n as f64, (e.separated.value.max(1) as f64).ln()))
            .collect(),
    };
    Ok(Output {
        result: serde_json::to_value(&rep)?,
        violations: grid_violations(&grid, "count grid"),
        tables: t.into_iter().collect(),
        plots: vec![rates, logs],
    })
}

fn run_mmdim(ctx: &Ctx) -> Result<Output> {
    let rep = mmdim_estimate(ctx.fs, &ctx.n_grid, &ctx.eps_grid, &ctx.sigmas, ctx.mode, &ctx.budget)?;
    let mut t = None;
    grid_table("mmdim_counts", "*", &rep.grid, &mut t);
    let mut violations = grid_violations(&rep.grid, "count grid");
    for (s, g) in ctx.sigmas.iter().zip(&rep.sigma_grids) {
        grid_table("mmdim_counts", &s.to_string(), g, &mut t);
        violations.extend(orbit_count_violations(&rep.grid, g, &s.to_string()));
    }
    let ratios = Plot {
        name: "mdim_ratios".into(),
        x: "eps".into(),
        y: "ratio".into(),
        points: rep.report.eps.iter().zip(&rep.report.ratios).filter_map(|(e, r)| r.map(|r| (*e, r))).collect(),
    };
    Ok(Output { result: serde_json::to_value(&rep)?, violations, tables: t.into_iter().collect(), plots: vec![ratios] })
}

fn run_mdim(ctx: &Ctx, radii: &[f64], floor: Option<f64>) -> Result<Output> {
    let covers = ladder(ctx, radii);
    let floor = floor.unwrap_or(ctx.fs.space().resolution());
    let mut t = Table::new("mdim_rows", &["sigma", "k", "n", "d", "per_n", "exact"]);
    let mut results = vec![];
    let mut plot = vec![];
    for (i, s) in ctx.sigmas.iter().enumerate() {
        let r = mdim_estimate(ctx.fs, s, &covers, &ctx.n_grid, floor, ctx.mode, ctx.budget.max_search)?;
        for row in &r.rows {
            t.push(vec![s.to_string(), row.k.to_string(), row.n.to_string(), row.d.to_string(), num(row.per_n), row.exact.to_string()]);
        }
        if i == 0 {
            for &n in &ctx.n_grid {
                let best = r.rows.iter().filter(|row| row.n == n).map(|row| row.per_n).fold(0.0, f64::max);
                plot.push((n as f64, best));
            }
        }
        results.push(json!({"sigma": s.to_string(), "report": r}));
    }
    Ok(Output {
        result: json!({"floor": floor, "per_sigma": results}),
        tables: vec![t],
        plots: vec![Plot { name: "mdim_per_n".into(), x: "n".into(), y: "d_over_n".into(), points: plot }],
        ..Default::default()
    })
}

fn run_theorem1(ctx: &Ctx, floor: Option<f64>) -> Result<Output> {
    let mm = mmdim_estimate(ctx.fs, &ctx.n_grid, &ctx.eps_grid, &ctx.sigmas, ctx.mode, &ctx.budget)?;
    let covers = ladder(ctx, &[]);
    let floor = floor.unwrap_or(ctx.fs.space().resolution());
    let (u, l) = (mm.report.umdim.unwrap_or(0.0), mm.report.lmdim.unwrap_or(0.0));
    let mut violations = vec![];
    if !le(l, u) {
        violations.push(format!("lmdim {l} exceeds umdim {u}"));
    }
    let mut t = Table::new("theorem1_chain", &["sigma", "mdim", "omdim", "lmdim", "umdim", "chain_holds"]);
    let mut rows = vec![];
    for (k, s) in ctx.sigmas.iter().enumerate() {
        let md = mdim_estimate(ctx.fs, s, &covers, &ctx.n_grid, floor, ctx.mode, ctx.budget.max_search)?;
        let om = mm.per_sigma[k].omdim;
        let holds = le(md.estimate, l) && le(l, u);
        if !le(md.estimate, l) {
            violations.push(format!("σ={s}: mdim {} exceeds lmdim {l}", md.estimate));
        }
        violations.extend(orbit_count_violations(&mm.grid, &mm.sigma_grids[k], &s.to_string()));
        t.push(vec![s.to_string(), num(md.estimate), num(om), num(l), num(u), holds.to_string()]);
        rows.push(json!({
            "sigma": s.to_string(),
            "mdim": md.estimate,
            "mdim_exact": md.exact,
            "omdim": om,
            "omdim_below_lmdim": le(om, l),
        }));
    }
    Ok(Output {
        result: json!({"umdim": u, "lmdim": l, "exact": mm.report.exact, "per_sigma": rows}),
        violations,
        tables: vec![t],
        ..Default::default()
    })
}

fn run_ocap(ctx: &Ctx, set: &[String], curve_len: usize) -> Result<Output> {
    let a = point_set(ctx.fs, set)?;
    let r = ocap(ctx.fs, &a, curve_len);
    let mut t = Table::new("ocap_curve", &["n", "capacity"]);
    let mut points = vec![];
    for (n, c) in &r.curve {
        t.push(vec![n.to_string(), ratio_string(c)]);
        points.push((*n as f64, *c.numer() as f64 / *c.denom() as f64));
    }
    Ok(Output {
        result: serde_json::to_value(&r)?,
        tables: vec![t],
        plots: vec![Plot { name: "ocap_curve".into(), x: "n".into(), y: "capacity".into(), points }],
        ..Default::default()
    })
}

fn run_sbp(ctx: &Ctx, delta: f64, radii: &[f64], points: &[String]) -> Result<Output> {
    let pts: Vec<usize> = if points.is_empty() {
        (0..ctx.fs.n_points()).collect()
    } else {
        points.iter().map(|l| point(ctx.fs, l)).collect::<Result<_>>()?
    };
    let r = sbp_check(ctx.fs, delta, radii, &pts);
    let mut t = Table::new("sbp_entries", &["point", "neighbourhood_radius", "witness_radius", "best_ocap", "ok"]);
    for e in &r.entries {
        t.push(vec![e.point.clone(), num(e.neighbourhood_radius), opt(e.witness_radius), e.best_ocap.clone(), e.ok.to_string()]);
    }
    Ok(Output { result: serde_json::to_value(&r)?, tables: vec![t], ..Default::default() })
}

fn samples(ctx: &Ctx, spec: &SampleSpec) -> Result<Vec<OrbitSequence>> {
    match *spec {
        SampleSpec::Pairs { m } => pair_sequences(ctx.fs, m),
        SampleSpec::Random { count, segments, max_len } => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
            random_sequences(ctx.fs, count, segments, max_len, &mut rng)
        }
    }
}

fn run_gop(ctx: &Ctx, m_max: usize, spec: &SampleSpec, conv: crate::gluing::Convention) -> Result<Output> {
    let seqs = samples(ctx, spec)?;
    let r = gop_estimate(ctx.fs, &ctx.eps_grid, &seqs, m_max, conv, ctx.budget.max_search)?;
    let mut t = Table::new("gop_rows", &["eps", "m", "failing_sequence", "complete"]);
    let mut points = vec![];
    for row in &r.rows {
        t.push(vec![num(row.eps), opt(row.m), opt(row.failing_sequence), row.complete.to_string()]);
        if let Some(m) = row.m {
            points.push((row.eps, m as f64));
        }
    }
    Ok(Output {
        result: serde_json::to_value(&r)?,
        tables: vec![t],
        plots: vec![Plot { name: "gop_m".into(), x: "eps".into(), y: "m".into(), points }],
        ..Default::default()
    })
}

#[allow(clippy::too_many_arguments)]
fn run_trace(
    ctx: &Ctx,
    segs: &[crate::config::SegmentSpec],
    eps: f64,
    m_max: usize,
    conv: crate::gluing::Convention,
    gap: &Option<Vec<usize>>,
    tracer: &Option<crate::config::TracerSpec>,
) -> Result<Output> {
    let fs = ctx.fs;
    let segments = segs
        .iter()
        .map(|s| Ok(Segment { x: point(fs, &s.x)?, sigma: SigmaGenerator::parse(fs, &s.sigma)?, m: s.m }))
        .collect::<Result<Vec<_>>>()?;
    let seq = OrbitSequence::new(segments)?;
    let (gap, tracer, complete) = match (gap, tracer) {
        (Some(g), Some(t)) => {
            let symbols = t.symbols.iter().map(|id| fs.map_index(id)).collect::<Result<Vec<_>>>()?;
            (Gap { times: g.clone() }, Tracer { z: point(fs, &t.z)?, symbols }, true)
        }
        (None, None) => {
            let found = find_trace(fs, &seq, eps, m_max, conv, ctx.budget.max_search)?;
            match found.witness {
                Some((g, t)) => (g, t, found.complete),
                None => {
                    return Ok(Output {
                        result: json!({"found": false, "complete": found.complete, "sequence": seq.describe(fs)}),
                        ..Default::default()
                    })
                }
            }
        }
        _ => return Err(Error::Config("trace needs both `gap` and `tracer`, or neither".into())),
    };
    let check = check_trace(fs, &seq, &gap, &tracer, eps, conv)?;
    let symbols: Vec<&str> = tracer.symbols.iter().map(|&k| fs.maps()[k].id()).collect();
    Ok(Output {
        result: json!({
            "found": true,
            "complete": complete,
            "sequence": seq.describe(fs),
            "gap": gap.times,
            "tracer": {"z": fs.space().label(tracer.z), "symbols": symbols},
            "check": check,
        }),
        ..Default::default()
    })
}

#[allow(clippy::too_many_arguments)]
fn run_theorem3(
    ctx: &Ctx,
    sigma: &str,
    p: &str,
    eps: f64,
    m_gop: usize,
    big_n: usize,
    scan_horizon: usize,
    convention: crate::gluing::Convention,
    compare_entropy: bool,
) -> Result<Output> {
    let fs = ctx.fs;
    let s = SigmaGenerator::parse(fs, sigma)?;
    let entropy = if compare_entropy {
        let grid = count_grid(fs, None, &ctx.n_grid, &ctx.eps_grid, ctx.mode, &ctx.budget, false)?;
        Some(rate_report(&grid, None)?.entropy)
    } else {
        None
    };
    let params = Theorem3Params { eps, m_gop, big_n, scan_horizon, convention, budget: ctx.budget.max_search };
    let outcome = theorem3_construct(fs, &s, point(fs, p)?, &params, entropy)?;
    let mut out = Output::default();
    if let Theorem3Outcome::Certificate(r) = &outcome {
        if !r.separated {
            out.violations.push(format!("tracers {:?} are not separated", r.violating_pair));
        }
        if r.bound_below_entropy == Some(false) {
            out.violations.push(format!("bound {} exceeds the entropy estimate {:?}", r.bound, r.entropy_estimate));
        }
        let mut t = Table::new("theorem3_tracers", &["word", "z", "gap"]);
        for tr in &r.tracers {
            let gap: Vec<String> = tr.gap.times.iter().map(|g| g.to_string()).collect();
            t.push(vec![tr.word.clone(), fs.space().label(tr.tracer.z).to_string(), gap.join(" ")]);
        }
        out.tables.push(t);
    }
    out.result = serde_json::to_value(&outcome)?;
    Ok(out)
}

fn run_gh(ctx: &Ctx, other: &SystemRef, max_points: usize) -> Result<Output> {
    let other = load_system(other)?;
    let (m1, m2) = (ctx.fs.space(), other.fs.space());
    if let Some(v) = m2.verify_metric().first() {
        return Ok(Output { violations: vec![format!("second space: {v}")], ..Default::default() });
    }
    let r = gh_distance(m1, m2, GhBudget { max_points })?;
    let g = &r.realization.glued;
    let mut header = vec!["label".to_string()];
    header.extend(g.labels().iter().cloned());
    let mut t = Table { name: "gh_glued".into(), header, rows: vec![] };
    for i in 0..g.len() {
        let mut row = vec![g.label(i).to_string()];
        row.extend((0..g.len()).map(|j| num(g.d(i, j))));
        t.rows.push(row);
    }
    let corr: Vec<(String, String)> =
        r.correspondence.iter().map(|&(a, b)| (m1.label(a).to_string(), m2.label(b).to_string())).collect();
    Ok(Output {
        result: json!({
            "other": other.name,
            "lower": r.lower,
            "upper": r.upper,
            "exact": r.exact,
            "correspondence": corr,
            "embed_left": r.realization.embed_left.iter().map(|&i| g.label(i)).collect::<Vec<_>>(),
            "embed_right": r.realization.embed_right.iter().map(|&i| g.label(i)).collect::<Vec<_>>(),
        }),
        tables: vec![t],
        ..Default::default()
    })
}

fn run_gallery(ctx: &Ctx) -> Result<Output> {
    let systems = gallery::build_gallery()?;
    let mut t = Table::new(
        "gallery_expectations",
        &["system", "quantity", "expected", "measured", "tolerance", "provenance", "exact", "pass"],
    );
    let mut violations = vec![];
    let mut listing = vec![];
    for s in &systems {
        for e in &s.expectations {
            let (v, exact) = gallery::measure(s, e.quantity, ctx.mode, &ctx.budget)?;
            let pass = (v - e.value).abs() <= e.tolerance;
            if !pass {
                violations.push(format!("{} {:?}: measured {v}, expected {} ± {}", s.name, e.quantity, e.value, e.tolerance));
            }
            t.push(vec![
                s.name.clone(),
                serde_json::to_value(e.quantity)?.as_str().unwrap_or_default().to_string(),
                num(e.value),
                num(v),
                num(e.tolerance),
                serde_json::to_value(e.provenance)?.as_str().unwrap_or_default().to_string(),
                exact.to_string(),
                pass.to_string(),
            ]);
        }
        listing.push(json!({"name": s.name, "generator": s.generator, "points": s.fs.n_points(), "maps": s.fs.maps().len()}));
    }
    Ok(Output { result: json!({"systems": listing}), violations, tables: vec![t], ..Default::default() })
}

fn run_one(ctx: &Ctx, a: &Analysis) -> Result<Output> {
    match a {
        Analysis::Check => run_check(ctx),
        Analysis::Entropy { with_spanning } => run_entropy(ctx, *with_spanning),
        Analysis::Mmdim => run_mmdim(ctx),
        Analysis::Mdim { radii, floor } => run_mdim(ctx, radii, *floor),
        Analysis::Ocap { set, curve_len } => run_ocap(ctx, set, *curve_len),
        Analysis::Sbp { delta, radii, points } => run_sbp(ctx, *delta, radii, points),
        Analysis::Gop { m_max, samples, convention } => run_gop(ctx, *m_max, samples, *convention),
        Analysis::Trace { segments, eps, m_max, convention, gap, tracer } => {
            run_trace(ctx, segments, *eps, *m_max, *convention, gap, tracer)
        }
        Analysis::Theorem1 { floor } => run_theorem1(ctx, *floor),
        Analysis::Theorem3 { sigma, p, eps, m_gop, big_n, scan_horizon, convention, compare_entropy } => {
            run_theorem3(ctx, sigma, p, *eps, *m_gop, *big_n, *scan_horizon, *convention, *compare_entropy)
        }
        Analysis::Gh { other, max_points } => run_gh(ctx, other, *max_points),
        Analysis::Gallery => run_gallery(ctx),
    }
}

/// Executes every analysis of `cfg`. Analyses run in parallel; the bundle is
/// assembled in configuration order.
pub fn run_report(cfg: &RunConfig) -> Result<ReportBundle> {
    if cfg.analyses.is_empty() {
        return Err(Error::Config("no analyses requested".into()));
    }
    let mode = cfg.mode()?;
    let only_gallery = cfg.analyses.iter().all(|a| matches!(a, Analysis::Gallery));
    let loaded = match &cfg.system {
        Some(r) => load_system(r)?,
        None if only_gallery => Loaded { name: "gallery".into(), fs: crate::ifs::identity(crate::metric::line(1)?)?, gallery: None },
        None => return Err(Error::Config("a system is required".into())),
    };
    let mut bundle = ReportBundle { system: loaded.name.clone(), seed: cfg.seed, ..Default::default() };
    let bad = loaded.fs.space().verify_metric();
    if !bad.is_empty() {
        bundle.sections.push(Section {
            analysis: "check".into(),
            result: json!({"metric_ok": false, "verify_metric": bad}),
            violations: bad.iter().map(|v| v.to_string()).collect(),
        });
        return Ok(bundle);
    }
    let g = loaded.gallery.as_ref();
    let n_grid = if !cfg.n_grid.is_empty() {
        cfg.n_grid.clone()
    } else {
        g.map_or_else(|| vec![1, 2, 3, 4], |g| g.n_grid.clone())
    };
    let eps_grid = if !cfg.eps_grid.is_empty() {
        cfg.eps_grid.clone()
    } else {
        g.map_or_else(|| vec![0.5, 0.25, 0.125], |g| g.eps_grid.clone())
    };
    let sigmas = if !cfg.sigmas.is_empty() {
        cfg.sigmas.iter().map(|s| SigmaGenerator::parse(&loaded.fs, s)).collect::<Result<Vec<_>>>()?
    } else {
        g.map_or_else(|| vec![SigmaGenerator::constant(0)], |g| g.sigmas.clone())
    };
    let ctx = Ctx { cfg, fs: &loaded.fs, n_grid, eps_grid, sigmas, mode, budget: Budget::from(&cfg.budget) };
    let outputs: Vec<Result<Output>> = cfg.analyses.par_iter().map(|a| run_one(&ctx, a)).collect();
    for (a, out) in cfg.analyses.iter().zip(outputs) {
        let out = out?;
        bundle.sections.push(Section { analysis: a.name().into(), result: out.result, violations: out.violations });
        bundle.tables.extend(out.tables);
        bundle.plots.extend(out.plots);
    }
    Ok(bundle)
}
