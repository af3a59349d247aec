use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ifs_mdim::config::{Analysis, RunConfig, SampleSpec, SystemRef};
use ifs_mdim::gluing::Convention;
use ifs_mdim::report::{exit_code_for, run_report};
use ifs_mdim::{Error, Result};

/// Entropy, mean dimension, capacity and gluing diagnostics for function
/// systems on finite metric models.
#[derive(Parser)]
#[command(name = "ifs-mdim", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Gallery system name.
    #[arg(long, conflicts_with = "system")]
    gallery: Option<String>,
    /// JSON system file.
    #[arg(long)]
    system: Option<PathBuf>,
    /// Base run configuration; its analyses are replaced by the subcommand.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    n_grid: Vec<usize>,
    #[arg(long = "eps", value_delimiter = ',')]
    eps_grid: Vec<f64>,
    /// Sequence, e.g. `const(rot1)` or `a|b,c`; repeatable.
    #[arg(long = "sigma")]
    sigmas: Vec<String>,
    /// exact, greedy or auto.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for summary.json and the CSV files.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Metric axioms, IFS witness and admissibility core.
    Check(Common),
    /// Separated (and spanning) counts and entropy rates.
    Entropy {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        spanning: bool,
    },
    /// Upper/lower metric mean dimension and the orbit version.
    Mmdim(Common),
    /// Pool-restricted mean dimension along sequences.
    Mdim {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        radii: Vec<f64>,
        #[arg(long)]
        floor: Option<f64>,
    },
    /// Orbit capacity of a point set.
    Ocap {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        #[arg(long, default_value_t = 16)]
        curve_len: usize,
    },
    /// Small-boundary check.
    Sbp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        points: Vec<String>,
    },
    /// Gluing-orbit gap bounds over sampled orbit sequences.
    Gop {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        m_max: usize,
        /// Sample all two-segment sequences up to this length.
        #[arg(long, default_value_t = 2, conflicts_with = "random")]
        pairs: usize,
        /// Random sample `count,segments,max_len` drawn from the seed.
        #[arg(long, value_delimiter = ',')]
        random: Vec<usize>,
        #[arg(long, value_parser = convention)]
        convention: Option<Convention>,
    },
    /// Verify or search a tracing orbit; the spec file holds the JSON trace
    /// analysis (segments, eps and optionally gap and tracer).
    Trace {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        spec: PathBuf,
    },
    /// The estimator chain mdim <= lmdim <= umdim and orbit counts.
    Theorem1 {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        floor: Option<f64>,
    },
    /// Separated tracer construction and the entropy lower bound.
    Theorem3 {
        #[command(flatten)]
        common: Common,
        #[arg(long = "along")]
        sequence: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        at: f64,
        #[arg(long, default_value_t = 1)]
        m_gop: usize,
        #[arg(long, default_value_t = 3)]
        big_n: usize,
        #[arg(long, default_value_t = 32)]
        scan_horizon: usize,
        #[arg(long, value_parser = convention)]
        convention: Option<Convention>,
        #[arg(long)]
        compare_entropy: bool,
    },
    /// Gromov-Hausdorff distance to a second system's space.
    Gh {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "other")]
        other_gallery: Option<String>,
        #[arg(long)]
        other: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        max_points: usize,
    },
    /// Check every gallery expectation.
    Gallery(Common),
    /// Run a full configuration file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn convention(s: &str) -> std::result::Result<Convention, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| format!("unknown convention `{s}`"))
}

fn system_ref(gallery: &Option<String>, path: &Option<PathBuf>) -> Option<SystemRef> {
    match (gallery, path) {
        (Some(g), _) => Some(SystemRef::Gallery { gallery: g.clone() }),
        (None, Some(p)) => Some(SystemRef::Path { path: p.clone() }),
        _ => None,
    }
}

fn build(c: &Common, a: Analysis) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::new(None, a.clone()),
    };
    cfg.analyses = vec![a];
    if let Some(s) = system_ref(&c.gallery, &c.system) {
        cfg.system = Some(s);
    }
    if !c.n_grid.is_empty() {
        cfg.n_grid = c.n_grid.clone();
    }
    if !c.eps_grid.is_empty() {
        cfg.eps_grid = c.eps_grid.clone();
    }
    if !c.sigmas.is_empty() {
        cfg.sigmas = c.sigmas.clone();
    }
    if let Some(m) = &c.mode {
        cfg.mode = m.clone();
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if c.out.is_some() {
        cfg.output_dir = c.out.clone();
    }
    Ok(cfg)
}

fn config(cmd: Cmd) -> Result<RunConfig> {
    Ok(match cmd {
        Cmd::Check(c) => build(&c, Analysis::Check)?,
        Cmd::Entropy { common, spanning } => build(&common, Analysis::Entropy { with_spanning: spanning })?,
        Cmd::Mmdim(c) => build(&c, Analysis::Mmdim)?,
        Cmd::Mdim { common, radii, floor } => build(&common, Analysis::Mdim { radii, floor })?,
        Cmd::Ocap { common, set, curve_len } => build(&common, Analysis::Ocap { set, curve_len })?,
        Cmd::Sbp { common, delta, radii, points } => build(&common, Analysis::Sbp { delta, radii, points })?,
        Cmd::Gop { common, m_max, pairs, random, convention } => {
            let samples = match random[..] {
                [] => SampleSpec::Pairs { m: pairs },
                [count, segments, max_len] => SampleSpec::Random { count, segments, max_len },
                _ => return Err(Error::Config("--random takes count,segments,max_len".into())),
            };
            build(&common, Analysis::Gop { m_max, samples, convention: convention.unwrap_or_default() })?
        }
        Cmd::Trace { common, spec } => {
            let text = std::fs::read_to_string(&spec)?;
            let mut v: serde_json::Value = serde_json::from_str(&text)?;
            v["analysis"] = "trace".into();
            let a: Analysis = serde_json::from_value(v).map_err(|e| Error::Config(format!("{}: {e}", spec.display())))?;
            build(&common, a)?
        }
        Cmd::Theorem1 { common, floor } => build(&common, Analysis::Theorem1 { floor })?,
        Cmd::Theorem3 { common, sequence, p, at, m_gop, big_n, scan_horizon, convention, compare_entropy } => build(
            &common,
            Analysis::Theorem3 {
                sigma: sequence,
                p,
                eps: at,
                m_gop,
                big_n,
                scan_horizon,
                convention: convention.unwrap_or_default(),
                compare_entropy,
            },
        )?,
        Cmd::Gh { common, other_gallery, other, max_points } => {
            let other = system_ref(&other_gallery, &other)
                .ok_or_else(|| Error::Config("gh needs --other or --other-gallery".into()))?;
            build(&common, Analysis::Gh { other, max_points })?
        }
        Cmd::Gallery(c) => build(&c, Analysis::Gallery)?,
        Cmd::Run { config, out } => {
            let mut cfg = RunConfig::load(&config)?;
            if out.is_some() {
                cfg.output_dir = out;
            }
            cfg
        }
    })
}

fn run(cmd: Cmd) -> Result<i32> {
    let cfg = config(cmd)?;
    let bundle = run_report(&cfg)?;
    if let Some(dir) = &cfg.output_dir {
        bundle.write(dir)?;
    }
    print!("{}", bundle.summary_json());
    for s in &bundle.sections {
        for v in &s.violations {
            eprintln!("violated [{}]: {v}", s.analysis);
        }
    }
    Ok(bundle.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
