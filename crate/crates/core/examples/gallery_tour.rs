//! Every gallery system against its expectations, then a full report run
//! written to a temporary directory.
//!
//! ```text
//! cargo run --release --example gallery_tour
//! ```

use ifs_mdim::complexity::{Budget, Mode};
use ifs_mdim::config::{Analysis, RunConfig, SystemRef};
use ifs_mdim::gallery::{build_gallery, measure};
use ifs_mdim::report::run_report;

fn main() -> ifs_mdim::Result<()> {
    for sys in build_gallery()? {
        println!("{} = {} ({} points)", sys.name, sys.generator, sys.fs.n_points());
        for e in &sys.expectations {
            let (v, exact) = measure(&sys, e.quantity, Mode::Exact, &Budget::default())?;
            let ok = (v - e.value).abs() <= e.tolerance;
            println!("    {:?}: {v:.4} vs {:.4} ± {} [{:?}] exact {exact} -> {}", e.quantity, e.value, e.tolerance, e.provenance, if ok { "pass" } else { "FAIL" });
        }
    }

    let mut cfg = RunConfig::new(Some(SystemRef::Gallery { gallery: "grid_shift_8".into() }), Analysis::Mmdim);
    cfg.analyses.push(Analysis::Entropy { with_spanning: true });
    cfg.analyses.push(Analysis::Theorem1 { floor: None });
    let bundle = run_report(&cfg)?;
    let dir = std::env::temp_dir().join("ifs-mdim-gallery-tour");
    bundle.write(&dir)?;
    println!("report for grid_shift_8 written to {} (exit code {})", dir.display(), bundle.exit_code());
    for t in &bundle.tables {
        println!("  {}.csv: {} rows", t.name, t.rows.len());
    }
    Ok(())
}
