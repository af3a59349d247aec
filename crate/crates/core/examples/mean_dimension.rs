//! Metric mean dimension of the discretized [0,1]-shift and the orbit mean
//! dimension along sampled sequences.
//!
//! ```text
//! cargo run --release --example mean_dimension
//! ```

use ifs_mdim::complexity::{mmdim_estimate, Budget, Mode};
use ifs_mdim::ifs::shift_window;
use ifs_mdim::metric::SeqMetric;
use ifs_mdim::SigmaGenerator;

fn main() -> ifs_mdim::Result<()> {
    for k in 2..=4u32 {
        let q = 1usize << k;
        let fs = shift_window(q, 1, SeqMetric::Levels)?;
        let eps: Vec<f64> = (1..=k.max(3)).map(|j| 0.5f64.powi(j as i32)).collect();
        let sigmas = [SigmaGenerator::constant(0), SigmaGenerator::periodic(vec![0, q + 1])?];
        let r = mmdim_estimate(&fs, &[1, 2, 3], &eps, &sigmas, Mode::Exact, &Budget::default())?;
        println!("{q:2} levels: umdim {:.4}  lmdim {:.4}  omdim {:?}", r.report.umdim.unwrap(), r.report.lmdim.unwrap(), r.omdim);
        for (e, ratio) in r.report.eps.iter().zip(&r.report.ratios) {
            println!("    eps {e:<8} rate/|ln eps| {:.4}", ratio.unwrap());
        }
    }
    Ok(())
}
