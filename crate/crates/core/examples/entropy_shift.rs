//! Separated and spanning counts on the full 2-shift window model and the
//! entropy slope.
//!
//! ```text
//! cargo run --release --example entropy_shift
//! ```

use ifs_mdim::complexity::{count_grid, rate_report, separated_count, spanning_count, Budget, Mode};
use ifs_mdim::ifs::shift_window;
use ifs_mdim::metric::SeqMetric;

fn main() -> ifs_mdim::Result<()> {
    let fs = shift_window(2, 5, SeqMetric::FirstDifference)?;
    let budget = Budget::default();
    let eps = 0.0625;

    println!(" n  s(n, 1/16)  2^(n+4)  r(n, 1/16)");
    for n in 1..=8 {
        let s = separated_count(&fs, n, eps, Mode::Exact, &budget)?;
        let r = spanning_count(&fs, n, eps, Mode::Exact, &budget)?;
        println!("{n:2}  {:10}  {:7}  {:10}", s.value, 1u64 << (n + 4), r.value);
    }

    let ns: Vec<usize> = (1..=8).collect();
    let grid = count_grid(&fs, None, &ns, &[eps], Mode::Exact, &budget, false)?;
    let rep = rate_report(&grid, None)?;
    println!("entropy slope {:.6} (ln 2 = {:.6}), exact = {}", rep.entropy, 2f64.ln(), rep.exact);
    Ok(())
}
