//! Finite metric models, Hausdorff distance and Gromov-Hausdorff gluing.
//!
//! ```text
//! cargo run --example metric_spaces
//! ```

use ifs_mdim::metric::{circle, discrete, gh_distance, glue_realization, line, GhBudget};
use ifs_mdim::MetricSpace;

fn main() -> ifs_mdim::Result<()> {
    let c4 = circle(4)?;
    let l3 = line(3)?;
    println!("circle(4): diameter {}, resolution {}", c4.diameter(), c4.resolution());

    // a matrix that breaks the triangle inequality
    let bad = MetricSpace::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]],
        1.0,
    )?;
    for v in bad.verify_metric() {
        println!("violation: {v}");
    }

    let r = gh_distance(&c4, &l3, GhBudget::default())?;
    println!("d_GH(circle(4), line(3)) in [{}, {}], exact = {}", r.lower, r.upper, r.exact);
    let pairs: Vec<String> =
        r.correspondence.iter().map(|&(a, b)| format!("{}~{}", c4.label(a), l3.label(b))).collect();
    println!("optimal correspondence: {}", pairs.join(" "));

    let glued = glue_realization(&[circle(3)?, discrete(2)?, line(2)?], GhBudget::default())?;
    println!("glued family: {} points, optimal = {}", glued.space.len(), glued.optimal);
    for (k, e) in glued.embeddings.iter().enumerate() {
        let labels: Vec<&str> = e.iter().map(|&p| glued.space.label(p)).collect();
        println!("  model {k} -> {labels:?}");
    }
    Ok(())
}
