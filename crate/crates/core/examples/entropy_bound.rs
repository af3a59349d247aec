//! The separated-tracer construction behind the entropy lower bound
//! `ln 2 / (T + 2M)`, and its rigidity abort on a rotation.
//!
//! ```text
//! cargo run --release --example entropy_bound
//! ```

use ifs_mdim::complexity::{entropy_estimate, Budget, Mode};
use ifs_mdim::gluing::{theorem3_construct, Convention, Theorem3Outcome, Theorem3Params};
use ifs_mdim::ifs::{rotation, shift_window};
use ifs_mdim::metric::SeqMetric;
use ifs_mdim::SigmaGenerator;

fn main() -> ifs_mdim::Result<()> {
    let window = shift_window(2, 5, SeqMetric::FirstDifference)?;
    let ns: Vec<usize> = (1..=8).collect();
    let (_, rates) = entropy_estimate(&window, &ns, &[0.0625], Mode::Exact, &Budget::default())?;

    let fs = shift_window(2, 1, SeqMetric::FirstDifference)?;
    let sigma = SigmaGenerator::from_ids(&fs, &[], &["s0_0", "s0_1", "s1_1", "s1_0"])?;
    let params = Theorem3Params {
        eps: 0.125,
        m_gop: 1,
        big_n: 5,
        scan_horizon: 32,
        convention: Convention::Definition,
        budget: 200_000,
    };
    match theorem3_construct(&fs, &sigma, 0, &params, Some(rates.entropy))? {
        Theorem3Outcome::Certificate(r) => {
            println!("gamma {} at tau {:?}; T = {}, horizon {}", r.scan.gamma, r.scan.taus, r.t, r.horizon);
            println!("{} tracers, pairwise separated: {} (min distance {})", r.tracers.len(), r.separated, r.min_pair_distance);
            println!("bound ln2/(T+2M) = {:.4} <= entropy estimate {:.4}: {:?}", r.bound, rates.entropy, r.bound_below_entropy);
        }
        other => println!("no certificate: {other:?}"),
    }

    let rot = rotation(4, 1)?;
    let params = Theorem3Params { m_gop: 2, big_n: 2, ..params };
    let out = theorem3_construct(&rot, &SigmaGenerator::constant(0), 0, &params, None)?;
    println!("rotation: {}", serde_json::to_string(&out)?);
    Ok(())
}
