//! Tracing orbit sequences, gluing-orbit gap estimates and rigidity.
//!
//! ```text
//! cargo run --release --example gluing_orbits
//! ```

use ifs_mdim::gallery::find;
use ifs_mdim::gluing::{find_trace, gop_estimate, pair_sequences, rigidity_deficit, Convention, OrbitSequence, Segment};
use ifs_mdim::ifs::{rotation, shift_window};
use ifs_mdim::metric::SeqMetric;
use ifs_mdim::SigmaGenerator;

fn main() -> ifs_mdim::Result<()> {
    let fs = shift_window(2, 1, SeqMetric::FirstDifference)?;
    let seq = OrbitSequence::new(vec![
        Segment { x: 0, sigma: SigmaGenerator::constant(fs.map_index("s0_0")?), m: 3 },
        Segment { x: 1, sigma: SigmaGenerator::constant(fs.map_index("s1_1")?), m: 2 },
    ])?;
    let found = find_trace(&fs, &seq, 0.5, 2, Convention::Definition, 100_000)?;
    if let Some((gap, tracer)) = found.witness {
        let ids: Vec<&str> = tracer.symbols.iter().map(|&k| fs.maps()[k].id()).collect();
        println!("{:?} traced with gaps {:?} from {} along {ids:?}", seq.describe(&fs), gap.times, fs.space().label(tracer.z));
    }

    let samples = pair_sequences(&fs, 3)?;
    let r = gop_estimate(&fs, &[0.5, 0.25, 0.125], &samples, 3, Convention::Definition, 100_000)?;
    for row in &r.rows {
        println!("full shift: eps {} -> M = {:?}", row.eps, row.m);
    }

    let two = find("two_cycles")?.fs;
    let samples = pair_sequences(&two, 2)?;
    let r = gop_estimate(&two, &[0.5], &samples, 4, Convention::Definition, 100_000)?;
    let row = &r.rows[0];
    println!("two cycles: M = {:?}, failing sequence {:?}", row.m, row.failing_description);

    let rot = rotation(6, 1)?;
    let rep = rigidity_deficit(&rot, &SigmaGenerator::constant(0), &[1, 2, 3, 6, 12], 1e-6)?;
    for (m, d) in &rep.rows {
        println!("rotation(6): sup d(v^{m} x, x) = {:?}", d);
    }
    println!("rigid at m = {:?}", rep.rigid_at);
    Ok(())
}
