//! A partition of unity subordinate to a two-pair cover of the 12-point
//! circle, its boundary capacity, and the compatible embedding map built
//! from it.
//!
//! ```text
//! cargo run --example partition_embedding
//! ```

use fixedbitset::FixedBitSet;
use ifs_mdim::capacity::{lsbp_partition, t2_map};
use ifs_mdim::cover::f_sigma_map;
use ifs_mdim::ifs::{rotation, PointSet};
use ifs_mdim::SigmaGenerator;

fn set(v: impl IntoIterator<Item = usize>) -> PointSet {
    let mut s = FixedBitSet::with_capacity(12);
    v.into_iter().for_each(|x| s.insert(x));
    s
}

fn main() -> ifs_mdim::Result<()> {
    let fs = rotation(12, 1)?;
    let sigma = SigmaGenerator::constant(0);
    let pairs = vec![(set(0..8), set(1..7)), (set((6..12).chain([0, 1])), set((7..12).chain([0])))];

    let (p, cert) = lsbp_partition(&fs, &sigma, &pairs, 0.5, 12, 2.0 / 12.0)?;
    println!("phi_j on c0..c11:");
    for (j, row) in p.phi.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.2}")).collect();
        println!("  phi_{j}: {}", cells.join(" "));
    }
    println!(
        "sum error {:.1e}, subordinate {}, boundary {:?}, capacity {} < 1/2: {}",
        cert.max_sum_error,
        cert.subordinate,
        p.boundary_region.ones().collect::<Vec<_>>(),
        cert.horizon_capacity,
        cert.below_eps
    );

    let t2 = t2_map(&fs, &sigma, &p, 12, 0.5)?;
    println!(
        "f_N compatible with the joined cover: {}; open coordinates {} <= budget {}",
        t2.compatibility.compatible, t2.max_open, t2.budget
    );

    // F_sigma takes two-set covers {U, V} of the whole circle
    let two_set = [(set(0..7), set((5..12).chain([0])))];
    let f = f_sigma_map(&fs, &sigma, 3, &two_set)?;
    println!("F_sigma level sets ok {}, compatible {:?}", f.level_sets_ok, f.compatibility.map(|c| c.compatible));
    Ok(())
}
