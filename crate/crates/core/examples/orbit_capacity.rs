//! Orbit capacity by dynamic programming, its limit as a maximum cycle mean,
//! and the small-boundary check.
//!
//! ```text
//! cargo run --example orbit_capacity
//! ```

use fixedbitset::FixedBitSet;
use ifs_mdim::capacity::{capacity, ocap, ratio_string, sbp_check};
use ifs_mdim::ifs::{rotation, stray_arrow};

fn main() -> ifs_mdim::Result<()> {
    let fs = rotation(8, 1)?;
    let mut a = FixedBitSet::with_capacity(8);
    a.insert(0);
    a.insert(1);
    for n in [1, 2, 4, 8, 16] {
        let c = capacity(&fs, &a, n, 0)?.expect("every point has an orbit");
        println!("cap({n:2}, c0, {{c0, c1}}) = {}", ratio_string(&c));
    }
    let r = ocap(&fs, &a, 8);
    println!("ocap = {}", r.value.map(|v| ratio_string(&v)).unwrap_or_default());

    let fs = stray_arrow()?;
    let mut b = FixedBitSet::with_capacity(3);
    b.insert(0);
    let r = ocap(&fs, &b, 6);
    println!("stray arrow, ocap({{a}}) = {}", r.value.map(|v| ratio_string(&v)).unwrap_or_default());
    for (n, v) in &r.curve {
        println!("  n = {n}: sup cap = {}", ratio_string(v));
    }

    let fs = rotation(12, 1)?;
    let rep = sbp_check(&fs, 1.0 / 12.0, &[0.25, 0.5], &[0, 3, 6]);
    for e in &rep.entries {
        println!("sbp at {} (R = {}): witness radius {:?}, best shell ocap {}", e.point, e.neighbourhood_radius, e.witness_radius, e.best_ocap);
    }
    println!("small boundary property at delta = 1/12: {}", rep.holds);
    Ok(())
}
