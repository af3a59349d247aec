//! Covers, joins along a sequence, the refinement minimum `D` and the
//! pool-restricted mean dimension on the cat-map power family.
//!
//! ```text
//! cargo run --release --example cover_dimension
//! ```

use fixedbitset::FixedBitSet;
use ifs_mdim::complexity::Mode;
use ifs_mdim::cover::{alpha_join, d_of, mdim_estimate, pullback, Cover, RefinementPool};
use ifs_mdim::ifs::{cat_map, power_family};
use ifs_mdim::SigmaGenerator;

fn main() -> ifs_mdim::Result<()> {
    let fs = power_family(&cat_map(5)?, "cat", 3)?;
    let space = fs.space();
    let mut all = FixedBitSet::with_capacity(fs.n_points());
    all.insert_range(..);
    let alpha = Cover::balls(space, all.clone(), 0.3);
    println!("alpha: {} balls of radius 0.3, order {}", alpha.len(), alpha.order()?);

    let sigma = SigmaGenerator::constant(fs.map_index("cat^1")?);
    for n in 1..=3 {
        let j = alpha_join(&fs, &sigma, &alpha, 0, n - 1)?;
        let pool = RefinementPool::standard(space, &j, space.resolution());
        let d = d_of(&j, &pool, Mode::Exact, 200_000)?;
        println!("n = {n}: join has {} elements, D = {} (exact {})", j.len(), d.order, d.exact);
    }

    // joining k blocks of length n along cat equals joining n-blocks pulled back by cat^n
    let (k, n) = (2, 2);
    let long = alpha_join(&fs, &sigma, &alpha, 0, k * n - 1)?;
    let block = alpha_join(&fs, &sigma, &alpha, 0, n - 1)?;
    let power = SigmaGenerator::constant(fs.map_index(&format!("cat^{n}"))?);
    let mut acc = block.clone();
    for j in 1..k {
        let p = pullback(&fs, &power, j, &block)?;
        let carrier = {
            let mut c = acc.carrier().clone();
            c.intersect_with(p.carrier());
            c
        };
        acc = acc.restrict(&carrier).join(&p.restrict(&carrier))?;
    }
    println!("block identity holds for k = {k}, n = {n}: {}", long.same_family(&acc.restrict(long.carrier())));

    let ladder: Vec<Cover> = [0.45, 0.3].iter().map(|&r| Cover::balls(space, all.clone(), r)).collect();
    let rep = mdim_estimate(&fs, &sigma, &ladder, &[1, 2, 3, 4], space.resolution(), Mode::Exact, 200_000)?;
    for row in &rep.rows {
        println!("  cover {} n {} D {} D/n {:.3}", row.k, row.n, row.d, row.per_n);
    }
    println!("pool-restricted mdim estimate {} (exact {})", rep.estimate, rep.exact);
    Ok(())
}
