//! One line per criterion; exits nonzero when any criterion fails.

mod common;

use std::time::Instant;

use common::*;
use ifs_mdim::capacity::{capacity, lsbp_partition, max_cycle_mean, ocap, t2_map};
use ifs_mdim::complexity::{count_grid, fit_slope, mmdim_estimate, separated_count, Budget, Mode};
use ifs_mdim::config::{Analysis, RunConfig, SystemRef};
use ifs_mdim::cover::{alpha_join, d_of, pullback, Cover};
use ifs_mdim::gallery::{build_gallery, find, micro_spaces};
use ifs_mdim::gluing::{
    gop_estimate, pair_sequences, rigidity_deficit, theorem3_construct, Convention, Theorem3Outcome, Theorem3Params,
};
use ifs_mdim::ifs::{rotation, shift_window};
use ifs_mdim::metric::{gh_distance, GhBudget, SeqMetric};
use ifs_mdim::orbit::{joint_distance, word_trace};
use ifs_mdim::report::run_report;
use ifs_mdim::{ge, le, Result, SigmaGenerator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<std::result::Result<String, String>>;

fn pass(ok: bool, detail: String) -> std::result::Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_sandwich() -> Outcome {
    let b = Budget::default();
    let mut checked = 0;
    for sys in build_gallery()? {
        let grid = count_grid(&sys.fs, None, &sys.n_grid, &sys.eps_grid, Mode::Exact, &b, true)?;
        if let Some(v) = grid.violations().first() {
            return Ok(Err(format!("{}: {} at n={} eps={}", sys.name, v.relation, v.n, v.eps)));
        }
        for e in &grid.entries {
            let (Some(r), Some(r2)) = (&e.spanning, &e.spanning_half) else { continue };
            if !(e.separated.exact && r.exact && r2.exact) {
                continue;
            }
            checked += 1;
            if !(r.value <= e.separated.value && e.separated.value <= r2.value) {
                return Ok(Err(format!("{}: r={} s={} r(eps/2)={} at n={} eps={}", sys.name, r.value, e.separated.value, r2.value, e.n, e.eps)));
            }
        }
    }
    Ok(pass(checked > 0, format!("{checked} exact cells")))
}

fn c2_entropy() -> Result<(f64, std::result::Result<String, String>)> {
    let fs = shift_window(2, 5, SeqMetric::FirstDifference)?;
    let b = Budget::default();
    let (mut xs, mut ys) = (vec![], vec![]);
    for n in 1..=8usize {
        let s = separated_count(&fs, n, 0.0625, Mode::Exact, &b)?;
        if !s.exact || s.value != 1 << (n + 4) {
            return Ok((0.0, Err(format!("s({n}, 1/16) = {} (exact {}), expected {}", s.value, s.exact, 1 << (n + 4)))));
        }
        xs.push(n as f64);
        ys.push((s.value as f64).ln());
    }
    let (slope, _) = fit_slope(&xs, &ys);
    let rel = (slope - 2f64.ln()).abs() / 2f64.ln();
    Ok((slope, pass(rel <= 0.01, format!("slope {slope:.6}, relative error {rel:.2e}"))))
}

fn c3_chain() -> Outcome {
    let mut lines = 0;
    for sys in build_gallery()? {
        let cfg = RunConfig::new(Some(SystemRef::Gallery { gallery: sys.name.clone() }), Analysis::Theorem1 { floor: None });
        let bundle = run_report(&cfg)?;
        let sec = &bundle.sections[0];
        if !sec.violations.is_empty() {
            return Ok(Err(format!("{}: {}", sys.name, sec.violations.join("; "))));
        }
        let (u, l) = (sec.result["umdim"].as_f64().unwrap(), sec.result["lmdim"].as_f64().unwrap());
        for row in sec.result["per_sigma"].as_array().unwrap() {
            let md = row["mdim"].as_f64().unwrap();
            if !(le(md, l) && le(l, u)) {
                return Ok(Err(format!("{}: mdim {md} lmdim {l} umdim {u}", sys.name)));
            }
            lines += 1;
        }
    }
    Ok(pass(lines > 0, format!("{lines} (system, sigma) chains")))
}

fn c4_grid_shift() -> Outcome {
    let mut parts = vec![];
    let mut ok = true;
    for k in 2..=4u32 {
        let fs = shift_window(1 << k, 1, SeqMetric::Levels)?;
        let eps: Vec<f64> = (1..=k.max(3)).map(|j| 0.5f64.powi(j as i32)).collect();
        let r = mmdim_estimate(&fs, &[1, 2, 3], &eps, &[], Mode::Exact, &Budget::default())?;
        let u = r.report.umdim.unwrap_or(f64::NAN);
        ok &= r.report.exact && (u - 1.0).abs() <= 0.2;
        parts.push(format!("k={k}: umdim {u:.4}"));
    }
    Ok(pass(ok, parts.join(", ")))
}

fn c5_capacity() -> Outcome {
    let mut cmp = 0;
    for seed in 0..240u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fs = random_system(&mut rng, 6, 3);
        let a = random_set(&mut rng, fs.n_points());
        for n in 1..=8 {
            for x in 0..fs.n_points() {
                let (got, want) = (capacity(&fs, &a, n, x)?, brute_capacity(&fs, &a, n, x));
                if got != want {
                    return Ok(Err(format!("seed {seed}: cap_{n}(x={x}) = {got:?}, paths give {want:?}")));
                }
                cmp += 1;
            }
        }
        let want = brute_max_cycle_mean(&fs, &a);
        if max_cycle_mean(&fs.graph(), &a) != want || ocap(&fs, &a, 8).value != want {
            return Ok(Err(format!("seed {seed}: ocap differs from cycle mean {want:?}")));
        }
    }
    Ok(Ok(format!("240 systems, {cmp} capacity values")))
}

fn lsbp_instance() -> (Vec<(ifs_mdim::ifs::PointSet, ifs_mdim::ifs::PointSet)>, f64, usize, f64) {
    let pairs = vec![(set(12, 0..8), set(12, 1..7)), (set(12, (6..12).chain([0, 1])), set(12, (7..12).chain([0])))];
    (pairs, 0.5, 12, 2.0 / 12.0)
}

fn c6_lsbp() -> Outcome {
    let fs = rotation(12, 1)?;
    let (pairs, eps, big_n, delta) = lsbp_instance();
    let (p, cert) = lsbp_partition(&fs, &SigmaGenerator::constant(0), &pairs, eps, big_n, delta)?;
    let sums_ok = p.carrier.iter().all(|&x| (p.phi.iter().map(|f| f[x]).sum::<f64>() - 1.0).abs() <= 1e-9);
    let support_ok = p.phi.iter().zip(&pairs).all(|(f, (u, _))| (0..12).all(|x| f[x] == 0.0 || u.contains(x)));
    let ok = sums_ok && support_ok && cert.sum_to_one && cert.subordinate && cert.below_eps && cert.premises.is_empty();
    Ok(pass(
        ok,
        format!(
            "sum error {:.1e}, supports inside U_j {support_ok}, boundary capacity {} < {eps}: {}",
            cert.max_sum_error, cert.horizon_capacity, cert.below_eps
        ),
    ))
}

fn c7_t2() -> Outcome {
    let fs = rotation(12, 1)?;
    let sigma = SigmaGenerator::constant(0);
    let (pairs, eps, big_n, delta) = lsbp_instance();
    let (p, _) = lsbp_partition(&fs, &sigma, &pairs, eps, big_n, delta)?;
    let t2 = t2_map(&fs, &sigma, &p, big_n, eps)?;
    let budget = eps * big_n as f64 * pairs.len() as f64;
    let ok = t2.compatibility.compatible && t2.open_counts.iter().all(|&c| (c as f64) < budget);
    Ok(pass(ok, format!("compatible {}, max open coordinates {} < {budget}", t2.compatibility.compatible, t2.max_open)))
}

fn c8_theorem3(entropy: f64) -> Outcome {
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
    let r = match theorem3_construct(&fs, &sigma, 0, &params, Some(entropy))? {
        Theorem3Outcome::Certificate(r) => r,
        other => return Ok(Err(format!("no certificate: {other:?}"))),
    };
    let expect_h = (params.big_n + 1) * (r.t + 2 * params.m_gop);
    let traces: Vec<Option<Vec<usize>>> =
        r.tracers.iter().map(|t| word_trace(&fs, t.tracer.z, &t.tracer.symbols[..expect_h - 1])).collect();
    let mut separated = traces.iter().all(Option::is_some);
    for i in 0..traces.len() {
        for j in i + 1..traces.len() {
            if let (Some(a), Some(b)) = (&traces[i], &traces[j]) {
                separated &= ge(joint_distance(fs.space(), a, b, expect_h)?, params.eps);
            }
        }
    }
    let bound = 2f64.ln() / (r.t + 2 * params.m_gop) as f64;
    let ok = r.tracers.len() == 32 && r.horizon == expect_h && separated && r.separated && le(bound, entropy);
    Ok(pass(
        ok,
        format!("{} tracers, pairwise separated over {expect_h} points: {separated}, bound {bound:.4} <= {entropy:.4}", r.tracers.len()),
    ))
}

fn c9_gop() -> Outcome {
    let eps = [0.5, 0.25, 0.125];
    let full = find("full_shift_2")?.fs;
    let r = gop_estimate(&full, &eps, &pair_sequences(&full, 2)?, 3, Convention::Definition, 200_000)?;
    let full_ok = r.rows.iter().all(|row| row.m == Some(1) && row.complete);
    let cyc = find("two_cycles")?.fs;
    let r = gop_estimate(&cyc, &eps, &pair_sequences(&cyc, 2)?, 3, Convention::Definition, 200_000)?;
    let fails = r.rows.iter().any(|row| row.m.is_none() && row.failing_sequence.is_some());
    let rot = rotation(4, 1)?;
    let sigma = SigmaGenerator::constant(0);
    let params = Theorem3Params {
        eps: 0.125,
        m_gop: 2,
        big_n: 2,
        scan_horizon: 32,
        convention: Convention::Definition,
        budget: 200_000,
    };
    let rigid = matches!(theorem3_construct(&rot, &sigma, 0, &params, None)?, Theorem3Outcome::Rigid { k: 4, .. });
    let dev = rigidity_deficit(&rot, &sigma, &[4], 0.5)?.rows[0].1;
    let ok = full_ok && fails && rigid && dev == Some(0.0);
    Ok(pass(
        ok,
        format!("full shift M=1 {full_ok}, two cycles fail {fails}, rotation rigid at 4 {rigid}, deficit at m=4 {dev:?}"),
    ))
}

fn c10_covers() -> Outcome {
    let (mut feasible, mut seed) = (0, 0u64);
    while feasible < 100 {
        seed += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(1_000 + seed);
        let (alpha, pool) = random_d_instance(&mut rng);
        let got = d_of(&alpha, &pool, Mode::Exact, 10_000_000);
        match (brute_d(&alpha, &pool), got) {
            (Some(want), Ok(d)) if d.exact && d.order == want => feasible += 1,
            (None, Err(_)) => {}
            (want, got) => return Ok(Err(format!("seed {seed}: exhaustive {want:?}, d_of {:?}", got.map(|d| d.order)))),
        }
    }
    let sys = find("cat_powers")?;
    let fs = &sys.fs;
    let v = SigmaGenerator::constant(fs.map_index("cat^1")?);
    let alpha = Cover::balls(fs.space(), set(fs.n_points(), 0..fs.n_points()), 0.5);
    let mut identities = 0;
    for n in 1..=3usize {
        let base = alpha_join(fs, &v, &alpha, 0, n - 1)?;
        let vn = SigmaGenerator::constant(fs.map_index(&format!("cat^{n}"))?);
        for k in 1..=3usize {
            let lhs = alpha_join(fs, &v, &alpha, 0, k * n - 1)?;
            let mut rhs = base.clone();
            for j in 1..k {
                rhs = rhs.join(&pullback(fs, &vn, j, &base)?)?;
            }
            if !lhs.same_family(&rhs) || lhs.carrier() != rhs.carrier() {
                return Ok(Err(format!("join identity fails at k={k}, n={n}")));
            }
            identities += 1;
        }
    }
    Ok(Ok(format!("{seed} random instances ({feasible} feasible), {identities} join identities")))
}

fn c11_gh() -> Outcome {
    let spaces = micro_spaces()?;
    let b = GhBudget { max_points: 10 };
    let m = spaces.len();
    let mut d = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let r = gh_distance(&spaces[i].1, &spaces[j].1, b)?;
            let want = brute_gh(&spaces[i].1, &spaces[j].1);
            if !r.exact || (r.value() - want).abs() > 1e-12 {
                return Ok(Err(format!("{} vs {}: {} vs brute force {want}", spaces[i].0, spaces[j].0, r.value())));
            }
            d[i][j] = r.value();
        }
    }
    for i in 0..m {
        for j in 0..m {
            if (d[i][j] - d[j][i]).abs() > 1e-12 {
                return Ok(Err(format!("asymmetric: {} {}", spaces[i].0, spaces[j].0)));
            }
            for k in 0..m {
                if d[i][k] > d[i][j] + d[j][k] + 1e-12 {
                    return Ok(Err(format!("triangle: {} {} {}", spaces[i].0, spaces[j].0, spaces[k].0)));
                }
            }
        }
    }
    Ok(Ok(format!("{m} spaces, {} triples", m * m * m)))
}

fn report(id: usize, name: &str, start: Instant, out: Outcome) -> bool {
    let secs = start.elapsed().as_secs_f64();
    let (ok, detail) = match out {
        Ok(Ok(d)) => (true, d),
        Ok(Err(d)) => (false, d),
        Err(e) => (false, format!("error: {e}")),
    };
    println!("criterion {id:>2} {name:<28} {} ({secs:.1}s) {detail}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() {
    let mut all = true;
    let t = Instant::now();
    all &= report(1, "sandwich_monotone", t, c1_sandwich());
    let t = Instant::now();
    let (entropy, c2) = match c2_entropy() {
        Ok((h, r)) => (h, Ok(r)),
        Err(e) => (0.0, Err(e)),
    };
    all &= report(2, "full_shift_entropy", t, c2);
    let t = Instant::now();
    all &= report(3, "estimator_chain", t, c3_chain());
    let t = Instant::now();
    all &= report(4, "grid_shift_mean_dimension", t, c4_grid_shift());
    let t = Instant::now();
    all &= report(5, "capacity_oracle", t, c5_capacity());
    let t = Instant::now();
    all &= report(6, "partition_of_unity", t, c6_lsbp());
    let t = Instant::now();
    all &= report(7, "compatible_embedding", t, c7_t2());
    let t = Instant::now();
    all &= report(8, "separated_tracers", t, c8_theorem3(entropy));
    let t = Instant::now();
    all &= report(9, "gluing_diagnostics", t, c9_gop());
    let t = Instant::now();
    all &= report(10, "cover_oracle", t, c10_covers());
    let t = Instant::now();
    all &= report(11, "gh_oracle", t, c11_gh());
    if !all {
        std::process::exit(1);
    }
}
