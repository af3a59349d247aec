//! Named function-system generators.

use super::{FunctionSystem, PartialMap};
use crate::error::{Error, Result};
use crate::metric::{
    circle, seq_window, torus_grid, window_index, window_symbols, MetricSpace, SeqMetric,
};

/// The identity map on every point.
pub fn identity(space: MetricSpace) -> Result<FunctionSystem> {
    let n = space.len();
    FunctionSystem::new(space, vec![PartialMap::from_fn("id", n, Some)?])
}

/// Rotation by `k` cells on the `n`-point circle.
pub fn rotation(n: usize, k: usize) -> Result<FunctionSystem> {
    let space = circle(n)?;
    let map = PartialMap::from_fn(format!("rot{k}"), n, |x| Some((x + k) % n))?;
    FunctionSystem::new(space, vec![map])
}

/// The cat map `(a, b) -> (2a + b, a + b) mod m` on the `m x m` torus grid.
pub fn cat_map(m: usize) -> Result<FunctionSystem> {
    let space = torus_grid(m)?;
    let map = PartialMap::from_fn("cat", m * m, |i| {
        let (a, b) = (i / m, i % m);
        Some(((2 * a + b) % m) * m + (a + b) % m)
    })?;
    FunctionSystem::new(space, vec![map])
}

/// Sequence-window model of the full `q`-shift.
///
/// Map `s{a}_{b}` is defined on windows starting with `a` and drops that
/// symbol while appending `b`; together they realize every one-sided
/// continuation, so admissible orbits are exactly the full shift. For windows
/// of length at least 2 the cyclic rotation `shift` is added as a single total
/// map.
pub fn shift_window(q: usize, len: usize, metric: SeqMetric) -> Result<FunctionSystem> {
    let space = seq_window(q, len, metric)?;
    let n = space.len();
    let mut maps = Vec::with_capacity(q * q + 1);
    for a in 0..q {
        for b in 0..q {
            maps.push(PartialMap::from_fn(format!("s{a}_{b}"), n, |i| {
                let w = window_symbols(i, q, len);
                (w[0] == a).then(|| {
                    let mut next = w[1..].to_vec();
                    next.push(b);
                    window_index(&next, q)
                })
            })?);
        }
    }
    if len >= 2 {
        maps.push(PartialMap::from_fn("shift", n, |i| {
            let mut w = window_symbols(i, q, len);
            w.rotate_left(1);
            Some(window_index(&w, q))
        })?);
    }
    FunctionSystem::new(space, maps)
}

/// The two injective branches of the doubling map on the circle grid
/// `{j/m}`, `m` odd (doubling permutes this grid).
pub fn doubling_branches(m: usize) -> Result<FunctionSystem> {
    odd(m)?;
    let space = circle(m)?;
    let d0 = PartialMap::from_fn("d0", m, |j| (2 * j < m).then_some(2 * j))?;
    let d1 = PartialMap::from_fn("d1", m, |j| (2 * j > m).then(|| 2 * j - m))?;
    FunctionSystem::new(space, vec![d0, d1])
}

/// The inverse branches `x/2` and `(x+1)/2` of doubling on the circle grid
/// `{j/m}`, `m` odd; each point lies in exactly one domain.
pub fn inverse_doubling_branches(m: usize) -> Result<FunctionSystem> {
    odd(m)?;
    let space = circle(m)?;
    let b0 = PartialMap::from_fn("b0", m, |j| (j % 2 == 0).then_some(j / 2))?;
    let b1 = PartialMap::from_fn("b1", m, |j| (j % 2 == 1).then_some((j + m) / 2))?;
    FunctionSystem::new(space, vec![b0, b1])
}

fn odd(m: usize) -> Result<()> {
    if m % 2 == 0 || m < 3 {
        return Err(Error::Config(format!("doubling grids need an odd size >= 3, got {m}")));
    }
    Ok(())
}

/// Two `q`-cycles at mutual distance 1, rotated by one map `rot`.
pub fn disjoint_cycles(q: usize) -> Result<FunctionSystem> {
    let c = circle(q)?;
    let labels = (0..2 * q).map(|i| format!("{}{}", if i < q { "a" } else { "b" }, i % q)).collect();
    let space = MetricSpace::from_fn(labels, c.resolution(), |i, j| {
        if (i < q) == (j < q) {
            c.d(i % q, j % q)
        } else {
            1.0
        }
    })?;
    let rot = PartialMap::from_fn("rot", 2 * q, |i| Some((i / q) * q + (i % q + 1) % q))?;
    FunctionSystem::new(space, vec![rot])
}

/// Points `a, b, c` on the line at 0, 1, 5: `f = {a -> b, c -> a}`,
/// `g = {b -> a}`. The cycle `a <-> b` is fed by the stray arrow from `c`.
pub fn stray_arrow() -> Result<FunctionSystem> {
    let space = MetricSpace::new(
        vec!["a".into(), "b".into(), "c".into()],
        vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 4.0], vec![5.0, 4.0, 0.0]],
        1.0,
    )?;
    let f = PartialMap::new("f", 3, &[(0, 1), (2, 0)])?;
    let g = PartialMap::new("g", 3, &[(1, 0)])?;
    FunctionSystem::new(space, vec![f, g])
}

/// `{v, v^2, ..., v^p}` for the map `base` of `fs`, ids `{base}^k`. Powers are
/// composed where defined.
pub fn power_family(fs: &FunctionSystem, base: &str, p: usize) -> Result<FunctionSystem> {
    if p == 0 {
        return Err(Error::Config("power family needs p >= 1".into()));
    }
    let v = fs.maps()[fs.map_index(base)?].clone();
    let n = fs.n_points();
    let mut maps = vec![PartialMap::from_fn(format!("{base}^1"), n, |x| v.apply(x))?];
    for k in 2..=p {
        let prev = maps.last().unwrap().clone();
        maps.push(PartialMap::from_fn(format!("{base}^{k}"), n, |x| {
            prev.apply(x).and_then(|y| v.apply(y))
        })?);
    }
    FunctionSystem::new(fs.space().clone(), maps)
}
