//! Named space generators used by configuration files and the gallery.

use super::MetricSpace;
use crate::error::{Error, Result};

/// `n` points on the integer line, unit spacing.
pub fn line(n: usize) -> Result<MetricSpace> {
    let labels = (0..n).map(|i| i.to_string()).collect();
    MetricSpace::from_fn(labels, 1.0, |i, j| i.abs_diff(j) as f64)
}

/// `n` points with all distances 1.
pub fn discrete(n: usize) -> Result<MetricSpace> {
    let labels = (0..n).map(|i| format!("s{i}")).collect();
    MetricSpace::from_fn(labels, 1.0, |i, j| if i == j { 0.0 } else { 1.0 })
}

fn cyclic(i: usize, j: usize, n: usize) -> usize {
    let k = i.abs_diff(j);
    k.min(n - k)
}

/// `n` equally spaced points on a circle of circumference 1, arc-length metric.
pub fn circle(n: usize) -> Result<MetricSpace> {
    if n == 0 {
        return Err(Error::InvalidModel("circle needs n >= 1".into()));
    }
    let labels = (0..n).map(|i| format!("c{i}")).collect();
    MetricSpace::from_fn(labels, 1.0 / n as f64, |i, j| cyclic(i, j, n) as f64 / n as f64)
}

/// The `m x m` grid on the unit torus with the max of the two circle metrics.
/// Point `(a, b)` has index `a * m + b`.
pub fn torus_grid(m: usize) -> Result<MetricSpace> {
    if m == 0 {
        return Err(Error::InvalidModel("torus grid needs m >= 1".into()));
    }
    let labels = (0..m * m).map(|i| format!("t{}_{}", i / m, i % m)).collect();
    MetricSpace::from_fn(labels, 1.0 / m as f64, |i, j| {
        let da = cyclic(i / m, j / m, m);
        let db = cyclic(i % m, j % m, m);
        da.max(db) as f64 / m as f64
    })
}

/// The grid `{0, 1/m, ..., (m-1)/m}^dim` with the max norm.
pub fn cube_grid(m: usize, dim: usize) -> Result<MetricSpace> {
    if m == 0 || dim == 0 {
        return Err(Error::InvalidModel("cube grid needs m, dim >= 1".into()));
    }
    let total = m.pow(dim as u32);
    let coords = |mut i: usize| {
        let mut c = vec![0usize; dim];
        for k in (0..dim).rev() {
            c[k] = i % m;
            i /= m;
        }
        c
    };
    let labels = (0..total)
        .map(|i| {
            let c = coords(i);
            format!("g{}", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_"))
        })
        .collect();
    MetricSpace::from_fn(labels, 1.0 / m as f64, |i, j| {
        let (a, b) = (coords(i), coords(j));
        a.iter().zip(&b).map(|(x, y)| x.abs_diff(*y)).max().unwrap_or(0) as f64 / m as f64
    })
}

/// Per-symbol distance used by [`seq_window`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeqMetric {
    /// 0 for equal symbols, 1 otherwise: `d = 2^-(first difference)`.
    FirstDifference,
    /// Symbols are levels `a/q` in `[0,1)`; the symbol distance is `|a-b|/q`.
    Levels,
}

/// Decodes window index `i` into its symbols, position 0 first.
pub fn window_symbols(mut i: usize, q: usize, len: usize) -> Vec<usize> {
    let mut w = vec![0; len];
    for k in (0..len).rev() {
        w[k] = i % q;
        i /= q;
    }
    w
}

/// Encodes symbols (position 0 first) as a window index.
pub fn window_index(w: &[usize], q: usize) -> usize {
    w.iter().fold(0, |acc, &s| acc * q + s)
}

/// All words of length `len` over `q` symbols, with the weighted metric
/// `d(x, y) = max_i 2^-i * delta(x_i, y_i)`.
pub fn seq_window(q: usize, len: usize, metric: SeqMetric) -> Result<MetricSpace> {
    if q < 1 || len < 1 {
        return Err(Error::InvalidModel("seq_window needs q >= 1 and len >= 1".into()));
    }
    let total = q.checked_pow(len as u32).filter(|t| *t <= 1 << 20).ok_or_else(|| {
        Error::InvalidModel(format!("seq_window {q}^{len} is too large"))
    })?;
    let sep = if q > 10 { "." } else { "" };
    let labels = (0..total)
        .map(|i| {
            let w = window_symbols(i, q, len);
            format!("w{}", w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(sep))
        })
        .collect();
    let words: Vec<Vec<usize>> = (0..total).map(|i| window_symbols(i, q, len)).collect();
    let delta = move |a: usize, b: usize| match metric {
        SeqMetric::FirstDifference => (a != b) as u8 as f64,
        SeqMetric::Levels => a.abs_diff(b) as f64 / q as f64,
    };
    let resolution = match metric {
        SeqMetric::FirstDifference => 0.5f64.powi(len as i32 - 1),
        SeqMetric::Levels => 0.5f64.powi(len as i32 - 1) / q as f64,
    };
    MetricSpace::from_fn(labels, resolution, |i, j| {
        words[i]
            .iter()
            .zip(&words[j])
            .enumerate()
            .map(|(k, (&a, &b))| 0.5f64.powi(k as i32) * delta(a, b))
            .fold(0.0, f64::max)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_produce_metrics() {
        for m in [
            line(4).unwrap(),
            discrete(3).unwrap(),
            circle(7).unwrap(),
            torus_grid(3).unwrap(),
            cube_grid(3, 2).unwrap(),
            seq_window(2, 4, SeqMetric::FirstDifference).unwrap(),
            seq_window(4, 2, SeqMetric::Levels).unwrap(),
        ] {
            assert!(m.verify_metric().is_empty(), "{:?}", m.labels());
        }
    }

    #[test]
    fn first_difference_metric_is_dyadic() {
        let m = seq_window(2, 3, SeqMetric::FirstDifference).unwrap();
        let a = m.index_of("w000").unwrap();
        let b = m.index_of("w001").unwrap();
        let c = m.index_of("w100").unwrap();
        assert_eq!(m.d(a, b), 0.25);
        assert_eq!(m.d(a, c), 1.0);
    }

    #[test]
    fn window_codec_roundtrip() {
        for i in 0..81 {
            assert_eq!(window_index(&window_symbols(i, 3, 4), 3), i);
        }
    }
}
