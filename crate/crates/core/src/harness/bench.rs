//! Fast versus naive transform: agreement, round trip and wall-clock time.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::BenchConfig;
use crate::basekit::Base;
use crate::error::{Error, Result};
use crate::walsh::{fwt, naive_transform, Direction, SampleGrid};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub base: u32,
    pub level: u32,
    pub n: usize,
    /// Fastest of the repeats.
    pub fwt_seconds: f64,
    pub naive_seconds: f64,
    pub speedup: f64,
    /// `max |fwt − naive|` on the forward transform.
    pub max_abs_diff: f64,
    /// `max |inverse(forward(g)) − g|`.
    pub roundtrip_error: f64,
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn fastest<T>(repeats: usize, mut run: impl FnMut() -> T) -> (T, f64) {
    let mut best = f64::INFINITY;
    let mut out = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let value = run();
        best = best.min(start.elapsed().as_secs_f64());
        out = Some(value);
    }
    (out.expect("at least one repeat"), best)
}

/// Random complex samples of size `b^level` from a seeded generator.
pub fn random_grid(base: Base, level: u32, seed: u64) -> Result<SampleGrid> {
    let n = base
        .checked_pow(level)
        .filter(|&n| n <= 1 << 24)
        .ok_or_else(|| Error::Overflow(format!("{base}^{level} samples")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SampleGrid::new(base, values)
}

pub fn bench_size(base: Base, level: u32, repeats: usize, seed: u64) -> Result<BenchRow> {
    let grid = random_grid(base, level, seed)?;
    let (fast, fwt_seconds) = fastest(repeats, || fwt(&grid, Direction::Forward));
    let (slow, naive_seconds) = fastest(repeats, || naive_transform(&grid, Direction::Forward));
    let back = fwt(&fast, Direction::Inverse);
    Ok(BenchRow {
        base: base.get(),
        level,
        n: grid.len(),
        fwt_seconds,
        naive_seconds,
        speedup: naive_seconds / fwt_seconds.max(f64::MIN_POSITIVE),
        max_abs_diff: max_diff(fast.values(), slow.values()),
        roundtrip_error: max_diff(back.values(), grid.values()),
    })
}

pub fn run_transform_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config
        .sizes
        .iter()
        .map(|&(b, level)| bench_size(Base::new(b)?, level, config.repeats, config.seed))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_stage_matches_exactly() {
        let row = bench_size(Base::new(3).unwrap(), 1, 1, 1).unwrap();
        assert_eq!(row.n, 3);
        assert!(row.max_abs_diff < 1e-15);
    }

    #[test]
    fn three_sizes_reported() {
        let config = BenchConfig {
            sizes: vec![(2, 4), (3, 3), (5, 2)],
            repeats: 1,
            seed: 3,
        };
        let rows = run_transform_bench(&config).unwrap();
        assert_eq!(rows.len(), 3);
        for row in rows {
            assert!(row.max_abs_diff < 1e-12 && row.roundtrip_error < 1e-12);
            assert!(row.fwt_seconds >= 0.0 && row.naive_seconds >= 0.0);
        }
    }
}
