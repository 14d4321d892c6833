//! Fast Walsh transform of sampled data against the naive sum.

use num_complex::Complex64;
use walsh_decay::basekit::Base;
use walsh_decay::walsh::{fwt, naive_transform, Direction, SampleGrid};

fn main() -> walsh_decay::Result<()> {
    for (b, level) in [(2u32, 8u32), (3, 5), (5, 3)] {
        let base = Base::new(b)?;
        let grid = SampleGrid::sample(base, level, |x| Complex64::new(x.exp(), (3.0 * x).sin()))?;
        let fast = fwt(&grid, Direction::Forward);
        let slow = naive_transform(&grid, Direction::Forward);
        let back = fwt(&fast, Direction::Inverse);
        let diff = |a: &SampleGrid, b: &SampleGrid| {
            a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
        };
        println!(
            "b={b} N={:>4}: |fwt - naive| = {:.2e}, round trip {:.2e}",
            grid.len(),
            diff(&fast, &slow),
            diff(&back, &grid)
        );
    }
    Ok(())
}
