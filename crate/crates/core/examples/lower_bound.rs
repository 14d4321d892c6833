//! Scaled coefficients of e^x approach their limit as the leading digit moves up.

use walsh_decay::harness::{run_lower_bound, RunConfig};

fn main() -> walsh_decay::Result<()> {
    let table = run_lower_bound(&RunConfig::default())?;
    for series in &table.series {
        println!(
            "tail {} s={}: limit {:.6e}, fitted rate {:?}",
            series.tail, series.s, series.limit, series.fitted_rate
        );
        for row in &series.rows {
            println!("  step {:>2} k={:>6} R={:.3e}", row.step, row.k, row.residual);
        }
    }
    Ok(())
}
