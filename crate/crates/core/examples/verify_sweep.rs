//! A small verification sweep written to a directory given on the command line.

use std::path::PathBuf;

use walsh_decay::harness::{run_verify, write_verification, RunConfig};

fn main() -> walsh_decay::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| std::env::temp_dir().join("walsh-sweep"), PathBuf::from);
    let config = RunConfig {
        max_level: 8,
        ..RunConfig::default()
    };
    let report = run_verify(&config)?;
    for (label, s) in &report.bounds {
        println!("{label:<28} rows {:>6} max ratio {:.4} violations {}", s.rows, s.max_ratio, s.violations);
    }
    for path in write_verification(&out, &report)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
