use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use walsh_decay::basekit::decompose;
use walsh_decay::corpus::CorpusEntry;
use walsh_decay::exact::{beta, chi, power_series_coeff};
use walsh_decay::harness::{
    run_lower_bound, run_transform_bench, run_verify, write_bench, write_limits, write_verification, RunConfig,
};
use walsh_decay::oracle::{walsh_coeff, DEFAULT_MIN_LEVEL};
use walsh_decay::{format_real, Result};

/// Walsh coefficient decay: bound verification, limit ladders and transform timing.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    base: Option<u32>,
    /// Sweeps cover 1 <= k < base^max_level.
    #[arg(long, global = true)]
    max_level: Option<u32>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Relative slack before a ratio counts as a violation.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Compare oracle coefficients with every selected bound.
    Verify,
    /// Tabulate residuals of the scaled-coefficient limits.
    Lowerbound,
    /// Time the fast transform against the naive one.
    Bench,
    /// Print one coefficient from the oracle and, when available, the exact route.
    Coeff {
        /// Corpus member, e.g. `exp:a=2` or `monomial:r=3`.
        #[arg(long)]
        function: String,
        #[arg(long)]
        k: u64,
    },
}

fn load(common: &Common) -> Result<RunConfig> {
    let mut config = match &common.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    if let Some(b) = common.base {
        config.base = b;
    }
    if let Some(m) = common.max_level {
        config.max_level = m;
    }
    if let Some(out) = &common.out {
        config.out = out.clone();
    }
    if common.jobs.is_some() {
        config.jobs = common.jobs;
    }
    if let Some(tol) = common.tol {
        config.tol_rel = tol;
    }
    config.validate()?;
    Ok(config)
}

fn verify(config: &RunConfig) -> Result<bool> {
    let mut report = run_verify(config)?;
    report.limit_table = Some(run_lower_bound(config)?);
    for path in write_verification(&config.out, &report)? {
        println!("wrote {}", path.display());
    }
    for (label, s) in &report.bounds {
        println!(
            "{label}: rows={} max_ratio={} violations={} unresolved={} estimated_rows={}",
            s.rows,
            format_real(s.max_ratio),
            s.violations,
            s.unresolved,
            s.estimated_rows
        );
    }
    for s in &report.skipped {
        println!("skipped {} [{}] {}: {}", s.function, s.params, s.theorem, s.reason);
    }
    println!(
        "rows={} violations={} unresolved={}",
        report.total_rows, report.violations, report.unresolved
    );
    Ok(report.passed())
}

fn lowerbound(config: &RunConfig) -> Result<()> {
    let table = run_lower_bound(config)?;
    for path in write_limits(&config.out, &table)? {
        println!("wrote {}", path.display());
    }
    for series in &table.series {
        let rate = series.fitted_rate.map_or_else(|| "n/a".to_string(), format_real);
        println!("tail={} s={} points={} fitted_rate={rate}", series.tail, series.s, series.rows.len());
    }
    Ok(())
}

fn bench(config: &RunConfig) -> Result<()> {
    let rows = run_transform_bench(&config.bench)?;
    println!("wrote {}", write_bench(&config.out, &rows)?.display());
    for row in &rows {
        println!(
            "b={} n={} fwt={}s naive={}s speedup={} max_diff={}",
            row.base,
            row.n,
            format_real(row.fwt_seconds),
            format_real(row.naive_seconds),
            format_real(row.speedup),
            format_real(row.max_abs_diff)
        );
    }
    Ok(())
}

fn coeff(config: &RunConfig, function: &str, k: u64) -> Result<()> {
    let entry = CorpusEntry::parse(function)?;
    let f = entry.build()?;
    let kd = decompose(k, config.base()?);
    let oracle = walsh_coeff(&f, &kd, config.quad_order, DEFAULT_MIN_LEVEL)?;
    println!(
        "oracle re={} im={} err={}",
        format_real(oracle.value.re),
        format_real(oracle.value.im),
        format_real(oracle.error_estimate)
    );
    let tol = config.recursion_tol;
    let exact = match entry {
        CorpusEntry::Monomial { r } => Some(("recursion", chi(r, &kd, tol)?)),
        CorpusEntry::Bernoulli { r } => Some(("recursion", beta(r, &kd, tol)?)),
        _ => match f.series() {
            Some(_) => Some(("series", power_series_coeff(&f, &kd, 200, tol)?.value)),
            None => None,
        },
    };
    if let Some((method, value)) = exact {
        println!("{method} re={} im={}", format_real(value.re), format_real(value.im));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || -> Result<bool> {
        let config = load(&cli.common)?;
        match &cli.command {
            Command::Verify => verify(&config),
            Command::Lowerbound => lowerbound(&config).map(|_| true),
            Command::Bench => bench(&config).map(|_| true),
            Command::Coeff { function, k } => coeff(&config, function, *k).map(|_| true),
        }
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
