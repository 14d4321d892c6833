//! `report.csv` and `summary.json` writers. Floats carry 17 significant digits
//! and lines end in LF.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use super::bench::BenchRow;
use super::lower_bound::LimitTable;
use super::verify::{ReportRow, VerificationReport};
use crate::error::Result;
use crate::format_real;

pub const REPORT_HEADER: [&str; 13] = [
    "function", "params", "b", "k", "v", "mu_r", "mu_r_per", "coeff_re", "coeff_im", "coeff_abs", "theorem", "bound",
    "ratio",
];

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

pub fn write_report_csv<W: Write>(w: W, rows: &[ReportRow]) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(REPORT_HEADER)?;
    for row in rows {
        out.write_record([
            row.function.clone(),
            row.params.clone(),
            row.base.to_string(),
            row.k.to_string(),
            row.v.to_string(),
            row.mu_r.to_string(),
            row.mu_r_per.to_string(),
            format_real(row.coeff.re),
            format_real(row.coeff.im),
            format_real(row.coeff.norm()),
            row.theorem.clone(),
            format_real(row.bound),
            format_real(row.ratio),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_limit_csv<W: Write>(w: W, table: &LimitTable) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["function", "params", "b", "kappa", "tail", "s", "step", "positions", "k", "scaled_re", "scaled_im", "residual"])?;
    for series in &table.series {
        for row in &series.rows {
            let positions = row.positions.iter().map(u32::to_string).collect::<Vec<_>>().join(";");
            out.write_record([
                table.function.clone(),
                table.params.clone(),
                table.base.to_string(),
                table.kappa.to_string(),
                series.tail.to_string(),
                series.s.to_string(),
                row.step.to_string(),
                positions,
                row.k.to_string(),
                format_real(row.scaled.re),
                format_real(row.scaled.im),
                format_real(row.residual),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_bench_csv<W: Write>(w: W, rows: &[BenchRow]) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["b", "level", "n", "fwt_seconds", "naive_seconds", "speedup", "max_abs_diff", "roundtrip_error"])?;
    for row in rows {
        out.write_record([
            row.base.to_string(),
            row.level.to_string(),
            row.n.to_string(),
            format_real(row.fwt_seconds),
            format_real(row.naive_seconds),
            format_real(row.speedup),
            format_real(row.max_abs_diff),
            format_real(row.roundtrip_error),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Pretty JSON whose floats use the 17-significant-digit scientific form.
struct RealFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for RealFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_real(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serializes `value` as pretty JSON with 17-digit floats and a trailing newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut w, RealFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn create(dir: &Path, name: &str) -> Result<(BufWriter<File>, PathBuf)> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    Ok((BufWriter::new(File::create(&path)?), path))
}

/// Writes `report.csv` and `summary.json` into `dir`, returning their paths.
pub fn write_verification(dir: &Path, report: &VerificationReport) -> Result<Vec<PathBuf>> {
    let (csv, csv_path) = create(dir, "report.csv")?;
    write_report_csv(csv, &report.rows)?;
    let (json, json_path) = create(dir, "summary.json")?;
    write_json(json, report)?;
    Ok(vec![csv_path, json_path])
}

#[derive(Serialize)]
struct LimitSummary<'a> {
    limit_table: &'a LimitTable,
}

/// Writes `limits.csv` and `summary.json` (holding only the limit table) into `dir`.
pub fn write_limits(dir: &Path, table: &LimitTable) -> Result<Vec<PathBuf>> {
    let (csv, csv_path) = create(dir, "limits.csv")?;
    write_limit_csv(csv, table)?;
    let (json, json_path) = create(dir, "summary.json")?;
    write_json(json, &LimitSummary { limit_table: table })?;
    Ok(vec![csv_path, json_path])
}

/// Writes `bench.csv` into `dir`.
pub fn write_bench(dir: &Path, rows: &[BenchRow]) -> Result<PathBuf> {
    let (csv, path) = create(dir, "bench.csv")?;
    write_bench_csv(csv, rows)?;
    Ok(path)
}
