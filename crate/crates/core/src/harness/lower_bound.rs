//! Limits of scaled coefficients as leading digit positions grow.
//!
//! For a single new leading digit, `b^{a_1} f̂(κ_1 b^{a_1−1} + k′) → −(1−ω^{−κ_1})^{−1} f̂′(k′)`.
//! With `s` new digits the scale is `b^{a_1+…+a_s}` and the limit
//! `(−1)^s Π (1−ω^{−κ})^{−1} · (f^{(s)})^(k^{(s)})`.

use num_complex::Complex64;
use serde::Serialize;

use super::config::{LowerBoundConfig, RunConfig};
use crate::basekit::{decompose, Base, IndexDecomposition};
use crate::error::{Error, Result};
use crate::oracle::{walsh_coeff, FunctionSpec, DEFAULT_MIN_LEVEL};
use crate::walsh::RootTable;

/// One point of a ladder.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitRow {
    /// Ladder step: `a_1` for single digits, the spacing `t` for nested ladders.
    pub step: u32,
    /// Positions of the added digits, largest first.
    pub positions: Vec<u32>,
    pub k: u64,
    pub scaled: Complex64,
    pub residual: f64,
}

/// A ladder for one tail and nesting depth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitSeries {
    pub tail: u64,
    pub s: u32,
    pub limit: Complex64,
    pub rows: Vec<LimitRow>,
    /// `exp` of the least-squares slope of `ln R` per step; `None` with fewer than two positive residuals.
    pub fitted_rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitTable {
    pub function: String,
    pub params: String,
    pub base: u32,
    pub kappa: u32,
    pub series: Vec<LimitSeries>,
}

impl LimitTable {
    /// The single-digit ladder for `tail`.
    pub fn single(&self, tail: u64) -> Option<&LimitSeries> {
        self.series.iter().find(|s| s.s == 1 && s.tail == tail)
    }
}

/// Slope of the least-squares line through `(x, ln y)` for positive `y`, exponentiated.
pub fn fitted_rate(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, y)| *y > 0.0 && y.is_finite())
        .map(|&(x, y)| (x, y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some((sxy / sxx).exp())
}

struct Ladder<'a> {
    f: &'a FunctionSpec,
    base: Base,
    kappa: u32,
    quad_order: usize,
    roots: RootTable,
}

impl Ladder<'_> {
    fn coeff(&self, g: &FunctionSpec, k: &IndexDecomposition) -> Result<Complex64> {
        Ok(walsh_coeff(g, k, self.quad_order, DEFAULT_MIN_LEVEL)?.value)
    }

    fn limit(&self, s: u32, tail: &IndexDecomposition) -> Result<Complex64> {
        let deriv = self.f.derivative_spec(s as usize)?;
        let sign = if s.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(self.roots.inv_one_minus(self.kappa).powu(s) * self.coeff(&deriv, tail)? * sign)
    }

    fn point(&self, step: u32, positions: Vec<u32>, tail: &IndexDecomposition, limit: Complex64) -> Result<LimitRow> {
        let mut k = tail.clone();
        for &a in positions.iter().rev() {
            k = k.with_leading(a, self.kappa);
        }
        let exponent: u32 = positions.iter().sum();
        let scaled = self.coeff(self.f, &k)? * self.base.as_f64().powi(exponent as i32);
        Ok(LimitRow {
            step,
            positions,
            k: k.value().ok_or_else(|| Error::Overflow("ladder index".into()))?,
            scaled,
            residual: (scaled - limit).norm(),
        })
    }
}

fn series(tail: u64, s: u32, limit: Complex64, rows: Vec<LimitRow>) -> LimitSeries {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (f64::from(r.step), r.residual)).collect();
    LimitSeries {
        tail,
        s,
        limit,
        fitted_rate: fitted_rate(&points),
        rows,
    }
}

/// Tabulates `R = |b^{a_1+…+a_s} f̂(k) − limit|` for every configured tail.
///
/// Single-digit ladders run `a_1 = a_min..=a_max` above the tail. Nested
/// ladders of depth `s >= 2` place digits at `top + t·(s−i+1)` for `i = 1..s`,
/// with `top` the leading position of the tail, while `a_1` stays within
/// `max_nested_level`.
pub fn run_lower_bound(config: &RunConfig) -> Result<LimitTable> {
    let lb: &LowerBoundConfig = &config.lower_bound;
    let base = config.base()?;
    if lb.kappa == 0 || lb.kappa >= base.get() {
        return Err(Error::Config(format!("kappa must be in 1..{}", base.get())));
    }
    if lb.a_min > lb.a_max {
        return Err(Error::Config("a_min exceeds a_max".into()));
    }
    let f = lb.function.build()?;
    if f.max_derivative() < 1 {
        return Err(Error::MissingData(format!("{}: needs f′", f.name())));
    }
    let ladder = Ladder {
        f: &f,
        base,
        kappa: lb.kappa,
        quad_order: config.quad_order,
        roots: RootTable::new(base),
    };
    super::with_jobs(config.jobs, || {
        let mut out = Vec::new();
        for &tail in &lb.tails {
            let tail_d = decompose(tail, base);
            let top = tail_d.leading_position();
            let limit = ladder.limit(1, &tail_d)?;
            let rows = (lb.a_min.max(top + 1)..=lb.a_max)
                .map(|a| ladder.point(a, vec![a], &tail_d, limit))
                .collect::<Result<Vec<_>>>()?;
            out.push(series(tail, 1, limit, rows));
            for s in 2..=lb.max_nested.min(f.max_derivative().min(u32::MAX as usize) as u32) {
                let limit = ladder.limit(s, &tail_d)?;
                let mut rows = Vec::new();
                let mut t = 1;
                while top + t * s <= lb.max_nested_level {
                    let positions: Vec<u32> = (1..=s).map(|i| top + t * (s - i + 1)).collect();
                    rows.push(ladder.point(t, positions, &tail_d, limit)?);
                    t += 1;
                }
                out.push(series(tail, s, limit, rows));
            }
        }
        Ok(LimitTable {
            function: f.name().to_string(),
            params: f.params_label(),
            base: base.get(),
            kappa: lb.kappa,
            series: out,
        })
    })
}
