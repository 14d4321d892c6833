//! Bound-verification sweeps: oracle coefficients against every selected bound.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{BoundSelection, RunConfig};
use super::lower_bound::LimitTable;
use crate::basekit::{decompose, mu, mu_per, mu_per_pair, Base, IndexDecomposition};
use crate::bounds::{
    bound_bernoulli, bound_cr, bound_gamma, bound_holder, bound_monomial, bound_power_series, bound_sobolev,
    bound_sobolev_periodic, gamma_row_sum_bound, BoundRecord, SmoothnessData, Theorem,
};
use crate::corpus::CorpusEntry;
use crate::error::{Error, Result};
use crate::exact::{eval_b_tilde, gamma_vanishes};
use crate::oracle::{fractional_variation, walsh_coeffs_2d_upto, walsh_coeffs_upto, FunctionSpec, VariationKind};

/// Coefficients at or below this magnitude count as zero against a zero bound.
pub const ZERO_FLOOR: f64 = 1e-13;

/// Roundoff allowance of a transformed table: `8 ε (level + 1) sup|g|`.
pub fn transform_noise(level: u32, sup: f64) -> f64 {
    8.0 * f64::EPSILON * f64::from(level + 1) * sup
}

fn sup_abs(g: impl Fn(f64) -> f64) -> f64 {
    (0..=1024).map(|i| g(f64::from(i) / 1024.0).abs()).fold(0.0, f64::max)
}

/// One `(function, k, bound)` comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub function: String,
    pub params: String,
    pub base: u32,
    pub k: u64,
    pub v: usize,
    pub mu_r: u64,
    pub mu_r_per: u64,
    pub coeff: Complex64,
    pub theorem: String,
    pub bound: f64,
    pub ratio: f64,
    /// The bound used a variation that is only a lower estimate.
    pub estimated: bool,
    /// Absolute resolution of the oracle coefficient.
    pub noise: f64,
}

/// A `(function, bound)` pair that produced no rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Skipped {
    pub function: String,
    pub params: String,
    pub theorem: String,
    pub reason: String,
}

/// Aggregate over all rows of one bound selection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundSummary {
    pub rows: usize,
    pub max_ratio: f64,
    pub max_ratio_function: String,
    pub max_ratio_k: u64,
    /// Ratios above `1 + tol_rel` with analytic constants.
    pub violations: usize,
    /// Rows whose bound used an estimated variation.
    pub estimated_rows: usize,
    /// Ratios above `1 + tol_rel` on estimated rows; not counted as violations.
    pub estimated_exceedances: usize,
    /// Ratios above `1 + tol_rel` where `|c| <= bound (1 + tol_rel) + noise`:
    /// the oracle cannot resolve the coefficient against the bound.
    pub unresolved: usize,
}

/// Rows plus the aggregates written to `summary.json`.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub base: u32,
    pub max_level: u32,
    pub tol_rel: f64,
    #[serde(skip)]
    pub rows: Vec<ReportRow>,
    pub total_rows: usize,
    pub violations: usize,
    pub estimated_exceedances: usize,
    pub unresolved: usize,
    pub bounds: BTreeMap<String, BoundSummary>,
    pub skipped: Vec<Skipped>,
    pub limit_table: Option<LimitTable>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// `|c| / bound`, with zero bounds compared against [`ZERO_FLOOR`].
pub fn ratio(coeff_abs: f64, bound: f64) -> f64 {
    if bound > 0.0 {
        coeff_abs / bound
    } else if coeff_abs <= ZERO_FLOOR {
        0.0
    } else {
        f64::INFINITY
    }
}

type BoundFn = Box<dyn Fn(&IndexDecomposition) -> Result<BoundRecord> + Send + Sync>;

struct Prepared {
    bound: BoundFn,
    /// `r` used for the `mu_r` columns.
    r: u32,
    estimated: bool,
}

fn skip(f: &FunctionSpec, sel: &BoundSelection, reason: impl Into<String>) -> Skipped {
    Skipped {
        function: f.name().to_string(),
        params: f.params_label(),
        theorem: sel.label(),
        reason: reason.into(),
    }
}

fn smoothness(f: &FunctionSpec, sel: &BoundSelection, config: &RunConfig, base: Base, min_r: u32) -> std::result::Result<SmoothnessData, String> {
    let r = sel.r.ok_or_else(|| "needs r".to_string())?;
    if r < min_r {
        return Err(format!("needs r >= {min_r}"));
    }
    SmoothnessData::from_function(f, r, sel.lambda_or_one(), base, config.variation_depth).map_err(|e| e.to_string())
}

/// Binds the bound selection to one corpus member, or explains why it does not apply.
fn prepare(entry: &CorpusEntry, f: &FunctionSpec, sel: &BoundSelection, config: &RunConfig, base: Base) -> std::result::Result<Prepared, String> {
    let from = |bound: BoundFn, r: u32, estimated: bool| Prepared { bound, r, estimated };
    match sel.bound {
        Theorem::Monomial => match *entry {
            CorpusEntry::Monomial { r } if r >= 1 => Ok(from(Box::new(move |k| Ok(bound_monomial(r, k))), r, false)),
            _ => Err("applies to x^r with r >= 1 only".into()),
        },
        Theorem::Bernoulli => match *entry {
            CorpusEntry::Bernoulli { r } if r >= 1 => Ok(from(Box::new(move |k| Ok(bound_bernoulli(r, k))), r, false)),
            _ => Err("applies to b_r with r >= 1 only".into()),
        },
        Theorem::PowerSeries => {
            let series = f.series().cloned().ok_or("no power-series coefficients")?;
            Ok(from(Box::new(move |k| bound_power_series(&series, k)), sel.r.unwrap_or(1), false))
        }
        Theorem::Holder => {
            let lambda = sel.lambda_or_one();
            let v = fractional_variation(f, lambda, config.variation_depth, base).map_err(|e| e.to_string())?;
            let estimated = v.kind == VariationKind::LowerEstimate;
            Ok(from(Box::new(move |k| bound_holder(lambda, v.value, k)), 1, estimated))
        }
        Theorem::SmoothCr => {
            let data = smoothness(f, sel, config, base, 1)?;
            let (r, estimated) = (data.r, data.has_estimated_variation());
            Ok(from(Box::new(move |k| bound_cr(&data, k)), r, estimated))
        }
        Theorem::Sobolev => {
            let data = smoothness(f, sel, config, base, 2)?;
            let r = data.r;
            Ok(from(Box::new(move |k| bound_sobolev(&data, k)), r, false))
        }
        Theorem::SobolevPeriodic => {
            let r = sel.r.ok_or("needs r")?;
            if r < 2 {
                return Err("needs r >= 2".into());
            }
            if entry.periodic_order().is_none_or(|p| p < r) {
                return Err(format!("not in the periodic space of order {r}"));
            }
            let data = smoothness(f, sel, config, base, 2)?;
            let int_abs = data.abs_integral_r;
            Ok(from(Box::new(move |k| bound_sobolev_periodic(int_abs, r, k)), r, false))
        }
        Theorem::Gamma | Theorem::RowSum => Err("double-coefficient bound; swept separately".into()),
    }
}

fn row(
    function: &str,
    params: String,
    k: &IndexDecomposition,
    r: u32,
    mu_r_per: u64,
    coeff: Complex64,
    theorem: String,
    record: &BoundRecord,
    estimated: bool,
) -> ReportRow {
    ReportRow {
        function: function.to_string(),
        params,
        base: k.base().get(),
        k: k.value().unwrap_or(u64::MAX),
        v: k.v(),
        mu_r: mu(r, k),
        mu_r_per,
        coeff,
        theorem,
        bound: record.value,
        ratio: ratio(coeff.norm(), record.value),
        estimated: estimated || record.note.as_deref().is_some_and(|n| n.contains("estimate")),
        noise: 0.0,
    }
}

fn corpus_rows(config: &RunConfig, base: Base, skipped: &mut Vec<Skipped>) -> Result<Vec<ReportRow>> {
    let n = base
        .checked_pow(config.max_level)
        .ok_or_else(|| Error::Overflow(format!("{base}^{}", config.max_level)))?;
    let mut rows = Vec::new();
    for entry in &config.corpus {
        let f = entry.build()?;
        let prepared: Vec<(String, Prepared)> = config
            .bounds
            .iter()
            .filter(|sel| !matches!(sel.bound, Theorem::Gamma | Theorem::RowSum))
            .filter_map(|sel| match prepare(entry, &f, sel, config, base) {
                Ok(p) => Some((sel.label(), p)),
                Err(reason) => {
                    skipped.push(skip(&f, sel, reason));
                    None
                }
            })
            .collect();
        if prepared.is_empty() || n <= 1 {
            continue;
        }
        let table = walsh_coeffs_upto(&f, base, config.max_level, config.quad_order)?;
        let noise = transform_noise(config.max_level, sup_abs(|x| f.eval(x))) + table.error_estimate;
        let name = f.name().to_string();
        let params = f.params_label();
        let entry_rows = (1..n)
            .into_par_iter()
            .map(|k| {
                let kd = decompose(k, base);
                let coeff = table.values[k as usize];
                prepared
                    .iter()
                    .map(|(label, p)| {
                        let record = (p.bound)(&kd)?;
                        let per = mu_per(p.r, &kd);
                        let mut out = row(&name, params.clone(), &kd, p.r, per, coeff, label.clone(), &record, p.estimated);
                        out.noise = noise;
                        Ok(out)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        rows.extend(entry_rows.into_iter().flatten());
    }
    Ok(rows)
}

fn gamma_rows(config: &RunConfig, base: Base, sel: &BoundSelection) -> Result<Vec<ReportRow>> {
    let r = sel.r.unwrap_or(2);
    if !(2..=12).contains(&r) {
        return Err(Error::Config(format!("{}: r must be in 2..=12", sel.label())));
    }
    let level = config.gamma_level.min(config.max_level);
    let n = base.checked_pow(level).ok_or_else(|| Error::Overflow(format!("{base}^{level}")))?;
    let kernel = move |x: f64, y: f64| eval_b_tilde(r as usize, x - y).unwrap_or(f64::NAN);
    let matrix = walsh_coeffs_2d_upto(&kernel, base, level, config.quad_order)?;
    let sup = sup_abs(|t| eval_b_tilde(r as usize, t).unwrap_or(f64::NAN));
    let noise = 2.0 * transform_noise(level, sup);
    let label = sel.label();
    let rows = (1..n)
        .into_par_iter()
        .map(|k| {
            let kd = decompose(k, base);
            (1..n)
                .map(|l| {
                    let ld = decompose(l, base);
                    let record = bound_gamma(r, &kd, &ld)?;
                    let per = mu_per_pair(r, &kd, &ld);
                    let mut out = row("gamma", format!("l={l}"), &kd, r, per, matrix.get(k, l), label.clone(), &record, false);
                    out.noise = noise;
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Empirical row sums `Σ_{k < b^max_level, γ_r(m,k) ≠ 0} b^{−μ_{r,per}(m,k)}`, stored in `coeff`.
fn row_sum_rows(config: &RunConfig, base: Base, sel: &BoundSelection) -> Result<Vec<ReportRow>> {
    let r = sel.r.unwrap_or(2);
    let n = base
        .checked_pow(config.max_level)
        .ok_or_else(|| Error::Overflow(format!("{base}^{}", config.max_level)))?;
    let m_count = base
        .checked_pow(config.gamma_level.min(config.max_level))
        .ok_or_else(|| Error::Overflow("row-sum range".into()))?;
    let label = sel.label();
    let ks: Vec<IndexDecomposition> = (1..n).map(|k| decompose(k, base)).collect();
    (1..m_count)
        .into_par_iter()
        .map(|m| {
            let md = decompose(m, base);
            let sum: f64 = ks
                .iter()
                .filter(|kd| !gamma_vanishes(r, &md, kd))
                .map(|kd| base.as_f64().powf(-(mu_per_pair(r, &md, kd) as f64)))
                .sum();
            let record = gamma_row_sum_bound(r, &md)?;
            let per = mu_per(r, &md);
            Ok(row("row_sum", format!("r={r}"), &md, r, per, Complex64::new(sum, 0.0), label.clone(), &record, false))
        })
        .collect()
}

fn summarize(rows: &[ReportRow], tol_rel: f64) -> BTreeMap<String, BoundSummary> {
    let mut out: BTreeMap<String, BoundSummary> = BTreeMap::new();
    for row in rows {
        let s = out.entry(row.theorem.clone()).or_insert_with(|| BoundSummary {
            rows: 0,
            max_ratio: 0.0,
            max_ratio_function: String::new(),
            max_ratio_k: 0,
            violations: 0,
            estimated_rows: 0,
            estimated_exceedances: 0,
            unresolved: 0,
        });
        s.rows += 1;
        if row.ratio > s.max_ratio || s.max_ratio_function.is_empty() {
            s.max_ratio = row.ratio;
            s.max_ratio_function = row.function.clone();
            s.max_ratio_k = row.k;
        }
        let exceeds = row.ratio > 1.0 + tol_rel;
        if exceeds && row.coeff.norm() <= row.bound * (1.0 + tol_rel) + row.noise {
            s.unresolved += 1;
        } else if row.estimated {
            s.estimated_rows += 1;
            s.estimated_exceedances += usize::from(exceeds);
        } else {
            s.violations += usize::from(exceeds);
        }
    }
    out
}

/// Runs every selected bound over `1 <= k < b^max_level` for each corpus member.
///
/// Rows are ordered by corpus member, then `k`, then bound selection, followed
/// by the double-coefficient sweeps; the order does not depend on `jobs`.
pub fn run_verify(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    super::with_jobs(config.jobs, || {
        let base = config.base()?;
        let mut skipped = Vec::new();
        let mut rows = corpus_rows(config, base, &mut skipped)?;
        for sel in &config.bounds {
            match sel.bound {
                Theorem::Gamma => rows.extend(gamma_rows(config, base, sel)?),
                Theorem::RowSum => rows.extend(row_sum_rows(config, base, sel)?),
                _ => {}
            }
        }
        let bounds = summarize(&rows, config.tol_rel);
        Ok(VerificationReport {
            base: config.base,
            max_level: config.max_level,
            tol_rel: config.tol_rel,
            total_rows: rows.len(),
            violations: bounds.values().map(|s| s.violations).sum(),
            estimated_exceedances: bounds.values().map(|s| s.estimated_exceedances).sum(),
            unresolved: bounds.values().map(|s| s.unresolved).sum(),
            bounds,
            rows,
            skipped,
            limit_table: None,
        })
    })
}
