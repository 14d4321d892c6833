//! Quadrature ground truth for Walsh coefficients.
//!
//! Every routine here works from function values alone, so it can check the
//! closed forms and recursions in [`crate::exact`] independently.

mod antiderivative;
mod function;
mod quadrature;
mod two_dim;
mod variation;

pub use antiderivative::iterated_antiderivative;
pub use function::{falling_ratio, finite_difference, DerivativeFn, FunctionSpec, PowerSeries, SeriesDecay};
pub use quadrature::{abs_integral, Neumaier, UnitRule};
pub use two_dim::{walsh_coeff_2d, walsh_coeffs_2d_upto, CoefficientMatrix};
pub use variation::{fractional_variation, VariationEstimate, VariationKind};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basekit::{Base, IndexDecomposition};
use crate::error::{Error, Result};
use crate::walsh::{fwt_in_place, wal_exponent_on_grid, Direction, RootTable};

/// Default Gauss–Legendre points per cell.
pub const DEFAULT_ORDER: usize = 8;
/// Default minimum refinement level.
pub const DEFAULT_MIN_LEVEL: u32 = 4;

/// How a coefficient value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Oracle,
    Recursion,
    Series,
}

/// A single Walsh coefficient with provenance and an error estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientRecord {
    pub k: IndexDecomposition,
    pub value: Complex64,
    pub method: Method,
    pub error_estimate: f64,
}

/// `f̂(k) = ∫_0^1 f(x) conj(wal_k(x)) dx` by Gauss–Legendre on the
/// `b^{max(a_1, min_level)}` cells where `wal_k` is constant.
///
/// The error estimate is the difference to the same sum with one fewer node per cell.
pub fn walsh_coeff(
    f: &FunctionSpec,
    k: &IndexDecomposition,
    quad_order: usize,
    min_level: u32,
) -> Result<CoefficientRecord> {
    let fine = UnitRule::new(quad_order)?;
    let coarse = UnitRule::new(quad_order - 1).ok();
    let value = cell_sum(f, k, &fine, min_level)?;
    let error_estimate = match coarse {
        Some(rule) => (cell_sum(f, k, &rule, min_level)? - value).norm(),
        None => 0.0,
    };
    Ok(CoefficientRecord {
        k: k.clone(),
        value,
        method: Method::Oracle,
        error_estimate,
    })
}

fn cell_sum(f: &FunctionSpec, k: &IndexDecomposition, rule: &UnitRule, min_level: u32) -> Result<Complex64> {
    let base = k.base();
    let a1 = k.leading_position();
    let level = a1.max(min_level);
    let cells = cell_count(base, level)?;
    let per_coarse = cell_count(base, level - a1)?;
    let n = cells as f64;
    // integrals are bucketed by the exponent of conj(wal_k) before the
    // complex weights are applied
    let mut buckets = vec![Neumaier::default(); base.get() as usize];
    let mut e = 0;
    for j in 0..cells {
        if j % per_coarse == 0 {
            e = wal_exponent_on_grid(k, j / per_coarse, a1);
        }
        let v = rule.integrate(j as f64 / n, (j + 1) as f64 / n, |x| f.eval(x))?;
        buckets[e as usize].add(v);
    }
    let table = RootTable::new(base);
    Ok(buckets
        .iter()
        .enumerate()
        .map(|(e, s)| table.pow(-(e as i64)) * s.sum())
        .sum())
}

fn cell_count(base: Base, level: u32) -> Result<u64> {
    base.checked_pow(level)
        .filter(|&n| n <= 1 << 32)
        .ok_or_else(|| Error::Overflow(format!("{base}^{level} quadrature cells")))
}

/// All coefficients `f̂(k)`, `k < b^m`, at a common resolution.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub base: Base,
    pub level: u32,
    pub values: Vec<Complex64>,
    /// Largest difference to the same table computed with one fewer node per cell.
    pub error_estimate: f64,
}

impl CoefficientTable {
    pub fn get(&self, k: u64) -> Option<Complex64> {
        self.values.get(k as usize).copied()
    }
}

/// Every coefficient with `k < b^level` from `b^level` cell integrals and one
/// fast transform. Agrees with [`walsh_coeff`] at `min_level = level`.
pub fn walsh_coeffs_upto(f: &FunctionSpec, base: Base, level: u32, quad_order: usize) -> Result<CoefficientTable> {
    let values = transformed_cells(f, base, level, &UnitRule::new(quad_order)?)?;
    let error_estimate = match UnitRule::new(quad_order - 1) {
        Ok(rule) => {
            let coarse = transformed_cells(f, base, level, &rule)?;
            values
                .iter()
                .zip(&coarse)
                .map(|(a, c)| (a - c).norm())
                .fold(0.0, f64::max)
        }
        Err(_) => 0.0,
    };
    Ok(CoefficientTable {
        base,
        level,
        values,
        error_estimate,
    })
}

fn transformed_cells(f: &FunctionSpec, base: Base, level: u32, rule: &UnitRule) -> Result<Vec<Complex64>> {
    let n = cell_count(base, level)? as usize;
    let width = 1.0 / n as f64;
    let mut cells = (0..n)
        .into_par_iter()
        .map(|j| {
            let lo = j as f64 * width;
            let hi = if j + 1 == n { 1.0 } else { (j + 1) as f64 * width };
            rule.integrate(lo, hi, |x| f.eval(x))
                .map(|v| Complex64::new(v * n as f64, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    fwt_in_place(base, level, &mut cells, Direction::Forward);
    Ok(cells)
}
