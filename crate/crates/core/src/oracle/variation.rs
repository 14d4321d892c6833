//! Fractional-order variation `V_λ(f) = sup Σ |x_i − x_{i−1}|^{1−λ} |f(x_i) − f(x_{i−1})|`.

use super::function::FunctionSpec;
use super::quadrature::abs_integral;
use crate::basekit::Base;
use crate::error::{Error, Result};

/// Whether a variation value is exact or only a lower estimate of the supremum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariationKind {
    /// `∫|f′|` by quadrature (λ = 1 with f′ available).
    Integral,
    /// Maximum over nested b-adic partitions; never exceeds the true value.
    LowerEstimate,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct VariationEstimate {
    pub value: f64,
    pub kind: VariationKind,
}

/// `V_λ(f)`. With `λ = 1` and `f′` available this is `∫|f′|`; otherwise the
/// partition sum is maximised over uniform partitions of sizes `b^1..b^depth`.
pub fn fractional_variation(f: &FunctionSpec, lambda: f64, depth: u32, base: Base) -> Result<VariationEstimate> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain {
            what: "lambda",
            value: lambda,
            domain: "(0, 1]",
        });
    }
    if lambda == 1.0 && f.max_derivative() >= 1 {
        let value = abs_integral(|x| f.derivative(1, x).unwrap_or(f64::NAN), 8)?;
        return Ok(VariationEstimate {
            value,
            kind: VariationKind::Integral,
        });
    }
    Ok(VariationEstimate {
        value: partition_lower_estimate(f, lambda, depth, base)?,
        kind: VariationKind::LowerEstimate,
    })
}

/// Running maximum of the partition sums on `b^1, …, b^depth` equal pieces.
pub(crate) fn partition_lower_estimate(f: &FunctionSpec, lambda: f64, depth: u32, base: Base) -> Result<f64> {
    let mut best = 0.0f64;
    for level in 1..=depth {
        let n = base
            .checked_pow(level)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| Error::Overflow(format!("{base}^{level} partition points")))?;
        let h = 1.0 / n as f64;
        let weight = h.powf(1.0 - lambda);
        let mut prev = f.eval(0.0);
        let mut sum = 0.0;
        for i in 1..=n {
            let y = f.eval(i as f64 * h);
            if !y.is_finite() {
                return Err(Error::NonFinite {
                    x: i as f64 * h,
                    value: y,
                });
            }
            sum += weight * (y - prev).abs();
            prev = y;
        }
        best = best.max(sum);
    }
    Ok(best)
}
