//! Explicit decay bounds for Walsh coefficients, each returned in factored
//! form `b^{−exponent} · constant`.

mod kernel;

pub use kernel::{kernel_periodic, kernel_sobolev, representer_periodic, representer_sobolev};

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::basekit::{mu, mu_per, mu_per_pair, Base, IndexDecomposition};
use crate::error::{Error, Result};
use crate::oracle::{abs_integral, falling_ratio, fractional_variation, FunctionSpec, PowerSeries, UnitRule, VariationEstimate, VariationKind};

/// Which bound produced a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// Walsh coefficients of `x^r`.
    Monomial,
    /// Power series through the weighted coefficient sums.
    PowerSeries,
    /// Functions of bounded fractional variation.
    Holder,
    /// `C^r` functions with `V_λ(f^{(r)}) < ∞`.
    SmoothCr,
    /// Scaled Bernoulli polynomials `b_r`.
    Bernoulli,
    /// Double coefficients of `b̃_r(x − y)`.
    Gamma,
    /// Row sums of `b^{−μ_{r,per}(m,k)}` over non-vanishing `γ_r(m,k)`.
    RowSum,
    /// The Sobolev space `H_r`.
    Sobolev,
    /// The periodic subspace `H_{r,per}`.
    SobolevPeriodic,
}

impl Theorem {
    pub const ALL: [Theorem; 9] = [
        Theorem::Monomial,
        Theorem::PowerSeries,
        Theorem::Holder,
        Theorem::SmoothCr,
        Theorem::Bernoulli,
        Theorem::Gamma,
        Theorem::RowSum,
        Theorem::Sobolev,
        Theorem::SobolevPeriodic,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Theorem::Monomial => "monomial",
            Theorem::PowerSeries => "power_series",
            Theorem::Holder => "holder",
            Theorem::SmoothCr => "smooth_cr",
            Theorem::Bernoulli => "bernoulli",
            Theorem::Gamma => "gamma",
            Theorem::RowSum => "row_sum",
            Theorem::Sobolev => "sobolev",
            Theorem::SobolevPeriodic => "sobolev_periodic",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.tag() == tag)
            .ok_or_else(|| Error::Config(format!("unknown bound `{tag}`")))
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A bound value together with its factorisation `b^{−exponent} · constant`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRecord {
    pub theorem: Theorem,
    pub value: f64,
    pub exponent: f64,
    pub constant: f64,
    /// Set when an input was only a lower estimate or the bound was extended
    /// beyond its stated range.
    pub note: Option<String>,
}

impl BoundRecord {
    fn new(theorem: Theorem, base: Base, exponent: f64, constant: f64) -> Self {
        BoundRecord {
            theorem,
            value: constant * base.as_f64().powf(-exponent),
            exponent,
            constant,
            note: None,
        }
    }

    fn zero(theorem: Theorem) -> Self {
        BoundRecord {
            theorem,
            value: 0.0,
            exponent: 0.0,
            constant: 0.0,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Base-dependent constants shared by the bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    /// `1 / (2 sin(π/b))`.
    pub sin_inv: f64,
    /// `1 + 1/b + 1/(b(b+1))`.
    pub growth: f64,
    /// `3 + 2/b + (2b+1)/(b−1)`.
    pub row_sum: f64,
    /// `7/2 + 2/b + (2b+1)/(b−1)`.
    pub row_sum_periodic: f64,
}

impl Constants {
    pub fn new(base: Base) -> Self {
        let b = base.as_f64();
        let tail = 2.0 / b + (2.0 * b + 1.0) / (b - 1.0);
        Constants {
            sin_inv: 1.0 / (2.0 * (PI / b).sin()),
            growth: 1.0 + 1.0 / b + 1.0 / (b * (b + 1.0)),
            row_sum: 3.0 + tail,
            row_sum_periodic: 3.5 + tail,
        }
    }
}

/// `3^{min(1,u)} (2 sin π/b)^{−u} (1 + 1/b + 1/(b(b+1)))^{max(0,u−1)}`.
fn digit_factor(c: &Constants, u: u32) -> f64 {
    let three = if u == 0 { 1.0 } else { 3.0 };
    three * c.sin_inv.powi(u as i32) * c.growth.powi(u.saturating_sub(1) as i32)
}

/// Bound on `|χ_{r,v}(k)|`: the minimum over `0 <= u <= min(v, r)` of
/// `b^{−μ_u(k)} r!/(r−u+1)! · 3^{min(1,u)} (2 sin π/b)^{−u} (…)^{max(0,u−1)}`; zero for `v > r`.
pub fn bound_monomial(r: u32, k: &IndexDecomposition) -> BoundRecord {
    let v = k.v() as u32;
    if v > r && r >= 1 {
        return BoundRecord::zero(Theorem::Monomial);
    }
    let base = k.base();
    let c = Constants::new(base);
    (0..=v.min(r))
        .map(|u| {
            let constant = falling_ratio(r as usize, u as usize) * digit_factor(&c, u);
            BoundRecord::new(Theorem::Monomial, base, mu(u, k) as f64, constant)
        })
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .unwrap_or_else(|| BoundRecord::zero(Theorem::Monomial))
}

/// `‖f^{(v−1)}‖ = Σ_{r>=v} r!|f_r|/(r−v+1)!` as `(partial sum, tail bound)`.
pub fn seminorm(series: &PowerSeries, v: usize) -> Result<(f64, f64)> {
    if v == 0 {
        return Err(Error::InvalidArgument("seminorm order v must be >= 1".into()));
    }
    series.weighted_abs_sum(v, v)
}

/// Bound for power series: the minimum over feasible `u <= v` of
/// `b^{−μ_u(k)} 3^{min(1,u)} (2 sin π/b)^{−u} (…)^{max(0,u−1)} Σ_{r>=v} r!|f_r|/(r−u+1)!`.
///
/// `u` is feasible when the weighted sum converges for the untruncated series.
pub fn bound_power_series(series: &PowerSeries, k: &IndexDecomposition) -> Result<BoundRecord> {
    let v = k.v();
    let base = k.base();
    let c = Constants::new(base);
    let mut best: Option<BoundRecord> = None;
    for u in 0..=v {
        if !series.weighted_sum_converges(u) {
            continue;
        }
        let (sum, tail) = series.weighted_abs_sum(v, u)?;
        let record = BoundRecord::new(
            Theorem::PowerSeries,
            base,
            mu(u as u32, k) as f64,
            digit_factor(&c, u as u32) * (sum + tail),
        );
        if best.as_ref().is_none_or(|b| record.value < b.value) {
            best = Some(record);
        }
    }
    best.ok_or_else(|| Error::Divergent(format!("no feasible u <= {v} for {:?}", series.decay())))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "lambda",
            value: lambda,
            domain: "(0, 1]",
        })
    }
}

/// `(b−1)^{1+λ} b^{−λ a_1} V_λ(f)` for `k >= 1`.
pub fn bound_holder(lambda: f64, v_lambda: f64, k: &IndexDecomposition) -> Result<BoundRecord> {
    check_lambda(lambda)?;
    let Some(lead) = k.leading() else {
        return Err(Error::InvalidArgument("the variation bound needs k >= 1".into()));
    };
    let base = k.base();
    let constant = (base.as_f64() - 1.0).powf(1.0 + lambda) * v_lambda;
    Ok(BoundRecord::new(Theorem::Holder, base, lambda * f64::from(lead.position), constant))
}

/// Inputs for the smoothness-based bounds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothnessData {
    pub r: u32,
    pub lambda: f64,
    /// `f^{(s)}(0)` for `s = 0..r`.
    pub derivatives_at_zero: Vec<f64>,
    /// `∫_0^1 f^{(s)}` for `s = 0..=r`.
    pub integrals: Vec<f64>,
    /// `∫_0^1 |f^{(r)}|`.
    pub abs_integral_r: f64,
    /// `V_λ(f^{(s)})` for `s = 0..=r`.
    pub variations: Vec<VariationEstimate>,
}

impl SmoothnessData {
    /// Collects the data from the derivative evaluators of `f`.
    ///
    /// `∫ f^{(s)}` for `s >= 1` is `f^{(s−1)}(1) − f^{(s−1)}(0)`; variations use
    /// `depth` nested b-adic levels when they are not available as integrals.
    pub fn from_function(f: &FunctionSpec, r: u32, lambda: f64, base: Base, depth: u32) -> Result<Self> {
        check_lambda(lambda)?;
        let r_us = r as usize;
        if r_us > f.max_derivative() {
            return Err(Error::MissingData(format!(
                "{}: needs {r} derivatives, has {}",
                f.name(),
                f.max_derivative()
            )));
        }
        let derivatives_at_zero = (0..r_us).map(|s| f.derivative(s, 0.0)).collect::<Result<Vec<_>>>()?;
        let rule = UnitRule::new(16)?;
        let mut integrals = vec![rule.integrate_composite(0.0, 1.0, 32, |x| f.eval(x))?];
        for s in 1..=r_us {
            integrals.push(f.derivative(s - 1, 1.0)? - f.derivative(s - 1, 0.0)?);
        }
        let abs_integral_r = abs_integral(|x| f.derivative(r_us, x).unwrap_or(f64::NAN), 8)?;
        let variations = (0..=r_us)
            .map(|s| fractional_variation(&f.derivative_spec(s)?, lambda, depth, base))
            .collect::<Result<Vec<_>>>()?;
        Ok(SmoothnessData {
            r,
            lambda,
            derivatives_at_zero,
            integrals,
            abs_integral_r,
            variations,
        })
    }

    /// Whether any variation input is only a lower estimate.
    pub fn has_estimated_variation(&self) -> bool {
        self.variations.iter().any(|v| v.kind == VariationKind::LowerEstimate)
    }

    fn variation(&self, s: u32) -> Result<&VariationEstimate> {
        self.variations
            .get(s as usize)
            .ok_or_else(|| Error::MissingData(format!("V_λ(f^({s}))")))
    }

    fn integral(&self, s: u32) -> Result<f64> {
        self.integrals
            .get(s as usize)
            .copied()
            .ok_or_else(|| Error::MissingData(format!("∫ f^({s})")))
    }

    fn derivative_at_zero(&self, s: u32) -> Result<f64> {
        self.derivatives_at_zero
            .get(s as usize)
            .copied()
            .ok_or_else(|| Error::MissingData(format!("f^({s})(0)")))
    }

    fn variation_note(&self, used: &[u32]) -> Option<String> {
        used.iter()
            .any(|&s| self.variations.get(s as usize).is_some_and(|v| v.kind == VariationKind::LowerEstimate))
            .then(|| "variation is a lower estimate".to_string())
    }
}

/// Bound for `f ∈ C^r` with `V_λ(f^{(r)}) < ∞`, split by `v > r`, `v = r` and `v < r`.
pub fn bound_cr(data: &SmoothnessData, k: &IndexDecomposition) -> Result<BoundRecord> {
    if k.is_zero() {
        return Err(Error::InvalidArgument("the smoothness bound needs k >= 1".into()));
    }
    check_lambda(data.lambda)?;
    let base = k.base();
    let b = base.as_f64();
    let c = Constants::new(base);
    let (r, lambda) = (data.r, data.lambda);
    let v = k.v() as u32;
    let holder = (b - 1.0).powf(1.0 + lambda);
    let positions: Vec<u32> = k.positions().collect();
    let mu_r = mu(r, k) as f64;

    let (record, used) = if v > r {
        let a_next = f64::from(positions[r as usize]);
        let constant = data.variation(r)?.value
            * holder
            * (1.0 + 2.0 * b.powf(-lambda))
            * c.sin_inv.powi(r as i32)
            * c.growth.powi(r as i32 - 1);
        (
            BoundRecord::new(Theorem::SmoothCr, base, mu_r + lambda * a_next, constant),
            vec![r],
        )
    } else if v == r {
        let a_r = f64::from(positions[r as usize - 1]);
        let inner = data.integral(r)?.abs() + 2.0 * holder * b.powf(-lambda * a_r) * data.variation(r)?.value;
        let constant = c.sin_inv.powi(r as i32) * c.growth.powi(r as i32 - 1) * inner;
        (BoundRecord::new(Theorem::SmoothCr, base, mu_r, constant), vec![r])
    } else {
        let a_v = f64::from(positions[v as usize - 1]);
        let mut taylor = 0.0;
        for s in v..r {
            let fact: f64 = (1..=(s - v + 1)).map(f64::from).product();
            taylor += data.derivative_at_zero(s)?.abs() / fact;
        }
        let inner = 3.0 * taylor
            + data.integral(v)?.abs()
            + 2.0 * holder * b.powf(-lambda * a_v) * data.variation(v)?.value;
        let constant = c.sin_inv.powi(v as i32) * c.growth.powi(v as i32 - 1) * inner;
        (BoundRecord::new(Theorem::SmoothCr, base, mu_r, constant), vec![v])
    };
    Ok(match data.variation_note(&used) {
        Some(note) => record.with_note(note),
        None => record,
    })
}

/// Bound on `|β_{r,v}(k)|`: `b^{−μ_{r,per}(k)} (2 sin π/b)^{−r} (…)^{r−2}` for `r >= 2`.
/// For `r = 1` the exact magnitude envelope `b^{−a_1}/(2 sin π/b)` of `β_{1,1}` is used.
pub fn bound_bernoulli(r: u32, k: &IndexDecomposition) -> BoundRecord {
    let base = k.base();
    let v = k.v() as u32;
    if r == 0 || k.is_zero() || v > r {
        return BoundRecord::zero(Theorem::Bernoulli);
    }
    let c = Constants::new(base);
    if r == 1 {
        return BoundRecord::new(Theorem::Bernoulli, base, mu_per(1, k) as f64, c.sin_inv)
            .with_note("r = 1 uses the exact envelope of β_{1,1}");
    }
    let constant = c.sin_inv.powi(r as i32) * c.growth.powi(r as i32 - 2);
    BoundRecord::new(Theorem::Bernoulli, base, mu_per(r, k) as f64, constant)
}

/// Bound on `|γ_r(k, l)|`: `2 b^{−μ_{r,per}(k,l)} (2 sin π/b)^{−r} (…)^{r−2}`.
pub fn bound_gamma(r: u32, k: &IndexDecomposition, l: &IndexDecomposition) -> Result<BoundRecord> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("γ_r bound needs r >= 2, got {r}")));
    }
    if k.is_zero() || l.is_zero() {
        return Ok(BoundRecord::zero(Theorem::Gamma).with_note("γ_r vanishes when k or l is 0"));
    }
    let base = k.base();
    let c = Constants::new(base);
    let constant = 2.0 * c.sin_inv.powi(r as i32) * c.growth.powi(r as i32 - 2);
    Ok(BoundRecord::new(Theorem::Gamma, base, mu_per_pair(r, k, l) as f64, constant))
}

/// `b^{−μ_{r,per}(m)} (3 + 2/b + (2b+1)/(b−1))`.
pub fn gamma_row_sum_bound(r: u32, m: &IndexDecomposition) -> Result<BoundRecord> {
    if r < 2 || m.is_zero() {
        return Err(Error::InvalidArgument("row-sum bound needs r > 1 and m >= 1".into()));
    }
    let base = m.base();
    Ok(BoundRecord::new(
        Theorem::RowSum,
        base,
        mu_per(r, m) as f64,
        Constants::new(base).row_sum,
    ))
}

fn periodic_tail(c: &Constants, r: u32, row: f64) -> f64 {
    2.0 * c.sin_inv.powi(r as i32) * c.growth.powi(r as i32 - 2) * row
}

/// Bound for `f ∈ H_r`:
/// `Σ_{s=v}^{r} |∫f^{(s)}| b^{−μ_{s,per}(k)} (2 sin π/b)^{−s} (…)^{max(0,s−2)}
///  + ∫|f^{(r)}| · 2 b^{−μ_{r,per}(k)} (2 sin π/b)^{−r} (…)^{r−2} (3 + 2/b + (2b+1)/(b−1))`.
///
/// The factored exponent is `μ_{r,per}(k)`, the smallest exponent present.
pub fn bound_sobolev(data: &SmoothnessData, k: &IndexDecomposition) -> Result<BoundRecord> {
    let r = data.r;
    if r <= 1 {
        return Err(Error::InvalidArgument(format!("Sobolev bounds need r > 1, got {r}")));
    }
    if k.is_zero() {
        return Err(Error::InvalidArgument("the Sobolev bound needs k >= 1".into()));
    }
    let base = k.base();
    let c = Constants::new(base);
    let v = k.v() as u32;
    let mut value = 0.0;
    for s in v..=r {
        value += data.integral(s)?.abs()
            * base.as_f64().powf(-(mu_per(s, k) as f64))
            * c.sin_inv.powi(s as i32)
            * c.growth.powi(s.saturating_sub(2) as i32);
    }
    let exponent = mu_per(r, k) as f64;
    value += data.abs_integral_r * base.as_f64().powf(-exponent) * periodic_tail(&c, r, c.row_sum);
    Ok(BoundRecord {
        theorem: Theorem::Sobolev,
        value,
        exponent,
        constant: value * base.as_f64().powf(exponent),
        note: None,
    })
}

/// Bound for `f ∈ H_{r,per}`:
/// `∫|f^{(r)}| · 2 b^{−μ_{r,per}(k)} (2 sin π/b)^{−r} (…)^{r−2} (7/2 + 2/b + (2b+1)/(b−1))`.
pub fn bound_sobolev_periodic(int_abs_fr: f64, r: u32, k: &IndexDecomposition) -> Result<BoundRecord> {
    if r <= 1 {
        return Err(Error::InvalidArgument(format!("Sobolev bounds need r > 1, got {r}")));
    }
    if k.is_zero() {
        return Err(Error::InvalidArgument("the Sobolev bound needs k >= 1".into()));
    }
    let base = k.base();
    let c = Constants::new(base);
    Ok(BoundRecord::new(
        Theorem::SobolevPeriodic,
        base,
        mu_per(r, k) as f64,
        int_abs_fr * periodic_tail(&c, r, c.row_sum_periodic),
    ))
}
