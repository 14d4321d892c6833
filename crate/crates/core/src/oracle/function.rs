//! Functions on `[0, 1]` together with the derivative and series data that
//! the oracles and bounds consume.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// `(s, x) ↦ f^{(s)}(x)`.
pub type DerivativeFn = Arc<dyn Fn(usize, f64) -> f64 + Send + Sync>;

/// How the Taylor coefficients `f_r` behave for large `r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeriesDecay {
    /// `f_r = 0` beyond the stated degree.
    Polynomial,
    /// `|f_r| <= scale · rate^r / r!`.
    Factorial { rate: f64, scale: f64 },
    /// `|f_r| <= scale · ratio^r`, `0 <= ratio < 1`.
    Geometric { ratio: f64, scale: f64 },
    /// `|f_r| <= scale · r^{-delta}` for `r >= 1`.
    Power { delta: f64, scale: f64 },
}

/// Taylor coefficients at 0, `f(x) = Σ f_r x^r` on `[0, 1]`.
#[derive(Clone)]
pub struct PowerSeries {
    coeff: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
    /// Last possibly nonzero index, if finite.
    degree: Option<usize>,
    decay: SeriesDecay,
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PowerSeries")
            .field("degree", &self.degree)
            .field("decay", &self.decay)
            .finish()
    }
}

impl PowerSeries {
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let degree = coeffs.len().saturating_sub(1);
        PowerSeries {
            coeff: Arc::new(move |r| coeffs.get(r).copied().unwrap_or(0.0)),
            degree: Some(degree),
            decay: SeriesDecay::Polynomial,
        }
    }

    /// An infinite series described by its coefficients and a decay envelope.
    pub fn infinite<F>(coeff: F, decay: SeriesDecay) -> Self
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        PowerSeries {
            coeff: Arc::new(coeff),
            degree: None,
            decay,
        }
    }

    /// A series truncated after `degree`, keeping the decay law of the full series
    /// for feasibility questions.
    pub fn truncated<F>(coeff: F, degree: usize, decay: SeriesDecay) -> Self
    where
        F: Fn(usize) -> f64 + Send + Sync + 'static,
    {
        PowerSeries {
            coeff: Arc::new(coeff),
            degree: Some(degree),
            decay,
        }
    }

    pub fn coeff(&self, r: usize) -> f64 {
        match self.degree {
            Some(d) if r > d => 0.0,
            _ => (self.coeff)(r),
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn decay(&self) -> SeriesDecay {
        self.decay
    }

    /// Whether `Σ_r r!/(r−u+1)! |f_r|` converges for the full (untruncated)
    /// series described by the decay law.
    pub fn weighted_sum_converges(&self, u: usize) -> bool {
        match self.decay {
            SeriesDecay::Power { delta, .. } => u + 2 <= delta.ceil() as usize,
            _ => true,
        }
    }

    /// `Σ_{r >= from} r!/(r−u+1)! |f_r|` (requires `from >= u`), returned as
    /// `(partial sum, certified bound on the neglected tail)`.
    pub fn weighted_abs_sum(&self, from: usize, u: usize) -> Result<(f64, f64)> {
        if from < u {
            return Err(Error::InvalidArgument(format!(
                "weighted sum from r={from} needs r >= u={u}"
            )));
        }
        let weight = |r: usize| falling_ratio(r, u);
        if let Some(d) = self.degree {
            let s = (from..=d.max(from)).map(|r| weight(r) * self.coeff(r).abs()).sum();
            return Ok((s, 0.0));
        }
        if !self.weighted_sum_converges(u) {
            return Err(Error::Divergent(format!(
                "Σ r!/(r-{u}+1)! |f_r| diverges for {:?}",
                self.decay
            )));
        }
        let mut sum = 0.0;
        let mut r = from;
        loop {
            let term = weight(r) * self.coeff(r).abs();
            sum += term;
            let tail = self.tail_after(r, u);
            if r >= from + 8 && (tail <= 1e-17 * sum.max(f64::MIN_POSITIVE) || r > 100_000) {
                return Ok((sum, tail));
            }
            r += 1;
        }
    }

    /// Envelope bound on `Σ_{r > n} r!/(r−u+1)! |f_r|`.
    fn tail_after(&self, n: usize, u: usize) -> f64 {
        let m = (n + 1) as f64;
        match self.decay {
            SeriesDecay::Polynomial => 0.0,
            SeriesDecay::Factorial { rate, scale } => {
                // terms scale·a^r/(r−u+1)!; successive ratio a/(r−u+2)
                let first = scale * falling_ratio(n + 1, u) * envelope_factorial(rate, n + 1);
                let q = rate.abs() / ((n + 3 - u) as f64);
                if q < 1.0 {
                    first / (1.0 - q)
                } else {
                    f64::INFINITY
                }
            }
            SeriesDecay::Geometric { ratio, scale } => {
                let first = scale * falling_ratio(n + 1, u) * ratio.powf(m);
                let q = ratio * ((m + 1.0) / m).powi(u as i32 - 1);
                if q < 1.0 {
                    first / (1.0 - q)
                } else {
                    f64::INFINITY
                }
            }
            SeriesDecay::Power { delta, scale } => {
                // r!/(r−u+1)! <= r^{u−1}; Σ_{r>n} r^{u−1−δ} <= ∫_n^∞
                let p = delta - u as f64;
                if p > 0.0 && n >= 1 {
                    scale * (n as f64).powf(-p) / p
                } else {
                    f64::INFINITY
                }
            }
        }
    }
}

/// `r!/(r−u+1)!` for `r >= u`; `u = 0` gives `1/(r+1)`.
pub fn falling_ratio(r: usize, u: usize) -> f64 {
    if u == 0 {
        return 1.0 / (r + 1) as f64;
    }
    ((r - u + 2)..=r).map(|t| t as f64).product()
}

fn envelope_factorial(rate: f64, r: usize) -> f64 {
    (1..=r).fold(1.0, |acc, t| acc * rate.abs() / t as f64)
}

/// A named function with derivatives available through order `max_derivative`.
#[derive(Clone)]
pub struct FunctionSpec {
    name: String,
    params: Vec<(String, f64)>,
    derivative: DerivativeFn,
    max_derivative: usize,
    series: Option<PowerSeries>,
}

impl fmt::Debug for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionSpec")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("max_derivative", &self.max_derivative)
            .field("series", &self.series)
            .finish()
    }
}

impl FunctionSpec {
    pub fn new<F>(name: impl Into<String>, max_derivative: usize, derivative: F) -> Self
    where
        F: Fn(usize, f64) -> f64 + Send + Sync + 'static,
    {
        FunctionSpec {
            name: name.into(),
            params: Vec::new(),
            derivative: Arc::new(derivative),
            max_derivative,
            series: None,
        }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: f64) -> Self {
        self.params.push((key.into(), value));
        self
    }

    pub fn with_series(mut self, series: PowerSeries) -> Self {
        self.series = Some(series);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    /// `key=value` pairs joined by `;`. Integral values print as integers,
    /// others with 17 significant digits.
    pub fn params_label(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| {
                if v.fract() == 0.0 && v.abs() < 1e15 {
                    format!("{k}={}", *v as i64)
                } else {
                    format!("{k}={}", crate::format_real(*v))
                }
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn max_derivative(&self) -> usize {
        self.max_derivative
    }

    pub fn series(&self) -> Option<&PowerSeries> {
        self.series.as_ref()
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.derivative)(0, x)
    }

    /// `f^{(s)}(x)`.
    pub fn derivative(&self, s: usize, x: f64) -> Result<f64> {
        if s > self.max_derivative {
            return Err(Error::MissingData(format!(
                "{}: derivative of order {s} (available up to {})",
                self.name, self.max_derivative
            )));
        }
        Ok((self.derivative)(s, x))
    }

    /// The function `f^{(s)}` as its own spec.
    pub fn derivative_spec(&self, s: usize) -> Result<FunctionSpec> {
        if s > self.max_derivative {
            return Err(Error::MissingData(format!(
                "{}: derivative of order {s} (available up to {})",
                self.name, self.max_derivative
            )));
        }
        let inner = Arc::clone(&self.derivative);
        let series = self.series.as_ref().and_then(|p| shifted_series(p, s));
        Ok(FunctionSpec {
            name: if s == 0 {
                self.name.clone()
            } else {
                format!("{}^({s})", self.name)
            },
            params: self.params.clone(),
            derivative: Arc::new(move |t, x| inner(t + s, x)),
            max_derivative: self.max_derivative - s,
            series,
        })
    }
}

/// Taylor series of `f^{(s)}`: coefficients `(r+s)!/r! · f_{r+s}`. Infinite
/// series keep an envelope only when the decay law is factorial.
fn shifted_series(p: &PowerSeries, s: usize) -> Option<PowerSeries> {
    if s == 0 {
        return Some(p.clone());
    }
    let decay = match (p.degree, p.decay) {
        (Some(_), decay) => decay,
        (None, SeriesDecay::Factorial { rate, scale }) => SeriesDecay::Factorial {
            rate,
            scale: scale * rate.abs().powi(s as i32),
        },
        (None, _) => return None,
    };
    let base = p.clone();
    let coeff = move |r: usize| {
        base.coeff(r + s) * ((r + 1)..=(r + s)).map(|t| t as f64).product::<f64>()
    };
    Some(PowerSeries {
        coeff: Arc::new(coeff),
        degree: p.degree.map(|d| d.saturating_sub(s)),
        decay,
    })
}

/// Central finite difference of `f^{(s)}` at `x` with step `h` (one-sided near the ends).
pub fn finite_difference(f: &FunctionSpec, s: usize, x: f64, h: f64) -> Result<f64> {
    let (lo, hi) = if x - h < 0.0 {
        (x, x + 2.0 * h)
    } else if x + h > 1.0 {
        (x - 2.0 * h, x)
    } else {
        (x - h, x + h)
    };
    Ok((f.derivative(s, hi)? - f.derivative(s, lo)?) / (hi - lo))
}
