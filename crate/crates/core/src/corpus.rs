//! Fixed registry of test functions with analytic derivatives and Taylor data.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{bernoulli, eval_b};
use crate::oracle::{FunctionSpec, PowerSeries, SeriesDecay};

const MAX_MONOMIAL: u32 = 8;
const MAX_BERNOULLI: u32 = 6;

/// A corpus member selected by name and parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum CorpusEntry {
    /// `x^r`, `r <= 8`.
    Monomial { r: u32 },
    /// `e^{a x}`.
    Exp {
        #[serde(default = "one")]
        a: f64,
    },
    /// `1 / (1 − c x)`, `0 < c < 1`.
    Geometric { c: f64 },
    /// `sin(π x)`.
    SinPi,
    /// The scaled Bernoulli polynomial `b_r = B_r / r!`, `r <= 6`.
    Bernoulli { r: u32 },
    /// `Σ_{r=1}^{degree} r^{−δ} x^r`.
    PowerDecay { delta: f64, degree: usize },
}

fn one() -> f64 {
    1.0
}

impl CorpusEntry {
    pub fn name(&self) -> &'static str {
        match self {
            CorpusEntry::Monomial { .. } => "monomial",
            CorpusEntry::Exp { .. } => "exp",
            CorpusEntry::Geometric { .. } => "geometric",
            CorpusEntry::SinPi => "sin_pi",
            CorpusEntry::Bernoulli { .. } => "bernoulli",
            CorpusEntry::PowerDecay { .. } => "power_decay",
        }
    }

    /// Parses `name` or `name:key=value,key=value`, e.g. `exp:a=2` or `monomial:r=5`.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut params = Vec::new();
        for pair in rest.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value in `{pair}`")))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("`{value}` is not a number")))?;
            params.push((key.trim(), value));
        }
        let get = |key: &str| -> Option<f64> { params.iter().find(|(k, _)| *k == key).map(|&(_, v)| v) };
        let need = |key: &str| get(key).ok_or_else(|| Error::Config(format!("{name}: missing parameter `{key}`")));
        let as_u32 = |x: f64| -> Result<u32> {
            if x >= 0.0 && x.fract() == 0.0 && x <= f64::from(u32::MAX) {
                Ok(x as u32)
            } else {
                Err(Error::Config(format!("{name}: `{x}` is not a non-negative integer")))
            }
        };
        let entry = match name.trim() {
            "monomial" => CorpusEntry::Monomial { r: as_u32(need("r")?)? },
            "exp" => CorpusEntry::Exp { a: get("a").unwrap_or(1.0) },
            "geometric" => CorpusEntry::Geometric { c: need("c")? },
            "sin_pi" => CorpusEntry::SinPi,
            "bernoulli" => CorpusEntry::Bernoulli { r: as_u32(need("r")?)? },
            "power_decay" => CorpusEntry::PowerDecay {
                delta: need("delta")?,
                degree: as_u32(need("degree")?)? as usize,
            },
            other => return Err(Error::Config(format!("unknown corpus member `{other}`"))),
        };
        entry.validate()?;
        Ok(entry)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        match *self {
            CorpusEntry::Monomial { r } if r > MAX_MONOMIAL => bad(format!("monomial: r={r} exceeds {MAX_MONOMIAL}")),
            CorpusEntry::Exp { a } if !a.is_finite() => bad("exp: a must be finite".into()),
            CorpusEntry::Geometric { c } if !(c > 0.0 && c < 1.0) => bad(format!("geometric: c={c} outside (0, 1)")),
            CorpusEntry::Bernoulli { r } if r > MAX_BERNOULLI => bad(format!("bernoulli: r={r} exceeds {MAX_BERNOULLI}")),
            CorpusEntry::PowerDecay { delta, degree } if !(delta > 0.0) || degree == 0 => {
                bad("power_decay: needs delta > 0 and degree >= 1".into())
            }
            _ => Ok(()),
        }
    }

    /// Largest `r` with `f ∈ H_{r,per}`, i.e. `∫ f^{(s)} = 0` for all `s < r`.
    pub fn periodic_order(&self) -> Option<u32> {
        match *self {
            CorpusEntry::Bernoulli { r } if r >= 1 => Some(r),
            _ => None,
        }
    }

    /// Builds the function with its derivative evaluator and Taylor series.
    pub fn build(&self) -> Result<FunctionSpec> {
        self.validate()?;
        let spec = match *self {
            CorpusEntry::Monomial { r } => monomial(r).with_param("r", f64::from(r)),
            CorpusEntry::Exp { a } => FunctionSpec::new(self.name(), usize::MAX, move |s, x: f64| {
                a.powi(s as i32) * (a * x).exp()
            })
            .with_param("a", a)
            .with_series(PowerSeries::infinite(
                move |r| (1..=r).fold(1.0, |acc, t| acc * a / t as f64),
                SeriesDecay::Factorial {
                    rate: a.abs(),
                    scale: 1.0,
                },
            )),
            CorpusEntry::Geometric { c } => FunctionSpec::new(self.name(), usize::MAX, move |s, x: f64| {
                let fact: f64 = (1..=s).map(|t| t as f64).product();
                fact * c.powi(s as i32) / (1.0 - c * x).powi(s as i32 + 1)
            })
            .with_param("c", c)
            .with_series(PowerSeries::infinite(
                move |r| c.powi(r as i32),
                SeriesDecay::Geometric { ratio: c, scale: 1.0 },
            )),
            CorpusEntry::SinPi => FunctionSpec::new(self.name(), usize::MAX, |s, x: f64| {
                PI.powi(s as i32) * (PI * x + s as f64 * PI / 2.0).sin()
            })
            .with_series(PowerSeries::infinite(
                |r| {
                    if r % 2 == 0 {
                        0.0
                    } else {
                        let sign = if r % 4 == 1 { 1.0 } else { -1.0 };
                        sign * (1..=r).fold(1.0, |acc, t| acc * PI / t as f64)
                    }
                },
                SeriesDecay::Factorial { rate: PI, scale: 1.0 },
            )),
            CorpusEntry::Bernoulli { r } => {
                let coeffs = bernoulli(r as usize)?.scaled_coefficients();
                FunctionSpec::new(self.name(), usize::MAX, move |s, x| {
                    if s as u32 > r {
                        0.0
                    } else {
                        eval_b(r as usize - s, x).unwrap_or(f64::NAN)
                    }
                })
                .with_param("r", f64::from(r))
                .with_series(PowerSeries::polynomial(coeffs))
            }
            CorpusEntry::PowerDecay { delta, degree } => {
                let coeffs: Vec<f64> = (0..=degree)
                    .map(|r| if r == 0 { 0.0 } else { (r as f64).powf(-delta) })
                    .collect();
                let series_coeffs = coeffs.clone();
                polynomial(self.name(), coeffs)
                    .with_param("delta", delta)
                    .with_param("degree", degree as f64)
                    .with_series(PowerSeries::truncated(
                        move |r| series_coeffs.get(r).copied().unwrap_or(0.0),
                        degree,
                        SeriesDecay::Power { delta, scale: 1.0 },
                    ))
            }
        };
        Ok(spec)
    }
}

impl fmt::Display for CorpusEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CorpusEntry::Monomial { r } => write!(f, "monomial:r={r}"),
            CorpusEntry::Exp { a } => write!(f, "exp:a={a}"),
            CorpusEntry::Geometric { c } => write!(f, "geometric:c={c}"),
            CorpusEntry::SinPi => f.write_str("sin_pi"),
            CorpusEntry::Bernoulli { r } => write!(f, "bernoulli:r={r}"),
            CorpusEntry::PowerDecay { delta, degree } => write!(f, "power_decay:delta={delta},degree={degree}"),
        }
    }
}

fn monomial(r: u32) -> FunctionSpec {
    let mut coeffs = vec![0.0; r as usize + 1];
    coeffs[r as usize] = 1.0;
    polynomial("monomial", coeffs.clone()).with_series(PowerSeries::polynomial(coeffs))
}

/// `Σ c_j x^j` with exact derivatives of every order.
fn polynomial(name: &str, coeffs: Vec<f64>) -> FunctionSpec {
    FunctionSpec::new(name, usize::MAX, move |s, x| {
        if s >= coeffs.len() {
            return 0.0;
        }
        let mut acc = 0.0;
        for j in (s..coeffs.len()).rev() {
            let falling: f64 = ((j - s + 1)..=j).map(|t| t as f64).product();
            acc = acc * x + coeffs[j] * falling;
        }
        acc
    })
}

/// The members used by the default verification sweep.
pub fn default_corpus() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry::Exp { a: 1.0 },
        CorpusEntry::Geometric { c: 0.5 },
        CorpusEntry::SinPi,
        CorpusEntry::Bernoulli { r: 4 },
        CorpusEntry::Monomial { r: 5 },
    ]
}
