//! Run configuration: a JSON file with a fixed schema, overridable from the command line.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::basekit::Base;
use crate::bounds::Theorem;
use crate::corpus::{default_corpus, CorpusEntry};
use crate::error::{Error, Result};

/// One selected bound with its smoothness parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSelection {
    pub bound: Theorem,
    /// Smoothness order for the `C^r` and Sobolev bounds, and the `γ_r` order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    /// Variation exponent for the variation-based bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl BoundSelection {
    pub fn new(bound: Theorem) -> Self {
        BoundSelection {
            bound,
            r: None,
            lambda: None,
        }
    }

    pub fn with_r(mut self, r: u32) -> Self {
        self.r = Some(r);
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }

    pub fn lambda_or_one(&self) -> f64 {
        self.lambda.unwrap_or(1.0)
    }

    /// Label used in the `theorem` column, e.g. `smooth_cr;r=3;lambda=1`.
    pub fn label(&self) -> String {
        let mut label = self.bound.tag().to_string();
        if let Some(r) = self.r {
            label.push_str(&format!(";r={r}"));
        }
        if let Some(lambda) = self.lambda {
            label.push_str(&format!(";lambda={lambda}"));
        }
        label
    }

    /// Parses the label form, e.g. `smooth_cr;r=3;lambda=1` or `holder`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split(';');
        let mut sel = BoundSelection::new(Theorem::from_tag(parts.next().unwrap_or("").trim())?);
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value in `{part}`")))?;
            match key.trim() {
                "r" => sel.r = Some(value.trim().parse().map_err(|_| Error::Config(format!("bad r `{value}`")))?),
                "lambda" => {
                    sel.lambda = Some(value.trim().parse().map_err(|_| Error::Config(format!("bad lambda `{value}`")))?)
                }
                other => return Err(Error::Config(format!("unknown bound parameter `{other}`"))),
            }
        }
        Ok(sel)
    }
}

/// Settings of the lower-bound limit experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LowerBoundConfig {
    pub function: CorpusEntry,
    /// Leading digit `κ_1` (and every digit of the nested ladders).
    pub kappa: u32,
    /// Tails `k′` whose limits are tabulated.
    pub tails: Vec<u64>,
    pub a_min: u32,
    pub a_max: u32,
    /// Deepest nested level `s` of the multi-digit limits.
    pub max_nested: u32,
    /// Finest quadrature level the nested ladders may use.
    pub max_nested_level: u32,
}

impl Default for LowerBoundConfig {
    fn default() -> Self {
        LowerBoundConfig {
            function: CorpusEntry::Exp { a: 1.0 },
            kappa: 1,
            tails: vec![0, 1, 2],
            a_min: 2,
            a_max: 14,
            max_nested: 2,
            max_nested_level: 14,
        }
    }
}

/// Settings of the transform benchmark.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    /// `(base, level)` pairs; each size is `base^level`.
    pub sizes: Vec<(u32, u32)>,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![(2, 10), (3, 7), (5, 5)],
            repeats: 3,
            seed: 7,
        }
    }
}

/// Everything a run needs; every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub base: u32,
    /// Sweeps cover `1 <= k < b^max_level`.
    pub max_level: u32,
    pub corpus: Vec<CorpusEntry>,
    pub bounds: Vec<BoundSelection>,
    /// Relative slack before a ratio counts as a violation.
    pub tol_rel: f64,
    /// Truncation tolerance of the exact recursions.
    pub recursion_tol: f64,
    pub quad_order: usize,
    /// Nested partition levels for variation lower estimates.
    pub variation_depth: u32,
    /// Per-axis level of the double-coefficient sweeps (`γ_r`, row sums).
    pub gamma_level: u32,
    pub out: PathBuf,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    pub lower_bound: LowerBoundConfig,
    pub bench: BenchConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            base: 2,
            max_level: 10,
            corpus: default_corpus(),
            bounds: default_bounds(),
            tol_rel: 1e-9,
            recursion_tol: 1e-13,
            quad_order: 8,
            variation_depth: 10,
            gamma_level: 6,
            out: PathBuf::from("out"),
            jobs: None,
            lower_bound: LowerBoundConfig::default(),
            bench: BenchConfig::default(),
        }
    }
}

/// Every bound with the smoothness orders used by the default sweep.
pub fn default_bounds() -> Vec<BoundSelection> {
    vec![
        BoundSelection::new(Theorem::Monomial),
        BoundSelection::new(Theorem::PowerSeries),
        BoundSelection::new(Theorem::Holder).with_lambda(1.0),
        BoundSelection::new(Theorem::SmoothCr).with_r(1).with_lambda(1.0),
        BoundSelection::new(Theorem::SmoothCr).with_r(2).with_lambda(1.0),
        BoundSelection::new(Theorem::SmoothCr).with_r(3).with_lambda(1.0),
        BoundSelection::new(Theorem::Bernoulli),
        BoundSelection::new(Theorem::Sobolev).with_r(2),
        BoundSelection::new(Theorem::Sobolev).with_r(3),
        BoundSelection::new(Theorem::SobolevPeriodic).with_r(2),
        BoundSelection::new(Theorem::SobolevPeriodic).with_r(3),
    ]
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let config: RunConfig = serde_json::from_str(&text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn base(&self) -> Result<Base> {
        Base::new(self.base)
    }

    pub fn validate(&self) -> Result<()> {
        self.base()?;
        if self.max_level == 0 {
            return Err(Error::Config("max_level must be at least 1".into()));
        }
        for (name, tol) in [("tol_rel", self.tol_rel), ("recursion_tol", self.recursion_tol)] {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {tol}")));
            }
        }
        if self.quad_order < 2 {
            return Err(Error::Config("quad_order must be at least 2".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        for entry in &self.corpus {
            entry.validate()?;
        }
        for sel in &self.bounds {
            if let Some(lambda) = sel.lambda {
                if !(lambda > 0.0 && lambda <= 1.0) {
                    return Err(Error::Config(format!("{}: lambda outside (0, 1]", sel.label())));
                }
            }
        }
        Ok(())
    }
}
