//! Run configuration: TOML schema, defaults and validation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::checks::{check_specs, Suite};
use crate::base_geometry::Chart;
use crate::error::GeometryError;
use crate::tensor_bundle::params::CGParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Euclidean,
    ConstantCurvature,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    Syntax { line: usize, column: usize, message: String },
    Semantic { constraint: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax { line, column, message } => {
                write!(f, "syntax error at line {line}, column {column}: {message}")
            }
            ConfigError::Semantic { constraint } => write!(f, "invalid configuration: {constraint}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn semantic(s: impl Into<String>) -> ConfigError {
    ConfigError::Semantic { constraint: s.into() }
}

/// `params` either names a preset or gives polynomial coefficient tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum ParamsDoc {
    Preset(String),
    Table { a: Vec<f64>, b: Vec<f64> },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<BaseKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<ParamsDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    suites: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    tolerances: BTreeMap<String, f64>,
}

/// A validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub base: BaseKind,
    pub k: f64,
    pub n: usize,
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub params: CGParams<f64>,
    pub suites: Vec<Suite>,
    /// Only explicit overrides; defaults come from the check table.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            base: BaseKind::Euclidean,
            k: 0.0,
            n: 2,
            radius: 1.0,
            samples: 10,
            seed: 0,
            params: CGParams::Sasaki,
            suites: Suite::ALL.to_vec(),
            tolerances: BTreeMap::new(),
        }
    }
}

/// Command-line style overrides applied on top of a document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub base: Option<BaseKind>,
    pub k: Option<f64>,
    pub n: Option<usize>,
    pub radius: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub preset: Option<String>,
    pub suites: Option<Vec<String>>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    (line, column)
}

fn preset(name: &str) -> Result<CGParams<f64>, ConfigError> {
    match name {
        "sasaki" => Ok(CGParams::Sasaki),
        "classic" => Ok(CGParams::Classic),
        "unit" => Ok(CGParams::Unit),
        other => Err(semantic(format!("unknown params preset `{other}` (expected sasaki, classic or unit)"))),
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_with(text, &Overrides::default())
}

pub fn parse_with(text: &str, ov: &Overrides) -> Result<RunConfig, ConfigError> {
    let doc: ConfigDoc = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map(|s| line_col(text, s.start)).unwrap_or((1, 1));
        ConfigError::Syntax { line, column, message: e.message().to_string() }
    })?;
    build(doc, ov)
}

fn build(doc: ConfigDoc, ov: &Overrides) -> Result<RunConfig, ConfigError> {
    let d = RunConfig::default();
    let base = ov.base.or(doc.base).unwrap_or(d.base);
    let k = match (base, ov.k.or(doc.k)) {
        (BaseKind::Euclidean, Some(k)) if k != 0.0 => return Err(semantic("k must be 0 for a euclidean base")),
        (BaseKind::Euclidean, _) => 0.0,
        (BaseKind::ConstantCurvature, Some(k)) => k,
        (BaseKind::ConstantCurvature, None) => 1.0,
    };
    if !k.is_finite() {
        return Err(semantic("k must be finite"));
    }
    let n = match ov.n {
        Some(n) => n as i64,
        None => doc.n.unwrap_or(d.n as i64),
    };
    if n < 2 {
        return Err(semantic("n >= 2"));
    }
    let radius = ov.radius.or(doc.radius).unwrap_or(d.radius);
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(semantic("radius > 0"));
    }
    let samples = match ov.samples {
        Some(s) => s as i64,
        None => doc.samples.unwrap_or(d.samples as i64),
    };
    if samples < 1 {
        return Err(semantic("samples >= 1"));
    }
    let seed = ov.seed.or(doc.seed).unwrap_or(d.seed);
    let params = match (&ov.preset, doc.params) {
        (Some(p), _) => preset(p)?,
        (None, Some(ParamsDoc::Preset(p))) => preset(&p)?,
        (None, Some(ParamsDoc::Table { a, b })) => {
            if a.is_empty() || !a.iter().chain(&b).all(|v| v.is_finite()) {
                return Err(semantic("params tables need finite coefficients and a nonempty `a`"));
            }
            CGParams::Polynomial { a, b }
        }
        (None, None) => d.params,
    };
    match params.check(radius * radius) {
        Ok(_) => {}
        Err(GeometryError::ParameterConstraint { constraint, .. }) => {
            return Err(semantic(format!("{constraint} on the sphere of radius {radius}")))
        }
        Err(e) => return Err(semantic(e.to_string())),
    }
    let names = ov.suites.clone().or(doc.suites);
    let suites = match names {
        None => d.suites,
        Some(list) => {
            if list.is_empty() {
                return Err(semantic("suites must be nonempty"));
            }
            let mut out = Vec::new();
            for s in list {
                let suite = Suite::parse(&s).ok_or_else(|| {
                    semantic(format!("unknown suite `{s}` (expected base, bundle, structures, sphere or theorem7)"))
                })?;
                if !out.contains(&suite) {
                    out.push(suite);
                }
            }
            out.sort();
            out
        }
    };
    let known = check_specs();
    for (name, tol) in &doc.tolerances {
        if !known.iter().any(|c| c.name == name) {
            return Err(semantic(format!("unknown tolerance key `{name}`")));
        }
        if !(*tol > 0.0 && tol.is_finite()) {
            return Err(semantic(format!("tolerance `{name}` must be positive")));
        }
    }
    let cfg = RunConfig {
        base,
        k,
        n: n as usize,
        radius,
        samples: samples as usize,
        seed,
        params,
        suites,
        tolerances: doc.tolerances,
    };
    cfg.chart().map_err(|e| semantic(e.to_string()))?;
    Ok(cfg)
}

impl RunConfig {
    pub fn chart(&self) -> crate::error::Result<Chart<f64>> {
        match self.base {
            BaseKind::Euclidean => Chart::euclidean(self.n),
            BaseKind::ConstantCurvature => Chart::constant_curvature(self.k, self.n),
        }
    }

    /// The fiber weight on the sphere, `a(r²)`.
    pub fn sphere_a(&self) -> f64 {
        self.params.a(self.radius * self.radius)
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    /// A document that parses back to this configuration.
    pub fn to_toml(&self) -> String {
        let params = match &self.params {
            CGParams::Polynomial { a, b } => ParamsDoc::Table { a: a.clone(), b: b.clone() },
            other => ParamsDoc::Preset(other.name().to_string()),
        };
        let doc = ConfigDoc {
            base: Some(self.base),
            k: Some(self.k),
            n: Some(self.n as i64),
            radius: Some(self.radius),
            samples: Some(self.samples as i64),
            seed: Some(self.seed),
            params: Some(params),
            suites: Some(self.suites.iter().map(|s| s.name().to_string()).collect()),
            tolerances: self.tolerances.clone(),
        };
        toml::to_string(&doc).expect("config document serializes")
    }
}
