//! Experiment configs: TOML with one section per experiment kind, or the same
//! structure as JSON.
//!
//! ```toml
//! kind = "verify-finite"
//! seed = 42
//! out = "runs/finite"
//!
//! [verify-finite]
//! cases = 50
//! max_depth = 3
//! ```

use std::fmt;

use bmoforge::mc::EssSupProxy;
use bmoforge::schemes::{ModelId, TamingPolicy};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    VerifyFinite,
    RhoGrid,
    JnCheck,
    Davie,
    Quadrature,
    TamedEm,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::VerifyFinite,
        ExperimentKind::RhoGrid,
        ExperimentKind::JnCheck,
        ExperimentKind::Davie,
        ExperimentKind::Quadrature,
        ExperimentKind::TamedEm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::VerifyFinite => "verify-finite",
            ExperimentKind::RhoGrid => "rho-grid",
            ExperimentKind::JnCheck => "jn-check",
            ExperimentKind::Davie => "davie",
            ExperimentKind::Quadrature => "quadrature",
            ExperimentKind::TamedEm => "tamed-em",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Jn,
    Appendix,
    Structural,
    Exponential,
}

/// Integrands `f(t, x)` for the Brownian-functional experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrand {
    Zero,
    One,
    X,
    Sign,
}

impl Integrand {
    pub fn eval(self, _t: f64, x: f64) -> f64 {
        match self {
            Integrand::Zero => 0.0,
            Integrand::One => 1.0,
            Integrand::X => x,
            Integrand::Sign => bmoforge::schemes::sign0(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyFiniteParams {
    pub cases: usize,
    pub max_depth: usize,
    pub ps: Vec<u32>,
    pub suites: Vec<Suite>,
}

impl Default for VerifyFiniteParams {
    fn default() -> Self {
        Self {
            cases: 50,
            max_depth: 3,
            ps: vec![1, 2, 3],
            suites: vec![Suite::Jn, Suite::Appendix, Suite::Structural, Suite::Exponential],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JnCheckParams {
    pub cases: usize,
    pub max_depth: usize,
    pub ps: Vec<u32>,
    /// `all`, `constant`, or one corpus family name.
    pub family: String,
}

impl Default for JnCheckParams {
    fn default() -> Self {
        Self { cases: 50, max_depth: 3, ps: vec![1, 2, 3], family: "all".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RhoGridParams {
    pub integrand: Integrand,
    /// Grid points `k / (times - 1)` on `[0, 1]`.
    pub times: usize,
    pub n_outer: usize,
    pub n_inner: usize,
    /// Fine steps per unit time.
    pub fine_steps: usize,
    pub proxy: EssSupProxy,
}

impl Default for RhoGridParams {
    fn default() -> Self {
        Self { integrand: Integrand::Sign, times: 5, n_outer: 16, n_inner: 1000, fine_steps: 256, proxy: EssSupProxy::Max }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DavieParams {
    pub paths: usize,
    pub steps: usize,
    pub shifts: Vec<f64>,
    pub slope_band: [f64; 2],
    pub gamma_band: [f64; 2],
}

impl Default for DavieParams {
    fn default() -> Self {
        Self {
            paths: 100_000,
            steps: 1000,
            shifts: vec![0.05, 0.1, 0.2, 0.4],
            slope_band: [1.8, 2.2],
            gamma_band: [0.5, 2.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureCheck {
    /// `E|V^n_1|² = 1/(3n²)` within three standard errors (integrand `x`).
    Variance,
    /// Fitted exponent of the conditional-modulus proxy inside `exponent_band`.
    Modulus,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureParams {
    pub integrand: Integrand,
    pub ns: Vec<usize>,
    pub paths: usize,
    pub steps: usize,
    pub check: QuadratureCheck,
    pub n_outer: usize,
    pub n_inner: usize,
    pub starts: Vec<f64>,
    pub proxy: EssSupProxy,
    pub exponent_band: [f64; 2],
}

impl Default for QuadratureParams {
    fn default() -> Self {
        Self {
            integrand: Integrand::X,
            ns: vec![4, 16, 64],
            paths: 10_000,
            steps: 4096,
            check: QuadratureCheck::Variance,
            n_outer: 16,
            n_inner: 1000,
            starts: vec![0.0, 0.25, 0.5, 0.75],
            proxy: EssSupProxy::Max,
            exponent_band: [0.4, 0.6],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TamedEmParams {
    pub model: ModelId,
    pub ns: Vec<usize>,
    pub fine_factor: usize,
    pub paths: usize,
    pub taming: TamingPolicy,
    pub min_slope: f64,
    /// Allowed rise of the mean error between consecutive meshes, in standard errors.
    pub monotone_k: f64,
}

impl Default for TamedEmParams {
    fn default() -> Self {
        Self {
            model: ModelId::Sign,
            ns: vec![8, 16, 32, 64, 128, 256],
            fine_factor: 64,
            paths: 2000,
            taming: TamingPolicy::default(),
            min_slope: 0.4,
            monotone_k: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Params {
    VerifyFinite(VerifyFiniteParams),
    RhoGrid(RhoGridParams),
    JnCheck(JnCheckParams),
    Davie(DavieParams),
    Quadrature(QuadratureParams),
    TamedEm(TamedEmParams),
}

impl Params {
    pub fn default_for(kind: ExperimentKind) -> Self {
        match kind {
            ExperimentKind::VerifyFinite => Params::VerifyFinite(Default::default()),
            ExperimentKind::RhoGrid => Params::RhoGrid(Default::default()),
            ExperimentKind::JnCheck => Params::JnCheck(Default::default()),
            ExperimentKind::Davie => Params::Davie(Default::default()),
            ExperimentKind::Quadrature => Params::Quadrature(Default::default()),
            ExperimentKind::TamedEm => Params::TamedEm(Default::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub out: Option<String>,
    pub params: Params,
}

/// Every problem found in a config, one per line.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid config:\n  {}", .0.join("\n  "))]
pub struct ConfigError(pub Vec<String>);

const TOP_KEYS: [&str; 3] = ["kind", "seed", "out"];

fn parse_value(text: &str) -> Result<Value, ConfigError> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| ConfigError(vec![format!("JSON syntax: {e}")]))
    } else {
        toml::from_str(text).map_err(|e| ConfigError(vec![format!("TOML syntax: {}", e.message())]))
    }
}

fn section<T: DeserializeOwned + Serialize + Default>(name: &str, raw: Option<&Value>, errors: &mut Vec<String>) -> T {
    let Some(raw) = raw else { return T::default() };
    let Some(map) = raw.as_object() else {
        errors.push(format!("[{name}] must be a table"));
        return T::default();
    };
    let known = match serde_json::to_value(T::default()) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    };
    let mut clean = Map::new();
    for (key, value) in map {
        if !known.contains_key(key) {
            errors.push(format!("unknown key `{key}` in [{name}]"));
            continue;
        }
        // check each field on its own so every bad value is reported
        let mut probe = Map::new();
        probe.insert(key.clone(), value.clone());
        match serde_json::from_value::<T>(Value::Object(probe)) {
            Ok(_) => {
                clean.insert(key.clone(), value.clone());
            }
            Err(e) => errors.push(format!("[{name}] {key}: {e}")),
        }
    }
    serde_json::from_value(Value::Object(clean)).unwrap_or_default()
}

/// Parses and validates a config. `seed` overrides the config's seed and
/// makes the key optional.
pub fn parse_config_with(text: &str, seed: Option<u64>) -> Result<ExperimentConfig, ConfigError> {
    let value = parse_value(text)?;
    let Some(top) = value.as_object() else {
        return Err(ConfigError(vec!["config must be a table".into()]));
    };
    let mut errors = Vec::new();
    let kind = match top.get("kind") {
        None => {
            errors.push("missing required field `kind`".to_string());
            None
        }
        Some(Value::String(s)) => {
            let k = ExperimentKind::from_name(s);
            if k.is_none() {
                let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                errors.push(format!("unknown kind `{s}`; expected one of {}", names.join(", ")));
            }
            k
        }
        Some(other) => {
            errors.push(format!("kind must be a string, got {other}"));
            None
        }
    };
    let config_seed = match top.get("seed") {
        None => None,
        Some(v) => match v.as_u64() {
            Some(s) => Some(s),
            None => {
                errors.push(format!("seed must be a nonnegative integer, got {v}"));
                None
            }
        },
    };
    let seed = seed.or(config_seed);
    if seed.is_none() && !top.contains_key("seed") {
        errors.push("missing required field `seed`".to_string());
    }
    let out = match top.get("out") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(other) => {
            errors.push(format!("out must be a string, got {other}"));
            None
        }
    };
    for key in top.keys() {
        if TOP_KEYS.contains(&key.as_str()) {
            continue;
        }
        match ExperimentKind::from_name(key) {
            Some(k) if Some(k) == kind => {}
            Some(k) => errors.push(format!("section [{k}] does not apply to kind `{}`", kind.map_or("?", |k| k.name()))),
            None => errors.push(format!("unknown key `{key}`")),
        }
    }
    let params = kind.map(|k| {
        let raw = top.get(k.name());
        match k {
            ExperimentKind::VerifyFinite => Params::VerifyFinite(section(k.name(), raw, &mut errors)),
            ExperimentKind::RhoGrid => Params::RhoGrid(section(k.name(), raw, &mut errors)),
            ExperimentKind::JnCheck => Params::JnCheck(section(k.name(), raw, &mut errors)),
            ExperimentKind::Davie => Params::Davie(section(k.name(), raw, &mut errors)),
            ExperimentKind::Quadrature => Params::Quadrature(section(k.name(), raw, &mut errors)),
            ExperimentKind::TamedEm => Params::TamedEm(section(k.name(), raw, &mut errors)),
        }
    });
    if let Some(p) = &params {
        errors.extend(validate(p));
    }
    match (kind, seed, params) {
        (Some(kind), Some(seed), Some(params)) if errors.is_empty() => Ok(ExperimentConfig { kind, seed, out, params }),
        _ => Err(ConfigError(errors)),
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    parse_config_with(text, None)
}

impl ExperimentConfig {
    /// Defaults for `kind` with the given seed.
    pub fn defaults(kind: ExperimentKind, seed: u64) -> Self {
        Self { kind, seed, out: None, params: Params::default_for(kind) }
    }

    /// JSON form with sorted keys; the config hash is taken over this.
    pub fn to_value(&self) -> Value {
        let mut top = Map::new();
        top.insert("kind".into(), Value::String(self.kind.name().into()));
        top.insert("seed".into(), Value::from(self.seed));
        if let Some(out) = &self.out {
            top.insert("out".into(), Value::String(out.clone()));
        }
        top.insert(self.kind.name().into(), serde_json::to_value(&self.params).expect("params serialize"));
        Value::Object(top)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_value()).expect("config values are TOML-representable")
    }

    pub fn canonical_json(&self) -> String {
        self.to_value().to_string()
    }
}

fn in_range<T: PartialOrd + fmt::Display + Copy>(errors: &mut Vec<String>, name: &str, v: T, lo: T, hi: T) {
    if !(v >= lo && v <= hi) {
        errors.push(format!("{name} = {v} is outside [{lo}, {hi}]"));
    }
}

fn check_ps(errors: &mut Vec<String>, ps: &[u32]) {
    if ps.is_empty() {
        errors.push("ps must not be empty".into());
    }
    for &p in ps {
        in_range(errors, "p", p, 1, 8);
    }
}

fn check_band(errors: &mut Vec<String>, name: &str, band: [f64; 2]) {
    if !(band[0] <= band[1]) {
        errors.push(format!("{name} = [{}, {}] is not an interval", band[0], band[1]));
    }
}

fn check_proxy(errors: &mut Vec<String>, proxy: &EssSupProxy) {
    if let EssSupProxy::Quantile { delta } = proxy {
        if !(*delta > 0.0 && *delta < 1.0) {
            errors.push(format!("proxy delta = {delta} is outside (0, 1)"));
        }
    }
}

fn check_meshes(errors: &mut Vec<String>, ns: &[usize], fine: usize) {
    if ns.is_empty() {
        errors.push("ns must not be empty".into());
    }
    for &n in ns {
        if n == 0 || fine % n != 0 {
            errors.push(format!("mesh n = {n} does not divide the {fine} fine steps"));
        }
    }
}

/// Range checks; one message per violation.
pub fn validate(params: &Params) -> Vec<String> {
    let mut e = Vec::new();
    match params {
        Params::VerifyFinite(p) => {
            in_range(&mut e, "cases", p.cases, 1, 100_000);
            in_range(&mut e, "max_depth", p.max_depth, 1, 6);
            check_ps(&mut e, &p.ps);
            if p.suites.is_empty() {
                e.push("suites must not be empty".into());
            }
        }
        Params::JnCheck(p) => {
            in_range(&mut e, "cases", p.cases, 1, 100_000);
            in_range(&mut e, "max_depth", p.max_depth, 1, 6);
            check_ps(&mut e, &p.ps);
            let known = ["all", "constant", "gaussian", "random-walk", "martingale", "jumps", "deterministic", "nondecreasing"];
            if !known.contains(&p.family.as_str()) {
                e.push(format!("family `{}` is not one of {}", p.family, known.join(", ")));
            }
        }
        Params::RhoGrid(p) => {
            in_range(&mut e, "times", p.times, 2, 33);
            in_range(&mut e, "n_outer", p.n_outer, 1, 100_000);
            in_range(&mut e, "n_inner", p.n_inner, 1, 10_000_000);
            in_range(&mut e, "fine_steps", p.fine_steps, 1, 1 << 20);
            if p.times >= 2 && p.fine_steps % (p.times - 1) != 0 {
                e.push(format!("fine_steps = {} must be a multiple of times - 1 = {}", p.fine_steps, p.times - 1));
            }
            check_proxy(&mut e, &p.proxy);
        }
        Params::Davie(p) => {
            in_range(&mut e, "paths", p.paths, 2, 100_000_000);
            in_range(&mut e, "steps", p.steps, 1, 1 << 20);
            if p.shifts.is_empty() || p.shifts.iter().any(|x| !(x.abs() > 0.0 && x.is_finite())) {
                e.push("shifts must be nonzero and finite, at least one".into());
            }
            check_band(&mut e, "slope_band", p.slope_band);
            check_band(&mut e, "gamma_band", p.gamma_band);
        }
        Params::Quadrature(p) => {
            in_range(&mut e, "paths", p.paths, 2, 100_000_000);
            in_range(&mut e, "steps", p.steps, 1, 1 << 20);
            check_meshes(&mut e, &p.ns, p.steps);
            in_range(&mut e, "n_outer", p.n_outer, 1, 100_000);
            in_range(&mut e, "n_inner", p.n_inner, 1, 10_000_000);
            if p.starts.iter().any(|s| !(*s >= 0.0 && *s < 1.0)) {
                e.push("starts must lie in [0, 1)".into());
            }
            if p.check == QuadratureCheck::Variance && p.integrand != Integrand::X {
                e.push("check = \"variance\" needs integrand = \"x\"".into());
            }
            if p.check == QuadratureCheck::Modulus && p.ns.len() < 3 {
                e.push("check = \"modulus\" needs at least 3 meshes".into());
            }
            check_proxy(&mut e, &p.proxy);
            check_band(&mut e, "exponent_band", p.exponent_band);
        }
        Params::TamedEm(p) => {
            in_range(&mut e, "paths", p.paths, 2, 100_000_000);
            in_range(&mut e, "fine_factor", p.fine_factor, 1, 4096);
            if p.ns.is_empty() || p.ns.contains(&0) {
                e.push("ns must be nonempty and positive".into());
            }
            let fine = p.fine_factor * p.ns.iter().max().copied().unwrap_or(1);
            if fine > 1 << 22 {
                e.push(format!("reference mesh {fine} exceeds 2^22 steps"));
            }
            if let TamingPolicy::Clip { exponent, .. } = p.taming {
                if !(exponent > 0.0) {
                    e.push(format!("taming exponent {exponent} must be > 0"));
                }
            }
            if !(p.monotone_k >= 0.0) {
                e.push(format!("monotone_k = {} must be >= 0", p.monotone_k));
            }
        }
    }
    e
}
