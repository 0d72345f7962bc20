//! Run configuration: a sectioned `key = value` text file.
//!
//! ```text
//! [model]
//! num_coeffs = "1"
//! den_roots = "-1, -2, -3"
//! strictness = paper_strict
//!
//! [grid]
//! s_min = 0.1
//! s_max = 10
//! points = 64
//! spacing = log
//! ```
//!
//! Coefficient lists are in ascending degree order. Complex entries are
//! written `a+bi`, `a-bi`, `bi` or `a`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use plemelj::polynomial::PoleResidue;
use plemelj::{
    build_model, Complex64, EnsembleConfig, ExponentialSum, Polynomial, RationalSpec, Spacing,
    Strictness, SuiteTolerances, TransformGrid, DEFAULT_ROOT_TOL,
};

/// Parse failure, with the offending line when there is one.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "config line {n}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

fn err<T>(line: Option<usize>, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Poles, residues and sector of the configured model.
    Analyze,
    /// Stieltjes transform over the grid as CSV.
    Transform,
    /// Signal recovered from the boundary value as CSV.
    Invert,
    /// All identity suites on the configured model.
    Verify,
    /// Identity suites over a seeded ensemble.
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Transform => "transform",
            Command::Invert => "invert",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
        }
    }

    pub fn needs_model(self) -> bool {
        self != Command::Sweep
    }
}

/// Where the model comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSource {
    /// `num_coeffs` and `den_coeffs`.
    Coefficients {
        numerator: Vec<Complex64>,
        denominator: Vec<Complex64>,
    },
    /// `num_coeffs` and `den_roots` (monic denominator).
    Roots {
        numerator: Vec<Complex64>,
        roots: Vec<Complex64>,
    },
    /// `poles` and `residues`.
    Poles(Vec<PoleResidue>),
}

/// A model ready for the transforms, with the rational data it came from.
/// Explicit pole lists get their rational form `Σ γ_k / (p - λ_k)`
/// multiplied out.
#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub model: ExponentialSum,
    pub spec: RationalSpec,
}

/// Real coefficients when the roots come in exact conjugate pairs.
fn polynomial_from_roots(roots: &[Complex64]) -> Polynomial {
    let p = Polynomial::from_roots(roots);
    if conjugate_closed(roots) {
        let re: Vec<f64> = p.coeffs().iter().map(|c| c.re).collect();
        Polynomial::from_real(&re)
    } else {
        p
    }
}

fn conjugate_closed(points: &[Complex64]) -> bool {
    let mut used = vec![false; points.len()];
    for z in points {
        match (0..points.len()).find(|&j| !used[j] && points[j] == z.conj()) {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}

impl ModelSource {
    pub fn build(&self, strictness: Strictness) -> plemelj::Result<BuiltModel> {
        match self {
            ModelSource::Coefficients {
                numerator,
                denominator,
            } => {
                let spec = RationalSpec::new(
                    Polynomial::new(numerator.clone()),
                    Polynomial::new(denominator.clone()),
                    strictness,
                );
                let model = build_model(&spec, DEFAULT_ROOT_TOL)?;
                Ok(BuiltModel { model, spec })
            }
            ModelSource::Roots { numerator, roots } => {
                let spec = RationalSpec::new(
                    Polynomial::new(numerator.clone()),
                    polynomial_from_roots(roots),
                    strictness,
                );
                let model = build_model(&spec, DEFAULT_ROOT_TOL)?;
                Ok(BuiltModel { model, spec })
            }
            ModelSource::Poles(terms) => {
                let model = ExponentialSum::new(terms.clone())?;
                let poles: Vec<Complex64> = terms.iter().map(|t| t.pole).collect();
                let mut numerator = Polynomial::zero();
                for (k, t) in terms.iter().enumerate() {
                    let others: Vec<Complex64> = poles
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, &p)| p)
                        .collect();
                    let part =
                        Polynomial::from_roots(&others).mul(&Polynomial::constant(t.residue));
                    numerator = add(&numerator, &part);
                }
                if model.is_real_signal() && conjugate_closed(&poles) {
                    let re: Vec<f64> = numerator.coeffs().iter().map(|c| c.re).collect();
                    numerator = Polynomial::from_real(&re);
                }
                let spec = RationalSpec::new(
                    numerator,
                    polynomial_from_roots(&poles),
                    Strictness::Relaxed,
                );
                Ok(BuiltModel { model, spec })
            }
        }
    }
}

fn add(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let n = a.coeffs().len().max(b.coeffs().len());
    let zero = Complex64::new(0.0, 0.0);
    Polynomial::new(
        (0..n)
            .map(|j| {
                a.coeffs().get(j).copied().unwrap_or(zero)
                    + b.coeffs().get(j).copied().unwrap_or(zero)
            })
            .collect(),
    )
}

/// Everything one invocation needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub model: Option<ModelSource>,
    pub strictness: Strictness,
    pub grid: TransformGrid,
    pub tolerances: SuiteTolerances,
    /// Seed, size and parameter ranges of the `sweep` ensemble.
    pub ensemble: EnsembleConfig,
    pub out: Option<PathBuf>,
    /// Text report of `sweep`.
    pub report: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            model: None,
            strictness: Strictness::PaperStrict,
            grid: TransformGrid::default(),
            tolerances: SuiteTolerances::default(),
            ensemble: EnsembleConfig::default(),
            out: None,
            report: None,
        }
    }
}

impl RunConfig {
    /// The ensemble with the configured strictness applied.
    pub fn ensemble(&self) -> EnsembleConfig {
        EnsembleConfig {
            strictness: self.strictness,
            ..self.ensemble.clone()
        }
    }
}

const SECTIONS: [(&str, &[&str]); 4] = [
    (
        "model",
        &[
            "num_coeffs",
            "den_coeffs",
            "den_roots",
            "poles",
            "residues",
            "strictness",
        ],
    ),
    ("grid", &["s_min", "s_max", "points", "spacing"]),
    (
        "tolerances",
        &[
            "theorem1", "theorem2", "realpart", "residue", "oracle", "pv",
        ],
    ),
    (
        "run",
        &[
            "command",
            "out",
            "report",
            "seed",
            "count",
            "degree_min",
            "degree_max",
            "alpha_min",
            "alpha_max",
            "beta_min",
            "beta_max",
        ],
    ),
];

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

type Entries = BTreeMap<(&'static str, String), Entry>;

fn unquote(value: &str, line: usize) -> Result<String, ConfigError> {
    let v = value.trim();
    if let Some(rest) = v.strip_prefix('"') {
        match rest.strip_suffix('"') {
            Some(inner) if !inner.contains('"') => Ok(inner.trim().to_string()),
            _ => err(Some(line), format!("unbalanced quotes in {v}")),
        }
    } else if v.contains('"') {
        err(Some(line), format!("unbalanced quotes in {v}"))
    } else {
        Ok(v.to_string())
    }
}

fn read_entries(text: &str) -> Result<(Entries, BTreeMap<&'static str, usize>), ConfigError> {
    let mut entries = Entries::new();
    let mut headers = BTreeMap::new();
    let mut section: Option<(&'static str, &'static [&'static str])> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with(';') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return err(Some(line), format!("malformed section header {trimmed}"));
            };
            let name = name.trim();
            let Some(&(canon, keys)) = SECTIONS.iter().find(|(s, _)| *s == name) else {
                return err(Some(line), format!("unknown section [{name}]"));
            };
            if headers.insert(canon, line).is_some() {
                return err(Some(line), format!("section [{name}] appears twice"));
            }
            section = Some((canon, keys));
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return err(Some(line), format!("expected `key = value`, got {trimmed}"));
        };
        let key = key.trim();
        let Some((name, keys)) = section else {
            return err(Some(line), format!("key {key} appears before any section"));
        };
        if !keys.contains(&key) {
            return err(Some(line), format!("unknown key {key} in [{name}]"));
        }
        let value = unquote(value, line)?;
        if value.is_empty() {
            return err(Some(line), format!("empty value for {key}"));
        }
        if let Some(prev) = entries.insert((name, key.to_string()), Entry { value, line }) {
            return err(
                Some(line),
                format!("duplicate key {key} (first set on line {})", prev.line),
            );
        }
    }
    Ok((entries, headers))
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (an ASCII or Unicode minus, `i` or `j`).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .collect();
    let bad = || format!("malformed complex number {text:?}");
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return match s.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(Complex64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_text, im_text) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_text.is_empty() {
        0.0
    } else {
        re_text.parse::<f64>().map_err(|_| bad())?
    };
    let im = match im_text {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse::<f64>().map_err(|_| bad())?,
    };
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn complex_list(e: &Entry) -> Result<Vec<Complex64>, ConfigError> {
    e.value
        .split(',')
        .map(|item| {
            parse_complex(item).map_err(|m| ConfigError {
                line: Some(e.line),
                message: m,
            })
        })
        .collect()
}

fn number<T: std::str::FromStr>(e: &Entry, what: &str) -> Result<T, ConfigError> {
    e.value.parse::<T>().map_err(|_| ConfigError {
        line: Some(e.line),
        message: format!("{what} must be a number, got {}", e.value),
    })
}

fn positive(e: &Entry, what: &str) -> Result<f64, ConfigError> {
    let v: f64 = number(e, what)?;
    if !(v > 0.0 && v.is_finite()) {
        return err(Some(e.line), format!("{what} must be positive and finite"));
    }
    Ok(v)
}

fn parse_model(entries: &Entries) -> Result<(Option<ModelSource>, Strictness), ConfigError> {
    let get = |k: &str| entries.get(&("model", k.to_string()));
    let strictness = match get("strictness") {
        None => Strictness::PaperStrict,
        Some(e) => match e.value.as_str() {
            "paper_strict" | "strict" => Strictness::PaperStrict,
            "relaxed" => Strictness::Relaxed,
            other => {
                return err(
                    Some(e.line),
                    format!("strictness must be paper_strict or relaxed, got {other}"),
                )
            }
        },
    };
    let sources: Vec<&str> = ["den_coeffs", "den_roots", "poles"]
        .into_iter()
        .filter(|k| get(k).is_some())
        .collect();
    if sources.len() > 1 {
        let line = sources.iter().filter_map(|k| get(k)).map(|e| e.line).max();
        return err(
            line,
            format!("conflicting model sources: {}", sources.join(" and ")),
        );
    }
    let source = match sources.first().copied() {
        None => {
            if let Some(e) = get("num_coeffs").or(get("residues")) {
                return err(
                    Some(e.line),
                    "model needs one of den_coeffs, den_roots or poles",
                );
            }
            None
        }
        Some("poles") => {
            let poles_entry = get("poles").expect("present");
            if let Some(e) = get("num_coeffs") {
                return err(
                    Some(e.line),
                    "num_coeffs conflicts with an explicit pole list",
                );
            }
            let Some(res_entry) = get("residues") else {
                return err(Some(poles_entry.line), "poles given without residues");
            };
            let poles = complex_list(poles_entry)?;
            let residues = complex_list(res_entry)?;
            if poles.len() != residues.len() {
                return err(
                    Some(res_entry.line),
                    format!("{} poles but {} residues", poles.len(), residues.len()),
                );
            }
            Some(ModelSource::Poles(
                poles
                    .into_iter()
                    .zip(residues)
                    .map(|(p, r)| PoleResidue::new(p, r))
                    .collect(),
            ))
        }
        Some(den_key) => {
            let den_entry = get(den_key).expect("present");
            if let Some(e) = get("residues") {
                return err(Some(e.line), "residues are only valid with poles");
            }
            let Some(num_entry) = get("num_coeffs") else {
                return err(
                    Some(den_entry.line),
                    format!("{den_key} given without num_coeffs"),
                );
            };
            let numerator = complex_list(num_entry)?;
            let den = complex_list(den_entry)?;
            Some(if den_key == "den_coeffs" {
                ModelSource::Coefficients {
                    numerator,
                    denominator: den,
                }
            } else {
                ModelSource::Roots {
                    numerator,
                    roots: den,
                }
            })
        }
    };
    Ok((source, strictness))
}

fn parse_grid(entries: &Entries, header: Option<usize>) -> Result<TransformGrid, ConfigError> {
    let get = |k: &str| entries.get(&("grid", k.to_string()));
    let default = TransformGrid::default();
    let s_min = get("s_min").map(|e| positive(e, "s_min")).transpose()?;
    let s_max = get("s_max").map(|e| positive(e, "s_max")).transpose()?;
    let points = get("points")
        .map(|e| number::<usize>(e, "points"))
        .transpose()?;
    let spacing = match get("spacing") {
        None => default.spacing(),
        Some(e) => match e.value.as_str() {
            "log" | "logarithmic" => Spacing::Logarithmic,
            "linear" => Spacing::Linear,
            other => {
                return err(
                    Some(e.line),
                    format!("spacing must be log or linear, got {other}"),
                )
            }
        },
    };
    TransformGrid::new(
        s_min.unwrap_or(default.s_min()),
        s_max.unwrap_or(default.s_max()),
        points.unwrap_or(default.len()),
        spacing,
    )
    .or_else(|e| err(header, e.to_string()))
}

fn parse_tolerances(entries: &Entries) -> Result<SuiteTolerances, ConfigError> {
    let mut t = SuiteTolerances::default();
    for ((section, key), e) in entries.iter().filter(|((s, _), _)| *s == "tolerances") {
        debug_assert_eq!(*section, "tolerances");
        let v = positive(e, key)?;
        match key.as_str() {
            "theorem1" => t.theorem1 = v,
            "theorem2" => t.theorem2 = v,
            "realpart" => t.realpart = v,
            "residue" => t.residue = v,
            "oracle" => t.oracle = v,
            "pv" => t.pv = v,
            _ => unreachable!("keys are checked on read"),
        }
    }
    Ok(t)
}

fn parse_run(entries: &Entries, cfg: &mut RunConfig) -> Result<(), ConfigError> {
    let get = |k: &str| entries.get(&("run", k.to_string()));
    if let Some(e) = get("command") {
        cfg.command = Some(
            Command::from_str(&e.value, false)
                .or_else(|_| err(Some(e.line), format!("unknown command {}", e.value)))?,
        );
    }
    cfg.out = get("out").map(|e| PathBuf::from(&e.value));
    cfg.report = get("report").map(|e| PathBuf::from(&e.value));
    let ens = &mut cfg.ensemble;
    if let Some(e) = get("seed") {
        ens.seed = number(e, "seed")?;
    }
    if let Some(e) = get("count") {
        ens.count = number(e, "count")?;
        if ens.count == 0 {
            return err(Some(e.line), "count must be at least 1");
        }
    }
    if let Some(e) = get("degree_min") {
        ens.degree_range.0 = number(e, "degree_min")?;
    }
    if let Some(e) = get("degree_max") {
        ens.degree_range.1 = number(e, "degree_max")?;
    }
    if let Some(e) = get("alpha_min") {
        ens.alpha_range.0 = positive(e, "alpha_min")?;
    }
    if let Some(e) = get("alpha_max") {
        ens.alpha_range.1 = positive(e, "alpha_max")?;
    }
    if let Some(e) = get("beta_min") {
        ens.beta_range.0 = number(e, "beta_min")?;
    }
    if let Some(e) = get("beta_max") {
        ens.beta_range.1 = number(e, "beta_max")?;
    }
    let (dmin, dmax) = ens.degree_range;
    if dmin == 0 || dmin > dmax {
        let line = get("degree_min").or(get("degree_max")).map(|e| e.line);
        return err(
            line,
            format!("degree range [{dmin}, {dmax}] is empty or contains 0"),
        );
    }
    if ens.alpha_range.0 > ens.alpha_range.1 {
        let line = get("alpha_min").or(get("alpha_max")).map(|e| e.line);
        return err(line, "alpha_min exceeds alpha_max");
    }
    let (bmin, bmax) = ens.beta_range;
    if !(bmin.is_finite() && bmax.is_finite() && bmin <= bmax) {
        let line = get("beta_min").or(get("beta_max")).map(|e| e.line);
        return err(line, "beta range must be finite with beta_min <= beta_max");
    }
    Ok(())
}

/// Strict parse: unknown sections or keys, duplicates, malformed numbers
/// and conflicting model sources are all errors.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let (entries, headers) = read_entries(text)?;
    let mut cfg = RunConfig::default();
    let (model, strictness) = parse_model(&entries)?;
    cfg.model = model;
    cfg.strictness = strictness;
    cfg.grid = parse_grid(&entries, headers.get("grid").copied())?;
    cfg.tolerances = parse_tolerances(&entries)?;
    parse_run(&entries, &mut cfg)?;
    Ok(cfg)
}
