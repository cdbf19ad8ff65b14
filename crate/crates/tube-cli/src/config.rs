//! Scenario configuration: flat `key = value` text.
//!
//! Grammar: one `key = value` per line; blank lines and lines starting with
//! `#` are ignored; keys are unique. Values are trimmed. Unknown keys are
//! rejected so that typos do not silently fall back to defaults.
//!
//! | key          | values                                               | default       |
//! |--------------|------------------------------------------------------|---------------|
//! | `scenario`   | `reconstruct_flat`, `reconstruct_rankone`, `verify_properties`, `tape_demo`, `scissors_demo` | required |
//! | `space`      | `euclidean`, `hyperbolic`, `metric_tree`, `tree_cross_line` | required |
//! | `mode`       | `exact`, `float` (the hyperbolic plane is always float) | `exact`    |
//! | `tree`       | path to a tree file, relative to the config file     | sample tree   |
//! | `tolerance`  | positive real                                        | `1e-6`        |
//! | `seed`       | unsigned integer                                     | `0`           |
//! | `cases`      | number of random cases or scissors                   | `20`          |
//! | `pairs`      | relation-soundness pairs (`verify_properties`)       | `1000`        |
//! | `window`     | rank-test window (`reconstruct_rankone`)             | `2`           |
//! | `k_max`      | parallel-equivalence level cap (`reconstruct_rankone`)| `16`          |
//! | `candidates` | rank-one search candidates on `S(x₀, 1)` (`reconstruct_rankone`) | `16`          |
//! | `offset`     | scissors height bound (`reconstruct_rankone`)        | `0.5`         |
//! | `iterations` | displacement orbit length `n` (`scissors_demo`)      | `1000`        |
//! | `order`      | tape order `p` (`tape_demo`)                         | `3`           |
//! | `tape_window`| sequence points `|z| ≤ m` exported per tape sequence | `5`           |
//! | `out_dir`    | output directory, relative to the working directory  | `.`           |
//! | `report`     | report file name inside `out_dir`                    | `report.json` |
//! | `plots`      | comma list of `tape`, `scissors`, `error_curve`      | none          |
//! | `timing`     | `true` to record wall times (breaks byte determinism)| `false`       |

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use thiserror::Error;
use tube::model_spaces::tree::MetricTree;
use tube::model_spaces::{ModelSpace, NumericMode};
use tube::properties::sample_tree;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error("key `{key}`: {msg}")]
    Value { key: String, msg: String },
    #[error("{0}")]
    Io(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    ReconstructFlat,
    ReconstructRankone,
    VerifyProperties,
    TapeDemo,
    ScissorsDemo,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::ReconstructFlat => "reconstruct_flat",
            Scenario::ReconstructRankone => "reconstruct_rankone",
            Scenario::VerifyProperties => "verify_properties",
            Scenario::TapeDemo => "tape_demo",
            Scenario::ScissorsDemo => "scissors_demo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlotKind {
    Tape,
    Scissors,
    ErrorCurve,
}

impl PlotKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "tape" => Some(PlotKind::Tape),
            "scissors" => Some(PlotKind::Scissors),
            "error_curve" => Some(PlotKind::ErrorCurve),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PlotKind::Tape => "tape",
            PlotKind::Scissors => "scissors",
            PlotKind::ErrorCurve => "error_curve",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub space_name: String,
    pub space: ModelSpace,
    pub tolerance: f64,
    pub seed: u64,
    pub cases: usize,
    pub pairs: usize,
    pub window: u32,
    pub k_max: u32,
    pub candidates: usize,
    pub offset: f64,
    pub iterations: u64,
    pub order: u32,
    pub tape_window: i64,
    pub out_dir: PathBuf,
    pub report: String,
    pub plots: Vec<PlotKind>,
    pub timing: bool,
    /// Effective settings as text, echoed into the report.
    pub echo: BTreeMap<String, String>,
}

const KEYS: &[&str] = &[
    "scenario",
    "space",
    "mode",
    "tree",
    "tolerance",
    "seed",
    "cases",
    "pairs",
    "window",
    "k_max",
    "candidates",
    "offset",
    "iterations",
    "order",
    "tape_window",
    "out_dir",
    "report",
    "plots",
    "timing",
];

/// Command-line overrides, applied on top of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub out_dir: Option<PathBuf>,
}

pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |msg: &str| ConfigError::Syntax { line: i + 1, msg: msg.into() };
        let (k, v) = line.split_once('=').ok_or_else(|| syntax("expected `key = value`"))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(syntax("empty key"));
        }
        if !KEYS.contains(&k) {
            return Err(syntax(&format!("unknown key `{k}`")));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(syntax(&format!("duplicate key `{k}`")));
        }
    }
    Ok(out)
}

fn value<T: std::str::FromStr>(kv: &BTreeMap<String, String>, key: &str, default: T) -> Result<T, ConfigError> {
    match kv.get(key) {
        None => Ok(default),
        Some(v) => v.parse().map_err(|_| ConfigError::Value { key: key.into(), msg: format!("cannot parse `{v}`") }),
    }
}

fn bad(key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Value { key: key.into(), msg: msg.into() }
}

impl ScenarioConfig {
    pub fn load(path: &Path, ov: &Overrides) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::from_text(&text, path.parent().unwrap_or(Path::new(".")), ov)
    }

    /// `base` resolves a relative `tree` path.
    pub fn from_text(text: &str, base: &Path, ov: &Overrides) -> Result<Self, ConfigError> {
        let kv = parse_pairs(text)?;
        let scenario = match kv.get("scenario").map(String::as_str) {
            None => return Err(ConfigError::Missing("scenario")),
            Some("reconstruct_flat") => Scenario::ReconstructFlat,
            Some("reconstruct_rankone") => Scenario::ReconstructRankone,
            Some("verify_properties") => Scenario::VerifyProperties,
            Some("tape_demo") => Scenario::TapeDemo,
            Some("scissors_demo") => Scenario::ScissorsDemo,
            Some(s) => return Err(bad("scenario", format!("unknown scenario `{s}`"))),
        };
        let space_name = kv.get("space").ok_or(ConfigError::Missing("space"))?.clone();
        let mode = match kv.get("mode").map(String::as_str) {
            None | Some("exact") => NumericMode::ExactRational,
            Some("float") => NumericMode::FloatWithTolerance,
            Some(m) => return Err(bad("mode", format!("expected `exact` or `float`, got `{m}`"))),
        };
        let tree = || -> Result<MetricTree, ConfigError> {
            match kv.get("tree") {
                None => Ok(sample_tree()),
                Some(p) => {
                    let p = base.join(p);
                    let text = std::fs::read_to_string(&p).map_err(|e| ConfigError::Io(format!("{}: {e}", p.display())))?;
                    MetricTree::parse(&text).map_err(|e| bad("tree", e.to_string()))
                }
            }
        };
        let space = match space_name.as_str() {
            "euclidean" => ModelSpace::euclidean(mode),
            "hyperbolic" => ModelSpace::hyperbolic(),
            "metric_tree" => ModelSpace::metric_tree(tree()?, mode),
            "tree_cross_line" => ModelSpace::tree_cross_line(tree()?, mode),
            s => return Err(bad("space", format!("unknown space `{s}`"))),
        };
        if kv.contains_key("tree") && !space_name.contains("tree") {
            return Err(bad("tree", "only tree-based spaces take a tree"));
        }
        let allowed: &[&str] = match scenario {
            Scenario::ReconstructFlat | Scenario::TapeDemo => &["euclidean", "tree_cross_line"],
            Scenario::ReconstructRankone | Scenario::ScissorsDemo => &["hyperbolic"],
            Scenario::VerifyProperties => &["euclidean", "hyperbolic", "metric_tree", "tree_cross_line"],
        };
        if !allowed.contains(&space_name.as_str()) {
            return Err(bad("space", format!("{} runs on {}", scenario.name(), allowed.join(" or "))));
        }

        let tolerance = match ov.tolerance {
            Some(t) => t,
            None => value(&kv, "tolerance", 1e-6)?,
        };
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(bad("tolerance", "must be positive"));
        }
        let seed = match ov.seed {
            Some(s) => s,
            None => value(&kv, "seed", 0u64)?,
        };
        let out_dir = match &ov.out_dir {
            Some(d) => d.clone(),
            None => PathBuf::from(kv.get("out_dir").map_or(".", String::as_str)),
        };
        let plots = match kv.get("plots") {
            None => Vec::new(),
            Some(v) => {
                let mut p = Vec::new();
                for s in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    p.push(PlotKind::parse(s).ok_or_else(|| bad("plots", format!("unknown plot `{s}`")))?);
                }
                p.sort();
                p.dedup();
                p
            }
        };
        let report: String = value(&kv, "report", "report.json".to_string())?;
        if report.is_empty() || report.contains('/') {
            return Err(bad("report", "expected a plain file name"));
        }
        let cfg = ScenarioConfig {
            scenario,
            space_name,
            space,
            tolerance,
            seed,
            cases: value(&kv, "cases", 20usize)?,
            pairs: value(&kv, "pairs", 1000usize)?,
            window: value(&kv, "window", 2u32)?,
            k_max: value(&kv, "k_max", 16u32)?,
            candidates: value(&kv, "candidates", 16usize)?,
            offset: value(&kv, "offset", 0.5f64)?,
            iterations: value(&kv, "iterations", 1000u64)?,
            order: value(&kv, "order", 3u32)?,
            tape_window: value(&kv, "tape_window", 5i64)?,
            out_dir,
            report,
            plots,
            timing: value(&kv, "timing", false)?,
            echo: BTreeMap::new(),
        };
        if cfg.window == 0 || cfg.k_max == 0 || cfg.candidates == 0 {
            return Err(bad("window", "window, k_max and candidates must be positive"));
        }
        if !(cfg.offset > 0.0 && cfg.offset.is_finite()) {
            return Err(bad("offset", "must be positive"));
        }
        if cfg.iterations == 0 || cfg.order == 0 || cfg.tape_window < 0 {
            return Err(bad("iterations", "iterations and order must be positive, tape_window nonnegative"));
        }
        Ok(cfg.with_echo(&kv))
    }

    fn with_echo(mut self, kv: &BTreeMap<String, String>) -> Self {
        let mut e = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            e.insert(k.to_string(), v);
        };
        put("scenario", self.scenario.name().into());
        put("space", self.space_name.clone());
        put("mode", if self.space.is_exact() { "exact" } else { "float" }.into());
        if let Some(t) = kv.get("tree") {
            put("tree", t.clone());
        }
        put("tolerance", format!("{:e}", self.tolerance));
        put("seed", self.seed.to_string());
        put("cases", self.cases.to_string());
        put("pairs", self.pairs.to_string());
        put("window", self.window.to_string());
        put("k_max", self.k_max.to_string());
        put("candidates", self.candidates.to_string());
        put("offset", self.offset.to_string());
        put("iterations", self.iterations.to_string());
        put("order", self.order.to_string());
        put("tape_window", self.tape_window.to_string());
        put("report", self.report.clone());
        put("plots", self.plots.iter().map(|p| p.name()).collect::<Vec<_>>().join(","));
        put("timing", self.timing.to_string());
        self.echo = e;
        self
    }
}
