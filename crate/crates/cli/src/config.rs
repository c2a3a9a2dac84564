//! Run configuration and its `key = value` file format.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gridevo::motifs::StarVariant;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nodes: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub events: Option<PathBuf>,
    pub country_tag: String,
    pub voltage_floor_kv: u32,
    /// Defaults to the dataset span when unset.
    pub year_start: Option<i32>,
    pub year_end: Option<i32>,
    pub gamma: f64,
    pub seed: u64,
    pub chordless_only: bool,
    pub star_variant: StarVariant,
    pub window: usize,
    pub threshold: f64,
    pub include_censored: bool,
    pub omega_band: f64,
    pub replicates: usize,
    pub rewiring: f64,
    /// Reference size override; the panel average is used when unset.
    pub baseline_nodes: Option<usize>,
    pub baseline_edges: Option<usize>,
    pub per_year_baselines: bool,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            nodes: None,
            edges: None,
            events: None,
            country_tag: "XX".into(),
            voltage_floor_kv: 220,
            year_start: None,
            year_end: None,
            gamma: 1.0,
            seed: 42,
            chordless_only: true,
            star_variant: StarVariant::Subgraph,
            window: gridevo::temporal::DEFAULT_WINDOW,
            threshold: gridevo::temporal::DEFAULT_UNDERPERFORMER_THRESHOLD,
            include_censored: false,
            omega_band: gridevo::metrics::DEFAULT_OMEGA_BAND,
            replicates: 50,
            rewiring: gridevo::baselines::DEFAULT_REWIRING,
            baseline_nodes: None,
            baseline_edges: None,
            per_year_baselines: false,
            out: PathBuf::from("out"),
        }
    }
}

/// Keys in file order.
pub const KEYS: [&str; 21] = [
    "nodes",
    "edges",
    "events",
    "country_tag",
    "voltage_floor_kv",
    "year_start",
    "year_end",
    "gamma",
    "seed",
    "chordless_only",
    "star_variant",
    "window",
    "threshold",
    "include_censored",
    "omega_band",
    "replicates",
    "rewiring",
    "baseline_nodes",
    "baseline_edges",
    "per_year_baselines",
    "out",
];

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    raw.parse()
        .map_err(|e| CliError::Config(format!("{key}: cannot parse {raw:?}: {e}")))
}

fn parse_opt<T: FromStr>(key: &str, raw: &str) -> Result<Option<T>, CliError>
where
    T::Err: fmt::Display,
{
    if raw.is_empty() {
        Ok(None)
    } else {
        parse_value(key, raw).map(Some)
    }
}

fn opt_path(raw: &str) -> Option<PathBuf> {
    (!raw.is_empty()).then(|| PathBuf::from(raw))
}

fn show<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

fn show_path(p: &Option<PathBuf>) -> String {
    p.as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_default()
}

/// Lexically cleaned path: `.` dropped, `..` applied.
fn normalize(p: &Path) -> PathBuf {
    use std::path::Component;
    let mut out = PathBuf::new();
    for c in p.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir => {
                out.pop();
            }
            other => out.push(other),
        }
    }
    out
}

/// Absolute, lexically normalized form of `p` against the working directory.
pub fn absolute(p: &Path) -> Result<PathBuf, CliError> {
    std::path::absolute(p)
        .map(|a| normalize(&a))
        .map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        })
}

impl RunConfig {
    /// Parses the file format. Every key is optional; unknown or repeated keys
    /// are errors. Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        let mut seen = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!(
                    "line {}: expected key = value",
                    i + 1
                )));
            };
            let (key, v) = (key.trim(), value.trim());
            if seen.contains(&key) {
                return Err(CliError::Config(format!(
                    "line {}: duplicate key {key}",
                    i + 1
                )));
            }
            seen.push(key);
            match key {
                "nodes" => c.nodes = opt_path(v),
                "edges" => c.edges = opt_path(v),
                "events" => c.events = opt_path(v),
                "country_tag" => c.country_tag = v.to_string(),
                "voltage_floor_kv" => c.voltage_floor_kv = parse_value(key, v)?,
                "year_start" => c.year_start = parse_opt(key, v)?,
                "year_end" => c.year_end = parse_opt(key, v)?,
                "gamma" => c.gamma = parse_value(key, v)?,
                "seed" => c.seed = parse_value(key, v)?,
                "chordless_only" => c.chordless_only = parse_value(key, v)?,
                "star_variant" => c.star_variant = parse_value(key, v)?,
                "window" => c.window = parse_value(key, v)?,
                "threshold" => c.threshold = parse_value(key, v)?,
                "include_censored" => c.include_censored = parse_value(key, v)?,
                "omega_band" => c.omega_band = parse_value(key, v)?,
                "replicates" => c.replicates = parse_value(key, v)?,
                "rewiring" => c.rewiring = parse_value(key, v)?,
                "baseline_nodes" => c.baseline_nodes = parse_opt(key, v)?,
                "baseline_edges" => c.baseline_edges = parse_opt(key, v)?,
                "per_year_baselines" => c.per_year_baselines = parse_value(key, v)?,
                "out" => c.out = PathBuf::from(v),
                _ => {
                    return Err(CliError::Config(format!(
                        "line {}: unknown key {key}",
                        i + 1
                    )))
                }
            }
        }
        Ok(c)
    }

    /// Reads a config file and resolves relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut c = Self::parse(&text)?;
        let base = path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map_or_else(|| PathBuf::from("."), Path::to_path_buf);
        let base = absolute(&base)?;
        let resolve = |p: &Path| normalize(&base.join(p));
        c.nodes = c.nodes.as_deref().map(resolve);
        c.edges = c.edges.as_deref().map(resolve);
        c.events = c.events.as_deref().map(resolve);
        c.out = resolve(&c.out);
        Ok(c)
    }

    /// Serializes every key, so `parse(&c.render()) == c`.
    pub fn render(&self) -> String {
        let values = [
            show_path(&self.nodes),
            show_path(&self.edges),
            show_path(&self.events),
            self.country_tag.clone(),
            self.voltage_floor_kv.to_string(),
            show(&self.year_start),
            show(&self.year_end),
            self.gamma.to_string(),
            self.seed.to_string(),
            self.chordless_only.to_string(),
            self.star_variant.to_string(),
            self.window.to_string(),
            self.threshold.to_string(),
            self.include_censored.to_string(),
            self.omega_band.to_string(),
            self.replicates.to_string(),
            self.rewiring.to_string(),
            show(&self.baseline_nodes),
            show(&self.baseline_edges),
            self.per_year_baselines.to_string(),
            self.out.display().to_string(),
        ];
        let mut s = String::new();
        for (k, v) in KEYS.iter().zip(values) {
            if v.is_empty() {
                let _ = writeln!(s, "{k} =");
            } else {
                let _ = writeln!(s, "{k} = {v}");
            }
        }
        s
    }

    pub fn require_inputs(&self) -> Result<(&Path, &Path), CliError> {
        match (&self.nodes, &self.edges) {
            (Some(n), Some(e)) => Ok((n, e)),
            _ => Err(CliError::Config(
                "nodes and edges input paths are required".into(),
            )),
        }
    }
}
