//! One function per subcommand. Each returns the files it wrote.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use gridevo::baselines::{
    efficiency_comparison_with, BaselineEnsemble, EfficiencyComparison, ReplicateMetrics,
};
use gridevo::ingest::{build_panel, parse_asset_records, read_asset_records, validate_records};
use gridevo::metrics::{
    apsp_summary, classify_omega, metric_panel, small_world_sigma, MetricRow, OmegaClass,
};
use gridevo::motifs::motif_share_series;
use gridevo::temporal::{
    annual_change_rates, average_lifetime_by_year, line_lifetimes, underperformers, LifetimeRecord,
};
use gridevo::{AnnualSnapshot, AssetRecordSet, ParameterError};

use crate::config::RunConfig;
use crate::output::{create_dir, float, manifest_name, metric_cells, opt, write_manifest, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Panel,
    Motifs,
    Temporal,
    Baselines,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Panel => "panel",
            Command::Motifs => "motifs",
            Command::Temporal => "temporal",
            Command::Baselines => "baselines",
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub voltage_floor_kv: Option<u32>,
    pub gamma: Option<f64>,
    pub seed: Option<u64>,
    pub window: Option<usize>,
    pub threshold: Option<f64>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, c: &mut RunConfig) -> Result<(), CliError> {
        if let Some(v) = self.voltage_floor_kv {
            c.voltage_floor_kv = v;
        }
        if let Some(v) = self.gamma {
            c.gamma = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.window {
            c.window = v;
        }
        if let Some(v) = self.threshold {
            c.threshold = v;
        }
        if let Some(out) = &self.out {
            c.out = crate::config::absolute(out)?;
        }
        Ok(())
    }
}

/// Loads the config, applies overrides and runs `command`. Human-readable
/// progress goes to `log`. Returns the process exit code.
pub fn run(
    command: Command,
    config_path: &Path,
    overrides: &Overrides,
    log: &mut dyn Write,
) -> Result<i32, CliError> {
    let mut config = RunConfig::load(config_path)?;
    overrides.apply(&mut config)?;
    check_parameters(&config)?;
    if command == Command::Validate {
        return validate(&config, log);
    }
    create_dir(&config.out)?;
    let mut outputs = match command {
        Command::Validate => unreachable!(),
        Command::Panel => panel(&config)?,
        Command::Motifs => motifs(&config)?,
        Command::Temporal => temporal(&config)?,
        Command::Baselines => baselines(&config)?,
    };
    outputs.push(write_manifest(&config, command.as_str(), &outputs)?);
    for path in &outputs {
        let _ = writeln!(log, "wrote {}", path.display());
    }
    Ok(0)
}

fn check_parameters(c: &RunConfig) -> Result<(), ParameterError> {
    let fail = |msg: String| Err(ParameterError(msg));
    if !(c.gamma.is_finite() && c.gamma > 0.0) {
        return fail(format!("gamma must be positive, got {}", c.gamma));
    }
    if c.window == 0 || c.window.is_multiple_of(2) {
        return fail(format!("window must be odd and positive, got {}", c.window));
    }
    if !(c.threshold > 0.0 && c.threshold < 1.0) {
        return fail(format!("threshold must lie in (0, 1), got {}", c.threshold));
    }
    if !(c.omega_band > 0.0 && c.omega_band <= 1.0) {
        return fail(format!(
            "omega_band must lie in (0, 1], got {}",
            c.omega_band
        ));
    }
    if !(0.0..=1.0).contains(&c.rewiring) {
        return fail(format!("rewiring must lie in [0, 1], got {}", c.rewiring));
    }
    if c.replicates == 0 {
        return fail("replicates must be positive".into());
    }
    if let (Some(a), Some(b)) = (c.year_start, c.year_end) {
        if a > b {
            return fail(format!("year_start {a} is after year_end {b}"));
        }
    }
    Ok(())
}

fn load_records(c: &RunConfig) -> Result<AssetRecordSet, CliError> {
    let (nodes, edges) = c.require_inputs()?;
    Ok(parse_asset_records(
        nodes,
        edges,
        c.events.as_deref(),
        &c.country_tag,
    )?)
}

fn year_range(c: &RunConfig, set: &AssetRecordSet) -> RangeInclusive<i32> {
    c.year_start.unwrap_or(set.dataset_start)..=c.year_end.unwrap_or(set.dataset_end)
}

fn snapshots(c: &RunConfig, set: &AssetRecordSet) -> Result<Vec<AnnualSnapshot>, CliError> {
    Ok(build_panel(set, year_range(c, set), c.voltage_floor_kv)?)
}

pub fn validate(c: &RunConfig, log: &mut dyn Write) -> Result<i32, CliError> {
    let (nodes, edges) = c.require_inputs()?;
    let set = read_asset_records(nodes, edges, c.events.as_deref(), &c.country_tag)?;
    let report = validate_records(&set);
    let _ = write!(log, "{report}");
    let _ = writeln!(
        log,
        "{}: {} nodes, {} edges, span {}-{}, {} violation(s)",
        set.country_tag,
        set.nodes.len(),
        set.edges.len(),
        set.dataset_start,
        set.dataset_end,
        report.len()
    );
    Ok(if report.is_empty() { 0 } else { 1 })
}

fn omega_class_name(class: OmegaClass) -> &'static str {
    match class {
        OmegaClass::LatticeLike => "lattice_like",
        OmegaClass::SmallWorld => "small_world",
        OmegaClass::RandomLike => "random_like",
    }
}

pub fn panel(c: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let set = load_records(c)?;
    let panel = metric_panel(&snapshots(c, &set)?, c.gamma, c.seed);
    let floor = c.voltage_floor_kv.to_string();

    let mut tidy = Table::create(
        &c.out,
        "panel_tidy.csv",
        &[
            "country",
            "year",
            "voltage_floor_kv",
            "metric",
            "value",
            "defined_reason",
        ],
    )?;
    for row in &panel.rows {
        let mut values = row.values();
        values.sort_by(|a, b| a.0.cmp(b.0));
        for (name, v) in values {
            let (value, reason) = metric_cells(v);
            tidy.row([
                &c.country_tag,
                &row.year.to_string(),
                &floor,
                name,
                &value,
                &reason,
            ])?;
        }
    }

    let mut header = vec!["country", "year", "voltage_floor_kv"];
    header.extend(MetricRow::NAMES);
    header.push("omega_class");
    let mut wide = Table::create(&c.out, "panel_wide.csv", &header)?;
    for row in &panel.rows {
        let mut fields = vec![c.country_tag.clone(), row.year.to_string(), floor.clone()];
        fields.extend(row.values().into_iter().map(|(_, v)| metric_cells(v).0));
        let class = row
            .omega
            .ok()
            .map(|w| omega_class_name(classify_omega(w, c.omega_band)));
        fields.push(opt(class));
        wide.row(&fields)?;
    }
    Ok(vec![tidy.finish()?, wide.finish()?])
}

pub fn motifs(c: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let set = load_records(c)?;
    let series = motif_share_series(&snapshots(c, &set)?, c.chordless_only, c.star_variant);
    let mut t = Table::create(
        &c.out,
        "motifs.csv",
        &[
            "country",
            "year",
            "motif",
            "count",
            "share",
            "variant",
            "chordless_only",
        ],
    )?;
    for shares in &series {
        for (motif, count, share) in shares.entries() {
            let share = if shares.is_empty() {
                String::new()
            } else {
                float(share)
            };
            t.row([
                c.country_tag.as_str(),
                &shares.year().to_string(),
                motif,
                &count.to_string(),
                &share,
                c.star_variant.as_str(),
                &c.chordless_only.to_string(),
            ])?;
        }
    }
    Ok(vec![t.finish()?])
}

const LIFETIME_HEADER: [&str; 8] = [
    "country",
    "edge_id",
    "year_in",
    "first_change_year",
    "lifetime",
    "censored",
    "max_expected",
    "survived_ratio",
];

fn lifetime_row(t: &mut Table, country: &str, r: &LifetimeRecord) -> Result<(), CliError> {
    t.row([
        country,
        &r.edge_id,
        &r.year_commissioned.to_string(),
        &opt(r.first_change_year),
        &opt(r.lifetime_years),
        &r.censored.to_string(),
        &r.max_expected_lifetime.to_string(),
        &opt(r.survived_ratio.map(float)),
    ])
}

/// Lifetimes and change rates of the lines at or above the voltage floor.
pub fn temporal(c: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let set = load_records(c)?.with_voltage_floor(c.voltage_floor_kv);
    let years = year_range(c, &set);
    let records = line_lifetimes(&set);
    let country = c.country_tag.as_str();

    let mut lifetimes = Table::create(&c.out, "lifetimes.csv", &LIFETIME_HEADER)?;
    for r in &records {
        lifetime_row(&mut lifetimes, country, r)?;
    }

    let mut by_year = Table::create(
        &c.out,
        "lifetime_by_year.csv",
        &[
            "country",
            "year",
            "mean_lifetime",
            "contributing",
            "include_censored",
        ],
    )?;
    for y in average_lifetime_by_year(&records, c.include_censored) {
        if years.contains(&y.year) {
            by_year.row([
                country,
                &y.year.to_string(),
                &opt(y.mean_lifetime.map(float)),
                &y.contributing.to_string(),
                &c.include_censored.to_string(),
            ])?;
        }
    }

    let rates = annual_change_rates(&set, c.window)?;
    let mut change = Table::create(
        &c.out,
        "change_rates.csv",
        &[
            "country",
            "year",
            "lines_in_operation",
            "new_lines",
            "decommissions",
            "topological_changes",
            "new_lines_relative",
            "changes_relative",
            "new_lines_smoothed",
            "changes_smoothed",
            "window",
        ],
    )?;
    for r in rates.rows.iter().filter(|r| years.contains(&r.year)) {
        change.row([
            country,
            &r.year.to_string(),
            &r.lines_in_operation.to_string(),
            &r.new_lines.to_string(),
            &r.decommissions.to_string(),
            &r.topological_changes.to_string(),
            &opt(r.new_lines_relative.map(float)),
            &opt(r.changes_relative.map(float)),
            &opt(r.new_lines_smoothed.map(float)),
            &opt(r.changes_smoothed.map(float)),
            &rates.window.to_string(),
        ])?;
    }

    let mut under = Table::create(&c.out, "underperformers.csv", &LIFETIME_HEADER)?;
    for r in underperformers(&records, c.threshold)? {
        lifetime_row(&mut under, country, &r)?;
    }
    Ok(vec![
        lifetimes.finish()?,
        by_year.finish()?,
        change.finish()?,
        under.finish()?,
    ])
}

struct EmpiricalPoint {
    year: i32,
    nodes: usize,
    edges: usize,
    efficiency: Option<f64>,
    sigma: Option<f64>,
}

fn empirical_points(snapshots: &[AnnualSnapshot]) -> Vec<EmpiricalPoint> {
    use rayon::prelude::*;
    snapshots
        .par_iter()
        .map(|s| EmpiricalPoint {
            year: s.year,
            nodes: s.node_count(),
            edges: s.edge_count(),
            efficiency: apsp_summary(&s.graph).ok().map(|a| a.efficiency),
            sigma: small_world_sigma(&s.graph).ok(),
        })
        .collect()
}

fn mean_rounded(values: impl Iterator<Item = usize>) -> Option<usize> {
    let (sum, count) = values.fold((0usize, 0usize), |(s, n), v| (s + v, n + 1));
    (count > 0).then(|| ((sum as f64 / count as f64).round()) as usize)
}

const SUMMARY_HEADER: [&str; 9] = [
    "country",
    "family",
    "nodes",
    "edges",
    "coordination",
    "metric",
    "mean",
    "std_dev",
    "defined",
];

fn summary_rows(
    t: &mut Table,
    country: &str,
    year: Option<i32>,
    e: &BaselineEnsemble,
) -> Result<(), CliError> {
    for metric in ReplicateMetrics::NAMES {
        let s = e.summary(metric);
        let mut fields = vec![country.to_string()];
        if let Some(y) = year {
            fields.push(y.to_string());
        }
        fields.extend([
            e.spec.family.as_str().to_string(),
            e.spec.nodes.to_string(),
            e.spec.generated_edges().to_string(),
            e.spec.coordination.to_string(),
            metric.to_string(),
            opt(s.map(|s| float(s.mean))),
            opt(s.map(|s| float(s.std_dev))),
            s.map_or(0, |s| s.defined).to_string(),
        ]);
        t.row(&fields)?;
    }
    Ok(())
}

/// Random, small-world and ring-lattice references at the panel's average size.
pub fn baselines(c: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let country = c.country_tag.as_str();
    let points = match (c.baseline_nodes, c.baseline_edges, c.per_year_baselines) {
        (Some(_), Some(_), false) => Vec::new(),
        _ => {
            let set = load_records(c)?;
            empirical_points(&snapshots(c, &set)?)
        }
    };
    let nodes = c
        .baseline_nodes
        .or_else(|| mean_rounded(points.iter().map(|p| p.nodes)));
    let edges = c
        .baseline_edges
        .or_else(|| mean_rounded(points.iter().map(|p| p.edges)));
    let (Some(nodes), Some(edges)) = (nodes, edges) else {
        return Err(
            ParameterError("no panel years to average a reference size from".into()).into(),
        );
    };
    let cmp = efficiency_comparison_with(nodes, edges, c.replicates, c.seed, c.rewiring)?;
    let mut outputs = write_comparison(c, &cmp)?;

    if !points.is_empty() {
        let mut t = Table::create(
            &c.out,
            "baselines_empirical.csv",
            &[
                "country",
                "year",
                "voltage_floor_kv",
                "nodes",
                "edges",
                "eta",
                "sigma",
            ],
        )?;
        for p in &points {
            t.row([
                country,
                &p.year.to_string(),
                &c.voltage_floor_kv.to_string(),
                &p.nodes.to_string(),
                &p.edges.to_string(),
                &opt(p.efficiency.map(float)),
                &opt(p.sigma.map(float)),
            ])?;
        }
        outputs.push(t.finish()?);
    }

    if c.per_year_baselines {
        let mut header = SUMMARY_HEADER.to_vec();
        header.insert(1, "year");
        let mut t = Table::create(&c.out, "baselines_per_year.csv", &header)?;
        for p in &points {
            // years too small or too dense for all three families are skipped
            let Ok(cmp) =
                efficiency_comparison_with(p.nodes, p.edges, c.replicates, c.seed, c.rewiring)
            else {
                continue;
            };
            for e in cmp.ensembles() {
                summary_rows(&mut t, country, Some(p.year), e)?;
            }
        }
        outputs.push(t.finish()?);
    }
    Ok(outputs)
}

fn write_comparison(c: &RunConfig, cmp: &EfficiencyComparison) -> Result<Vec<PathBuf>, CliError> {
    let mut reps = Table::create(
        &c.out,
        "baselines_replicates.csv",
        &["family", "replicate", "metric", "value"],
    )?;
    for e in cmp.ensembles() {
        for r in &e.replicates {
            for (metric, v) in r.values() {
                reps.row([
                    e.spec.family.as_str(),
                    &r.replicate.to_string(),
                    metric,
                    &metric_cells(v).0,
                ])?;
            }
        }
    }

    let mut summary = Table::create(&c.out, "baselines_summary.csv", &SUMMARY_HEADER)?;
    for e in cmp.ensembles() {
        summary_rows(&mut summary, &c.country_tag, None, e)?;
    }
    let common = |metric: &str, value: String| {
        [
            c.country_tag.clone(),
            "all".to_string(),
            cmp.nodes.to_string(),
            cmp.target_edges.to_string(),
            cmp.coordination.to_string(),
            metric.to_string(),
            value,
            String::new(),
            c.replicates.to_string(),
        ]
    };
    summary.row(common("edge_discrepancy", cmp.edge_discrepancy.to_string()))?;
    summary.row(common(
        "ordering_holds",
        u8::from(cmp.ordering_holds()).to_string(),
    ))?;
    Ok(vec![reps.finish()?, summary.finish()?])
}

/// Name of the manifest a command writes into its output directory.
pub fn manifest_file(command: Command) -> String {
    manifest_name(command.as_str())
}
