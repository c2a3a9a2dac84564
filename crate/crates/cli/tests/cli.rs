mod common;

use std::collections::BTreeMap;

use common::*;
use gridevo_cli::RunConfig;

fn conf(dir: &std::path::Path) -> String {
    dir.join("run.conf").to_string_lossy().into_owned()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write_planted(dir.path());
    write_config(dir.path(), "");
    let ok = gridevo(&["validate", "--config", &conf(dir.path())]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stdout)
    );
    assert!(String::from_utf8_lossy(&ok.stdout).contains("0 violation(s)"));

    write(
        dir.path(),
        "edges.csv",
        &format!("{PLANTED_EDGES}L9,A,Z,400,1,1995,\n"),
    );
    let bad = gridevo(&["validate", "--config", &conf(dir.path())]);
    assert_eq!(bad.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&bad.stdout);
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("error:")).count(),
        1,
        "{stdout}"
    );
    assert!(stdout.contains("unknown node Z"));

    std::fs::remove_file(dir.path().join("nodes.csv")).unwrap();
    assert_eq!(
        gridevo(&["validate", "--config", &conf(dir.path())])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn analysis_of_invalid_records_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    write_planted(dir.path());
    write(
        dir.path(),
        "edges.csv",
        &format!("{PLANTED_EDGES}L9,A,Z,400,1,1995,\n"),
    );
    write_config(dir.path(), "");
    assert_eq!(
        gridevo(&["panel", "--config", &conf(dir.path())])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    write_planted(dir.path());
    write_config(dir.path(), "colour = red\n");
    assert_eq!(
        gridevo(&["panel", "--config", &conf(dir.path())])
            .status
            .code(),
        Some(2)
    );
    write_config(dir.path(), "");
    assert_eq!(
        gridevo(&["temporal", "--config", &conf(dir.path()), "--window", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        gridevo(&[
            "temporal",
            "--config",
            &conf(dir.path()),
            "--threshold",
            "1.5"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        gridevo(&["panel", "--config", "/nonexistent/run.conf"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn toy_panel_has_one_row_per_year() {
    let dir = tempfile::tempdir().unwrap();
    write_toy(dir.path());
    write_config(dir.path(), "");
    run_ok(&["panel", "--config", &conf(dir.path())]);
    let (header, rows) = read_csv(&dir.path().join("out/panel_wide.csv"));
    assert_eq!(rows.len(), 3);
    let (e, c) = (column(&header, "E"), column(&header, "C"));
    let edges: Vec<&str> = rows.iter().map(|r| r[e].as_str()).collect();
    assert_eq!(edges, ["2", "3", "4"]);
    // triangle plus the isolated node d
    assert_eq!(rows[1][c], "0.75");

    let (header, tidy) = read_csv(&dir.path().join("out/panel_tidy.csv"));
    assert_eq!(
        header,
        [
            "country",
            "year",
            "voltage_floor_kv",
            "metric",
            "value",
            "defined_reason"
        ]
    );
    assert_eq!(tidy.len(), 3 * gridevo::MetricRow::NAMES.len());
    let keys: Vec<(i32, String)> = tidy
        .iter()
        .map(|r| (r[1].parse().unwrap(), r[3].clone()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    for r in &tidy {
        assert!(r[4].is_empty() != r[5].is_empty(), "{r:?}");
    }
}

#[test]
fn lower_floor_panel_contains_higher_floor_panel() {
    let dir = tempfile::tempdir().unwrap();
    write_synthetic(dir.path(), 5);
    write_config(dir.path(), "");
    let c = conf(dir.path());
    run_ok(&[
        "panel",
        "--config",
        &c,
        "--out",
        &dir.path().join("hv").to_string_lossy(),
    ]);
    run_ok(&[
        "panel",
        "--config",
        &c,
        "--voltage-floor",
        "0",
        "--out",
        &dir.path().join("all").to_string_lossy(),
    ]);
    let counts = |sub: &str| -> BTreeMap<String, (usize, usize)> {
        let (h, rows) = read_csv(&dir.path().join(sub).join("panel_wide.csv"));
        let (y, n, e) = (column(&h, "year"), column(&h, "N"), column(&h, "E"));
        rows.iter()
            .map(|r| (r[y].clone(), (r[n].parse().unwrap(), r[e].parse().unwrap())))
            .collect()
    };
    let (hv, all) = (counts("hv"), counts("all"));
    assert_eq!(hv.len(), 31);
    assert_eq!(
        hv.keys().collect::<Vec<_>>(),
        all.keys().collect::<Vec<_>>()
    );
    for (year, (n, e)) in &hv {
        assert!(all[year].0 >= *n && all[year].1 >= *e, "{year}");
    }
    assert!(hv.iter().any(|(y, v)| all[y] != *v));
}

#[test]
fn toy_motif_shares_sum_to_one() {
    let dir = tempfile::tempdir().unwrap();
    write_toy(dir.path());
    write_config(dir.path(), "");
    run_ok(&["motifs", "--config", &conf(dir.path())]);
    let (header, rows) = read_csv(&dir.path().join("out/motifs.csv"));
    assert_eq!(
        header,
        [
            "country",
            "year",
            "motif",
            "count",
            "share",
            "variant",
            "chordless_only"
        ]
    );
    let mut per_year: BTreeMap<String, f64> = BTreeMap::new();
    for r in &rows {
        *per_year.entry(r[1].clone()).or_default() += r[4].parse::<f64>().unwrap_or(0.0);
    }
    // 2000 is a bare path with no motif, so its shares are empty
    assert_eq!(per_year["2000"], 0.0);
    assert!((per_year["2001"] - 1.0).abs() < 1e-12);
    assert!((per_year["2002"] - 1.0).abs() < 1e-12);
    let c3_2002 = rows
        .iter()
        .find(|r| r[1] == "2002" && r[2] == "c3")
        .unwrap();
    assert_eq!(c3_2002[3], "1");
}

#[test]
fn temporal_recovers_planted_lifetimes() {
    let dir = tempfile::tempdir().unwrap();
    write_planted(dir.path());
    write_config(dir.path(), "");
    run_ok(&[
        "temporal",
        "--config",
        &conf(dir.path()),
        "--threshold",
        "0.3",
    ]);
    let (h, rows) = read_csv(&dir.path().join("out/lifetime_by_year.csv"));
    let (y, m) = (column(&h, "year"), column(&h, "mean_lifetime"));
    for (year, mean) in PLANTED_MEANS {
        let row = rows.iter().find(|r| r[y] == year.to_string()).unwrap();
        assert_eq!(row[m].parse::<f64>().unwrap(), mean);
    }
    let (h, rows) = read_csv(&dir.path().join("out/lifetimes.csv"));
    let ids: Vec<&str> = rows
        .iter()
        .map(|r| r[column(&h, "edge_id")].as_str())
        .collect();
    assert_eq!(ids, ["L1", "L2", "L3", "L4", "L6"]);
    let (_, under) = read_csv(&dir.path().join("out/underperformers.csv"));
    assert_eq!(
        under.iter().map(|r| r[1].as_str()).collect::<Vec<_>>(),
        ["L1"]
    );

    let (h, rates) = read_csv(&dir.path().join("out/change_rates.csv"));
    let get = |year: &str, col: &str| -> String {
        rates.iter().find(|r| r[1] == year).unwrap()[column(&h, col)].clone()
    };
    assert_eq!(get("2000", "new_lines"), "2");
    assert_eq!(get("2000", "decommissions"), "1");
    assert_eq!(get("2002", "topological_changes"), "1");
    assert_eq!(get("2006", "lines_in_operation"), "2");
}

#[test]
fn baselines_report_the_ordering() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.conf",
        "baseline_nodes = 60\nbaseline_edges = 90\nreplicates = 20\nout = out\n",
    );
    run_ok(&["baselines", "--config", &conf(dir.path())]);
    let (h, rows) = read_csv(&dir.path().join("out/baselines_summary.csv"));
    let metric = column(&h, "metric");
    let ordering = rows.iter().find(|r| r[metric] == "ordering_holds").unwrap();
    assert_eq!(ordering[column(&h, "mean")], "1");
    let disc = rows
        .iter()
        .find(|r| r[metric] == "edge_discrepancy")
        .unwrap();
    assert_eq!(disc[column(&h, "mean")], "-30");
    let (h, reps) = read_csv(&dir.path().join("out/baselines_replicates.csv"));
    assert_eq!(h, ["family", "replicate", "metric", "value"]);
    assert_eq!(reps.len(), 3 * 20 * 4);
    assert!(!dir.path().join("out/baselines_empirical.csv").exists());
}

#[test]
fn baselines_default_to_the_panel_average() {
    let dir = tempfile::tempdir().unwrap();
    write_synthetic(dir.path(), 8);
    write_config(dir.path(), "replicates = 4\nper_year_baselines = true\n");
    run_ok(&["baselines", "--config", &conf(dir.path())]);
    let (h, points) = read_csv(&dir.path().join("out/baselines_empirical.csv"));
    let n = column(&h, "nodes");
    let mean = points
        .iter()
        .map(|r| r[n].parse::<f64>().unwrap())
        .sum::<f64>()
        / points.len() as f64;
    let (h, summary) = read_csv(&dir.path().join("out/baselines_summary.csv"));
    let random = summary.iter().find(|r| r[1] == "erdos_renyi").unwrap();
    assert_eq!(
        random[column(&h, "nodes")],
        (mean.round() as usize).to_string()
    );
    assert!(dir.path().join("out/baselines_per_year.csv").exists());
}

#[test]
fn manifest_is_a_loadable_config() {
    let dir = tempfile::tempdir().unwrap();
    write_toy(dir.path());
    write_config(dir.path(), "gamma = 0.75\n");
    run_ok(&["motifs", "--config", &conf(dir.path()), "--seed", "9"]);
    let manifest = dir.path().join("out/manifest_motifs.conf");
    let text = std::fs::read_to_string(&manifest).unwrap();
    assert!(text.contains(&format!("# toolkit_version = {}", gridevo::VERSION)));
    assert!(text.contains("# command = motifs"));
    let c = RunConfig::load(&manifest).unwrap();
    assert_eq!((c.gamma, c.seed), (0.75, 9));
    assert_eq!(
        c.nodes.unwrap(),
        std::path::absolute(dir.path().join("nodes.csv")).unwrap()
    );
}
