//! Asset record ingestion, validation, and per-year snapshot materialization.
//!
//! Records are read from three comma-separated files:
//!
//! * `nodes.csv`: `node_id,label,voltage_kv,year_in,year_out,lat,lon`
//! * `edges.csv`: `edge_id,node_a,node_b,voltage_kv,circuits,year_in,year_out`
//! * `events.csv` (optional): `edge_id,year,kind`
//!
//! An asset is alive in year `y` iff `year_in <= y` and either it has no
//! `year_out` or `y < year_out`; it disappears in its decommissioning year.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{AnnualSnapshot, Graph};

pub const NODE_HEADER: [&str; 7] = [
    "node_id",
    "label",
    "voltage_kv",
    "year_in",
    "year_out",
    "lat",
    "lon",
];
pub const EDGE_HEADER: [&str; 7] = [
    "edge_id",
    "node_a",
    "node_b",
    "voltage_kv",
    "circuits",
    "year_in",
    "year_out",
];
pub const EVENT_HEADER: [&str; 3] = ["edge_id", "year", "kind"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: u64,
        message: String,
    },
    #[error("edge {edge_id}: unknown node {node_id}")]
    DanglingEndpoint { edge_id: String, node_id: String },
    #[error("event in {file}:{line}: unknown edge {edge_id}")]
    UnknownEventEdge {
        file: String,
        line: u64,
        edge_id: String,
    },
    #[error("{id}: year_out {year_out} precedes year_in {year_in}")]
    Interval {
        id: String,
        year_in: i32,
        year_out: i32,
    },
    #[error("record set is invalid:\n{0}")]
    Invalid(ValidationReport),
    #[error("no node records")]
    Empty,
    #[error("year {year} outside dataset span {start}-{end}")]
    YearOutOfRange { year: i32, start: i32, end: i32 },
    #[error("empty year range {start}-{end}")]
    EmptyRange { start: i32, end: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChangeKind {
    Split,
    Reroute,
    VoltageUpgrade,
    Decommission,
    Other,
}

impl ChangeKind {
    pub const ALL: [ChangeKind; 5] = [
        ChangeKind::Split,
        ChangeKind::Reroute,
        ChangeKind::VoltageUpgrade,
        ChangeKind::Decommission,
        ChangeKind::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ChangeKind::Split => "split",
            ChangeKind::Reroute => "reroute",
            ChangeKind::VoltageUpgrade => "voltage_upgrade",
            ChangeKind::Decommission => "decommission",
            ChangeKind::Other => "other",
        }
    }
}

impl fmt::Display for ChangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ChangeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ChangeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown change kind {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChangeEvent {
    pub year: i32,
    pub kind: ChangeKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub node_id: String,
    pub label: String,
    pub voltage_class_kv: u32,
    pub year_in: i32,
    pub year_out: Option<i32>,
    pub latitude: Option<f64>,
    pub longitude: Option<f64>,
}

impl NodeRecord {
    pub fn alive_at(&self, year: i32) -> bool {
        alive(self.year_in, self.year_out, year)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub edge_id: String,
    pub node_a: String,
    pub node_b: String,
    pub voltage_class_kv: u32,
    pub circuits: u32,
    pub year_in: i32,
    pub year_out: Option<i32>,
    /// Sorted by year, then kind.
    pub events: Vec<ChangeEvent>,
}

impl EdgeRecord {
    pub fn alive_at(&self, year: i32) -> bool {
        alive(self.year_in, self.year_out, year)
    }
}

fn alive(year_in: i32, year_out: Option<i32>, year: i32) -> bool {
    year_in <= year && year_out.is_none_or(|out| year < out)
}

/// Immutable, harmonized collection of node and edge records for one country.
#[derive(Debug, Clone, PartialEq)]
pub struct AssetRecordSet {
    /// Sorted by `node_id`.
    pub nodes: Vec<NodeRecord>,
    /// Sorted by `edge_id`.
    pub edges: Vec<EdgeRecord>,
    pub dataset_start: i32,
    pub dataset_end: i32,
    pub country_tag: String,
}

impl AssetRecordSet {
    /// Builds a set from in-memory records, canonicalizing order and inferring
    /// the dataset span from every year mentioned.
    pub fn new(
        mut nodes: Vec<NodeRecord>,
        mut edges: Vec<EdgeRecord>,
        country_tag: impl Into<String>,
    ) -> Result<Self, IngestError> {
        if nodes.is_empty() {
            return Err(IngestError::Empty);
        }
        nodes.sort_by(|a, b| a.node_id.cmp(&b.node_id));
        edges.sort_by(|a, b| a.edge_id.cmp(&b.edge_id));
        for e in &mut edges {
            e.events.sort();
        }
        let years = nodes
            .iter()
            .flat_map(|n| [Some(n.year_in), n.year_out])
            .chain(edges.iter().flat_map(|e| {
                [Some(e.year_in), e.year_out]
                    .into_iter()
                    .chain(e.events.iter().map(|ev| Some(ev.year)))
            }))
            .flatten();
        let (start, end) = years.fold((i32::MAX, i32::MIN), |(lo, hi), y| (lo.min(y), hi.max(y)));
        Ok(Self {
            nodes,
            edges,
            dataset_start: start,
            dataset_end: end,
            country_tag: country_tag.into(),
        })
    }

    pub fn span(&self) -> RangeInclusive<i32> {
        self.dataset_start..=self.dataset_end
    }

    /// Overrides the inferred dataset span. Fails if any record year falls outside it.
    pub fn with_span(mut self, start: i32, end: i32) -> Result<Self, IngestError> {
        if start > end {
            return Err(IngestError::EmptyRange { start, end });
        }
        if self.dataset_start < start || self.dataset_end > end {
            return Err(IngestError::YearOutOfRange {
                year: if self.dataset_start < start {
                    self.dataset_start
                } else {
                    self.dataset_end
                },
                start,
                end,
            });
        }
        self.dataset_start = start;
        self.dataset_end = end;
        Ok(self)
    }

    /// Copy with every edge below `voltage_floor_kv` dropped; nodes are kept.
    pub fn with_voltage_floor(&self, voltage_floor_kv: u32) -> Self {
        Self {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .filter(|e| e.voltage_class_kv >= voltage_floor_kv)
                .cloned()
                .collect(),
            dataset_start: self.dataset_start,
            dataset_end: self.dataset_end,
            country_tag: self.country_tag.clone(),
        }
    }

    pub fn node(&self, node_id: &str) -> Option<&NodeRecord> {
        self.nodes
            .binary_search_by(|n| n.node_id.as_str().cmp(node_id))
            .ok()
            .map(|i| &self.nodes[i])
    }
}

// ---------------------------------------------------------------------------
// Parsing

/// Reads and validates the record files. Validation errors are returned as
/// typed errors; warnings are tolerated.
pub fn parse_asset_records(
    nodes: &Path,
    edges: &Path,
    events: Option<&Path>,
    country_tag: &str,
) -> Result<AssetRecordSet, IngestError> {
    let set = read_asset_records(nodes, edges, events, country_tag)?;
    check(set)
}

/// Same as [`parse_asset_records`] over in-memory CSV text.
pub fn parse_asset_records_str(
    nodes: &str,
    edges: &str,
    events: Option<&str>,
    country_tag: &str,
) -> Result<AssetRecordSet, IngestError> {
    let set = read_records(
        ("nodes.csv", nodes.as_bytes()),
        ("edges.csv", edges.as_bytes()),
        events.map(|e| ("events.csv", e.as_bytes())),
        country_tag,
    )?;
    check(set)
}

/// Syntactic parse only: no referential or interval checks beyond what is
/// needed to attach events to edges.
pub fn read_asset_records(
    nodes: &Path,
    edges: &Path,
    events: Option<&Path>,
    country_tag: &str,
) -> Result<AssetRecordSet, IngestError> {
    let open = |p: &Path| {
        File::open(p).map_err(|source| IngestError::Io {
            file: p.display().to_string(),
            source,
        })
    };
    let node_file = open(nodes)?;
    let edge_file = open(edges)?;
    let event_file = events.map(open).transpose()?;
    let nodes_name = nodes.display().to_string();
    let edges_name = edges.display().to_string();
    let events_name = events.map(|p| p.display().to_string()).unwrap_or_default();
    read_records(
        (&nodes_name, node_file),
        (&edges_name, edge_file),
        event_file.map(|f| (events_name.as_str(), f)),
        country_tag,
    )
}

fn check(set: AssetRecordSet) -> Result<AssetRecordSet, IngestError> {
    let report = validate_records(&set);
    let Some(first) = report.errors().next().cloned() else {
        return Ok(set);
    };
    match &first.detail {
        ViolationDetail::DanglingEndpoint { edge_id, node_id } => {
            Err(IngestError::DanglingEndpoint {
                edge_id: edge_id.clone(),
                node_id: node_id.clone(),
            })
        }
        ViolationDetail::InvertedInterval {
            id,
            year_in,
            year_out,
        } => Err(IngestError::Interval {
            id: id.clone(),
            year_in: *year_in,
            year_out: *year_out,
        }),
        _ => Err(IngestError::Invalid(report)),
    }
}

fn read_records<R: Read>(
    nodes: (&str, R),
    edges: (&str, R),
    events: Option<(&str, R)>,
    country_tag: &str,
) -> Result<AssetRecordSet, IngestError> {
    let node_rows = read_table(nodes.0, nodes.1, &NODE_HEADER)?;
    let edge_rows = read_table(edges.0, edges.1, &EDGE_HEADER)?;

    let mut node_records = Vec::with_capacity(node_rows.len());
    for row in &node_rows {
        node_records.push(NodeRecord {
            node_id: row.text(0)?,
            label: row.raw(1).to_string(),
            voltage_class_kv: row.parse(2, "voltage_kv")?,
            year_in: row.year(3)?,
            year_out: row.opt_year(4)?,
            latitude: row.opt_parse(5, "lat")?,
            longitude: row.opt_parse(6, "lon")?,
        });
    }

    let mut edge_records = Vec::with_capacity(edge_rows.len());
    for row in &edge_rows {
        edge_records.push(EdgeRecord {
            edge_id: row.text(0)?,
            node_a: row.text(1)?,
            node_b: row.text(2)?,
            voltage_class_kv: row.parse(3, "voltage_kv")?,
            circuits: row.parse(4, "circuits")?,
            year_in: row.year(5)?,
            year_out: row.opt_year(6)?,
            events: Vec::new(),
        });
    }

    if let Some((name, reader)) = events {
        let rows = read_table(name, reader, &EVENT_HEADER)?;
        let index: HashMap<String, usize> = edge_records
            .iter()
            .enumerate()
            .map(|(i, e)| (e.edge_id.clone(), i))
            .collect();
        for row in &rows {
            let edge_id = row.text(0)?;
            let year = row.year(1)?;
            let kind = row.raw(2).parse::<ChangeKind>().map_err(|m| row.error(m))?;
            let Some(&i) = index.get(&edge_id) else {
                return Err(IngestError::UnknownEventEdge {
                    file: name.to_string(),
                    line: row.line,
                    edge_id,
                });
            };
            edge_records[i].events.push(ChangeEvent { year, kind });
        }
    }

    AssetRecordSet::new(node_records, edge_records, country_tag)
}

struct Row<'a> {
    file: &'a str,
    line: u64,
    record: csv::StringRecord,
}

impl Row<'_> {
    fn error(&self, message: impl Into<String>) -> IngestError {
        IngestError::Parse {
            file: self.file.to_string(),
            line: self.line,
            message: message.into(),
        }
    }

    fn raw(&self, i: usize) -> &str {
        self.record.get(i).unwrap_or("").trim()
    }

    fn text(&self, i: usize) -> Result<String, IngestError> {
        let s = self.raw(i);
        if s.is_empty() {
            return Err(self.error(format!("empty value in column {}", i + 1)));
        }
        Ok(s.to_string())
    }

    fn parse<T: FromStr>(&self, i: usize, column: &str) -> Result<T, IngestError> {
        let s = self.raw(i);
        s.parse()
            .map_err(|_| self.error(format!("invalid {column} {s:?}")))
    }

    fn opt_parse<T: FromStr>(&self, i: usize, column: &str) -> Result<Option<T>, IngestError> {
        if self.raw(i).is_empty() {
            Ok(None)
        } else {
            self.parse(i, column).map(Some)
        }
    }

    fn year(&self, i: usize) -> Result<i32, IngestError> {
        let s = self.raw(i);
        if s.len() != 4 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(self.error(format!("year must be a 4-digit integer, got {s:?}")));
        }
        Ok(s.parse().expect("four ascii digits"))
    }

    fn opt_year(&self, i: usize) -> Result<Option<i32>, IngestError> {
        if self.raw(i).is_empty() {
            Ok(None)
        } else {
            self.year(i).map(Some)
        }
    }
}

fn read_table<'a, R: Read>(
    file: &'a str,
    reader: R,
    header: &[&str],
) -> Result<Vec<Row<'a>>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let parse_err = |line: u64, message: String| IngestError::Parse {
        file: file.to_string(),
        line,
        message,
    };
    let found = rdr
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .clone();
    if found.iter().ne(header.iter().copied()) {
        return Err(parse_err(
            1,
            format!(
                "expected header `{}`, found `{}`",
                header.join(","),
                found.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut rows = Vec::new();
    for result in rdr.records() {
        let record = result.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            let message = match e.kind() {
                csv::ErrorKind::UnequalLengths {
                    expected_len, len, ..
                } => {
                    format!("expected {expected_len} columns, found {len}")
                }
                _ => e.to_string(),
            };
            parse_err(line, message)
        })?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push(Row { file, line, record });
    }
    Ok(rows)
}

/// Writes the record set back out as the three CSV files in `dir`.
pub fn write_asset_records(set: &AssetRecordSet, dir: &Path) -> Result<(), IngestError> {
    let io = |file: &Path| {
        let name = file.display().to_string();
        move |e: csv::Error| IngestError::Io {
            file: name.clone(),
            source: e.into(),
        }
    };
    let opt = |v: Option<i32>| v.map(|y| y.to_string()).unwrap_or_default();
    let optf = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();

    let path = dir.join("nodes.csv");
    let mut w = csv::Writer::from_path(&path).map_err(io(&path))?;
    w.write_record(NODE_HEADER).map_err(io(&path))?;
    for n in &set.nodes {
        w.write_record([
            n.node_id.clone(),
            n.label.clone(),
            n.voltage_class_kv.to_string(),
            n.year_in.to_string(),
            opt(n.year_out),
            optf(n.latitude),
            optf(n.longitude),
        ])
        .map_err(io(&path))?;
    }
    w.flush().map_err(|e| IngestError::Io {
        file: path.display().to_string(),
        source: e,
    })?;

    let path = dir.join("edges.csv");
    let mut w = csv::Writer::from_path(&path).map_err(io(&path))?;
    w.write_record(EDGE_HEADER).map_err(io(&path))?;
    for e in &set.edges {
        w.write_record([
            e.edge_id.clone(),
            e.node_a.clone(),
            e.node_b.clone(),
            e.voltage_class_kv.to_string(),
            e.circuits.to_string(),
            e.year_in.to_string(),
            opt(e.year_out),
        ])
        .map_err(io(&path))?;
    }
    w.flush().map_err(|e| IngestError::Io {
        file: path.display().to_string(),
        source: e,
    })?;

    let path = dir.join("events.csv");
    let mut w = csv::Writer::from_path(&path).map_err(io(&path))?;
    w.write_record(EVENT_HEADER).map_err(io(&path))?;
    for e in &set.edges {
        for ev in &e.events {
            w.write_record([e.edge_id.as_str(), &ev.year.to_string(), ev.kind.as_str()])
                .map_err(io(&path))?;
        }
    }
    w.flush().map_err(|e| IngestError::Io {
        file: path.display().to_string(),
        source: e,
    })
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationDetail {
    DuplicateNodeId {
        node_id: String,
    },
    DuplicateEdgeId {
        edge_id: String,
    },
    DanglingEndpoint {
        edge_id: String,
        node_id: String,
    },
    SelfLoop {
        edge_id: String,
    },
    InvertedInterval {
        id: String,
        year_in: i32,
        year_out: i32,
    },
    /// Edge life interval is not covered by an endpoint's life interval.
    EndpointNotAlive {
        edge_id: String,
        node_id: String,
    },
    EventOutsideLife {
        edge_id: String,
        year: i32,
    },
    DecommissionConflict {
        edge_id: String,
    },
    OutsideDatasetSpan {
        id: String,
        year: i32,
    },
    NonPositiveVoltage {
        id: String,
    },
    NonPositiveCircuits {
        edge_id: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub severity: Severity,
    pub detail: ViolationDetail,
}

impl Violation {
    fn error(detail: ViolationDetail) -> Self {
        Self {
            severity: Severity::Error,
            detail,
        }
    }

    fn warning(detail: ViolationDetail) -> Self {
        Self {
            severity: Severity::Warning,
            detail,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}: ")?;
        match &self.detail {
            ViolationDetail::DuplicateNodeId { node_id } => {
                write!(f, "duplicate node identifier {node_id}")
            }
            ViolationDetail::DuplicateEdgeId { edge_id } => {
                write!(f, "duplicate edge identifier {edge_id}")
            }
            ViolationDetail::DanglingEndpoint { edge_id, node_id } => {
                write!(f, "edge {edge_id} references unknown node {node_id}")
            }
            ViolationDetail::SelfLoop { edge_id } => write!(f, "edge {edge_id} is a self-loop"),
            ViolationDetail::InvertedInterval {
                id,
                year_in,
                year_out,
            } => write!(f, "{id}: year_out {year_out} precedes year_in {year_in}"),
            ViolationDetail::EndpointNotAlive { edge_id, node_id } => write!(
                f,
                "edge {edge_id}: endpoint {node_id} is not alive for the whole edge life"
            ),
            ViolationDetail::EventOutsideLife { edge_id, year } => {
                write!(
                    f,
                    "edge {edge_id}: event in {year} outside its life interval"
                )
            }
            ViolationDetail::DecommissionConflict { edge_id } => write!(
                f,
                "edge {edge_id}: decommission event disagrees with year_out"
            ),
            ViolationDetail::OutsideDatasetSpan { id, year } => {
                write!(f, "{id}: year {year} outside dataset span")
            }
            ViolationDetail::NonPositiveVoltage { id } => {
                write!(f, "{id}: voltage class must be positive")
            }
            ViolationDetail::NonPositiveCircuits { edge_id } => {
                write!(f, "edge {edge_id}: circuit count must be positive")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations
            .iter()
            .filter(|v| v.severity == Severity::Error)
    }

    pub fn has_errors(&self) -> bool {
        self.errors().next().is_some()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every record-set invariant and reports all violations. Never fails.
pub fn validate_records(set: &AssetRecordSet) -> ValidationReport {
    use ViolationDetail as D;
    let mut out = Vec::new();
    let span = set.span();

    let mut seen = HashSet::new();
    let mut by_id: HashMap<&str, &NodeRecord> = HashMap::new();
    for n in &set.nodes {
        if !seen.insert(n.node_id.as_str()) {
            out.push(Violation::error(D::DuplicateNodeId {
                node_id: n.node_id.clone(),
            }));
        }
        by_id.entry(n.node_id.as_str()).or_insert(n);
        if n.voltage_class_kv == 0 {
            out.push(Violation::error(D::NonPositiveVoltage {
                id: n.node_id.clone(),
            }));
        }
        check_interval(&n.node_id, n.year_in, n.year_out, &span, &mut out);
    }

    let mut seen = HashSet::new();
    for e in &set.edges {
        if !seen.insert(e.edge_id.as_str()) {
            out.push(Violation::error(D::DuplicateEdgeId {
                edge_id: e.edge_id.clone(),
            }));
        }
        if e.voltage_class_kv == 0 {
            out.push(Violation::error(D::NonPositiveVoltage {
                id: e.edge_id.clone(),
            }));
        }
        if e.circuits == 0 {
            out.push(Violation::error(D::NonPositiveCircuits {
                edge_id: e.edge_id.clone(),
            }));
        }
        if e.node_a == e.node_b {
            out.push(Violation::error(D::SelfLoop {
                edge_id: e.edge_id.clone(),
            }));
        }
        check_interval(&e.edge_id, e.year_in, e.year_out, &span, &mut out);

        let mut endpoints = vec![&e.node_a];
        if e.node_b != e.node_a {
            endpoints.push(&e.node_b);
        }
        for id in endpoints {
            match by_id.get(id.as_str()) {
                None => out.push(Violation::error(D::DanglingEndpoint {
                    edge_id: e.edge_id.clone(),
                    node_id: id.clone(),
                })),
                Some(n) => {
                    let born_in_time = n.year_in <= e.year_in;
                    let survives = match (n.year_out, e.year_out) {
                        (None, _) => true,
                        (Some(_), None) => false,
                        (Some(node_out), Some(edge_out)) => edge_out <= node_out,
                    };
                    if !(born_in_time && survives) {
                        out.push(Violation::error(D::EndpointNotAlive {
                            edge_id: e.edge_id.clone(),
                            node_id: id.clone(),
                        }));
                    }
                }
            }
        }

        let last = e.year_out.unwrap_or(set.dataset_end);
        for ev in &e.events {
            if ev.year < e.year_in || ev.year > last {
                out.push(Violation::warning(D::EventOutsideLife {
                    edge_id: e.edge_id.clone(),
                    year: ev.year,
                }));
            }
        }
        let decommissions: Vec<i32> = e
            .events
            .iter()
            .filter(|ev| ev.kind == ChangeKind::Decommission)
            .map(|ev| ev.year)
            .collect();
        if !decommissions.is_empty() && decommissions.iter().any(|&y| Some(y) != e.year_out) {
            out.push(Violation::warning(D::DecommissionConflict {
                edge_id: e.edge_id.clone(),
            }));
        }
    }

    ValidationReport { violations: out }
}

fn check_interval(
    id: &str,
    year_in: i32,
    year_out: Option<i32>,
    span: &RangeInclusive<i32>,
    out: &mut Vec<Violation>,
) {
    if let Some(year_out) = year_out {
        if year_out < year_in {
            out.push(Violation::error(ViolationDetail::InvertedInterval {
                id: id.to_string(),
                year_in,
                year_out,
            }));
        }
    }
    for year in [Some(year_in), year_out].into_iter().flatten() {
        if !span.contains(&year) {
            out.push(Violation::error(ViolationDetail::OutsideDatasetSpan {
                id: id.to_string(),
                year,
            }));
        }
    }
}

// ---------------------------------------------------------------------------
// Snapshots

/// Graph of everything alive in `year` with voltage class `>= voltage_floor_kv`.
///
/// Alive nodes below the floor are kept when an included edge ends on them.
/// Isolated nodes are retained. Parallel circuits collapse to one edge.
pub fn snapshot_at(
    set: &AssetRecordSet,
    year: i32,
    voltage_floor_kv: u32,
) -> Result<AnnualSnapshot, IngestError> {
    if !set.span().contains(&year) {
        return Err(IngestError::YearOutOfRange {
            year,
            start: set.dataset_start,
            end: set.dataset_end,
        });
    }
    let edges: Vec<&EdgeRecord> = set
        .edges
        .iter()
        .filter(|e| e.alive_at(year) && e.voltage_class_kv >= voltage_floor_kv)
        .filter(|e| e.node_a != e.node_b)
        .collect();
    let endpoints: HashSet<&str> = edges
        .iter()
        .flat_map(|e| [e.node_a.as_str(), e.node_b.as_str()])
        .collect();

    let mut index = HashMap::new();
    let mut node_ids = Vec::new();
    for n in &set.nodes {
        let keep = n.alive_at(year)
            && (n.voltage_class_kv >= voltage_floor_kv || endpoints.contains(n.node_id.as_str()));
        if keep && !index.contains_key(n.node_id.as_str()) {
            index.insert(n.node_id.as_str(), node_ids.len());
            node_ids.push(n.node_id.clone());
        }
    }
    let pairs = edges.iter().filter_map(|e| {
        Some((
            *index.get(e.node_a.as_str())?,
            *index.get(e.node_b.as_str())?,
        ))
    });
    let graph = Graph::from_edges(node_ids.len(), pairs);
    Ok(AnnualSnapshot {
        year,
        voltage_floor_kv,
        node_ids,
        graph,
    })
}

/// One snapshot per year of `years`, ascending.
pub fn build_panel(
    set: &AssetRecordSet,
    years: RangeInclusive<i32>,
    voltage_floor_kv: u32,
) -> Result<Vec<AnnualSnapshot>, IngestError> {
    let (start, end) = (*years.start(), *years.end());
    if start > end {
        return Err(IngestError::EmptyRange { start, end });
    }
    for year in [start, end] {
        if !set.span().contains(&year) {
            return Err(IngestError::YearOutOfRange {
                year,
                start: set.dataset_start,
                end: set.dataset_end,
            });
        }
    }
    years
        .into_par_iter()
        .map(|y| snapshot_at(set, y, voltage_floor_kv))
        .collect()
}
