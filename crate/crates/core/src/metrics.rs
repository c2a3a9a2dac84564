//! Per-snapshot structural metrics: density, degree, path statistics,
//! clustering, efficiency, and the two small-world coefficients.
//!
//! Path-based metrics treat disconnected graphs explicitly: the average path
//! length and diameter range over reachable ordered pairs only, while global
//! efficiency lets unreachable pairs contribute zero.

use std::collections::VecDeque;

use rayon::prelude::*;
use thiserror::Error;

use crate::baselines::ring_lattice_saturating;
use crate::community::modularity_detect;
use crate::graph::{AnnualSnapshot, Graph};

/// Euler–Mascheroni constant truncated to four digits, as used by the random
/// path-length baseline.
pub const EULER_GAMMA_4: f64 = 0.5772;

/// Default half-width of the small-world band for omega.
pub const DEFAULT_OMEGA_BAND: f64 = 0.7;

/// Why a metric has no value for a given graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum UndefinedMetric {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("graph has fewer nodes than the metric requires")]
    TooFewNodes,
    #[error("graph has no edges")]
    NoEdges,
    #[error("no pair of distinct nodes is connected")]
    NoReachablePair,
    #[error("average degree must exceed 1 for the random baseline")]
    DegreeTooLow,
    #[error("random-graph clustering baseline is zero")]
    ZeroRandomClustering,
    #[error("lattice clustering is zero while the graph clusters")]
    ZeroLatticeClustering,
}

impl UndefinedMetric {
    /// Stable reason code used in tabular output.
    pub fn code(self) -> &'static str {
        match self {
            UndefinedMetric::EmptyGraph => "empty_graph",
            UndefinedMetric::TooFewNodes => "too_few_nodes",
            UndefinedMetric::NoEdges => "no_edges",
            UndefinedMetric::NoReachablePair => "no_reachable_pair",
            UndefinedMetric::DegreeTooLow => "degree_too_low",
            UndefinedMetric::ZeroRandomClustering => "zero_random_clustering",
            UndefinedMetric::ZeroLatticeClustering => "zero_lattice_clustering",
        }
    }
}

pub type MetricValue = Result<f64, UndefinedMetric>;

pub fn link_density(g: &Graph) -> MetricValue {
    let n = g.node_count();
    if n < 2 {
        return Err(UndefinedMetric::TooFewNodes);
    }
    Ok(2.0 * g.edge_count() as f64 / (n as f64 * (n - 1) as f64))
}

pub fn average_degree(g: &Graph) -> MetricValue {
    let n = g.node_count();
    if n == 0 {
        return Err(UndefinedMetric::EmptyGraph);
    }
    Ok(2.0 * g.edge_count() as f64 / n as f64)
}

/// Shortest-path statistics from one breadth-first sweep per source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApspSummary {
    /// Mean hop distance over reachable ordered pairs.
    pub avg_path_length: Option<f64>,
    /// Largest finite hop distance.
    pub diameter: Option<u32>,
    /// Mean inverse distance over all ordered pairs, unreachable pairs counting 0.
    pub efficiency: f64,
    pub reachable_pair_fraction: f64,
}

impl ApspSummary {
    pub fn path_length(&self) -> MetricValue {
        self.avg_path_length.ok_or(UndefinedMetric::NoReachablePair)
    }

    pub fn diameter(&self) -> Result<u32, UndefinedMetric> {
        self.diameter.ok_or(UndefinedMetric::NoReachablePair)
    }
}

/// Per-source distance histogram: `levels[d]` nodes at distance `d`.
fn bfs_levels(g: &Graph, source: usize, dist: &mut [u32], queue: &mut VecDeque<usize>) -> Vec<u64> {
    dist.fill(u32::MAX);
    queue.clear();
    dist[source] = 0;
    queue.push_back(source);
    let mut levels = vec![0u64];
    while let Some(u) = queue.pop_front() {
        let next = dist[u] + 1;
        for &v in g.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = next;
                if levels.len() <= next as usize {
                    levels.push(0);
                }
                levels[next as usize] += 1;
                queue.push_back(v);
            }
        }
    }
    levels
}

pub fn apsp_summary(g: &Graph) -> Result<ApspSummary, UndefinedMetric> {
    let n = g.node_count();
    if n < 2 {
        return Err(UndefinedMetric::TooFewNodes);
    }
    // Histograms are merged in source order so the floating-point sum does
    // not depend on thread scheduling.
    let per_source: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], VecDeque::new()),
            |(dist, queue), s| bfs_levels(g, s, dist, queue),
        )
        .collect();
    let mut histogram: Vec<u64> = Vec::new();
    for levels in &per_source {
        if histogram.len() < levels.len() {
            histogram.resize(levels.len(), 0);
        }
        for (d, &count) in levels.iter().enumerate().skip(1) {
            histogram[d] += count;
        }
    }
    let pairs: u64 = histogram.iter().skip(1).sum();
    let distance_sum: u64 = histogram
        .iter()
        .enumerate()
        .map(|(d, &c)| d as u64 * c)
        .sum();
    let inverse_sum: f64 = histogram
        .iter()
        .enumerate()
        .skip(1)
        .map(|(d, &c)| c as f64 / d as f64)
        .sum();
    let ordered = n as f64 * (n - 1) as f64;
    let diameter = histogram
        .iter()
        .rposition(|&c| c > 0)
        .filter(|&d| d > 0)
        .map(|d| d as u32);
    Ok(ApspSummary {
        avg_path_length: (pairs > 0).then(|| distance_sum as f64 / pairs as f64),
        diameter,
        efficiency: inverse_sum / ordered,
        reachable_pair_fraction: pairs as f64 / ordered,
    })
}

/// How nodes with fewer than two neighbors enter the clustering average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LowDegreeConvention {
    /// They contribute zero and still count in the denominator.
    #[default]
    Zero,
    /// They are left out of the average altogether.
    Exclude,
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Number of edges among the neighbors of each node.
pub fn neighbor_edge_counts(g: &Graph) -> Vec<usize> {
    (0..g.node_count())
        .map(|v| {
            let nv = g.neighbors(v);
            nv.iter()
                .map(|&u| sorted_intersection_len(nv, g.neighbors(u)))
                .sum::<usize>()
                / 2
        })
        .collect()
}

pub fn clustering_coefficient(g: &Graph) -> MetricValue {
    clustering_coefficient_with(g, LowDegreeConvention::Zero)
}

pub fn clustering_coefficient_with(g: &Graph, convention: LowDegreeConvention) -> MetricValue {
    if g.node_count() == 0 {
        return Err(UndefinedMetric::EmptyGraph);
    }
    let mut sum = 0.0;
    let mut counted = 0usize;
    for (v, links) in neighbor_edge_counts(g).into_iter().enumerate() {
        let k = g.degree(v);
        if k < 2 {
            if convention == LowDegreeConvention::Zero {
                counted += 1;
            }
            continue;
        }
        sum += 2.0 * links as f64 / (k as f64 * (k - 1) as f64);
        counted += 1;
    }
    if counted == 0 {
        return Err(UndefinedMetric::TooFewNodes);
    }
    Ok(sum / counted as f64)
}

/// Analytic clustering and path length of a random graph with matching N and ⟨k⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomBaselines {
    pub clustering: f64,
    pub path_length: f64,
}

pub fn random_baselines(n: usize, avg_degree: f64) -> Result<RandomBaselines, UndefinedMetric> {
    if n < 2 {
        return Err(UndefinedMetric::TooFewNodes);
    }
    if avg_degree.is_nan() || avg_degree <= 1.0 {
        return Err(UndefinedMetric::DegreeTooLow);
    }
    let n = n as f64;
    Ok(RandomBaselines {
        clustering: avg_degree / n,
        path_length: (n.ln() - EULER_GAMMA_4) / avg_degree.ln() + 0.5,
    })
}

/// Even ring-lattice coordination matched to an average degree, at least 2.
pub fn lattice_coordination(avg_degree: f64) -> usize {
    let m = 2.0 * (avg_degree / 2.0).round();
    if m.is_nan() || m < 2.0 {
        2
    } else {
        m as usize
    }
}

/// Average clustering of the ring lattice on `n` nodes whose coordination
/// matches `avg_degree`. The lattice is built explicitly; coordinations that
/// reach `n - 1` saturate to the complete graph.
pub fn lattice_clustering(n: usize, avg_degree: f64) -> MetricValue {
    if n < 3 {
        return Err(UndefinedMetric::TooFewNodes);
    }
    let lattice = ring_lattice_saturating(n, lattice_coordination(avg_degree));
    clustering_coefficient(&lattice)
}

pub fn sigma_from(clustering: f64, path_length: f64, random: RandomBaselines) -> MetricValue {
    if random.clustering == 0.0 {
        return Err(UndefinedMetric::ZeroRandomClustering);
    }
    if path_length <= 0.0 {
        return Err(UndefinedMetric::NoReachablePair);
    }
    Ok((clustering / random.clustering) / (path_length / random.path_length))
}

/// Small-world sigma of a graph; `sigma > 1` classifies as small-world.
pub fn small_world_sigma(g: &Graph) -> MetricValue {
    let path_length = apsp_summary(g)?.path_length()?;
    let random = random_baselines(g.node_count(), average_degree(g)?)?;
    sigma_from(clustering_coefficient(g)?, path_length, random)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Omega {
    /// Clamped to `[-1, 1]`.
    pub value: f64,
    pub raw: f64,
}

pub fn omega_from(
    clustering: f64,
    path_length: f64,
    random_path_length: f64,
    lattice_clustering: f64,
) -> Result<Omega, UndefinedMetric> {
    if path_length <= 0.0 {
        return Err(UndefinedMetric::NoReachablePair);
    }
    let clustering_term = if lattice_clustering == 0.0 {
        if clustering > 0.0 {
            return Err(UndefinedMetric::ZeroLatticeClustering);
        }
        0.0
    } else {
        clustering / lattice_clustering
    };
    let raw = random_path_length / path_length - clustering_term;
    Ok(Omega {
        value: raw.clamp(-1.0, 1.0),
        raw,
    })
}

pub fn small_world_omega(g: &Graph) -> Result<Omega, UndefinedMetric> {
    let path_length = apsp_summary(g)?.path_length()?;
    let k = average_degree(g)?;
    let random = random_baselines(g.node_count(), k)?;
    let lattice = lattice_clustering(g.node_count(), k)?;
    omega_from(
        clustering_coefficient(g)?,
        path_length,
        random.path_length,
        lattice,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaClass {
    LatticeLike,
    SmallWorld,
    RandomLike,
}

/// Bands omega with half-width `band`: `|omega| < band` is small-world compatible.
pub fn classify_omega(omega: f64, band: f64) -> OmegaClass {
    if omega >= band {
        OmegaClass::RandomLike
    } else if omega <= -band {
        OmegaClass::LatticeLike
    } else {
        OmegaClass::SmallWorld
    }
}

/// Metric vector for one snapshot. Undefined entries carry their reason.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub year: i32,
    pub nodes: usize,
    pub edges: usize,
    pub density: MetricValue,
    pub avg_degree: MetricValue,
    pub avg_path_length: MetricValue,
    pub diameter: MetricValue,
    pub clustering: MetricValue,
    pub modularity: MetricValue,
    pub efficiency: MetricValue,
    pub random_clustering: MetricValue,
    pub random_path_length: MetricValue,
    pub lattice_clustering: MetricValue,
    pub sigma: MetricValue,
    pub omega: MetricValue,
    pub omega_raw: MetricValue,
    pub reachable_pair_fraction: MetricValue,
}

impl MetricRow {
    /// Metric names in output order.
    pub const NAMES: [&'static str; 17] = [
        "N",
        "E",
        "D",
        "k_avg",
        "L",
        "d",
        "C",
        "Q",
        "eta",
        "C_r",
        "L_r",
        "C_lattice",
        "sigma",
        "omega",
        "omega_raw",
        "reachable_pair_fraction",
        "small_world_sigma",
    ];

    /// `(name, value)` pairs in [`MetricRow::NAMES`] order. `small_world_sigma`
    /// is 1 when sigma exceeds 1 and 0 otherwise.
    pub fn values(&self) -> [(&'static str, MetricValue); 17] {
        let flag = self.sigma.map(|s| if s > 1.0 { 1.0 } else { 0.0 });
        let v = [
            Ok(self.nodes as f64),
            Ok(self.edges as f64),
            self.density,
            self.avg_degree,
            self.avg_path_length,
            self.diameter,
            self.clustering,
            self.modularity,
            self.efficiency,
            self.random_clustering,
            self.random_path_length,
            self.lattice_clustering,
            self.sigma,
            self.omega,
            self.omega_raw,
            self.reachable_pair_fraction,
            flag,
        ];
        std::array::from_fn(|i| (Self::NAMES[i], v[i]))
    }
}

pub fn metric_row(snapshot: &AnnualSnapshot, gamma: f64, seed: u64) -> MetricRow {
    let g = &snapshot.graph;
    let n = g.node_count();
    let apsp = apsp_summary(g);
    let path_length = apsp.and_then(|a| a.path_length());
    let avg_degree = average_degree(g);
    let clustering = clustering_coefficient(g);
    let random = avg_degree.and_then(|k| random_baselines(n, k));
    let lattice = avg_degree.and_then(|k| lattice_clustering(n, k));
    let sigma = clustering
        .and_then(|c| Ok((c, path_length?, random?)))
        .and_then(|(c, l, r)| sigma_from(c, l, r));
    let omega = clustering
        .and_then(|c| Ok((c, path_length?, random?, lattice?)))
        .and_then(|(c, l, r, lat)| omega_from(c, l, r.path_length, lat));
    MetricRow {
        year: snapshot.year,
        nodes: n,
        edges: g.edge_count(),
        density: link_density(g),
        avg_degree,
        avg_path_length: path_length,
        diameter: apsp.and_then(|a| a.diameter()).map(f64::from),
        clustering,
        modularity: modularity_detect(g, gamma, seed).map(|p| p.modularity),
        efficiency: apsp.map(|a| a.efficiency),
        random_clustering: random.map(|r| r.clustering),
        random_path_length: random.map(|r| r.path_length),
        lattice_clustering: lattice,
        sigma,
        omega: omega.map(|o| o.value),
        omega_raw: omega.map(|o| o.raw),
        reachable_pair_fraction: apsp.map(|a| a.reachable_pair_fraction),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricPanel {
    pub gamma: f64,
    pub seed: u64,
    pub rows: Vec<MetricRow>,
}

/// One row per snapshot, in input order.
pub fn metric_panel(snapshots: &[AnnualSnapshot], gamma: f64, seed: u64) -> MetricPanel {
    let rows = snapshots
        .par_iter()
        .map(|s| metric_row(s, gamma, seed))
        .collect();
    MetricPanel { gamma, seed, rows }
}
