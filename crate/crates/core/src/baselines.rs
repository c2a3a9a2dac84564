//! Seeded reference graph families (Erdős–Rényi, Watts–Strogatz, ring lattice)
//! and replicate ensembles of their metrics.

use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::ParameterError;
use crate::graph::Graph;
use crate::metrics::{
    apsp_summary, average_degree, clustering_coefficient, random_baselines, sigma_from, MetricValue,
};

pub const DEFAULT_REWIRING: f64 = 0.1;

fn check_lattice(n: usize, m: usize) -> Result<(), ParameterError> {
    if !m.is_multiple_of(2) || m < 2 || m >= n {
        return Err(ParameterError::new(format!(
            "ring lattice needs even coordination 2 <= m < N, got N={n}, m={m}"
        )));
    }
    Ok(())
}

/// Ring lattice edges: node `i` links to `i ± 1 ..= i ± m/2` (mod `n`).
/// Coordinations of `n - 1` or more yield the complete graph.
pub(crate) fn ring_lattice_saturating(n: usize, m: usize) -> Graph {
    let half = (m / 2).min(n / 2);
    Graph::from_edges(
        n,
        (0..n).flat_map(|i| (1..=half).map(move |j| (i, (i + j) % n))),
    )
}

pub fn gen_ring_lattice(n: usize, m: usize) -> Result<Graph, ParameterError> {
    check_lattice(n, m)?;
    Ok(ring_lattice_saturating(n, m))
}

/// Uniform sample of `e` distinct node pairs.
pub fn gen_erdos_renyi(n: usize, e: usize, seed: u64) -> Result<Graph, ParameterError> {
    erdos_renyi_with(n, e, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn erdos_renyi_with<R: Rng>(n: usize, e: usize, rng: &mut R) -> Result<Graph, ParameterError> {
    let pairs = n * n.saturating_sub(1) / 2;
    if e > pairs {
        return Err(ParameterError::new(format!(
            "cannot place {e} edges on {n} nodes (at most {pairs})"
        )));
    }
    let mut chosen = index::sample(rng, pairs, e).into_vec();
    chosen.sort_unstable();
    Ok(Graph::from_edges(
        n,
        chosen.into_iter().map(|k| pair_at(n, k)),
    ))
}

/// Inverse of the row-major enumeration of pairs `(a, b)`, `a < b`.
fn pair_at(n: usize, mut k: usize) -> (usize, usize) {
    let mut a = 0;
    let mut row = n - 1;
    while k >= row {
        k -= row;
        a += 1;
        row -= 1;
    }
    (a, a + 1 + k)
}

/// Ring lattice with each edge's far endpoint rewired with probability `p`
/// to a uniformly chosen node that is neither the near endpoint nor already
/// adjacent to it.
pub fn gen_watts_strogatz(n: usize, m: usize, p: f64, seed: u64) -> Result<Graph, ParameterError> {
    watts_strogatz_with(n, m, p, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn watts_strogatz_with<R: Rng>(
    n: usize,
    m: usize,
    p: f64,
    rng: &mut R,
) -> Result<Graph, ParameterError> {
    check_lattice(n, m)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(ParameterError::new(format!(
            "rewiring probability must lie in [0, 1], got {p}"
        )));
    }
    let mut adj: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); n];
    for i in 0..n {
        for j in 1..=m / 2 {
            let k = (i + j) % n;
            adj[i].insert(k);
            adj[k].insert(i);
        }
    }
    for j in 1..=m / 2 {
        for u in 0..n {
            let v = (u + j) % n;
            if !adj[u].contains(&v) || rng.gen::<f64>() >= p {
                continue;
            }
            if adj[u].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != u && !adj[u].contains(&w) {
                    break w;
                }
            };
            adj[u].remove(&v);
            adj[v].remove(&u);
            adj[u].insert(w);
            adj[w].insert(u);
        }
    }
    let edges = adj.iter().enumerate().flat_map(|(u, s)| {
        s.iter()
            .copied()
            .filter(move |&v| v > u)
            .map(move |v| (u, v))
    });
    Ok(Graph::from_edges(n, edges))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    ErdosRenyi,
    WattsStrogatz,
    RingLattice,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::ErdosRenyi => "erdos_renyi",
            Family::WattsStrogatz => "watts_strogatz",
            Family::RingLattice => "ring_lattice",
        }
    }

    fn stream(self) -> u64 {
        match self {
            Family::ErdosRenyi => 1,
            Family::WattsStrogatz => 2,
            Family::RingLattice => 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineSpec {
    pub family: Family,
    pub nodes: usize,
    /// Edge count for Erdős–Rényi graphs.
    pub edges: usize,
    /// Even coordination for lattice-based families.
    pub coordination: usize,
    pub rewiring: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl BaselineSpec {
    /// Edge count every replicate of this spec has.
    pub fn generated_edges(&self) -> usize {
        match self.family {
            Family::ErdosRenyi => self.edges,
            Family::WattsStrogatz | Family::RingLattice => self.nodes * self.coordination / 2,
        }
    }

    /// Independent generator for one replicate, derived from `(seed, family, replicate)`.
    fn rng(&self, replicate: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((self.family.stream() << 32) | replicate as u64);
        rng
    }

    pub fn generate(&self, replicate: usize) -> Result<Graph, ParameterError> {
        let mut rng = self.rng(replicate);
        match self.family {
            Family::ErdosRenyi => erdos_renyi_with(self.nodes, self.edges, &mut rng),
            Family::WattsStrogatz => {
                watts_strogatz_with(self.nodes, self.coordination, self.rewiring, &mut rng)
            }
            Family::RingLattice => gen_ring_lattice(self.nodes, self.coordination),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplicateMetrics {
    pub replicate: usize,
    pub edges: usize,
    pub efficiency: f64,
    pub clustering: MetricValue,
    pub path_length: MetricValue,
    pub sigma: MetricValue,
}

impl ReplicateMetrics {
    pub fn measure(replicate: usize, g: &Graph) -> Self {
        let apsp = apsp_summary(g);
        let clustering = clustering_coefficient(g);
        let path_length = apsp.and_then(|a| a.path_length());
        let sigma = (|| {
            let random = random_baselines(g.node_count(), average_degree(g)?)?;
            sigma_from(clustering?, path_length?, random)
        })();
        Self {
            replicate,
            edges: g.edge_count(),
            efficiency: apsp.map_or(0.0, |a| a.efficiency),
            clustering,
            path_length,
            sigma,
        }
    }

    pub const NAMES: [&'static str; 4] = ["eta", "C", "L", "sigma"];

    pub fn values(&self) -> [(&'static str, MetricValue); 4] {
        [
            ("eta", Ok(self.efficiency)),
            ("C", self.clustering),
            ("L", self.path_length),
            ("sigma", self.sigma),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std_dev: f64,
    pub defined: usize,
}

impl Summary {
    /// `None` when no value is defined. Deviations are taken from the first
    /// value, so identical inputs give exactly zero spread.
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Summary> {
        let values: Vec<f64> = values.into_iter().collect();
        let first = *values.first()?;
        let n = values.len() as f64;
        let shift: f64 = values.iter().map(|x| x - first).sum::<f64>() / n;
        let mean = first + shift;
        let ss: f64 = values.iter().map(|x| (x - first - shift).powi(2)).sum();
        let std_dev = if values.len() > 1 {
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Some(Summary {
            mean,
            std_dev,
            defined: values.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineEnsemble {
    pub spec: BaselineSpec,
    pub replicates: Vec<ReplicateMetrics>,
}

impl BaselineEnsemble {
    pub fn run(spec: BaselineSpec) -> Result<Self, ParameterError> {
        if spec.replicates == 0 {
            return Err(ParameterError::new("at least one replicate is required"));
        }
        let replicates = (0..spec.replicates)
            .into_par_iter()
            .map(|r| spec.generate(r).map(|g| ReplicateMetrics::measure(r, &g)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { spec, replicates })
    }

    pub fn summary(&self, metric: &str) -> Option<Summary> {
        Summary::of(self.replicates.iter().filter_map(|r| {
            r.values()
                .into_iter()
                .find(|(name, _)| *name == metric)
                .and_then(|(_, v)| v.ok())
        }))
    }

    pub fn mean_efficiency(&self) -> f64 {
        self.summary("eta").map_or(0.0, |s| s.mean)
    }
}

/// Random, small-world and ring-lattice ensembles matched to an empirical
/// `(N, E)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyComparison {
    pub nodes: usize,
    pub target_edges: usize,
    pub coordination: usize,
    /// Lattice-family edge count minus the target edge count.
    pub edge_discrepancy: i64,
    pub random: BaselineEnsemble,
    pub small_world: BaselineEnsemble,
    pub ring_lattice: BaselineEnsemble,
}

impl EfficiencyComparison {
    /// `mean η(random) > mean η(small-world) > mean η(ring lattice)`.
    pub fn ordering_holds(&self) -> bool {
        let (r, s, l) = (
            self.random.mean_efficiency(),
            self.small_world.mean_efficiency(),
            self.ring_lattice.mean_efficiency(),
        );
        r > s && s > l
    }

    pub fn ensembles(&self) -> [&BaselineEnsemble; 3] {
        [&self.random, &self.small_world, &self.ring_lattice]
    }
}

pub fn efficiency_comparison(
    nodes: usize,
    edges: usize,
    replicates: usize,
    seed: u64,
) -> Result<EfficiencyComparison, ParameterError> {
    efficiency_comparison_with(nodes, edges, replicates, seed, DEFAULT_REWIRING)
}

/// Even coordination `m >= 2` whose lattice edge count `N·m/2` is closest to
/// `edges`. When two coordinations are equally close the smaller one wins, so
/// lattice references never exceed the edge budget on a tie.
pub fn reference_coordination(nodes: usize, edges: usize) -> usize {
    if nodes == 0 {
        return 2;
    }
    let lower = (2 * edges / nodes) & !1;
    let gap = |m: usize| (nodes * m / 2).abs_diff(edges);
    if lower < 2 {
        2
    } else if gap(lower + 2) < gap(lower) {
        lower + 2
    } else {
        lower
    }
}

/// Lattice-based families use [`reference_coordination`]; their edge count
/// is `N·m/2` and the gap to `E` is reported, not patched.
pub fn efficiency_comparison_with(
    nodes: usize,
    edges: usize,
    replicates: usize,
    seed: u64,
    rewiring: f64,
) -> Result<EfficiencyComparison, ParameterError> {
    if nodes < 3 {
        return Err(ParameterError::new(format!(
            "reference graphs need at least 3 nodes, got {nodes}"
        )));
    }
    let coordination = reference_coordination(nodes, edges);
    if coordination >= nodes {
        return Err(ParameterError::new(format!(
            "{edges} edges on {nodes} nodes map to lattice coordination {coordination}, \
             which needs more than {nodes} nodes"
        )));
    }
    let spec = |family| BaselineSpec {
        family,
        nodes,
        edges,
        coordination,
        rewiring,
        replicates,
        seed,
    };
    let random = BaselineEnsemble::run(spec(Family::ErdosRenyi))?;
    let small_world = BaselineEnsemble::run(spec(Family::WattsStrogatz))?;
    let ring_lattice = BaselineEnsemble::run(spec(Family::RingLattice))?;
    Ok(EfficiencyComparison {
        nodes,
        target_edges: edges,
        coordination,
        edge_discrepancy: (nodes * coordination / 2) as i64 - edges as i64,
        random,
        small_world,
        ring_lattice,
    })
}
