//! Modularity evaluation and seeded multi-level greedy community detection.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::metrics::UndefinedMetric;

/// Smallest modularity gain (in units of edge weight) accepted as a move.
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityPartition {
    /// Community label of each node; labels are `0..k` in order of first appearance.
    pub assignment: Vec<usize>,
    pub gamma: f64,
    pub modularity: f64,
    pub seed: u64,
}

impl CommunityPartition {
    pub fn community_count(&self) -> usize {
        self.assignment.iter().max().map_or(0, |&m| m + 1)
    }
}

/// `Q = (1/2E) Σ_ij (A_ij − γ k_i k_j / 2E) δ(c_i, c_j)`.
///
/// Panics if `assignment.len()` differs from the node count.
pub fn modularity_of(g: &Graph, assignment: &[usize], gamma: f64) -> Result<f64, UndefinedMetric> {
    assert_eq!(
        assignment.len(),
        g.node_count(),
        "assignment must label every node"
    );
    if g.edge_count() == 0 {
        return Err(UndefinedMetric::NoEdges);
    }
    let two_m = 2.0 * g.edge_count() as f64;
    // label -> (ordered intra-community adjacency count, degree total)
    let mut per_label: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    for v in 0..g.node_count() {
        let entry = per_label.entry(assignment[v]).or_default();
        entry.1 += g.degree(v) as u64;
        entry.0 += g
            .neighbors(v)
            .iter()
            .filter(|&&u| assignment[u] == assignment[v])
            .count() as u64;
    }
    Ok(per_label
        .values()
        .map(|&(internal, total)| {
            let share = total as f64 / two_m;
            internal as f64 / two_m - gamma * share * share
        })
        .sum())
}

/// Weighted graph used at each aggregation level.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    /// Total weight of internal (self-loop) edges per node.
    internal: Vec<f64>,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        Self {
            adj: (0..g.node_count())
                .map(|v| g.neighbors(v).iter().map(|&u| (u, 1.0)).collect())
                .collect(),
            internal: vec![0.0; g.node_count()],
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn strength(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.internal[v]
    }

    /// Greedy local moving. Returns the community of every node and whether
    /// any node changed community.
    fn local_moves(&self, gamma: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let strength: Vec<f64> = (0..n).map(|v| self.strength(v)).collect();
        let two_m: f64 = strength.iter().sum();
        let mut community: Vec<usize> = (0..n).collect();
        let mut totals = strength.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut moved = false;
        loop {
            let mut improved = false;
            for &v in &order {
                let current = community[v];
                let mut links: BTreeMap<usize, f64> = BTreeMap::new();
                for &(u, w) in &self.adj[v] {
                    *links.entry(community[u]).or_insert(0.0) += w;
                }
                totals[current] -= strength[v];
                let gain = |c: usize, w: f64| w - gamma * totals[c] * strength[v] / two_m;
                let mut best = current;
                let mut best_gain = gain(current, links.get(&current).copied().unwrap_or(0.0));
                // ascending label order: the lowest label wins ties
                for (&c, &w) in &links {
                    let g = gain(c, w);
                    if g > best_gain + MIN_GAIN {
                        best = c;
                        best_gain = g;
                    }
                }
                totals[best] += strength[v];
                if best != current {
                    community[v] = best;
                    improved = true;
                    moved = true;
                }
            }
            if !improved {
                break;
            }
        }
        (community, moved)
    }

    /// Collapses each community to a node. `labels` must be compact `0..k`.
    fn aggregate(&self, labels: &[usize], k: usize) -> Level {
        let mut adj: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); k];
        let mut internal = vec![0.0; k];
        for v in 0..self.len() {
            let cv = labels[v];
            internal[cv] += self.internal[v];
            for &(u, w) in &self.adj[v] {
                let cu = labels[u];
                if cu == cv {
                    // each internal edge is seen from both ends
                    internal[cv] += w / 2.0;
                } else {
                    *adj[cv].entry(cu).or_insert(0.0) += w;
                }
            }
        }
        Level {
            adj: adj.into_iter().map(|m| m.into_iter().collect()).collect(),
            internal,
        }
    }
}

/// Relabels to `0..k` in order of first appearance.
fn compact(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = BTreeMap::new();
    let mut out = Vec::with_capacity(labels.len());
    for &l in labels {
        let next = map.len();
        out.push(*map.entry(l).or_insert(next));
    }
    (out, map.len())
}

/// Multi-level greedy modularity maximization (local moves, then aggregation,
/// repeated until no node moves). The visiting order at every level is a
/// shuffle seeded by `seed`; ties between candidate communities go to the
/// lowest label, and a node only leaves its community for a strict gain.
///
/// The returned modularity is achieved, not necessarily optimal.
pub fn modularity_detect(
    g: &Graph,
    gamma: f64,
    seed: u64,
) -> Result<CommunityPartition, UndefinedMetric> {
    if g.edge_count() == 0 {
        return Err(UndefinedMetric::NoEdges);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut membership: Vec<usize> = (0..g.node_count()).collect();
    let mut level = Level::from_graph(g);
    loop {
        let (community, moved) = level.local_moves(gamma, &mut rng);
        if !moved {
            break;
        }
        let (labels, k) = compact(&community);
        for m in &mut membership {
            *m = labels[*m];
        }
        level = level.aggregate(&labels, k);
    }
    let (assignment, _) = compact(&membership);
    let modularity = modularity_of(g, &assignment, gamma)?;
    Ok(CommunityPartition {
        assignment,
        gamma,
        modularity,
        seed,
    })
}
