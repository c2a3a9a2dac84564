//! Loop and star motif census: triangles, 4-cycles, 3-stars and 4-stars.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::ParameterError;
use crate::graph::{AnnualSnapshot, Graph};

/// How a k-star is matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StarVariant {
    /// Any center with k distinct neighbors: `Σ_v C(deg v, k)`.
    #[default]
    Subgraph,
    /// Center plus k pairwise non-adjacent neighbors.
    Induced,
}

impl StarVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            StarVariant::Subgraph => "subgraph",
            StarVariant::Induced => "induced",
        }
    }
}

impl fmt::Display for StarVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StarVariant {
    type Err = ParameterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "subgraph" => Ok(StarVariant::Subgraph),
            "induced" => Ok(StarVariant::Induced),
            _ => Err(ParameterError::new(format!(
                "star variant must be subgraph or induced, got {s:?}"
            ))),
        }
    }
}

/// Number of triangles, by sorted neighbor-list intersection over edges.
pub fn count_triangles(g: &Graph) -> u64 {
    let mut count = 0u64;
    for (u, v) in g.edges() {
        // only third corners above v, so each triangle is seen once
        let (a, b) = (g.neighbors(u), g.neighbors(v));
        let (mut i, mut j) = (
            a.partition_point(|&x| x <= v),
            b.partition_point(|&x| x <= v),
        );
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
    }
    count
}

/// Number of distinct 4-cycles. With `chordless_only`, cycles whose node set
/// carries either diagonal are skipped.
pub fn count_4cycles(g: &Graph, chordless_only: bool) -> u64 {
    let n = g.node_count();
    let mut common: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut touched = Vec::new();
    let mut twice = 0u64;
    for u in 0..n {
        for &v in g.neighbors(u) {
            for &w in g.neighbors(v) {
                if w > u {
                    if common[w].is_empty() {
                        touched.push(w);
                    }
                    common[w].push(v);
                }
            }
        }
        // (u, w) is one diagonal; pairs of common neighbors close a cycle
        for &w in &touched {
            let mids = &common[w];
            if chordless_only {
                if g.has_edge(u, w) {
                    continue;
                }
                for (i, &a) in mids.iter().enumerate() {
                    for &b in &mids[i + 1..] {
                        if !g.has_edge(a, b) {
                            twice += 1;
                        }
                    }
                }
            } else {
                let c = mids.len() as u64;
                twice += c * c.saturating_sub(1) / 2;
            }
        }
        for w in touched.drain(..) {
            common[w].clear();
        }
    }
    // every cycle is seen from both of its diagonals
    twice / 2
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Independent `k`-subsets of `candidates` (sorted), by backtracking.
fn independent_subsets(g: &Graph, candidates: &[usize], k: usize, chosen: &mut Vec<usize>) -> u64 {
    if chosen.len() == k {
        return 1;
    }
    let mut total = 0;
    for (i, &c) in candidates.iter().enumerate() {
        if candidates.len() - i < k - chosen.len() {
            break;
        }
        if chosen.iter().any(|&x| g.has_edge(x, c)) {
            continue;
        }
        chosen.push(c);
        total += independent_subsets(g, &candidates[i + 1..], k, chosen);
        chosen.pop();
    }
    total
}

pub fn count_stars(g: &Graph, leaves: usize, variant: StarVariant) -> Result<u64, ParameterError> {
    if !(3..=4).contains(&leaves) {
        return Err(ParameterError::new(format!(
            "stars must have 3 or 4 leaves, got {leaves}"
        )));
    }
    Ok(match variant {
        StarVariant::Subgraph => g.degrees().map(|d| binomial(d as u64, leaves as u64)).sum(),
        StarVariant::Induced => (0..g.node_count())
            .map(|v| {
                independent_subsets(g, g.neighbors(v), leaves, &mut Vec::with_capacity(leaves))
            })
            .sum(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MotifCounts {
    pub year: i32,
    pub triangles: u64,
    pub four_cycles: u64,
    pub three_stars: u64,
    pub four_stars: u64,
    pub variant: StarVariant,
    pub chordless_only: bool,
}

impl MotifCounts {
    pub fn total(&self) -> u64 {
        self.triangles + self.four_cycles + self.three_stars + self.four_stars
    }
}

pub fn motif_counts(
    g: &Graph,
    year: i32,
    chordless_only: bool,
    variant: StarVariant,
) -> MotifCounts {
    MotifCounts {
        year,
        triangles: count_triangles(g),
        four_cycles: count_4cycles(g, chordless_only),
        three_stars: count_stars(g, 3, variant).expect("3 leaves"),
        four_stars: count_stars(g, 4, variant).expect("4 leaves"),
        variant,
        chordless_only,
    }
}

/// Share of each motif class in the total of the four classes for one year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotifShares {
    pub counts: MotifCounts,
    pub triangles: f64,
    pub four_cycles: f64,
    pub three_stars: f64,
    pub four_stars: f64,
    pub total: u64,
}

impl MotifShares {
    pub fn from_counts(counts: MotifCounts) -> Self {
        let total = counts.total();
        let share = |c: u64| {
            if total == 0 {
                0.0
            } else {
                c as f64 / total as f64
            }
        };
        Self {
            counts,
            triangles: share(counts.triangles),
            four_cycles: share(counts.four_cycles),
            three_stars: share(counts.three_stars),
            four_stars: share(counts.four_stars),
            total,
        }
    }

    /// Years without any counted motif have all shares zero.
    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn year(&self) -> i32 {
        self.counts.year
    }

    /// `(motif, count, share)` in fixed order.
    pub fn entries(&self) -> [(&'static str, u64, f64); 4] {
        [
            ("c3", self.counts.triangles, self.triangles),
            ("c4", self.counts.four_cycles, self.four_cycles),
            ("s3", self.counts.three_stars, self.three_stars),
            ("s4", self.counts.four_stars, self.four_stars),
        ]
    }
}

pub fn motif_share_series(
    snapshots: &[AnnualSnapshot],
    chordless_only: bool,
    variant: StarVariant,
) -> Vec<MotifShares> {
    snapshots
        .par_iter()
        .map(|s| MotifShares::from_counts(motif_counts(&s.graph, s.year, chordless_only, variant)))
        .collect()
}
