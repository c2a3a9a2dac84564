//! Brute-force reference implementations used to check the fast paths.
//!
//! Everything here works from a dense adjacency matrix and shares no code
//! with the library beyond the `Graph` accessors used to read it.

#![allow(dead_code, clippy::needless_range_loop)]

use gridevo::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn matrix(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for u in 0..n {
        for &v in g.neighbors(u) {
            a[u][v] = true;
        }
    }
    a
}

/// G(n, p) graph drawn edge by edge from its own generator.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Random graph with random size in `lo..=hi` and random density.
pub fn random_case(lo: usize, hi: usize, seed: u64) -> Graph {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = rng.gen_range(lo..=hi);
    let p = rng.gen_range(0.02..0.6);
    random_graph(n, p, seed)
}

/// All-pairs hop distances; `None` for unreachable pairs.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<u32>>> {
    let n = g.node_count();
    let a = matrix(g);
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if a[i][j] {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| x + y < c) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

#[derive(Debug, Clone, Copy)]
pub struct PathOracle {
    pub avg_path_length: Option<f64>,
    pub diameter: Option<u32>,
    pub efficiency: f64,
}

pub fn path_oracle(g: &Graph) -> PathOracle {
    let n = g.node_count();
    let d = floyd_warshall(g);
    let (mut sum, mut count, mut max, mut inv) = (0.0, 0usize, None::<u32>, 0.0);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if let Some(x) = d[i][j] {
                sum += x as f64;
                count += 1;
                max = Some(max.map_or(x, |m| m.max(x)));
                inv += 1.0 / x as f64;
            }
        }
    }
    PathOracle {
        avg_path_length: (count > 0).then(|| sum / count as f64),
        diameter: max,
        efficiency: inv / (n as f64 * (n as f64 - 1.0)),
    }
}

/// Average clustering by enumerating neighbor pairs of every node.
pub fn clustering_oracle(g: &Graph) -> f64 {
    let n = g.node_count();
    let a = matrix(g);
    let mut total = 0.0;
    for i in 0..n {
        let nb: Vec<usize> = (0..n).filter(|&j| a[i][j]).collect();
        let k = nb.len();
        if k < 2 {
            continue;
        }
        let mut links = 0;
        for x in 0..k {
            for y in x + 1..k {
                if a[nb[x]][nb[y]] {
                    links += 1;
                }
            }
        }
        total += 2.0 * links as f64 / (k * (k - 1)) as f64;
    }
    total / n as f64
}

pub fn degree_sum(g: &Graph) -> usize {
    matrix(g)
        .iter()
        .map(|row| row.iter().filter(|&&x| x).count())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MotifOracle {
    pub triangles: u64,
    pub four_cycles_chordless: u64,
    pub four_cycles_any: u64,
    pub three_stars_subgraph: u64,
    pub three_stars_induced: u64,
    pub four_stars_subgraph: u64,
    pub four_stars_induced: u64,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive subset enumeration of all seven motif counts.
pub fn motif_oracle(g: &Graph) -> MotifOracle {
    let n = g.node_count();
    let a = matrix(g);
    let mut o = MotifOracle {
        triangles: 0,
        four_cycles_chordless: 0,
        four_cycles_any: 0,
        three_stars_subgraph: 0,
        three_stars_induced: 0,
        four_stars_subgraph: 0,
        four_stars_induced: 0,
    };
    for t in subsets(n, 3) {
        if a[t[0]][t[1]] && a[t[1]][t[2]] && a[t[0]][t[2]] {
            o.triangles += 1;
        }
    }
    for q in subsets(n, 4) {
        let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
        // the three Hamiltonian cycles on four labelled nodes, with their diagonals
        let cycles = [
            ([w, x, y, z], [(w, y), (x, z)]),
            ([w, x, z, y], [(w, z), (x, y)]),
            ([w, y, x, z], [(w, x), (y, z)]),
        ];
        for (c, diagonals) in cycles {
            let closed = (0..4).all(|i| a[c[i]][c[(i + 1) % 4]]);
            if closed {
                o.four_cycles_any += 1;
                if diagonals.iter().all(|&(p, r)| !a[p][r]) {
                    o.four_cycles_chordless += 1;
                }
            }
        }
    }
    for center in 0..n {
        let others: Vec<usize> = (0..n).filter(|&v| v != center).collect();
        for (k, sub, ind) in [
            (3, &mut o.three_stars_subgraph, &mut o.three_stars_induced),
            (4, &mut o.four_stars_subgraph, &mut o.four_stars_induced),
        ] {
            for leaves in subsets(others.len(), k) {
                let leaves: Vec<usize> = leaves.iter().map(|&i| others[i]).collect();
                if leaves.iter().all(|&l| a[center][l]) {
                    *sub += 1;
                    let independent = leaves
                        .iter()
                        .enumerate()
                        .all(|(i, &p)| leaves[i + 1..].iter().all(|&r| !a[p][r]));
                    if independent {
                        *ind += 1;
                    }
                }
            }
        }
    }
    o
}

/// Every set partition of `0..n`, as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for label in 0..=max + 1 {
            cur.push(label);
            rec(i + 1, n, max.max(label), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = vec![0];
    rec(1, n, 0, &mut cur, &mut out);
    out
}

/// Direct double sum over ordered node pairs.
pub fn modularity_oracle(g: &Graph, assignment: &[usize], gamma: f64) -> f64 {
    let n = g.node_count();
    let a = matrix(g);
    let k: Vec<f64> = (0..n)
        .map(|i| a[i].iter().filter(|&&x| x).count() as f64)
        .collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] == assignment[j] {
                let aij = if a[i][j] { 1.0 } else { 0.0 };
                q += aij - gamma * k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}
