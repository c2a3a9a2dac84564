//! Simple undirected graphs and the per-year snapshot wrapper.

/// Simple undirected graph over nodes `0..n` with sorted adjacency lists.
///
/// Self-loops are dropped and parallel edges collapse on construction, so
/// every `Graph` is simple by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: usize,
}

impl Graph {
    /// Edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edges: 0,
        }
    }

    /// Builds a simple graph from an edge list. Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            assert!(a < n && b < n, "edge ({a}, {b}) out of range for {n} nodes");
            if a == b {
                continue;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut twice = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            twice += list.len();
        }
        Self {
            adj,
            edges: twice / 2,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.adj.iter().map(Vec::len)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Disjoint union: nodes of `other` are shifted by `self.node_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.node_count();
        let edges = self
            .edges()
            .chain(other.edges().map(|(a, b)| (a + shift, b + shift)));
        Graph::from_edges(shift + other.node_count(), edges)
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.node_count());
        Graph::from_edges(
            self.node_count(),
            self.edges().map(|(a, b)| (perm[a], perm[b])),
        )
    }
}

/// The simple graph of all assets alive in one calendar year at a voltage floor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnualSnapshot {
    pub year: i32,
    pub voltage_floor_kv: u32,
    /// Record identifier for each graph node, sorted ascending.
    pub node_ids: Vec<String>,
    pub graph: Graph,
}

impl AnnualSnapshot {
    /// Wraps a bare graph (e.g. a generated reference graph) with synthetic ids.
    pub fn from_graph(year: i32, voltage_floor_kv: u32, graph: Graph) -> Self {
        let width = graph.node_count().to_string().len();
        let node_ids = (0..graph.node_count())
            .map(|i| format!("n{i:0width$}"))
            .collect();
        Self {
            year,
            voltage_floor_kv,
            node_ids,
            graph,
        }
    }

    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }
}
