//! Seeded synthetic grid growth, for fixtures and demonstrations.
//!
//! Each year a few substations appear at random positions in the unit square
//! and connect to their nearest neighbors of a compatible voltage class.
//! Occasionally a line is split by a new substation (the old line is
//! decommissioned and replaced by two) or receives a voltage upgrade.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ingest::{AssetRecordSet, ChangeEvent, ChangeKind, EdgeRecord, NodeRecord};

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthParams {
    pub country_tag: String,
    pub start_year: i32,
    pub end_year: i32,
    pub seed: u64,
    /// Expected number of new substations per year.
    pub nodes_per_year: f64,
    /// Probability that a new substation is 220 kV or above.
    pub high_voltage_share: f64,
    /// Probability that a new substation gets a second line.
    pub loop_probability: f64,
    pub split_probability: f64,
    pub upgrade_probability: f64,
}

impl Default for GrowthParams {
    fn default() -> Self {
        Self {
            country_tag: "SYN".into(),
            start_year: 1960,
            end_year: 2010,
            seed: 42,
            nodes_per_year: 1.5,
            high_voltage_share: 0.5,
            loop_probability: 0.4,
            split_probability: 0.3,
            upgrade_probability: 0.2,
        }
    }
}

struct Site {
    x: f64,
    y: f64,
    kv: u32,
}

pub fn synthetic_grid(params: &GrowthParams) -> AssetRecordSet {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut sites: Vec<Site> = Vec::new();
    let mut nodes: Vec<NodeRecord> = Vec::new();
    let mut edges: Vec<EdgeRecord> = Vec::new();
    let mut endpoints: Vec<(usize, usize)> = Vec::new();

    let add_node = |sites: &mut Vec<Site>, nodes: &mut Vec<NodeRecord>, site: Site, year: i32| {
        let id = nodes.len();
        nodes.push(NodeRecord {
            node_id: format!("N{id:04}"),
            label: format!("Substation {id}"),
            voltage_class_kv: site.kv,
            year_in: year,
            year_out: None,
            latitude: Some(site.y),
            longitude: Some(site.x),
        });
        sites.push(site);
        id
    };
    let add_edge = |edges: &mut Vec<EdgeRecord>,
                    endpoints: &mut Vec<(usize, usize)>,
                    nodes: &[NodeRecord],
                    a: usize,
                    b: usize,
                    kv: u32,
                    circuits: u32,
                    year: i32| {
        let id = edges.len();
        edges.push(EdgeRecord {
            edge_id: format!("L{id:04}"),
            node_a: nodes[a].node_id.clone(),
            node_b: nodes[b].node_id.clone(),
            voltage_class_kv: kv,
            circuits,
            year_in: year,
            year_out: None,
            events: Vec::new(),
        });
        endpoints.push((a, b));
    };

    for year in params.start_year..=params.end_year {
        let whole = params.nodes_per_year.floor();
        let mut arrivals =
            whole as usize + usize::from(rng.gen::<f64>() < params.nodes_per_year - whole);
        if year == params.start_year {
            arrivals = arrivals.max(2);
        }
        for k in 0..arrivals {
            let forced = year == params.start_year && k < 2;
            let hv = forced || rng.gen::<f64>() < params.high_voltage_share;
            let kv = if !hv {
                120
            } else if rng.gen_bool(0.5) {
                400
            } else {
                220
            };
            let site = Site {
                x: rng.gen(),
                y: rng.gen(),
                kv,
            };
            let mut near: Vec<(f64, usize)> = sites
                .iter()
                .enumerate()
                .filter(|(_, s)| !hv || s.kv >= 220)
                .map(|(i, s)| ((s.x - site.x).powi(2) + (s.y - site.y).powi(2), i))
                .collect();
            near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let id = add_node(&mut sites, &mut nodes, site, year);
            let links = if rng.gen::<f64>() < params.loop_probability {
                2
            } else {
                1
            };
            for &(_, other) in near.iter().take(links) {
                let line_kv = if hv { kv.min(sites[other].kv) } else { 120 };
                let circuits = if rng.gen::<f64>() < 0.2 { 2 } else { 1 };
                add_edge(
                    &mut edges,
                    &mut endpoints,
                    &nodes,
                    other,
                    id,
                    line_kv,
                    circuits,
                    year,
                );
            }
        }

        if rng.gen::<f64>() < params.split_probability {
            let candidates: Vec<usize> = (0..edges.len())
                .filter(|&i| edges[i].alive_at(year) && edges[i].year_in + 3 <= year)
                .collect();
            if !candidates.is_empty() {
                let i = candidates[rng.gen_range(0..candidates.len())];
                let (a, b) = endpoints[i];
                let kv = edges[i].voltage_class_kv;
                edges[i].year_out = Some(year);
                edges[i].events.push(ChangeEvent {
                    year,
                    kind: ChangeKind::Split,
                });
                let site = Site {
                    x: (sites[a].x + sites[b].x) / 2.0,
                    y: (sites[a].y + sites[b].y) / 2.0,
                    kv,
                };
                let mid = add_node(&mut sites, &mut nodes, site, year);
                add_edge(&mut edges, &mut endpoints, &nodes, a, mid, kv, 1, year);
                add_edge(&mut edges, &mut endpoints, &nodes, mid, b, kv, 1, year);
            }
        }

        if rng.gen::<f64>() < params.upgrade_probability {
            let candidates: Vec<usize> = (0..edges.len())
                .filter(|&i| {
                    edges[i].alive_at(year)
                        && edges[i].voltage_class_kv == 220
                        && edges[i].year_in < year
                })
                .collect();
            if !candidates.is_empty() {
                let i = candidates[rng.gen_range(0..candidates.len())];
                edges[i].events.push(ChangeEvent {
                    year,
                    kind: ChangeKind::VoltageUpgrade,
                });
            }
        }
    }

    AssetRecordSet::new(nodes, edges, params.country_tag.clone())
        .and_then(|s| s.with_span(params.start_year, params.end_year))
        .expect("synthetic records are well-formed")
}
