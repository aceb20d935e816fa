//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use chainlayer_core::{ActorKind, EdgeKind, LayerCoord, SupplyChainGraph};

pub fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Gated sum over every actor and edge, in cents.
pub fn brute_total(graph: &SupplyChainGraph) -> i64 {
    let mut total = 0i64;
    for a in graph.actors() {
        if a.kind != ActorKind::Manufacturer {
            total += a.added_cost.cents();
        }
        if a.capabilities.is_producer {
            total += a.production_cost.cents();
        }
        if a.capabilities.is_storage {
            total += a.storage_cost.cents();
        }
    }
    for e in graph.edges() {
        total += e.interaction_cost.cents();
    }
    total
}

/// Per-category sums `[supplier, warehouse, customer, production, storage,
/// order, transport, distribution]` in cents.
pub fn brute_components(graph: &SupplyChainGraph) -> [i64; 8] {
    let mut c = [0i64; 8];
    for a in graph.actors() {
        match a.kind {
            ActorKind::Supplier => c[0] += a.added_cost.cents(),
            ActorKind::Warehouse => c[1] += a.added_cost.cents(),
            ActorKind::Customer => c[2] += a.added_cost.cents(),
            ActorKind::Manufacturer => {}
        }
        if a.capabilities.is_producer {
            c[3] += a.production_cost.cents();
        }
        if a.capabilities.is_storage {
            c[4] += a.storage_cost.cents();
        }
    }
    for e in graph.edges() {
        let i = match e.kind {
            EdgeKind::OrderSupply => 5,
            EdgeKind::Transport => 6,
            EdgeKind::Distribution => 7,
        };
        c[i] += e.interaction_cost.cents();
    }
    c
}

/// Shortest-hop layers by Floyd-Warshall: upstream over reversed order
/// edges, downstream over transport and distribution edges.
pub fn floyd_layers(graph: &SupplyChainGraph) -> BTreeMap<String, LayerCoord> {
    let ids: Vec<String> = graph.actors().map(|a| a.id.to_string()).collect();
    let index = |s: &str| ids.iter().position(|x| x == s).unwrap();
    let n = ids.len();
    const INF: u32 = u32::MAX / 4;
    let mut up = vec![vec![INF; n]; n];
    let mut down = vec![vec![INF; n]; n];
    for i in 0..n {
        up[i][i] = 0;
        down[i][i] = 0;
    }
    for e in graph.edges() {
        let (f, t) = (index(e.from.as_str()), index(e.to.as_str()));
        match e.kind {
            EdgeKind::OrderSupply => up[t][f] = 1,
            EdgeKind::Transport | EdgeKind::Distribution => down[f][t] = 1,
        }
    }
    for d in [&mut up, &mut down] {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
    }
    let m = index(graph.manufacturer_id().as_str());
    let mut out = BTreeMap::new();
    for (j, id) in ids.iter().enumerate() {
        if j == m {
            continue;
        }
        if up[m][j] < INF {
            out.insert(id.clone(), LayerCoord::upstream(up[m][j]));
        } else if down[m][j] < INF {
            out.insert(id.clone(), LayerCoord::downstream(down[m][j]));
        }
    }
    out
}
