//! Seeded generators for random valid chains and scenarios.
//!
//! Generated chains are trees grown outwards from the manufacturer plus a few
//! extra same-layer or adjacent-layer links, so they always pass validation
//! and layering.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Actor, ActorId, ActorKind, CapabilityFlag, Edge, EdgeKind, SupplyChainGraph};
use crate::money::Money;
use crate::scenario::{CostField, Delta, Scenario};

/// Largest generated cost, 100.00.
pub const MAX_COST_CENTS: i64 = 10_000;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cost<R: Rng>(rng: &mut R) -> Money {
    Money::from_cents(rng.gen_range(0..=MAX_COST_CENTS)).expect("non-negative")
}

fn random_actor<R: Rng>(rng: &mut R, id: String, kind: ActorKind) -> Actor {
    let mut a = Actor::new(id, kind);
    a.added_cost = cost(rng);
    a.production_cost = cost(rng);
    a.storage_cost = cost(rng);
    a.capabilities.is_producer = rng.gen_bool(0.5);
    a.capabilities.is_storage = rng.gen_bool(0.5);
    a
}

struct Node {
    id: ActorId,
    kind: ActorKind,
    upstream: bool,
    depth: u32,
}

/// A random valid chain with a total actor count (manufacturer included)
/// drawn from `actors`.
pub fn random_chain<R: Rng>(rng: &mut R, actors: RangeInclusive<usize>) -> SupplyChainGraph {
    let n = rng.gen_range(actors).max(1);
    let mut man = random_actor(rng, "Man".into(), ActorKind::Manufacturer);
    man.added_cost = Money::ZERO;
    let mut graph = SupplyChainGraph::new(man).expect("manufacturer kind");

    let mut nodes: Vec<Node> = Vec::with_capacity(n);
    for i in 1..n {
        let upstream = rng.gen_bool(0.5);
        let candidates: Vec<Option<usize>> = std::iter::once(None)
            .chain((0..nodes.len()).filter(|&j| nodes[j].upstream == upstream).map(Some))
            .collect();
        let parent = *candidates.choose(rng).expect("manufacturer is always a candidate");
        let (parent_id, parent_kind, parent_depth) = match parent {
            None => (graph.manufacturer_id().clone(), ActorKind::Manufacturer, 0),
            Some(j) => (nodes[j].id.clone(), nodes[j].kind, nodes[j].depth),
        };
        let id = format!("a{i:02}");
        let (kind, edge) = if upstream {
            (
                ActorKind::Supplier,
                Edge::new(id.clone(), parent_id.as_str(), EdgeKind::OrderSupply, cost(rng)),
            )
        } else {
            let kind = if parent_kind == ActorKind::Customer || rng.gen_bool(0.5) {
                ActorKind::Customer
            } else {
                ActorKind::Warehouse
            };
            let edge_kind = if kind == ActorKind::Customer {
                EdgeKind::Distribution
            } else {
                EdgeKind::Transport
            };
            (kind, Edge::new(parent_id.as_str(), id.clone(), edge_kind, cost(rng)))
        };
        graph.add_actor(random_actor(rng, id.clone(), kind)).expect("fresh id");
        graph.add_edge(edge).expect("fresh edge");
        nodes.push(Node { id: ActorId::new(id), kind, upstream, depth: parent_depth + 1 });
    }

    // extra links that keep every depth and introduce no cycle
    let extra = rng.gen_range(0..=n / 2);
    for _ in 0..extra {
        if nodes.len() < 2 {
            break;
        }
        let a = rng.gen_range(0..nodes.len());
        let b = rng.gen_range(0..nodes.len());
        let (x, y) = (&nodes[a], &nodes[b]);
        if a == b || x.upstream != y.upstream {
            continue;
        }
        let ok = (x.depth == y.depth && a < b) || x.depth == y.depth + 1;
        if !ok || graph.edge(&y.id, &x.id).is_some() {
            continue;
        }
        let edge = if x.upstream {
            // x is further out: x supplies y
            Edge::new(x.id.as_str(), y.id.as_str(), EdgeKind::OrderSupply, cost(rng))
        } else if x.depth == y.depth {
            Edge::new(x.id.as_str(), y.id.as_str(), EdgeKind::Distribution, cost(rng))
        } else {
            // y is nearer the manufacturer: y ships to x
            Edge::new(y.id.as_str(), x.id.as_str(), EdgeKind::Distribution, cost(rng))
        };
        let _ = graph.add_edge(edge);
    }
    graph
}

fn pick_actor<R: Rng>(rng: &mut R, graph: &SupplyChainGraph) -> ActorId {
    let ids: Vec<&ActorId> = graph.actors().map(|a| &a.id).collect();
    (*ids.choose(rng).expect("graph has a manufacturer")).clone()
}

/// New leaf actor attached to a random existing actor, as two deltas.
pub fn leaf_deltas<R: Rng>(rng: &mut R, graph: &SupplyChainGraph, id: &str, zero_cost: bool) -> [Delta; 2] {
    let anchor_id = pick_actor(rng, graph);
    let anchor = graph.actor(&anchor_id).expect("picked from graph");
    let upstream = match anchor.kind {
        ActorKind::Supplier => true,
        ActorKind::Manufacturer => rng.gen_bool(0.5),
        ActorKind::Warehouse | ActorKind::Customer => false,
    };
    let mut actor = random_actor(rng, id.to_owned(), if upstream { ActorKind::Supplier } else { ActorKind::Customer });
    let mut link = cost(rng);
    if zero_cost {
        actor.added_cost = Money::ZERO;
        actor.production_cost = Money::ZERO;
        actor.storage_cost = Money::ZERO;
        link = Money::ZERO;
    }
    let edge = if upstream {
        Edge::new(id, anchor_id.as_str(), EdgeKind::OrderSupply, link)
    } else {
        Edge::new(anchor_id.as_str(), id, EdgeKind::Distribution, link)
    };
    [Delta::AddActor { actor }, Delta::AddEdge { edge }]
}

/// Raises one cost that is certain to count (an added cost, a gated action
/// cost, or an edge cost) by `amount`.
pub fn raise_one_cost<R: Rng>(rng: &mut R, graph: &SupplyChainGraph, amount: Money) -> Delta {
    let edges: Vec<&Edge> = graph.edges().collect();
    if !edges.is_empty() && rng.gen_bool(0.4) {
        let e = edges.choose(rng).expect("non-empty");
        return Delta::SetEdgeCost { from: e.from.clone(), to: e.to.clone(), cost: e.interaction_cost + amount };
    }
    let id = pick_actor(rng, graph);
    let actor = graph.actor(&id).expect("picked from graph");
    let mut options = Vec::new();
    if actor.kind != ActorKind::Manufacturer {
        options.push((CostField::Added, actor.added_cost));
    }
    if actor.capabilities.is_producer {
        options.push((CostField::Production, actor.production_cost));
    }
    if actor.capabilities.is_storage {
        options.push((CostField::Storage, actor.storage_cost));
    }
    // the manufacturer is always a producer, so options is never empty
    let (field, current) = *options.choose(rng).expect("some counted field");
    Delta::SetActorCost { id, field, cost: current + amount }
}

/// A random mix of edits that keeps the chain valid and layerable.
pub fn random_scenario<R: Rng>(rng: &mut R, graph: &SupplyChainGraph, name: &str) -> Scenario {
    let mut scenario = Scenario::new(name);
    let mut current = graph.clone();
    let steps = rng.gen_range(0..=4);
    for step in 0..steps {
        let deltas: Vec<Delta> = match rng.gen_range(0..5) {
            0 => {
                let id = pick_actor(rng, &current);
                let field = *[CostField::Added, CostField::Production, CostField::Storage].choose(rng).unwrap();
                vec![Delta::SetActorCost { id, field, cost: cost(rng) }]
            }
            1 => match current.edges().collect::<Vec<_>>().choose(rng) {
                Some(e) => vec![Delta::SetEdgeCost { from: e.from.clone(), to: e.to.clone(), cost: cost(rng) }],
                None => continue,
            },
            2 => {
                let id = pick_actor(rng, &current);
                let flag = *[CapabilityFlag::IsProducer, CapabilityFlag::IsStorage].choose(rng).unwrap();
                vec![Delta::SetCapability { id, flag, value: rng.gen_bool(0.5) }]
            }
            3 => leaf_deltas(rng, &current, &format!("{name}-x{step}"), false).to_vec(),
            _ => {
                let leaves: Vec<ActorId> = current
                    .actors()
                    .filter(|a| a.id != *current.manufacturer_id())
                    .filter(|a| current.edges().filter(|e| e.from == a.id || e.to == a.id).count() == 1)
                    .map(|a| a.id.clone())
                    .collect();
                match leaves.choose(rng) {
                    Some(id) => vec![Delta::RemoveActor { id: id.clone() }],
                    None => continue,
                }
            }
        };
        let probe = Scenario { name: name.to_owned(), deltas: deltas.clone() };
        if let Ok(next) = crate::scenario::apply(&current, &probe) {
            if crate::layering::assign_layers(&next).is_ok() {
                current = next;
                scenario.deltas.extend(deltas);
            }
        }
    }
    scenario
}
