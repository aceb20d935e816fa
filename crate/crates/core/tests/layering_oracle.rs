mod common;

use chainlayer_core::synth::{random_chain, seeded};
use chainlayer_core::{
    assign_layers, Actor, ActorKind, Edge, EdgeKind, LayerSlot, Money, SupplyChainGraph,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn rebuild_shuffled(graph: &SupplyChainGraph, seed: u64) -> SupplyChainGraph {
    let mut rng = seeded(seed);
    let mut actors: Vec<Actor> = graph.actors().filter(|a| a.id != *graph.manufacturer_id()).cloned().collect();
    let mut edges: Vec<Edge> = graph.edges().cloned().collect();
    actors.shuffle(&mut rng);
    edges.shuffle(&mut rng);
    let mut out = SupplyChainGraph::new(graph.manufacturer().clone()).unwrap();
    for a in actors {
        out.add_actor(a).unwrap();
    }
    for e in edges {
        out.add_edge(e).unwrap();
    }
    out
}

fn slot_of(a: &chainlayer_core::LayerAssignment, id: &chainlayer_core::ActorId) -> LayerSlot {
    a.slot(id).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bfs_matches_all_pairs_shortest_paths(seed in any::<u64>()) {
        let g = random_chain(&mut seeded(seed), 1..=8);
        let a = assign_layers(&g).unwrap();
        let got: std::collections::BTreeMap<String, _> =
            a.coords().map(|(id, c)| (id.to_string(), c)).collect();
        prop_assert_eq!(got, common::floyd_layers(&g));
    }

    #[test]
    fn layering_ignores_insertion_order(seed in any::<u64>(), shuffle in any::<u64>()) {
        let g = random_chain(&mut seeded(seed), 1..=20);
        let h = rebuild_shuffled(&g, shuffle);
        prop_assert_eq!(assign_layers(&g).unwrap(), assign_layers(&h).unwrap());
    }

    #[test]
    fn layering_is_idempotent(seed in any::<u64>()) {
        let g = random_chain(&mut seeded(seed), 1..=20);
        let first = assign_layers(&g).unwrap();
        prop_assert_eq!(&first, &assign_layers(&g).unwrap());
        prop_assert_eq!(first.build_matrix(), assign_layers(&g).unwrap().build_matrix());
    }

    #[test]
    fn every_actor_has_one_layer(seed in any::<u64>()) {
        let g = random_chain(&mut seeded(seed), 1..=20);
        let a = assign_layers(&g).unwrap();
        prop_assert_eq!(a.actor_count() + 1, g.actor_count());
        prop_assert_eq!(a.build_matrix().cell_count() + 1, g.actor_count());
        prop_assert_eq!(a.layer_sizes().values().sum::<usize>(), a.actor_count());
    }

    /// Arbitrary wiring: whatever is accepted must agree with the oracle and
    /// keep every edge between the same or adjacent layers.
    #[test]
    fn accepted_wirings_are_consistent(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let n = rng.gen_range(1..=7);
        let kinds = [ActorKind::Supplier, ActorKind::Warehouse, ActorKind::Customer];
        let mut g = SupplyChainGraph::new(Actor::new("Man", ActorKind::Manufacturer)).unwrap();
        let mut ids = vec!["Man".to_owned()];
        for i in 0..n {
            let id = format!("x{i}");
            g.add_actor(Actor::new(id.clone(), *kinds.choose(&mut rng).unwrap())).unwrap();
            ids.push(id);
        }
        for _ in 0..rng.gen_range(0..=2 * n) {
            let from = ids.choose(&mut rng).unwrap();
            let to = ids.choose(&mut rng).unwrap();
            let kind = *[EdgeKind::OrderSupply, EdgeKind::Transport, EdgeKind::Distribution].choose(&mut rng).unwrap();
            let _ = g.add_edge(Edge::new(from.as_str(), to.as_str(), kind, Money::ZERO));
        }
        if let Ok(a) = assign_layers(&g) {
            let got: std::collections::BTreeMap<String, _> =
                a.coords().map(|(id, c)| (id.to_string(), c)).collect();
            prop_assert_eq!(got, common::floyd_layers(&g));
            for e in g.edges() {
                prop_assert!(slot_of(&a, &e.from).is_adjacent_or_same(slot_of(&a, &e.to)));
            }
        }
    }
}
