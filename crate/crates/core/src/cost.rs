//! Centralized evaluation of the chain cost objective.
//!
//! The objective is the sum of three families:
//!
//! * added cost of every supplier, warehouse and customer (the fixed cost of
//!   having the actor in the chain at all);
//! * action cost, i.e. production and storage, each gated by the actor's
//!   capability flag (the manufacturer's production always counts);
//! * interaction cost carried by the edges, split into ordering, transport
//!   and distribution.
//!
//! All figures are per-evaluation aggregates; there is no volume term.

use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::layering::LayerAssignment;
use crate::model::{ActorKind, EdgeKind, SupplyChainGraph};
use crate::money::Money;

/// The eight cost components plus their exact sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub added_supplier: Money,
    pub added_warehouse: Money,
    pub added_customer: Money,
    pub production: Money,
    pub storage: Money,
    pub order_interaction: Money,
    pub transport_interaction: Money,
    pub distribution_interaction: Money,
    pub total: Money,
}

/// Added-cost triple: supplier, warehouse, customer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AddedCosts {
    pub supplier: Money,
    pub warehouse: Money,
    pub customer: Money,
}

/// Action-cost pair: production, storage.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ActionCosts {
    pub production: Money,
    pub storage: Money,
}

/// Interaction-cost triple: order, transport, distribution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InteractionCosts {
    pub order: Money,
    pub transport: Money,
    pub distribution: Money,
}

impl CostBreakdown {
    pub const ZERO: CostBreakdown = CostBreakdown {
        added_supplier: Money::ZERO,
        added_warehouse: Money::ZERO,
        added_customer: Money::ZERO,
        production: Money::ZERO,
        storage: Money::ZERO,
        order_interaction: Money::ZERO,
        transport_interaction: Money::ZERO,
        distribution_interaction: Money::ZERO,
        total: Money::ZERO,
    };

    /// Assembles a breakdown and computes `total` from the components.
    pub fn from_parts(added: AddedCosts, action: ActionCosts, interaction: InteractionCosts) -> CostBreakdown {
        let mut b = CostBreakdown {
            added_supplier: added.supplier,
            added_warehouse: added.warehouse,
            added_customer: added.customer,
            production: action.production,
            storage: action.storage,
            order_interaction: interaction.order,
            transport_interaction: interaction.transport,
            distribution_interaction: interaction.distribution,
            total: Money::ZERO,
        };
        b.total = b.component_sum();
        b
    }

    /// Components in reporting order, with their field names.
    pub fn components(&self) -> [(&'static str, Money); 8] {
        [
            ("added_supplier", self.added_supplier),
            ("added_warehouse", self.added_warehouse),
            ("added_customer", self.added_customer),
            ("production", self.production),
            ("storage", self.storage),
            ("order_interaction", self.order_interaction),
            ("transport_interaction", self.transport_interaction),
            ("distribution_interaction", self.distribution_interaction),
        ]
    }

    pub fn component_sum(&self) -> Money {
        self.components().iter().map(|(_, m)| *m).sum()
    }

    /// True when `total` equals the sum of the components.
    pub fn is_consistent(&self) -> bool {
        self.total == self.component_sum()
    }

    pub(crate) fn add_added(&mut self, kind: ActorKind, amount: Money) {
        match kind {
            ActorKind::Supplier => self.added_supplier += amount,
            ActorKind::Warehouse => self.added_warehouse += amount,
            ActorKind::Customer => self.added_customer += amount,
            ActorKind::Manufacturer => return,
        }
        self.total += amount;
    }

    pub(crate) fn add_production(&mut self, amount: Money) {
        self.production += amount;
        self.total += amount;
    }

    pub(crate) fn add_storage(&mut self, amount: Money) {
        self.storage += amount;
        self.total += amount;
    }

    pub(crate) fn add_interaction(&mut self, kind: EdgeKind, amount: Money) {
        match kind {
            EdgeKind::OrderSupply => self.order_interaction += amount,
            EdgeKind::Transport => self.transport_interaction += amount,
            EdgeKind::Distribution => self.distribution_interaction += amount,
        }
        self.total += amount;
    }
}

impl Add for CostBreakdown {
    type Output = CostBreakdown;

    fn add(self, rhs: CostBreakdown) -> CostBreakdown {
        CostBreakdown {
            added_supplier: self.added_supplier + rhs.added_supplier,
            added_warehouse: self.added_warehouse + rhs.added_warehouse,
            added_customer: self.added_customer + rhs.added_customer,
            production: self.production + rhs.production,
            storage: self.storage + rhs.storage,
            order_interaction: self.order_interaction + rhs.order_interaction,
            transport_interaction: self.transport_interaction + rhs.transport_interaction,
            distribution_interaction: self.distribution_interaction + rhs.distribution_interaction,
            total: self.total + rhs.total,
        }
    }
}

impl std::iter::Sum for CostBreakdown {
    fn sum<I: Iterator<Item = CostBreakdown>>(iter: I) -> CostBreakdown {
        iter.fold(CostBreakdown::ZERO, Add::add)
    }
}

/// Added costs summed layer by layer. The manufacturer carries no added cost.
pub fn total_added_cost(graph: &SupplyChainGraph, assignment: &LayerAssignment) -> AddedCosts {
    let mut out = AddedCosts::default();
    for &coord in assignment.layer_sizes().keys() {
        for id in assignment.members(coord) {
            let Some(actor) = graph.actor(id) else { continue };
            match actor.kind {
                ActorKind::Supplier => out.supplier += actor.added_cost,
                ActorKind::Warehouse => out.warehouse += actor.added_cost,
                ActorKind::Customer => out.customer += actor.added_cost,
                ActorKind::Manufacturer => {}
            }
        }
    }
    out
}

/// Gated production and storage over every actor.
pub fn total_action_cost(graph: &SupplyChainGraph) -> ActionCosts {
    graph.actors().fold(ActionCosts::default(), |mut acc, actor| {
        acc.production += actor.gated_production();
        acc.storage += actor.gated_storage();
        acc
    })
}

/// Edge costs summed per edge kind.
pub fn total_interaction_cost(graph: &SupplyChainGraph) -> InteractionCosts {
    graph.edges().fold(InteractionCosts::default(), |mut acc, edge| {
        match edge.kind {
            EdgeKind::OrderSupply => acc.order += edge.interaction_cost,
            EdgeKind::Transport => acc.transport += edge.interaction_cost,
            EdgeKind::Distribution => acc.distribution += edge.interaction_cost,
        }
        acc
    })
}

/// The full objective for one chain state.
pub fn objective(graph: &SupplyChainGraph, assignment: &LayerAssignment) -> CostBreakdown {
    CostBreakdown::from_parts(
        total_added_cost(graph, assignment),
        total_action_cost(graph),
        total_interaction_cost(graph),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layering::assign_layers;
    use crate::model::{Actor, Edge};

    fn m(units: i64, cents: i64) -> Money {
        Money::new(units, cents)
    }

    fn man(pmc: Money) -> Actor {
        let mut a = Actor::new("Man", ActorKind::Manufacturer);
        a.production_cost = pmc;
        a
    }

    #[test]
    fn manufacturer_only_objective() {
        let g = SupplyChainGraph::new(man(m(12, 0))).unwrap();
        let a = assign_layers(&g).unwrap();
        assert_eq!(total_added_cost(&g, &a), AddedCosts::default());
        let b = objective(&g, &a);
        assert_eq!(b.total, m(12, 0));
        assert_eq!(b.production, m(12, 0));
    }

    #[test]
    fn supplier_added_costs_sum() {
        let mut g = SupplyChainGraph::new(man(Money::ZERO)).unwrap();
        for (id, c) in [("A", 1), ("B", 2), ("C", 3)] {
            g.add_actor(Actor::new(id, ActorKind::Supplier).added(m(c, 0))).unwrap();
            g.add_edge(Edge::new(id, "Man", EdgeKind::OrderSupply, Money::ZERO)).unwrap();
        }
        let a = assign_layers(&g).unwrap();
        assert_eq!(total_added_cost(&g, &a).supplier, m(6, 0));
    }

    #[test]
    fn action_cost_is_gated() {
        let mut g = SupplyChainGraph::new(man(m(10, 0))).unwrap();
        let mut unflagged = Actor::new("X", ActorKind::Supplier);
        unflagged.production_cost = m(50, 0);
        unflagged.storage_cost = m(50, 0);
        g.add_actor(unflagged).unwrap();
        let cost = total_action_cost(&g);
        assert_eq!(cost, ActionCosts { production: m(10, 0), storage: Money::ZERO });
    }

    #[test]
    fn producer_and_storage_mix() {
        let pmc = m(10, 0);
        let mut g = SupplyChainGraph::new(man(pmc)).unwrap();
        g.add_actor(Actor::new("D", ActorKind::Supplier).producer(m(4, 0))).unwrap();
        g.add_actor(Actor::new("G", ActorKind::Warehouse).storage(m(2, 50))).unwrap();
        g.add_actor(Actor::new("N", ActorKind::Customer).storage(m(1, 50))).unwrap();
        let cost = total_action_cost(&g);
        // oracle: 4.00 + PMC, 2.50 + 1.50
        assert_eq!(cost.production, m(14, 0));
        assert_eq!(cost.storage, m(4, 0));

        g.actor_mut(&"D".into()).unwrap().capabilities.is_producer = false;
        assert_eq!(total_action_cost(&g).production, m(10, 0));
    }

    #[test]
    fn interaction_cost_per_kind() {
        let mut g = SupplyChainGraph::new(man(Money::ZERO)).unwrap();
        for (id, kind) in [
            ("A", ActorKind::Supplier),
            ("D", ActorKind::Supplier),
            ("E", ActorKind::Supplier),
            ("G", ActorKind::Warehouse),
            ("N", ActorKind::Customer),
        ] {
            g.add_actor(Actor::new(id, kind)).unwrap();
        }
        assert_eq!(total_interaction_cost(&g), InteractionCosts::default());
        g.add_edge(Edge::new("A", "D", EdgeKind::OrderSupply, m(5, 0))).unwrap();
        g.add_edge(Edge::new("E", "Man", EdgeKind::OrderSupply, m(3, 0))).unwrap();
        g.add_edge(Edge::new("Man", "G", EdgeKind::Transport, m(7, 0))).unwrap();
        g.add_edge(Edge::new("G", "N", EdgeKind::Distribution, m(2, 0))).unwrap();
        let c = total_interaction_cost(&g);
        assert_eq!(
            c,
            InteractionCosts { order: m(8, 0), transport: m(7, 0), distribution: m(2, 0) }
        );

        let keys: Vec<_> = g.edges().map(|e| e.key()).collect();
        for (f, t) in keys {
            let cost = g.edge(&f, &t).unwrap().interaction_cost;
            g.set_edge_cost(&f, &t, cost * 2).unwrap();
        }
        let d = total_interaction_cost(&g);
        assert_eq!(
            d,
            InteractionCosts { order: c.order * 2, transport: c.transport * 2, distribution: c.distribution * 2 }
        );
    }

    #[test]
    fn all_zero_costs() {
        let mut g = SupplyChainGraph::new(man(Money::ZERO)).unwrap();
        g.add_actor(Actor::new("N", ActorKind::Customer)).unwrap();
        g.add_edge(Edge::new("Man", "N", EdgeKind::Transport, Money::ZERO)).unwrap();
        let a = assign_layers(&g).unwrap();
        assert_eq!(objective(&g, &a), CostBreakdown::ZERO);
    }

    #[test]
    fn breakdown_addition_keeps_total() {
        let a = CostBreakdown::from_parts(
            AddedCosts { supplier: m(1, 0), warehouse: m(2, 0), customer: m(3, 0) },
            ActionCosts { production: m(4, 0), storage: m(5, 0) },
            InteractionCosts { order: m(6, 0), transport: m(7, 0), distribution: m(8, 0) },
        );
        assert_eq!(a.total, m(36, 0));
        let b = a + a;
        assert!(b.is_consistent());
        assert_eq!(b.total, m(72, 0));
    }
}
