//! Actors, cost-bearing edges and the supply-chain graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::money::Money;

/// Opaque actor identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActorId(String);

impl ActorId {
    pub fn new(id: impl Into<String>) -> ActorId {
        ActorId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ActorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(&self.0)
    }
}

impl From<&str> for ActorId {
    fn from(s: &str) -> ActorId {
        ActorId(s.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActorKind {
    Supplier,
    Manufacturer,
    Warehouse,
    Customer,
}

impl fmt::Display for ActorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ActorKind::Supplier => "supplier",
            ActorKind::Manufacturer => "manufacturer",
            ActorKind::Warehouse => "warehouse",
            ActorKind::Customer => "customer",
        };
        f.write_str(s)
    }
}

/// The binary gates deciding whether production and storage costs count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Capabilities {
    pub is_producer: bool,
    pub is_storage: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapabilityFlag {
    IsProducer,
    IsStorage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "ActorRecord", into = "ActorRecord")]
pub struct Actor {
    pub id: ActorId,
    pub name: String,
    pub kind: ActorKind,
    pub capabilities: Capabilities,
    pub added_cost: Money,
    pub production_cost: Money,
    pub storage_cost: Money,
    /// Raw material / component / product labels. Informational only.
    pub commodities: BTreeSet<String>,
}

/// Flat file representation of an [`Actor`].
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActorRecord {
    id: ActorId,
    #[serde(default)]
    name: String,
    kind: ActorKind,
    #[serde(default)]
    is_producer: bool,
    #[serde(default)]
    is_storage: bool,
    #[serde(default)]
    added_cost: Money,
    #[serde(default)]
    production_cost: Money,
    #[serde(default)]
    storage_cost: Money,
    #[serde(default)]
    commodities: BTreeSet<String>,
}

impl From<ActorRecord> for Actor {
    fn from(r: ActorRecord) -> Actor {
        Actor {
            name: if r.name.is_empty() { r.id.0.clone() } else { r.name },
            id: r.id,
            kind: r.kind,
            capabilities: Capabilities {
                is_producer: r.is_producer,
                is_storage: r.is_storage,
            },
            added_cost: r.added_cost,
            production_cost: r.production_cost,
            storage_cost: r.storage_cost,
            commodities: r.commodities,
        }
    }
}

impl From<Actor> for ActorRecord {
    fn from(a: Actor) -> ActorRecord {
        ActorRecord {
            id: a.id,
            name: a.name,
            kind: a.kind,
            is_producer: a.capabilities.is_producer,
            is_storage: a.capabilities.is_storage,
            added_cost: a.added_cost,
            production_cost: a.production_cost,
            storage_cost: a.storage_cost,
            commodities: a.commodities,
        }
    }
}

impl Actor {
    /// An actor with zero costs and no capabilities (a manufacturer is
    /// always a producer).
    pub fn new(id: impl Into<String>, kind: ActorKind) -> Actor {
        let id = id.into();
        Actor {
            name: id.clone(),
            id: ActorId(id),
            kind,
            capabilities: Capabilities {
                is_producer: kind == ActorKind::Manufacturer,
                is_storage: false,
            },
            added_cost: Money::ZERO,
            production_cost: Money::ZERO,
            storage_cost: Money::ZERO,
            commodities: BTreeSet::new(),
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Actor {
        self.name = name.into();
        self
    }

    pub fn producer(mut self, production_cost: Money) -> Actor {
        self.capabilities.is_producer = true;
        self.production_cost = production_cost;
        self
    }

    pub fn storage(mut self, storage_cost: Money) -> Actor {
        self.capabilities.is_storage = true;
        self.storage_cost = storage_cost;
        self
    }

    pub fn added(mut self, added_cost: Money) -> Actor {
        self.added_cost = added_cost;
        self
    }

    pub fn with_commodity(mut self, tag: impl Into<String>) -> Actor {
        self.commodities.insert(tag.into());
        self
    }

    /// Production cost after the producer gate.
    pub fn gated_production(&self) -> Money {
        if self.capabilities.is_producer {
            self.production_cost
        } else {
            Money::ZERO
        }
    }

    /// Storage cost after the storage gate.
    pub fn gated_storage(&self) -> Money {
        if self.capabilities.is_storage {
            self.storage_cost
        } else {
            Money::ZERO
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Procurement link, pointing towards the manufacturer.
    OrderSupply,
    /// Manufacturer / warehouse shipping link.
    Transport,
    /// Customer-side distribution link.
    Distribution,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgeKind::OrderSupply => "order_supply",
            EdgeKind::Transport => "transport",
            EdgeKind::Distribution => "distribution",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub from: ActorId,
    pub to: ActorId,
    pub kind: EdgeKind,
    #[serde(rename = "cost", default)]
    pub interaction_cost: Money,
}

impl Edge {
    pub fn new(from: impl Into<String>, to: impl Into<String>, kind: EdgeKind, cost: Money) -> Edge {
        Edge {
            from: ActorId(from.into()),
            to: ActorId(to.into()),
            kind,
            interaction_cost: cost,
        }
    }

    pub fn key(&self) -> (ActorId, ActorId) {
        (self.from.clone(), self.to.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("actor {id} has kind {found}, expected {expected}")]
    KindMismatch {
        id: ActorId,
        expected: &'static str,
        found: ActorKind,
    },
    #[error("duplicate actor {0}")]
    DuplicateActor(ActorId),
    #[error("unknown actor {0}")]
    UnknownActor(ActorId),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(ActorId, ActorId),
    #[error("unknown edge {0} -> {1}")]
    UnknownEdge(ActorId, ActorId),
    #[error("self-loop on {0}")]
    SelfLoop(ActorId),
    #[error("the manufacturer {0} cannot be removed")]
    ManufacturerRemoval(ActorId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

/// A problem found by [`SupplyChainGraph::validate`] or while loading a chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    UnknownActor { from: ActorId, to: ActorId, missing: ActorId },
    SelfLoop { actor: ActorId },
    DuplicateActor { actor: ActorId },
    DuplicateEdge { from: ActorId, to: ActorId },
    MissingManufacturer,
    MultipleManufacturers { actor: ActorId },
    Disconnected { actor: ActorId },
    NoCustomers,
    ProducerWithoutCost { actor: ActorId },
}

impl Violation {
    pub fn severity(&self) -> Severity {
        match self {
            Violation::NoCustomers | Violation::ProducerWithoutCost { .. } => Severity::Warning,
            _ => Severity::Error,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity() == Severity::Error
    }

    pub fn code(&self) -> &'static str {
        match self {
            Violation::UnknownActor { .. } => "UnknownActor",
            Violation::SelfLoop { .. } => "SelfLoop",
            Violation::DuplicateActor { .. } => "DuplicateActor",
            Violation::DuplicateEdge { .. } => "DuplicateEdge",
            Violation::MissingManufacturer => "MissingManufacturer",
            Violation::MultipleManufacturers { .. } => "MultipleManufacturers",
            Violation::Disconnected { .. } => "Disconnected",
            Violation::NoCustomers => "NoCustomers",
            Violation::ProducerWithoutCost { .. } => "ProducerWithoutCost",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())?;
        match self {
            Violation::UnknownActor { from, to, missing } => {
                write!(f, ": edge {from} -> {to} references unknown actor {missing}")
            }
            Violation::SelfLoop { actor } => write!(f, ": edge {actor} -> {actor}"),
            Violation::DuplicateActor { actor } => write!(f, ": {actor}"),
            Violation::DuplicateEdge { from, to } => write!(f, ": {from} -> {to}"),
            Violation::MissingManufacturer => Ok(()),
            Violation::MultipleManufacturers { actor } => write!(f, ": second manufacturer {actor}"),
            Violation::Disconnected { actor } => write!(f, ": {actor} has no path to the manufacturer"),
            Violation::NoCustomers => write!(f, ": the chain has no customer"),
            Violation::ProducerWithoutCost { actor } => {
                write!(f, ": {actor} is a producer with zero production cost")
            }
        }
    }
}

/// Directed graph of actors with exactly one manufacturer.
///
/// All mutators check their preconditions first and leave the graph untouched
/// on error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupplyChainGraph {
    actors: BTreeMap<ActorId, Actor>,
    edges: BTreeMap<(ActorId, ActorId), Edge>,
    manufacturer_id: ActorId,
}

impl SupplyChainGraph {
    /// Starts a graph from its manufacturer. The producer gate of the
    /// manufacturer is forced on.
    pub fn new(mut manufacturer: Actor) -> Result<SupplyChainGraph, ModelError> {
        if manufacturer.kind != ActorKind::Manufacturer {
            return Err(ModelError::KindMismatch {
                id: manufacturer.id,
                expected: "manufacturer",
                found: manufacturer.kind,
            });
        }
        manufacturer.capabilities.is_producer = true;
        let manufacturer_id = manufacturer.id.clone();
        let mut actors = BTreeMap::new();
        actors.insert(manufacturer_id.clone(), manufacturer);
        Ok(SupplyChainGraph {
            actors,
            edges: BTreeMap::new(),
            manufacturer_id,
        })
    }

    pub fn add_actor(&mut self, actor: Actor) -> Result<(), ModelError> {
        if self.actors.contains_key(&actor.id) {
            return Err(ModelError::DuplicateActor(actor.id));
        }
        if actor.kind == ActorKind::Manufacturer {
            return Err(ModelError::KindMismatch {
                id: actor.id,
                expected: "non-manufacturer",
                found: ActorKind::Manufacturer,
            });
        }
        self.actors.insert(actor.id.clone(), actor);
        Ok(())
    }

    pub fn add_edge(&mut self, edge: Edge) -> Result<(), ModelError> {
        if edge.from == edge.to {
            return Err(ModelError::SelfLoop(edge.from));
        }
        for end in [&edge.from, &edge.to] {
            if !self.actors.contains_key(end) {
                return Err(ModelError::UnknownActor(end.clone()));
            }
        }
        let key = edge.key();
        if self.edges.contains_key(&key) {
            return Err(ModelError::DuplicateEdge(key.0, key.1));
        }
        self.edges.insert(key, edge);
        Ok(())
    }

    /// Consuming variant of [`add_actor`](Self::add_actor) for builder chains.
    pub fn with_actor(mut self, actor: Actor) -> Result<SupplyChainGraph, ModelError> {
        self.add_actor(actor)?;
        Ok(self)
    }

    pub fn with_edge(mut self, edge: Edge) -> Result<SupplyChainGraph, ModelError> {
        self.add_edge(edge)?;
        Ok(self)
    }

    /// Removes an actor and every edge touching it.
    pub fn remove_actor(&mut self, id: &ActorId) -> Result<Actor, ModelError> {
        if *id == self.manufacturer_id {
            return Err(ModelError::ManufacturerRemoval(id.clone()));
        }
        let actor = self
            .actors
            .remove(id)
            .ok_or_else(|| ModelError::UnknownActor(id.clone()))?;
        self.edges.retain(|(from, to), _| from != id && to != id);
        Ok(actor)
    }

    pub fn remove_edge(&mut self, from: &ActorId, to: &ActorId) -> Result<Edge, ModelError> {
        self.edges
            .remove(&(from.clone(), to.clone()))
            .ok_or_else(|| ModelError::UnknownEdge(from.clone(), to.clone()))
    }

    pub fn actor_mut(&mut self, id: &ActorId) -> Result<&mut Actor, ModelError> {
        self.actors
            .get_mut(id)
            .ok_or_else(|| ModelError::UnknownActor(id.clone()))
    }

    /// Turning the manufacturer's producer gate off is ignored.
    pub fn set_capability(&mut self, id: &ActorId, flag: CapabilityFlag, value: bool) -> Result<(), ModelError> {
        let is_manufacturer = *id == self.manufacturer_id;
        let actor = self.actor_mut(id)?;
        match flag {
            CapabilityFlag::IsProducer => actor.capabilities.is_producer = value || is_manufacturer,
            CapabilityFlag::IsStorage => actor.capabilities.is_storage = value,
        }
        Ok(())
    }

    pub fn set_edge_cost(&mut self, from: &ActorId, to: &ActorId, cost: Money) -> Result<(), ModelError> {
        let edge = self
            .edges
            .get_mut(&(from.clone(), to.clone()))
            .ok_or_else(|| ModelError::UnknownEdge(from.clone(), to.clone()))?;
        edge.interaction_cost = cost;
        Ok(())
    }

    pub fn manufacturer_id(&self) -> &ActorId {
        &self.manufacturer_id
    }

    pub fn manufacturer(&self) -> &Actor {
        &self.actors[&self.manufacturer_id]
    }

    pub fn actor(&self, id: &ActorId) -> Option<&Actor> {
        self.actors.get(id)
    }

    pub fn contains_actor(&self, id: &ActorId) -> bool {
        self.actors.contains_key(id)
    }

    /// Actors in id order, manufacturer included.
    pub fn actors(&self) -> impl Iterator<Item = &Actor> {
        self.actors.values()
    }

    /// Edges in `(from, to)` order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn edge(&self, from: &ActorId, to: &ActorId) -> Option<&Edge> {
        self.edges.get(&(from.clone(), to.clone()))
    }

    /// Edges leaving `id`, in target order.
    pub fn outgoing<'a>(&'a self, id: &'a ActorId) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges
            .range((id.clone(), ActorId(String::new()))..)
            .take_while(move |((from, _), _)| from == id)
            .map(|(_, e)| e)
    }

    pub fn actor_count(&self) -> usize {
        self.actors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Checks the structural invariants plus undirected connectivity to the
    /// manufacturer, and reports semantic oddities as warnings.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        match self.actors.get(&self.manufacturer_id) {
            Some(a) if a.kind == ActorKind::Manufacturer => {}
            _ => out.push(Violation::MissingManufacturer),
        }
        for actor in self.actors.values() {
            if actor.kind == ActorKind::Manufacturer && actor.id != self.manufacturer_id {
                out.push(Violation::MultipleManufacturers { actor: actor.id.clone() });
            }
        }
        for edge in self.edges.values() {
            if edge.from == edge.to {
                out.push(Violation::SelfLoop { actor: edge.from.clone() });
            }
            for end in [&edge.from, &edge.to] {
                if !self.actors.contains_key(end) {
                    out.push(Violation::UnknownActor {
                        from: edge.from.clone(),
                        to: edge.to.clone(),
                        missing: end.clone(),
                    });
                }
            }
        }

        let reached = self.undirected_reach();
        for id in self.actors.keys() {
            if !reached.contains(id) {
                out.push(Violation::Disconnected { actor: id.clone() });
            }
        }

        if !self.actors.values().any(|a| a.kind == ActorKind::Customer) {
            out.push(Violation::NoCustomers);
        }
        for actor in self.actors.values() {
            if actor.capabilities.is_producer && actor.production_cost.is_zero() {
                out.push(Violation::ProducerWithoutCost { actor: actor.id.clone() });
            }
        }
        out
    }

    fn undirected_reach(&self) -> BTreeSet<ActorId> {
        let mut neighbours: BTreeMap<&ActorId, Vec<&ActorId>> = BTreeMap::new();
        for (from, to) in self.edges.keys() {
            neighbours.entry(from).or_default().push(to);
            neighbours.entry(to).or_default().push(from);
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(self.manufacturer_id.clone());
        queue.push_back(&self.manufacturer_id);
        while let Some(id) = queue.pop_front() {
            for &next in neighbours.get(id).into_iter().flatten() {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen
    }
}
