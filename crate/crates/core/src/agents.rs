//! Three-tier agent system evaluating the chain cost by message passing.
//!
//! Every actor is mirrored by an actor agent holding its cost figures, every
//! occupied layer by a layer manager, and a single controller sits on top.
//! Messages travel in synchronous rounds: whatever an agent sends in round
//! `r` is delivered at the start of round `r + 1`, in canonical order
//! (sender role, receiver role, then enqueue order).
//!
//! Cost collection always takes five rounds:
//!
//! | round | activity                                                     |
//! |-------|--------------------------------------------------------------|
//! | 1     | controller queries every manager and the manufacturer agent  |
//! | 2     | managers forward the query to their actors                   |
//! | 3     | actor agents send their cost reports                         |
//! | 4     | managers send layer aggregates                               |
//! | 5     | controller assembles the breakdown                           |
//!
//! The manufacturer belongs to no layer; its agent answers the controller
//! directly in round 2.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::cost::CostBreakdown;
use crate::layering::{assign_layers, LayerAssignment, LayerCoord, LayeringError};
use crate::model::{Actor, ActorId, ActorKind, Capabilities, EdgeKind, SupplyChainGraph};
use crate::money::Money;
use crate::scenario::{apply, ComparisonReport, Decision, Scenario, ScenarioError, DEFAULT_BASELINE_NAME};

/// Rounds consumed by one cost collection.
pub const COLLECTION_ROUNDS: u32 = 5;

/// Upper bound on rounds for a full dimensioning run, both systems included.
pub const DIMENSIONING_ROUND_LIMIT: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AgentRole {
    Controller,
    LayerManager(LayerCoord),
    ActorAgent(ActorId),
}

impl fmt::Display for AgentRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentRole::Controller => f.write_str("controller"),
            AgentRole::LayerManager(c) => write!(f, "manager:{c}"),
            AgentRole::ActorAgent(id) => write!(f, "actor:{}", escape(id.as_str())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    pub from: ActorId,
    pub to: ActorId,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    pub kind: ActorKind,
    pub capabilities: Capabilities,
    pub added: Money,
    pub production: Money,
    pub storage: Money,
    pub outgoing_interactions: Vec<(EdgeRef, Money)>,
}

impl CostReport {
    fn from_knowledge(actor: &Actor, outgoing: &[(EdgeRef, Money)]) -> CostReport {
        CostReport {
            kind: actor.kind,
            capabilities: actor.capabilities,
            added: actor.added_cost,
            production: actor.production_cost,
            storage: actor.storage_cost,
            outgoing_interactions: outgoing.to_vec(),
        }
    }

    /// The report's contribution to the objective, gates applied.
    pub fn breakdown(&self) -> CostBreakdown {
        let mut b = CostBreakdown::ZERO;
        b.add_added(self.kind, self.added);
        if self.capabilities.is_producer {
            b.add_production(self.production);
        }
        if self.capabilities.is_storage {
            b.add_storage(self.storage);
        }
        for (edge, cost) in &self.outgoing_interactions {
            b.add_interaction(edge.kind, *cost);
        }
        b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MessagePayload {
    CostQuery,
    CostReport(CostReport),
    LayerCostAggregate { layer: LayerCoord, subtotal: CostBreakdown },
    ScenarioDirective { scenario: String },
    DecisionAnnouncement { decision: Decision },
}

impl MessagePayload {
    pub fn kind(&self) -> &'static str {
        match self {
            MessagePayload::CostQuery => "CostQuery",
            MessagePayload::CostReport(_) => "CostReport",
            MessagePayload::LayerCostAggregate { .. } => "LayerCostAggregate",
            MessagePayload::ScenarioDirective { .. } => "ScenarioDirective",
            MessagePayload::DecisionAnnouncement { .. } => "DecisionAnnouncement",
        }
    }

    /// One-line summary used by the trace export. Contains no `|`.
    pub fn summary(&self) -> String {
        match self {
            MessagePayload::CostQuery => "-".to_owned(),
            MessagePayload::CostReport(r) => {
                let mut s = format!(
                    "kind={} producer={} storage={} added={} production={} storage_cost={} out=[",
                    r.kind, r.capabilities.is_producer, r.capabilities.is_storage, r.added, r.production, r.storage
                );
                for (i, (edge, cost)) in r.outgoing_interactions.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    let _ = write!(s, "{}:{}:{}", escape(edge.to.as_str()), edge.kind, cost);
                }
                s.push(']');
                s
            }
            MessagePayload::LayerCostAggregate { layer, subtotal } => {
                let mut s = format!("layer={layer}");
                for (name, value) in subtotal.components() {
                    let _ = write!(s, " {name}={value}");
                }
                let _ = write!(s, " total={}", subtotal.total);
                s
            }
            MessagePayload::ScenarioDirective { scenario } => format!("scenario={}", escape(scenario)),
            MessagePayload::DecisionAnnouncement { decision } => format!("decision={decision}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub from: AgentRole,
    pub to: AgentRole,
    /// Round in which the message was sent.
    pub round: u32,
    pub payload: MessagePayload,
}

impl Envelope {
    /// `round|from|to|payload_kind|payload_summary`
    pub fn trace_line(&self) -> String {
        format!(
            "{}|{}|{}|{}|{}",
            self.round,
            self.from,
            self.to,
            self.payload.kind(),
            self.payload.summary()
        )
    }
}

/// Line-delimited trace export, one envelope per `\n`-terminated line.
pub fn export_trace(trace: &[Envelope]) -> String {
    let mut out = String::new();
    for env in trace {
        out.push_str(&env.trace_line());
        out.push('\n');
    }
    out
}

/// Percent-encodes everything outside `[A-Za-z0-9._-]` so that identifiers
/// can never break the trace field layout.
fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for b in s.bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'.' | b'_' | b'-') {
            out.push(b as char);
        } else {
            let _ = write!(out, "%{b:02X}");
        }
    }
    out
}

/// Whether `from -> to` is a permitted communication link under `assignment`.
pub fn route_allowed(from: &AgentRole, to: &AgentRole, assignment: &LayerAssignment) -> bool {
    use AgentRole::*;
    match (from, to) {
        (Controller, LayerManager(c)) | (LayerManager(c), Controller) => assignment.contains_layer(*c),
        (Controller, ActorAgent(id)) | (ActorAgent(id), Controller) => id == assignment.manufacturer(),
        (LayerManager(c), ActorAgent(id)) | (ActorAgent(id), LayerManager(c)) => assignment.coord(id) == Some(*c),
        (ActorAgent(a), ActorAgent(b)) => {
            a != b
                && match (assignment.slot(a), assignment.slot(b)) {
                    (Some(x), Some(y)) => x.is_adjacent_or_same(y),
                    _ => false,
                }
        }
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgentError {
    #[error("RoutingViolation: {0}")]
    RoutingViolation(String),
    #[error("ProtocolTimeout: {agent} {detail}")]
    ProtocolTimeout { agent: String, detail: String },
    #[error("system is not quiescent: {0} message(s) still in flight")]
    NotQuiescent(usize),
    #[error(transparent)]
    Layering(#[from] LayeringError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

#[derive(Debug, Clone)]
struct ActorAgent {
    actor: Actor,
    outgoing: Vec<(EdgeRef, Money)>,
    notices: Vec<MessagePayload>,
}

impl ActorAgent {
    fn handle(&mut self, env: Envelope, out: &mut Vec<(AgentRole, MessagePayload)>) {
        match env.payload {
            MessagePayload::CostQuery => {
                out.push((env.from, MessagePayload::CostReport(CostReport::from_knowledge(&self.actor, &self.outgoing))))
            }
            p @ (MessagePayload::ScenarioDirective { .. } | MessagePayload::DecisionAnnouncement { .. }) => {
                self.notices.push(p)
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone)]
struct LayerManager {
    coord: LayerCoord,
    roster: BTreeSet<ActorId>,
    reports: BTreeMap<ActorId, CostReport>,
    collecting: bool,
    notices: Vec<MessagePayload>,
}

impl LayerManager {
    fn handle(&mut self, env: Envelope, out: &mut Vec<(AgentRole, MessagePayload)>) {
        match env.payload {
            MessagePayload::CostQuery => {
                self.reports.clear();
                self.collecting = true;
                for id in &self.roster {
                    out.push((AgentRole::ActorAgent(id.clone()), MessagePayload::CostQuery));
                }
            }
            MessagePayload::CostReport(report) => {
                if let AgentRole::ActorAgent(id) = env.from {
                    if self.roster.contains(&id) {
                        self.reports.insert(id, report);
                    }
                }
            }
            p @ (MessagePayload::ScenarioDirective { .. } | MessagePayload::DecisionAnnouncement { .. }) => {
                self.notices.push(p)
            }
            _ => {}
        }
    }

    /// Runs after the inbox is drained: reports the layer once complete.
    fn coordinate(&mut self, out: &mut Vec<(AgentRole, MessagePayload)>) {
        if self.collecting && self.reports.len() == self.roster.len() {
            self.collecting = false;
            let subtotal = self.reports.values().map(CostReport::breakdown).sum();
            out.push((
                AgentRole::Controller,
                MessagePayload::LayerCostAggregate { layer: self.coord, subtotal },
            ));
        }
    }

    fn missing(&self) -> Vec<&ActorId> {
        self.roster.iter().filter(|id| !self.reports.contains_key(*id)).collect()
    }
}

#[derive(Debug, Clone)]
enum ControllerTask {
    Collect,
    Directive(String),
    Announce(Decision),
}

#[derive(Debug, Clone)]
struct Controller {
    manufacturer: ActorId,
    layers: BTreeSet<LayerCoord>,
    agenda: VecDeque<ControllerTask>,
    collecting: bool,
    aggregates: BTreeMap<LayerCoord, CostBreakdown>,
    manufacturer_report: Option<CostReport>,
    assembled: Option<CostBreakdown>,
}

impl Controller {
    fn handle(&mut self, env: Envelope) {
        match env.payload {
            MessagePayload::LayerCostAggregate { layer, subtotal } => {
                if self.collecting && self.layers.contains(&layer) {
                    self.aggregates.insert(layer, subtotal);
                }
            }
            MessagePayload::CostReport(report)
                if self.collecting && env.from == AgentRole::ActorAgent(self.manufacturer.clone()) =>
            {
                self.manufacturer_report = Some(report);
            }
            _ => {}
        }
    }

    fn complete(&self) -> bool {
        self.manufacturer_report.is_some() && self.aggregates.len() == self.layers.len()
    }

    /// Decision-making step: assembles a finished collection, then works
    /// through the agenda as far as preconditions allow.
    fn decide(&mut self, out: &mut Vec<(AgentRole, MessagePayload)>) {
        if self.collecting && self.complete() {
            self.collecting = false;
            let manufacturer = self.manufacturer_report.as_ref().map(CostReport::breakdown).unwrap_or_default();
            self.assembled = Some(manufacturer + self.aggregates.values().copied().sum());
        }
        while let Some(task) = self.agenda.front() {
            match task {
                ControllerTask::Collect => {
                    self.collecting = true;
                    self.aggregates.clear();
                    self.manufacturer_report = None;
                    self.assembled = None;
                    for &layer in &self.layers {
                        out.push((AgentRole::LayerManager(layer), MessagePayload::CostQuery));
                    }
                    out.push((AgentRole::ActorAgent(self.manufacturer.clone()), MessagePayload::CostQuery));
                    self.agenda.pop_front();
                    // nothing else can proceed until the collection finishes
                    break;
                }
                ControllerTask::Directive(_) | ControllerTask::Announce(_) if self.collecting => break,
                ControllerTask::Directive(name) => {
                    for &layer in &self.layers {
                        out.push((
                            AgentRole::LayerManager(layer),
                            MessagePayload::ScenarioDirective { scenario: name.clone() },
                        ));
                    }
                    self.agenda.pop_front();
                }
                ControllerTask::Announce(decision) => {
                    for &layer in &self.layers {
                        out.push((
                            AgentRole::LayerManager(layer),
                            MessagePayload::DecisionAnnouncement { decision: *decision },
                        ));
                    }
                    self.agenda.pop_front();
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
enum AgentState {
    Controller(Controller),
    Manager(LayerManager),
    Actor(ActorAgent),
}

/// Result of a single cost collection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collection {
    pub breakdown: CostBreakdown,
    /// Envelopes delivered during this collection.
    pub trace: Vec<Envelope>,
    pub rounds: u32,
}

/// Result of a two-state dimensioning run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimensioning {
    pub decision: Decision,
    pub report: ComparisonReport,
    /// Trace of the baseline system, directive and announcement included.
    pub baseline_trace: Vec<Envelope>,
    /// Trace of the system instantiated over the scenario graph.
    pub scenario_trace: Vec<Envelope>,
    pub baseline_rounds: u32,
    pub scenario_rounds: u32,
}

impl Dimensioning {
    pub fn total_rounds(&self) -> u32 {
        self.baseline_rounds + self.scenario_rounds
    }
}

/// The agent population for one chain state plus its scheduler.
#[derive(Debug, Clone)]
pub struct AgentSystem {
    graph: SupplyChainGraph,
    assignment: LayerAssignment,
    agents: BTreeMap<AgentRole, AgentState>,
    pending: Vec<Envelope>,
    trace: Vec<Envelope>,
    round: u32,
}

impl AgentSystem {
    /// One actor agent per actor (manufacturer included), one manager per
    /// occupied layer and one controller.
    pub fn instantiate(graph: &SupplyChainGraph, assignment: &LayerAssignment) -> Result<AgentSystem, AgentError> {
        assignment.check_against(graph)?;
        let mut agents = BTreeMap::new();
        let layers: BTreeSet<LayerCoord> = assignment.layer_sizes().keys().copied().collect();
        agents.insert(
            AgentRole::Controller,
            AgentState::Controller(Controller {
                manufacturer: graph.manufacturer_id().clone(),
                layers: layers.clone(),
                agenda: VecDeque::new(),
                collecting: false,
                aggregates: BTreeMap::new(),
                manufacturer_report: None,
                assembled: None,
            }),
        );
        for coord in layers {
            agents.insert(
                AgentRole::LayerManager(coord),
                AgentState::Manager(LayerManager {
                    coord,
                    roster: assignment.members(coord).cloned().collect(),
                    reports: BTreeMap::new(),
                    collecting: false,
                    notices: Vec::new(),
                }),
            );
        }
        for actor in graph.actors() {
            let outgoing = graph
                .outgoing(&actor.id)
                .map(|e| {
                    let r = EdgeRef { from: e.from.clone(), to: e.to.clone(), kind: e.kind };
                    (r, e.interaction_cost)
                })
                .collect();
            agents.insert(
                AgentRole::ActorAgent(actor.id.clone()),
                AgentState::Actor(ActorAgent { actor: actor.clone(), outgoing, notices: Vec::new() }),
            );
        }
        Ok(AgentSystem {
            graph: graph.clone(),
            assignment: assignment.clone(),
            agents,
            pending: Vec::new(),
            trace: Vec::new(),
            round: 0,
        })
    }

    /// Layers the graph and instantiates in one go.
    pub fn from_graph(graph: &SupplyChainGraph) -> Result<AgentSystem, AgentError> {
        let assignment = assign_layers(graph)?;
        AgentSystem::instantiate(graph, &assignment)
    }

    pub fn graph(&self) -> &SupplyChainGraph {
        &self.graph
    }

    pub fn assignment(&self) -> &LayerAssignment {
        &self.assignment
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn trace(&self) -> &[Envelope] {
        &self.trace
    }

    pub fn roles(&self) -> impl Iterator<Item = &AgentRole> {
        self.agents.keys()
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn count_roles(&self) -> (usize, usize, usize) {
        self.agents.keys().fold((0, 0, 0), |(a, m, c), role| match role {
            AgentRole::ActorAgent(_) => (a + 1, m, c),
            AgentRole::LayerManager(_) => (a, m + 1, c),
            AgentRole::Controller => (a, m, c + 1),
        })
    }

    pub fn in_flight(&self) -> usize {
        self.pending.len()
    }

    /// Directives and decisions received by an actor agent or manager.
    pub fn notices(&self, role: &AgentRole) -> &[MessagePayload] {
        match self.agents.get(role) {
            Some(AgentState::Actor(a)) => &a.notices,
            Some(AgentState::Manager(m)) => &m.notices,
            _ => &[],
        }
    }

    /// Queues a message for delivery in the next round. Route legality is
    /// checked on delivery by [`step`](Self::step).
    pub fn post(&mut self, from: AgentRole, to: AgentRole, payload: MessagePayload) {
        self.pending.push(Envelope { from, to, round: self.round, payload });
    }

    /// Advances one round: delivers last round's messages in canonical
    /// order, lets every agent react, and queues their replies.
    pub fn step(&mut self) -> Result<Vec<Envelope>, AgentError> {
        let mut delivered = std::mem::take(&mut self.pending);
        delivered.sort_by(|a, b| (&a.from, &a.to).cmp(&(&b.from, &b.to)));
        for env in &delivered {
            if !self.agents.contains_key(&env.to) || !route_allowed(&env.from, &env.to, &self.assignment) {
                return Err(AgentError::RoutingViolation(env.trace_line()));
            }
        }
        self.round += 1;
        self.trace.extend(delivered.iter().cloned());

        let mut inboxes: BTreeMap<AgentRole, Vec<Envelope>> = BTreeMap::new();
        for env in &delivered {
            inboxes.entry(env.to.clone()).or_default().push(env.clone());
        }

        let round = self.round;
        let mut outgoing = Vec::new();
        for (role, state) in self.agents.iter_mut() {
            let inbox = inboxes.remove(role).unwrap_or_default();
            let mut out = Vec::new();
            match state {
                AgentState::Controller(c) => {
                    for env in inbox {
                        c.handle(env);
                    }
                    c.decide(&mut out);
                }
                AgentState::Manager(m) => {
                    for env in inbox {
                        m.handle(env, &mut out);
                    }
                    m.coordinate(&mut out);
                }
                AgentState::Actor(a) => {
                    for env in inbox {
                        a.handle(env, &mut out);
                    }
                }
            }
            outgoing.extend(out.into_iter().map(|(to, payload)| Envelope {
                from: role.clone(),
                to,
                round,
                payload,
            }));
        }
        self.pending = outgoing;
        Ok(delivered)
    }

    fn controller_mut(&mut self) -> &mut Controller {
        match self.agents.get_mut(&AgentRole::Controller) {
            Some(AgentState::Controller(c)) => c,
            _ => unreachable!("every system has a controller"),
        }
    }

    fn controller(&self) -> &Controller {
        match self.agents.get(&AgentRole::Controller) {
            Some(AgentState::Controller(c)) => c,
            _ => unreachable!("every system has a controller"),
        }
    }

    /// Runs the five-round cost collection and returns the assembled
    /// breakdown with the envelopes delivered along the way.
    pub fn run_cost_collection(&mut self) -> Result<Collection, AgentError> {
        self.collect(None)
    }

    fn collect(&mut self, then_directive: Option<String>) -> Result<Collection, AgentError> {
        if !self.pending.is_empty() {
            return Err(AgentError::NotQuiescent(self.pending.len()));
        }
        let start_round = self.round;
        let trace_start = self.trace.len();
        {
            let controller = self.controller_mut();
            controller.agenda.push_back(ControllerTask::Collect);
            if let Some(name) = then_directive {
                controller.agenda.push_back(ControllerTask::Directive(name));
            }
        }
        for n in 1..=COLLECTION_ROUNDS {
            self.step()?;
            // reports sent in round 3 have all been delivered by now
            if n == 4 {
                self.check_reports()?;
            }
        }
        let breakdown = self.controller().assembled.ok_or_else(|| {
            let c = self.controller();
            let missing: Vec<String> = c
                .layers
                .iter()
                .filter(|l| !c.aggregates.contains_key(l))
                .map(ToString::to_string)
                .chain(c.manufacturer_report.is_none().then(|| format!("actor:{}", c.manufacturer)))
                .collect();
            AgentError::ProtocolTimeout {
                agent: "controller".into(),
                detail: format!("missing aggregates from {}", missing.join(", ")),
            }
        })?;
        Ok(Collection {
            breakdown,
            trace: self.trace[trace_start..].to_vec(),
            rounds: self.round - start_round,
        })
    }

    fn check_reports(&self) -> Result<(), AgentError> {
        for (role, state) in &self.agents {
            if let AgentState::Manager(m) = state {
                let missing = m.missing();
                if m.collecting && !missing.is_empty() {
                    let ids: Vec<&str> = missing.iter().map(|id| id.as_str()).collect();
                    return Err(AgentError::ProtocolTimeout {
                        agent: role.to_string(),
                        detail: format!("no report from {}", ids.join(", ")),
                    });
                }
            }
        }
        Ok(())
    }

    /// Compares this system's chain with `scenario` applied to it.
    ///
    /// The baseline is collected here, the controller then broadcasts the
    /// directive, a second system is built over the modified chain and
    /// collected, and finally the controller announces the decision.
    pub fn run_dimensioning(&mut self, scenario: &Scenario) -> Result<Dimensioning, AgentError> {
        let trace_start = self.trace.len();
        let start_round = self.round;
        let st1 = self.collect(Some(scenario.name.clone()))?;

        let applied = apply(&self.graph, scenario)?;
        let mut alternative = AgentSystem::from_graph(&applied)?;
        let st2 = alternative.run_cost_collection()?;

        let report = ComparisonReport::new(DEFAULT_BASELINE_NAME, scenario.name.clone(), st1.breakdown, st2.breakdown);
        self.controller_mut().agenda.push_back(ControllerTask::Announce(report.decision));
        // one round to deliver the directive and send the announcement,
        // one to deliver the announcement
        self.step()?;
        self.step()?;

        Ok(Dimensioning {
            decision: report.decision,
            report,
            baseline_trace: self.trace[trace_start..].to_vec(),
            scenario_trace: st2.trace,
            baseline_rounds: self.round - start_round,
            scenario_rounds: st2.rounds,
        })
    }

    #[cfg(test)]
    fn drop_agent(&mut self, role: &AgentRole) {
        self.agents.remove(role);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::objective;
    use crate::model::{Edge, EdgeKind};

    fn m(units: i64) -> Money {
        Money::new(units, 0)
    }

    fn chain() -> SupplyChainGraph {
        let mut man = Actor::new("Man", ActorKind::Manufacturer);
        man.production_cost = m(12);
        SupplyChainGraph::new(man)
            .unwrap()
            .with_actor(Actor::new("A", ActorKind::Supplier).added(m(1)).producer(m(4)))
            .unwrap()
            .with_actor(Actor::new("B", ActorKind::Supplier).added(m(2)))
            .unwrap()
            .with_actor(Actor::new("G", ActorKind::Warehouse).added(m(3)).storage(m(2)))
            .unwrap()
            .with_actor(Actor::new("N", ActorKind::Customer).added(m(1)))
            .unwrap()
            .with_edge(Edge::new("A", "Man", EdgeKind::OrderSupply, m(5)))
            .unwrap()
            .with_edge(Edge::new("B", "A", EdgeKind::OrderSupply, m(6)))
            .unwrap()
            .with_edge(Edge::new("Man", "G", EdgeKind::Transport, m(7)))
            .unwrap()
            .with_edge(Edge::new("G", "N", EdgeKind::Distribution, m(8)))
            .unwrap()
    }

    #[test]
    fn population_counts() {
        let sys = AgentSystem::from_graph(&chain()).unwrap();
        assert_eq!(sys.count_roles(), (5, 4, 1));
        assert_eq!(sys.round(), 0);
        assert_eq!(sys.in_flight(), 0);

        let lone = SupplyChainGraph::new(Actor::new("Man", ActorKind::Manufacturer)).unwrap();
        let sys = AgentSystem::from_graph(&lone).unwrap();
        assert_eq!(sys.count_roles(), (1, 0, 1));
    }

    #[test]
    fn mismatched_assignment_is_rejected() {
        let g = chain();
        let other = SupplyChainGraph::new(Actor::new("Man", ActorKind::Manufacturer)).unwrap();
        let a = assign_layers(&other).unwrap();
        assert!(matches!(
            AgentSystem::instantiate(&g, &a),
            Err(AgentError::Layering(LayeringError::AssignmentMismatch(_)))
        ));
    }

    #[test]
    fn empty_step_only_advances_round() {
        let mut sys = AgentSystem::from_graph(&chain()).unwrap();
        assert!(sys.step().unwrap().is_empty());
        assert_eq!(sys.round(), 1);
    }

    #[test]
    fn collection_matches_objective() {
        let g = chain();
        let a = assign_layers(&g).unwrap();
        let mut sys = AgentSystem::instantiate(&g, &a).unwrap();
        let c = sys.run_cost_collection().unwrap();
        assert_eq!(c.breakdown, objective(&g, &a));
        assert_eq!(c.rounds, COLLECTION_ROUNDS);
        assert_eq!(sys.round(), 5);
        // 4 managers + manufacturer queried, 4 forwards, 5 reports, 4 aggregates
        assert_eq!(c.trace.len(), 5 + 4 + 5 + 4);

        // a second collection on the now quiescent system gives the same answer
        let again = sys.run_cost_collection().unwrap();
        assert_eq!(again.breakdown, c.breakdown);
        assert_eq!(sys.round(), 10);
    }

    #[test]
    fn query_broadcast_reaches_each_manager_once() {
        let mut sys = AgentSystem::from_graph(&chain()).unwrap();
        sys.controller_mut().agenda.push_back(ControllerTask::Collect);
        assert!(sys.step().unwrap().is_empty());
        let delivered = sys.step().unwrap();
        let to_managers = delivered
            .iter()
            .filter(|e| matches!(e.to, AgentRole::LayerManager(_)) && e.payload == MessagePayload::CostQuery)
            .count();
        assert_eq!(to_managers, sys.assignment().layer_count());
    }

    #[test]
    fn illegal_route_fails_fast() {
        let mut sys = AgentSystem::from_graph(&chain()).unwrap();
        sys.post(
            AgentRole::ActorAgent("B".into()),
            AgentRole::ActorAgent("N".into()),
            MessagePayload::CostQuery,
        );
        assert!(matches!(sys.step(), Err(AgentError::RoutingViolation(_))));

        let mut sys = AgentSystem::from_graph(&chain()).unwrap();
        sys.post(
            AgentRole::ActorAgent("B".into()),
            AgentRole::ActorAgent("A".into()),
            MessagePayload::CostQuery,
        );
        assert!(sys.step().is_ok());
    }

    #[test]
    fn missing_actor_agent_times_out() {
        let mut sys = AgentSystem::from_graph(&chain()).unwrap();
        sys.drop_agent(&AgentRole::ActorAgent("B".into()));
        // the forward to B is now undeliverable
        assert!(matches!(sys.run_cost_collection(), Err(AgentError::RoutingViolation(_))));
    }

    #[test]
    fn dropped_forward_times_out_after_round_three() {
        let mut sys = AgentSystem::from_graph(&chain()).unwrap();
        let s2 = AgentRole::LayerManager(LayerCoord::upstream(2));
        sys.post(AgentRole::Controller, s2.clone(), MessagePayload::CostQuery);
        sys.step().unwrap();
        // lose the forward from S2 to B in transit
        sys.pending.retain(|e| e.from != s2);
        sys.step().unwrap();
        sys.step().unwrap();
        sys.step().unwrap();
        assert_eq!(sys.round(), 4);
        let err = sys.check_reports().unwrap_err();
        assert_eq!(
            err,
            AgentError::ProtocolTimeout { agent: "manager:S2".into(), detail: "no report from B".into() }
        );
    }

    #[test]
    fn dimensioning_round_budget_and_notices() {
        let g = chain();
        let mut sys = AgentSystem::from_graph(&g).unwrap();
        let s = Scenario::new("cheaper-transport").with(crate::scenario::Delta::SetEdgeCost {
            from: "Man".into(),
            to: "G".into(),
            cost: m(1),
        });
        let d = sys.run_dimensioning(&s).unwrap();
        assert_eq!(d.decision, Decision::AdoptScenario);
        assert_eq!(d.report.delta_total.cents(), -600);
        assert_eq!(d.baseline_rounds, 7);
        assert_eq!(d.scenario_rounds, 5);
        assert!(d.total_rounds() <= DIMENSIONING_ROUND_LIMIT);
        let notices = sys.notices(&AgentRole::LayerManager(LayerCoord::downstream(1)));
        assert_eq!(
            notices,
            &[
                MessagePayload::ScenarioDirective { scenario: "cheaper-transport".into() },
                MessagePayload::DecisionAnnouncement { decision: Decision::AdoptScenario },
            ]
        );
    }

    #[test]
    fn trace_line_format() {
        let env = Envelope {
            from: AgentRole::ActorAgent("a|b c".into()),
            to: AgentRole::LayerManager(LayerCoord::upstream(2)),
            round: 3,
            payload: MessagePayload::CostQuery,
        };
        assert_eq!(env.trace_line(), "3|actor:a%7Cb%20c|manager:S2|CostQuery|-");
        assert_eq!(export_trace(&[env.clone(), env]).lines().count(), 2);
    }
}
