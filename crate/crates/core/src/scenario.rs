//! What-if deltas over a baseline chain and the two-state comparison.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{objective, CostBreakdown};
use crate::layering::{assign_layers, LayeringError};
use crate::model::{Actor, ActorId, CapabilityFlag, Edge, ModelError, SupplyChainGraph, Violation};
use crate::money::{Money, SignedMoney};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostField {
    Added,
    Production,
    Storage,
}

/// One edit to a chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Delta {
    AddActor { actor: Actor },
    /// Also removes every edge touching the actor.
    RemoveActor { id: ActorId },
    AddEdge { edge: Edge },
    RemoveEdge { from: ActorId, to: ActorId },
    SetActorCost { id: ActorId, field: CostField, cost: Money },
    SetEdgeCost { from: ActorId, to: ActorId, cost: Money },
    SetCapability { id: ActorId, flag: CapabilityFlag, value: bool },
}

impl Delta {
    fn apply_to(&self, graph: &mut SupplyChainGraph) -> Result<(), ModelError> {
        match self {
            Delta::AddActor { actor } => graph.add_actor(actor.clone()),
            Delta::RemoveActor { id } => graph.remove_actor(id).map(drop),
            Delta::AddEdge { edge } => graph.add_edge(edge.clone()),
            Delta::RemoveEdge { from, to } => graph.remove_edge(from, to).map(drop),
            Delta::SetActorCost { id, field, cost } => {
                let actor = graph.actor_mut(id)?;
                match field {
                    CostField::Added => actor.added_cost = *cost,
                    CostField::Production => actor.production_cost = *cost,
                    CostField::Storage => actor.storage_cost = *cost,
                }
                Ok(())
            }
            Delta::SetEdgeCost { from, to, cost } => graph.set_edge_cost(from, to, *cost),
            Delta::SetCapability { id, flag, value } => graph.set_capability(id, *flag, *value),
        }
    }
}

/// A named, ordered list of deltas.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub deltas: Vec<Delta>,
}

impl Scenario {
    pub fn new(name: impl Into<String>) -> Scenario {
        Scenario {
            name: name.into(),
            deltas: Vec::new(),
        }
    }

    pub fn with(mut self, delta: Delta) -> Scenario {
        self.deltas.push(delta);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// Concatenation `self ++ other`, keeping `self`'s name.
    pub fn then(&self, other: &Scenario) -> Scenario {
        let mut deltas = self.deltas.clone();
        deltas.extend(other.deltas.iter().cloned());
        Scenario {
            name: self.name.clone(),
            deltas,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("delta #{index}: {source}")]
    Delta {
        index: usize,
        #[source]
        source: ModelError,
    },
    #[error("InvalidScenario: {}", join_violations(.0))]
    InvalidScenario(Vec<Violation>),
    #[error("{state}: {source}")]
    Layering {
        state: &'static str,
        #[source]
        source: LayeringError,
    },
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Applies the deltas in order to a copy of `graph`.
pub fn apply(graph: &SupplyChainGraph, scenario: &Scenario) -> Result<SupplyChainGraph, ScenarioError> {
    let mut out = graph.clone();
    for (index, delta) in scenario.deltas.iter().enumerate() {
        delta
            .apply_to(&mut out)
            .map_err(|source| ScenarioError::Delta { index, source })?;
    }
    let errors: Vec<Violation> = out.validate().into_iter().filter(Violation::is_error).collect();
    if !errors.is_empty() {
        return Err(ScenarioError::InvalidScenario(errors));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    KeepBaseline,
    AdoptScenario,
}

impl Decision {
    /// The scenario is adopted only when strictly cheaper; ties keep the
    /// baseline.
    pub fn from_totals(baseline: Money, scenario: Money) -> Decision {
        if scenario < baseline {
            Decision::AdoptScenario
        } else {
            Decision::KeepBaseline
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::KeepBaseline => "KeepBaseline",
            Decision::AdoptScenario => "AdoptScenario",
        }
    }
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub baseline_name: String,
    pub scenario_name: String,
    pub cost_st1: CostBreakdown,
    pub cost_st2: CostBreakdown,
    pub decision: Decision,
    /// `cost_st2.total - cost_st1.total`.
    pub delta_total: SignedMoney,
}

impl ComparisonReport {
    pub fn new(
        baseline_name: impl Into<String>,
        scenario_name: impl Into<String>,
        cost_st1: CostBreakdown,
        cost_st2: CostBreakdown,
    ) -> ComparisonReport {
        ComparisonReport {
            baseline_name: baseline_name.into(),
            scenario_name: scenario_name.into(),
            decision: Decision::from_totals(cost_st1.total, cost_st2.total),
            delta_total: cost_st2.total.diff(cost_st1.total),
            cost_st1,
            cost_st2,
        }
    }
}

pub const DEFAULT_BASELINE_NAME: &str = "baseline";

/// Centralized two-state comparison.
pub fn compare(graph: &SupplyChainGraph, scenario: &Scenario) -> Result<ComparisonReport, ScenarioError> {
    let applied = apply(graph, scenario)?;
    let st1 = assign_layers(graph).map_err(|source| ScenarioError::Layering { state: "baseline", source })?;
    let st2 = assign_layers(&applied).map_err(|source| ScenarioError::Layering { state: "scenario", source })?;
    Ok(ComparisonReport::new(
        DEFAULT_BASELINE_NAME,
        scenario.name.clone(),
        objective(graph, &st1),
        objective(&applied, &st2),
    ))
}
