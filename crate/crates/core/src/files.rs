//! JSON chain and scenario documents.
//!
//! A chain document has three top-level keys:
//!
//! ```json
//! {
//!   "manufacturer": { "id": "Man", "kind": "manufacturer", "production_cost": "12.00" },
//!   "actors": [ { "id": "A", "kind": "supplier", "is_producer": true, "production_cost": "4.00" } ],
//!   "edges":  [ { "from": "A", "to": "Man", "kind": "order_supply", "cost": "5.00" } ]
//! }
//! ```
//!
//! Money values are decimal strings with at most two fractional digits.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Actor, ActorKind, Edge, ModelError, SupplyChainGraph, Violation};
use crate::scenario::Scenario;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid chain:\n{}", render_findings(.0))]
    Invalid(Vec<Finding>),
}

impl From<serde_json::Error> for FileError {
    fn from(e: serde_json::Error) -> FileError {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep just the cause
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_owned(),
            None => message,
        };
        FileError::Parse { line: e.line(), column: e.column(), message }
    }
}

/// A violation tagged with where in the document it was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    /// `manufacturer`, `actors[i]`, `edges[i]` or `chain` for whole-graph checks.
    pub location: String,
    #[serde(flatten)]
    pub violation: Violation,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.violation)
    }
}

fn render_findings(findings: &[Finding]) -> String {
    findings.iter().map(|f| format!("  {f}")).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub manufacturer: Actor,
    #[serde(default)]
    pub actors: Vec<Actor>,
    #[serde(default)]
    pub edges: Vec<Edge>,
}

impl ChainFile {
    pub fn parse(text: &str) -> Result<ChainFile, FileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_graph(graph: &SupplyChainGraph) -> ChainFile {
        ChainFile {
            manufacturer: graph.manufacturer().clone(),
            actors: graph.actors().filter(|a| a.id != *graph.manufacturer_id()).cloned().collect(),
            edges: graph.edges().cloned().collect(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("chain documents always serialize")
    }

    /// Builds as much of the graph as possible, recording every rejected
    /// record, then appends the whole-graph checks.
    fn build_lenient(&self) -> (Option<SupplyChainGraph>, Vec<Finding>) {
        let mut findings = Vec::new();
        let at = |location: String, violation: Violation| Finding { location, violation };
        let mut graph = match SupplyChainGraph::new(self.manufacturer.clone()) {
            Ok(g) => g,
            Err(_) => {
                findings.push(at("manufacturer".into(), Violation::MissingManufacturer));
                return (None, findings);
            }
        };
        for (i, actor) in self.actors.iter().enumerate() {
            let violation = match graph.add_actor(actor.clone()) {
                Ok(()) => continue,
                Err(ModelError::DuplicateActor(id)) => Violation::DuplicateActor { actor: id },
                Err(ModelError::KindMismatch { id, found: ActorKind::Manufacturer, .. }) => {
                    Violation::MultipleManufacturers { actor: id }
                }
                Err(other) => unreachable!("add_actor cannot fail with {other}"),
            };
            findings.push(at(format!("actors[{i}]"), violation));
        }
        for (i, edge) in self.edges.iter().enumerate() {
            let violation = match graph.add_edge(edge.clone()) {
                Ok(()) => continue,
                Err(ModelError::SelfLoop(actor)) => Violation::SelfLoop { actor },
                Err(ModelError::UnknownActor(missing)) => Violation::UnknownActor {
                    from: edge.from.clone(),
                    to: edge.to.clone(),
                    missing,
                },
                Err(ModelError::DuplicateEdge(from, to)) => Violation::DuplicateEdge { from, to },
                Err(other) => unreachable!("add_edge cannot fail with {other}"),
            };
            findings.push(at(format!("edges[{i}]"), violation));
        }
        findings.extend(graph.validate().into_iter().map(|v| at("chain".into(), v)));
        (Some(graph), findings)
    }

    /// Every violation, warnings included, in document order.
    pub fn check(&self) -> Vec<Finding> {
        self.build_lenient().1
    }

    /// The graph, unless some error-class violation was found.
    pub fn to_graph(&self) -> Result<SupplyChainGraph, FileError> {
        let (graph, findings) = self.build_lenient();
        let errors: Vec<Finding> = findings.into_iter().filter(|f| f.violation.is_error()).collect();
        match graph {
            Some(g) if errors.is_empty() => Ok(g),
            _ => Err(FileError::Invalid(errors)),
        }
    }
}

/// Parses and validates a chain document in one step.
pub fn load_chain(text: &str) -> Result<SupplyChainGraph, FileError> {
    ChainFile::parse(text)?.to_graph()
}

/// Parses a scenario document: `{"name": ..., "deltas": [...]}`.
pub fn load_scenario(text: &str) -> Result<Scenario, FileError> {
    Ok(serde_json::from_str(text)?)
}
