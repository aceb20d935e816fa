//! Layered supply-chain cost model.
//!
//! A chain is a directed graph of suppliers, one manufacturer, warehouses and
//! customers. [`layering`] arranges it into layers on both sides of the
//! manufacturer, [`cost`] evaluates the total chain cost, [`agents`]
//! reproduces the same evaluation through a round-based agent protocol, and
//! [`scenario`] compares a baseline with an edited variant.

pub mod agents;
pub mod cost;
pub mod files;
pub mod layering;
pub mod model;
pub mod money;
pub mod scenario;
pub mod synth;

pub use agents::{AgentError, AgentRole, AgentSystem, Collection, Dimensioning, Envelope, MessagePayload};
pub use cost::{objective, CostBreakdown};
pub use layering::{assign_layers, LayerAssignment, LayerCoord, LayerSlot, LayeringError, Side, SupplyChainMatrix};
pub use model::{Actor, ActorId, ActorKind, Capabilities, Edge, EdgeKind, ModelError, SupplyChainGraph, Violation};
pub use money::{Money, SignedMoney};
pub use scenario::{apply, compare, ComparisonReport, Decision, Delta, Scenario, ScenarioError};
