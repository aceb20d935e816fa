//! Decomposition of a chain into layers around the manufacturer.
//!
//! Upstream layers are found by walking order/supply edges backwards from the
//! manufacturer, downstream layers by walking transport and distribution
//! edges forwards. An actor's depth is its shortest hop count on that walk.
//! The result is rendered as a ragged matrix whose columns run from the
//! deepest supplier layer to the farthest customer layer.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ActorId, ActorKind, EdgeKind, SupplyChainGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Upstream,
    Downstream,
}

/// A layer position: side of the manufacturer plus depth (1 = adjacent).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LayerCoord {
    pub side: Side,
    pub depth: u32,
}

impl LayerCoord {
    /// # Panics
    ///
    /// If `depth` is zero; depth 0 is the manufacturer itself.
    pub fn new(side: Side, depth: u32) -> LayerCoord {
        assert!(depth >= 1, "layer depth starts at 1");
        LayerCoord { side, depth }
    }

    pub fn upstream(depth: u32) -> LayerCoord {
        LayerCoord::new(Side::Upstream, depth)
    }

    pub fn downstream(depth: u32) -> LayerCoord {
        LayerCoord::new(Side::Downstream, depth)
    }

    /// `S<n>` for supplier layers, `D<n>` for downstream layers.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LayerCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.side {
            Side::Upstream => 'S',
            Side::Downstream => 'D',
        };
        f.pad(&format!("{prefix}{}", self.depth))
    }
}

/// Either the manufacturer's origin position or a regular layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LayerSlot {
    Origin,
    Layer(LayerCoord),
}

impl LayerSlot {
    fn depth(self) -> u32 {
        match self {
            LayerSlot::Origin => 0,
            LayerSlot::Layer(c) => c.depth,
        }
    }

    fn side(self) -> Option<Side> {
        match self {
            LayerSlot::Origin => None,
            LayerSlot::Layer(c) => Some(c.side),
        }
    }

    /// True for the same slot or for slots one hop apart on one side.
    pub fn is_adjacent_or_same(self, other: LayerSlot) -> bool {
        match (self, other) {
            (LayerSlot::Origin, LayerSlot::Origin) => true,
            (LayerSlot::Origin, LayerSlot::Layer(c)) | (LayerSlot::Layer(c), LayerSlot::Origin) => c.depth == 1,
            (LayerSlot::Layer(a), LayerSlot::Layer(b)) => a.side == b.side && a.depth.abs_diff(b.depth) <= 1,
        }
    }
}

impl fmt::Display for LayerSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerSlot::Origin => f.pad("M"),
            LayerSlot::Layer(c) => fmt::Display::fmt(c, f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayeringError {
    #[error("SideConflict: {actor} {reason}")]
    SideConflict { actor: ActorId, reason: String },
    #[error("LayeringInconsistency: edge {from} -> {to} {reason}")]
    LayeringInconsistency { from: ActorId, to: ActorId, reason: String },
    #[error("LayeringInconsistency: {0}")]
    AssignmentMismatch(String),
    #[error("Disconnected: {actor} is not reachable from the manufacturer along supply or distribution edges")]
    Disconnected { actor: ActorId },
    #[error("UnknownLayer: {0}")]
    UnknownLayer(LayerCoord),
}

/// Layer of every non-manufacturer actor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerAssignment {
    manufacturer: ActorId,
    coords: BTreeMap<ActorId, LayerCoord>,
    sizes: BTreeMap<LayerCoord, usize>,
}

impl LayerAssignment {
    pub fn manufacturer(&self) -> &ActorId {
        &self.manufacturer
    }

    pub fn coord(&self, id: &ActorId) -> Option<LayerCoord> {
        self.coords.get(id).copied()
    }

    /// Slot of any actor including the manufacturer.
    pub fn slot(&self, id: &ActorId) -> Option<LayerSlot> {
        if *id == self.manufacturer {
            Some(LayerSlot::Origin)
        } else {
            self.coord(id).map(LayerSlot::Layer)
        }
    }

    pub fn coords(&self) -> impl Iterator<Item = (&ActorId, LayerCoord)> {
        self.coords.iter().map(|(id, c)| (id, *c))
    }

    /// Occupied layers with their sizes, in `LayerCoord` order.
    pub fn layer_sizes(&self) -> &BTreeMap<LayerCoord, usize> {
        &self.sizes
    }

    pub fn layer_size(&self, coord: LayerCoord) -> usize {
        self.sizes.get(&coord).copied().unwrap_or(0)
    }

    pub fn layer_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn actor_count(&self) -> usize {
        self.coords.len()
    }

    pub fn contains_layer(&self, coord: LayerCoord) -> bool {
        self.sizes.contains_key(&coord)
    }

    /// Actors of one layer in id order.
    pub fn members(&self, coord: LayerCoord) -> impl Iterator<Item = &ActorId> + '_ {
        self.coords.iter().filter(move |(_, c)| **c == coord).map(|(id, _)| id)
    }

    pub fn max_depth(&self, side: Side) -> u32 {
        self.sizes.keys().filter(|c| c.side == side).map(|c| c.depth).max().unwrap_or(0)
    }

    /// Neighbouring layers of `coord`, shallowest first. Depth-1 layers list
    /// the manufacturer origin as their inner neighbour.
    pub fn adjacent_layers(&self, coord: LayerCoord) -> Result<Vec<LayerSlot>, LayeringError> {
        if !self.contains_layer(coord) {
            return Err(LayeringError::UnknownLayer(coord));
        }
        let mut out = Vec::with_capacity(2);
        if coord.depth == 1 {
            out.push(LayerSlot::Origin);
        } else {
            let inner = LayerCoord::new(coord.side, coord.depth - 1);
            if self.contains_layer(inner) {
                out.push(LayerSlot::Layer(inner));
            }
        }
        let outer = LayerCoord::new(coord.side, coord.depth + 1);
        if self.contains_layer(outer) {
            out.push(LayerSlot::Layer(outer));
        }
        Ok(out)
    }

    /// Checks that this assignment covers exactly the non-manufacturer
    /// actors of `graph`.
    pub fn check_against(&self, graph: &SupplyChainGraph) -> Result<(), LayeringError> {
        if self.manufacturer != *graph.manufacturer_id() {
            return Err(LayeringError::AssignmentMismatch(format!(
                "assignment is rooted at {}, graph manufacturer is {}",
                self.manufacturer,
                graph.manufacturer_id()
            )));
        }
        for actor in graph.actors() {
            if actor.id != self.manufacturer && !self.coords.contains_key(&actor.id) {
                return Err(LayeringError::AssignmentMismatch(format!("{} has no layer", actor.id)));
            }
        }
        if let Some(extra) = self.coords.keys().find(|id| !graph.contains_actor(id)) {
            return Err(LayeringError::AssignmentMismatch(format!("{extra} is not in the graph")));
        }
        Ok(())
    }

    /// Columns ordered deepest supplier layer first, then downstream layers
    /// outwards. Cells within a column are sorted by actor id.
    pub fn build_matrix(&self) -> SupplyChainMatrix {
        let mut columns: Vec<MatrixColumn> = Vec::with_capacity(self.sizes.len());
        let upstream = self.sizes.keys().filter(|c| c.side == Side::Upstream).rev();
        let downstream = self.sizes.keys().filter(|c| c.side == Side::Downstream);
        for &coord in upstream.chain(downstream) {
            columns.push(MatrixColumn {
                coord,
                actors: self.members(coord).cloned().collect(),
            });
        }
        SupplyChainMatrix {
            manufacturer: self.manufacturer.clone(),
            columns,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixColumn {
    pub coord: LayerCoord,
    pub actors: Vec<ActorId>,
}

/// Ragged matrix of actor ids, one column per layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupplyChainMatrix {
    pub manufacturer: ActorId,
    pub columns: Vec<MatrixColumn>,
}

impl SupplyChainMatrix {
    pub fn cell_count(&self) -> usize {
        self.columns.iter().map(|c| c.actors.len()).sum()
    }

    pub fn height(&self) -> usize {
        self.columns.iter().map(|c| c.actors.len()).max().unwrap_or(0)
    }

    pub fn upstream_columns(&self) -> impl Iterator<Item = &MatrixColumn> {
        self.columns.iter().filter(|c| c.coord.side == Side::Upstream)
    }

    pub fn downstream_columns(&self) -> impl Iterator<Item = &MatrixColumn> {
        self.columns.iter().filter(|c| c.coord.side == Side::Downstream)
    }

    /// Header such as `S3 S2 S1 | M | D1 D2 D3`.
    pub fn header(&self) -> String {
        let up: Vec<String> = self.upstream_columns().map(|c| c.coord.label()).collect();
        let down: Vec<String> = self.downstream_columns().map(|c| c.coord.label()).collect();
        let mut parts = Vec::new();
        if !up.is_empty() {
            parts.push(up.join(" "));
        }
        parts.push("M".to_owned());
        if !down.is_empty() {
            parts.push(down.join(" "));
        }
        parts.join(" | ")
    }
}

/// Assigns every non-manufacturer actor its layer.
pub fn assign_layers(graph: &SupplyChainGraph) -> Result<LayerAssignment, LayeringError> {
    let root = graph.manufacturer_id();

    let mut suppliers_of: BTreeMap<&ActorId, Vec<&ActorId>> = BTreeMap::new();
    let mut ships_to: BTreeMap<&ActorId, Vec<&ActorId>> = BTreeMap::new();
    for edge in graph.edges() {
        match edge.kind {
            EdgeKind::OrderSupply => suppliers_of.entry(&edge.to).or_default().push(&edge.from),
            EdgeKind::Transport | EdgeKind::Distribution => ships_to.entry(&edge.from).or_default().push(&edge.to),
        }
    }
    let up = bfs_depths(root, &suppliers_of);
    let down = bfs_depths(root, &ships_to);

    let mut coords = BTreeMap::new();
    for actor in graph.actors() {
        if actor.id == *root {
            continue;
        }
        let coord = match (up.get(&actor.id), down.get(&actor.id)) {
            (Some(_), Some(_)) => {
                return Err(LayeringError::SideConflict {
                    actor: actor.id.clone(),
                    reason: "is reachable both upstream and downstream".into(),
                })
            }
            (Some(&d), None) => LayerCoord::upstream(d),
            (None, Some(&d)) => LayerCoord::downstream(d),
            (None, None) => return Err(LayeringError::Disconnected { actor: actor.id.clone() }),
        };
        let expected = match actor.kind {
            ActorKind::Supplier => Side::Upstream,
            ActorKind::Warehouse | ActorKind::Customer => Side::Downstream,
            ActorKind::Manufacturer => unreachable!("graph holds a single manufacturer"),
        };
        if coord.side != expected {
            return Err(LayeringError::SideConflict {
                actor: actor.id.clone(),
                reason: format!("is a {} but sits in layer {coord}", actor.kind),
            });
        }
        coords.insert(actor.id.clone(), coord);
    }

    let slot = |id: &ActorId| {
        if id == root {
            LayerSlot::Origin
        } else {
            LayerSlot::Layer(coords[id])
        }
    };
    for edge in graph.edges() {
        let (from, to) = (slot(&edge.from), slot(&edge.to));
        let wanted = match edge.kind {
            EdgeKind::OrderSupply => Side::Upstream,
            EdgeKind::Transport | EdgeKind::Distribution => Side::Downstream,
        };
        let inconsistent = |reason: String| LayeringError::LayeringInconsistency {
            from: edge.from.clone(),
            to: edge.to.clone(),
            reason,
        };
        for s in [from, to] {
            if s.side().is_some_and(|side| side != wanted) {
                return Err(inconsistent(format!("({}) crosses to the other side of the manufacturer", edge.kind)));
            }
        }
        let same_layer = from == to && from != LayerSlot::Origin;
        let (outer, inner) = match wanted {
            Side::Upstream => (from, to),
            Side::Downstream => (to, from),
        };
        if !same_layer && outer.depth() != inner.depth() + 1 {
            return Err(inconsistent(format!(
                "({}) joins {from} and {to}, which are not adjacent layers",
                edge.kind
            )));
        }
    }

    if let Some((from, to)) = find_cycle_edge(graph) {
        return Err(LayeringError::LayeringInconsistency {
            from,
            to,
            reason: "lies on a directed cycle".into(),
        });
    }

    let mut sizes = BTreeMap::new();
    for c in coords.values() {
        *sizes.entry(*c).or_insert(0) += 1;
    }
    Ok(LayerAssignment {
        manufacturer: root.clone(),
        coords,
        sizes,
    })
}

fn bfs_depths<'a>(root: &'a ActorId, next: &BTreeMap<&'a ActorId, Vec<&'a ActorId>>) -> BTreeMap<ActorId, u32> {
    let mut depth: BTreeMap<&ActorId, u32> = BTreeMap::new();
    let mut queue = VecDeque::new();
    depth.insert(root, 0);
    queue.push_back(root);
    while let Some(id) = queue.pop_front() {
        let d = depth[id];
        for &n in next.get(id).into_iter().flatten() {
            if !depth.contains_key(n) {
                depth.insert(n, d + 1);
                queue.push_back(n);
            }
        }
    }
    depth.remove(root);
    depth.into_iter().map(|(k, v)| (k.clone(), v)).collect()
}

/// Kahn's algorithm over the full directed edge set; returns an edge whose
/// endpoints both remain once no more zero-in-degree nodes exist.
fn find_cycle_edge(graph: &SupplyChainGraph) -> Option<(ActorId, ActorId)> {
    let mut indegree: BTreeMap<&ActorId, usize> = graph.actors().map(|a| (&a.id, 0)).collect();
    for e in graph.edges() {
        *indegree.get_mut(&e.to)? += 1;
    }
    let mut queue: VecDeque<&ActorId> = indegree.iter().filter(|(_, d)| **d == 0).map(|(id, _)| *id).collect();
    let mut removed = BTreeSet::new();
    while let Some(id) = queue.pop_front() {
        removed.insert(id);
        for e in graph.outgoing(id) {
            let d = indegree.get_mut(&e.to)?;
            *d -= 1;
            if *d == 0 {
                queue.push_back(&e.to);
            }
        }
    }
    graph
        .edges()
        .find(|e| !removed.contains(&e.from) && !removed.contains(&e.to))
        .map(|e| e.key())
}
