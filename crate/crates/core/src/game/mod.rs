//! Link formation and severance rules, pairwise stability and dynamics.
//!
//! A link forms only if both endpoints strictly gain from it; either endpoint
//! may sever a link alone if that strictly lowers its own cost.
//!
//! Comparing two infinite costs is undefined in plain arithmetic. Such
//! comparisons are resolved lexicographically: fewer unreachable peers is
//! better, and at equal counts the cost over the reachable peers decides.

mod dynamics;
mod enumerate;
mod stability;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dynamics::{
    best_response_dynamics, DynamicsOptions, DynamicsOutcome, DynamicsTrace, ScanOrder, TraceStep,
};
pub use enumerate::{brute_force_stable_set, enumeration_size, DEFAULT_MAX_NODES};
pub use stability::{is_pairwise_stable, AdditionViolation, SeveranceViolation, StabilityReport};

pub(crate) use stability::is_stable_graph;

use crate::cost::{CostBreakdown, CostError, CostModel, Graph};
use crate::model::{Endpoint, Link, ModelError, NodeId, Scenario, Topology};
use crate::scalar::Scalar;
use crate::value::CostDelta;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError<T: Scalar = f64> {
    /// Both states are infinite; carries the data needed to rank them.
    #[error("both states have infinite cost ({0:?})")]
    Incomparable(Incomparable<T>),
    #[error("link {0} is already present")]
    LinkPresent(Link),
    #[error("link {0} is not present")]
    LinkAbsent(Link),
    #[error("node {0} is not an endpoint of link {1}")]
    NotEndpoint(NodeId, Link),
    #[error("scenario has {nodes} nodes, enumeration is capped at {cap}")]
    TooLarge { nodes: usize, cap: usize },
    #[error(transparent)]
    Cost(#[from] CostError),
}

impl<T: Scalar> From<ModelError> for GameError<T> {
    fn from(e: ModelError) -> Self {
        GameError::Cost(CostError::Model(e))
    }
}

/// Two infinite-cost states, compared by reachability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Incomparable<T = f64> {
    pub before_unreachable: usize,
    pub after_unreachable: usize,
    pub reachable_delta: T,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub over_budget: bool,
}

/// A cost change as seen by one node, including the resolved
/// infinite-versus-infinite case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Deviation<T = f64> {
    Delta(CostDelta<T>),
    Incomparable(Incomparable<T>),
}

impl<T: Scalar> Deviation<T> {
    pub fn between(before: &CostBreakdown<T>, after: &CostBreakdown<T>) -> Self {
        match after.total.delta_from(before.total) {
            Ok(d) => Deviation::Delta(d),
            Err(_) => Deviation::Incomparable(Incomparable {
                before_unreachable: before.unreachable_peers,
                after_unreachable: after.unreachable_peers,
                reachable_delta: after.reachable_total - before.reachable_total,
                over_budget: before.over_budget || after.over_budget,
            }),
        }
    }

    /// Strict improvement for the node.
    pub fn improves(&self) -> bool {
        match self {
            Deviation::Delta(d) => d.is_improvement(),
            Deviation::Incomparable(inc) => {
                !inc.over_budget
                    && (inc.after_unreachable < inc.before_unreachable
                        || (inc.after_unreachable == inc.before_unreachable
                            && inc.reachable_delta < T::zero()))
            }
        }
    }

    /// Ordering from most to least favourable change.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        fn key<T: Scalar>(d: &Deviation<T>) -> (u8, i64, T) {
            match *d {
                Deviation::Delta(CostDelta::NegInfinite) => (0, 0, T::zero()),
                Deviation::Incomparable(inc) if !inc.over_budget => (
                    1,
                    inc.after_unreachable as i64 - inc.before_unreachable as i64,
                    inc.reachable_delta,
                ),
                Deviation::Delta(CostDelta::Finite(v)) => (2, 0, v),
                Deviation::Incomparable(_) => (3, 0, T::zero()),
                Deviation::Delta(CostDelta::Infinite) => (4, 0, T::zero()),
            }
        }
        let (a, b) = (key(self), key(other));
        a.0.cmp(&b.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.partial_cmp(&b.2).unwrap_or(Ordering::Equal))
    }

    fn into_result(self) -> Result<CostDelta<T>, GameError<T>> {
        match self {
            Deviation::Delta(d) => Ok(d),
            Deviation::Incomparable(inc) => Err(GameError::Incomparable(inc)),
        }
    }
}

/// An applied change to the topology.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move<T = f64> {
    Add {
        link: Link,
        delta_a: Deviation<T>,
        delta_b: Deviation<T>,
    },
    Remove {
        link: Link,
        initiator: NodeId,
        delta: Deviation<T>,
    },
}

impl<T: Scalar> Move<T> {
    pub fn link(&self) -> &Link {
        match self {
            Move::Add { link, .. } | Move::Remove { link, .. } => link,
        }
    }

    pub fn apply(&self, topology: &mut Topology) -> Result<(), ModelError> {
        match self {
            Move::Add { link, .. } => topology.insert(*link),
            Move::Remove { link, .. } => topology.remove(link),
        }
    }
}

/// Why a proposed link was not formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    /// No compatible interfaces, or out of power budget.
    Infeasible,
    AlreadyLinked,
    /// The proposing node does not strictly gain.
    InitiatorDeclines,
    /// The peer does not strictly gain.
    PeerDeclines,
}

pub(crate) fn link_from_indices<T: Scalar>(
    scenario: &Scenario<T>,
    a: usize,
    ra: usize,
    b: usize,
    rb: usize,
) -> Link {
    let ids = scenario.nodes();
    Link::new(Endpoint::new(ids[a].id, ra), Endpoint::new(ids[b].id, rb))
        .expect("distinct node indices")
}

pub(crate) fn topology_from_graph<T: Scalar>(scenario: &Scenario<T>, g: &Graph) -> Topology {
    let mut t = Topology::new();
    for (a, edges) in g.adj.iter().enumerate() {
        for e in edges.iter().filter(|e| e.peer > a) {
            t.insert(link_from_indices(scenario, a, e.local, e.peer, e.remote))
                .expect("graph has one edge per pair");
        }
    }
    t
}

fn endpoint_index<T: Scalar>(
    model: &CostModel<'_, T>,
    link: &Link,
    node: NodeId,
) -> Result<usize, GameError<T>> {
    if !link.touches(node) {
        return Err(GameError::NotEndpoint(node, *link));
    }
    Ok(model.index(node)?)
}

/// Change in `node`'s cost if `link` were added.
pub fn evaluate_add<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
    node: NodeId,
    link: &Link,
) -> Result<Deviation<T>, GameError<T>> {
    if topology.between(link.a().node, link.b().node).is_some() {
        return Err(GameError::LinkPresent(*link));
    }
    scenario.link(link.a(), link.b())?;
    let model = CostModel::new(scenario);
    let i = endpoint_index(&model, link, node)?;
    let g = model.graph(topology)?;
    let before = model.breakdown(&g, i);
    let mut g2 = g;
    let (a, b) = (model.index(link.a().node)?, model.index(link.b().node)?);
    g2.add_edge(a, link.a().interface, b, link.b().interface);
    Ok(Deviation::between(&before, &model.breakdown(&g2, i)))
}

/// Change in `node`'s cost if `link` were removed.
pub fn evaluate_remove<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
    node: NodeId,
    link: &Link,
) -> Result<Deviation<T>, GameError<T>> {
    if !topology.contains(link) {
        return Err(GameError::LinkAbsent(*link));
    }
    let model = CostModel::new(scenario);
    let i = endpoint_index(&model, link, node)?;
    let g = model.graph(topology)?;
    let before = model.breakdown(&g, i);
    let mut g2 = g;
    g2.remove_edge(model.index(link.a().node)?, model.index(link.b().node)?);
    Ok(Deviation::between(&before, &model.breakdown(&g2, i)))
}

/// `C(node, G + link) - C(node, G)`. Infinite-to-infinite changes are
/// returned as [`GameError::Incomparable`].
pub fn delta_cost_add<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
    node: NodeId,
    link: &Link,
) -> Result<CostDelta<T>, GameError<T>> {
    evaluate_add(scenario, topology, node, link)?.into_result()
}

/// `C(node, G - link) - C(node, G)`.
pub fn delta_cost_remove<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
    node: NodeId,
    link: &Link,
) -> Result<CostDelta<T>, GameError<T>> {
    evaluate_remove(scenario, topology, node, link)?.into_result()
}

/// Mutual-consent check for a specific interface pairing.
pub fn propose_add<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
    initiator: Endpoint,
    peer: Endpoint,
) -> Result<Move<T>, Rejection> {
    let link = scenario
        .link(initiator, peer)
        .map_err(|_| Rejection::Infeasible)?;
    let model = CostModel::new(scenario);
    let (Ok(i), Ok(j)) = (model.index(initiator.node), model.index(peer.node)) else {
        return Err(Rejection::Infeasible);
    };
    if !model.feasible(i, initiator.interface, j, peer.interface) {
        return Err(Rejection::Infeasible);
    }
    if topology.between(initiator.node, peer.node).is_some() {
        return Err(Rejection::AlreadyLinked);
    }
    let g = model.graph(topology).map_err(|_| Rejection::Infeasible)?;
    let mut g2 = g.clone();
    g2.add_edge(i, initiator.interface, j, peer.interface);
    let di = Deviation::between(&model.breakdown(&g, i), &model.breakdown(&g2, i));
    let dj = Deviation::between(&model.breakdown(&g, j), &model.breakdown(&g2, j));
    if !di.improves() {
        return Err(Rejection::InitiatorDeclines);
    }
    if !dj.improves() {
        return Err(Rejection::PeerDeclines);
    }
    let (delta_a, delta_b) = if link.a().node == initiator.node {
        (di, dj)
    } else {
        (dj, di)
    };
    Ok(Move::Add {
        link,
        delta_a,
        delta_b,
    })
}
