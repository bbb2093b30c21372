//! Domain types: nodes, radio interfaces, links and topologies.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::validate::{validate_scenario, ValidationReport};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for NodeId {
    fn from(v: u32) -> Self {
        NodeId(v)
    }
}

/// Physical and bandwidth parameters of one radio interface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfaceSpec<T = f64> {
    /// Free-form technology label such as `"wlan"` or `"zwave"`.
    pub kind: String,
    pub frequency_hz: T,
    pub max_bitrate_bps: T,
    pub max_tx_power_w: T,
    pub rx_sensitivity_w: T,
    /// Linear (not dB) antenna gain.
    pub antenna_gain: T,
}

impl<T: Scalar> InterfaceSpec<T> {
    /// Two interfaces can talk iff they share technology and channel.
    pub fn compatible_with(&self, other: &Self) -> bool {
        self.kind == other.kind && self.frequency_hz == other.frequency_hz
    }
}

/// A player of the formation game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node<T = f64> {
    pub id: NodeId,
    /// `[x, y]` in meters.
    pub position: [T; 2],
    /// Ordered; the position in this list is the interface identity.
    pub interfaces: Vec<InterfaceSpec<T>>,
    pub min_required_bitrate_bps: T,
    pub energy_weight: T,
    pub internet_connected: bool,
}

impl<T: Scalar> Node<T> {
    pub fn distance_to(&self, other: &Self) -> T {
        let dx = self.position[0] - other.position[0];
        let dy = self.position[1] - other.position[1];
        dx.hypot(dy)
    }

    pub fn interface(&self, index: usize) -> Option<&InterfaceSpec<T>> {
        self.interfaces.get(index)
    }
}

/// One side of a link: a node and the index of the interface it uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Endpoint {
    pub node: NodeId,
    pub interface: usize,
}

impl Endpoint {
    pub fn new(node: impl Into<NodeId>, interface: usize) -> Self {
        Endpoint {
            node: node.into(),
            interface,
        }
    }
}

/// An undirected link, stored with `a.node < b.node`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Link {
    a: Endpoint,
    b: Endpoint,
}

impl Link {
    /// Builds a canonical link. Only the self-loop rule is checked here;
    /// interface compatibility needs the scenario, see [`Scenario::link`].
    pub fn new(x: Endpoint, y: Endpoint) -> Result<Self, ModelError> {
        match x.node.cmp(&y.node) {
            std::cmp::Ordering::Less => Ok(Link { a: x, b: y }),
            std::cmp::Ordering::Greater => Ok(Link { a: y, b: x }),
            std::cmp::Ordering::Equal => Err(ModelError::SelfLoop(x.node)),
        }
    }

    pub fn a(&self) -> Endpoint {
        self.a
    }

    pub fn b(&self) -> Endpoint {
        self.b
    }

    pub fn pair(&self) -> (NodeId, NodeId) {
        (self.a.node, self.b.node)
    }

    pub fn touches(&self, node: NodeId) -> bool {
        self.a.node == node || self.b.node == node
    }

    /// The endpoint belonging to `node`, if any.
    pub fn endpoint_of(&self, node: NodeId) -> Option<Endpoint> {
        if self.a.node == node {
            Some(self.a)
        } else if self.b.node == node {
            Some(self.b)
        } else {
            None
        }
    }

    /// The far endpoint as seen from `node`.
    pub fn opposite(&self, node: NodeId) -> Option<Endpoint> {
        if self.a.node == node {
            Some(self.b)
        } else if self.b.node == node {
            Some(self.a)
        } else {
            None
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}-{}/{}",
            self.a.node, self.a.interface, self.b.node, self.b.interface
        )
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkWire {
    a: Endpoint,
    b: Endpoint,
}

impl<'de> Deserialize<'de> for Link {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = LinkWire::deserialize(deserializer)?;
        Link::new(wire.a, wire.b).map_err(serde::de::Error::custom)
    }
}

/// The link graph. At most one link per unordered node pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Topology {
    links: BTreeMap<(NodeId, NodeId), Link>,
}

impl Topology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_links(links: impl IntoIterator<Item = Link>) -> Result<Self, ModelError> {
        let mut topology = Topology::new();
        for link in links {
            topology.insert(link)?;
        }
        Ok(topology)
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Links in canonical order.
    pub fn links(&self) -> impl Iterator<Item = &Link> + '_ {
        self.links.values()
    }

    fn key(a: NodeId, b: NodeId) -> (NodeId, NodeId) {
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn between(&self, a: NodeId, b: NodeId) -> Option<&Link> {
        self.links.get(&Self::key(a, b))
    }

    pub fn contains(&self, link: &Link) -> bool {
        self.links.get(&link.pair()) == Some(link)
    }

    pub fn insert(&mut self, link: Link) -> Result<(), ModelError> {
        let (a, b) = link.pair();
        if self.links.contains_key(&(a, b)) {
            return Err(ModelError::DuplicatePair(a, b));
        }
        self.links.insert((a, b), link);
        Ok(())
    }

    pub fn remove(&mut self, link: &Link) -> Result<(), ModelError> {
        if !self.contains(link) {
            return Err(ModelError::MissingLink(*link));
        }
        self.links.remove(&link.pair());
        Ok(())
    }

    /// Copy of `self` with `link` added.
    pub fn with_link(&self, link: Link) -> Result<Self, ModelError> {
        let mut next = self.clone();
        next.insert(link)?;
        Ok(next)
    }

    /// Copy of `self` with `link` removed.
    pub fn without_link(&self, link: &Link) -> Result<Self, ModelError> {
        let mut next = self.clone();
        next.remove(link)?;
        Ok(next)
    }

    pub fn links_of(&self, node: NodeId) -> impl Iterator<Item = &Link> + '_ {
        self.links.values().filter(move |l| l.touches(node))
    }

    pub fn degree(&self, node: NodeId) -> usize {
        self.links_of(node).count()
    }

    /// An interface is in use iff some link references it.
    pub fn interface_in_use(&self, endpoint: Endpoint) -> bool {
        self.links_of(endpoint.node)
            .any(|l| l.endpoint_of(endpoint.node) == Some(endpoint))
    }

    /// SHA-256 over the canonical link list, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        for l in self.links() {
            hasher.update(
                format!(
                    "{} {} {} {}\n",
                    l.a.node, l.a.interface, l.b.node, l.b.interface
                )
                .as_bytes(),
            );
        }
        hex::encode(hasher.finalize())
    }

    /// Checks every link against the scenario's nodes and interfaces.
    pub fn validate<T: Scalar>(&self, scenario: &Scenario<T>) -> Result<(), ModelError> {
        for link in self.links() {
            scenario.link(link.a, link.b)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TopologyWire {
    links: Vec<Link>,
}

impl Serialize for Topology {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        TopologyWire {
            links: self.links().copied().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Topology {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = TopologyWire::deserialize(deserializer)?;
        Topology::from_links(wire.links).map_err(serde::de::Error::custom)
    }
}

/// How equal-cost choices are resolved.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Lowest interface index pair first, then lowest node id.
    #[default]
    LowestIndex,
}

fn one<T: Scalar>() -> T {
    T::one()
}

fn two<T: Scalar>() -> T {
    T::lit(2.0)
}

fn light<T: Scalar>() -> T {
    T::lit(SPEED_OF_LIGHT_M_S)
}

/// Game-wide parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Scalar"))]
pub struct GameConfig<T = f64> {
    /// Weight on hop distance to internet-connected nodes; at least 1.
    pub gamma: T,
    /// Per-link congestion constant.
    #[serde(default = "one")]
    pub alpha: T,
    /// Hard cap on pairwise hop distance.
    pub h_max: u32,
    #[serde(default = "two")]
    pub path_loss_exponent: T,
    #[serde(default = "light")]
    pub speed_of_light_m_s: T,
    #[serde(default)]
    pub tie_break: TieBreak,
}

impl<T: Scalar> GameConfig<T> {
    pub fn new(gamma: T, h_max: u32) -> Self {
        GameConfig {
            gamma,
            alpha: T::one(),
            h_max,
            path_loss_exponent: T::lit(2.0),
            speed_of_light_m_s: T::lit(SPEED_OF_LIGHT_M_S),
            tie_break: TieBreak::LowestIndex,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("link endpoints are both node {0}")]
    SelfLoop(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {node} has no interface {index}")]
    InterfaceOutOfRange { node: NodeId, index: usize },
    #[error("interfaces {a:?} and {b:?} differ in kind or frequency")]
    IncompatibleInterfaces { a: Endpoint, b: Endpoint },
    #[error("nodes {0} and {1} are already linked")]
    DuplicatePair(NodeId, NodeId),
    #[error("link {0} is not in the topology")]
    MissingLink(Link),
    #[error("invalid scenario: {0}")]
    Invalid(ValidationReport),
}

/// A validated node set together with its game configuration.
///
/// Nodes are kept sorted by id; every "ascending order" in the crate refers
/// to this order.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario<T = f64> {
    config: GameConfig<T>,
    nodes: Vec<Node<T>>,
    index: BTreeMap<NodeId, usize>,
}

impl<T: Scalar> Scenario<T> {
    pub fn new(config: GameConfig<T>, mut nodes: Vec<Node<T>>) -> Result<Self, ValidationReport> {
        let report = validate_scenario(&nodes, &config);
        if !report.is_empty() {
            return Err(report);
        }
        nodes.sort_by_key(|n| n.id);
        let index = nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();
        Ok(Scenario {
            config,
            nodes,
            index,
        })
    }

    pub fn config(&self) -> &GameConfig<T> {
        &self.config
    }

    /// Same nodes under a different configuration.
    pub fn with_config(&self, config: GameConfig<T>) -> Result<Self, ValidationReport> {
        Scenario::new(config, self.nodes.clone())
    }

    pub fn with_gamma(&self, gamma: T) -> Result<Self, ValidationReport> {
        let mut config = self.config.clone();
        config.gamma = gamma;
        self.with_config(config)
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node<T>> {
        self.index_of(id).map(|i| &self.nodes[i])
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().map(|n| n.id)
    }

    pub fn ic_nodes(&self) -> impl Iterator<Item = &Node<T>> + '_ {
        self.nodes.iter().filter(|n| n.internet_connected)
    }

    pub fn non_ic_nodes(&self) -> impl Iterator<Item = &Node<T>> + '_ {
        self.nodes.iter().filter(|n| !n.internet_connected)
    }

    pub fn interface(&self, endpoint: Endpoint) -> Result<&InterfaceSpec<T>, ModelError> {
        let node = self
            .node(endpoint.node)
            .ok_or(ModelError::UnknownNode(endpoint.node))?;
        node.interface(endpoint.interface)
            .ok_or(ModelError::InterfaceOutOfRange {
                node: endpoint.node,
                index: endpoint.interface,
            })
    }

    /// Builds a link after checking that both interfaces exist and are
    /// compatible. Does not check the power budget.
    pub fn link(&self, x: Endpoint, y: Endpoint) -> Result<Link, ModelError> {
        let link = Link::new(x, y)?;
        let ix = self.interface(x)?;
        let iy = self.interface(y)?;
        if !ix.compatible_with(iy) {
            return Err(ModelError::IncompatibleInterfaces {
                a: link.a,
                b: link.b,
            });
        }
        Ok(link)
    }

    /// Interface index pairs `(r_a, r_b)` shared by two nodes, lowest first.
    pub fn common_interfaces(&self, a: NodeId, b: NodeId) -> Vec<(usize, usize)> {
        let (Some(na), Some(nb)) = (self.node(a), self.node(b)) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for (ra, ia) in na.interfaces.iter().enumerate() {
            for (rb, ib) in nb.interfaces.iter().enumerate() {
                if ia.compatible_with(ib) {
                    out.push((ra, rb));
                }
            }
        }
        out
    }
}
