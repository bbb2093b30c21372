//! Node cost: link costs, hop distances and the bridging coefficient.
//!
//! For node `i` in topology `G`:
//!
//! ```text
//! C_i = sum_links alpha * n_r * rho_i * sigma / beta_r
//!     + gamma * sum_{j in IC, j != i} h(i, j)
//!     + sum_{k in non-IC, k != i} h(i, k)
//!     + B_i
//! ```
//!
//! `n_r` is the number of links on the interface carrying the link, `sigma`
//! is the minimum transmit power for that link and `beta_r` the
//! bitrate-to-requirement ratio of the interface. A peer that is unreachable
//! or further than `h_max` hops away makes the cost infinite.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::model::{InterfaceSpec, ModelError, Node, NodeId, Scenario, Topology};
use crate::propagation::link_budget;
use crate::scalar::Scalar;
use crate::value::CostValue;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CostError {
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Ratio of an interface's bitrate to its owner's minimum requirement.
pub fn beta<T: Scalar>(interface: &InterfaceSpec<T>, node: &Node<T>) -> T {
    interface.max_bitrate_bps / node.min_required_bitrate_bps
}

/// Per-node decomposition of the cost function.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostBreakdown<T = f64> {
    pub link_cost_total: CostValue<T>,
    pub ic_distance_term: CostValue<T>,
    pub non_ic_distance_term: CostValue<T>,
    pub bridging: T,
    pub total: CostValue<T>,
    /// Peers that are disconnected or beyond `h_max`.
    pub unreachable_peers: usize,
    /// Cost restricted to reachable peers; equals `total` when finite.
    pub reachable_total: T,
    /// Some incident link exceeds a power budget.
    pub over_budget: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Adj {
    pub peer: usize,
    pub local: usize,
    pub remote: usize,
}

/// Index-based adjacency view of a topology.
#[derive(Clone, Debug)]
pub(crate) struct Graph {
    pub adj: Vec<Vec<Adj>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].iter().any(|e| e.peer == b)
    }

    /// Adjacency lists stay sorted by peer so that every way of reaching the
    /// same topology sums costs in the same order.
    pub fn add_edge(&mut self, a: usize, ra: usize, b: usize, rb: usize) {
        let pa = self.adj[a].partition_point(|e| e.peer < b);
        self.adj[a].insert(
            pa,
            Adj {
                peer: b,
                local: ra,
                remote: rb,
            },
        );
        let pb = self.adj[b].partition_point(|e| e.peer < a);
        self.adj[b].insert(
            pb,
            Adj {
                peer: a,
                local: rb,
                remote: ra,
            },
        );
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a].retain(|e| e.peer != b);
        self.adj[b].retain(|e| e.peer != a);
    }

    /// BFS hop counts from `src`.
    pub fn hops_from(&self, src: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.adj.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for e in &self.adj[u] {
                if dist[e.peer].is_none() {
                    dist[e.peer] = Some(du + 1);
                    queue.push_back(e.peer);
                }
            }
        }
        dist
    }

    pub fn bridging<T: Scalar>(&self, i: usize) -> T {
        let d = self.degree(i);
        if d == 0 {
            return T::zero();
        }
        let denom = self.adj[i].iter().fold(T::zero(), |acc, e| {
            acc + T::count(self.degree(e.peer)).recip()
        });
        T::count(d).recip() / denom
    }
}

/// Cost evaluator for one scenario with power budgets precomputed.
pub(crate) struct CostModel<'s, T: Scalar> {
    scenario: &'s Scenario<T>,
    width: usize,
    // sigma[(i, j, ri, rj)] = power i needs on ri to reach j's rj.
    sigma: Vec<Option<(T, bool)>>,
}

impl<'s, T: Scalar> CostModel<'s, T> {
    pub fn new(scenario: &'s Scenario<T>) -> Self {
        let n = scenario.len();
        let width = scenario
            .nodes()
            .iter()
            .map(|n| n.interfaces.len())
            .max()
            .unwrap_or(0);
        let mut sigma = vec![None; n * n * width * width];
        let config = scenario.config();
        for (i, ni) in scenario.nodes().iter().enumerate() {
            for (j, nj) in scenario.nodes().iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = ni.distance_to(nj);
                for (ri, ii) in ni.interfaces.iter().enumerate() {
                    for (rj, ij) in nj.interfaces.iter().enumerate() {
                        if !ii.compatible_with(ij) {
                            continue;
                        }
                        let budget = link_budget(ii, ij, d, config);
                        if let CostValue::Finite(p) = budget.required_tx_power_w {
                            sigma[Self::slot(n, width, i, j, ri, rj)] = Some((p, budget.feasible));
                        }
                    }
                }
            }
        }
        CostModel {
            scenario,
            width,
            sigma,
        }
    }

    fn slot(n: usize, width: usize, i: usize, j: usize, ri: usize, rj: usize) -> usize {
        ((i * n + j) * width + ri) * width + rj
    }

    pub fn scenario(&self) -> &'s Scenario<T> {
        self.scenario
    }

    /// Required power and budget feasibility for `i` transmitting to `j`.
    pub fn sigma(&self, i: usize, ri: usize, j: usize, rj: usize) -> Option<(T, bool)> {
        if ri >= self.width || rj >= self.width {
            return None;
        }
        self.sigma[Self::slot(self.scenario.len(), self.width, i, j, ri, rj)]
    }

    pub fn feasible(&self, i: usize, ri: usize, j: usize, rj: usize) -> bool {
        matches!(self.sigma(i, ri, j, rj), Some((_, true)))
            && matches!(self.sigma(j, rj, i, ri), Some((_, true)))
    }

    /// Feasible interface pairs between two node indices, lowest first.
    pub fn pairings(&self, i: usize, j: usize) -> Vec<(usize, usize)> {
        let ni = &self.scenario.nodes()[i];
        let nj = &self.scenario.nodes()[j];
        let mut out = Vec::new();
        for ri in 0..ni.interfaces.len() {
            for rj in 0..nj.interfaces.len() {
                if self.feasible(i, ri, j, rj) {
                    out.push((ri, rj));
                }
            }
        }
        out
    }

    /// One link term `alpha * n * rho_i * sigma / beta` at congestion `n`.
    pub fn link_term(
        &self,
        i: usize,
        ri: usize,
        j: usize,
        rj: usize,
        congestion: usize,
    ) -> CostValue<T> {
        let node = &self.scenario.nodes()[i];
        match self.sigma(i, ri, j, rj) {
            Some((p, true)) => {
                let b = beta(&node.interfaces[ri], node);
                CostValue::Finite(
                    self.scenario.config().alpha * T::count(congestion) * node.energy_weight * p
                        / b,
                )
            }
            _ => CostValue::Infinite,
        }
    }

    pub fn graph(&self, topology: &Topology) -> Result<Graph, CostError> {
        let mut g = Graph::empty(self.scenario.len());
        for link in topology.links() {
            self.scenario.link(link.a(), link.b())?;
            let a = self.index(link.a().node)?;
            let b = self.index(link.b().node)?;
            g.add_edge(a, link.a().interface, b, link.b().interface);
        }
        Ok(g)
    }

    pub fn index(&self, id: NodeId) -> Result<usize, CostError> {
        self.scenario.index_of(id).ok_or(CostError::UnknownNode(id))
    }

    pub fn link_cost(&self, g: &Graph, i: usize) -> CostValue<T> {
        let node = &self.scenario.nodes()[i];
        let mut per_interface = vec![0usize; node.interfaces.len()];
        for e in &g.adj[i] {
            per_interface[e.local] += 1;
        }
        g.adj[i]
            .iter()
            .map(|e| self.link_term(i, e.local, e.peer, e.remote, per_interface[e.local]))
            .sum()
    }

    pub fn breakdown(&self, g: &Graph, i: usize) -> CostBreakdown<T> {
        let config = self.scenario.config();
        let hops = g.hops_from(i);
        let link_cost_total = self.link_cost(g, i);

        let mut unreachable = 0;
        let mut ic_sum = 0u64;
        let mut ic_missing = false;
        let mut other_sum = 0u64;
        let mut other_missing = false;
        for (j, node) in self.scenario.nodes().iter().enumerate() {
            if j == i {
                continue;
            }
            match hops[j] {
                Some(h) if h <= config.h_max => {
                    if node.internet_connected {
                        ic_sum += u64::from(h);
                    } else {
                        other_sum += u64::from(h);
                    }
                }
                _ => {
                    unreachable += 1;
                    if node.internet_connected {
                        ic_missing = true;
                    } else {
                        other_missing = true;
                    }
                }
            }
        }
        let ic_finite = config.gamma * T::lit(ic_sum as f64);
        let other_finite = T::lit(other_sum as f64);
        let bridging: T = g.bridging(i);
        let ic_distance_term = if ic_missing {
            CostValue::Infinite
        } else {
            CostValue::Finite(ic_finite)
        };
        let non_ic_distance_term = if other_missing {
            CostValue::Infinite
        } else {
            CostValue::Finite(other_finite)
        };
        let total =
            link_cost_total + ic_distance_term + non_ic_distance_term + CostValue::Finite(bridging);
        let over_budget = !link_cost_total.is_finite();
        let reachable_total =
            link_cost_total.finite().unwrap_or_else(T::zero) + ic_finite + other_finite + bridging;
        CostBreakdown {
            link_cost_total,
            ic_distance_term,
            non_ic_distance_term,
            bridging,
            total,
            unreachable_peers: unreachable,
            reachable_total,
            over_budget,
        }
    }
}

/// Total link-establishment cost of `node` in `topology`.
pub fn link_cost_sum<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
    node: NodeId,
) -> Result<CostValue<T>, CostError> {
    let model = CostModel::new(scenario);
    let g = model.graph(topology)?;
    Ok(model.link_cost(&g, model.index(node)?))
}

/// `(1/deg(i)) / sum_{j ~ i} 1/deg(j)`, and 0 for an isolated node.
pub fn bridging_coefficient<T: Scalar>(topology: &Topology, node: NodeId) -> T {
    let d = topology.degree(node);
    if d == 0 {
        return T::zero();
    }
    let denom = topology
        .links_of(node)
        .filter_map(|l| l.opposite(node))
        .fold(T::zero(), |acc, peer| {
            acc + T::count(topology.degree(peer.node)).recip()
        });
    T::count(d).recip() / denom
}

/// Shortest hop counts from `node` to every scenario node; `None` when
/// unreachable. The `h_max` cap is not applied here.
pub fn hop_distances<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
    node: NodeId,
) -> Result<BTreeMap<NodeId, Option<u32>>, CostError> {
    let model = CostModel::new(scenario);
    let g = model.graph(topology)?;
    let hops = g.hops_from(model.index(node)?);
    Ok(scenario.ids().zip(hops).collect())
}

/// Full cost decomposition of `node` in `topology`.
pub fn total_cost<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
    node: NodeId,
) -> Result<CostBreakdown<T>, CostError> {
    let model = CostModel::new(scenario);
    let g = model.graph(topology)?;
    Ok(model.breakdown(&g, model.index(node)?))
}

/// Cost decomposition for every node, in id order.
pub fn all_costs<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
) -> Result<Vec<(NodeId, CostBreakdown<T>)>, CostError> {
    let model = CostModel::new(scenario);
    let g = model.graph(topology)?;
    Ok(scenario
        .ids()
        .enumerate()
        .map(|(i, id)| (id, model.breakdown(&g, i)))
        .collect())
}
