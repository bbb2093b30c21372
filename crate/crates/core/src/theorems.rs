//! Sufficient-condition predicates for the predicted stable structures, and
//! a structural classifier for a given topology.
//!
//! * Clique criterion: every pair of internet-connected (IC) nodes has an
//!   interface pairing whose worst-case marginal link cost, for both
//!   endpoints, is below `gamma - 1`.
//! * Single-IC-link criterion: the clique criterion holds and an IC node's
//!   cheapest possible link to any non-IC node costs more than `gamma - 1`.
//! * Star criterion: both of the above hold and every non-IC node's cheapest
//!   link to another non-IC node costs more than `1/2`.
//!
//! All comparisons are strict.

use std::collections::VecDeque;

use serde::Serialize;

use crate::cost::{CostError, CostModel};
use crate::model::{NodeId, Scenario, Topology};
use crate::scalar::Scalar;
use crate::value::CostValue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessReason {
    /// No interface pairing is within power budget.
    Infeasible,
    /// The cost does not clear the threshold in the required direction.
    Threshold,
}

/// A node pair that breaks a criterion. `cost` is the cost borne by `node`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairWitness<T = f64> {
    pub node: NodeId,
    pub peer: NodeId,
    pub cost: CostValue<T>,
    pub threshold: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing: Option<(usize, usize)>,
    pub reason: WitnessReason,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult<T = f64> {
    pub holds: bool,
    pub witnesses: Vec<PairWitness<T>>,
}

/// Best and worst interface pairing for one IC pair under the clique
/// criterion; the cost is the larger of the two endpoints' marginal costs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IcPairCost<T = f64> {
    pub a: NodeId,
    pub b: NodeId,
    pub best_pairing: Option<(usize, usize)>,
    pub best_cost: CostValue<T>,
    pub worst_pairing: Option<(usize, usize)>,
    pub worst_cost: CostValue<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriteriaReport<T = f64> {
    pub clique_criterion: CriterionResult<T>,
    pub single_ic_link_criterion: CriterionResult<T>,
    pub star_criterion: CriterionResult<T>,
    pub ic_pair_costs: Vec<IcPairCost<T>>,
    pub notes: Vec<String>,
}

const SINGLE_LINK_NOTE: &str = "single-IC-link criterion requires the cheapest IC-side cost of \
an IC to non-IC link to exceed gamma - 1, a condition on IC to non-IC links distinct from the \
clique premise (IC to IC cost below gamma - 1)";

/// Worst-case marginal increase of `i`'s link cost when it adds a link to
/// `k` on `(ri, rk)`: every other peer `i` could serve on `ri` is assumed to
/// be linked there already.
fn worst_marginal<T: Scalar>(
    model: &CostModel<'_, T>,
    i: usize,
    ri: usize,
    k: usize,
    rk: usize,
) -> CostValue<T> {
    let scenario = model.scenario();
    let node = &scenario.nodes()[i];
    let Some((sigma_k, true)) = model.sigma(i, ri, k, rk) else {
        return CostValue::Infinite;
    };
    let mut others = 0usize;
    let mut others_sigma = T::zero();
    for z in 0..scenario.len() {
        if z == i || z == k {
            continue;
        }
        let worst = (0..scenario.nodes()[z].interfaces.len())
            .filter(|&rz| model.feasible(i, ri, z, rz))
            .filter_map(|rz| model.sigma(i, ri, z, rz).map(|s| s.0))
            .fold(None, |acc: Option<T>, s| Some(acc.map_or(s, |a| a.max(s))));
        if let Some(s) = worst {
            others += 1;
            others_sigma = others_sigma + s;
        }
    }
    let beta = crate::cost::beta(&node.interfaces[ri], node);
    CostValue::Finite(
        scenario.config().alpha * node.energy_weight / beta
            * (others_sigma + T::count(others + 1) * sigma_k),
    )
}

/// Cheapest cost for `i` to hold a link to `j`: the single-link term over
/// feasible pairings. `None` when no pairing is feasible.
fn cheapest_link<T: Scalar>(
    model: &CostModel<'_, T>,
    i: usize,
    j: usize,
) -> Option<(CostValue<T>, (usize, usize))> {
    model
        .pairings(i, j)
        .into_iter()
        .map(|(ri, rj)| (model.link_term(i, ri, j, rj, 1), (ri, rj)))
        .min_by(|a, b| a.0.total_cmp(&b.0))
}

/// Pairing, its larger endpoint marginal, and that endpoint first.
type Candidate<T> = ((usize, usize), CostValue<T>, NodeId, NodeId);

fn clique_parts<T: Scalar>(model: &CostModel<'_, T>) -> (CriterionResult<T>, Vec<IcPairCost<T>>) {
    let scenario = model.scenario();
    let threshold = scenario.config().gamma - T::one();
    let ic: Vec<usize> = (0..scenario.len())
        .filter(|&i| scenario.nodes()[i].internet_connected)
        .collect();
    let mut witnesses = Vec::new();
    let mut costs = Vec::new();
    for (x, &i) in ic.iter().enumerate() {
        for &k in &ic[x + 1..] {
            let ids = (scenario.nodes()[i].id, scenario.nodes()[k].id);
            let mut options: Vec<Candidate<T>> = model
                .pairings(i, k)
                .into_iter()
                .map(|(ri, rk)| {
                    let mi = worst_marginal(model, i, ri, k, rk);
                    let mk = worst_marginal(model, k, rk, i, ri);
                    if mk.total_cmp(&mi).is_gt() {
                        ((ri, rk), mk, ids.1, ids.0)
                    } else {
                        ((ri, rk), mi, ids.0, ids.1)
                    }
                })
                .collect();
            // Stable sort keeps the lowest pairing among equal costs.
            options.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = options.first().cloned();
            let worst = options.last().cloned();
            costs.push(IcPairCost {
                a: ids.0,
                b: ids.1,
                best_pairing: best.as_ref().map(|o| o.0),
                best_cost: best.as_ref().map_or(CostValue::Infinite, |o| o.1),
                worst_pairing: worst.as_ref().map(|o| o.0),
                worst_cost: worst.as_ref().map_or(CostValue::Infinite, |o| o.1),
            });
            match best {
                None => witnesses.push(PairWitness {
                    node: ids.0,
                    peer: ids.1,
                    cost: CostValue::Infinite,
                    threshold,
                    pairing: None,
                    reason: WitnessReason::Infeasible,
                }),
                Some((pairing, cost, node, peer)) => {
                    if cost.total_cmp(&CostValue::Finite(threshold)).is_ge() {
                        witnesses.push(PairWitness {
                            node,
                            peer,
                            cost,
                            threshold,
                            pairing: Some(pairing),
                            reason: WitnessReason::Threshold,
                        });
                    }
                }
            }
        }
    }
    (
        CriterionResult {
            holds: witnesses.is_empty(),
            witnesses,
        },
        costs,
    )
}

/// Lower-bound check: every feasible `i -> j` link for `i` in `from` and
/// `j` in `to` must cost `i` strictly more than `threshold`.
fn lower_bound<T: Scalar>(
    model: &CostModel<'_, T>,
    from: impl Fn(usize) -> bool,
    to: impl Fn(usize) -> bool,
    threshold: T,
) -> Vec<PairWitness<T>> {
    let scenario = model.scenario();
    let mut witnesses = Vec::new();
    for i in (0..scenario.len()).filter(|&i| from(i)) {
        for j in (0..scenario.len()).filter(|&j| j != i && to(j)) {
            if let Some((cost, pairing)) = cheapest_link(model, i, j) {
                if cost.total_cmp(&CostValue::Finite(threshold)).is_le() {
                    witnesses.push(PairWitness {
                        node: scenario.nodes()[i].id,
                        peer: scenario.nodes()[j].id,
                        cost,
                        threshold,
                        pairing: Some(pairing),
                        reason: WitnessReason::Threshold,
                    });
                }
            }
        }
    }
    witnesses
}

pub fn clique_criterion<T: Scalar>(scenario: &Scenario<T>) -> CriterionResult<T> {
    clique_parts(&CostModel::new(scenario)).0
}

pub fn single_ic_link_criterion<T: Scalar>(scenario: &Scenario<T>) -> CriterionResult<T> {
    criteria(scenario).single_ic_link_criterion
}

pub fn star_criterion<T: Scalar>(scenario: &Scenario<T>) -> CriterionResult<T> {
    criteria(scenario).star_criterion
}

/// All three criteria with witnesses.
pub fn criteria<T: Scalar>(scenario: &Scenario<T>) -> CriteriaReport<T> {
    let model = CostModel::new(scenario);
    let nodes = scenario.nodes();
    let is_ic = |i: usize| nodes[i].internet_connected;
    let (clique, ic_pair_costs) = clique_parts(&model);

    let gamma_bound = scenario.config().gamma - T::one();
    let single_w = lower_bound(&model, is_ic, |j| !is_ic(j), gamma_bound);
    let single_holds = clique.holds && single_w.is_empty();
    let star_w = lower_bound(&model, |i| !is_ic(i), |j| !is_ic(j), T::lit(0.5));
    let star_holds = single_holds && star_w.is_empty();

    CriteriaReport {
        clique_criterion: clique,
        single_ic_link_criterion: CriterionResult {
            holds: single_holds,
            witnesses: single_w,
        },
        star_criterion: CriterionResult {
            holds: star_holds,
            witnesses: star_w,
        },
        ic_pair_costs,
        notes: vec![SINGLE_LINK_NOTE.to_string()],
    }
}

/// Shape of a topology relative to the IC / non-IC split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// IC nodes induce a complete subgraph.
    pub ic_clique: bool,
    pub missing_ic_links: Vec<(NodeId, NodeId)>,
    pub max_ic_links_per_non_ic: usize,
    pub max_non_ic_degree: usize,
    /// Non-IC nodes with exactly one IC link and at least one non-IC link.
    pub relays: Vec<NodeId>,
    /// 1 for the IC tier plus one per hop to the deepest reachable non-IC
    /// node; 0 when there are no IC nodes.
    pub hierarchy_tiers: usize,
    /// Non-IC nodes with no path to any IC node.
    pub detached_non_ic: Vec<NodeId>,
}

pub fn check_structure<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
) -> Result<StructureReport, CostError> {
    let model = CostModel::new(scenario);
    let g = model.graph(topology)?;
    let nodes = scenario.nodes();
    let n = nodes.len();
    let is_ic = |i: usize| nodes[i].internet_connected;

    let mut missing_ic_links = Vec::new();
    for a in (0..n).filter(|&a| is_ic(a)) {
        for b in (a + 1..n).filter(|&b| is_ic(b)) {
            if !g.has_edge(a, b) {
                missing_ic_links.push((nodes[a].id, nodes[b].id));
            }
        }
    }

    let mut max_ic_links = 0;
    let mut max_degree = 0;
    let mut relays = Vec::new();
    for j in (0..n).filter(|&j| !is_ic(j)) {
        let ic_links = g.adj[j].iter().filter(|e| is_ic(e.peer)).count();
        let other_links = g.degree(j) - ic_links;
        max_ic_links = max_ic_links.max(ic_links);
        max_degree = max_degree.max(g.degree(j));
        if ic_links == 1 && other_links >= 1 {
            relays.push(nodes[j].id);
        }
    }

    let mut depth: Vec<Option<usize>> = (0..n).map(|i| is_ic(i).then_some(0)).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| is_ic(i)).collect();
    while let Some(u) = queue.pop_front() {
        let du = depth[u].unwrap_or(0);
        for e in &g.adj[u] {
            if depth[e.peer].is_none() {
                depth[e.peer] = Some(du + 1);
                queue.push_back(e.peer);
            }
        }
    }
    let any_ic = (0..n).any(is_ic);
    let hierarchy_tiers = if any_ic {
        1 + depth.iter().flatten().copied().max().unwrap_or(0)
    } else {
        0
    };
    let detached_non_ic = (0..n)
        .filter(|&j| !is_ic(j) && depth[j].is_none())
        .map(|j| nodes[j].id)
        .collect();

    Ok(StructureReport {
        ic_clique: missing_ic_links.is_empty(),
        missing_ic_links,
        max_ic_links_per_non_ic: max_ic_links,
        max_non_ic_degree: max_degree,
        relays,
        hierarchy_tiers,
        detached_non_ic,
    })
}
