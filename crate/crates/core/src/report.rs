//! Run reports and Graphviz export.

use std::fmt::Write as _;

use serde::Serialize;

use crate::cost::{all_costs, CostBreakdown};
use crate::game::{is_pairwise_stable, DynamicsOutcome, GameError, ScanOrder, StabilityReport};
use crate::model::{NodeId, Scenario, Topology};
use crate::scalar::Scalar;
use crate::theorems::{check_structure, criteria, CriteriaReport, StructureReport};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeCost<T = f64> {
    pub node: NodeId,
    #[serde(flatten)]
    pub cost: CostBreakdown<T>,
}

/// Everything known about one topology under one scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TopologyReport<T = f64> {
    pub topology_hash: String,
    pub topology: Topology,
    pub costs: Vec<NodeCost<T>>,
    pub stability: StabilityReport<T>,
    pub criteria: CriteriaReport<T>,
    pub structure: StructureReport,
}

impl<T: Scalar> TopologyReport<T> {
    pub fn new(scenario: &Scenario<T>, topology: &Topology) -> Result<Self, GameError<T>> {
        let costs = all_costs(scenario, topology)?
            .into_iter()
            .map(|(node, cost)| NodeCost { node, cost })
            .collect();
        Ok(TopologyReport {
            topology_hash: topology.content_hash(),
            topology: topology.clone(),
            costs,
            stability: is_pairwise_stable(scenario, topology)?,
            criteria: criteria(scenario),
            structure: check_structure(scenario, topology)?,
        })
    }
}

/// Report for a dynamics run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport<T = f64> {
    pub seed: u64,
    pub scan_order: ScanOrder,
    pub gamma: T,
    pub converged: bool,
    pub steps: usize,
    #[serde(flatten)]
    pub result: TopologyReport<T>,
}

impl<T: Scalar> RunReport<T> {
    pub fn new(scenario: &Scenario<T>, outcome: &DynamicsOutcome<T>) -> Result<Self, GameError<T>> {
        Ok(RunReport {
            seed: outcome.trace.options.seed,
            scan_order: outcome.trace.options.order,
            gamma: scenario.config().gamma,
            converged: outcome.converged,
            steps: outcome.trace.steps.len(),
            result: TopologyReport::new(scenario, &outcome.topology)?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Undirected DOT graph: IC nodes drawn as boxes, others as ellipses, one
/// edge per link labelled with the interface kinds used.
pub fn to_dot<T: Scalar>(scenario: &Scenario<T>, topology: &Topology) -> String {
    let mut out = String::from("graph topology {\n");
    for node in scenario.nodes() {
        let shape = if node.internet_connected {
            "box"
        } else {
            "ellipse"
        };
        let _ = writeln!(
            out,
            "  n{} [label=\"{}\", shape={shape}];",
            node.id, node.id
        );
    }
    let kind = |node: NodeId, idx: usize| {
        scenario
            .node(node)
            .and_then(|n| n.interface(idx))
            .map_or("?", |i| i.kind.as_str())
    };
    for link in topology.links() {
        let (a, b) = (link.a(), link.b());
        let (ka, kb) = (kind(a.node, a.interface), kind(b.node, b.interface));
        let label = if ka == kb {
            ka.to_string()
        } else {
            format!("{ka}/{kb}")
        };
        let _ = writeln!(out, "  n{} -- n{} [label=\"{label}\"];", a.node, b.node);
    }
    out.push_str("}\n");
    out
}
