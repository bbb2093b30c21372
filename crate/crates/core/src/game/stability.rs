use serde::Serialize;

use super::{link_from_indices, Deviation, GameError};
use crate::cost::{CostModel, Graph};
use crate::model::{Link, NodeId, Scenario, Topology};
use crate::scalar::Scalar;

/// A node that would strictly gain by cutting one of its links.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeveranceViolation<T = f64> {
    pub node: NodeId,
    pub link: Link,
    pub delta: Deviation<T>,
}

/// An absent link both of whose endpoints would strictly gain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditionViolation<T = f64> {
    pub link: Link,
    pub delta_a: Deviation<T>,
    pub delta_b: Deviation<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityReport<T = f64> {
    pub stable: bool,
    pub severance_violations: Vec<SeveranceViolation<T>>,
    pub addition_violations: Vec<AdditionViolation<T>>,
}

/// Enumerates every unilateral severance and every bilateral addition
/// (over all feasible interface pairings) and reports the improving ones.
pub fn is_pairwise_stable<T: Scalar>(
    scenario: &Scenario<T>,
    topology: &Topology,
) -> Result<StabilityReport<T>, GameError<T>> {
    let model = CostModel::new(scenario);
    let g = model.graph(topology)?;
    let n = scenario.len();
    let base: Vec<_> = (0..n).map(|i| model.breakdown(&g, i)).collect();

    let mut severance_violations = Vec::new();
    for link in topology.links() {
        let a = model.index(link.a().node)?;
        let b = model.index(link.b().node)?;
        let mut g2 = g.clone();
        g2.remove_edge(a, b);
        for (idx, id) in [(a, link.a().node), (b, link.b().node)] {
            let delta = Deviation::between(&base[idx], &model.breakdown(&g2, idx));
            if delta.improves() {
                severance_violations.push(SeveranceViolation {
                    node: id,
                    link: *link,
                    delta,
                });
            }
        }
    }

    let mut addition_violations = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if g.has_edge(a, b) {
                continue;
            }
            for (ra, rb) in model.pairings(a, b) {
                let mut g2 = g.clone();
                g2.add_edge(a, ra, b, rb);
                let delta_a = Deviation::between(&base[a], &model.breakdown(&g2, a));
                let delta_b = Deviation::between(&base[b], &model.breakdown(&g2, b));
                if delta_a.improves() && delta_b.improves() {
                    addition_violations.push(AdditionViolation {
                        link: link_from_indices(scenario, a, ra, b, rb),
                        delta_a,
                        delta_b,
                    });
                }
            }
        }
    }

    Ok(StabilityReport {
        stable: severance_violations.is_empty() && addition_violations.is_empty(),
        severance_violations,
        addition_violations,
    })
}

/// Early-exit variant over an index graph.
pub(crate) fn is_stable_graph<T: Scalar>(model: &CostModel<'_, T>, g: &Graph) -> bool {
    let n = g.adj.len();
    let base: Vec<_> = (0..n).map(|i| model.breakdown(g, i)).collect();
    for a in 0..n {
        for e in g.adj[a].iter().filter(|e| e.peer > a) {
            let b = e.peer;
            let mut scratch = g.clone();
            scratch.remove_edge(a, b);
            if Deviation::between(&base[a], &model.breakdown(&scratch, a)).improves()
                || Deviation::between(&base[b], &model.breakdown(&scratch, b)).improves()
            {
                return false;
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            if g.has_edge(a, b) {
                continue;
            }
            for (ra, rb) in model.pairings(a, b) {
                let mut scratch = g.clone();
                scratch.add_edge(a, ra, b, rb);
                if Deviation::between(&base[a], &model.breakdown(&scratch, a)).improves()
                    && Deviation::between(&base[b], &model.breakdown(&scratch, b)).improves()
                {
                    return false;
                }
            }
        }
    }
    true
}
