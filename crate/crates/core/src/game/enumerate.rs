use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{is_stable_graph, topology_from_graph, GameError};
use crate::cost::{CostModel, Graph};
use crate::model::{Scenario, Topology};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_NODES: usize = 6;

struct PairOptions {
    a: usize,
    b: usize,
    pairings: Vec<(usize, usize)>,
}

fn pair_options<T: Scalar>(model: &CostModel<'_, T>) -> Vec<PairOptions> {
    let n = model.scenario().len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let pairings = model.pairings(a, b);
            if !pairings.is_empty() {
                out.push(PairOptions { a, b, pairings });
            }
        }
    }
    out
}

/// Number of distinct feasible topologies: each pair is either unlinked or
/// linked on one of its feasible interface pairings.
pub fn enumeration_size<T: Scalar>(scenario: &Scenario<T>) -> u128 {
    let model = CostModel::new(scenario);
    pair_options(&model)
        .iter()
        .map(|p| p.pairings.len() as u128 + 1)
        .product()
}

/// Every pairwise-stable topology, found by exhaustive enumeration.
pub fn brute_force_stable_set<T: Scalar>(
    scenario: &Scenario<T>,
    max_nodes: usize,
) -> Result<BTreeSet<Topology>, GameError<T>> {
    if scenario.len() > max_nodes {
        return Err(GameError::TooLarge {
            nodes: scenario.len(),
            cap: max_nodes,
        });
    }
    let model = CostModel::new(scenario);
    let options = pair_options(&model);
    let total: u64 = options
        .iter()
        .map(|p| p.pairings.len() as u64 + 1)
        .try_fold(1u64, |acc, k| acc.checked_mul(k))
        .ok_or(GameError::TooLarge {
            nodes: scenario.len(),
            cap: max_nodes,
        })?;
    let n = scenario.len();

    let stable: Vec<Topology> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let mut rest = code;
            let mut g = Graph::empty(n);
            for p in &options {
                let radix = p.pairings.len() as u64 + 1;
                let digit = (rest % radix) as usize;
                rest /= radix;
                if digit > 0 {
                    let (ra, rb) = p.pairings[digit - 1];
                    g.add_edge(p.a, ra, p.b, rb);
                }
            }
            is_stable_graph(&model, &g).then(|| topology_from_graph(scenario, &g))
        })
        .collect();
    Ok(stable.into_iter().collect())
}
