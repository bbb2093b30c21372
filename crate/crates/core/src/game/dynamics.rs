use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{link_from_indices, Deviation, Move};
use crate::cost::{CostBreakdown, CostModel, Graph};
use crate::model::{ModelError, Scenario, Topology};
use crate::scalar::Scalar;
use crate::value::CostValue;

/// Order in which node pairs are visited during one scan.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanOrder {
    /// Pairs in ascending id order; the lower id proposes. The seed is unused.
    Ascending,
    /// Pairs and proposer roles reshuffled from the seed at every scan.
    #[default]
    Shuffled,
}

impl std::str::FromStr for ScanOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ascending" => Ok(ScanOrder::Ascending),
            "shuffled" => Ok(ScanOrder::Shuffled),
            other => Err(format!("unknown scan order `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynamicsOptions {
    pub seed: u64,
    pub order: ScanOrder,
    /// Moves applied before giving up and reporting non-convergence.
    pub max_steps: usize,
}

impl Default for DynamicsOptions {
    fn default() -> Self {
        DynamicsOptions {
            seed: 0,
            order: ScanOrder::Shuffled,
            max_steps: 10_000,
        }
    }
}

impl DynamicsOptions {
    pub fn seeded(seed: u64) -> Self {
        DynamicsOptions {
            seed,
            ..Self::default()
        }
    }

    pub fn ascending() -> Self {
        DynamicsOptions {
            order: ScanOrder::Ascending,
            ..Self::default()
        }
    }
}

/// One applied move and the state right after it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep<T = f64> {
    pub step: usize,
    #[serde(flatten)]
    pub mv: Move<T>,
    pub topology_hash: String,
    /// Node totals in id order after the move.
    pub costs: Vec<CostValue<T>>,
}

/// Every move applied by a dynamics run, starting from the empty topology.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicsTrace<T = f64> {
    pub options: DynamicsOptions,
    pub steps: Vec<TraceStep<T>>,
}

impl<T: Scalar> DynamicsTrace<T> {
    /// Re-applies the moves to the empty topology.
    pub fn replay(&self) -> Result<Topology, ModelError> {
        let mut t = Topology::new();
        for step in &self.steps {
            step.mv.apply(&mut t)?;
        }
        Ok(t)
    }

    /// One JSON object per line, in step order.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&serde_json::to_string(step).expect("trace steps serialise"));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynamicsOutcome<T = f64> {
    pub topology: Topology,
    pub trace: DynamicsTrace<T>,
    pub converged: bool,
}

fn scan_order(
    pairs: &[(usize, usize)],
    order: ScanOrder,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, usize)> {
    match order {
        ScanOrder::Ascending => pairs.to_vec(),
        ScanOrder::Shuffled => {
            let mut p = pairs.to_vec();
            p.shuffle(rng);
            for pair in &mut p {
                if rng.gen::<bool>() {
                    *pair = (pair.1, pair.0);
                }
            }
            p
        }
    }
}

fn find_severance<T: Scalar>(
    model: &CostModel<'_, T>,
    g: &Graph,
    base: &[CostBreakdown<T>],
    order: &[(usize, usize)],
) -> Option<Move<T>> {
    let scenario = model.scenario();
    for &(p, q) in order {
        let Some(e) = g.adj[p].iter().find(|e| e.peer == q) else {
            continue;
        };
        let mut g2 = g.clone();
        g2.remove_edge(p, q);
        for who in [p, q] {
            let delta = Deviation::between(&base[who], &model.breakdown(&g2, who));
            if delta.improves() {
                return Some(Move::Remove {
                    link: link_from_indices(scenario, p, e.local, q, e.remote),
                    initiator: scenario.nodes()[who].id,
                    delta,
                });
            }
        }
    }
    None
}

fn find_addition<T: Scalar>(
    model: &CostModel<'_, T>,
    g: &Graph,
    base: &[CostBreakdown<T>],
    order: &[(usize, usize)],
) -> Option<Move<T>> {
    let scenario = model.scenario();
    for &(p, q) in order {
        if g.has_edge(p, q) {
            continue;
        }
        // Among pairings both endpoints accept, the proposer's favourite;
        // ties keep the lowest interface indices.
        let mut best: Option<(usize, usize, Deviation<T>, Deviation<T>)> = None;
        for (rp, rq) in model.pairings(p, q) {
            let mut g2 = g.clone();
            g2.add_edge(p, rp, q, rq);
            let dp = Deviation::between(&base[p], &model.breakdown(&g2, p));
            if !dp.improves() {
                continue;
            }
            let dq = Deviation::between(&base[q], &model.breakdown(&g2, q));
            if !dq.improves() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((_, _, cur, _)) => dp.rank_cmp(cur).is_lt(),
            };
            if better {
                best = Some((rp, rq, dp, dq));
            }
        }
        if let Some((rp, rq, dp, dq)) = best {
            let link = link_from_indices(scenario, p, rp, q, rq);
            let (delta_a, delta_b) = if link.a().node == scenario.nodes()[p].id {
                (dp, dq)
            } else {
                (dq, dp)
            };
            return Some(Move::Add {
                link,
                delta_a,
                delta_b,
            });
        }
    }
    None
}

/// Best-response dynamics from the empty topology.
///
/// Each scan looks for an improving severance first and then for a mutually
/// accepted addition; the first move found is applied and the scan restarts.
/// A scan that finds nothing is a pairwise-stable fixed point.
pub fn best_response_dynamics<T: Scalar>(
    scenario: &Scenario<T>,
    options: DynamicsOptions,
) -> DynamicsOutcome<T> {
    let model = CostModel::new(scenario);
    let n = scenario.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut g = Graph::empty(n);
    let mut topology = Topology::new();
    let mut steps = Vec::new();
    let mut converged = false;

    while steps.len() < options.max_steps {
        let order = scan_order(&pairs, options.order, &mut rng);
        let base: Vec<_> = (0..n).map(|i| model.breakdown(&g, i)).collect();
        let Some(mv) = find_severance(&model, &g, &base, &order)
            .or_else(|| find_addition(&model, &g, &base, &order))
        else {
            converged = true;
            break;
        };
        let link = *mv.link();
        let a = scenario.index_of(link.a().node).expect("scenario node");
        let b = scenario.index_of(link.b().node).expect("scenario node");
        match &mv {
            Move::Add { .. } => g.add_edge(a, link.a().interface, b, link.b().interface),
            Move::Remove { .. } => g.remove_edge(a, b),
        }
        mv.apply(&mut topology)
            .expect("move consistent with topology");
        let costs = (0..n).map(|i| model.breakdown(&g, i).total).collect();
        steps.push(TraceStep {
            step: steps.len() + 1,
            mv,
            topology_hash: topology.content_hash(),
            costs,
        });
    }

    if !converged {
        // The step budget may run out exactly at a fixed point.
        let base: Vec<_> = (0..n).map(|i| model.breakdown(&g, i)).collect();
        let order = scan_order(&pairs, ScanOrder::Ascending, &mut rng);
        converged = find_severance(&model, &g, &base, &order).is_none()
            && find_addition(&model, &g, &base, &order).is_none();
    }

    DynamicsOutcome {
        topology,
        trace: DynamicsTrace { options, steps },
        converged,
    }
}
