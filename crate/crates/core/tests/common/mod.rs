//! Random scenario generation and an independent cost and stability oracle.

#![allow(dead_code)]

use std::collections::VecDeque;

use netform_core::fixtures;
use netform_core::{Endpoint, GameConfig, InterfaceSpec, Link, Node, NodeId, Scenario, Topology};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Knobs for [`random_scenario`].
#[derive(Clone, Debug)]
pub struct Profile {
    pub side_m: f64,
    pub gamma: (f64, f64),
    pub ic_rho: (f64, f64),
    pub non_ic_rho: (f64, f64),
    pub h_max: (u32, u32),
}

impl Default for Profile {
    fn default() -> Self {
        Profile {
            side_m: 30.0,
            gamma: (2.0, 1000.0),
            ic_rho: (1e2, 1e8),
            non_ic_rho: (1e1, 1e7),
            h_max: (2, 6),
        }
    }
}

/// IC nodes always carry WLAN and optionally Bluetooth and Z-Wave; non-IC
/// nodes carry a non-empty subset of Bluetooth and Z-Wave.
pub fn random_scenario(
    rng: &mut ChaCha8Rng,
    n_ic: usize,
    n_non_ic: usize,
    p: &Profile,
) -> Scenario {
    let mut nodes = Vec::new();
    for k in 0..n_ic + n_non_ic {
        let ic = k < n_ic;
        let mut ifaces: Vec<InterfaceSpec> = Vec::new();
        if ic {
            ifaces.push(fixtures::wlan());
            if rng.gen_bool(0.5) {
                ifaces.push(fixtures::bluetooth());
            }
            if rng.gen_bool(0.5) {
                ifaces.push(fixtures::zwave());
            }
        } else {
            match rng.gen_range(0..3) {
                0 => ifaces.push(fixtures::bluetooth()),
                1 => ifaces.push(fixtures::zwave()),
                _ => {
                    ifaces.push(fixtures::bluetooth());
                    ifaces.push(fixtures::zwave());
                }
            }
        }
        let (lo, hi) = if ic { p.ic_rho } else { p.non_ic_rho };
        nodes.push(Node {
            id: NodeId(k as u32 + 1),
            position: [rng.gen_range(0.0..p.side_m), rng.gen_range(0.0..p.side_m)],
            interfaces: ifaces,
            min_required_bitrate_bps: if ic {
                1e7
            } else {
                *[5e5, 5e3].get(rng.gen_range(0..2)).unwrap()
            },
            energy_weight: log_uniform(rng, lo, hi),
            internet_connected: ic,
        });
    }
    let gamma = log_uniform(rng, p.gamma.0, p.gamma.1);
    let h_max = rng.gen_range(p.h_max.0..=p.h_max.1);
    Scenario::new(GameConfig::new(gamma, h_max), nodes).expect("generated scenario is valid")
}

/// A random topology: each feasible pair is linked with probability `density`
/// on a uniformly chosen feasible pairing.
pub fn random_topology(rng: &mut ChaCha8Rng, s: &Scenario, density: f64) -> Topology {
    let mut t = Topology::new();
    let ids: Vec<NodeId> = s.ids().collect();
    for (x, &a) in ids.iter().enumerate() {
        for &b in &ids[x + 1..] {
            let pairings = feasible_pairs(s, a, b);
            if !pairings.is_empty() && rng.gen_bool(density) {
                let (ra, rb) = pairings[rng.gen_range(0..pairings.len())];
                t.insert(Link::new(Endpoint::new(a, ra), Endpoint::new(b, rb)).unwrap())
                    .unwrap();
            }
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Oracle: a from-scratch evaluation of the cost function and of the two
// pairwise-stability conditions, sharing no code with the library.

const C: f64 = 299_792_458.0;

fn node(s: &Scenario, id: NodeId) -> &Node {
    s.nodes().iter().find(|n| n.id == id).unwrap()
}

/// Power `tx` needs so that `rx` hears it.
pub fn required_power(s: &Scenario, tx: &Node, tr: usize, rx: &Node, rr: usize) -> f64 {
    let (ti, ri) = (&tx.interfaces[tr], &rx.interfaces[rr]);
    let d = ((tx.position[0] - rx.position[0]).powi(2) + (tx.position[1] - rx.position[1]).powi(2))
        .sqrt();
    let eta = s.config().path_loss_exponent;
    ri.rx_sensitivity_w * (4.0 * std::f64::consts::PI * d * ti.frequency_hz / C).powf(eta)
        / (ti.antenna_gain * ri.antenna_gain)
}

pub fn feasible(s: &Scenario, a: &Node, ra: usize, b: &Node, rb: usize) -> bool {
    let (ia, ib) = (&a.interfaces[ra], &b.interfaces[rb]);
    ia.kind == ib.kind
        && ia.frequency_hz == ib.frequency_hz
        && required_power(s, a, ra, b, rb) <= ia.max_tx_power_w
        && required_power(s, b, rb, a, ra) <= ib.max_tx_power_w
}

pub fn feasible_pairs(s: &Scenario, a: NodeId, b: NodeId) -> Vec<(usize, usize)> {
    let (na, nb) = (node(s, a), node(s, b));
    let mut out = Vec::new();
    for ra in 0..na.interfaces.len() {
        for rb in 0..nb.interfaces.len() {
            if feasible(s, na, ra, nb, rb) {
                out.push((ra, rb));
            }
        }
    }
    out
}

/// `(peer, local interface, remote interface)` for every link of `id`,
/// sorted by peer.
fn incident(t: &Topology, id: NodeId) -> Vec<(NodeId, usize, usize)> {
    let mut v: Vec<_> = t
        .links()
        .filter_map(|l| {
            if l.a().node == id {
                Some((l.b().node, l.a().interface, l.b().interface))
            } else if l.b().node == id {
                Some((l.a().node, l.b().interface, l.a().interface))
            } else {
                None
            }
        })
        .collect();
    v.sort();
    v
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleCost {
    /// `None` when some peer is unreachable within `h_max` or a link is out of budget.
    pub total: Option<f64>,
    pub unreachable: usize,
    pub reachable_total: f64,
    pub over_budget: bool,
}

pub fn oracle_bridging(t: &Topology, id: NodeId) -> f64 {
    let nbrs = incident(t, id);
    if nbrs.is_empty() {
        return 0.0;
    }
    let denom = nbrs.iter().fold(0.0, |acc, (peer, _, _)| {
        acc + 1.0 / incident(t, *peer).len() as f64
    });
    (1.0 / nbrs.len() as f64) / denom
}

pub fn oracle_cost(s: &Scenario, t: &Topology, id: NodeId) -> OracleCost {
    let me = node(s, id);
    let cfg = s.config();
    let nbrs = incident(t, id);

    let mut links = 0.0;
    let mut over_budget = false;
    for &(peer, local, remote) in &nbrs {
        let other = node(s, peer);
        let n = nbrs.iter().filter(|e| e.1 == local).count() as f64;
        let p = required_power(s, me, local, other, remote);
        if p > me.interfaces[local].max_tx_power_w {
            over_budget = true;
            continue;
        }
        let beta = me.interfaces[local].max_bitrate_bps / me.min_required_bitrate_bps;
        links += cfg.alpha * n * me.energy_weight * p / beta;
    }

    // BFS over the link set.
    let mut dist: Vec<(NodeId, u32)> = vec![(id, 0)];
    let mut queue = VecDeque::from([(id, 0u32)]);
    while let Some((u, du)) = queue.pop_front() {
        for (v, _, _) in incident(t, u) {
            if !dist.iter().any(|(w, _)| *w == v) {
                dist.push((v, du + 1));
                queue.push_back((v, du + 1));
            }
        }
    }
    let mut unreachable = 0;
    let (mut ic_h, mut other_h) = (0u64, 0u64);
    for n in s.nodes().iter().filter(|n| n.id != id) {
        match dist.iter().find(|(w, _)| *w == n.id) {
            Some(&(_, h)) if h <= cfg.h_max => {
                if n.internet_connected {
                    ic_h += u64::from(h);
                } else {
                    other_h += u64::from(h);
                }
            }
            _ => unreachable += 1,
        }
    }
    if over_budget {
        links = 0.0;
    }
    let b = oracle_bridging(t, id);
    let reachable_total = links + cfg.gamma * ic_h as f64 + other_h as f64 + b;
    OracleCost {
        total: (unreachable == 0 && !over_budget).then_some(reachable_total),
        unreachable,
        reachable_total,
        over_budget,
    }
}

/// Strict improvement, with two infinite states ranked by unreachable count
/// and then by the cost over reachable peers.
pub fn oracle_improves(before: &OracleCost, after: &OracleCost) -> bool {
    match (before.total, after.total) {
        (Some(b), Some(a)) => a - b < 0.0,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (None, None) => {
            !(before.over_budget || after.over_budget)
                && (after.unreachable < before.unreachable
                    || (after.unreachable == before.unreachable
                        && after.reachable_total - before.reachable_total < 0.0))
        }
    }
}

/// Exhaustive deviation check of both pairwise-stability conditions.
pub fn oracle_stable(s: &Scenario, t: &Topology) -> bool {
    for l in t.links() {
        let without = t.without_link(l).unwrap();
        for id in [l.a().node, l.b().node] {
            if oracle_improves(&oracle_cost(s, t, id), &oracle_cost(s, &without, id)) {
                return false;
            }
        }
    }
    let ids: Vec<NodeId> = s.ids().collect();
    for (x, &a) in ids.iter().enumerate() {
        for &b in &ids[x + 1..] {
            if t.between(a, b).is_some() {
                continue;
            }
            for (ra, rb) in feasible_pairs(s, a, b) {
                let with = t
                    .with_link(Link::new(Endpoint::new(a, ra), Endpoint::new(b, rb)).unwrap())
                    .unwrap();
                if oracle_improves(&oracle_cost(s, t, a), &oracle_cost(s, &with, a))
                    && oracle_improves(&oracle_cost(s, t, b), &oracle_cost(s, &with, b))
                {
                    return false;
                }
            }
        }
    }
    true
}

/// Non-IC nodes with exactly one IC link and at least one non-IC link.
pub fn oracle_relays(s: &Scenario, t: &Topology) -> usize {
    s.non_ic_nodes()
        .filter(|j| {
            let nbrs = incident(t, j.id);
            let ic = nbrs
                .iter()
                .filter(|(p, _, _)| node(s, *p).internet_connected)
                .count();
            ic == 1 && nbrs.len() > ic
        })
        .count()
}
