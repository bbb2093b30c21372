//! Physical-layer feasibility.
//!
//! Required transmit power follows a generalised Friis model:
//!
//! ```text
//! P_req = S_rx * (4 * pi * d * f / c)^eta / (G_tx * G_rx)
//! ```
//!
//! where `eta` is the configured path loss exponent; `eta = 2` is free space.
//! Fading and noise are not modelled.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::model::{GameConfig, InterfaceSpec, Node, NodeId, Scenario};
use crate::scalar::Scalar;
use crate::value::CostValue;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum PropagationError {
    #[error("interfaces differ in kind or frequency")]
    Incompatible,
    #[error("distance must be positive and finite")]
    BadDistance,
}

/// Minimum power `tx` must radiate for `rx` to hear it at `distance_m`.
pub fn required_tx_power<T: Scalar>(
    tx: &InterfaceSpec<T>,
    rx: &InterfaceSpec<T>,
    distance_m: T,
    config: &GameConfig<T>,
) -> Result<T, PropagationError> {
    if !tx.compatible_with(rx) {
        return Err(PropagationError::Incompatible);
    }
    if !(distance_m.is_finite() && distance_m > T::zero()) {
        return Err(PropagationError::BadDistance);
    }
    let four_pi = T::lit(4.0) * T::PI();
    let electrical = four_pi * distance_m * tx.frequency_hz / config.speed_of_light_m_s;
    Ok(
        rx.rx_sensitivity_w * electrical.powf(config.path_loss_exponent)
            / (tx.antenna_gain * rx.antenna_gain),
    )
}

/// One-directional budget check for a transmitter/receiver pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LinkBudget<T = f64> {
    pub required_tx_power_w: CostValue<T>,
    pub feasible: bool,
}

/// Budget for `tx` reaching `rx`. Co-located interfaces need no power;
/// incompatible ones can never hear each other.
pub fn link_budget<T: Scalar>(
    tx: &InterfaceSpec<T>,
    rx: &InterfaceSpec<T>,
    distance_m: T,
    config: &GameConfig<T>,
) -> LinkBudget<T> {
    let required = if distance_m == T::zero() && tx.compatible_with(rx) {
        Ok(T::zero())
    } else {
        required_tx_power(tx, rx, distance_m, config)
    };
    match required {
        Ok(p) => LinkBudget {
            required_tx_power_w: CostValue::Finite(p),
            feasible: p <= tx.max_tx_power_w,
        },
        Err(_) => LinkBudget {
            required_tx_power_w: CostValue::Infinite,
            feasible: false,
        },
    }
}

/// Whether a bidirectional link on `(r_i, r_j)` fits both power budgets.
pub fn link_feasible<T: Scalar>(
    node_i: &Node<T>,
    r_i: usize,
    node_j: &Node<T>,
    r_j: usize,
    config: &GameConfig<T>,
) -> bool {
    let (Some(ii), Some(ij)) = (node_i.interface(r_i), node_j.interface(r_j)) else {
        return false;
    };
    if node_i.id == node_j.id {
        return false;
    }
    let d = node_i.distance_to(node_j);
    link_budget(ii, ij, d, config).feasible && link_budget(ij, ii, d, config).feasible
}

/// A feasible peer of some node and the interface pair that reaches it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Neighbor {
    pub peer: NodeId,
    pub local_interface: usize,
    pub remote_interface: usize,
}

/// Every `(peer, local, remote)` combination within radio range of `node`.
pub fn neighborhood<T: Scalar>(
    node: &Node<T>,
    nodes: &[Node<T>],
    config: &GameConfig<T>,
) -> BTreeSet<Neighbor> {
    let mut out = BTreeSet::new();
    for peer in nodes.iter().filter(|p| p.id != node.id) {
        for ri in 0..node.interfaces.len() {
            for rj in 0..peer.interfaces.len() {
                if link_feasible(node, ri, peer, rj, config) {
                    out.insert(Neighbor {
                        peer: peer.id,
                        local_interface: ri,
                        remote_interface: rj,
                    });
                }
            }
        }
    }
    out
}

/// Feasible interface pairs between two scenario nodes, lowest first.
pub fn feasible_pairings<T: Scalar>(
    scenario: &Scenario<T>,
    a: NodeId,
    b: NodeId,
) -> Vec<(usize, usize)> {
    let (Some(na), Some(nb)) = (scenario.node(a), scenario.node(b)) else {
        return Vec::new();
    };
    scenario
        .common_interfaces(a, b)
        .into_iter()
        .filter(|&(ra, rb)| link_feasible(na, ra, nb, rb, scenario.config()))
        .collect()
}
