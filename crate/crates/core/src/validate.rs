//! Report-style scenario validation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{GameConfig, Node, NodeId};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NoNodes,
    DuplicateId,
    NoInterfaces,
    NonPositive,
    SensitivityAboveTxPower,
    Gamma,
    HopLimit,
    PathLossExponent,
    Parse,
}

/// One broken invariant, located by a JSON-style path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub node: Option<NodeId>,
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, path: String, node: Option<NodeId>, kind: ViolationKind, message: String) {
        self.violations.push(Violation {
            path,
            node,
            kind,
            message,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.path, v.message)?;
        }
        Ok(())
    }
}

fn positive<T: Scalar>(v: T) -> bool {
    v.is_finite() && v > T::zero()
}

/// Checks every type invariant on a node set and configuration.
///
/// An empty report means the scenario is usable.
pub fn validate_scenario<T: Scalar>(nodes: &[Node<T>], config: &GameConfig<T>) -> ValidationReport {
    let mut report = ValidationReport::default();

    if !(config.gamma.is_finite() && config.gamma >= T::one()) {
        report.push(
            "config.gamma".into(),
            None,
            ViolationKind::Gamma,
            format!("gamma must be >= 1, got {}", config.gamma),
        );
    }
    if !positive(config.alpha) {
        report.push(
            "config.alpha".into(),
            None,
            ViolationKind::NonPositive,
            format!("alpha must be > 0, got {}", config.alpha),
        );
    }
    if config.h_max == 0 {
        report.push(
            "config.h_max".into(),
            None,
            ViolationKind::HopLimit,
            "h_max must be at least 1".into(),
        );
    }
    if !(config.path_loss_exponent.is_finite() && config.path_loss_exponent >= T::lit(2.0)) {
        report.push(
            "config.path_loss_exponent".into(),
            None,
            ViolationKind::PathLossExponent,
            format!(
                "path loss exponent must be >= 2, got {}",
                config.path_loss_exponent
            ),
        );
    }
    if !positive(config.speed_of_light_m_s) {
        report.push(
            "config.speed_of_light_m_s".into(),
            None,
            ViolationKind::NonPositive,
            "speed of light must be > 0".into(),
        );
    }

    if nodes.is_empty() {
        report.push(
            "nodes".into(),
            None,
            ViolationKind::NoNodes,
            "scenario has no nodes".into(),
        );
    }

    let mut seen: BTreeMap<NodeId, usize> = BTreeMap::new();
    for (ni, node) in nodes.iter().enumerate() {
        let base = format!("nodes[{ni}]");
        let id = Some(node.id);
        if let Some(first) = seen.insert(node.id, ni) {
            report.push(
                format!("{base}.id"),
                id,
                ViolationKind::DuplicateId,
                format!("id {} already used by nodes[{first}]", node.id),
            );
        }
        if !(node.position[0].is_finite() && node.position[1].is_finite()) {
            report.push(
                format!("{base}.position"),
                id,
                ViolationKind::NonPositive,
                "position must be finite".into(),
            );
        }
        if !positive(node.min_required_bitrate_bps) {
            report.push(
                format!("{base}.min_required_bitrate_bps"),
                id,
                ViolationKind::NonPositive,
                "minimum required bitrate must be > 0".into(),
            );
        }
        if !positive(node.energy_weight) {
            report.push(
                format!("{base}.energy_weight"),
                id,
                ViolationKind::NonPositive,
                "energy weight must be > 0".into(),
            );
        }
        if node.interfaces.is_empty() {
            report.push(
                format!("{base}.interfaces"),
                id,
                ViolationKind::NoInterfaces,
                "node has no radio interfaces".into(),
            );
        }
        for (ri, iface) in node.interfaces.iter().enumerate() {
            let ipath = format!("{base}.interfaces[{ri}]");
            let fields = [
                ("frequency_hz", iface.frequency_hz),
                ("max_bitrate_bps", iface.max_bitrate_bps),
                ("max_tx_power_w", iface.max_tx_power_w),
                ("rx_sensitivity_w", iface.rx_sensitivity_w),
                ("antenna_gain", iface.antenna_gain),
            ];
            for (name, value) in fields {
                if !positive(value) {
                    report.push(
                        format!("{ipath}.{name}"),
                        id,
                        ViolationKind::NonPositive,
                        format!("{name} must be > 0, got {value}"),
                    );
                }
            }
            if iface.rx_sensitivity_w >= iface.max_tx_power_w {
                report.push(
                    format!("{ipath}.rx_sensitivity_w"),
                    id,
                    ViolationKind::SensitivityAboveTxPower,
                    format!(
                        "receiver sensitivity {} W is not below max tx power {} W",
                        iface.rx_sensitivity_w, iface.max_tx_power_w
                    ),
                );
            }
        }
    }
    report
}
