//! Reference interfaces and the shipped ten-node smart-home scenario.
//!
//! Interface parameters are the published ones. Node positions lie on a
//! 30 m by 30 m floor and, like the energy weights, are chosen here:
//!
//! | ids  | class  | interfaces             | min bitrate |
//! |------|--------|------------------------|-------------|
//! | 1-4  | IC     | wlan, bluetooth, zwave | 10 Mbps     |
//! | 5-7  | non-IC | bluetooth, zwave       | 0.5 Mbps    |
//! | 8-10 | non-IC | zwave                  | 5 kbps      |

use crate::io::parse_scenario;
use crate::model::{InterfaceSpec, Scenario};
use crate::scalar::Scalar;

/// Raw JSON of the smart-home scenario at `gamma = 570`.
pub const SMART_HOME_JSON: &str = include_str!("../fixtures/smart_home_10.json");

fn interface<T: Scalar>(kind: &str, f: f64, b: f64, tx: f64, s: f64) -> InterfaceSpec<T> {
    InterfaceSpec {
        kind: kind.to_string(),
        frequency_hz: T::lit(f),
        max_bitrate_bps: T::lit(b),
        max_tx_power_w: T::lit(tx),
        rx_sensitivity_w: T::lit(s),
        antenna_gain: T::one(),
    }
}

/// 2.4 GHz, 300 Mbps, 1 W, -80 dBm.
pub fn wlan<T: Scalar>() -> InterfaceSpec<T> {
    interface("wlan", 2.4e9, 3e8, 1.0, 1e-11)
}

/// 2.4 GHz, 2 Mbps, 25 mW, -70 dBm.
pub fn bluetooth<T: Scalar>() -> InterfaceSpec<T> {
    interface("bluetooth", 2.4e9, 2e6, 0.025, 1e-10)
}

/// 908 MHz, 40 kbps, 1 mW, about -92 dBm.
pub fn zwave<T: Scalar>() -> InterfaceSpec<T> {
    interface("zwave", 9.08e8, 4e4, 1e-3, 6.3e-13)
}

/// A second WLAN radio on a separate network, otherwise identical to [`wlan`].
pub fn wlan2<T: Scalar>() -> InterfaceSpec<T> {
    interface("wlan_b", 2.4e9, 3e8, 1.0, 1e-11)
}

/// The smart-home scenario at `gamma = 570`.
pub fn smart_home<T: Scalar>() -> Scenario<T> {
    parse_scenario(SMART_HOME_JSON).expect("shipped fixture is valid")
}

/// The smart-home scenario with a different `gamma`.
pub fn smart_home_at<T: Scalar>(gamma: T) -> Scenario<T> {
    smart_home::<T>().with_gamma(gamma).expect("gamma >= 1")
}
