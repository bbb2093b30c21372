//! Bilateral network-formation game among heterogeneous multi-interface
//! IoT nodes.
//!
//! Nodes carry several radios. A link between two nodes uses one compatible
//! radio on each side and forms only with both owners' consent. Each node
//! pays for the energy of its links, for hop distance to internet-connected
//! (IC) nodes weighted by `gamma`, for hop distance to the other nodes, and
//! for its bridging burden. The crate computes these costs, tests pairwise
//! stability, runs seeded best-response dynamics, enumerates stable
//! topologies of small instances, and evaluates sufficient conditions for
//! the predicted IC-clique and star structures.
//!
//! The model is generic over [`Scalar`] (`f32` or `f64`); the `*64` and `*32`
//! aliases fix the scalar type.

pub mod cost;
pub mod fixtures;
pub mod game;
pub mod io;
pub mod model;
pub mod propagation;
pub mod report;
pub mod scalar;
pub mod theorems;
pub mod validate;
pub mod value;

pub use cost::{
    all_costs, beta, bridging_coefficient, hop_distances, link_cost_sum, total_cost, CostBreakdown,
    CostError,
};
pub use game::{
    best_response_dynamics, brute_force_stable_set, delta_cost_add, delta_cost_remove,
    enumeration_size, evaluate_add, evaluate_remove, is_pairwise_stable, propose_add, Deviation,
    DynamicsOptions, DynamicsOutcome, DynamicsTrace, GameError, Incomparable, Move, Rejection,
    ScanOrder, StabilityReport,
};
pub use model::{
    Endpoint, GameConfig, InterfaceSpec, Link, ModelError, Node, NodeId, Scenario, TieBreak,
    Topology,
};
pub use propagation::{
    feasible_pairings, link_budget, link_feasible, neighborhood, required_tx_power, LinkBudget,
};
pub use report::{to_dot, RunReport, TopologyReport};
pub use scalar::Scalar;
pub use theorems::{check_structure, criteria, CriteriaReport, StructureReport};
pub use validate::{validate_scenario, ValidationReport, Violation, ViolationKind};
pub use value::{CostDelta, CostValue};

pub type Scenario64 = Scenario<f64>;
pub type Scenario32 = Scenario<f32>;
pub type Node64 = Node<f64>;
pub type Node32 = Node<f32>;
pub type InterfaceSpec64 = InterfaceSpec<f64>;
pub type InterfaceSpec32 = InterfaceSpec<f32>;
pub type GameConfig64 = GameConfig<f64>;
pub type GameConfig32 = GameConfig<f32>;
pub type CostValue64 = CostValue<f64>;
pub type CostValue32 = CostValue<f32>;
pub type RunReport64 = RunReport<f64>;
pub type RunReport32 = RunReport<f32>;
