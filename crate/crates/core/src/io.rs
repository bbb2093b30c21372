//! JSON scenario and topology files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{GameConfig, ModelError, Node, Scenario, Topology};
use crate::scalar::Scalar;
use crate::validate::{ValidationReport, Violation, ViolationKind};

/// On-disk shape of a scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Scalar"))]
pub struct ScenarioFile<T = f64> {
    pub config: GameConfig<T>,
    pub nodes: Vec<Node<T>>,
}

impl<T: Scalar> From<&Scenario<T>> for ScenarioFile<T> {
    fn from(s: &Scenario<T>) -> Self {
        ScenarioFile {
            config: s.config().clone(),
            nodes: s.nodes().to_vec(),
        }
    }
}

impl<T: Scalar> TryFrom<ScenarioFile<T>> for Scenario<T> {
    type Error = ValidationReport;

    fn try_from(f: ScenarioFile<T>) -> Result<Self, Self::Error> {
        Scenario::new(f.config, f.nodes)
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Malformed JSON or a schema mismatch; the report carries the JSON path.
    #[error("invalid scenario: {0}")]
    Invalid(ValidationReport),
    #[error("invalid topology: {0}")]
    Topology(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn parse_report(err: serde_path_to_error::Error<serde_json::Error>) -> ValidationReport {
    let path = err.path().to_string();
    let message = err.into_inner().to_string();
    ValidationReport {
        violations: vec![Violation {
            path: if path == "." { "$".into() } else { path },
            node: None,
            kind: ViolationKind::Parse,
            message,
        }],
    }
}

pub fn parse_scenario<T: Scalar>(json: &str) -> Result<Scenario<T>, IoError> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let file: ScenarioFile<T> =
        serde_path_to_error::deserialize(de).map_err(|e| IoError::Invalid(parse_report(e)))?;
    Scenario::try_from(file).map_err(IoError::Invalid)
}

pub fn read_scenario<T: Scalar>(path: impl AsRef<Path>) -> Result<Scenario<T>, IoError> {
    parse_scenario(&read(path.as_ref())?)
}

pub fn scenario_to_json<T: Scalar>(scenario: &Scenario<T>) -> String {
    serde_json::to_string_pretty(&ScenarioFile::from(scenario)).expect("scenario serialises")
}

/// Parses a topology and checks it against the scenario.
pub fn parse_topology<T: Scalar>(json: &str, scenario: &Scenario<T>) -> Result<Topology, IoError> {
    let de = &mut serde_json::Deserializer::from_str(json);
    let topology: Topology = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        IoError::Topology(format!("{path}: {}", e.into_inner()))
    })?;
    topology.validate(scenario)?;
    Ok(topology)
}

pub fn read_topology<T: Scalar>(
    path: impl AsRef<Path>,
    scenario: &Scenario<T>,
) -> Result<Topology, IoError> {
    parse_topology(&read(path.as_ref())?, scenario)
}

pub fn topology_to_json(topology: &Topology) -> String {
    serde_json::to_string_pretty(topology).expect("topology serialises")
}

fn read(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_path_buf(),
        source,
    })
}
