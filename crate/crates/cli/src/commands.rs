use std::fs;
use std::io::Write;
use std::ops::Range;
use std::path::Path;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use netform_core::io::{read_scenario, read_topology, topology_to_json, IoError};
use netform_core::{
    best_response_dynamics, is_pairwise_stable, to_dot, DynamicsOptions, RunReport, ScanOrder,
    Scenario,
};
use rayon::prelude::*;
use serde::Serialize;

const UNSTABLE: u8 = 2;
const NOT_CONVERGED: u8 = 2;

/// Inclusive `gamma` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaRange {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl GammaRange {
    pub fn values(&self) -> Vec<f64> {
        if self.start == self.end {
            return vec![self.start];
        }
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for GammaRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
            .collect::<Result<_, _>>()?;
        let range = match parts[..] {
            [g] => GammaRange {
                start: g,
                end: g,
                step: 1.0,
            },
            [a, b, step] => GammaRange {
                start: a,
                end: b,
                step,
            },
            _ => return Err("expected A:B:STEP or a single value".into()),
        };
        if !range.start.is_finite() || !range.end.is_finite() || range.end < range.start {
            return Err("range end must be finite and not below its start".into());
        }
        if range.end > range.start && !(range.step.is_finite() && range.step > 0.0) {
            return Err("step must be positive".into());
        }
        Ok(range)
    }
}

/// Prints validation failures one JSON path per line.
pub fn report_error(err: &anyhow::Error) {
    if let Some(IoError::Invalid(report)) = err.downcast_ref::<IoError>() {
        eprintln!("error: invalid scenario");
        for v in &report.violations {
            eprintln!("  {}: {}", v.path, v.message);
        }
        return;
    }
    eprintln!("error: {err:#}");
}

fn options(seed: u64, order: ScanOrder, max_steps: usize) -> DynamicsOptions {
    DynamicsOptions {
        seed,
        order,
        max_steps,
    }
}

fn run_once(scenario: &Scenario, opts: DynamicsOptions, out: Option<&Path>) -> Result<RunReport> {
    let outcome = best_response_dynamics(scenario, opts);
    let report = RunReport::new(scenario, &outcome)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let write = |name: &str, body: &str| {
            let path = dir.join(name);
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))
        };
        write("report.json", &report.to_json())?;
        write("trace.jsonl", &outcome.trace.to_jsonl())?;
        write("topology.dot", &to_dot(scenario, &outcome.topology))?;
        write("topology.json", &topology_to_json(&outcome.topology))?;
    }
    Ok(report)
}

pub fn run(
    scenario: &Path,
    seed: u64,
    order: ScanOrder,
    max_steps: usize,
    out: &Path,
) -> Result<ExitCode> {
    let s: Scenario = read_scenario(scenario)?;
    let report = run_once(&s, options(seed, order, max_steps), Some(out))?;
    let r = &report.result;
    println!(
        "{} after {} steps: {} links, stable={}, ic_clique={}, relays={}, hash={}",
        if report.converged {
            "converged"
        } else {
            "not converged"
        },
        report.steps,
        r.topology.len(),
        r.stability.stable,
        r.structure.ic_clique,
        r.structure.relays.len(),
        r.topology_hash,
    );
    Ok(if report.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(NOT_CONVERGED)
    })
}

pub fn check(scenario: &Path, topology: &Path, out: Option<&Path>) -> Result<ExitCode> {
    let s: Scenario = read_scenario(scenario)?;
    let t = read_topology(topology, &s)?;
    let report = is_pairwise_stable(&s, &t)?;
    let json = serde_json::to_string_pretty(&report)?;
    println!("{json}");
    if let Some(path) = out {
        fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if report.stable {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(UNSTABLE)
    })
}

#[derive(Serialize)]
struct SweepRow {
    gamma: f64,
    seed: u64,
    converged: bool,
    steps: usize,
    stable: bool,
    clique_criterion: bool,
    single_ic_link_criterion: bool,
    star_criterion: bool,
    ic_clique: bool,
    max_non_ic_degree: usize,
    max_ic_links_per_non_ic: usize,
    relays: usize,
    hierarchy_tiers: usize,
    links: usize,
    topology_hash: String,
}

impl SweepRow {
    fn new(gamma: f64, r: RunReport) -> Self {
        let t = r.result;
        SweepRow {
            gamma,
            seed: r.seed,
            converged: r.converged,
            steps: r.steps,
            stable: t.stability.stable,
            clique_criterion: t.criteria.clique_criterion.holds,
            single_ic_link_criterion: t.criteria.single_ic_link_criterion.holds,
            star_criterion: t.criteria.star_criterion.holds,
            ic_clique: t.structure.ic_clique,
            max_non_ic_degree: t.structure.max_non_ic_degree,
            max_ic_links_per_non_ic: t.structure.max_ic_links_per_non_ic,
            relays: t.structure.relays.len(),
            hierarchy_tiers: t.structure.hierarchy_tiers,
            links: t.topology.len(),
            topology_hash: t.topology_hash,
        }
    }
}

pub fn sweep(
    scenario: &Path,
    gamma: &GammaRange,
    seeds: Range<u64>,
    order: ScanOrder,
    max_steps: usize,
    out: Option<&Path>,
) -> Result<ExitCode> {
    let base: Scenario = read_scenario(scenario)?;
    if seeds.is_empty() {
        bail!("--seeds must be at least 1");
    }
    let scenarios = gamma
        .values()
        .into_iter()
        .map(|g| base.with_gamma(g).map(|s| (g, s)).map_err(IoError::Invalid))
        .collect::<Result<Vec<_>, _>>()?;
    let jobs: Vec<(f64, &Scenario, u64)> = scenarios
        .iter()
        .flat_map(|(g, s)| seeds.clone().map(move |seed| (*g, s, seed)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(g, s, seed)| {
            let dir = out.map(|d| d.join(format!("gamma_{g}_seed_{seed}")));
            run_once(s, options(seed, order, max_steps), dir.as_deref())
                .map(|r| SweepRow::new(g, r))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut csv = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        csv.serialize(row)?;
    }
    let bytes = csv.into_inner().context("flushing CSV")?;
    match out {
        Some(dir) => {
            let path = dir.join("sweep.csv");
            fs::write(&path, &bytes).with_context(|| format!("writing {}", path.display()))?;
        }
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(ExitCode::SUCCESS)
}
