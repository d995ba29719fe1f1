//! Family scans comparing `P^+_h(1)`, `P_h(1)` and the counting oracle.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use plumb_core::families::{self, FamilySpec, Limits};
use plumb_core::graph::parse_graph;
use plumb_core::zeta::{self, InvariantOptions};
use plumb_core::{rational, Error, PlumbingGraph, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Generated(FamilySpec),
    Files(Vec<PathBuf>),
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub source: Source,
    pub seed: u64,
    pub count: usize,
    pub limits: Limits,
    /// Enumeration cap per counting run; larger instances are skipped.
    pub budget: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    family: serde_json::Value,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    count: usize,
    #[serde(default)]
    limits: Option<Limits>,
    #[serde(default)]
    budget: Option<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FilesFamily {
    #[allow(dead_code)]
    family: String,
    paths: Vec<PathBuf>,
}

impl ScanConfig {
    /// `{"family": {"family": "surgery", ...}, "seed": 1, "count": 20,
    /// "limits": {...}, "budget": 1000000}`, or a `from-files` family with
    /// `paths`.
    pub fn parse(text: &str) -> Result<Self> {
        let malformed = |e: serde_json::Error| Error::Malformed(e.to_string());
        let raw: RawConfig = serde_json::from_str(text).map_err(malformed)?;
        let source = if raw.family.get("family").and_then(|v| v.as_str()) == Some("from-files") {
            Source::Files(serde_json::from_value::<FilesFamily>(raw.family).map_err(malformed)?.paths)
        } else {
            Source::Generated(serde_json::from_value(raw.family).map_err(malformed)?)
        };
        let budget = raw.budget.unwrap_or_else(plumb_core::term_cap_from_env);
        if budget == 0 {
            return Err(Error::InvalidArgument("budget must be positive".into()));
        }
        Ok(ScanConfig {
            source,
            seed: raw.seed,
            count: raw.count,
            limits: raw.limits.unwrap_or_default(),
            budget,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassRow {
    pub h: Vec<i64>,
    pub p_plus_at_1: String,
    pub p_at_1: String,
    pub sw_oracle: String,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceSummary {
    pub label: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det: Option<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassRow>,
    pub p_equals_p_plus: bool,
    /// The graph, when `P^+_h(1)` and the oracle disagree for some class.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub instances: Vec<InstanceSummary>,
    pub total: usize,
    pub skipped: usize,
    /// Instances where `P^+_h(1)` equals the oracle for every class.
    pub agreeing: usize,
    /// Instances with `P_h = P^+_h` for every class.
    pub p_equals_p_plus: usize,
    pub counterexamples: usize,
}

fn load(cfg: &ScanConfig) -> Result<Vec<(String, PlumbingGraph)>> {
    match &cfg.source {
        Source::Generated(family) => Ok(families::sample(family, cfg.seed, cfg.count, cfg.limits)?
            .into_iter()
            .map(|i| (i.label, i.graph))
            .collect()),
        Source::Files(paths) => paths
            .iter()
            .map(|p| {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Malformed(format!("{}: {e}", p.display())))?;
                Ok((p.display().to_string(), parse_graph(&text)?))
            })
            .collect(),
    }
}

fn scan_one(label: String, graph: &PlumbingGraph, budget: u64, timing: bool) -> Result<InstanceSummary> {
    let t0 = Instant::now();
    let opts = InvariantOptions {
        oracle: true,
        root_check: false,
        term_cap: budget,
        ..InvariantOptions::default()
    };
    let skipped = |reason: String| InstanceSummary {
        label: label.clone(),
        status: Status::Skipped,
        det: None,
        classes: Vec::new(),
        p_equals_p_plus: false,
        counterexample: None,
        reason: Some(reason),
        millis: None,
    };
    let report = match zeta::sw_invariants(graph, &opts) {
        Ok(r) => r,
        Err(e @ (Error::BudgetExceeded(_) | Error::NoNodes | Error::Overflow(_))) => return Ok(skipped(e.to_string())),
        Err(e) => return Err(e),
    };
    let classes: Vec<ClassRow> = report
        .classes
        .iter()
        .map(|c| ClassRow {
            h: c.h.0.to_vec(),
            p_plus_at_1: rational::to_string(&c.p_plus_at_1),
            p_at_1: rational::to_string(&c.p_at_1),
            sw_oracle: rational::to_string(&c.sw_norm),
            agree: c.p_plus_at_1 == c.sw_norm,
        })
        .collect();
    let mismatch = classes.iter().any(|c| !c.agree);
    Ok(InstanceSummary {
        label,
        status: Status::Ok,
        det: Some(report.det),
        p_equals_p_plus: report.classes.iter().all(|c| c.p == c.p_plus),
        classes,
        counterexample: if mismatch {
            serde_json::from_str(&graph.to_json()).ok()
        } else {
            None
        },
        reason: None,
        millis: timing.then(|| t0.elapsed().as_millis() as u64),
    })
}

pub fn run(cfg: &ScanConfig, timing: bool) -> Result<Summary> {
    let graphs = load(cfg)?;
    let instances = graphs
        .into_par_iter()
        .map(|(label, g)| scan_one(label, &g, cfg.budget, timing))
        .collect::<Result<Vec<_>>>()?;
    let ok = || instances.iter().filter(|i| matches!(i.status, Status::Ok));
    Ok(Summary {
        total: instances.len(),
        skipped: instances.len() - ok().count(),
        agreeing: ok().filter(|i| i.classes.iter().all(|c| c.agree)).count(),
        p_equals_p_plus: ok().filter(|i| i.p_equals_p_plus).count(),
        counterexamples: ok().filter(|i| i.counterexample.is_some()).count(),
        instances,
    })
}

pub fn write_csv(summary: &Summary, path: &Path) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["det", "h", "p_plus_at_1", "p_at_1", "sw_oracle", "agree"])?;
    for inst in summary.instances.iter().filter(|i| matches!(i.status, Status::Ok)) {
        let det = inst.det.unwrap_or_default().to_string();
        for c in &inst.classes {
            let h = c.h.iter().map(i64::to_string).collect::<Vec<_>>().join(";");
            w.write_record([det.as_str(), &h, &c.p_plus_at_1, &c.p_at_1, &c.sw_oracle, if c.agree { "true" } else { "false" }])?;
        }
    }
    w.flush()?;
    Ok(())
}
