//! JSON run reports.
//!
//! Field order is fixed by the struct definitions below, so identical runs
//! serialize identically apart from `wall_clock_seconds`. Optional analysis
//! sections are omitted when not requested. The matching JSON Schema ships
//! as `schema/run-report.schema.json`.

use std::fs;
use std::path::Path;

use lv_core::dynamics::{ClosureMetrics, PositivityReport};
use lv_core::model::State;
use lv_core::scheme::{Divergence, SchemeId};
use lv_core::stability::StabilityReport;
use serde::Serialize;

use crate::error::RunError;
use crate::scenario::Scenario;

pub const SCHEMA_ID: &str = "lvlab/run-report/v1";
pub const SCHEMA_JSON: &str = include_str!("../schema/run-report.schema.json");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Overlay error above which the discrete run is not considered to overlap
/// the reference. Chosen for this tool, not derived.
pub const OVERLAY_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsEcho {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceEcho {
    pub scheme: SchemeId,
    pub h: f64,
    pub n_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioEcho {
    pub name: String,
    pub scheme: SchemeId,
    pub params: ParamsEcho,
    pub h: f64,
    pub phi: &'static str,
    pub phi_value: f64,
    pub starts: Vec<State>,
    pub n_steps: usize,
    pub analyses: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceEcho>,
}

impl ScenarioEcho {
    pub fn from_scenario(sc: &Scenario) -> Self {
        let p = &sc.params;
        Self {
            name: sc.name.clone(),
            scheme: sc.scheme,
            params: ParamsEcho {
                alpha: p.alpha(),
                beta: p.beta(),
                gamma: p.gamma(),
                delta: p.delta(),
            },
            h: sc.h.get(),
            phi: sc.phi.name(),
            phi_value: sc.phi.eval(sc.h),
            starts: sc.starts.clone(),
            n_steps: sc.n_steps,
            analyses: sc.analyses.iter().map(|a| a.as_str()).collect(),
            reference: sc
                .reference_h
                .zip(sc.reference_steps())
                .map(|(h, n)| ReferenceEcho {
                    scheme: SchemeId::ReferenceRK4,
                    h: h.get(),
                    n_steps: n,
                }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionSummary {
    /// `continuous`, `euler` or `mickens`.
    pub kind: &'static str,
    pub checked: usize,
    /// States on a dividing line or outside the open quadrant.
    pub skipped: usize,
    pub conforming: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation_step: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlaySummary {
    pub reference_scheme: SchemeId,
    pub reference_h: f64,
    pub samples: usize,
    pub sup_rel_error: f64,
    pub sup_rel_error_x: f64,
    pub sup_rel_error_y: f64,
    pub tolerance: f64,
    pub within_tolerance: bool,
    pub note: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub start: State,
    pub trajectory_file: String,
    pub points: usize,
    pub t_end: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence: Option<Divergence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<DirectionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub positivity: Option<PositivityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub overlay: Option<OverlaySummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub status: &'static str,
    pub scenario: ScenarioEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<Vec<StabilityReport>>,
    pub runs: Vec<RunRecord>,
    pub phase_portrait_file: String,
    pub wall_clock_seconds: f64,
}

pub fn report_to_json(r: &RunReport) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(r)?;
    s.push('\n');
    Ok(s)
}

pub fn emit_report_json(r: &RunReport, path: &Path) -> Result<(), RunError> {
    let text = report_to_json(r).map_err(|e| RunError::io(path, e.into()))?;
    fs::write(path, text).map_err(|e| RunError::io(path, e))
}
