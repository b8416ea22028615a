//! Executes a validated [`Scenario`] and writes its CSV, JSON and SVG outputs.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use lv_core::dynamics::{
    check_direction, compare_overlay, measure_closure, monitor_positivity, DirectionKind,
};
use lv_core::model::fixed_points;
use lv_core::scheme::{simulate, Discretization, PhiFunction, SchemeId, Trajectory};
use lv_core::stability::{classify_continuous, classify_euler, classify_mickens, StabilityReport};

use crate::csv_io::emit_csv;
use crate::error::RunError;
use crate::report::{
    emit_report_json, DirectionSummary, OverlaySummary, RunRecord, RunReport, ScenarioEcho,
    OVERLAY_TOLERANCE, SCHEMA_ID, TOOL_VERSION,
};
use crate::scenario::{Analysis, Scenario};
use crate::svg::emit_phase_svg;

pub const PARTIAL_SUFFIX: &str = ".partial";

/// Paths of every file a run writes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputPaths {
    pub csv: Vec<PathBuf>,
    pub json: PathBuf,
    pub svg: PathBuf,
}

impl OutputPaths {
    pub fn new(sc: &Scenario, dir: &Path, partial: bool) -> Self {
        let suffix = if partial { PARTIAL_SUFFIX } else { "" };
        let file = |name: String| dir.join(format!("{name}{suffix}"));
        let csv = if sc.starts.len() == 1 {
            vec![file(format!("{}.csv", sc.name))]
        } else {
            (1..=sc.starts.len())
                .map(|k| file(format!("{}-start{k}.csv", sc.name)))
                .collect()
        };
        Self {
            csv,
            json: file(format!("{}.json", sc.name)),
            svg: file(format!("{}.svg", sc.name)),
        }
    }

    fn all(&self) -> impl Iterator<Item = &PathBuf> {
        self.csv.iter().chain([&self.json, &self.svg])
    }
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn direction_kind(sc: &Scenario) -> DirectionKind {
    match sc.scheme {
        SchemeId::ReferenceRK4 => DirectionKind::Continuous,
        SchemeId::Euler => DirectionKind::Euler { h: sc.h },
        SchemeId::Mickens => DirectionKind::Mickens {
            phi: sc.phi.eval(sc.h),
        },
    }
}

fn stability(sc: &Scenario) -> Result<Vec<StabilityReport>, RunError> {
    let p = &sc.params;
    fixed_points(p)
        .as_array()
        .into_iter()
        .map(|fp| {
            let r = match sc.scheme {
                SchemeId::ReferenceRK4 => classify_continuous(p, fp),
                SchemeId::Euler => classify_euler(p, sc.h, fp),
                SchemeId::Mickens => classify_mickens(p, sc.phi.eval(sc.h), fp),
            };
            r.map_err(RunError::from)
        })
        .collect()
}

/// Checks every state whose successor exists; boundary states are skipped.
fn direction(sc: &Scenario, traj: &Trajectory) -> DirectionSummary {
    let kind = direction_kind(sc);
    let mut s = DirectionSummary {
        kind: match kind {
            DirectionKind::Continuous => "continuous",
            DirectionKind::Euler { .. } => "euler",
            DirectionKind::Mickens { .. } => "mickens",
        },
        checked: 0,
        skipped: 0,
        conforming: 0,
        violations: 0,
        first_violation_step: None,
    };
    for pt in &traj.points {
        match check_direction(kind, &sc.params, pt.state) {
            Ok(r) => {
                s.checked += 1;
                if r.conforms {
                    s.conforming += 1;
                } else {
                    s.violations += 1;
                    s.first_violation_step.get_or_insert(pt.step);
                }
            }
            Err(_) => s.skipped += 1,
        }
    }
    s
}

fn overlay(sc: &Scenario, traj: &Trajectory) -> Result<Option<OverlaySummary>, RunError> {
    let (Some(href), Some(n)) = (sc.reference_h, sc.reference_steps()) else {
        return Ok(None);
    };
    let Some(s0) = traj.start() else {
        return Ok(None);
    };
    let reference = simulate(
        SchemeId::ReferenceRK4,
        sc.params,
        PhiFunction::Identity,
        href,
        s0,
        n,
    )?;
    let o = compare_overlay(traj, &reference)?;
    Ok(Some(OverlaySummary {
        reference_scheme: SchemeId::ReferenceRK4,
        reference_h: href.get(),
        samples: o.times.len(),
        sup_rel_error: o.sup_rel_error,
        sup_rel_error_x: o.sup_rel_error_x,
        sup_rel_error_y: o.sup_rel_error_y,
        tolerance: OVERLAY_TOLERANCE,
        within_tolerance: o.sup_rel_error <= OVERLAY_TOLERANCE,
        note: "sup over the run's time grid of |run - reference| divided by the reference peak-to-peak amplitude",
    }))
}

/// Everything computed for a scenario, before any file is written.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trajectories: Vec<Trajectory>,
    pub report: RunReport,
}

/// Runs simulations and analyses without touching the file system.
/// File names in the report are relative to the output directory.
pub fn compute(sc: &Scenario) -> Result<RunOutcome, RunError> {
    let clock = Instant::now();
    let disc = Discretization::new(sc.scheme, sc.params, sc.phi, sc.h);
    let trajectories = sc
        .starts
        .iter()
        .map(|&s0| disc.simulate(s0, sc.n_steps))
        .collect::<Result<Vec<_>, _>>()?;
    let diverged = trajectories.iter().any(|t| t.divergence.is_some());
    let paths = OutputPaths::new(sc, Path::new(""), diverged);

    let mut runs = Vec::with_capacity(trajectories.len());
    for ((traj, csv), &s0) in trajectories.iter().zip(&paths.csv).zip(&sc.starts) {
        let closure = if sc.wants(Analysis::Closure) {
            Some(measure_closure(traj, &sc.params)?)
        } else {
            None
        };
        let positivity = if sc.wants(Analysis::Positivity) {
            Some(monitor_positivity(traj)?)
        } else {
            None
        };
        let overlay = if sc.wants(Analysis::Overlay) {
            overlay(sc, traj)?
        } else {
            None
        };
        runs.push(RunRecord {
            start: s0,
            trajectory_file: file_name(csv),
            points: traj.len(),
            t_end: traj.t_end(),
            divergence: traj.divergence,
            direction: sc.wants(Analysis::Direction).then(|| direction(sc, traj)),
            positivity,
            closure,
            overlay,
        });
    }
    let stability = if sc.wants(Analysis::Stability) {
        Some(stability(sc)?)
    } else {
        None
    };
    let report = RunReport {
        schema: SCHEMA_ID,
        tool_version: TOOL_VERSION,
        status: if diverged { "diverged" } else { "ok" },
        scenario: ScenarioEcho::from_scenario(sc),
        stability,
        runs,
        phase_portrait_file: file_name(&paths.svg),
        wall_clock_seconds: clock.elapsed().as_secs_f64(),
    };
    Ok(RunOutcome {
        trajectories,
        report,
    })
}

fn write_all(
    outcome: &RunOutcome,
    sc: &Scenario,
    paths: &OutputPaths,
    written: &mut Vec<PathBuf>,
) -> Result<(), RunError> {
    for (traj, path) in outcome.trajectories.iter().zip(&paths.csv) {
        written.push(path.clone());
        emit_csv(traj, path)?;
    }
    written.push(paths.svg.clone());
    let refs: Vec<&Trajectory> = outcome.trajectories.iter().collect();
    emit_phase_svg(&refs, &sc.params, &paths.svg)?;
    written.push(paths.json.clone());
    emit_report_json(&outcome.report, &paths.json)
}

/// Runs `sc` and writes its outputs under `out_dir`.
///
/// When any trajectory is truncated by overflow, every output carries the
/// `.partial` suffix and [`RunError::Diverged`] is returned. When writing
/// fails, files already written by this call are removed.
pub fn run_scenario(sc: &Scenario, out_dir: &Path) -> Result<RunReport, RunError> {
    let outcome = compute(sc)?;
    fs::create_dir_all(out_dir).map_err(|e| RunError::io(out_dir, e))?;
    let diverged = outcome.report.status == "diverged";
    let paths = OutputPaths::new(sc, out_dir, diverged);
    let mut written = Vec::new();
    if let Err(e) = write_all(&outcome, sc, &paths, &mut written) {
        for p in &written {
            let _ = fs::remove_file(p);
        }
        return Err(e);
    }
    debug_assert!(paths.all().all(|p| p.exists()));
    if diverged {
        let step = outcome
            .trajectories
            .iter()
            .filter_map(|t| t.divergence.map(|d| d.step))
            .min()
            .unwrap_or(0);
        return Err(RunError::Diverged {
            step,
            report: Box::new(outcome.report),
        });
    }
    Ok(outcome.report)
}
