//! Qualitative checks on states and trajectories: region membership,
//! direction of motion, positivity, orbit closure and overlay error.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{first_integral, fixed_points, vector_field, ModelParams, State};
use crate::scheme::{euler_step, mickens_step_with_phi, StepSize, Trajectory, TrajectoryPoint};

/// Distance to a dividing line (relative to the line's coordinate) under
/// which a state counts as lying on it.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Per-period relative drift separating `Closed` from spiralling.
pub const CLOSURE_DRIFT_TOL: f64 = 0.005;

/// Open regions of the positive quadrant cut by `x = delta/gamma` and
/// `y = alpha/beta`, numbered counterclockwise from the upper right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionId {
    I,
    II,
    III,
    IV,
    /// On the vertical line `x = delta/gamma`.
    BoundaryX,
    /// On the horizontal line `y = alpha/beta`.
    BoundaryY,
    /// Some coordinate is `<= 0`.
    Exterior,
}

impl RegionId {
    pub fn is_interior(&self) -> bool {
        matches!(
            self,
            RegionId::I | RegionId::II | RegionId::III | RegionId::IV
        )
    }
}

fn on_line(v: f64, line: f64) -> bool {
    (v - line).abs() <= BOUNDARY_TOL * line.max(1.0)
}

pub fn classify_region(p: &ModelParams, s: State) -> RegionId {
    if s.x <= 0.0 || s.y <= 0.0 {
        return RegionId::Exterior;
    }
    let (xc, yc) = (p.prey_threshold(), p.predator_threshold());
    if on_line(s.x, xc) {
        return RegionId::BoundaryX;
    }
    if on_line(s.y, yc) {
        return RegionId::BoundaryY;
    }
    match (s.x > xc, s.y > yc) {
        (true, true) => RegionId::I,
        (false, true) => RegionId::II,
        (false, false) => RegionId::III,
        (true, false) => RegionId::IV,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(v: f64) -> Sign {
        match v.partial_cmp(&0.0) {
            Some(Ordering::Less) => Sign::Negative,
            Some(Ordering::Greater) => Sign::Positive,
            _ => Sign::Zero,
        }
    }
}

/// Which dynamics a direction check runs against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DirectionKind {
    Continuous,
    Euler { h: StepSize },
    Mickens { phi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub region: RegionId,
    pub dx_sign: Sign,
    pub dy_sign: Sign,
    pub conforms: bool,
}

/// Expected prey direction: decreasing above `y = alpha/beta` (I, II),
/// increasing below it (III, IV).
fn expected_dx(p: &ModelParams, y: f64) -> Sign {
    Sign::of(p.predator_threshold() - y)
}

/// Expected predator direction: decreasing left of `x = delta/gamma` (II, III),
/// increasing right of it (I, IV).
fn expected_dy(p: &ModelParams, x: f64) -> Sign {
    Sign::of(x - p.prey_threshold())
}

/// Compares the direction of motion at `s` with the region sign table.
///
/// For discrete maps the increments are `x' - x` and `y' - y`. The Mickens
/// predator update uses the fresh prey value, so its expected sign is read
/// from `x'` rather than `x`.
pub fn check_direction(kind: DirectionKind, p: &ModelParams, s: State) -> Result<DirectionReport> {
    let region = classify_region(p, s);
    if !region.is_interior() {
        return Err(Error::AmbiguousRegion { x: s.x, y: s.y });
    }
    let (dx, dy, x_for_dy) = match kind {
        DirectionKind::Continuous => {
            let (dx, dy) = vector_field(p, s);
            (dx, dy, s.x)
        }
        DirectionKind::Euler { h } => {
            let next = euler_step(p, h, s);
            (next.x - s.x, next.y - s.y, s.x)
        }
        DirectionKind::Mickens { phi } => {
            let next = mickens_step_with_phi(p, phi, s)?;
            (next.x - s.x, next.y - s.y, next.x)
        }
    };
    let dx_sign = Sign::of(dx);
    let dy_sign = Sign::of(dy);
    let conforms = dx_sign == expected_dx(p, s.y) && dy_sign == expected_dy(p, x_for_dy);
    Ok(DirectionReport {
        region,
        dx_sign,
        dy_sign,
        conforms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    X,
    Y,
}

/// How a trajectory first left the positive quadrant.
///
/// A prey overshoot needs a decreasing prey, i.e. `y > alpha/beta` before the
/// step; a predator overshoot needs `x < delta/gamma`. The variant names refer
/// to the small-step picture where the exit happens from region II or III.
/// With large steps the predecessor can sit in region I (prey) or IV
/// (predator); [`PositivityReport::predecessor_region`] records where it was.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExitCase {
    /// Prey overshoots zero while predators are above `alpha/beta`.
    #[serde(rename = "RegionII_xCross")]
    RegionIIxCross,
    /// Predator overshoots zero while prey is below `delta/gamma`.
    #[serde(rename = "RegionIII_yCross")]
    RegionIIIyCross,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub first_negative_step: Option<usize>,
    pub negative_variable: Option<Variable>,
    pub recovered_positive_step: Option<usize>,
    pub exit_case: Option<ExitCase>,
    /// Region of the last state before the first negative one.
    pub predecessor_region: Option<RegionId>,
}

impl PositivityReport {
    pub fn is_empty(&self) -> bool {
        self.first_negative_step.is_none()
    }
}

/// Finds the first negative coordinate and whether it later turns positive.
pub fn monitor_positivity(traj: &Trajectory) -> Result<PositivityReport> {
    if traj.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let pts = &traj.points;
    let Some(first) = pts
        .iter()
        .position(|pt| pt.state.x < 0.0 || pt.state.y < 0.0)
    else {
        return Ok(PositivityReport::default());
    };
    let bad = pts[first].state;
    let variable = if bad.x < 0.0 {
        Variable::X
    } else {
        Variable::Y
    };
    let p = &traj.params;
    let prev = first.checked_sub(1).map(|i| pts[i].state);
    let predecessor_region = prev.map(|s| classify_region(p, s));
    let exit_case = prev.and_then(|s| match variable {
        Variable::X if s.y > p.predator_threshold() => Some(ExitCase::RegionIIxCross),
        Variable::Y if s.x < p.prey_threshold() => Some(ExitCase::RegionIIIyCross),
        _ => None,
    });
    let coord = |pt: &TrajectoryPoint| match variable {
        Variable::X => pt.state.x,
        Variable::Y => pt.state.y,
    };
    let recovered = pts[first + 1..]
        .iter()
        .find(|pt| coord(pt) > 0.0)
        .map(|pt| pt.step);
    Ok(PositivityReport {
        first_negative_step: Some(pts[first].step),
        negative_variable: Some(variable),
        recovered_positive_step: recovered,
        exit_case,
        predecessor_region,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosureVerdict {
    Closed,
    SpiralOut,
    SpiralIn,
    Inconclusive,
}

/// An upward crossing of the section `{y = alpha/beta, x > delta/gamma}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionCrossing {
    pub t: f64,
    pub x: f64,
    /// First integral at the crossing.
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureMetrics {
    pub crossings: Vec<SectionCrossing>,
    /// `(x_{k+1} - x_k) / x_k` for consecutive crossings.
    pub drift_per_period: Vec<f64>,
    /// `(V_k - V_0) / (V_0 - V_min)`: change of the first integral relative to
    /// its excess over the equilibrium value at the first crossing.
    pub v_drift: Vec<f64>,
    pub verdict: ClosureVerdict,
}

impl ClosureMetrics {
    pub fn max_abs_drift(&self) -> f64 {
        self.drift_per_period
            .iter()
            .fold(0.0, |m, d| m.max(d.abs()))
    }

    pub fn total_v_drift(&self) -> f64 {
        self.v_drift.last().copied().unwrap_or(0.0)
    }
}

/// Minimum distance from the coexistence equilibrium for a closure run.
pub const CLOSURE_MIN_START_DISTANCE: f64 = 1e-6;

/// Locates upward section crossings by linear interpolation between the
/// bracketing steps and classifies the orbit from their drift.
pub fn measure_closure(traj: &Trajectory, p: &ModelParams) -> Result<ClosureMetrics> {
    let start = traj.start().ok_or(Error::EmptyTrajectory)?;
    if !start.is_positive() {
        return Err(Error::ClosurePrecondition(format!(
            "start ({}, {}) is not strictly inside the positive quadrant",
            start.x, start.y
        )));
    }
    let eq = fixed_points(p).coexistence;
    if start.distance(&eq) <= CLOSURE_MIN_START_DISTANCE {
        return Err(Error::ClosurePrecondition(
            "start coincides with the coexistence equilibrium".to_string(),
        ));
    }

    let (xc, yc) = (p.prey_threshold(), p.predator_threshold());
    let v_min = first_integral(p, eq)?;
    let mut crossings = Vec::new();
    for w in traj.points.windows(2) {
        let (a, b) = (w[0].state, w[1].state);
        if !(a.y < yc && b.y >= yc) {
            continue;
        }
        let f = (yc - a.y) / (b.y - a.y);
        let x = a.x + f * (b.x - a.x);
        if x <= xc {
            continue;
        }
        let t = w[0].t + f * (w[1].t - w[0].t);
        let v = first_integral(p, State { x, y: yc }).unwrap_or(f64::NAN);
        crossings.push(SectionCrossing { t, x, v });
    }

    let drift_per_period: Vec<f64> = crossings
        .windows(2)
        .map(|c| (c[1].x - c[0].x) / c[0].x)
        .collect();
    let v_drift: Vec<f64> = match crossings.first() {
        Some(c0) => crossings[1..]
            .iter()
            .map(|c| (c.v - c0.v) / (c0.v - v_min))
            .collect(),
        None => Vec::new(),
    };

    let verdict = if crossings.len() < 3 {
        ClosureVerdict::Inconclusive
    } else if drift_per_period.iter().all(|d| d.abs() < CLOSURE_DRIFT_TOL) {
        ClosureVerdict::Closed
    } else if drift_per_period.iter().all(|&d| d > CLOSURE_DRIFT_TOL) {
        ClosureVerdict::SpiralOut
    } else if drift_per_period.iter().all(|&d| d < -CLOSURE_DRIFT_TOL) {
        ClosureVerdict::SpiralIn
    } else {
        ClosureVerdict::Inconclusive
    };

    Ok(ClosureMetrics {
        crossings,
        drift_per_period,
        v_drift,
        verdict,
    })
}

/// Angle of `s - p2` at every point, unwrapped so that consecutive values
/// differ by less than pi. Counterclockwise motion makes the series increase.
pub fn unwrapped_angles(traj: &Trajectory, p: &ModelParams) -> Vec<f64> {
    let eq = fixed_points(p).coexistence;
    let mut out: Vec<f64> = Vec::with_capacity(traj.len());
    for s in traj.states() {
        let raw = (s.y - eq.y).atan2(s.x - eq.x);
        let angle = match out.last() {
            Some(&prev) => raw + TAU * ((prev - raw) / TAU).round(),
            None => raw,
        };
        out.push(angle);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayResult {
    /// Largest of the two per-variable errors.
    pub sup_rel_error: f64,
    pub sup_rel_error_x: f64,
    pub sup_rel_error_y: f64,
    /// Sample times shared by both series.
    pub times: Vec<f64>,
    /// `|a - b| / amplitude(b)` for prey and predator at each sample time.
    pub per_variable: (Vec<f64>, Vec<f64>),
}

fn interpolate(points: &[TrajectoryPoint], t: f64) -> Option<State> {
    let idx = points.partition_point(|pt| pt.t < t);
    if idx < points.len() && points[idx].t == t {
        return Some(points[idx].state);
    }
    if idx == 0 || idx == points.len() {
        return None;
    }
    let (lo, hi) = (&points[idx - 1], &points[idx]);
    let f = (t - lo.t) / (hi.t - lo.t);
    Some(State {
        x: lo.state.x + f * (hi.state.x - lo.state.x),
        y: lo.state.y + f * (hi.state.y - lo.state.y),
    })
}

/// Relative discrepancy between two runs from the same start.
///
/// The finer trajectory is linearly resampled on the coarser one's time grid
/// over the common time range. Errors are scaled per variable by the
/// peak-to-peak amplitude of `b` over that range.
pub fn compare_overlay(a: &Trajectory, b: &Trajectory) -> Result<OverlayResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    if a.params != b.params {
        return Err(Error::Overlay("parameter sets differ".to_string()));
    }
    if a.start() != b.start() {
        return Err(Error::Overlay("initial states differ".to_string()));
    }
    let t_end = a.t_end().min(b.t_end());
    if t_end <= 0.0 && (a.len() > 1 || b.len() > 1) {
        return Err(Error::Overlay("time ranges do not overlap".to_string()));
    }

    let a_is_coarse = a.h >= b.h;
    let (coarse, fine) = if a_is_coarse { (a, b) } else { (b, a) };
    let mut times = Vec::new();
    let mut a_states = Vec::new();
    let mut b_states = Vec::new();
    for pt in coarse.points.iter().take_while(|pt| pt.t <= t_end) {
        let Some(other) = interpolate(&fine.points, pt.t) else {
            continue;
        };
        times.push(pt.t);
        if a_is_coarse {
            a_states.push(pt.state);
            b_states.push(other);
        } else {
            a_states.push(other);
            b_states.push(pt.state);
        }
    }
    if times.is_empty() {
        return Err(Error::Overlay("time ranges do not overlap".to_string()));
    }

    let amplitude = |get: fn(&State) -> f64| {
        let (lo, hi) = b_states
            .iter()
            .map(get)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        let amp = hi - lo;
        if amp > 0.0 {
            amp
        } else {
            1.0
        }
    };
    let amp_x = amplitude(|s| s.x);
    let amp_y = amplitude(|s| s.y);
    let err_x: Vec<f64> = a_states
        .iter()
        .zip(&b_states)
        .map(|(p, q)| (p.x - q.x).abs() / amp_x)
        .collect();
    let err_y: Vec<f64> = a_states
        .iter()
        .zip(&b_states)
        .map(|(p, q)| (p.y - q.y).abs() / amp_y)
        .collect();
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, &e| m.max(e));
    let (sx, sy) = (sup(&err_x), sup(&err_y));
    Ok(OverlayResult {
        sup_rel_error: sx.max(sy),
        sup_rel_error_x: sx,
        sup_rel_error_y: sy,
        times,
        per_variable: (err_x, err_y),
    })
}
