//! Time steppers for the Lotka-Volterra system.
//!
//! Three explicit one-step maps share the [`Discretization`] interface:
//!
//! * forward Euler, `s' = s + h f(s)`, which spirals out of the coexistence
//!   equilibrium and can leave the positive quadrant;
//! * the Mickens nonstandard scheme, built from the nonlocal substitutions
//!   `alpha x -> 2 alpha x_i - alpha x_{i+1}`, `-beta x y -> -beta x_{i+1} y_i`,
//!   `gamma x y -> 2 gamma x_{i+1} y_i - gamma x_{i+1} y_{i+1}` and
//!   `-delta y -> -delta y_{i+1}` with denominator function `phi(h)`;
//! * classical fourth-order Runge-Kutta, used as a stand-in for the exact flow.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{vector_field, ModelParams, State};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeId {
    Euler,
    Mickens,
    #[serde(rename = "RK4")]
    ReferenceRK4,
}

impl SchemeId {
    pub const ALL: [SchemeId; 3] = [SchemeId::Euler, SchemeId::Mickens, SchemeId::ReferenceRK4];

    /// Short lowercase name used on the command line.
    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeId::Euler => "euler",
            SchemeId::Mickens => "mickens",
            SchemeId::ReferenceRK4 => "rk4",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "euler" => Ok(SchemeId::Euler),
            "mickens" | "nsfd" => Ok(SchemeId::Mickens),
            "rk4" => Ok(SchemeId::ReferenceRK4),
            other => Err(format!(
                "unknown scheme `{other}` (expected euler, mickens or rk4)"
            )),
        }
    }
}

/// Strictly positive, finite time increment.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StepSize(f64);

impl StepSize {
    pub fn new(h: f64) -> Result<Self> {
        if h.is_finite() && h > 0.0 {
            Ok(Self(h))
        } else {
            Err(Error::InvalidStepSize(h))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn halved(self) -> Self {
        Self(self.0 / 2.0)
    }
}

/// Denominator function `phi(h)` of the Mickens scheme.
///
/// Any choice must satisfy `phi(h) > 0` and `phi(h) = h + O(h^2)`.
#[derive(Debug, Clone, Copy, Default)]
pub enum PhiFunction {
    #[default]
    Identity,
    /// `1 - exp(-h)`.
    OneMinusExp,
    Custom(fn(f64) -> f64),
}

impl PhiFunction {
    pub fn eval(&self, h: StepSize) -> f64 {
        let h = h.get();
        match self {
            PhiFunction::Identity => h,
            PhiFunction::OneMinusExp => -(-h).exp_m1(),
            PhiFunction::Custom(f) => f(h),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PhiFunction::Identity => "identity",
            PhiFunction::OneMinusExp => "expm1",
            PhiFunction::Custom(_) => "custom",
        }
    }
}

impl PartialEq for PhiFunction {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (PhiFunction::Identity, PhiFunction::Identity) => true,
            (PhiFunction::OneMinusExp, PhiFunction::OneMinusExp) => true,
            (PhiFunction::Custom(f), PhiFunction::Custom(g)) => std::ptr::fn_addr_eq(*f, *g),
            _ => false,
        }
    }
}

impl FromStr for PhiFunction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "identity" | "h" => Ok(PhiFunction::Identity),
            "expm1" | "one-minus-exp" => Ok(PhiFunction::OneMinusExp),
            other => Err(format!(
                "unknown phi `{other}` (expected identity or expm1)"
            )),
        }
    }
}

/// Forward Euler. No sign handling: negative inputs follow the polynomial map.
pub fn euler_step(p: &ModelParams, h: StepSize, s: State) -> State {
    let h = h.get();
    let xy = s.x * s.y;
    State {
        x: s.x + h * (p.alpha() * s.x - p.beta() * xy),
        y: s.y + h * (p.gamma() * xy - p.delta() * s.y),
    }
}

fn check_non_negative(s: State) -> Result<()> {
    if s.x >= 0.0 && s.y >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "Mickens step",
            x: s.x,
            y: s.y,
        })
    }
}

/// Mickens update with an already evaluated `phi`.
///
/// The prey update comes first; the predator update then uses the fresh prey
/// value:
///
/// ```text
/// x' = x (2 a phi + 1) / (1 + a phi + b phi y)
/// y' = y (2 g phi x' + 1) / (1 + g phi x' + d phi)
/// ```
pub fn mickens_step_with_phi(p: &ModelParams, phi: f64, s: State) -> Result<State> {
    check_non_negative(s)?;
    let (a, b, g, d) = (p.alpha(), p.beta(), p.gamma(), p.delta());
    let x_next = s.x * (2.0 * a * phi + 1.0) / (1.0 + a * phi + b * phi * s.y);
    let y_next = s.y * (2.0 * g * phi * x_next + 1.0) / (1.0 + g * phi * x_next + d * phi);
    Ok(State {
        x: x_next,
        y: y_next,
    })
}

pub fn mickens_step(p: &ModelParams, phi: &PhiFunction, h: StepSize, s: State) -> Result<State> {
    mickens_step_with_phi(p, phi.eval(h), s)
}

/// The same map with `x'` substituted into the predator update, so both
/// coordinates are expressed directly in terms of `(x, y)`. Kept as a
/// cross-check of [`mickens_step_with_phi`].
pub fn mickens_step_closed_form(p: &ModelParams, phi: f64, s: State) -> Result<State> {
    check_non_negative(s)?;
    let (a, b, g, d) = (p.alpha(), p.beta(), p.gamma(), p.delta());
    let growth = 2.0 * a * phi + 1.0;
    let den_x = 1.0 + a * phi + b * phi * s.y;
    let x_next = s.x * growth / den_x;
    let num_y = 2.0 * g * phi * s.x * s.y * growth + s.y * den_x;
    let den_y = (1.0 + d * phi) * den_x + g * phi * s.x * growth;
    Ok(State {
        x: x_next,
        y: num_y / den_y,
    })
}

/// Classical four-stage Runge-Kutta step of [`vector_field`].
pub fn rk4_step(p: &ModelParams, h: StepSize, s: State) -> State {
    let h = h.get();
    let shift = |k: (f64, f64), c: f64| State {
        x: s.x + c * k.0,
        y: s.y + c * k.1,
    };
    let k1 = vector_field(p, s);
    let k2 = vector_field(p, shift(k1, h / 2.0));
    let k3 = vector_field(p, shift(k2, h / 2.0));
    let k4 = vector_field(p, shift(k3, h));
    State {
        x: s.x + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        y: s.y + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    }
}

/// A scheme bound to its parameters and step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discretization {
    pub scheme: SchemeId,
    pub params: ModelParams,
    pub phi: PhiFunction,
    pub h: StepSize,
}

impl Discretization {
    pub fn new(scheme: SchemeId, params: ModelParams, phi: PhiFunction, h: StepSize) -> Self {
        Self {
            scheme,
            params,
            phi,
            h,
        }
    }

    pub fn step(&self, s: State) -> Result<State> {
        match self.scheme {
            SchemeId::Euler => Ok(euler_step(&self.params, self.h, s)),
            SchemeId::Mickens => mickens_step(&self.params, &self.phi, self.h, s),
            SchemeId::ReferenceRK4 => Ok(rk4_step(&self.params, self.h, s)),
        }
    }

    pub fn simulate(&self, s0: State, n_steps: usize) -> Result<Trajectory> {
        if !s0.is_finite() {
            return Err(Error::NonFiniteState { x: s0.x, y: s0.y });
        }
        if self.scheme == SchemeId::Mickens {
            check_non_negative(s0)?;
        }
        let h = self.h.get();
        let mut points = Vec::with_capacity(n_steps + 1);
        points.push(TrajectoryPoint {
            step: 0,
            t: 0.0,
            state: s0,
        });
        let mut divergence = None;
        let mut s = s0;
        for i in 1..=n_steps {
            s = self.step(s)?;
            if !s.is_finite() {
                divergence = Some(Divergence { step: i, state: s });
                break;
            }
            points.push(TrajectoryPoint {
                step: i,
                t: i as f64 * h,
                state: s,
            });
        }
        Ok(Trajectory {
            scheme: self.scheme,
            params: self.params,
            phi: self.phi,
            h: self.h,
            points,
            divergence,
        })
    }
}

/// Runs `n_steps` iterations of `scheme` from `s0`.
///
/// Iteration stops early, without error, at the first non-finite state; the
/// offending step is recorded in [`Trajectory::divergence`].
pub fn simulate(
    scheme: SchemeId,
    p: ModelParams,
    phi: PhiFunction,
    h: StepSize,
    s0: State,
    n_steps: usize,
) -> Result<Trajectory> {
    Discretization::new(scheme, p, phi, h).simulate(s0, n_steps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub step: usize,
    pub t: f64,
    pub state: State,
}

/// First step whose state overflowed; it is not part of `points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    pub step: usize,
    pub state: State,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub scheme: SchemeId,
    pub params: ModelParams,
    pub phi: PhiFunction,
    pub h: StepSize,
    pub points: Vec<TrajectoryPoint>,
    pub divergence: Option<Divergence>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn start(&self) -> Option<State> {
        self.points.first().map(|pt| pt.state)
    }

    pub fn last(&self) -> Option<State> {
        self.points.last().map(|pt| pt.state)
    }

    pub fn states(&self) -> impl Iterator<Item = State> + '_ {
        self.points.iter().map(|pt| pt.state)
    }

    pub fn t_end(&self) -> f64 {
        self.points.last().map_or(0.0, |pt| pt.t)
    }

    pub fn is_truncated(&self) -> bool {
        self.divergence.is_some()
    }
}
