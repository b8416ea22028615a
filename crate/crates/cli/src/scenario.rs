//! Run configuration and the figure-reproduction presets.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use lv_core::dynamics::CLOSURE_MIN_START_DISTANCE;
use lv_core::model::{fixed_points, ModelParams, State};
use lv_core::scheme::{PhiFunction, SchemeId, StepSize};
use serde::Serialize;

use crate::error::ConfigError;

/// Upper bound on `n_steps`, keeping trajectories within memory.
pub const MAX_STEPS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Analysis {
    Stability,
    Direction,
    Positivity,
    Closure,
    Overlay,
}

impl Analysis {
    pub const ALL: [Analysis; 5] = [
        Analysis::Stability,
        Analysis::Direction,
        Analysis::Positivity,
        Analysis::Closure,
        Analysis::Overlay,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Analysis::Stability => "stability",
            Analysis::Direction => "direction",
            Analysis::Positivity => "positivity",
            Analysis::Closure => "closure",
            Analysis::Overlay => "overlay",
        }
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Analysis {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Analysis::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| ConfigError::new(format!("unknown analysis `{s}`")))
    }
}

/// A fully validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: ModelParams,
    pub scheme: SchemeId,
    pub h: StepSize,
    pub phi: PhiFunction,
    /// One trajectory is simulated per start; the first is the primary run.
    pub starts: Vec<State>,
    pub n_steps: usize,
    pub analyses: BTreeSet<Analysis>,
    /// Step of the RK4 reference run, present iff overlay is requested.
    pub reference_h: Option<StepSize>,
}

/// Unvalidated scenario fields as they arrive from the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioInput {
    pub name: String,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub scheme: SchemeId,
    pub h: f64,
    pub phi: PhiFunction,
    pub starts: Vec<(f64, f64)>,
    pub n_steps: usize,
    pub analyses: BTreeSet<Analysis>,
    pub reference_h: Option<f64>,
}

impl Default for ScenarioInput {
    fn default() -> Self {
        let p = ModelParams::reference();
        Self {
            name: "custom".to_string(),
            alpha: p.alpha(),
            beta: p.beta(),
            gamma: p.gamma(),
            delta: p.delta(),
            scheme: SchemeId::Mickens,
            h: 0.01,
            phi: PhiFunction::Identity,
            starts: vec![(5.0, 5.0)],
            n_steps: 3000,
            analyses: BTreeSet::new(),
            reference_h: None,
        }
    }
}

impl ScenarioInput {
    pub fn validate(self) -> Result<Scenario, ConfigError> {
        if self.name.trim().is_empty() {
            return Err(ConfigError::new("scenario name must not be empty"));
        }
        let allowed = |c: char| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.');
        if !self.name.chars().all(allowed) || self.name.starts_with('.') {
            return Err(ConfigError::new(format!(
                "scenario name `{}` may only contain ASCII letters, digits, '-', '_' and '.'",
                self.name
            )));
        }
        let params = ModelParams::new(self.alpha, self.beta, self.gamma, self.delta)?;
        let h = StepSize::new(self.h)?;
        if self.phi.eval(h).is_nan() || self.phi.eval(h) <= 0.0 {
            return Err(ConfigError::new("phi(h) must be strictly positive"));
        }
        if self.n_steps == 0 {
            return Err(ConfigError::new("the number of steps must be at least 1"));
        }
        if self.n_steps > MAX_STEPS {
            return Err(ConfigError::new(format!(
                "the number of steps must not exceed {MAX_STEPS}"
            )));
        }
        if self.starts.is_empty() {
            return Err(ConfigError::new("at least one initial state is required"));
        }
        let mut starts = Vec::with_capacity(self.starts.len());
        for (x, y) in self.starts {
            let s = State::new(x, y)?;
            if self.scheme == SchemeId::Mickens && (x < 0.0 || y < 0.0) {
                return Err(ConfigError::new(format!(
                    "the Mickens scheme needs a non-negative start, got ({x}, {y})"
                )));
            }
            starts.push(s);
        }
        if self.analyses.contains(&Analysis::Closure) {
            let eq = fixed_points(&params).coexistence;
            for s in &starts {
                if !s.is_positive() || s.distance(&eq) <= CLOSURE_MIN_START_DISTANCE {
                    return Err(ConfigError::new(format!(
                        "closure needs starts strictly inside the quadrant and away from ({}, {}), got ({}, {})",
                        eq.x, eq.y, s.x, s.y
                    )));
                }
            }
        }
        let reference_h = if self.analyses.contains(&Analysis::Overlay) {
            let href = self.reference_h.unwrap_or(self.h / 100.0);
            let href = StepSize::new(href)?;
            let ratio = (self.n_steps as f64) * h.get() / href.get();
            if ratio > MAX_STEPS as f64 {
                return Err(ConfigError::new(format!(
                    "the overlay reference run would need {ratio:.0} steps (limit {MAX_STEPS})"
                )));
            }
            Some(href)
        } else {
            if self.reference_h.is_some() {
                return Err(ConfigError::new(
                    "a reference step size only applies to the overlay analysis",
                ));
            }
            None
        };
        Ok(Scenario {
            name: self.name,
            params,
            scheme: self.scheme,
            h,
            phi: self.phi,
            starts,
            n_steps: self.n_steps,
            analyses: self.analyses,
            reference_h,
        })
    }
}

impl Scenario {
    pub fn wants(&self, a: Analysis) -> bool {
        self.analyses.contains(&a)
    }

    /// Number of reference steps covering the same time span as the run.
    pub fn reference_steps(&self) -> Option<usize> {
        self.reference_h
            .map(|href| (self.n_steps as f64 * self.h.get() / href.get()).round() as usize)
    }
}

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ScenarioInput,
}

impl Preset {
    pub fn scenario(&self) -> Scenario {
        (self.build)()
            .validate()
            .expect("built-in presets are valid")
    }
}

fn analyses(list: &[Analysis]) -> BTreeSet<Analysis> {
    list.iter().copied().collect()
}

fn preset_input(
    name: &str,
    scheme: SchemeId,
    h: f64,
    starts: &[(f64, f64)],
    n_steps: usize,
) -> ScenarioInput {
    ScenarioInput {
        name: name.to_string(),
        scheme,
        h,
        starts: starts.to_vec(),
        n_steps,
        ..ScenarioInput::default()
    }
}

/// Presets reproducing the reference figures with alpha = 1, beta = 0.1,
/// gamma = 0.075, delta = 0.75. Runs cover t >= 30 (three or more periods),
/// except the Mickens overlay, which uses the window t in [0, 20].
pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1-regions",
        description: "Regions cut by x = delta/gamma and y = alpha/beta; direction table along an exact orbit",
        build: || ScenarioInput {
            analyses: analyses(&[Analysis::Stability, Analysis::Direction]),
            ..preset_input("fig1-regions", SchemeId::ReferenceRK4, 1e-3, &[(5.0, 5.0)], 30_000)
        },
    },
    Preset {
        name: "fig2-phase-portrait",
        description: "Closed orbits of the continuous system from several starts (RK4, h = 1e-3)",
        build: || ScenarioInput {
            analyses: analyses(&[Analysis::Stability, Analysis::Closure]),
            ..preset_input(
                "fig2-phase-portrait",
                SchemeId::ReferenceRK4,
                1e-3,
                &[(5.0, 5.0), (7.0, 7.0), (3.0, 3.0), (2.0, 6.0), (14.0, 12.0)],
                30_000,
            )
        },
    },
    Preset {
        name: "fig3-oscillations",
        description: "Periodic prey and predator densities of the continuous system",
        build: || ScenarioInput {
            analyses: analyses(&[Analysis::Closure, Analysis::Positivity]),
            ..preset_input("fig3-oscillations", SchemeId::ReferenceRK4, 1e-3, &[(5.0, 5.0)], 30_000)
        },
    },
    Preset {
        name: "fig4-euler-spiral",
        description: "Forward Euler (h = 0.02) spiralling out of the coexistence equilibrium",
        build: || ScenarioInput {
            analyses: analyses(&[Analysis::Stability, Analysis::Direction, Analysis::Closure]),
            ..preset_input("fig4-euler-spiral", SchemeId::Euler, 0.02, &[(8.0, 8.0)], 1_500)
        },
    },
    Preset {
        name: "fig5-euler-oscillations",
        description: "Forward Euler oscillations with growing amplitude (h = 0.02, x0 = y0 = 5)",
        build: || ScenarioInput {
            analyses: analyses(&[
                Analysis::Stability,
                Analysis::Positivity,
                Analysis::Closure,
                Analysis::Overlay,
            ]),
            ..preset_input("fig5-euler-oscillations", SchemeId::Euler, 0.02, &[(5.0, 5.0)], 3_000)
        },
    },
    Preset {
        name: "fig7-euler-negative",
        description: "Forward Euler with h = 0.03: negative prey densities that later return positive",
        build: || ScenarioInput {
            analyses: analyses(&[Analysis::Stability, Analysis::Positivity]),
            ..preset_input("fig7-euler-negative", SchemeId::Euler, 0.03, &[(5.0, 5.0)], 10_000)
        },
    },
    Preset {
        name: "fig8-mickens-overlay",
        description: "Mickens scheme (phi(h) = h = 0.01) against the RK4 reference, prey and predator",
        build: || ScenarioInput {
            analyses: analyses(&Analysis::ALL),
            reference_h: Some(1e-4),
            ..preset_input("fig8-mickens-overlay", SchemeId::Mickens, 0.01, &[(5.0, 5.0)], 2_000)
        },
    },
];

pub fn find_preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
