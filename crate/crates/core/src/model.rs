//! The continuous Lotka-Volterra predator-prey system.
//!
//! ```text
//! dx/dt =  alpha x - beta x y
//! dy/dt = -delta y + gamma x y
//! ```
//!
//! `x` is the prey density and `y` the predator density. All four rates are
//! strictly positive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four positive rates of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

impl ModelParams {
    /// Builds a parameter set, rejecting any rate that is not finite and strictly positive.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        for (name, value) in [
            ("alpha", alpha),
            ("beta", beta),
            ("gamma", gamma),
            ("delta", delta),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(Self {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    /// The parameter set used throughout the reference figures:
    /// alpha = 1, beta = 0.1, gamma = 0.075, delta = 0.75.
    pub fn reference() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.1,
            gamma: 0.075,
            delta: 0.75,
        }
    }

    /// Prey growth rate.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Predation rate.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Predator growth per prey consumed.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Predator death rate.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Prey density of the coexistence equilibrium, `delta / gamma`.
    pub fn prey_threshold(&self) -> f64 {
        self.delta / self.gamma
    }

    /// Predator density of the coexistence equilibrium, `alpha / beta`.
    pub fn predator_threshold(&self) -> f64 {
        self.alpha / self.beta
    }
}

/// A prey/predator density pair.
///
/// Coordinates must be finite but may be negative: the forward-Euler map
/// leaves the positive quadrant and that behaviour is under study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

impl State {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::NonFiniteState { x, y })
        }
    }

    pub const ORIGIN: State = State { x: 0.0, y: 0.0 };

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Both coordinates strictly positive.
    pub fn is_positive(&self) -> bool {
        self.x > 0.0 && self.y > 0.0
    }

    pub fn distance(&self, other: &State) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Real 2x2 matrix stored row-major: `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Matrix2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Self::new(a, 0.0, 0.0, d)
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    }
}

/// Extinction and coexistence equilibria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPointPair {
    pub origin: State,
    pub coexistence: State,
}

impl FixedPointPair {
    pub fn as_array(&self) -> [State; 2] {
        [self.origin, self.coexistence]
    }
}

/// Right-hand side of the ODE, `(dx/dt, dy/dt)`.
pub fn vector_field(p: &ModelParams, s: State) -> (f64, f64) {
    let xy = s.x * s.y;
    (p.alpha * s.x - p.beta * xy, -p.delta * s.y + p.gamma * xy)
}

/// Jacobian of [`vector_field`] at `s`.
pub fn continuous_jacobian(p: &ModelParams, s: State) -> Matrix2 {
    Matrix2::new(
        p.alpha - p.beta * s.y,
        -p.beta * s.x,
        p.gamma * s.y,
        p.gamma * s.x - p.delta,
    )
}

/// `(0, 0)` and `(delta/gamma, alpha/beta)`. These are also the fixed points
/// of every discrete scheme in [`crate::scheme`].
pub fn fixed_points(p: &ModelParams) -> FixedPointPair {
    FixedPointPair {
        origin: State::ORIGIN,
        coexistence: State {
            x: p.prey_threshold(),
            y: p.predator_threshold(),
        },
    }
}

/// The conserved quantity `V = gamma x - delta ln x + beta y - alpha ln y`.
///
/// `V` is constant along exact solutions and attains its minimum on the open
/// quadrant at the coexistence equilibrium.
pub fn first_integral(p: &ModelParams, s: State) -> Result<f64> {
    if !(s.x > 0.0 && s.y > 0.0) {
        return Err(Error::Domain {
            what: "first integral",
            x: s.x,
            y: s.y,
        });
    }
    Ok(p.gamma * s.x - p.delta * s.x.ln() + p.beta * s.y - p.alpha * s.y.ln())
}

/// Analytic gradient of [`first_integral`].
pub fn first_integral_gradient(p: &ModelParams, s: State) -> Result<(f64, f64)> {
    if !(s.x > 0.0 && s.y > 0.0) {
        return Err(Error::Domain {
            what: "first integral gradient",
            x: s.x,
            y: s.y,
        });
    }
    Ok((p.gamma - p.delta / s.x, p.beta - p.alpha / s.y))
}
