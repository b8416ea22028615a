//! Numerical laboratory for the Lotka-Volterra predator-prey system and two
//! of its discretizations.
//!
//! * [`model`]: parameters, states, vector field, Jacobian, equilibria and
//!   the conserved first integral.
//! * [`scheme`]: forward Euler, the Mickens nonstandard finite-difference
//!   map and a fixed-step RK4 reference behind one stepping interface.
//! * [`stability`]: discrete Jacobians, closed-form 2x2 eigenvalues and
//!   equilibrium classification.
//! * [`dynamics`]: region/direction checks, positivity monitoring, section
//!   crossings for orbit closure and overlay error between runs.
//!
//! ```
//! use lv_core::prelude::*;
//!
//! let p = ModelParams::reference();
//! let h = StepSize::new(0.01).unwrap();
//! let traj = simulate(SchemeId::Mickens, p, PhiFunction::Identity, h, State { x: 5.0, y: 5.0 }, 1000).unwrap();
//! assert!(traj.states().all(|s| s.is_positive()));
//! ```

pub mod dynamics;
pub mod error;
pub mod model;
pub mod scheme;
pub mod stability;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::dynamics::{
        check_direction, classify_region, compare_overlay, measure_closure, monitor_positivity,
        ClosureMetrics, ClosureVerdict, DirectionKind, DirectionReport, OverlayResult,
        PositivityReport, RegionId,
    };
    pub use crate::model::{
        continuous_jacobian, first_integral, fixed_points, vector_field, FixedPointPair, Matrix2,
        ModelParams, State,
    };
    pub use crate::scheme::{
        euler_step, mickens_step, rk4_step, simulate, Discretization, PhiFunction, SchemeId,
        StepSize, Trajectory, TrajectoryPoint,
    };
    pub use crate::stability::{
        classify_continuous, classify_euler, classify_mickens, eig2, euler_jacobian,
        mickens_jacobian, Classification, Eigenpair, StabilityReport, SystemKind,
    };
    pub use crate::{Error, Result};
}
