//! Linear stability of the equilibria for the flow and for both discrete maps.
//!
//! Continuous systems are classified by the signs of the eigenvalue real
//! parts, discrete maps by eigenvalue moduli against 1. Values within
//! [`UNIT_BAND`] of the threshold are reported as `LinearCenter` (conjugate
//! pair) or `NonHyperbolic` (real) rather than forced to either side.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{continuous_jacobian, vector_field, Matrix2, ModelParams, State};
use crate::scheme::StepSize;

/// Half-width of the band around the stability threshold treated as a tie.
pub const UNIT_BAND: f64 = 1e-9;

/// Maximum scaled vector-field residual for a point to count as an equilibrium.
pub const FIXED_POINT_TOL: f64 = 1e-9;

/// Eigenvalues of a real 2x2 matrix, ordered by increasing modulus. A
/// conjugate pair is stored with the positive imaginary part first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair {
    pub lambda1: Complex64,
    pub lambda2: Complex64,
}

impl Eigenpair {
    pub fn is_complex(&self) -> bool {
        self.lambda1.im != 0.0
    }

    pub fn moduli(&self) -> (f64, f64) {
        (self.lambda1.norm(), self.lambda2.norm())
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.lambda1, self.lambda2]
    }
}

/// Roots of `lambda^2 - tr(m) lambda + det(m)`.
pub fn eig2(m: &Matrix2) -> Eigenpair {
    let tr = m.trace();
    let det = m.det();
    // (a - d)^2 + 4bc equals tr^2 - 4 det without the cancellation
    let disc = (m.a - m.d) * (m.a - m.d) + 4.0 * m.b * m.c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let r1 = 0.5 * (tr + sq.copysign(tr));
        let r2 = if r1 != 0.0 {
            det / r1
        } else {
            0.5 * (tr - sq.copysign(tr))
        };
        let (small, large) = if r1.abs() <= r2.abs() {
            (r1, r2)
        } else {
            (r2, r1)
        };
        Eigenpair {
            lambda1: Complex64::new(small, 0.0),
            lambda2: Complex64::new(large, 0.0),
        }
    } else {
        let re = 0.5 * tr;
        let im = 0.5 * (-disc).sqrt();
        Eigenpair {
            lambda1: Complex64::new(re, im),
            lambda2: Complex64::new(re, -im),
        }
    }
}

/// `|lambda^2 - tr lambda + det|` scaled by `1 + |tr| + |det|`.
pub fn characteristic_residual(m: &Matrix2, lambda: Complex64) -> f64 {
    let tr = m.trace();
    let det = m.det();
    (lambda * lambda - tr * lambda + det).norm() / (1.0 + tr.abs() + det.abs())
}

/// Jacobian of the forward-Euler map.
pub fn euler_jacobian(p: &ModelParams, h: StepSize, s: State) -> Matrix2 {
    let h = h.get();
    Matrix2::new(
        1.0 + p.alpha() * h - p.beta() * h * s.y,
        -p.beta() * h * s.x,
        p.gamma() * h * s.y,
        1.0 + p.gamma() * h * s.x - p.delta() * h,
    )
}

/// Jacobian of the Mickens map for a fixed value of `phi`.
pub fn mickens_jacobian(p: &ModelParams, phi: f64, s: State) -> Matrix2 {
    let (al, be, ga, de) = (p.alpha(), p.beta(), p.gamma(), p.delta());
    let (x, y) = (s.x, s.y);
    let growth = 2.0 * al * phi + 1.0;
    let den_x = be * phi * y + al * phi + 1.0;
    let decay = de * phi + 1.0;
    let den_y = growth * ga * phi * x + den_x * decay;
    let num_y = 2.0 * growth * ga * phi * x * y + den_x * y;

    let a = growth / den_x;
    let b = -growth * be * phi * x / (den_x * den_x);
    let c = 2.0 * growth * ga * phi * y / den_y - num_y * growth * ga * phi / (den_y * den_y);
    let d = -num_y * decay * be * phi / (den_y * den_y)
        + (2.0 * growth * ga * phi * x + 2.0 * be * phi * y + al * phi + 1.0) / den_y;
    Matrix2::new(a, b, c, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemKind {
    Continuous,
    Euler,
    Mickens,
}

impl SystemKind {
    pub fn is_discrete(&self) -> bool {
        !matches!(self, SystemKind::Continuous)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    SaddlePoint,
    Source,
    Sink,
    UnstableFocus,
    StableFocus,
    LinearCenter,
    NonHyperbolic,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Classifies an eigenvalue pair for a flow (`SystemKind::Continuous`) or a map.
pub fn classify_eigen(kind: SystemKind, eig: &Eigenpair) -> Classification {
    let complex = eig.is_complex();
    let (lo, hi, band) = if kind.is_discrete() {
        let (m1, m2) = eig.moduli();
        (m1 - 1.0, m2 - 1.0, UNIT_BAND)
    } else {
        let (r1, r2) = (eig.lambda1.re, eig.lambda2.re);
        let scale = eig.lambda1.norm().max(eig.lambda2.norm()).max(1.0);
        (r1.min(r2), r1.max(r2), UNIT_BAND * scale)
    };

    if lo.abs() <= band || hi.abs() <= band {
        return if complex && lo.abs() <= band && hi.abs() <= band {
            Classification::LinearCenter
        } else {
            Classification::NonHyperbolic
        };
    }
    match (lo > 0.0, hi > 0.0, complex) {
        (false, true, _) => Classification::SaddlePoint,
        (true, true, true) => Classification::UnstableFocus,
        (true, true, false) => Classification::Source,
        (false, false, true) => Classification::StableFocus,
        (false, false, false) => Classification::Sink,
        (true, false, _) => unreachable!("lo <= hi"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub kind: SystemKind,
    pub point: State,
    pub jacobian: Matrix2,
    pub eigen: Eigenpair,
    pub classification: Classification,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl StabilityReport {
    fn from_jacobian(kind: SystemKind, point: State, jacobian: Matrix2) -> Self {
        let eigen = eig2(&jacobian);
        Self {
            kind,
            point,
            jacobian,
            eigen,
            classification: classify_eigen(kind, &eigen),
            notes: Vec::new(),
        }
    }
}

/// Scaled residual of the vector field; zero at both equilibria.
pub fn fixed_point_residual(p: &ModelParams, s: State) -> f64 {
    let (dx, dy) = vector_field(p, s);
    let xy = (s.x * s.y).abs();
    let scale = 1.0
        + (p.alpha() * s.x).abs().max(p.beta() * xy)
        + (p.delta() * s.y).abs().max(p.gamma() * xy);
    dx.abs().max(dy.abs()) / scale
}

fn require_fixed_point(p: &ModelParams, s: State) -> Result<()> {
    let residual = fixed_point_residual(p, s);
    if residual.is_finite() && residual <= FIXED_POINT_TOL {
        Ok(())
    } else {
        Err(Error::NotAFixedPoint {
            x: s.x,
            y: s.y,
            residual,
        })
    }
}

fn is_origin(s: State) -> bool {
    s.x.abs() <= FIXED_POINT_TOL && s.y.abs() <= FIXED_POINT_TOL
}

const LINEARIZATION_ONLY: &str =
    "linear center: the linearization does not determine stability of the nonlinear system";

pub fn classify_continuous(p: &ModelParams, point: State) -> Result<StabilityReport> {
    require_fixed_point(p, point)?;
    let mut report = StabilityReport::from_jacobian(
        SystemKind::Continuous,
        point,
        continuous_jacobian(p, point),
    );
    if report.classification == Classification::LinearCenter {
        report.notes.push(LINEARIZATION_ONLY.to_string());
    }
    Ok(report)
}

/// Origin: saddle for `h < 2/delta`, source for `h > 2/delta`, non-hyperbolic
/// at the threshold. Coexistence: unstable focus for every `h > 0`.
pub fn classify_euler(p: &ModelParams, h: StepSize, point: State) -> Result<StabilityReport> {
    require_fixed_point(p, point)?;
    let mut report =
        StabilityReport::from_jacobian(SystemKind::Euler, point, euler_jacobian(p, h, point));
    if is_origin(point) {
        let threshold = 2.0 / p.delta();
        report
            .notes
            .push(format!("saddle/source threshold h = 2/delta = {threshold}"));
    } else {
        let hv = h.get();
        report.notes.push(format!(
            "coexistence eigenvalues are the complex conjugate pair 1 ± i·h·sqrt(alpha·delta) \
             (not the real pair 1 ± h·sqrt(alpha·delta)); modulus sqrt(1 + alpha·delta·h^2) = {}",
            (1.0 + p.alpha() * p.delta() * hv * hv).sqrt()
        ));
    }
    Ok(report)
}

pub fn classify_mickens(p: &ModelParams, phi: f64, point: State) -> Result<StabilityReport> {
    require_fixed_point(p, point)?;
    let mut report =
        StabilityReport::from_jacobian(SystemKind::Mickens, point, mickens_jacobian(p, phi, point));
    if report.classification == Classification::LinearCenter {
        report.notes.push(LINEARIZATION_ONLY.to_string());
    }
    Ok(report)
}
