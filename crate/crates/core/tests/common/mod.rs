#![allow(dead_code)]

use lv_core::model::{Matrix2, ModelParams, State};
use lv_core::scheme::{simulate, PhiFunction, SchemeId, StepSize};
use rand::Rng;

pub fn random_params<R: Rng>(rng: &mut R) -> ModelParams {
    ModelParams::new(
        rng.random_range(0.1..2.0),
        rng.random_range(0.1..2.0),
        rng.random_range(0.1..2.0),
        rng.random_range(0.1..2.0),
    )
    .unwrap()
}

pub fn random_interior_state<R: Rng>(rng: &mut R, p: &ModelParams) -> State {
    let (xc, yc) = (p.prey_threshold(), p.predator_threshold());
    loop {
        let s = State {
            x: rng.random_range(0.01..4.0 * xc),
            y: rng.random_range(0.01..4.0 * yc),
        };
        if (s.x - xc).abs() > 1e-6 * xc && (s.y - yc).abs() > 1e-6 * yc {
            return s;
        }
    }
}

/// Central differences of a planar map.
pub fn fd_jacobian(f: impl Fn(State) -> State, s: State, eps: f64) -> Matrix2 {
    let ex = eps * s.x.abs().max(1.0);
    let ey = eps * s.y.abs().max(1.0);
    let xp = f(State { x: s.x + ex, ..s });
    let xm = f(State { x: s.x - ex, ..s });
    let yp = f(State { y: s.y + ey, ..s });
    let ym = f(State { y: s.y - ey, ..s });
    Matrix2::new(
        (xp.x - xm.x) / (2.0 * ex),
        (yp.x - ym.x) / (2.0 * ey),
        (xp.y - xm.y) / (2.0 * ex),
        (yp.y - ym.y) / (2.0 * ey),
    )
}

pub const REFERENCE_REFINEMENT: usize = 100;

/// Max-norm error at the grid points of a run with step `h` on `[0, t_end]`,
/// measured against RK4 with step `h / 100`.
pub fn global_error(
    scheme: SchemeId,
    phi: PhiFunction,
    p: ModelParams,
    h: f64,
    t_end: f64,
    s0: State,
) -> f64 {
    let n = (t_end / h).round() as usize;
    let run = simulate(scheme, p, phi, StepSize::new(h).unwrap(), s0, n).unwrap();
    let href = StepSize::new(h / REFERENCE_REFINEMENT as f64).unwrap();
    let reference = simulate(
        SchemeId::ReferenceRK4,
        p,
        PhiFunction::Identity,
        href,
        s0,
        n * REFERENCE_REFINEMENT,
    )
    .unwrap();
    run.points
        .iter()
        .map(|pt| {
            let r = reference.points[pt.step * REFERENCE_REFINEMENT].state;
            (pt.state.x - r.x).abs().max((pt.state.y - r.y).abs())
        })
        .fold(0.0, f64::max)
}

pub fn observed_order(e_coarse: f64, e_fine: f64) -> f64 {
    (e_coarse / e_fine).log2()
}
