//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so every line is printed; the process
//! exits non-zero when any criterion fails.

mod common;

use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lv_core::dynamics::{
    check_direction, compare_overlay, measure_closure, monitor_positivity, ClosureVerdict,
    DirectionKind,
};
use lv_core::model::{
    continuous_jacobian, first_integral, fixed_points, vector_field, ModelParams, State,
};
use lv_core::scheme::{
    euler_step, mickens_step_with_phi, rk4_step, simulate, PhiFunction, SchemeId, StepSize,
};
use lv_core::stability::{
    characteristic_residual, classify_euler, classify_mickens, eig2, euler_jacobian,
    mickens_jacobian, Classification,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{fd_jacobian, global_error, observed_order, random_interior_state, random_params};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const FIG: State = State { x: 5.0, y: 5.0 };

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn h(v: f64) -> StepSize {
    StepSize::new(v).unwrap()
}

fn fixed_point_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let step = h(rng.random_range(1e-3..1.0));
        let fp = fixed_points(&p);
        if fp.origin != State::ORIGIN
            || fp.coexistence
                != (State {
                    x: p.delta() / p.gamma(),
                    y: p.alpha() / p.beta(),
                })
        {
            return Err(format!("unexpected fixed points {fp:?}"));
        }
        for s in fp.as_array() {
            let (dx, dy) = vector_field(&p, s);
            let images = [
                euler_step(&p, step, s),
                rk4_step(&p, step, s),
                mickens_step_with_phi(&p, step.get(), s).map_err(|e| e.to_string())?,
            ];
            let r = images
                .iter()
                .map(|n| (n.x - s.x).abs().max((n.y - s.y).abs()))
                .fold(dx.abs().max(dy.abs()), f64::max);
            worst = worst.max(r);
        }
    }
    check(
        worst < 1e-13,
        format!("max step residual {worst:.3e} over 100 parameter sets"),
    )
}

fn euler_origin_threshold() -> Outcome {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let h0 = 2.0 / p.delta();
        let below = classify_euler(&p, h(h0 - 1e-3), State::ORIGIN).map_err(|e| e.to_string())?;
        let above = classify_euler(&p, h(h0 + 1e-3), State::ORIGIN).map_err(|e| e.to_string())?;
        if below.classification != Classification::SaddlePoint
            || above.classification != Classification::Source
        {
            return Err(format!(
                "delta = {}: {} below, {} above",
                p.delta(),
                below.classification,
                above.classification
            ));
        }
    }
    let threshold = 2.0 / ModelParams::reference().delta();
    let elapsed = clock.elapsed();
    check(
        threshold == 8.0 / 3.0 && elapsed < Duration::from_secs(1),
        format!("200 draws flip at 2/delta; reference threshold {threshold}; {elapsed:.2?}"),
    )
}

fn euler_coexistence_modulus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let step = rng.random_range(1e-4..2.0);
        let r =
            classify_euler(&p, h(step), fixed_points(&p).coexistence).map_err(|e| e.to_string())?;
        let expected = (1.0 + p.alpha() * p.delta() * step * step).sqrt();
        let (m1, m2) = r.eigen.moduli();
        if !(m1 > 1.0 && m2 > 1.0) {
            return Err(format!("modulus not above 1 at h = {step}: {m1}"));
        }
        worst = worst.max((m1 - expected).abs()).max((m2 - expected).abs());
    }
    check(
        worst < 1e-12,
        format!("max |modulus - sqrt(1 + alpha delta h^2)| = {worst:.3e}"),
    )
}

fn mickens_moduli() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = random_params(&mut rng);
        let phi = rng.random_range(1e-4..=1.0);
        let o = classify_mickens(&p, phi, State::ORIGIN).map_err(|e| e.to_string())?;
        let (m1, m2) = o.eigen.moduli();
        if !(m1 < 1.0 && 1.0 < m2) {
            return Err(format!("origin moduli ({m1}, {m2}) do not straddle 1"));
        }
        let c =
            classify_mickens(&p, phi, fixed_points(&p).coexistence).map_err(|e| e.to_string())?;
        let (c1, c2) = c.eigen.moduli();
        worst = worst.max((c1 - 1.0).abs()).max((c2 - 1.0).abs());
    }
    check(
        worst < 1e-9,
        format!("origin straddles 1; max ||lambda| - 1| at coexistence = {worst:.3e}"),
    )
}

fn fig7_negative_prey() -> Outcome {
    let clock = Instant::now();
    let traj = simulate(
        SchemeId::Euler,
        ModelParams::reference(),
        PhiFunction::Identity,
        h(0.03),
        FIG,
        10_000,
    )
    .map_err(|e| e.to_string())?;
    let r = monitor_positivity(&traj).map_err(|e| e.to_string())?;
    let neg = traj
        .points
        .iter()
        .find(|pt| pt.state.x < 0.0)
        .map(|pt| pt.step);
    let back = neg.and_then(|n| {
        traj.points[n + 1..]
            .iter()
            .find(|pt| pt.state.x > 0.0)
            .map(|pt| pt.step)
    });
    let elapsed = clock.elapsed();
    check(
        neg.is_some()
            && back.is_some()
            && r.first_negative_step == neg
            && elapsed < Duration::from_secs(1),
        format!(
            "first x < 0 at step {neg:?}, positive again at {back:?}; report {r:?}; {elapsed:.2?}"
        ),
    )
}

fn euler_spiral_out() -> Outcome {
    let p = ModelParams::reference();
    let traj = simulate(
        SchemeId::Euler,
        p,
        PhiFunction::Identity,
        h(0.02),
        FIG,
        10_000,
    )
    .map_err(|e| e.to_string())?;
    let m = measure_closure(&traj, &p).map_err(|e| e.to_string())?;
    let mut run = 1usize;
    let mut best = 1usize;
    for w in m.crossings.windows(2) {
        run = if w[1].x > 1.001 * w[0].x { run + 1 } else { 1 };
        best = best.max(run);
    }
    check(
        m.verdict == ClosureVerdict::SpiralOut && best >= 5,
        format!(
            "verdict {:?}; {} crossings, longest growing run {best}",
            m.verdict,
            m.crossings.len()
        ),
    )
}

fn mickens_overlap() -> Outcome {
    let clock = Instant::now();
    let p = ModelParams::reference();
    let long = simulate(
        SchemeId::Mickens,
        p,
        PhiFunction::Identity,
        h(0.01),
        FIG,
        100_000,
    )
    .map_err(|e| e.to_string())?;
    let positive = long.states().all(|s| s.is_positive());
    let closure = measure_closure(&long, &p).map_err(|e| e.to_string())?;
    let short = simulate(
        SchemeId::Mickens,
        p,
        PhiFunction::Identity,
        h(0.01),
        FIG,
        2_000,
    )
    .map_err(|e| e.to_string())?;
    let reference = simulate(
        SchemeId::ReferenceRK4,
        p,
        PhiFunction::Identity,
        h(1e-4),
        FIG,
        200_000,
    )
    .map_err(|e| e.to_string())?;
    let overlay = compare_overlay(&short, &reference).map_err(|e| e.to_string())?;
    let elapsed = clock.elapsed();
    let closed = closure.verdict == ClosureVerdict::Closed && closure.max_abs_drift() < 0.005;
    let overlaps = overlay.sup_rel_error < 0.05;
    check(
        closed && positive && overlaps && elapsed < Duration::from_secs(10),
        format!(
            "closed {closed} (max drift {:.2e}); positive over 1e5 steps {positive}; overlay on [0, 20] {:.4} (x {:.4}, y {:.4}) < 0.05 {overlaps}; {elapsed:.2?}",
            closure.max_abs_drift(),
            overlay.sup_rel_error,
            overlay.sup_rel_error_x,
            overlay.sup_rel_error_y,
        ),
    )
}

fn convergence_order() -> Outcome {
    let p = ModelParams::reference();
    let mut orders = Vec::new();
    for (scheme, phi) in [
        (SchemeId::Euler, PhiFunction::Identity),
        (SchemeId::Mickens, PhiFunction::Identity),
        (SchemeId::Mickens, PhiFunction::OneMinusExp),
    ] {
        let e: Vec<f64> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&step| global_error(scheme, phi, p, step, 5.0, FIG))
            .collect();
        for w in e.windows(2) {
            orders.push((
                format!("{scheme}/{}", phi.name()),
                observed_order(w[0], w[1]),
            ));
        }
    }
    let ok = orders.iter().all(|(_, q)| (0.8..=1.2).contains(q));
    let text: Vec<String> = orders.iter().map(|(n, q)| format!("{n} {q:.3}")).collect();
    check(ok, format!("observed orders: {}", text.join(", ")))
}

fn direction_conformity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut violations = 0usize;
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        let s = random_interior_state(&mut rng, &p);
        let kinds = [
            DirectionKind::Continuous,
            DirectionKind::Euler {
                h: h(rng.random_range(1e-4..10.0)),
            },
            DirectionKind::Mickens {
                phi: rng.random_range(1e-4..10.0),
            },
        ];
        for kind in kinds {
            if !check_direction(kind, &p, s)
                .map_err(|e| e.to_string())?
                .conforms
            {
                violations += 1;
            }
        }
    }
    check(
        violations == 0,
        format!("{violations} violations in 3000 checks"),
    )
}

fn oracle_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut jac, mut res) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let p = random_params(&mut rng);
        let s = random_interior_state(&mut rng, &p);
        let step = h(rng.random_range(1e-3..1.0));
        let phi = step.get();
        let rel = |a: &lv_core::model::Matrix2, b: &lv_core::model::Matrix2| {
            a.max_abs_diff(b) / b.entries().iter().fold(1.0f64, |m, v| m.max(v.abs()))
        };
        let ej = euler_jacobian(&p, step, s);
        let mj = mickens_jacobian(&p, phi, s);
        jac = jac
            .max(rel(&ej, &fd_jacobian(|s| euler_step(&p, step, s), s, 1e-6)))
            .max(rel(
                &mj,
                &fd_jacobian(|s| mickens_step_with_phi(&p, phi, s).unwrap(), s, 1e-6),
            ));
        for m in [ej, mj, continuous_jacobian(&p, s)] {
            for l in eig2(&m).as_array() {
                res = res.max(characteristic_residual(&m, l));
            }
        }
    }
    let p = ModelParams::reference();
    let mut s = FIG;
    let v0 = first_integral(&p, s).map_err(|e| e.to_string())?;
    let mut drift = 0.0f64;
    for _ in 0..20_000 {
        s = rk4_step(&p, h(1e-3), s);
        drift = drift.max(((first_integral(&p, s).map_err(|e| e.to_string())? - v0) / v0).abs());
    }
    check(
        jac < 1e-6 && res < 1e-10 && drift < 1e-6,
        format!("Jacobian vs finite differences {jac:.2e}; eig2 residual {res:.2e}; RK4 V drift {drift:.2e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("fixed-point agreement", fixed_point_agreement),
        (
            "Euler origin threshold at h = 2/delta",
            euler_origin_threshold,
        ),
        (
            "Euler coexistence modulus sqrt(1 + alpha delta h^2)",
            euler_coexistence_modulus,
        ),
        ("Mickens eigenvalue moduli", mickens_moduli),
        (
            "Euler h = 0.03 negative then positive prey",
            fig7_negative_prey,
        ),
        ("Euler h = 0.02 spirals out", euler_spiral_out),
        (
            "Mickens h = 0.01 closed, positive, overlaps RK4",
            mickens_overlap,
        ),
        ("first-order convergence", convergence_order),
        ("direction conformity", direction_conformity),
        ("oracle consistency", oracle_consistency),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
