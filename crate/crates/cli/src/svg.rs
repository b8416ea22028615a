//! Phase-portrait rendering as a standalone SVG 1.1 document.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use lv_core::model::{fixed_points, ModelParams, State};
use lv_core::scheme::Trajectory;

use crate::error::{ConfigError, RunError};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 48.0;
/// Polylines are thinned to at most this many vertices.
const MAX_VERTICES: usize = 4000;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(points: impl Iterator<Item = State>) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for s in points {
            x0 = x0.min(s.x);
            x1 = x1.max(s.x);
            y0 = y0.min(s.y);
            y1 = y1.max(s.y);
        }
        let pad_x = 0.05 * (x1 - x0).max(1e-9);
        let pad_y = 0.05 * (y1 - y0).max(1e-9);
        Self {
            x0: x0 - pad_x,
            x1: x1 + pad_x,
            y0: y0 - pad_y,
            y1: y1 + pad_y,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }
}

/// Renders trajectories with the dividing lines `x = delta/gamma`,
/// `y = alpha/beta` and both equilibria marked.
pub fn render_phase_svg(trajs: &[&Trajectory], p: &ModelParams) -> Result<String, ConfigError> {
    if trajs.is_empty() {
        return Err(ConfigError::new(
            "phase portrait needs at least one trajectory",
        ));
    }
    let fp = fixed_points(p);
    let frame = Frame::fit(trajs.iter().flat_map(|t| t.states()).chain(fp.as_array()));

    let mut out = String::new();
    let w = &mut out;
    // writing to a String cannot fail
    let _ = writeln!(
        w,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        w,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        w,
        r#"<rect class="frame" x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );

    let (xc, yc) = (fp.coexistence.x, fp.coexistence.y);
    let _ = writeln!(
        w,
        r##"<line class="divider" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#777777" stroke-dasharray="6,4"/>"##,
        frame.px(xc),
        frame.py(frame.y0),
        frame.px(xc),
        frame.py(frame.y1)
    );
    let _ = writeln!(
        w,
        r##"<line class="divider" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#777777" stroke-dasharray="6,4"/>"##,
        frame.px(frame.x0),
        frame.py(yc),
        frame.px(frame.x1),
        frame.py(yc)
    );

    for (k, traj) in trajs.iter().enumerate() {
        let stride = traj.len().div_ceil(MAX_VERTICES).max(1);
        let last = traj.len().saturating_sub(1);
        let mut pts = String::new();
        for (i, s) in traj.states().enumerate() {
            if i % stride != 0 && i != last {
                continue;
            }
            if !pts.is_empty() {
                pts.push(' ');
            }
            let _ = write!(pts, "{:.2},{:.2}", frame.px(s.x), frame.py(s.y));
        }
        let _ = writeln!(
            w,
            r#"<polyline class="trajectory" fill="none" stroke="{}" stroke-width="1.2" points="{pts}"/>"#,
            COLORS[k % COLORS.len()]
        );
    }

    for s in fp.as_array() {
        let _ = writeln!(
            w,
            r#"<circle class="fixed-point" cx="{:.2}" cy="{:.2}" r="4" fill="black"/>"#,
            frame.px(s.x),
            frame.py(s.y)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">x (prey)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 14.0
    );
    let _ = writeln!(
        w,
        r#"<text x="14" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">y (predator)</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    let _ = writeln!(
        w,
        r#"<text x="{MARGIN}" y="{:.2}" font-family="sans-serif" font-size="11">x: [{:.3}, {:.3}]  y: [{:.3}, {:.3}]</text>"#,
        MARGIN - 8.0,
        frame.x0,
        frame.x1,
        frame.y0,
        frame.y1
    );
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn emit_phase_svg(trajs: &[&Trajectory], p: &ModelParams, path: &Path) -> Result<(), RunError> {
    let doc = render_phase_svg(trajs, p)?;
    fs::write(path, doc).map_err(|e| RunError::io(path, e))
}
