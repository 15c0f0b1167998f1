//! Standalone SVG drawings of a bundle: the path in the plane, the switching
//! function over time and the `(λ₃, λ̇₃)` phase trajectory.

use std::fmt::Write as _;

use anyhow::{bail, Result};

use crate::bundle::{PathRow, ResultBundle};

const SIZE: f64 = 640.0;
const MARGIN: f64 = 48.0;
const COLOR_L: &str = "#1f77b4";
const COLOR_R: &str = "#d62728";
const COLOR_S: &str = "#2ca02c";
const COLOR_AXIS: &str = "#888888";

/// Affine map from data bounds to the drawing area, `y` pointing up.
struct Frame {
    x0: f64,
    y1: f64,
    sx: f64,
    sy: f64,
}

impl Frame {
    fn new(
        xs: impl Iterator<Item = f64> + Clone,
        ys: impl Iterator<Item = f64> + Clone,
        equal: bool,
    ) -> Self {
        let (mut x0, mut x1) = bounds(xs);
        let (mut y0, mut y1) = bounds(ys);
        pad(&mut x0, &mut x1);
        pad(&mut y0, &mut y1);
        let inner = SIZE - 2.0 * MARGIN;
        let (mut sx, mut sy) = (inner / (x1 - x0), inner / (y1 - y0));
        if equal {
            let s = sx.min(sy);
            let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
            x0 = cx - inner / (2.0 * s);
            y1 = cy + inner / (2.0 * s);
            sx = s;
            sy = s;
        }
        Self { x0, y1, sx, sy }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) * self.sx
    }

    fn py(&self, y: f64) -> f64 {
        MARGIN + (self.y1 - y) * self.sy
    }

    fn point(&self, x: f64, y: f64) -> String {
        format!("{:.3},{:.3}", self.px(x), self.py(y))
    }

    fn contains_x(&self, x: f64) -> bool {
        (MARGIN - 1e-9..=SIZE - MARGIN + 1e-9).contains(&self.px(x))
    }

    fn contains_y(&self, y: f64) -> bool {
        (MARGIN - 1e-9..=SIZE - MARGIN + 1e-9).contains(&self.py(y))
    }
}

fn bounds(v: impl Iterator<Item = f64>) -> (f64, f64) {
    v.filter(|x| x.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        })
}

fn pad(lo: &mut f64, hi: &mut f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        (*lo, *hi) = (-1.0, 1.0);
    }
    let span = (*hi - *lo).max(1e-9 * lo.abs().max(hi.abs())).max(1e-12);
    let extra = if *hi - *lo < 1e-12 {
        0.5 * lo.abs().max(1.0)
    } else {
        0.05 * span
    };
    *lo -= extra;
    *hi += extra;
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{:.1}">{}</text>"#,
        MARGIN * 0.6,
        escape(title)
    );
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn polyline(s: &mut String, frame: &Frame, pts: impl Iterator<Item = (f64, f64)>, color: &str) {
    let pts: Vec<String> = pts.map(|(x, y)| frame.point(x, y)).collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
        pts.join(" ")
    );
}

fn axes(s: &mut String, frame: &Frame, xlabel: &str, ylabel: &str) {
    let (lo, hi) = (MARGIN, SIZE - MARGIN);
    let _ = writeln!(
        s,
        r#"<rect x="{lo}" y="{lo}" width="{w}" height="{w}" fill="none" stroke="{COLOR_AXIS}"/>"#,
        w = hi - lo
    );
    if frame.contains_y(0.0) {
        let y = frame.py(0.0);
        let _ = writeln!(
            s,
            r#"<line x1="{lo}" y1="{y:.3}" x2="{hi}" y2="{y:.3}" stroke="{COLOR_AXIS}" stroke-dasharray="4 3"/>"#
        );
    }
    if frame.contains_x(0.0) {
        let x = frame.px(0.0);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.3}" y1="{lo}" x2="{x:.3}" y2="{hi}" stroke="{COLOR_AXIS}" stroke-dasharray="4 3"/>"#
        );
    }
    let inner = hi - lo;
    let (xmin, xmax) = (frame.x0, frame.x0 + inner / frame.sx);
    let (ymin, ymax) = (frame.y1 - inner / frame.sy, frame.y1);
    let below = hi + 14.0;
    let _ = writeln!(
        s,
        r#"<text x="{lo}" y="{below}" font-size="10">{xmin:.4}</text>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{hi}" y="{below}" font-size="10" text-anchor="end">{xmax:.4}</text>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="10">{ymax:.4}</text>"#,
        lo + 3.0,
        lo + 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="10">{ymin:.4}</text>"#,
        lo + 3.0,
        hi - 3.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        SIZE / 2.0,
        SIZE - MARGIN * 0.3,
        escape(xlabel)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{}</text>"#,
        MARGIN * 0.4,
        SIZE / 2.0,
        MARGIN * 0.4,
        SIZE / 2.0,
        escape(ylabel)
    );
}

fn arc_color(u: f64) -> &'static str {
    if u > 0.0 {
        COLOR_L
    } else if u < 0.0 {
        COLOR_R
    } else {
        COLOR_S
    }
}

fn pose_marker(s: &mut String, frame: &Frame, x: f64, y: f64, theta: f64, len: f64, fill: &str) {
    let (ex, ey) = (x + len * theta.cos(), y + len * theta.sin());
    let _ = writeln!(
        s,
        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="black" stroke-width="1.5"/>"#,
        frame.px(x),
        frame.py(y),
        frame.px(ex),
        frame.py(ey)
    );
    let _ = writeln!(
        s,
        r#"<circle cx="{:.3}" cy="{:.3}" r="5" fill="{fill}" stroke="black"/>"#,
        frame.px(x),
        frame.py(y)
    );
}

fn require_path(bundle: &ResultBundle) -> Result<&[PathRow]> {
    let rows = &bundle.samples.path;
    if rows.len() < 2 {
        bail!("bundle has no path samples (found {})", rows.len());
    }
    Ok(rows)
}

/// Path in the plane with start/goal poses, coloured by arc type.
pub fn path_svg(bundle: &ResultBundle) -> Result<String> {
    let rows = require_path(bundle)?;
    let (start, goal) = (bundle.instance.start, bundle.instance.goal);
    let xs = rows.iter().map(|r| r.x).chain([start.x, goal.x]);
    let ys = rows.iter().map(|r| r.y).chain([start.y, goal.y]);
    let (x0, x1) = bounds(xs.clone());
    let (y0, y1) = bounds(ys.clone());
    let arrow = 0.08 * (x1 - x0).max(y1 - y0).max(1.0 / bundle.instance.curvature);
    let frame = Frame::new(
        xs.chain([
            start.x + arrow,
            start.x - arrow,
            goal.x + arrow,
            goal.x - arrow,
        ]),
        ys.chain([
            start.y + arrow,
            start.y - arrow,
            goal.y + arrow,
            goal.y - arrow,
        ]),
        true,
    );
    let title = format!(
        "{} path, length {:.8}",
        crate::bundle::word_label(&bundle.best.word),
        bundle.best.length
    );
    let mut s = header(&title);
    let mut i = 0;
    while i + 1 < rows.len() {
        let u = rows[i].u;
        let mut j = i + 1;
        while j + 1 < rows.len() && rows[j].u == u {
            j += 1;
        }
        polyline(
            &mut s,
            &frame,
            rows[i..=j].iter().map(|r| (r.x, r.y)),
            arc_color(u),
        );
        i = j;
    }
    pose_marker(
        &mut s,
        &frame,
        start.x,
        start.y,
        start.theta,
        arrow,
        "#ffffff",
    );
    pose_marker(&mut s, &frame, goal.x, goal.y, goal.theta, arrow, "#444444");
    for (k, (label, color)) in [("L", COLOR_L), ("R", COLOR_R), ("S", COLOR_S)]
        .into_iter()
        .enumerate()
    {
        let y = SIZE - MARGIN * 0.4;
        let x = SIZE - MARGIN - 150.0 + 50.0 * k as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="3"/>"#,
            x + 20.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}">{label}</text>"#,
            x + 24.0,
            y + 4.0
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Switching function `λ₃(t)` with the switch times marked.
pub fn switching_svg(bundle: &ResultBundle) -> Result<String> {
    require_path(bundle)?;
    let rows = &bundle.samples.switching;
    if rows.len() < 2 {
        bail!("bundle has no switching samples (found {})", rows.len());
    }
    let frame = Frame::new(
        rows.iter().map(|r| r.t),
        rows.iter().map(|r| r.lambda3).chain([0.0]),
        false,
    );
    let mut s = header(&format!(
        "switching function, {}",
        crate::bundle::word_label(&bundle.best.word)
    ));
    axes(&mut s, &frame, "t", "λ₃");
    for &t in &bundle.best.switch_times {
        let x = frame.px(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.3}" y1="{MARGIN}" x2="{x:.3}" y2="{}" stroke="{COLOR_AXIS}" stroke-dasharray="1 3"/>"#,
            SIZE - MARGIN
        );
    }
    polyline(
        &mut s,
        &frame,
        rows.iter().map(|r| (r.t, r.lambda3)),
        "black",
    );
    s.push_str("</svg>\n");
    Ok(s)
}

/// Phase trajectory `(λ₃, λ̇₃)` on equal axes through the origin.
pub fn phase_svg(bundle: &ResultBundle) -> Result<String> {
    require_path(bundle)?;
    let rows = &bundle.samples.switching;
    if rows.len() < 2 {
        bail!("bundle has no switching samples (found {})", rows.len());
    }
    let frame = Frame::new(
        rows.iter().map(|r| r.lambda3).chain([0.0]),
        rows.iter().map(|r| r.lambda3_dot).chain([0.0]),
        true,
    );
    let mut s = header("phase trajectory");
    axes(&mut s, &frame, "λ₃", "dλ₃/dt");
    polyline(
        &mut s,
        &frame,
        rows.iter().map(|r| (r.lambda3, r.lambda3_dot)),
        "black",
    );
    let first = rows[0];
    let _ = writeln!(
        s,
        r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="{COLOR_L}"/>"#,
        frame.px(first.lambda3),
        frame.py(first.lambda3_dot)
    );
    s.push_str("</svg>\n");
    Ok(s)
}
