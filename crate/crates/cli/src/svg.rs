//! Orthographic sphere plots as standalone SVG 1.1.
//!
//! The far hemisphere (negative component along the viewing direction) is
//! drawn dashed, the near one solid.

use std::fmt::Write as _;

use strobe_core::{Bounds, Vec3};

pub const SIZE: f64 = 640.0;
const RADIUS: f64 = 280.0;
/// Orbits with at most this many samples are drawn as dots.
pub const DOTS_THRESHOLD: usize = 500;
/// Polyline vertices closer than this (pixels) to the previous one are dropped.
const MIN_STEP_PX: f64 = 0.5;

/// Screen frame of the projection: `ex`, `ey` span the image plane and
/// `view` points at the viewer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub ex: Vec3,
    pub ey: Vec3,
    pub view: Vec3,
}

impl Projection {
    /// Looks along `-view` with `q` leaning right by `tilt` from vertical.
    pub fn new(view: Vec3, q: Vec3, tilt: f64) -> Option<Self> {
        let view = view.normalized()?;
        let up = (q - view * q.dot(view)).normalized()?;
        let right = up.cross(view);
        let (s, c) = tilt.sin_cos();
        Some(Self {
            ex: right * c + up * s,
            ey: up * c - right * s,
            view,
        })
    }

    /// Slightly above the equator, from the `-y` side, with `q` up and to
    /// the right.
    pub fn default_for(q: Vec3) -> Self {
        Self::new(Vec3::new(0.35, -1.0, 0.3), q, 0.35)
            .or_else(|| Self::new(Vec3::new(1.0, 0.3, 0.35), q, 0.35))
            .expect("two independent directions cannot both be parallel to q")
    }

    pub fn is_front(&self, r: Vec3) -> bool {
        r.dot(self.view) >= 0.0
    }

    /// Pixel coordinates, y growing downwards.
    pub fn screen(&self, r: Vec3) -> (f64, f64) {
        (
            SIZE / 2.0 + RADIUS * r.dot(self.ex),
            SIZE / 2.0 - RADIUS * r.dot(self.ey),
        )
    }
}

/// Everything drawn in one figure.
#[derive(Debug, Clone, Default)]
pub struct Figure {
    pub q: Vec3,
    pub bounds: Option<Bounds>,
    pub curves: Vec<Vec<Vec3>>,
    pub dots: Vec<Vec<Vec3>>,
    /// Highlighted start point.
    pub marker: Option<Vec3>,
}

impl Figure {
    pub fn new(q: Vec3, bounds: Bounds) -> Self {
        Self {
            q,
            bounds: Some(bounds),
            ..Self::default()
        }
    }

    /// Sparse orbits go in as dots, dense ones as a curve.
    pub fn add_orbit(&mut self, points: Vec<Vec3>) {
        if points.len() <= DOTS_THRESHOLD {
            self.dots.push(points);
        } else {
            self.curves.push(points);
        }
    }
}

/// Splits a path into maximal runs on one side; a run ends on the first
/// point of the next so the drawn line has no gaps.
fn runs(points: &[Vec3], proj: &Projection) -> Vec<(bool, Vec<Vec3>)> {
    let mut out: Vec<(bool, Vec<Vec3>)> = Vec::new();
    for &p in points {
        let front = proj.is_front(p);
        match out.last_mut() {
            Some((side, run)) if *side == front => run.push(p),
            Some((_, run)) => {
                run.push(p);
                out.push((front, vec![p]));
            }
            None => out.push((front, vec![p])),
        }
    }
    out
}

fn polyline(svg: &mut String, points: &[Vec3], proj: &Projection, front: bool, class: &str) {
    let mut coords = String::new();
    let mut last: Option<(f64, f64)> = None;
    for (i, &p) in points.iter().enumerate() {
        let (x, y) = proj.screen(p);
        let keep = match last {
            None => true,
            Some((lx, ly)) => i + 1 == points.len() || (x - lx).hypot(y - ly) >= MIN_STEP_PX,
        };
        if keep {
            let _ = write!(coords, "{x:.2},{y:.2} ");
            last = Some((x, y));
        }
    }
    let side = if front { "front" } else { "back" };
    let _ = writeln!(
        svg,
        r#"<polyline class="{class} {side}" points="{}"/>"#,
        coords.trim_end()
    );
}

fn circle_on_sphere(q: Vec3, height: f64) -> Vec<Vec3> {
    let seed = if q.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
    let e1 = (seed - q * seed.dot(q))
        .normalized()
        .expect("seed not parallel to q");
    let e2 = q.cross(e1);
    let rad = (1.0 - height * height).max(0.0).sqrt();
    (0..=360)
        .map(|i| {
            let t = (i as f64).to_radians();
            q * height + e1 * (rad * t.cos()) + e2 * (rad * t.sin())
        })
        .collect()
}

pub fn render(fig: &Figure, proj: &Projection) -> String {
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    svg.push_str(
        "<style>\n\
         polyline { fill: none; stroke-linejoin: round; }\n\
         .back { stroke-dasharray: 4 3; }\n\
         .guide { stroke: #888; stroke-width: 0.8; }\n\
         .curve { stroke: #000; stroke-width: 1.2; }\n\
         .dot.front { fill: #000; }\n\
         .dot.back { fill: #fff; stroke: #000; stroke-width: 0.8; }\n\
         </style>\n",
    );
    let c = SIZE / 2.0;
    let _ = writeln!(
        svg,
        r##"<circle cx="{c}" cy="{c}" r="{RADIUS}" fill="none" stroke="#000" stroke-width="1"/>"##
    );

    let (x0, y0) = proj.screen(fig.q * -1.08);
    let (x1, y1) = proj.screen(fig.q * 1.08);
    let _ = writeln!(
        svg,
        r##"<line class="axis" x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#000" stroke-width="0.8"/>"##
    );
    let (lx, ly) = proj.screen(fig.q * 1.1);
    let (lx, ly) = (lx + 6.0, ly.max(18.0));
    let _ = writeln!(
        svg,
        r#"<text x="{lx:.2}" y="{ly:.2}" font-family="serif" font-style="italic" font-size="18">q</text>"#
    );

    let mut guides = vec![0.0];
    if let Some(b) = fig.bounds {
        guides.push(b.a1);
        guides.push(b.a2);
    }
    for h in guides {
        for (front, run) in runs(&circle_on_sphere(fig.q, h), proj) {
            polyline(&mut svg, &run, proj, front, "guide");
        }
    }
    for curve in &fig.curves {
        for (front, run) in runs(curve, proj) {
            polyline(&mut svg, &run, proj, front, "curve");
        }
    }
    for set in &fig.dots {
        for &p in set {
            let (x, y) = proj.screen(p);
            let side = if proj.is_front(p) { "front" } else { "back" };
            let _ = writeln!(
                svg,
                r#"<circle class="dot {side}" cx="{x:.2}" cy="{y:.2}" r="2.5"/>"#
            );
        }
    }
    if let Some(m) = fig.marker {
        let (x, y) = proj.screen(m);
        let _ = writeln!(
            svg,
            r##"<circle class="marker" cx="{x:.2}" cy="{y:.2}" r="4" fill="#000"/>"##
        );
    }
    svg.push_str("</svg>\n");
    svg
}
