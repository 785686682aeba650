//! Poincaré-disc phase portraits as standalone SVG documents.
//!
//! The plane is compactified by (x, y) -> (x, y) / (1 + sqrt(1 + x^2 + y^2)),
//! which sends the finite plane onto the open unit disc; equilibria at
//! infinity live on the boundary circle. Rendering is deterministic: the same
//! PortraitSpec always yields byte-identical output.

use rayon::prelude::*;

use crate::criteria::LienardSystem;
use crate::flow::{integrate, return_map, FlowError, IntegratorConfig, Termination};
use crate::infinity::{classify_infinity, normalize};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("disc size {px} px is below the 100 px minimum")]
    DiscTooSmall { px: u32 },
    #[error("seed radii must be positive and strictly increasing: {why}")]
    BadSeeds { why: String },
}

#[derive(Clone, Debug)]
pub struct PortraitSpec {
    pub sys: LienardSystem,
    pub n_orbits: usize,
    pub seed_radii: Vec<f64>,
    pub disc_px: u32,
    pub include_infinity: bool,
}

impl PortraitSpec {
    /// n_orbits always equals seed_radii.len(); one orbit is launched from
    /// (0, r) for each seed radius r.
    pub fn new(
        sys: LienardSystem,
        seed_radii: Vec<f64>,
        disc_px: u32,
        include_infinity: bool,
    ) -> Result<Self, RenderError> {
        if disc_px < 100 {
            return Err(RenderError::DiscTooSmall { px: disc_px });
        }
        for (i, &r) in seed_radii.iter().enumerate() {
            if !(r > 0.0) || !r.is_finite() {
                return Err(RenderError::BadSeeds { why: format!("seed #{i} = {r}") });
            }
            if i > 0 && seed_radii[i - 1] >= r {
                return Err(RenderError::BadSeeds {
                    why: format!("seed #{i} = {r} does not increase"),
                });
            }
        }
        Ok(PortraitSpec {
            sys,
            n_orbits: seed_radii.len(),
            seed_radii,
            disc_px,
            include_infinity,
        })
    }
}

/// Compactification onto the open unit disc.
pub fn project(x: f64, y: f64) -> (f64, f64) {
    let d = 1.0 + (1.0 + x * x + y * y).sqrt();
    (x / d, y / d)
}

const MAX_POLYLINE_POINTS: usize = 10_000;
/// Forward-time cap for orbits that never return (spirals into the origin or
/// toward the boundary keep winding; the cap bounds the drawn arc).
const OPEN_ORBIT_T_MAX: f64 = 200.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Boundary angle (degrees, mathematical convention) of a named equilibrium
/// at infinity: the A pair sits on the x-axis directions, B on y, C on the
/// diagonal y=x, D on y=-x.
fn marker_angle(name: &str) -> Option<f64> {
    Some(match name {
        "I_A+" => 0.0,
        "I_A-" => 180.0,
        "I_B+" => 90.0,
        "I_B-" => 270.0,
        "I_C+" => 45.0,
        "I_C-" => 225.0,
        "I_D+" => 135.0,
        "I_D-" => 315.0,
        _ => return None,
    })
}

struct OrbitPath {
    points: Vec<(f64, f64)>,
    note: Option<String>,
}

/// Integrate one orbit from (0, y0). A returning orbit is drawn over exactly
/// one revolution; a non-returning one is drawn up to escape or the time cap
/// and annotated with what ended it.
fn trace_orbit(sys: &LienardSystem, y0: f64, cfg: &IntegratorConfig) -> OrbitPath {
    let (t_end, note) = match return_map(sys, y0, cfg) {
        Ok(c) => (c.t, None),
        Err(FlowError::EscapeBeforeReturn { .. }) => {
            (OPEN_ORBIT_T_MAX, Some("escapes".to_string()))
        }
        Err(FlowError::NoReturn { .. }) => (OPEN_ORBIT_T_MAX, Some("captured".to_string())),
        Err(e) => {
            return OrbitPath { points: vec![(0.0, y0)], note: Some(format!("failed: {e}")) }
        }
    };
    match integrate(sys, [0.0, y0], (0.0, t_end), cfg) {
        Ok(tr) => {
            let mut note = note;
            if tr.termination == Termination::Escaped && note.is_none() {
                note = Some("escapes".to_string());
            }
            let pts: Vec<(f64, f64)> = tr.states.iter().map(|s| (s[0], s[1])).collect();
            OrbitPath { points: subsample(pts), note }
        }
        Err(e) => OrbitPath { points: vec![(0.0, y0)], note: Some(format!("failed: {e}")) },
    }
}

fn subsample(pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    if pts.len() <= MAX_POLYLINE_POINTS {
        return pts;
    }
    let stride = pts.len().div_ceil(MAX_POLYLINE_POINTS);
    let last = *pts.last().unwrap();
    let mut out: Vec<(f64, f64)> = pts.into_iter().step_by(stride).collect();
    if *out.last().unwrap() != last {
        out.push(last);
    }
    out
}

pub fn render_portrait(spec: &PortraitSpec) -> String {
    let w = spec.disc_px as f64;
    let cx = w / 2.0;
    let cy = w / 2.0;
    let r_disc = 0.46 * w;
    // project() sends radius rho to rho/(1+sqrt(1+rho^2)), which tends to 1,
    // so the boundary circle is the image of infinity.
    let px = |p: (f64, f64)| (cx + r_disc * p.0, cy - r_disc * p.1);

    let cfg = IntegratorConfig::default();
    let orbits: Vec<OrbitPath> = spec
        .seed_radii
        .par_iter()
        .map(|&y0| trace_orbit(&spec.sys, y0, &cfg))
        .collect();

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
        spec.disc_px
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n",
        spec.disc_px
    ));
    svg.push_str(&format!(
        "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
        cx, cy, r_disc
    ));
    // Axes through the disc for orientation.
    svg.push_str(&format!(
        "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
        cx - r_disc, cy, cx + r_disc, cy
    ));
    svg.push_str(&format!(
        "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n",
        cx, cy - r_disc, cx, cy + r_disc
    ));

    for (i, orbit) in orbits.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if orbit.points.len() >= 2 {
            let mut attr = String::new();
            for &(x, y) in &orbit.points {
                let (u, v) = px(project(x, y));
                attr.push_str(&format!("{:.3},{:.3} ", u, v));
            }
            attr.pop();
            svg.push_str(&format!(
                "  <polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1\"/>\n",
                attr, color
            ));
        }
        let (u0, v0) = px(project(orbit.points[0].0, orbit.points[0].1));
        svg.push_str(&format!(
            "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2\" fill=\"{}\"/>\n",
            u0, v0, color
        ));
        if let Some(note) = &orbit.note {
            svg.push_str(&format!(
                "  <text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"9\" fill=\"{}\">{}</text>\n",
                u0 + 4.0, v0 - 3.0, color, xml_escape(note)
            ));
        }
    }

    if spec.include_infinity {
        let class = classify_infinity(&normalize(&spec.sys))
            .expect("nonzero f and g always classify");
        for eq in &class.equilibria {
            if let Some(deg) = marker_angle(&eq.name) {
                let th = deg.to_radians();
                let (mx, my) = (cx + r_disc * th.cos(), cy - r_disc * th.sin());
                let (lx, ly) = (cx + (r_disc - 16.0) * th.cos(), cy - (r_disc - 16.0) * th.sin());
                svg.push_str(&format!(
                    "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"black\"/>\n",
                    mx, my
                ));
                svg.push_str(&format!(
                    "  <text x=\"{:.3}\" y=\"{:.3}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>\n",
                    lx, ly, xml_escape(&eq.name)
                ));
            }
        }
    }

    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
