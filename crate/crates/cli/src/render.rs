//! SVG pictures of a map: images of concentric circles and radial segments.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use shearconv_core::{Complex64, MapEvaluator};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub radial_lines: usize,
    pub circles: usize,
    pub max_radius: f64,
    pub samples_per_curve: usize,
    pub direction_guide: Option<f64>,
    pub width: u32,
    pub height: u32,
    pub stroke: String,
    pub stroke_width: f64,
    pub guide_stroke: String,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            radial_lines: 24,
            circles: 12,
            max_radius: 0.99,
            samples_per_curve: 720,
            direction_guide: None,
            width: 800,
            height: 800,
            stroke: "#1f4e79".into(),
            stroke_width: 1.0,
            guide_stroke: "#c0392b".into(),
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.max_radius > 0.0 && self.max_radius < 1.0) {
            return Err(CliError::Usage(format!(
                "max-radius must lie in (0, 1), got {}",
                self.max_radius
            )));
        }
        for (name, v) in [
            ("radial-lines", self.radial_lines),
            ("circles", self.circles),
            ("samples", self.samples_per_curve),
        ] {
            if v < 2 {
                return Err(CliError::Usage(format!("{name} must be at least 2, got {v}")));
            }
        }
        if self.width == 0 || self.height == 0 {
            return Err(CliError::Usage("canvas size must be positive".into()));
        }
        if !(self.stroke_width > 0.0) {
            return Err(CliError::Usage("stroke-width must be positive".into()));
        }
        Ok(())
    }
}

/// Image curves in the `w`-plane.
#[derive(Clone, Debug, Default)]
pub struct Curves {
    pub circles: Vec<Vec<Complex64>>,
    pub radials: Vec<Vec<Complex64>>,
}

impl Curves {
    pub fn points(&self) -> impl Iterator<Item = &Complex64> {
        self.circles.iter().chain(&self.radials).flatten()
    }
}

pub fn trace<M: MapEvaluator + ?Sized>(map: &M, spec: &RenderSpec) -> Curves {
    let m = spec.samples_per_curve;
    let circles = (1..=spec.circles)
        .map(|k| {
            let r = spec.max_radius * k as f64 / spec.circles as f64;
            let mut pts = map.circle_values(r, m);
            pts.push(pts[0]);
            pts
        })
        .collect();
    let radials = (0..spec.radial_lines)
        .map(|k| {
            let dir = Complex64::from_polar(1.0, TAU * k as f64 / spec.radial_lines as f64);
            (0..=m)
                .map(|j| map.value(dir * (spec.max_radius * j as f64 / m as f64)))
                .collect()
        })
        .collect();
    Curves { circles, radials }
}

/// `(min_x, min_y, width, height)` of the flipped points, padded by 5%.
fn view_box(curves: &Curves) -> (f64, f64, f64, f64) {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in curves.points().filter(|p| p.re.is_finite() && p.im.is_finite()) {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(-p.im);
        y1 = y1.max(-p.im);
    }
    if x0 > x1 {
        return (-1.0, -1.0, 2.0, 2.0);
    }
    let w = (x1 - x0).max(1e-9);
    let h = (y1 - y0).max(1e-9);
    (x0 - 0.05 * w, y0 - 0.05 * h, 1.1 * w, 1.1 * h)
}

fn polyline(out: &mut String, class: &str, pts: &[Complex64]) {
    // non-finite samples split the curve
    for run in pts
        .split(|p| !(p.re.is_finite() && p.im.is_finite()))
        .filter(|r| r.len() >= 2)
    {
        let coords: Vec<String> = run.iter().map(|p| format!("{},{}", p.re, -p.im)).collect();
        let _ = writeln!(out, "<polyline class=\"{class}\" points=\"{}\"/>", coords.join(" "));
    }
}

pub fn svg(curves: &Curves, spec: &RenderSpec) -> String {
    let (vx, vy, vw, vh) = view_box(curves);
    let unit = (vw / spec.width as f64).max(vh / spec.height as f64);
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{vx} {vy} {vw} {vh}\">",
        spec.width, spec.height
    );
    let _ = writeln!(
        out,
        "<g fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" stroke-linejoin=\"round\">",
        spec.stroke,
        spec.stroke_width * unit
    );
    for c in &curves.circles {
        polyline(&mut out, "circle", c);
    }
    for r in &curves.radials {
        polyline(&mut out, "radial", r);
    }
    out.push_str("</g>\n");

    if let Some(psi) = spec.direction_guide {
        // lines parallel to e^{iψ}, drawn in flipped coordinates
        let d = (psi.cos(), -psi.sin());
        let nrm = (-d.1, d.0);
        let corners = [(vx, vy), (vx + vw, vy), (vx, vy + vh), (vx + vw, vy + vh)];
        let span = |v: (f64, f64)| {
            corners.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
                let s = c.0 * v.0 + c.1 * v.1;
                (lo.min(s), hi.max(s))
            })
        };
        let (s0, s1) = span(nrm);
        let (t0, t1) = span(d);
        let _ = writeln!(
            out,
            "<g stroke=\"{}\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\">",
            spec.guide_stroke,
            spec.stroke_width * unit,
            6.0 * unit,
            4.0 * unit
        );
        let lines = 9;
        for k in 1..=lines {
            let s = s0 + (s1 - s0) * k as f64 / (lines + 1) as f64;
            let p = |t: f64| (s * nrm.0 + t * d.0, s * nrm.1 + t * d.1);
            let (a, b) = (p(t0), p(t1));
            let _ = writeln!(
                out,
                "<line class=\"guide\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                a.0, a.1, b.0, b.1
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

/// Curve points recovered from an SVG produced by [`svg`], unflipped.
pub fn parse_points(svg: &str) -> Vec<Complex64> {
    let mut pts = Vec::new();
    for chunk in svg.split("points=\"").skip(1) {
        let body = chunk.split('"').next().unwrap_or("");
        for pair in body.split_whitespace() {
            if let Some((x, y)) = pair.split_once(',') {
                if let (Ok(x), Ok(y)) = (x.parse::<f64>(), y.parse::<f64>()) {
                    pts.push(Complex64::new(x, -y));
                }
            }
        }
    }
    pts
}
