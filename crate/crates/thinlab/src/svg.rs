//! SVG rendering of a packing orbit.
//!
//! Geometry is exact up to this point; coordinates are converted to `f64`
//! only here. The plane's `y` axis points up, so `y` is negated on output.

use std::fmt::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use thinlab_core::packing::{InversiveCircle, PackingOrbit};

#[derive(Clone, Copy, Debug, Default)]
pub struct SvgOptions {
    /// Write the integer curvature inside every circle with curvature ≥ 1.
    pub labels: bool,
    /// Add a generation-time comment; off for byte-identical output.
    pub timestamp: bool,
    /// Draw the mirrors of the generating reflections.
    pub mirrors: bool,
}

const HEADER: &str = "curvature sign convention: a circle is oriented by the side its normal points into; \
circles bounding their interior have positive curvature, a circle whose interior is the outside \
(a bounding circle) has negative curvature, lines have curvature 0. Curvatures are shown after the \
global rescaling that makes the depth-0 circles coprime integers.";

struct Box {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Box {
    fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    /// The segment of `n·x = h` inside the box, in plane coordinates.
    fn clip_line(&self, n: [f64; 2], h: f64) -> Option<([f64; 2], [f64; 2])> {
        let mut pts: Vec<[f64; 2]> = Vec::new();
        if n[1].abs() > 1e-12 {
            for x in [self.x0, self.x1] {
                let y = (h - n[0] * x) / n[1];
                if (self.y0..=self.y1).contains(&y) {
                    pts.push([x, y]);
                }
            }
        }
        if n[0].abs() > 1e-12 {
            for y in [self.y0, self.y1] {
                let x = (h - n[1] * y) / n[0];
                if (self.x0..=self.x1).contains(&x) {
                    pts.push([x, y]);
                }
            }
        }
        let a = *pts.first()?;
        let b = pts
            .iter()
            .copied()
            .max_by(|p, q| dist(a, *p).total_cmp(&dist(a, *q)))?;
        (dist(a, b) > 0.0).then_some((a, b))
    }
}

/// Six decimals, with `-0` printed as `0`.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        s[1..].to_owned()
    } else {
        s
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn bounds(orbit: &PackingOrbit) -> Box {
    let mut b = Box {
        x0: f64::INFINITY,
        y0: f64::INFINITY,
        x1: f64::NEG_INFINITY,
        y1: f64::NEG_INFINITY,
    };
    for c in &orbit.circles {
        if let (Some(o), Some(r)) = (c.circle.center_f64(), c.circle.radius_f64()) {
            if o[0].is_finite() && o[1].is_finite() && r.is_finite() {
                b.x0 = b.x0.min(o[0] - r);
                b.x1 = b.x1.max(o[0] + r);
                b.y0 = b.y0.min(o[1] - r);
                b.y1 = b.y1.max(o[1] + r);
            }
        }
    }
    if !b.x0.is_finite() {
        return Box {
            x0: -1.0,
            y0: -1.0,
            x1: 1.0,
            y1: 1.0,
        };
    }
    let pad = 0.05 * b.width().max(b.height()).max(1e-9);
    Box {
        x0: b.x0 - pad,
        y0: b.y0 - pad,
        x1: b.x1 + pad,
        y1: b.y1 + pad,
    }
}

fn shape(out: &mut String, c: &InversiveCircle, class: &str, bx: &Box, extra: &str) {
    if let Some((n, h)) = c.line_f64() {
        if let Some((a, b)) = bx.clip_line(n, h) {
            let _ = writeln!(
                out,
                "<line class=\"{class}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"{extra}/>",
                num(a[0]),
                num(-a[1]),
                num(b[0]),
                num(-b[1])
            );
        } else {
            // outside the frame; keep one element per circle
            let _ = writeln!(out, "<line class=\"{class}\" x1=\"0\" y1=\"0\" x2=\"0\" y2=\"0\" visibility=\"hidden\"{extra}/>");
        }
    } else if let (Some(o), Some(r)) = (c.center_f64(), c.radius_f64()) {
        let _ = writeln!(
            out,
            "<circle class=\"{class}\" cx=\"{}\" cy=\"{}\" r=\"{}\"{extra}/>",
            num(o[0]),
            num(-o[1]),
            num(r)
        );
    }
}

pub fn render_svg(orbit: &PackingOrbit, opts: SvgOptions) -> String {
    let bx = bounds(orbit);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"{:.0}\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">",
        (800.0 * bx.height() / bx.width()).clamp(100.0, 4000.0),
        bx.x0,
        -bx.y1,
        bx.width(),
        bx.height()
    );
    let _ = writeln!(s, "<!-- {HEADER} -->");
    let _ = writeln!(
        s,
        "<!-- {} circles to depth {}; scale {} -->",
        orbit.len(),
        orbit.depth,
        orbit.scale
    );
    if opts.timestamp {
        let t = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let _ = writeln!(s, "<!-- generated at unix time {t} -->");
    }
    s.push_str(
        "<style>.orbit{fill:none;stroke:black;vector-effect:non-scaling-stroke;stroke-width:1}\
.mirror{fill:none;stroke:red;vector-effect:non-scaling-stroke;stroke-width:1.5}\
text{font-family:sans-serif;text-anchor:middle;dominant-baseline:central}</style>\n",
    );
    if opts.mirrors {
        s.push_str("<g id=\"mirrors\">\n");
        for m in &orbit.mirrors {
            shape(&mut s, &m.circle, "mirror", &bx, "");
        }
        s.push_str("</g>\n");
    }
    s.push_str("<g id=\"orbit\">\n");
    for c in &orbit.circles {
        let extra = format!(" data-depth=\"{}\"", c.depth);
        shape(&mut s, &c.circle, "orbit", &bx, &extra);
    }
    s.push_str("</g>\n");
    if opts.labels {
        s.push_str("<g id=\"labels\">\n");
        for c in &orbit.circles {
            let (Some(k), Some(o), Some(r)) = (orbit.integer_curvature(c), c.circle.center_f64(), c.circle.radius_f64())
            else {
                continue;
            };
            if k.magnitude() < &1u32.into() {
                continue;
            }
            let _ = writeln!(
                s,
                "<text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"{}\">{k}</text>",
                num(o[0]),
                num(-o[1]),
                num(r * 0.8)
            );
        }
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}
