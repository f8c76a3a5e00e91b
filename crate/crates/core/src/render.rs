//! SVG drawings of windows.
//!
//! Output uses only `g`, `path`, `line`, `circle` and `rect` elements and is
//! byte-for-byte deterministic. Each closed blue square becomes one closed
//! `path`; truncated blue structure is drawn cell by cell with `line`s.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::analysis::extract_blue_paths;
use crate::error::Error;
use crate::model::{Axis, Coord2, DiagonalSegment, Dir, Mod3Pair, PatternWindow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Layer {
    Blue,
    Diagonals,
    Arms,
    Marks,
    Coords,
}

impl Layer {
    pub const ALL: [Layer; 5] = [Layer::Blue, Layer::Diagonals, Layer::Arms, Layer::Marks, Layer::Coords];

    pub fn name(self) -> &'static str {
        match self {
            Layer::Blue => "blue",
            Layer::Diagonals => "diagonals",
            Layer::Arms => "arms",
            Layer::Marks => "marks",
            Layer::Coords => "coords",
        }
    }
}

impl FromStr for Layer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Layer::ALL
            .into_iter()
            .find(|l| l.name() == s.trim())
            .ok_or_else(|| Error::Format(format!("unknown layer '{s}'")))
    }
}

/// Parses a comma-separated layer list such as `blue,arms`.
pub fn parse_layers(s: &str) -> Result<Vec<Layer>, Error> {
    let mut v = s
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(Layer::from_str)
        .collect::<Result<Vec<_>, _>>()?;
    v.sort();
    v.dedup();
    Ok(v)
}

/// Stroke colors for the nine coordinate pairs, indexed by `3 * x + y`.
pub const COORD_PALETTE: [&str; 9] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
];

const BLUE: &str = "#1f4fd8";
const DIAGONAL: &str = "#d81f4f";
const ARM: &str = "#2b8a3e";
const MARK: &str = "#111111";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderStyle {
    pub cell_size: u32,
    pub layers: Vec<Layer>,
    pub palette: [&'static str; 9],
    pub show_grid: bool,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self {
            cell_size: 12,
            layers: Layer::ALL.to_vec(),
            palette: COORD_PALETTE,
            show_grid: false,
        }
    }
}

impl RenderStyle {
    fn has(&self, l: Layer) -> bool {
        self.layers.contains(&l)
    }

    fn color(&self, c: Mod3Pair) -> &'static str {
        if self.has(Layer::Coords) {
            self.palette[(3 * c.x() + c.y()) as usize]
        } else {
            BLUE
        }
    }
}

struct Canvas<'a> {
    window: &'a PatternWindow,
    cs: f64,
}

impl Canvas<'_> {
    /// Pixel position of a point given in cell units from the window's
    /// south-west corner (`(0.5, 0.5)` is the center of the first cell).
    fn px(&self, u: f64, v: f64) -> (f64, f64) {
        (u * self.cs, (self.window.height() as f64 - v) * self.cs)
    }

    fn center(&self, c: Coord2) -> (f64, f64) {
        let o = self.window.origin();
        ((c.x - o.x) as f64 + 0.5, (c.y - o.y) as f64 + 0.5)
    }

    fn line(&self, out: &mut String, a: (f64, f64), b: (f64, f64), extra: &str) {
        let (x1, y1) = self.px(a.0, a.1);
        let (x2, y2) = self.px(b.0, b.1);
        let _ = writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"{extra}/>"#);
    }
}

fn half_step(d: Dir) -> (f64, f64) {
    let (dx, dy) = d.delta();
    (dx as f64 * 0.5, dy as f64 * 0.5)
}

fn group(out: &mut String, id: &str, attrs: &str, body: &str) {
    if !body.is_empty() {
        let _ = write!(out, "<g id=\"{id}\"{attrs}>\n{body}</g>\n");
    }
}

/// Renders `window` as an SVG document.
pub fn render_svg(window: &PatternWindow, style: &RenderStyle) -> String {
    let cs = style.cell_size.max(1) as f64;
    let cv = Canvas { window, cs };
    let (w, h) = (window.width(), window.height());
    let mut doc = String::new();
    let _ = writeln!(
        doc,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w as f64 * cs,
        h as f64 * cs,
        w as f64 * cs,
        h as f64 * cs
    );

    if style.show_grid {
        let mut grid = String::new();
        for i in 0..=w {
            cv.line(&mut grid, (i as f64, 0.0), (i as f64, h as f64), "");
        }
        for j in 0..=h {
            cv.line(&mut grid, (0.0, j as f64), (w as f64, j as f64), "");
        }
        group(&mut doc, "grid", r##" stroke="#dddddd" stroke-width="0.5""##, &grid);
    }

    let mut drawing = String::new();
    if style.has(Layer::Blue) {
        drawing.push_str(&blue_layer(&cv, style));
    }
    if style.has(Layer::Diagonals) {
        let mut body = String::new();
        for (c, s) in window.iter() {
            let (u, v) = cv.center(c);
            let (a, b) = match s.diagonal {
                Some(DiagonalSegment::Through) => ((u - 0.5, v + 0.5), (u + 0.5, v - 0.5)),
                Some(DiagonalSegment::AttachUl) => ((u, v), (u + 0.5, v - 0.5)),
                Some(DiagonalSegment::AttachLr) => ((u - 0.5, v + 0.5), (u, v)),
                None => continue,
            };
            cv.line(&mut body, a, b, "");
        }
        let attrs = format!(r#" stroke="{DIAGONAL}" stroke-width="{}""#, cs / 8.0);
        group(&mut drawing, "diagonals", &attrs, &body);
    }
    if style.has(Layer::Arms) {
        let mut body = String::new();
        for (c, s) in window.iter() {
            let (u, v) = cv.center(c);
            for axis in [Axis::Horizontal, Axis::Vertical] {
                if s.arm(axis).is_some() {
                    let (du, dv) = if axis == Axis::Horizontal {
                        (0.5, 0.0)
                    } else {
                        (0.0, 0.5)
                    };
                    cv.line(&mut body, (u - du, v - dv), (u + du, v + dv), "");
                }
            }
            for d in s.arm_endpoints.iter() {
                let (du, dv) = half_step(d);
                cv.line(&mut body, (u, v), (u + du, v + dv), "");
            }
        }
        for (c, _) in window.iter().filter(|(_, s)| s.is_crossing()) {
            let (x, y) = cv.px(cv.center(c).0, cv.center(c).1);
            let _ = writeln!(body, r#"<circle cx="{x}" cy="{y}" r="{}" fill="{ARM}"/>"#, cs / 6.0);
        }
        let attrs = format!(r#" stroke="{ARM}" stroke-width="{}""#, cs / 12.0);
        group(&mut drawing, "arms", &attrs, &body);
    }
    if style.has(Layer::Marks) {
        let mut body = String::new();
        for (c, s) in window.iter().filter(|(_, s)| s.is_crossing()) {
            let (u, v) = cv.center(c);
            let axis = if s.h_arm.is_some() {
                Axis::Horizontal
            } else {
                Axis::Vertical
            };
            // arrowhead pointing toward the high end, just past the crossing
            let pts = match axis {
                Axis::Horizontal => [(u + 0.5, v), (u + 0.2, v + 0.2), (u + 0.2, v - 0.2)],
                Axis::Vertical => [(u, v + 0.5), (u - 0.2, v + 0.2), (u + 0.2, v + 0.2)],
            };
            let p = pts.map(|(a, b)| cv.px(a, b));
            let _ = writeln!(
                body,
                r#"<path d="M {} {} L {} {} L {} {} Z"/>"#,
                p[0].0, p[0].1, p[1].0, p[1].1, p[2].0, p[2].1
            );
        }
        group(&mut drawing, "marks", &format!(r#" fill="{MARK}""#), &body);
    }
    if drawing.is_empty() {
        doc.push_str("<g id=\"drawing\"/>\n");
    } else {
        group(&mut doc, "drawing", r#" fill="none" stroke-linecap="round""#, &drawing);
    }
    doc.push_str("</svg>\n");
    doc
}

fn blue_layer(cv: &Canvas<'_>, style: &RenderStyle) -> String {
    let window = cv.window;
    let structure = extract_blue_paths(window);
    let mut body = String::new();
    let mut in_square = vec![false; window.width() * window.height()];
    for sq in &structure.squares {
        let (u0, v0) = cv.center(sq.anchor);
        let (x0, y0) = cv.px(u0, v0);
        let (x1, y1) = cv.px(u0 + sq.side as f64, v0 + sq.side as f64);
        let _ = writeln!(
            body,
            r#"<path d="M {x0} {y0} H {x1} V {y1} H {x0} Z" stroke="{}"/>"#,
            style.color(sq.coords)
        );
        for t in 0..=sq.side {
            for c in [
                sq.anchor.offset(t, 0),
                sq.anchor.offset(t, sq.side),
                sq.anchor.offset(0, t),
                sq.anchor.offset(sq.side, t),
            ] {
                if let Some((col, row)) = window.local(c) {
                    in_square[row * window.width() + col] = true;
                }
            }
        }
    }
    // everything not on a closed square, cell by cell
    for (i, (c, s)) in window.iter().enumerate() {
        let Some(blue) = s.blue else { continue };
        if in_square[i] {
            continue;
        }
        let (u, v) = cv.center(c);
        for d in blue.shape.exits() {
            let (du, dv) = half_step(d);
            let extra = format!(r#" stroke="{}""#, style.color(blue.coords));
            cv.line(&mut body, (u, v), (u + du, v + dv), &extra);
        }
    }
    // inner-side ticks on straight segments
    for (c, s) in window.iter() {
        let Some(blue) = s.blue else { continue };
        if let (false, Some(inner)) = (blue.shape.is_corner(), blue.inner) {
            let (u, v) = cv.center(c);
            let (du, dv) = half_step(inner);
            cv.line(&mut body, (u, v), (u + du * 0.5, v + dv * 0.5), r#" stroke-width="1""#);
        }
    }
    let attrs = format!(r#" stroke="{BLUE}" stroke-width="{}""#, cv.cs / 6.0);
    let mut out = String::new();
    group(&mut out, "blue", &attrs, &body);
    out
}

/// Count of closed square outlines in a rendered document.
pub fn count_closed_paths(svg: &str) -> usize {
    svg.lines()
        .filter(|l| l.starts_with("<path d=\"M") && l.contains(" H ") && l.ends_with("/>"))
        .count()
}
