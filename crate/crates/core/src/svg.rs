//! SVG figures of tiling windows. The y axis points up, so the upper strip
//! boundary is drawn on top.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::geom::{congruence_key, CongruenceKey};
use crate::tiling::{TileLabel, TilingWindow};

#[derive(Clone, Debug)]
pub struct SvgOptions {
    /// Width of the drawing in pixels; height follows the aspect ratio.
    pub width: f64,
    /// Write `(i, j, n)` or `(row, col, face)` at each tile's centroid.
    pub labels: bool,
    /// One colour per congruence class instead of one per tile kind.
    pub color_by_class: bool,
    pub stroke_width: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 1200.0,
            labels: false,
            color_by_class: false,
            stroke_width: 0.75,
        }
    }
}

const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
];

fn kind_color(label: &TileLabel) -> &'static str {
    match label {
        TileLabel::Triangle(id) => {
            PALETTE[(id.kind as usize + 4 * (id.strip as usize % 2)) % PALETTE.len()]
        }
        TileLabel::Pentagon { face, .. } => PALETTE[*face as usize % PALETTE.len()],
        TileLabel::Other { index } => PALETTE[index % PALETTE.len()],
    }
}

fn label_text(label: &TileLabel) -> String {
    match label {
        TileLabel::Triangle(id) => format!("{},{},{}", id.column, id.kind, id.strip),
        TileLabel::Pentagon { row, col, face } => format!("{row},{col},{face}"),
        TileLabel::Other { index } => index.to_string(),
    }
}

/// Renders every tile as one closed path. Output depends only on the window
/// and the options.
pub fn render_svg(w: &TilingWindow, options: &SvgOptions) -> String {
    let pts: Vec<Vec<(f64, f64)>> = w
        .tiles
        .iter()
        .map(|t| {
            t.polygon
                .vertices()
                .iter()
                .map(|v| (v.x.approx(), v.y.approx()))
                .collect()
        })
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in pts.iter().flatten() {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let pad = 0.02 * (x1 - x0).max(y1 - y0).max(1e-9);
    let (x0, y0, x1, y1) = (x0 - pad, y0 - pad, x1 + pad, y1 + pad);
    let scale = options.width / (x1 - x0);
    let height = (y1 - y0) * scale;
    let map = |(x, y): (f64, f64)| ((x - x0) * scale, (y1 - y) * scale);

    let mut classes: HashMap<CongruenceKey, usize> = HashMap::new();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.2}" height="{:.2}" viewBox="0 0 {:.2} {:.2}">"#,
        options.width, height, options.width, height
    );
    let _ = writeln!(
        out,
        r##"<g stroke="#222" stroke-width="{:.2}" stroke-linejoin="round">"##,
        options.stroke_width
    );
    for (t, p) in w.tiles.iter().zip(&pts) {
        let fill = if options.color_by_class {
            let next = classes.len();
            let class = *classes.entry(congruence_key(&t.polygon)).or_insert(next);
            PALETTE[class % PALETTE.len()]
        } else {
            kind_color(&t.label)
        };
        let mut d = String::new();
        for (k, &v) in p.iter().enumerate() {
            let (x, y) = map(v);
            let _ = write!(d, "{}{:.3} {:.3} ", if k == 0 { "M" } else { "L" }, x, y);
        }
        d.push('Z');
        let _ = writeln!(out, r#"<path d="{d}" fill="{fill}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    if options.labels {
        let size = (0.25 * scale).clamp(4.0, 14.0);
        let _ = writeln!(
            out,
            r##"<g font-family="sans-serif" font-size="{size:.1}" text-anchor="middle" fill="#000">"##
        );
        for (t, p) in w.tiles.iter().zip(&pts) {
            let n = p.len() as f64;
            let c = p
                .iter()
                .fold((0.0, 0.0), |a, v| (a.0 + v.0 / n, a.1 + v.1 / n));
            let (x, y) = map(c);
            let _ = writeln!(
                out,
                r#"<text x="{x:.3}" y="{y:.3}">{}</text>"#,
                label_text(&t.label)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::strip::{closed_form_star, StripWindow};
    use crate::tiling::WindowKind;

    fn star() -> TilingWindow {
        let states: Vec<_> = (0..=4).map(closed_form_star).collect();
        let s = StripWindow::from_states(Scalar::inv_sqrt3(), states).unwrap();
        TilingWindow::from_triangles(WindowKind::Strip, &s.triangles, 4)
    }

    #[test]
    fn one_path_per_tile_and_deterministic() {
        let w = star();
        let a = render_svg(
            &w,
            &SvgOptions {
                labels: true,
                ..Default::default()
            },
        );
        let b = render_svg(
            &w,
            &SvgOptions {
                labels: true,
                ..Default::default()
            },
        );
        assert_eq!(a, b);
        assert_eq!(a.matches("<path").count(), w.tiles.len());
        assert_eq!(a.matches("<text").count(), w.tiles.len());
    }

    #[test]
    fn star_uses_six_class_colours() {
        let svg = render_svg(
            &star(),
            &SvgOptions {
                color_by_class: true,
                ..Default::default()
            },
        );
        let fills: std::collections::BTreeSet<&str> = svg
            .match_indices("fill=\"#")
            .map(|(k, _)| &svg[k + 6..k + 13])
            .collect();
        assert_eq!(fills.len(), 6);
    }

    #[test]
    fn y_axis_points_up() {
        let s = StripWindow::generate(&Scalar::ratio(3, 5), 1).unwrap();
        let w = TilingWindow::from_triangles(WindowKind::Strip, &s.triangles[..1], 1);
        // T_0^1 has its apex (0, y0) below the upper boundary: the apex gets the
        // largest SVG y coordinate
        let svg = render_svg(&w, &SvgOptions::default());
        let d = svg.split("d=\"").nth(1).unwrap().split('"').next().unwrap();
        let ys: Vec<f64> = d
            .trim_start_matches('M')
            .split(['L', 'Z'])
            .filter(|s| !s.trim().is_empty())
            .map(|p| p.split_whitespace().nth(1).unwrap().parse().unwrap())
            .collect();
        assert!(ys[1] > ys[0] && ys[1] > ys[2]);
    }

    #[test]
    fn empty_window_renders() {
        let svg = render_svg(
            &TilingWindow::new(WindowKind::Plane, vec![], 0),
            &SvgOptions::default(),
        );
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }
}
