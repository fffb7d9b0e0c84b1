use std::fmt::Write as _;
use std::path::Path;

use crate::error::Result;
use crate::geometry::Vec2;
use crate::plan::PlanFile;
use crate::scenario::{write_text, Scenario};

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 40.0;
const MARKER: f64 = 6.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

struct Frame {
    min: Vec2,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[Vec2]) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        if points.is_empty() {
            min = [0.0, 0.0];
            max = [1.0, 1.0];
        }
        let span = (max[0] - min[0]).max(max[1] - min[1]).max(1.0);
        let scale = (WIDTH - 2.0 * MARGIN) / span;
        Self {
            min,
            scale,
            height: (max[1] - min[1]) * scale + 2.0 * MARGIN,
        }
    }

    /// World to image coordinates; the image y axis points down.
    fn map(&self, p: Vec2) -> (f64, f64) {
        (
            MARGIN + (p[0] - self.min[0]) * self.scale,
            self.height - MARGIN - (p[1] - self.min[1]) * self.scale,
        )
    }
}

fn label(out: &mut String, (x, y): (f64, f64), text: &str) {
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" font-size="11" font-family="sans-serif">{}</text>"#,
        x + MARKER + 2.0,
        y - MARKER - 2.0,
        text
    );
}

fn polylines(plan: &PlanFile) -> Vec<Vec<Vec2>> {
    plan.gliders
        .iter()
        .map(|g| {
            if g.polyline.is_empty() {
                super::sample_polyline(&g.legs, crate::plan::DEFAULT_SAMPLE_SPACING)
            } else {
                g.polyline.clone()
            }
        })
        .collect()
}

/// SVG drawing of the scenario and, when given, the planned paths.
///
/// Starts are circles, finals crosses, thermals diamonds and interest points
/// squares. Output depends only on the inputs.
pub fn render_svg(scenario: &Scenario, plan: Option<&PlanFile>) -> String {
    let paths = plan.map(polylines).unwrap_or_default();
    let mut extent: Vec<Vec2> = scenario.locations().into_iter().map(|(_, p)| p).collect();
    extent.extend(paths.iter().flatten().copied());
    let frame = Frame::fit(&extent);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH:.0}" height="{:.0}" viewBox="0 0 {WIDTH:.0} {:.0}">"#,
        frame.height.ceil(),
        frame.height.ceil()
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);

    for (i, path) in paths.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut points = String::new();
        for (k, p) in path.iter().enumerate() {
            let (x, y) = frame.map(*p);
            if k > 0 {
                points.push(' ');
            }
            let _ = write!(points, "{x:.2},{y:.2}");
        }
        let _ = writeln!(
            out,
            r#"  <polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>"#
        );
    }

    for (i, g) in scenario.gliders.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let (x, y) = frame.map(g.start.position);
        let _ = writeln!(
            out,
            r#"  <circle cx="{x:.2}" cy="{y:.2}" r="{MARKER:.2}" fill="none" stroke="{color}" stroke-width="2"/>"#
        );
        label(&mut out, (x, y), &g.id);
        let (x, y) = frame.map(g.final_position);
        let d = MARKER;
        let _ = writeln!(
            out,
            r#"  <path d="M{:.2},{:.2} L{:.2},{:.2} M{:.2},{:.2} L{:.2},{:.2}" stroke="{color}" stroke-width="2"/>"#,
            x - d,
            y - d,
            x + d,
            y + d,
            x - d,
            y + d,
            x + d,
            y - d
        );
        label(&mut out, (x, y), &Scenario::final_id(g));
    }
    for t in &scenario.thermals {
        let (x, y) = frame.map(t.position);
        let d = MARKER;
        let _ = writeln!(
            out,
            r##"  <polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="#f5c242" stroke="black"/>"##,
            x,
            y - d,
            x + d,
            y,
            x,
            y + d,
            x - d,
            y
        );
        label(&mut out, (x, y), &t.id);
    }
    for w in &scenario.interest_points {
        let (x, y) = frame.map(w.position);
        let _ = writeln!(
            out,
            r#"  <rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="black"/>"#,
            x - MARKER * 0.8,
            y - MARKER * 0.8,
            MARKER * 1.6,
            MARKER * 1.6
        );
        label(&mut out, (x, y), &w.id);
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(path: &Path, scenario: &Scenario, plan: Option<&PlanFile>) -> Result<()> {
    write_text(path, &render_svg(scenario, plan))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::golden_scenario;

    #[test]
    fn scenario_only_has_markers_and_no_paths() {
        let s = golden_scenario();
        let svg = render_svg(&s, None);
        assert!(!svg.contains("<polyline"));
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<polygon").count(), 4);
        assert_eq!(svg.matches("<rect").count(), 5);
        assert_eq!(svg, render_svg(&s, None));
    }

    #[test]
    fn y_axis_points_up_in_the_world() {
        let f = Frame::fit(&[[0.0, 0.0], [100.0, 100.0]]);
        let low = f.map([0.0, 0.0]);
        let high = f.map([0.0, 100.0]);
        assert!(high.1 < low.1);
    }
}
