//! Deterministic SVG drawings of trees and pipeline phases.

use std::fmt::Write as _;

use crate::geometry::Point;
use crate::heuristic::{Phase, Trace};
use crate::tree::{Edge, PlaneTree};

const REPLACED: &str = "cyan";
const TRIGGER: &str = "red";
const EDGE: &str = "black";
const STEINER: &str = "#1f4e9c";

#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub phases: Vec<Phase>,
    pub panel_width: f64,
    pub panel_height: f64,
    pub margin: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            phases: vec![Phase::PlaneWmst, Phase::Slide, Phase::Detach, Phase::Final],
            panel_width: 420.0,
            panel_height: 420.0,
            margin: 36.0,
        }
    }
}

impl RenderSpec {
    pub fn single(phase: Phase) -> Self {
        RenderSpec {
            phases: vec![phase],
            ..Default::default()
        }
    }
}

struct Panel<'a> {
    title: &'a str,
    under: Option<&'a PlaneTree>,
    tree: &'a PlaneTree,
    replaced: Vec<(Point, Point)>,
    trigger: Vec<Edge>,
}

/// One panel showing `tree`.
pub fn render_tree(tree: &PlaneTree, spec: &RenderSpec) -> String {
    let title = spec.phases.first().map_or("tree", |p| p.name());
    draw(
        &[Panel {
            title,
            under: None,
            tree,
            replaced: Vec::new(),
            trigger: Vec::new(),
        }],
        spec,
    )
}

/// One panel per requested phase that the trace recorded, left to right.
/// The overlay panel draws the plane WMST in cyan under the final tree.
pub fn render_trace(trace: &Trace, spec: &RenderSpec) -> String {
    let mut panels = Vec::new();
    for &phase in &spec.phases {
        if phase == Phase::Overlay {
            if let (Some(plane), Some(fin)) = (trace.snapshot(Phase::PlaneWmst), trace.snapshot(Phase::Final)) {
                panels.push(Panel {
                    title: phase.name(),
                    under: Some(&plane.tree),
                    tree: &fin.tree,
                    replaced: Vec::new(),
                    trigger: Vec::new(),
                });
            }
            continue;
        }
        if let Some(snap) = trace.snapshot(phase) {
            panels.push(Panel {
                title: phase.name(),
                under: None,
                tree: &snap.tree,
                replaced: snap.replaced.iter().map(|s| (s.a, s.b)).collect(),
                trigger: snap.trigger.clone(),
            });
        }
    }
    draw(&panels, spec)
}

fn draw(panels: &[Panel], spec: &RenderSpec) -> String {
    let (lo, hi) = bounds(panels);
    let span_x = (hi.x - lo.x).max(1e-12);
    let span_y = (hi.y - lo.y).max(1e-12);
    let inner_w = spec.panel_width - 2.0 * spec.margin;
    let inner_h = spec.panel_height - 2.0 * spec.margin;
    let scale = if hi.x > lo.x || hi.y > lo.y {
        (inner_w / span_x).min(inner_h / span_y)
    } else {
        1.0
    };
    // centre the drawing inside each panel
    let pad_x = spec.margin + 0.5 * (inner_w - scale * (hi.x - lo.x));
    let pad_y = spec.margin + 0.5 * (inner_h - scale * (hi.y - lo.y));

    let width = spec.panel_width * panels.len().max(1) as f64;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(width),
        num(spec.panel_height),
        num(width),
        num(spec.panel_height)
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, num(width), num(spec.panel_height));
    for (i, panel) in panels.iter().enumerate() {
        let ox = i as f64 * spec.panel_width;
        let map = |p: Point| {
            Point::new(
                ox + pad_x + (p.x - lo.x) * scale,
                spec.panel_height - pad_y - (p.y - lo.y) * scale,
            )
        };
        let _ = writeln!(out, r#"<g id="panel-{}">"#, panel.title);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14">{}</text>"#,
            num(ox + 8.0),
            num(18.0),
            panel.title
        );
        if let Some(under) = panel.under {
            for e in under.edges() {
                line(&mut out, map(under.pos(e.0)), map(under.pos(e.1)), REPLACED, 3.0);
            }
        }
        for &(a, b) in &panel.replaced {
            line(&mut out, map(a), map(b), REPLACED, 1.5);
        }
        for e in panel.tree.edges() {
            let colour = if panel.trigger.contains(&e) { TRIGGER } else { EDGE };
            line(&mut out, map(panel.tree.pos(e.0)), map(panel.tree.pos(e.1)), colour, 1.5);
        }
        for v in panel.tree.vertices() {
            let p = map(v.pos);
            if v.is_steiner() {
                let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="2.5" fill="{STEINER}"/>"#, num(p.x), num(p.y));
            } else {
                let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="4" fill="black"/>"#, num(p.x), num(p.y));
                let _ = writeln!(
                    out,
                    r#"<text x="{}" y="{}" font-family="sans-serif" font-size="10">{} w={}</text>"#,
                    num(p.x + 5.0),
                    num(p.y - 5.0),
                    v.id,
                    v.weight
                );
            }
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

fn bounds(panels: &[Panel]) -> (Point, Point) {
    let mut pts = Vec::new();
    for p in panels {
        pts.extend(p.tree.vertices().map(|v| v.pos));
        if let Some(u) = p.under {
            pts.extend(u.vertices().map(|v| v.pos));
        }
        for &(a, b) in &p.replaced {
            pts.push(a);
            pts.push(b);
        }
    }
    let Some(&first) = pts.first() else {
        return (Point::default(), Point::default());
    };
    pts.iter().fold((first, first), |(lo, hi), p| {
        (
            Point::new(lo.x.min(p.x), lo.y.min(p.y)),
            Point::new(hi.x.max(p.x), hi.y.max(p.y)),
        )
    })
}

fn line(out: &mut String, a: Point, b: Point, colour: &str, width: f64) {
    let _ = writeln!(
        out,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{colour}" stroke-width="{}"/>"#,
        num(a.x),
        num(a.y),
        num(b.x),
        num(b.y),
        num(width)
    );
}

/// Six decimals, with negative zero printed as zero.
fn num(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::rectangle;
    use crate::geometry::WeightedVertex;
    use crate::heuristic::{solve, SolveConfig};

    #[test]
    fn single_terminal_draws_one_disk() {
        let t = PlaneTree::from_vertices([WeightedVertex::terminal(0, 50.0, 50.0, 1.0)]).unwrap();
        let svg = render_tree(&t, &RenderSpec::single(Phase::Final));
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches("<line").count(), 0);
    }

    #[test]
    fn output_is_byte_identical() {
        let sol = solve(&rectangle(1.5, 7.0), &SolveConfig::default()).unwrap();
        let spec = RenderSpec {
            phases: Phase::ALL.to_vec(),
            ..Default::default()
        };
        let a = render_trace(&sol.trace, &spec);
        let b = render_trace(&solve(&rectangle(1.5, 7.0), &SolveConfig::default()).unwrap().trace, &spec);
        assert_eq!(a, b);
        assert_eq!(a.matches("<g id=\"panel-").count(), 6);
        assert!(a.contains(r#"stroke="cyan""#));
    }

    #[test]
    fn weighted_rectangle_optimum_counts() {
        let best = crate::oracle::oracle_wsmt(&rectangle(2.0, 7.0)).unwrap().best_tree;
        let svg = render_tree(&best, &RenderSpec::single(Phase::Final));
        assert_eq!(svg.matches("<circle").count(), 6);
        assert_eq!(svg.matches(r#"r="2.5""#).count(), 2);
        assert_eq!(svg.matches("<line").count(), 5);
    }

    #[test]
    fn y_axis_points_up() {
        let t = PlaneTree::from_vertices([
            WeightedVertex::terminal(0, 0.0, 0.0, 1.0),
            WeightedVertex::terminal(1, 0.0, 10.0, 1.0),
        ])
        .unwrap();
        let svg = render_tree(&t, &RenderSpec::single(Phase::Final));
        let ys: Vec<f64> = svg
            .lines()
            .filter(|l| l.starts_with("<circle"))
            .map(|l| l.split("cy=\"").nth(1).unwrap().split('"').next().unwrap().parse().unwrap())
            .collect();
        assert!(ys[0] > ys[1]);
    }
}
