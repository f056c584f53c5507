use crate::geometry::{angle_at, connection_cost, VertexId};
use crate::tree::{Edge, PlaneTree};

use super::trace::{EventKind, Recorder, TraceEvent};
use super::{most_acute_pair, visit_order, Ctx};

/// Replaces A-B-C by the shorter pair through an inherent corner whenever
/// the most acute pair at a terminal B has a corner of at least 120° at A
/// or C, provided the new edge costs less than the dropped one under the
/// vertex weights. Repeats until no terminal qualifies. Returns the number
/// of slides.
pub(crate) fn slide_inherent(tree: &mut PlaneTree, ctx: &Ctx, rec: &mut Recorder) -> usize {
    let mut slides = 0;
    // each slide strictly lowers the weighted length, so this only guards rounding
    let cap = 4 * tree.vertex_count() * tree.vertex_count() + 16;
    'outer: while slides < cap {
        let terminals: Vec<VertexId> = tree.terminals().map(|t| t.id).collect();
        for b in visit_order(tree, ctx.cfg.ordering, terminals) {
            if let Some(ev) = try_slide(tree, b) {
                rec.push(ev);
                slides += 1;
                continue 'outer;
            }
        }
        break;
    }
    slides
}

fn try_slide(tree: &mut PlaneTree, b: VertexId) -> Option<TraceEvent> {
    let (a, c, angle_b) = most_acute_pair(tree, b)?;
    if angle_b >= 120.0 {
        return None;
    }
    let (pa, pb, pc) = (tree.pos(a), tree.pos(b), tree.pos(c));
    let angle_a = angle_at(pa, pb, pc).ok()?;
    let angle_c = angle_at(pc, pa, pb).ok()?;
    if angle_a.max(angle_c) < 120.0 {
        return None;
    }
    let ab = Edge::new(a, b);
    let cb = Edge::new(c, b);
    let drop = if tree.edge_length(ab) >= tree.edge_length(cb) { ab } else { cb };
    if tree.has_edge(a, c) || tree.segment_blocked(a, c, &[drop]) {
        return None;
    }
    if connection_cost(tree.vertex(a), tree.vertex(c)) >= tree.edge_cost(drop) {
        return None;
    }
    let before = tree.metrics().weighted_length;
    let removed_segment = tree.segment(drop);
    tree.remove_edge(drop.0, drop.1);
    tree.add_edge(a, c);
    let mut ev = TraceEvent::new(EventKind::SlideInherent);
    ev.vertices = vec![a, b, c];
    ev.removed_edges = vec![drop];
    ev.added_edges = vec![Edge::new(a, c)];
    ev.removed_segments = vec![removed_segment];
    ev.weighted_before = before;
    ev.weighted_after = tree.metrics().weighted_length;
    Some(ev)
}
