use crate::geometry::{fermat_point, VertexId};
use crate::tree::{Edge, PlaneTree};

use super::trace::{EventKind, Recorder, TraceEvent, VertexMove};
use super::{most_acute_pair, visit_order, Ctx};

/// Peels a new Steiner vertex off every vertex whose most acute adjacent
/// pair is below the angle threshold. Degree-3 Steiner vertices are left to
/// relax. Each vertex is visited once per call. Returns the number of
/// Steiner vertices created.
pub(crate) fn detach_steiner(tree: &mut PlaneTree, ctx: &Ctx, rec: &mut Recorder) -> usize {
    let thr = ctx.cfg.angle_threshold();
    let candidates: Vec<VertexId> = tree
        .vertices()
        .filter(|v| if v.is_steiner() { tree.degree(v.id) > 3 } else { tree.degree(v.id) >= 2 })
        .map(|v| v.id)
        .collect();
    let mut created = 0;
    for b in visit_order(tree, ctx.cfg.ordering, candidates) {
        if let Some(ev) = try_detach(tree, b, thr) {
            rec.push(ev);
            created += 1;
        }
    }
    created
}

fn try_detach(tree: &mut PlaneTree, b: VertexId, thr: f64) -> Option<TraceEvent> {
    let (a, c, angle) = most_acute_pair(tree, b)?;
    if angle >= thr {
        return None;
    }
    let (pa, pb, pc) = (tree.pos(a), tree.pos(b), tree.pos(c));
    let f = fermat_point(pa, pb, pc).ok()?;
    if f.inherent {
        return None;
    }
    let s_pos = f.point;
    let ab = Edge::new(a, b);
    let cb = Edge::new(c, b);
    let ignore = [ab, cb];
    // the id is only a placeholder for the blocking test
    let s_id = tree.next_id();
    for v in [a, b, c] {
        if tree.segment_blocked_at(tree.pos(v), s_pos, v, s_id, &ignore) {
            return None;
        }
    }
    let weight = [a, b, c]
        .iter()
        .map(|&v| tree.vertex(v).weight)
        .fold(f64::INFINITY, f64::min);
    let before = tree.metrics().weighted_length;
    let removed_segments = vec![tree.segment(ab), tree.segment(cb)];
    tree.remove_edge(a, b);
    tree.remove_edge(c, b);
    let s = tree.add_steiner(s_pos, weight);
    for v in [a, b, c] {
        tree.add_edge(v, s);
    }
    let mut ev = TraceEvent::new(EventKind::Detach);
    ev.vertices = vec![a, b, c, s];
    ev.removed_edges = vec![ab, cb];
    ev.added_edges = vec![Edge::new(a, s), Edge::new(b, s), Edge::new(c, s)];
    ev.removed_segments = removed_segments;
    ev.moves = vec![VertexMove {
        id: s,
        before: None,
        after: Some(s_pos),
    }];
    ev.weighted_before = before;
    ev.weighted_after = tree.metrics().weighted_length;
    Some(ev)
}
