use std::collections::{BTreeMap, VecDeque};

use crate::geometry::VertexId;
use crate::tree::{Edge, PlaneTree};

use super::trace::{EventKind, Recorder, TraceEvent, VertexMove};
use super::{Ctx, MergePolicy};

/// Contracts edges shorter than the collision distance, then removes
/// Steiner leaves and splices out degree-2 Steiner vertices. A terminal
/// always survives a contraction; two Steiner endpoints fuse into one hub.
pub(crate) fn flick_zero_edges(tree: &mut PlaneTree, ctx: &Ctx, rec: &mut Recorder) -> usize {
    let mut count = 0;
    loop {
        let short = tree
            .edges()
            .filter(|&e| tree.vertex(e.0).is_steiner() || tree.vertex(e.1).is_steiner())
            .map(|e| (tree.edge_length(e), e))
            .filter(|&(len, _)| len < ctx.eps)
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let Some((_, e)) = short else { break };
        let (keep, drop) = survivor(tree, e.0, e.1);
        let ev = merge_into(tree, keep, drop, ctx.cfg.merge_policy);
        rec.push(ev);
        count += 1;
    }
    count + tidy_steiner(tree, rec)
}

/// Which of two colliding vertices survives: a terminal, else the older id.
pub(crate) fn survivor(tree: &PlaneTree, u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    match (tree.vertex(u).is_steiner(), tree.vertex(v).is_steiner()) {
        (true, false) => (v, u),
        (false, true) => (u, v),
        _ if u <= v => (u, v),
        _ => (v, u),
    }
}

/// Folds `drop` into `keep`. If the two were not adjacent the merge closes
/// a cycle, which is broken at its most expensive edge.
pub(crate) fn merge_into(tree: &mut PlaneTree, keep: VertexId, drop: VertexId, policy: MergePolicy) -> TraceEvent {
    let before = tree.metrics().weighted_length;
    let keep_v = *tree.vertex(keep);
    let drop_v = *tree.vertex(drop);
    let kind = if keep_v.is_steiner() {
        EventKind::ZeroEdgeFlick
    } else {
        EventKind::CollisionMerge
    };
    let mut ev = TraceEvent::new(kind);
    ev.vertices = vec![keep, drop];

    for n in tree.neighbors(drop) {
        let e = Edge::new(drop, n);
        ev.removed_segments.push(tree.segment(e));
        ev.removed_edges.push(e);
        tree.remove_edge(drop, n);
        if n != keep && tree.add_edge(keep, n) {
            ev.added_edges.push(Edge::new(keep, n));
        }
    }
    tree.remove_vertex(drop);
    ev.moves.push(VertexMove {
        id: drop,
        before: Some(drop_v.pos),
        after: None,
    });

    if keep_v.is_steiner() {
        tree.set_weight(keep, keep_v.weight.min(drop_v.weight));
    } else {
        ev.merge_weight_change = keep_v.weight != drop_v.weight;
        if policy == MergePolicy::TerminalAdoptsSteinerWeight {
            tree.set_weight(keep, drop_v.weight);
        }
    }

    if let Some(cycle) = cycle_through(tree, keep) {
        let worst = cycle
            .into_iter()
            .max_by(|&a, &b| tree.edge_cost(a).total_cmp(&tree.edge_cost(b)).then(b.cmp(&a)))
            .expect("cycle is non-empty");
        ev.removed_segments.push(tree.segment(worst));
        ev.removed_edges.push(worst);
        ev.added_edges.retain(|&e| e != worst);
        tree.remove_edge(worst.0, worst.1);
    }
    ev.weighted_before = before;
    ev.weighted_after = tree.metrics().weighted_length;
    ev
}

/// Edges of a cycle through `v`, if there is one.
fn cycle_through(tree: &PlaneTree, v: VertexId) -> Option<Vec<Edge>> {
    let adj = tree.adjacency();
    for &start in adj.get(&v)? {
        let mut prev: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut queue = VecDeque::from([start]);
        prev.insert(start, start);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[&x] {
                if x == start && y == v {
                    continue;
                }
                if y == v {
                    let mut edges = vec![Edge::new(v, start), Edge::new(x, v)];
                    let mut cur = x;
                    while cur != start {
                        let p = prev[&cur];
                        edges.push(Edge::new(p, cur));
                        cur = p;
                    }
                    return Some(edges);
                }
                if let std::collections::btree_map::Entry::Vacant(e) = prev.entry(y) {
                    e.insert(x);
                    queue.push_back(y);
                }
            }
        }
    }
    None
}

/// Removes Steiner vertices of degree below 2 and splices out degree-2
/// Steiner vertices whenever the direct segment is crossing-free.
pub(crate) fn tidy_steiner(tree: &mut PlaneTree, rec: &mut Recorder) -> usize {
    let mut count = 0;
    loop {
        let mut changed = false;
        for s in tree.steiner_ids() {
            let nbrs = tree.neighbors(s);
            if nbrs.len() > 2 {
                continue;
            }
            if nbrs.len() == 2 && tree.segment_blocked(nbrs[0], nbrs[1], &[Edge::new(s, nbrs[0]), Edge::new(s, nbrs[1])]) {
                continue;
            }
            let before = tree.metrics().weighted_length;
            let mut ev = TraceEvent::new(EventKind::ZeroEdgeFlick);
            ev.vertices = std::iter::once(s).chain(nbrs.iter().copied()).collect();
            for &n in &nbrs {
                let e = Edge::new(s, n);
                ev.removed_segments.push(tree.segment(e));
                ev.removed_edges.push(e);
            }
            ev.moves.push(VertexMove {
                id: s,
                before: Some(tree.pos(s)),
                after: None,
            });
            tree.remove_vertex(s);
            if nbrs.len() == 2 {
                tree.add_edge(nbrs[0], nbrs[1]);
                ev.added_edges.push(Edge::new(nbrs[0], nbrs[1]));
            }
            ev.weighted_before = before;
            ev.weighted_after = tree.metrics().weighted_length;
            rec.push(ev);
            count += 1;
            changed = true;
        }
        if !changed {
            return count;
        }
    }
}
