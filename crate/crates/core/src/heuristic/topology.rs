use crate::geometry::{euclid_dist, fermat_point, Point, VertexId};
use crate::tree::{Edge, PlaneTree};

use super::flick::{merge_into, tidy_steiner};
use super::relax::{relax_quiet, relax_objective_value};
use super::trace::{EventKind, Recorder, TraceEvent, VertexMove};
use super::{Ctx, TOPOLOGY_RATIO};

/// Relative slack keeping configurations sitting exactly on the ratio bound
/// from firing.
const RATIO_SLACK: f64 = 1e-6;

/// Repairs the topology around short Steiner–Steiner edges and splits
/// Steiner hubs of degree four or more. A change is only kept when the
/// relaxed objective strictly drops. Also folds Steiner vertices that
/// collided with a terminal into it. Returns whether anything changed.
pub(crate) fn apply_topology_rule(tree: &mut PlaneTree, ctx: &Ctx, rec: &mut Recorder) -> bool {
    let mut changed = merge_collisions(tree, ctx, rec);
    let cap = 4 * tree.vertex_count() + 8;
    for _ in 0..cap {
        let base = relaxed_value(tree, ctx);
        let attempt = split_hub(tree, ctx, base).or_else(|| swap_short_edge(tree, ctx, base));
        let Some((trial, mut ev)) = attempt else { break };
        ev.weighted_before = tree.metrics().weighted_length;
        ev.weighted_after = trial.metrics().weighted_length;
        ev.moves = moved_vertices(tree, &trial);
        *tree = trial;
        rec.push(ev);
        changed = true;
    }
    changed
}

fn relaxed_value(tree: &PlaneTree, ctx: &Ctx) -> f64 {
    let mut t = tree.clone();
    relax_quiet(&mut t, ctx).objective_after
}

fn merge_collisions(tree: &mut PlaneTree, ctx: &Ctx, rec: &mut Recorder) -> bool {
    let mut changed = false;
    loop {
        let hit = tree.steiner_ids().into_iter().find_map(|s| {
            let p = tree.pos(s);
            tree.terminals()
                .find(|t| euclid_dist(t.pos, p) < ctx.eps)
                .map(|t| (t.id, s))
        });
        let Some((t, s)) = hit else { break };
        let ev = merge_into(tree, t, s, ctx.cfg.merge_policy);
        rec.push(ev);
        changed = true;
    }
    if changed {
        tidy_steiner(tree, rec);
    }
    changed
}

/// Tries every way of peeling two neighbours off a Steiner hub onto a new
/// Steiner vertex and keeps the best strict improvement.
fn split_hub(tree: &PlaneTree, ctx: &Ctx, base: f64) -> Option<(PlaneTree, TraceEvent)> {
    let mut best: Option<(f64, PlaneTree, TraceEvent)> = None;
    for h in tree.steiner_ids() {
        let nbrs = tree.neighbors(h);
        if nbrs.len() < 4 {
            continue;
        }
        let hp = tree.pos(h);
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                let mut t = tree.clone();
                let toward = tree.pos(a).midpoint(tree.pos(b));
                let seed = hp + (toward - hp) * 0.05;
                let w = [h, a, b].iter().map(|&v| tree.vertex(v).weight).fold(f64::INFINITY, f64::min);
                t.remove_edge(h, a);
                t.remove_edge(h, b);
                let s = t.add_steiner(seed, w);
                t.add_edge(s, a);
                t.add_edge(s, b);
                t.add_edge(s, h);
                let mut ev = TraceEvent::new(EventKind::TopologySwap);
                ev.vertices = vec![h, a, b, s];
                ev.removed_edges = vec![Edge::new(h, a), Edge::new(h, b)];
                ev.removed_segments = vec![tree.segment(Edge::new(h, a)), tree.segment(Edge::new(h, b))];
                ev.added_edges = vec![Edge::new(s, a), Edge::new(s, b), Edge::new(s, h)];
                consider(tree, t, ev, ctx, base, &mut best);
            }
        }
    }
    best.map(|(_, t, e)| (t, e))
}

/// Applies the ratio rule to each Steiner–Steiner edge and, where it fires,
/// tries the two other pairings of the four outer neighbours.
fn swap_short_edge(tree: &PlaneTree, ctx: &Ctx, base: f64) -> Option<(PlaneTree, TraceEvent)> {
    let mut best: Option<(f64, PlaneTree, TraceEvent)> = None;
    let bound = TOPOLOGY_RATIO * (1.0 - RATIO_SLACK);
    for e in tree.edges() {
        let (s1, s2) = (e.0, e.1);
        if !(tree.vertex(s1).is_steiner() && tree.vertex(s2).is_steiner()) {
            continue;
        }
        if tree.degree(s1) != 3 || tree.degree(s2) != 3 {
            continue;
        }
        let outer1: Vec<VertexId> = tree.neighbors(s1).into_iter().filter(|&v| v != s2).collect();
        let outer2: Vec<VertexId> = tree.neighbors(s2).into_iter().filter(|&v| v != s1).collect();
        let d = tree.edge_length(e);
        let short = outer1
            .iter()
            .map(|&p| (p, s1))
            .chain(outer2.iter().map(|&p| (p, s2)))
            .filter(|&(p, s)| d < bound * euclid_dist(tree.pos(p), tree.pos(s)))
            .count();
        if short < 3 {
            continue;
        }
        let (p1, p2, p3, p4) = (outer1[0], outer1[1], outer2[0], outer2[1]);
        for (x, y) in [([p1, p3], [p2, p4]), ([p1, p4], [p2, p3])] {
            let mut t = tree.clone();
            for &p in &outer1 {
                t.remove_edge(s1, p);
            }
            for &p in &outer2 {
                t.remove_edge(s2, p);
            }
            for &p in &x {
                t.add_edge(s1, p);
            }
            for &p in &y {
                t.add_edge(s2, p);
            }
            let (px, py) = (pair_mid(tree, x), pair_mid(tree, y));
            t.set_pos(s1, seed(tree.pos(x[0]), tree.pos(x[1]), py));
            t.set_pos(s2, seed(tree.pos(y[0]), tree.pos(y[1]), px));
            let mut ev = TraceEvent::new(EventKind::TopologySwap);
            ev.vertices = vec![s1, s2, p1, p2, p3, p4];
            ev.removed_edges = outer1
                .iter()
                .map(|&p| Edge::new(s1, p))
                .chain(outer2.iter().map(|&p| Edge::new(s2, p)))
                .collect();
            ev.removed_segments = ev.removed_edges.iter().map(|&r| tree.segment(r)).collect();
            ev.added_edges = x
                .iter()
                .map(|&p| Edge::new(s1, p))
                .chain(y.iter().map(|&p| Edge::new(s2, p)))
                .collect();
            consider(tree, t, ev, ctx, base, &mut best);
        }
    }
    best.map(|(_, t, e)| (t, e))
}

fn pair_mid(tree: &PlaneTree, pair: [VertexId; 2]) -> Point {
    tree.pos(pair[0]).midpoint(tree.pos(pair[1]))
}

/// Fermat point of the two partners and the far pair's midpoint; falls
/// back to the centroid for degenerate triples.
fn seed(a: Point, b: Point, far: Point) -> Point {
    match fermat_point(a, b, far) {
        Ok(f) => f.point,
        Err(_) => (a + b + far) * (1.0 / 3.0),
    }
}

fn consider(
    current: &PlaneTree,
    mut trial: PlaneTree,
    ev: TraceEvent,
    ctx: &Ctx,
    base: f64,
    best: &mut Option<(f64, PlaneTree, TraceEvent)>,
) {
    relax_quiet(&mut trial, ctx);
    let value = relax_objective_value(&trial, ctx.cfg.relax_objective);
    if !(value < base - 1e-12 * base.abs()) {
        return;
    }
    if trial.crossing_pairs().len() > current.crossing_pairs().len() {
        return;
    }
    if best.as_ref().is_none_or(|b| value < b.0) {
        *best = Some((value, trial, ev));
    }
}

fn moved_vertices(old: &PlaneTree, new: &PlaneTree) -> Vec<VertexMove> {
    let mut ids: Vec<VertexId> = old.vertex_ids();
    ids.extend(new.vertex_ids());
    ids.sort();
    ids.dedup();
    ids.into_iter()
        .filter_map(|id| {
            let before = old.get(id).map(|v| v.pos);
            let after = new.get(id).map(|v| v.pos);
            (before != after).then_some(VertexMove { id, before, after })
        })
        .collect()
}
