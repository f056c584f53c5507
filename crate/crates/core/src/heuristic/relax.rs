use crate::descent::{DescentOptions, Network};
use crate::geometry::{edge_factor, VertexId};
use crate::tree::PlaneTree;

use super::trace::{EventKind, Recorder, TraceEvent, VertexMove};
use super::{Ctx, RelaxObjective};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxOutcome {
    pub objective_before: f64,
    pub objective_after: f64,
    pub sweeps: usize,
    pub converged: bool,
}

/// Index view of a tree: Steiner vertices free, terminals fixed.
pub(crate) fn network(tree: &PlaneTree, objective: RelaxObjective) -> (Vec<VertexId>, Network) {
    let ids = tree.vertex_ids();
    let index = |id: VertexId| ids.binary_search(&id).expect("edge endpoint in tree");
    let positions = ids.iter().map(|&id| tree.pos(id)).collect();
    let free = ids.iter().map(|&id| tree.vertex(id).is_steiner()).collect();
    let edges = tree
        .edges()
        .map(|e| {
            let f = match objective {
                RelaxObjective::Euclidean => 1.0,
                RelaxObjective::Weighted => edge_factor(tree.vertex(e.0).weight, tree.vertex(e.1).weight),
            };
            (index(e.0), index(e.1), f)
        })
        .collect();
    (ids, Network { positions, free, edges })
}

pub fn relax_objective_value(tree: &PlaneTree, objective: RelaxObjective) -> f64 {
    match objective {
        RelaxObjective::Euclidean => tree.metrics().euclidean_length,
        RelaxObjective::Weighted => tree.metrics().weighted_length,
    }
}

/// Minimises the configured objective over Steiner positions without
/// recording anything.
pub(crate) fn relax_quiet(tree: &mut PlaneTree, ctx: &Ctx) -> RelaxOutcome {
    let (ids, mut net) = network(tree, ctx.cfg.relax_objective);
    let out = net.minimize(DescentOptions {
        max_rounds: ctx.cfg.relax_step_cap,
        relative_tolerance: 1e-10,
        ..Default::default()
    });
    for (i, &id) in ids.iter().enumerate() {
        if net.free[i] {
            tree.set_pos(id, net.positions[i]);
        }
    }
    RelaxOutcome {
        objective_before: out.initial_objective,
        objective_after: out.objective,
        sweeps: out.rounds,
        converged: out.converged,
    }
}

/// Moves Steiner vertices to a local minimum of the relax objective with
/// the topology and terminals fixed. Emits one snapshot event.
pub fn relax(tree: &mut PlaneTree, ctx: &Ctx, rec: &mut Recorder) -> RelaxOutcome {
    let before_pos: Vec<(VertexId, _)> = tree.steiner_ids().into_iter().map(|s| (s, tree.pos(s))).collect();
    let weighted_before = tree.metrics().weighted_length;
    let out = relax_quiet(tree, ctx);
    let mut ev = TraceEvent::new(EventKind::RelaxSnapshot);
    ev.moves = before_pos
        .into_iter()
        .filter(|&(s, p)| tree.pos(s) != p)
        .map(|(s, p)| VertexMove {
            id: s,
            before: Some(p),
            after: Some(tree.pos(s)),
        })
        .collect();
    ev.vertices = ev.moves.iter().map(|m| m.id).collect();
    ev.objective_before = Some(out.objective_before);
    ev.objective_after = Some(out.objective_after);
    ev.sweeps = Some(out.sweeps);
    ev.weighted_before = weighted_before;
    ev.weighted_after = tree.metrics().weighted_length;
    rec.push(ev);
    out
}
