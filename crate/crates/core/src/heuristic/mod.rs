//! The soap-film pipeline: slide, detach, relax, flick and topology repair,
//! repeated from the plane weighted MST until every Steiner junction is
//! balanced.

mod detach;
mod flick;
mod relax;
mod slide;
mod topology;
pub mod trace;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angle_at, VertexId, WeightedVertex};
use crate::tree::{Edge, PlaneTree, TreeMetrics};
use crate::wmst::{plane_weighted_mst, weighted_mst};

pub use relax::{relax_objective_value, RelaxOutcome};
pub use trace::{EventKind, Phase, PhaseSnapshot, Trace, TraceEvent, VertexMove};

use trace::Recorder;

/// The Steiner–Steiner to outer-segment ratio at which a full topology
/// stops being worth keeping.
pub const TOPOLOGY_RATIO: f64 = 0.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// Vertices are visited in the order they were entered.
    #[default]
    InputOrder,
    /// The vertex with the most acute adjacent angle goes first.
    AcutestFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MergePolicy {
    #[default]
    TerminalKeepsWeight,
    TerminalAdoptsSteinerWeight,
}

/// What relax minimises over Steiner positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelaxObjective {
    /// Uniform film tension: plain Euclidean length. Junctions settle at 120°.
    #[default]
    Euclidean,
    /// Connection-cost weighted length.
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Allowed deficit below 120°, as a fraction of 120°.
    pub angle_tolerance_fraction: f64,
    /// Round cap for one relax call.
    pub relax_step_cap: usize,
    /// Fraction of the terminals' bounding-box diagonal below which
    /// two vertices count as collided.
    pub collision_epsilon: f64,
    pub tilt_degrees: f64,
    pub ordering: Ordering,
    pub merge_policy: MergePolicy,
    pub relax_objective: RelaxObjective,
    /// Outer iteration cap; `None` means 50 per terminal.
    pub max_iterations: Option<usize>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            angle_tolerance_fraction: 0.022,
            relax_step_cap: 20_000,
            collision_epsilon: 1e-6,
            tilt_degrees: 1.3,
            ordering: Ordering::InputOrder,
            merge_policy: MergePolicy::TerminalKeepsWeight,
            relax_objective: RelaxObjective::Euclidean,
            max_iterations: None,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.angle_tolerance_fraction) {
            return Err(Error::InvalidConfig(format!(
                "angle tolerance {} outside [0, 1)",
                self.angle_tolerance_fraction
            )));
        }
        if !(self.collision_epsilon > 0.0 && self.collision_epsilon.is_finite()) {
            return Err(Error::InvalidConfig("collision epsilon must be positive".into()));
        }
        if !self.tilt_degrees.is_finite() {
            return Err(Error::InvalidConfig("tilt must be finite".into()));
        }
        if self.relax_step_cap == 0 {
            return Err(Error::InvalidConfig("relax step cap must be positive".into()));
        }
        Ok(())
    }

    /// Smallest acceptable angle at a Steiner vertex, in degrees.
    pub fn angle_threshold(&self) -> f64 {
        120.0 * (1.0 - self.angle_tolerance_fraction)
    }

    pub fn topology_ratio(&self) -> f64 {
        TOPOLOGY_RATIO
    }
}

/// Per-solve constants derived from the config and the terminal set.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ctx {
    pub cfg: SolveConfig,
    /// Absolute collision distance.
    pub eps: f64,
}

impl Ctx {
    pub fn new(cfg: &SolveConfig, tree: &PlaneTree) -> Self {
        let diag = tree.bbox_diagonal();
        Ctx {
            cfg: *cfg,
            eps: cfg.collision_epsilon * if diag > 0.0 { diag } else { 1.0 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub wmst_metrics: TreeMetrics,
    pub plane_wmst_metrics: TreeMetrics,
    pub final_metrics: TreeMetrics,
    pub ratio_weighted: f64,
    pub ratio_euclidean: f64,
    pub slide_count: usize,
    pub detach_count: usize,
    pub relax_count: usize,
    pub swap_count: usize,
    pub merge_count: usize,
    pub flick_count: usize,
    pub tilt_count: usize,
    pub iterations: usize,
    pub converged: bool,
    pub steiner_count: usize,
    /// Properly crossing edge pairs in the final tree. Reported, never repaired.
    pub planarity_violations: Vec<(Edge, Edge)>,
    pub max_weighted_gradient_norm: f64,
    pub min_steiner_angle: Option<f64>,
    /// Merges in which a terminal and the absorbed Steiner vertex had
    /// different weights.
    pub merge_weight_events: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub tree: PlaneTree,
    pub report: SolveReport,
    pub trace: Trace,
}

/// Runs the pipeline with terminals visited in input order.
pub fn solve(terminals: &[WeightedVertex], cfg: &SolveConfig) -> Result<Solution> {
    let order: Vec<VertexId> = terminals.iter().map(|t| t.id).collect();
    solve_with_order(terminals, &order, cfg)
}

pub fn solve_with_order(
    terminals: &[WeightedVertex],
    insertion_order: &[VertexId],
    cfg: &SolveConfig,
) -> Result<Solution> {
    cfg.validate()?;
    let wmst = weighted_mst(terminals)?;
    let plane = plane_weighted_mst(terminals, insertion_order)?;
    run(wmst, plane.clone(), plane, cfg)
}

/// Runs the loop from a caller-supplied starting tree instead of the plane
/// weighted MST. The report still measures against the plane weighted MST.
pub fn solve_from(initial: PlaneTree, cfg: &SolveConfig) -> Result<Solution> {
    cfg.validate()?;
    initial.validate()?;
    let terminals: Vec<WeightedVertex> = initial.terminals().cloned().collect();
    let order: Vec<VertexId> = terminals.iter().map(|t| t.id).collect();
    let wmst = weighted_mst(&terminals)?;
    let plane = plane_weighted_mst(&terminals, &order)?;
    run(wmst, plane, initial, cfg)
}

fn run(wmst: PlaneTree, plane: PlaneTree, mut tree: PlaneTree, cfg: &SolveConfig) -> Result<Solution> {
    let ctx = Ctx::new(cfg, &tree);
    let n = tree.terminals().count();
    let cap = cfg.max_iterations.unwrap_or(50 * n.max(1));
    let mut rec = Recorder::default();
    rec.trace.snapshots.push(PhaseSnapshot {
        phase: Phase::Wmst,
        tree: wmst.clone(),
        replaced: Vec::new(),
        trigger: Vec::new(),
    });
    rec.trace.snapshots.push(PhaseSnapshot {
        phase: Phase::PlaneWmst,
        tree: plane.clone(),
        replaced: Vec::new(),
        trigger: Vec::new(),
    });

    let mut iterations = 0;
    let mut converged = n <= 2 && tree.steiner_count() == 0;
    if !converged {
        for iteration in 1..=cap {
            iterations = iteration;
            rec.iteration = iteration;
            let start = rec.len();

            slide::slide_inherent(&mut tree, &ctx, &mut rec);
            if iteration == 1 {
                snapshot_phase(&mut rec, Phase::Slide, &tree, start);
            }
            let detach_start = rec.len();
            detach::detach_steiner(&mut tree, &ctx, &mut rec);
            let relaxed = relax::relax(&mut tree, &ctx, &mut rec);
            if iteration == 1 {
                snapshot_phase(&mut rec, Phase::Detach, &tree, detach_start);
            }
            flick::flick_zero_edges(&mut tree, &ctx, &mut rec);
            topology::apply_topology_rule(&mut tree, &ctx, &mut rec);

            let structural = rec.structural_since(start);
            let balanced = steiner_postconditions_hold(&tree, cfg);
            if !structural && balanced && relaxed.converged {
                converged = true;
                break;
            }
            if !structural && !balanced && !tilt_stagnating(&mut tree, &ctx, &mut rec) {
                // nothing left to try
                break;
            }
        }
    }

    rec.trace.snapshots.push(PhaseSnapshot {
        phase: Phase::Final,
        tree: tree.clone(),
        replaced: Vec::new(),
        trigger: steiner_steiner_edges(&tree),
    });
    let report = build_report(&wmst, &plane, &tree, &rec.trace, iterations, converged);
    Ok(Solution {
        tree,
        report,
        trace: rec.trace,
    })
}

/// Single pipeline steps, for callers that drive the loop themselves.
/// The collision distance is taken relative to `tree`'s bounding box.
pub fn slide_inherent(tree: &mut PlaneTree, cfg: &SolveConfig) -> Vec<TraceEvent> {
    let mut rec = Recorder::default();
    slide::slide_inherent(tree, &Ctx::new(cfg, tree), &mut rec);
    rec.trace.events
}

pub fn detach_steiner(tree: &mut PlaneTree, cfg: &SolveConfig) -> Vec<TraceEvent> {
    let mut rec = Recorder::default();
    detach::detach_steiner(tree, &Ctx::new(cfg, tree), &mut rec);
    rec.trace.events
}

pub fn relax(tree: &mut PlaneTree, cfg: &SolveConfig) -> (RelaxOutcome, Vec<TraceEvent>) {
    let mut rec = Recorder::default();
    let out = relax::relax(tree, &Ctx::new(cfg, tree), &mut rec);
    (out, rec.trace.events)
}

pub fn flick_zero_edges(tree: &mut PlaneTree, cfg: &SolveConfig) -> Vec<TraceEvent> {
    let mut rec = Recorder::default();
    flick::flick_zero_edges(tree, &Ctx::new(cfg, tree), &mut rec);
    rec.trace.events
}

pub fn apply_topology_rule(tree: &mut PlaneTree, cfg: &SolveConfig) -> (Vec<TraceEvent>, bool) {
    let mut rec = Recorder::default();
    let changed = topology::apply_topology_rule(tree, &Ctx::new(cfg, tree), &mut rec);
    (rec.trace.events, changed)
}

fn snapshot_phase(rec: &mut Recorder, phase: Phase, tree: &PlaneTree, start: usize) {
    let mut replaced = Vec::new();
    let mut trigger = Vec::new();
    for ev in rec.events_since(start) {
        replaced.extend(ev.removed_segments.iter().copied());
        if phase == Phase::Slide {
            trigger.extend(ev.added_edges.iter().copied());
        }
    }
    if phase == Phase::Detach {
        trigger = steiner_steiner_edges(tree);
    }
    rec.trace.snapshots.push(PhaseSnapshot {
        phase,
        tree: tree.clone(),
        replaced,
        trigger,
    });
}

fn steiner_steiner_edges(tree: &PlaneTree) -> Vec<Edge> {
    tree.edges()
        .filter(|e| tree.vertex(e.0).is_steiner() && tree.vertex(e.1).is_steiner())
        .collect()
}

/// Smallest angle between two edges at `v`, with the two neighbours
/// realising it. Coincident neighbours count as a zero angle.
pub(crate) fn most_acute_pair(tree: &PlaneTree, v: VertexId) -> Option<(VertexId, VertexId, f64)> {
    let nbrs = tree.neighbors(v);
    let apex = tree.pos(v);
    let mut best: Option<(VertexId, VertexId, f64)> = None;
    for (i, &a) in nbrs.iter().enumerate() {
        for &c in &nbrs[i + 1..] {
            let ang = angle_at(apex, tree.pos(a), tree.pos(c)).unwrap_or(0.0);
            if best.is_none_or(|(_, _, b)| ang < b) {
                best = Some((a, c, ang));
            }
        }
    }
    best
}

/// Minimum adjacent-edge angle at each Steiner vertex.
pub fn steiner_min_angles(tree: &PlaneTree) -> Vec<(VertexId, f64)> {
    tree.steiner_ids()
        .into_iter()
        .map(|s| (s, most_acute_pair(tree, s).map_or(0.0, |(_, _, a)| a)))
        .collect()
}

/// Every Steiner vertex has degree 3 and no adjacent pair below the
/// tolerance threshold.
pub fn steiner_postconditions_hold(tree: &PlaneTree, cfg: &SolveConfig) -> bool {
    let thr = cfg.angle_threshold();
    steiner_min_angles(tree)
        .into_iter()
        .all(|(s, a)| tree.degree(s) == 3 && a >= thr)
}

/// Visiting order for vertex scans.
pub(crate) fn visit_order(tree: &PlaneTree, ordering: Ordering, candidates: Vec<VertexId>) -> Vec<VertexId> {
    match ordering {
        Ordering::InputOrder => candidates,
        Ordering::AcutestFirst => {
            let mut keyed: Vec<(f64, VertexId)> = candidates
                .into_iter()
                .map(|v| (most_acute_pair(tree, v).map_or(f64::INFINITY, |p| p.2), v))
                .collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            keyed.into_iter().map(|(_, v)| v).collect()
        }
    }
}

/// Rotates each Steiner–Steiner edge touching an unbalanced Steiner vertex
/// clockwise about its midpoint, once per edge. Returns whether anything moved.
fn tilt_stagnating(tree: &mut PlaneTree, ctx: &Ctx, rec: &mut Recorder) -> bool {
    if ctx.cfg.tilt_degrees == 0.0 {
        return false;
    }
    let thr = ctx.cfg.angle_threshold();
    let bad: Vec<VertexId> = steiner_min_angles(tree)
        .into_iter()
        .filter(|&(_, a)| a < thr)
        .map(|(s, _)| s)
        .collect();
    let mut moved = false;
    for e in steiner_steiner_edges(tree) {
        if !(bad.contains(&e.0) || bad.contains(&e.1)) {
            continue;
        }
        let (p, q) = (tree.pos(e.0), tree.pos(e.1));
        let mid = p.midpoint(q);
        let (np, nq) = (p.rotated_about(mid, -ctx.cfg.tilt_degrees), q.rotated_about(mid, -ctx.cfg.tilt_degrees));
        let before = tree.metrics().weighted_length;
        tree.set_pos(e.0, np);
        tree.set_pos(e.1, nq);
        let mut ev = TraceEvent::new(EventKind::Tilt);
        ev.vertices = vec![e.0, e.1];
        ev.moves = vec![
            VertexMove { id: e.0, before: Some(p), after: Some(np) },
            VertexMove { id: e.1, before: Some(q), after: Some(nq) },
        ];
        ev.weighted_before = before;
        ev.weighted_after = tree.metrics().weighted_length;
        rec.push(ev);
        moved = true;
    }
    moved
}

fn build_report(
    wmst: &PlaneTree,
    plane: &PlaneTree,
    tree: &PlaneTree,
    trace: &Trace,
    iterations: usize,
    converged: bool,
) -> SolveReport {
    let plane_m = plane.metrics();
    let final_m = tree.metrics();
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else { 1.0 };
    let angles = steiner_min_angles(tree);
    let (_, net) = relax::network(tree, RelaxObjective::Weighted);
    SolveReport {
        wmst_metrics: wmst.metrics(),
        plane_wmst_metrics: plane_m,
        final_metrics: final_m,
        ratio_weighted: ratio(final_m.weighted_length, plane_m.weighted_length),
        ratio_euclidean: ratio(final_m.euclidean_length, plane_m.euclidean_length),
        slide_count: trace.count(EventKind::SlideInherent),
        detach_count: trace.count(EventKind::Detach),
        relax_count: trace.count(EventKind::RelaxSnapshot),
        swap_count: trace.count(EventKind::TopologySwap),
        merge_count: trace.count(EventKind::CollisionMerge),
        flick_count: trace.count(EventKind::ZeroEdgeFlick),
        tilt_count: trace.count(EventKind::Tilt),
        iterations,
        converged,
        steiner_count: tree.steiner_count(),
        planarity_violations: tree.crossing_pairs(),
        max_weighted_gradient_norm: net.max_gradient_norm(),
        min_steiner_angle: angles.iter().map(|a| a.1).reduce(f64::min),
        merge_weight_events: trace.events.iter().filter(|e| e.merge_weight_change).count(),
    }
}

/// Length of the three-edge star obtained by pulling a junction a distance
/// `t` off the apex of an isosceles pair of unit edges with half-angle
/// `alpha_deg`: `t + 2 * sqrt(1 + t^2 - 2 t cos(alpha))`.
pub fn detachment_length_profile(t: f64, alpha_deg: f64) -> f64 {
    let c = alpha_deg.to_radians().cos();
    t + 2.0 * (1.0 + t * t - 2.0 * t * c).sqrt()
}

#[cfg(test)]
mod tests;
