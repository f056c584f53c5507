use serde::{Deserialize, Serialize};

use crate::geometry::{Point, Segment, VertexId};
use crate::tree::{Edge, PlaneTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    SlideInherent,
    Detach,
    RelaxSnapshot,
    TopologySwap,
    CollisionMerge,
    ZeroEdgeFlick,
    /// Symmetry-breaking rotation of a stagnating Steiner–Steiner edge.
    Tilt,
}

impl EventKind {
    pub const ALL: [EventKind; 7] = [
        EventKind::SlideInherent,
        EventKind::Detach,
        EventKind::RelaxSnapshot,
        EventKind::TopologySwap,
        EventKind::CollisionMerge,
        EventKind::ZeroEdgeFlick,
        EventKind::Tilt,
    ];

    /// Everything except relax snapshots changes the tree's structure or
    /// perturbs it deliberately.
    pub fn is_structural(self) -> bool {
        self != EventKind::RelaxSnapshot
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexMove {
    pub id: VertexId,
    pub before: Option<Point>,
    pub after: Option<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub step_index: usize,
    /// Outer iteration of the solve loop (0 before the loop starts).
    pub iteration: usize,
    pub kind: EventKind,
    pub vertices: Vec<VertexId>,
    pub removed_edges: Vec<Edge>,
    pub added_edges: Vec<Edge>,
    /// Geometry of the removed edges at the time they were removed.
    pub removed_segments: Vec<Segment>,
    pub moves: Vec<VertexMove>,
    /// Relax objective before and after, for relax snapshots.
    pub objective_before: Option<f64>,
    pub objective_after: Option<f64>,
    pub sweeps: Option<usize>,
    pub weighted_before: f64,
    pub weighted_after: f64,
    /// A terminal absorbed a Steiner vertex of a different weight, so
    /// connection costs changed without any geometric move.
    pub merge_weight_change: bool,
}

impl TraceEvent {
    pub fn new(kind: EventKind) -> Self {
        TraceEvent {
            step_index: 0,
            iteration: 0,
            kind,
            vertices: Vec::new(),
            removed_edges: Vec::new(),
            added_edges: Vec::new(),
            removed_segments: Vec::new(),
            moves: Vec::new(),
            objective_before: None,
            objective_after: None,
            sweeps: None,
            weighted_before: 0.0,
            weighted_after: 0.0,
            merge_weight_change: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Wmst,
    PlaneWmst,
    Slide,
    Detach,
    Final,
    Overlay,
}

impl Phase {
    pub const ALL: [Phase; 6] = [
        Phase::Wmst,
        Phase::PlaneWmst,
        Phase::Slide,
        Phase::Detach,
        Phase::Final,
        Phase::Overlay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Wmst => "wmst",
            Phase::PlaneWmst => "plane_wmst",
            Phase::Slide => "slide",
            Phase::Detach => "detach",
            Phase::Final => "final",
            Phase::Overlay => "overlay",
        }
    }
}

/// The tree as it stood after a pipeline phase, plus what to highlight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSnapshot {
    pub phase: Phase,
    pub tree: PlaneTree,
    /// Edges removed during the phase (drawn cyan).
    pub replaced: Vec<Segment>,
    /// Edges that triggered or resulted from the phase (drawn red).
    pub trigger: Vec<Edge>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
    pub snapshots: Vec<PhaseSnapshot>,
}

impl Trace {
    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    pub fn snapshot(&self, phase: Phase) -> Option<&PhaseSnapshot> {
        self.snapshots.iter().find(|s| s.phase == phase)
    }
}

#[derive(Debug, Default)]
pub(crate) struct Recorder {
    pub trace: Trace,
    pub iteration: usize,
}

impl Recorder {
    pub fn push(&mut self, mut ev: TraceEvent) {
        ev.step_index = self.trace.events.len();
        ev.iteration = self.iteration;
        self.trace.events.push(ev);
    }

    pub fn len(&self) -> usize {
        self.trace.events.len()
    }

    pub fn structural_since(&self, start: usize) -> bool {
        self.trace.events[start..].iter().any(|e| e.kind.is_structural())
    }

    pub fn events_since(&self, start: usize) -> &[TraceEvent] {
        &self.trace.events[start..]
    }
}
