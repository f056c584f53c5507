//! C ABI over the `wsteiner` solver.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Every call returns a [`WsStatus`]
//! and, on failure, leaves a message readable through
//! [`ws_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wsteiner::heuristic::{
    solve_with_order, MergePolicy, Ordering, RelaxObjective, SolveConfig, Solution,
};
use wsteiner::io::{parse_instance, to_json, SolveJson};
use wsteiner::oracle::oracle_wsmt;
use wsteiner::{Error, PlaneTree, VertexId, WeightedVertex};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    CapExceeded = 4,
    Infeasible = 5,
    OutOfRange = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsOrdering {
    Input = 0,
    AcutestFirst = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsMergePolicy {
    TerminalKeepsWeight = 0,
    TerminalAdoptsSteinerWeight = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsRelaxObjective {
    Euclidean = 0,
    Weighted = 1,
}

/// Solver settings. Obtain defaults from [`ws_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct WsConfig {
    pub angle_tolerance_fraction: f64,
    pub relax_step_cap: u32,
    pub collision_epsilon: f64,
    pub tilt_degrees: f64,
    pub ordering: WsOrdering,
    pub merge_policy: WsMergePolicy,
    pub relax_objective: WsRelaxObjective,
    /// Zero selects the default cap.
    pub max_iterations: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WsMetrics {
    pub wmst_weighted_length: f64,
    pub wmst_euclidean_length: f64,
    pub plane_wmst_weighted_length: f64,
    pub plane_wmst_euclidean_length: f64,
    pub final_weighted_length: f64,
    pub final_euclidean_length: f64,
    pub ratio_weighted: f64,
    pub ratio_euclidean: f64,
    pub steiner_count: u32,
    pub iterations: u32,
    pub planarity_violations: u32,
    pub converged: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WsVertex {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub weight: f64,
    pub is_steiner: bool,
}

/// Terminal set under construction.
pub struct WsInstance {
    terminals: Vec<WeightedVertex>,
}

/// Heuristic result: final tree plus report.
pub struct WsSolution {
    solution: Solution,
    config: SolveConfig,
    vertices: Vec<WsVertex>,
    edges: Vec<(u32, u32)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: WsStatus, msg: impl Into<String>) -> WsStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> WsStatus {
    let status = match e {
        Error::Parse { .. } | Error::Weight { .. } => WsStatus::Parse,
        Error::CapExceeded { .. } => WsStatus::CapExceeded,
        Error::InfeasiblePlaneTree { .. } => WsStatus::Infeasible,
        _ => WsStatus::InvalidArgument,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning a panic into [`WsStatus::Panic`].
fn guard(f: impl FnOnce() -> WsStatus) -> WsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(WsStatus::Panic, format!("panic: {msg}"))
        }
    }
}

fn tree_rows(tree: &PlaneTree) -> (Vec<WsVertex>, Vec<(u32, u32)>) {
    let vertices = tree
        .vertices()
        .map(|v| WsVertex {
            id: v.id.0,
            x: v.pos.x,
            y: v.pos.y,
            weight: v.weight,
            is_steiner: v.is_steiner(),
        })
        .collect();
    let edges = tree.edges().map(|e| (e.0 .0, e.1 .0)).collect();
    (vertices, edges)
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ws_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ws_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn ws_config_default() -> WsConfig {
    let d = SolveConfig::default();
    WsConfig {
        angle_tolerance_fraction: d.angle_tolerance_fraction,
        relax_step_cap: d.relax_step_cap as u32,
        collision_epsilon: d.collision_epsilon,
        tilt_degrees: d.tilt_degrees,
        ordering: WsOrdering::Input,
        merge_policy: WsMergePolicy::TerminalKeepsWeight,
        relax_objective: WsRelaxObjective::Euclidean,
        max_iterations: 0,
    }
}

impl From<&WsConfig> for SolveConfig {
    fn from(c: &WsConfig) -> Self {
        SolveConfig {
            angle_tolerance_fraction: c.angle_tolerance_fraction,
            relax_step_cap: c.relax_step_cap as usize,
            collision_epsilon: c.collision_epsilon,
            tilt_degrees: c.tilt_degrees,
            ordering: match c.ordering {
                WsOrdering::Input => Ordering::InputOrder,
                WsOrdering::AcutestFirst => Ordering::AcutestFirst,
            },
            merge_policy: match c.merge_policy {
                WsMergePolicy::TerminalKeepsWeight => MergePolicy::TerminalKeepsWeight,
                WsMergePolicy::TerminalAdoptsSteinerWeight => MergePolicy::TerminalAdoptsSteinerWeight,
            },
            relax_objective: match c.relax_objective {
                WsRelaxObjective::Euclidean => RelaxObjective::Euclidean,
                WsRelaxObjective::Weighted => RelaxObjective::Weighted,
            },
            max_iterations: (c.max_iterations > 0).then_some(c.max_iterations as usize),
        }
    }
}

/// Empty terminal set. Never null.
#[no_mangle]
pub extern "C" fn ws_instance_new() -> *mut WsInstance {
    Box::into_raw(Box::new(WsInstance { terminals: Vec::new() }))
}

/// # Safety
/// `inst` is null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ws_instance_free(inst: *mut WsInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Appends a terminal. Its id is its position in the instance.
///
/// # Safety
/// `inst` is a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn ws_instance_push(inst: *mut WsInstance, x: f64, y: f64, weight: f64) -> WsStatus {
    guard(|| {
        let Some(inst) = inst.as_mut() else {
            return fail(WsStatus::NullPointer, "instance is null");
        };
        if !(x.is_finite() && y.is_finite()) {
            return fail(WsStatus::InvalidArgument, "coordinates must be finite");
        }
        if !(weight.is_finite() && weight > 0.0) {
            return fail(WsStatus::InvalidArgument, "weight must be a positive finite number");
        }
        let id = inst.terminals.len() as u32;
        inst.terminals.push(WeightedVertex::terminal(id, x, y, weight));
        WsStatus::Ok
    })
}

/// Parses instance text (`x y w` per line, `#` comments).
///
/// # Safety
/// `text` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ws_instance_parse(text: *const c_char, out: *mut *mut WsInstance) -> WsStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(WsStatus::NullPointer, "text and out must be non-null");
        }
        *out = ptr::null_mut();
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(WsStatus::Parse, "instance text is not UTF-8");
        };
        match parse_instance(s) {
            Ok(i) => {
                *out = Box::into_raw(Box::new(WsInstance { terminals: i.terminals }));
                WsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `inst` is null or a live instance handle.
#[no_mangle]
pub unsafe extern "C" fn ws_instance_len(inst: *const WsInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.terminals.len())
}

/// Runs the heuristic. `config` may be null for defaults. On success `*out`
/// receives a solution handle; a run that hit the iteration cap still
/// succeeds and reports `converged = false` in its metrics.
///
/// # Safety
/// `inst` is a live instance handle, `config` is null or readable, `out`
/// is writable.
#[no_mangle]
pub unsafe extern "C" fn ws_solve(
    inst: *const WsInstance,
    config: *const WsConfig,
    out: *mut *mut WsSolution,
) -> WsStatus {
    guard(|| {
        if out.is_null() {
            return fail(WsStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let Some(inst) = inst.as_ref() else {
            return fail(WsStatus::NullPointer, "instance is null");
        };
        let cfg = config.as_ref().map_or_else(SolveConfig::default, SolveConfig::from);
        let order: Vec<VertexId> = inst.terminals.iter().map(|t| t.id).collect();
        match solve_with_order(&inst.terminals, &order, &cfg) {
            Ok(solution) => {
                let (vertices, edges) = tree_rows(&solution.tree);
                *out = Box::into_raw(Box::new(WsSolution {
                    solution,
                    config: cfg,
                    vertices,
                    edges,
                }));
                WsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `sol` is null or a solution handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ws_solution_free(sol: *mut WsSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// # Safety
/// `sol` is a live solution handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ws_solution_metrics(sol: *const WsSolution, out: *mut WsMetrics) -> WsStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(WsStatus::NullPointer, "solution and out must be non-null");
        };
        let r = &sol.solution.report;
        *out = WsMetrics {
            wmst_weighted_length: r.wmst_metrics.weighted_length,
            wmst_euclidean_length: r.wmst_metrics.euclidean_length,
            plane_wmst_weighted_length: r.plane_wmst_metrics.weighted_length,
            plane_wmst_euclidean_length: r.plane_wmst_metrics.euclidean_length,
            final_weighted_length: r.final_metrics.weighted_length,
            final_euclidean_length: r.final_metrics.euclidean_length,
            ratio_weighted: r.ratio_weighted,
            ratio_euclidean: r.ratio_euclidean,
            steiner_count: r.steiner_count as u32,
            iterations: r.iterations as u32,
            planarity_violations: r.planarity_violations.len() as u32,
            converged: r.converged,
        };
        WsStatus::Ok
    })
}

/// # Safety
/// `sol` is null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn ws_solution_vertex_count(sol: *const WsSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.vertices.len())
}

/// # Safety
/// `sol` is null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn ws_solution_edge_count(sol: *const WsSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.edges.len())
}

/// Vertex `index` in id order.
///
/// # Safety
/// `sol` is a live solution handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ws_solution_vertex(sol: *const WsSolution, index: usize, out: *mut WsVertex) -> WsStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(WsStatus::NullPointer, "solution and out must be non-null");
        };
        match sol.vertices.get(index) {
            Some(v) => {
                *out = *v;
                WsStatus::Ok
            }
            None => fail(WsStatus::OutOfRange, format!("vertex index {index} out of range")),
        }
    })
}

/// Edge `index` as a pair of vertex ids.
///
/// # Safety
/// `sol` is a live solution handle; `u` and `v` are writable.
#[no_mangle]
pub unsafe extern "C" fn ws_solution_edge(sol: *const WsSolution, index: usize, u: *mut u32, v: *mut u32) -> WsStatus {
    guard(|| {
        let (Some(sol), false, false) = (sol.as_ref(), u.is_null(), v.is_null()) else {
            return fail(WsStatus::NullPointer, "solution, u and v must be non-null");
        };
        match sol.edges.get(index) {
            Some(&(a, b)) => {
                *u = a;
                *v = b;
                WsStatus::Ok
            }
            None => fail(WsStatus::OutOfRange, format!("edge index {index} out of range")),
        }
    })
}

/// Full JSON report as a new string; release it with [`ws_string_free`].
///
/// # Safety
/// `sol` is a live solution handle and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ws_solution_json(sol: *const WsSolution, out: *mut *mut c_char) -> WsStatus {
    guard(|| {
        let (Some(sol), false) = (sol.as_ref(), out.is_null()) else {
            return fail(WsStatus::NullPointer, "solution and out must be non-null");
        };
        let json = to_json(&SolveJson::new(&sol.solution, &sol.config));
        *out = CString::new(json).expect("JSON has no NUL bytes").into_raw();
        WsStatus::Ok
    })
}

/// # Safety
/// `s` is null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ws_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact weighted and Euclidean length of the weighted Steiner minimal tree
/// for at most seven terminals.
///
/// # Safety
/// `inst` is a live instance handle; the outputs are writable.
#[no_mangle]
pub unsafe extern "C" fn ws_oracle(
    inst: *const WsInstance,
    weighted_length: *mut f64,
    euclidean_length: *mut f64,
) -> WsStatus {
    guard(|| {
        let (Some(inst), false, false) = (inst.as_ref(), weighted_length.is_null(), euclidean_length.is_null()) else {
            return fail(WsStatus::NullPointer, "instance and outputs must be non-null");
        };
        match oracle_wsmt(&inst.terminals) {
            Ok(r) => {
                *weighted_length = r.best_weighted_length;
                *euclidean_length = r.best_euclidean_length;
                WsStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}
