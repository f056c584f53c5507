//! Flat JSON documents for solve, wmst and oracle runs.

use serde::Serialize;

use crate::heuristic::{SolveConfig, Solution};
use crate::oracle::OracleResult;
use crate::tree::{Edge, PlaneTree};

#[derive(Debug, Serialize)]
pub struct SolveJson<'a> {
    pub wmst_weighted_length: f64,
    pub wmst_euclidean_length: f64,
    pub plane_wmst_weighted_length: f64,
    pub plane_wmst_euclidean_length: f64,
    pub final_weighted_length: f64,
    pub final_euclidean_length: f64,
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
    pub planarity_violations: usize,
    pub crossing_pairs: &'a [(Edge, Edge)],
    pub max_weighted_gradient_norm: f64,
    pub min_steiner_angle: Option<f64>,
    pub merge_weight_events: usize,
    #[serde(flatten)]
    pub config: &'a SolveConfig,
    pub tree: &'a PlaneTree,
}

impl<'a> SolveJson<'a> {
    pub fn new(sol: &'a Solution, config: &'a SolveConfig) -> Self {
        let r = &sol.report;
        SolveJson {
            wmst_weighted_length: r.wmst_metrics.weighted_length,
            wmst_euclidean_length: r.wmst_metrics.euclidean_length,
            plane_wmst_weighted_length: r.plane_wmst_metrics.weighted_length,
            plane_wmst_euclidean_length: r.plane_wmst_metrics.euclidean_length,
            final_weighted_length: r.final_metrics.weighted_length,
            final_euclidean_length: r.final_metrics.euclidean_length,
            ratio_weighted: r.ratio_weighted,
            ratio_euclidean: r.ratio_euclidean,
            slide_count: r.slide_count,
            detach_count: r.detach_count,
            relax_count: r.relax_count,
            swap_count: r.swap_count,
            merge_count: r.merge_count,
            flick_count: r.flick_count,
            tilt_count: r.tilt_count,
            iterations: r.iterations,
            converged: r.converged,
            steiner_count: r.steiner_count,
            planarity_violations: r.planarity_violations.len(),
            crossing_pairs: &r.planarity_violations,
            max_weighted_gradient_norm: r.max_weighted_gradient_norm,
            min_steiner_angle: r.min_steiner_angle,
            merge_weight_events: r.merge_weight_events,
            config,
            tree: &sol.tree,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct WmstJson<'a> {
    pub plane: bool,
    pub weighted_length: f64,
    pub euclidean_length: f64,
    pub crossing_pairs: Vec<(Edge, Edge)>,
    pub tree: &'a PlaneTree,
}

impl<'a> WmstJson<'a> {
    pub fn new(tree: &'a PlaneTree, plane: bool) -> Self {
        let m = tree.metrics();
        WmstJson {
            plane,
            weighted_length: m.weighted_length,
            euclidean_length: m.euclidean_length,
            crossing_pairs: tree.crossing_pairs(),
            tree,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleJson<'a> {
    pub best_weighted_length: f64,
    pub best_euclidean_length: f64,
    pub topologies_examined: usize,
    pub steiner_count: usize,
    pub converged: bool,
    pub tree: &'a PlaneTree,
}

impl<'a> OracleJson<'a> {
    pub fn new(r: &'a OracleResult) -> Self {
        OracleJson {
            best_weighted_length: r.best_weighted_length,
            best_euclidean_length: r.best_euclidean_length,
            topologies_examined: r.topologies_examined,
            steiner_count: r.best_tree.steiner_count(),
            converged: r.converged,
            tree: &r.best_tree,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::rectangle;
    use crate::heuristic::solve;

    #[test]
    fn solve_json_is_flat_and_consistent() {
        let cfg = SolveConfig::default();
        let sol = solve(&rectangle(2.0, 7.0), &cfg).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&SolveJson::new(&sol, &cfg))).unwrap();
        let f = |k: &str| v[k].as_f64().unwrap();
        assert!((f("ratio_weighted") - f("final_weighted_length") / f("plane_wmst_weighted_length")).abs() < 1e-12);
        assert!((f("ratio_euclidean") - f("final_euclidean_length") / f("plane_wmst_euclidean_length")).abs() < 1e-12);
        assert_eq!(v["angle_tolerance_fraction"].as_f64(), Some(0.022));
        assert_eq!(v["ordering"], "input_order");
        assert!(v["tree"]["vertices"].is_array());
    }
}
