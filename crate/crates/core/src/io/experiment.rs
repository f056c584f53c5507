//! Randomised planarity experiment on a fixed seven-vertex template.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, WeightedVertex};
use crate::heuristic::{solve, SolveConfig};
use crate::io::instance::parse_instance;
use crate::wmst::weighted_mst;

/// Two mirrored equilateral triangles of different size with near-touching
/// apexes, plus the larger one's centroid.
pub const MIRRORED_TRIANGLES: &str = include_str!("../../data/mirrored_triangles.txt");

pub const TRIAL_WEIGHT_RANGE: (u32, u32) = (1, 77);

pub fn mirrored_triangles_template() -> Vec<Point> {
    parse_instance(MIRRORED_TRIANGLES)
        .expect("bundled template parses")
        .terminals
        .iter()
        .map(|t| t.pos)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub weights: Vec<f64>,
    /// Properly crossing edge pairs in the weighted MST.
    pub wmst_crossings: usize,
    /// Properly crossing edge pairs in the heuristic's final tree.
    pub heuristic_crossings: usize,
    pub heuristic_converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assumption2Stats {
    pub trials: usize,
    pub seed: u64,
    /// Trials whose weighted MST has crossing edges.
    pub wmst_pattern_count: usize,
    /// Trials whose heuristic output has crossing edges.
    pub heuristic_violation_count: usize,
    pub outcomes: Vec<TrialOutcome>,
}

/// Draws integer weights for every template vertex per trial, then checks
/// the weighted MST and the heuristic tree for crossings. Trials run in
/// parallel; the weights are drawn up front, so results depend on the seed only.
pub fn assumption2_experiment(template: &[Point], trials: usize, seed: u64, cfg: &SolveConfig) -> Result<Assumption2Stats> {
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = TRIAL_WEIGHT_RANGE;
    let weight_sets: Vec<Vec<f64>> = (0..trials)
        .map(|_| template.iter().map(|_| rng.gen_range(lo..=hi) as f64).collect())
        .collect();
    let outcomes = weight_sets
        .into_par_iter()
        .map(|weights| {
            let terminals: Vec<WeightedVertex> = template
                .iter()
                .zip(&weights)
                .enumerate()
                .map(|(i, (p, &w))| WeightedVertex::terminal(i as u32, p.x, p.y, w))
                .collect();
            let wmst = weighted_mst(&terminals)?;
            let sol = solve(&terminals, cfg)?;
            Ok(TrialOutcome {
                wmst_crossings: wmst.crossing_pairs().len(),
                heuristic_crossings: sol.report.planarity_violations.len(),
                heuristic_converged: sol.report.converged,
                weights,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Assumption2Stats {
        trials,
        seed,
        wmst_pattern_count: outcomes.iter().filter(|o| o.wmst_crossings > 0).count(),
        heuristic_violation_count: outcomes.iter().filter(|o| o.heuristic_crossings > 0).count(),
        outcomes,
    })
}
