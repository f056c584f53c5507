//! Exhaustive ground truth for up to seven terminals: every labelled
//! spanning tree plus every full Steiner topology, each optimised.
//! Topologies with fewer Steiner points are reached by Steiner points
//! collapsing onto terminals or onto each other.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::descent::{DescentOptions, Network};
use crate::error::{Error, Result};
use crate::geometry::{edge_factor, euclid_dist, Point, VertexId, WeightedVertex};
use crate::tree::PlaneTree;

/// Largest terminal count the exhaustive search accepts.
pub const ORACLE_CAP: usize = 7;

const STARTS: usize = 3;
const JITTER_SEED: u64 = 0x5eed_0f_0a_c1e;

/// A tree over slots `0..terminal_count` (terminals, in input order) and
/// `terminal_count..terminal_count + steiner_count` (Steiner points).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topology {
    pub terminal_count: usize,
    pub steiner_count: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub best_tree: PlaneTree,
    pub best_weighted_length: f64,
    pub best_euclidean_length: f64,
    pub topologies_examined: usize,
    pub best_topology: Topology,
    /// False if any start of the winning topology hit the round cap.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedTopology {
    pub tree: PlaneTree,
    pub weighted_length: f64,
    pub converged: bool,
}

pub fn enumerate_topologies(n: usize) -> Result<Vec<Topology>> {
    if n == 0 {
        return Err(Error::EmptyInstance);
    }
    if n > ORACLE_CAP {
        return Err(Error::CapExceeded { cap: ORACLE_CAP, got: n });
    }
    let mut out = spanning_trees(n);
    if n >= 3 {
        out.extend(full_topologies(n));
    }
    Ok(out)
}

/// All `n^(n-2)` labelled trees on `n` terminals, decoded from Prüfer codes.
fn spanning_trees(n: usize) -> Vec<Topology> {
    let plain = |edges| Topology {
        terminal_count: n,
        steiner_count: 0,
        edges,
    };
    match n {
        1 => return vec![plain(Vec::new())],
        2 => return vec![plain(vec![(0, 1)])],
        _ => {}
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    let mut out = Vec::with_capacity(total);
    let mut code = vec![0usize; len];
    for _ in 0..total {
        out.push(plain(prufer_decode(&code, n)));
        for digit in code.iter_mut().rev() {
            *digit += 1;
            if *digit < n {
                break;
            }
            *digit = 0;
        }
    }
    out
}

fn prufer_decode(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf.min(c), leaf.max(c)));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// The `(2n-5)!!` full topologies: terminals are leaves, the `n-2` Steiner
/// points have degree 3. Built by inserting each new terminal on every edge.
fn full_topologies(n: usize) -> Vec<Topology> {
    let star = vec![(0, n), (1, n), (2, n)];
    let mut layer = vec![star];
    for t in 3..n {
        let s = n + t - 2;
        let mut next = Vec::new();
        for edges in &layer {
            for (i, &(u, v)) in edges.iter().enumerate() {
                let mut e = edges.clone();
                e[i] = (u, s);
                e.push((v, s));
                e.push((t, s));
                next.push(e);
            }
        }
        layer = next;
    }
    layer
        .into_iter()
        .map(|edges| Topology {
            terminal_count: n,
            steiner_count: n - 2,
            edges,
        })
        .collect()
}

/// Steiner weights as the largest solution of `w(S) = min` over the tree
/// neighbours of `S`: every Steiner point gets the smallest terminal weight
/// adjacent to its Steiner component.
pub fn steiner_weights(topology: &Topology, terminal_weights: &[f64]) -> Vec<f64> {
    let n = topology.terminal_count;
    let mut w: Vec<f64> = terminal_weights.to_vec();
    w.resize(n + topology.steiner_count, f64::INFINITY);
    loop {
        let mut changed = false;
        for &(u, v) in &topology.edges {
            for (a, b) in [(u, v), (v, u)] {
                if a >= n && w[b] < w[a] {
                    w[a] = w[b];
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    w.split_off(n)
}

/// Minimises weighted length over Steiner positions from three starts
/// (terminal centroid and two seeded jitters of it).
pub fn optimize_topology(topology: &Topology, terminals: &[WeightedVertex]) -> Result<OptimizedTopology> {
    let n = topology.terminal_count;
    if terminals.len() != n {
        return Err(Error::InvalidInput(format!(
            "topology has {n} terminals, instance has {}",
            terminals.len()
        )));
    }
    let tw: Vec<f64> = terminals.iter().map(|t| t.weight).collect();
    let sw = steiner_weights(topology, &tw);
    let weight = |i: usize| if i < n { tw[i] } else { sw[i - n] };
    let edges: Vec<(usize, usize, f64)> = topology
        .edges
        .iter()
        .map(|&(u, v)| (u, v, edge_factor(weight(u), weight(v))))
        .collect();

    let centroid = terminals.iter().fold(Point::default(), |acc, t| acc + t.pos) * (1.0 / n as f64);
    let scale = terminals
        .iter()
        .map(|t| euclid_dist(t.pos, centroid))
        .fold(0.0, f64::max)
        .max(1e-12);
    let k = topology.steiner_count;
    let mut rng = ChaCha8Rng::seed_from_u64(JITTER_SEED);

    let mut best: Option<(f64, Vec<Point>, bool)> = None;
    for start in 0..STARTS {
        let mut positions: Vec<Point> = terminals.iter().map(|t| t.pos).collect();
        for _ in 0..k {
            let jitter = if start == 0 {
                Point::default()
            } else {
                Point::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)) * scale
            };
            positions.push(centroid + jitter);
        }
        let mut net = Network {
            positions,
            free: (0..n + k).map(|i| i >= n).collect(),
            edges: edges.clone(),
        };
        let out = net.minimize(DescentOptions {
            max_rounds: 200_000,
            relative_tolerance: 1e-14,
            sweep_every: 8,
        });
        if best.as_ref().is_none_or(|b| out.objective < b.0) {
            best = Some((out.objective, net.positions, out.converged));
        }
        if k == 0 {
            break;
        }
    }
    let (value, positions, converged) = best.expect("at least one start");

    let mut tree = PlaneTree::from_vertices(terminals.iter().cloned())?;
    let mut ids: Vec<VertexId> = terminals.iter().map(|t| t.id).collect();
    for (j, p) in positions[n..].iter().enumerate() {
        ids.push(tree.add_steiner(*p, sw[j]));
    }
    for &(u, v) in &topology.edges {
        tree.add_edge(ids[u], ids[v]);
    }
    Ok(OptimizedTopology {
        tree,
        weighted_length: value,
        converged,
    })
}

/// Minimum weighted length over every topology, ties going to the earlier
/// topology in enumeration order.
pub fn oracle_wsmt(terminals: &[WeightedVertex]) -> Result<OracleResult> {
    let topologies = enumerate_topologies(terminals.len())?;
    crate::wmst::weighted_mst(terminals)?;
    let results: Vec<(usize, OptimizedTopology)> = topologies
        .par_iter()
        .enumerate()
        .map(|(i, t)| optimize_topology(t, terminals).map(|o| (i, o)))
        .collect::<Result<_>>()?;
    let (index, best) = results
        .into_iter()
        .min_by(|a, b| a.1.weighted_length.total_cmp(&b.1.weighted_length).then(a.0.cmp(&b.0)))
        .expect("at least one topology");
    let metrics = best.tree.metrics();
    Ok(OracleResult {
        best_weighted_length: metrics.weighted_length,
        best_euclidean_length: metrics.euclidean_length,
        topologies_examined: topologies.len(),
        best_topology: topologies[index].clone(),
        best_tree: best.tree,
        converged: best.converged,
    })
}
