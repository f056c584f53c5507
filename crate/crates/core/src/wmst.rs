//! Weighted minimum spanning trees, unconstrained and crossing-free.
//!
//! Both builders grow a tree Prim-style from the first vertex of the
//! insertion order. Among equally cheap candidate edges the one whose new
//! vertex comes first in the insertion order wins, then the one whose tree
//! endpoint does.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{connection_cost, segment_passes_through, segments_cross, Segment, VertexId, WeightedVertex};
use crate::tree::PlaneTree;

pub use crate::tree::{tree_metrics, TreeMetrics};

fn check_terminals(terminals: &[WeightedVertex]) -> Result<()> {
    if terminals.is_empty() {
        return Err(Error::EmptyInstance);
    }
    for (i, t) in terminals.iter().enumerate() {
        if !t.pos.is_finite() {
            return Err(Error::InvalidInput(format!("terminal {} has a non-finite position", t.id)));
        }
        if !(t.weight > 0.0 && t.weight.is_finite()) {
            return Err(Error::InvalidInput(format!("terminal {} has a non-positive weight", t.id)));
        }
        if terminals[..i].iter().any(|o| o.pos == t.pos) {
            return Err(Error::DuplicateTerminal { record: i + 1 });
        }
    }
    Ok(())
}

/// Orders terminals by `insertion_order`; ids missing from the order are
/// appended by ascending id.
fn ordered<'a>(terminals: &'a [WeightedVertex], insertion_order: &[VertexId]) -> Result<Vec<&'a WeightedVertex>> {
    let by_id: BTreeMap<VertexId, &WeightedVertex> = terminals.iter().map(|t| (t.id, t)).collect();
    if by_id.len() != terminals.len() {
        return Err(Error::InvalidInput("terminal ids must be unique".into()));
    }
    let mut out = Vec::with_capacity(terminals.len());
    let mut used = BTreeMap::new();
    for id in insertion_order {
        let t = by_id
            .get(id)
            .ok_or_else(|| Error::InvalidInput(format!("unknown id {id} in insertion order")))?;
        if used.insert(*id, ()).is_none() {
            out.push(*t);
        }
    }
    for (id, t) in &by_id {
        if !used.contains_key(id) {
            out.push(*t);
        }
    }
    Ok(out)
}

fn default_order(terminals: &[WeightedVertex]) -> Vec<VertexId> {
    terminals.iter().map(|t| t.id).collect()
}

/// Minimum spanning tree of the complete graph under connection costs.
/// Edges may cross. Terminals are taken in slice order.
pub fn weighted_mst(terminals: &[WeightedVertex]) -> Result<PlaneTree> {
    check_terminals(terminals)?;
    let order = ordered(terminals, &default_order(terminals))?;
    let n = order.len();
    let mut tree = PlaneTree::from_vertices(order.iter().map(|t| **t))?;

    let mut in_tree = vec![false; n];
    // cheapest known connection of each outside vertex: (cost, tree index)
    let mut best: Vec<(f64, usize)> = vec![(f64::INFINITY, usize::MAX); n];
    in_tree[0] = true;
    for j in 1..n {
        best[j] = (connection_cost(order[0], order[j]), 0);
    }
    for _ in 1..n {
        let mut pick: Option<usize> = None;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            // strict comparison keeps the earliest vertex on ties
            if pick.is_none_or(|p| best[j].0 < best[p].0) {
                pick = Some(j);
            }
        }
        let j = pick.expect("outside vertex");
        in_tree[j] = true;
        tree.add_edge(order[best[j].1].id, order[j].id);
        for k in 0..n {
            if !in_tree[k] {
                let c = connection_cost(order[j], order[k]);
                if c < best[k].0 {
                    best[k] = (c, j);
                }
            }
        }
    }
    Ok(tree)
}

/// Prim growth restricted to edges that do not touch any accepted edge
/// except at a shared endpoint.
///
/// At each step every (tree vertex, outside vertex) pair is a candidate and
/// the cheapest one that stays crossing-free is taken, so when the cheapest
/// edge overall is blocked the next-cheapest feasible pair is used instead.
pub fn plane_weighted_mst(terminals: &[WeightedVertex], insertion_order: &[VertexId]) -> Result<PlaneTree> {
    check_terminals(terminals)?;
    let order = ordered(terminals, insertion_order)?;
    let n = order.len();
    let mut tree = PlaneTree::from_vertices(order.iter().map(|t| **t))?;

    let mut cost = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = connection_cost(order[i], order[j]);
            cost[i][j] = c;
            cost[j][i] = c;
        }
    }

    let mut in_tree = vec![false; n];
    in_tree[0] = true;
    let mut accepted: Vec<(usize, usize)> = Vec::with_capacity(n.saturating_sub(1));
    for step in 1..n {
        let mut pick: Option<(f64, usize, usize)> = None;
        for j in 0..n {
            if in_tree[j] {
                continue;
            }
            for i in 0..n {
                if !in_tree[i] {
                    continue;
                }
                let c = cost[i][j];
                let better = match pick {
                    None => true,
                    Some((bc, bj, bi)) => c < bc || (c == bc && (j, i) < (bj, bi)),
                };
                if !better {
                    continue;
                }
                let s = Segment::new(order[i].pos, order[j].pos);
                // an edge through an unconnected vertex would wall it off
                let blocked = accepted.iter().any(|&(a, b)| {
                    let shares = a == i || b == i;
                    segments_cross(&s, &Segment::new(order[a].pos, order[b].pos), shares)
                }) || (0..n).any(|k| k != i && k != j && segment_passes_through(&s, order[k].pos));
                if !blocked {
                    pick = Some((c, j, i));
                }
            }
        }
        let Some((_, j, i)) = pick else {
            return Err(Error::InfeasiblePlaneTree {
                connected: step,
                total: n,
            });
        };
        in_tree[j] = true;
        accepted.push((i, j));
        tree.add_edge(order[i].id, order[j].id);
    }
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::euclid_dist;
    use crate::tree::Edge;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// A=(0,l), B=(2,l), C=(2,0), D=(0,0) with w(A)=w(D)=omega.
    fn rectangle(l: f64, omega: f64) -> Vec<WeightedVertex> {
        vec![
            WeightedVertex::terminal(0, 0.0, l, omega),
            WeightedVertex::terminal(1, 2.0, l, 1.0),
            WeightedVertex::terminal(2, 2.0, 0.0, 1.0),
            WeightedVertex::terminal(3, 0.0, 0.0, omega),
        ]
    }

    fn e(u: u32, v: u32) -> Edge {
        Edge::new(VertexId(u), VertexId(v))
    }

    /// Kruskal with a plain union-find; used only as a cross-check.
    fn kruskal_length(pts: &[WeightedVertex]) -> f64 {
        let n = pts.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((euclid_dist(pts[i].pos, pts[j].pos), i, j));
            }
        }
        edges.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut total = 0.0;
        for (d, i, j) in edges {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
                total += d;
            }
        }
        total
    }

    fn random_terminals(n: usize, seed: u64) -> Vec<WeightedVertex> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|i| {
                WeightedVertex::terminal(
                    i as u32,
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(0.0..100.0),
                    rng.gen_range(1..=9) as f64,
                )
            })
            .collect()
    }

    #[test]
    fn weighted_rectangle_drops_heavy_side() {
        let t = weighted_mst(&rectangle(2.0, 7.0)).unwrap();
        let edges: Vec<Edge> = t.edges().collect();
        assert_eq!(edges, vec![e(0, 1), e(1, 2), e(2, 3)]);
        assert_abs_diff_eq!(t.metrics().weighted_length, 18.0, epsilon = 1e-12);
    }

    #[test]
    fn unit_rectangle_mst_length() {
        let t = weighted_mst(&rectangle(2.0, 1.0)).unwrap();
        assert_abs_diff_eq!(t.metrics().euclidean_length, 6.0, epsilon = 1e-12);
        assert_eq!(t.edge_count(), 3);
    }

    #[test]
    fn single_terminal() {
        let t = weighted_mst(&[WeightedVertex::terminal(0, 5.0, 5.0, 2.0)]).unwrap();
        assert_eq!(t.edge_count(), 0);
        assert_eq!(t.metrics().weighted_length, 0.0);
        let p = plane_weighted_mst(&[WeightedVertex::terminal(0, 5.0, 5.0, 2.0)], &[]).unwrap();
        assert_eq!(p.edge_count(), 0);
    }

    #[test]
    fn rectangle_threshold() {
        for (l, drops_ad) in [(1.1, false), (1.2, true)] {
            let t = weighted_mst(&rectangle(l, 7.0)).unwrap();
            assert_eq!(!t.has_edge(VertexId(0), VertexId(3)), drops_ad, "l = {l}");
        }
        let at = rectangle(8.0 / 7.0, 7.0);
        let ad = connection_cost(&at[0], &at[3]);
        let ab = connection_cost(&at[0], &at[1]);
        assert_abs_diff_eq!(ad, ab, epsilon = 1e-9);
    }

    #[test]
    fn plane_rectangle_matches() {
        let t = plane_weighted_mst(&rectangle(2.0, 7.0), &[]).unwrap();
        assert_eq!(t.edges().collect::<Vec<_>>(), vec![e(0, 1), e(1, 2), e(2, 3)]);
        assert_abs_diff_eq!(t.metrics().weighted_length, 18.0, epsilon = 1e-12);
    }

    #[test]
    fn duplicates_rejected() {
        let pts = vec![
            WeightedVertex::terminal(0, 1.0, 1.0, 1.0),
            WeightedVertex::terminal(1, 1.0, 1.0, 2.0),
        ];
        assert!(matches!(weighted_mst(&pts), Err(Error::DuplicateTerminal { record: 2 })));
        assert!(matches!(
            plane_weighted_mst(&pts, &[]),
            Err(Error::DuplicateTerminal { record: 2 })
        ));
    }

    #[test]
    fn plane_on_random_instances() {
        for seed in 0..20 {
            let pts = random_terminals(30, seed);
            let plain = weighted_mst(&pts).unwrap();
            let plane = plane_weighted_mst(&pts, &[]).unwrap();
            assert!(plane.is_spanning_tree());
            assert!(plane.crossing_pairs().is_empty(), "seed {seed}");
            assert!(plane.metrics().weighted_length >= plain.metrics().weighted_length - 1e-9);
        }
    }

    #[test]
    fn plane_equals_plain_when_plain_is_plane() {
        let mut hits = 0;
        for seed in 100..140 {
            let pts = random_terminals(8, seed);
            let plain = weighted_mst(&pts).unwrap();
            if plain.crossing_pairs().is_empty() {
                hits += 1;
                let plane = plane_weighted_mst(&pts, &[]).unwrap();
                assert_eq!(plain.edges().collect::<Vec<_>>(), plane.edges().collect::<Vec<_>>());
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn insertion_order_changes_root_not_validity() {
        let pts = random_terminals(12, 7);
        let rev: Vec<VertexId> = pts.iter().rev().map(|t| t.id).collect();
        let t = plane_weighted_mst(&pts, &rev).unwrap();
        assert!(t.is_spanning_tree());
        assert!(t.crossing_pairs().is_empty());
    }

    proptest! {
        #[test]
        fn unit_weights_match_kruskal(seed in 0u64..10_000, n in 2usize..25) {
            let pts: Vec<WeightedVertex> = random_terminals(n, seed)
                .into_iter()
                .map(|t| WeightedVertex { weight: 1.0, ..t })
                .collect();
            let t = weighted_mst(&pts).unwrap();
            prop_assert!(t.is_spanning_tree());
            let m = t.metrics();
            prop_assert!((m.euclidean_length - kruskal_length(&pts)).abs() < 1e-9);
            prop_assert!((m.weighted_length - m.euclidean_length).abs() < 1e-9);
        }
    }
}
