use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::families::{equilateral, rectangle, rectangle_vertical_topology as vertical_topology};
use crate::geometry::{angle_at, euclid_dist, Point, VertexKind};

fn path(points: &[(f64, f64, f64)]) -> PlaneTree {
    let mut t = PlaneTree::from_vertices(
        points
            .iter()
            .enumerate()
            .map(|(i, &(x, y, w))| WeightedVertex::terminal(i as u32, x, y, w)),
    )
    .unwrap();
    for i in 1..points.len() {
        t.add_edge(VertexId(i as u32 - 1), VertexId(i as u32));
    }
    t
}

fn random_terminals(rng: &mut ChaCha8Rng, n: usize) -> Vec<WeightedVertex> {
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
fn slide_leaves_wide_angle_alone() {
    let a = 130f64.to_radians();
    let mut t = path(&[(1.0, 0.0, 1.0), (0.0, 0.0, 1.0), (a.cos(), a.sin(), 1.0)]);
    let before = t.clone();
    assert!(slide_inherent(&mut t, &SolveConfig::default()).is_empty());
    assert_eq!(t, before);
}

#[test]
fn slide_to_inherent_corner() {
    // B=(4,1) is acute, the corner at C=(2,0.2) is obtuse
    let mut t = path(&[(0.0, 0.0, 1.0), (4.0, 1.0, 1.0), (2.0, 0.2, 1.0)]);
    let events = slide_inherent(&mut t, &SolveConfig::default());
    assert_eq!(events.len(), 1);
    assert!(!t.has_edge(VertexId(0), VertexId(1)));
    assert!(t.has_edge(VertexId(0), VertexId(2)));
    assert!(t.has_edge(VertexId(1), VertexId(2)));
}

#[test]
fn slide_ignores_acute_triangle() {
    // apex angle 100°, the two base angles are 40°
    let a = 100f64.to_radians();
    let mut t = path(&[(1.0, 0.0, 1.0), (0.0, 0.0, 1.0), (a.cos(), a.sin(), 1.0)]);
    assert!(slide_inherent(&mut t, &SolveConfig::default()).is_empty());
}

#[test]
fn detach_skips_121_degrees() {
    let a = 121f64.to_radians();
    let mut t = path(&[(1.0, 0.0, 1.0), (0.0, 0.0, 1.0), (a.cos(), a.sin(), 1.0)]);
    assert!(detach_steiner(&mut t, &SolveConfig::default()).is_empty());
}

#[test]
fn detached_steiner_takes_min_weight() {
    let mut t = path(&[(0.0, 0.0, 5.0), (1.0, 1.5, 2.0), (2.0, 0.0, 9.0)]);
    let before = t.metrics().euclidean_length;
    let events = detach_steiner(&mut t, &SolveConfig::default());
    assert_eq!(events.len(), 1);
    let s = t.steiner_ids()[0];
    assert_eq!(t.vertex(s).weight, 2.0);
    assert_eq!(t.degree(s), 3);
    assert!(t.metrics().euclidean_length < before);
    t.validate().unwrap();
}

#[test]
fn relax_single_steiner_reaches_torricelli() {
    let mut t = PlaneTree::from_vertices(equilateral()).unwrap();
    let s = t.add_steiner(Point::new(0.3, 0.1), 1.0);
    for i in 0..3 {
        t.add_edge(VertexId(i), s);
    }
    relax(&mut t, &SolveConfig::default());
    let p = t.pos(s);
    for (a, b) in [(0, 1), (1, 2), (0, 2)] {
        let ang = angle_at(p, t.pos(VertexId(a)), t.pos(VertexId(b))).unwrap();
        assert_abs_diff_eq!(ang, 120.0, epsilon = 1e-6);
    }
}

#[test]
fn relax_keeps_vertical_topology_on_mid_axis() {
    let mut t = vertical_topology(2.0, 7.0);
    let edges: Vec<_> = t.edges().collect();
    relax(&mut t, &SolveConfig::default());
    assert_eq!(edges, t.edges().collect::<Vec<_>>());
    for s in t.steiner_ids() {
        assert_abs_diff_eq!(t.pos(s).x, 1.0, epsilon = 1e-7);
    }
}

#[test]
fn relax_is_monotone_in_its_objective() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for objective in [RelaxObjective::Euclidean, RelaxObjective::Weighted] {
        let cfg = SolveConfig {
            relax_objective: objective,
            ..Default::default()
        };
        for _ in 0..100 {
            let terms = random_terminals(&mut rng, 6);
            let mut t = crate::wmst::plane_weighted_mst(&terms, &terms.iter().map(|v| v.id).collect::<Vec<_>>()).unwrap();
            detach_steiner(&mut t, &cfg);
            let before = relax_objective_value(&t, objective);
            let (out, events) = relax(&mut t, &cfg);
            assert!(out.objective_after <= out.objective_before, "{out:?}");
            assert!(relax_objective_value(&t, objective) <= before * (1.0 + 1e-12));
            assert_eq!(events.len(), 1);
            if objective == RelaxObjective::Weighted {
                assert!(t.metrics().weighted_length <= before * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn topology_rule_fires_on_collapsed_rectangle() {
    let mut t = vertical_topology(1.0, 1.0);
    let cfg = SolveConfig::default();
    relax(&mut t, &cfg);
    flick_zero_edges(&mut t, &cfg);
    let (events, changed) = apply_topology_rule(&mut t, &cfg);
    assert!(changed);
    assert!(events.iter().any(|e| e.kind == EventKind::TopologySwap));
    let ss: Vec<Edge> = steiner_steiner_edges(&t);
    assert_eq!(ss.len(), 1);
    let (p, q) = (t.pos(ss[0].0), t.pos(ss[0].1));
    assert!((p.y - q.y).abs() < 1e-6, "Steiner edge should be horizontal");
    assert_abs_diff_eq!(t.metrics().euclidean_length, 2.0 + 3f64.sqrt(), epsilon = 1e-7);
}

#[test]
fn topology_rule_quiet_at_the_bound() {
    let mut t = vertical_topology(2.0, 7.0);
    let cfg = SolveConfig::default();
    relax(&mut t, &cfg);
    let ss = steiner_steiner_edges(&t)[0];
    let d = t.edge_length(ss);
    let s1 = t.neighbors(VertexId(0))[0];
    let leg = euclid_dist(t.pos(VertexId(0)), t.pos(s1));
    assert_abs_diff_eq!(d / leg, TOPOLOGY_RATIO, epsilon = 1e-6);
    let (_, changed) = apply_topology_rule(&mut t, &cfg);
    assert!(!changed);
}

#[test]
fn flick_contracts_tiny_steiner_edge_into_hub() {
    let mut t = vertical_topology(2.0, 1.0);
    let ids = t.steiner_ids();
    t.set_pos(ids[0], Point::new(1.0, 1.0));
    t.set_pos(ids[1], Point::new(1.0, 1.0 - 1e-12));
    let events = flick_zero_edges(&mut t, &SolveConfig::default());
    assert_eq!(events.len(), 1);
    assert_eq!(t.steiner_count(), 1);
    assert_eq!(t.degree(t.steiner_ids()[0]), 4);
    t.validate().unwrap();
}

#[test]
fn flick_without_short_edges_is_identity() {
    let mut t = vertical_topology(2.0, 1.0);
    let before = t.clone();
    assert!(flick_zero_edges(&mut t, &SolveConfig::default()).is_empty());
    assert_eq!(t, before);
}

#[test]
fn flick_merges_steiner_into_terminal() {
    for (policy, expect) in [
        (MergePolicy::TerminalKeepsWeight, 7.0),
        (MergePolicy::TerminalAdoptsSteinerWeight, 1.0),
    ] {
        let mut t = vertical_topology(2.0, 7.0);
        let s1 = t.steiner_ids()[0];
        t.set_pos(s1, Point::new(1e-9, 2.0));
        let cfg = SolveConfig {
            merge_policy: policy,
            ..Default::default()
        };
        let events = flick_zero_edges(&mut t, &cfg);
        assert_eq!(events[0].kind, EventKind::CollisionMerge);
        assert!(events[0].merge_weight_change);
        assert!(t.get(s1).is_none());
        assert_eq!(t.vertex(VertexId(0)).weight, expect);
        assert_eq!(t.degree(VertexId(0)), 2);
        t.validate().unwrap();
    }
}

#[test]
fn tiny_inputs_pass_through() {
    for n in 1..=2 {
        let terms: Vec<_> = (0..n).map(|i| WeightedVertex::terminal(i, i as f64, 0.0, 1.0)).collect();
        let sol = solve(&terms, &SolveConfig::default()).unwrap();
        assert_eq!(sol.tree.edge_count(), n as usize - 1);
        assert_eq!(sol.tree.steiner_count(), 0);
        assert!(sol.report.converged);
    }
}

#[test]
fn equilateral_triangle_gets_one_steiner_point() {
    let sol = solve(&equilateral(), &SolveConfig::default()).unwrap();
    assert_eq!(sol.tree.steiner_count(), 1);
    assert_abs_diff_eq!(sol.report.final_metrics.euclidean_length, 2.0 * 3f64.sqrt(), epsilon = 1e-7);
    let s = sol.tree.steiner_ids()[0];
    assert!(euclid_dist(sol.tree.pos(s), Point::new(0.0, 1.0 / 3f64.sqrt())) < 1e-6);
    assert!(sol.report.converged);
}

#[test]
fn unit_square_gets_full_topology() {
    let terms = rectangle(1.0, 1.0)
        .into_iter()
        .map(|mut v| {
            v.pos.x *= 0.5;
            v
        })
        .collect::<Vec<_>>();
    let sol = solve(&terms, &SolveConfig::default()).unwrap();
    assert_eq!(sol.tree.steiner_count(), 2);
    assert_abs_diff_eq!(sol.report.final_metrics.euclidean_length, 1.0 + 3f64.sqrt(), epsilon = 1e-6);
    for (_, a) in steiner_min_angles(&sol.tree) {
        assert_abs_diff_eq!(a, 120.0, epsilon = 1e-3);
    }
}

#[test]
fn collinear_terminals_return_plane_wmst() {
    let terms: Vec<_> = (0..5).map(|i| WeightedVertex::terminal(i, i as f64, 2.0 * i as f64, 1.0 + i as f64)).collect();
    let sol = solve(&terms, &SolveConfig::default()).unwrap();
    assert_eq!(sol.tree.steiner_count(), 0);
    assert_eq!(sol.report.final_metrics, sol.report.plane_wmst_metrics);
}

#[test]
fn detachment_profile_slope_changes_sign_at_60_degrees() {
    for alpha in [40.0, 50.0, 59.0] {
        assert!(detachment_length_profile(1e-4, alpha) < detachment_length_profile(0.0, alpha));
    }
    for alpha in [61.0, 75.0] {
        assert!(detachment_length_profile(1e-4, alpha) >= detachment_length_profile(0.0, alpha));
    }
}

#[test]
fn every_step_keeps_a_spanning_tree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cfg = SolveConfig::default();
    for _ in 0..20 {
        let terms = random_terminals(&mut rng, 9);
        let order: Vec<_> = terms.iter().map(|v| v.id).collect();
        let mut t = crate::wmst::plane_weighted_mst(&terms, &order).unwrap();
        for _ in 0..10 {
            slide_inherent(&mut t, &cfg);
            t.validate().unwrap();
            detach_steiner(&mut t, &cfg);
            t.validate().unwrap();
            relax(&mut t, &cfg);
            flick_zero_edges(&mut t, &cfg);
            t.validate().unwrap();
            apply_topology_rule(&mut t, &cfg);
            t.validate().unwrap();
        }
    }
}

#[test]
fn solve_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let terms = random_terminals(&mut rng, 12);
    for ordering in [Ordering::InputOrder, Ordering::AcutestFirst] {
        let cfg = SolveConfig {
            ordering,
            ..Default::default()
        };
        let a = solve(&terms, &cfg).unwrap();
        let b = solve(&terms, &cfg).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn final_trees_are_balanced_and_no_worse() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cfg = SolveConfig::default();
    for _ in 0..30 {
        let n = rng.gen_range(3..=10);
        let terms = random_terminals(&mut rng, n);
        let sol = solve(&terms, &cfg).unwrap();
        sol.tree.validate().unwrap();
        assert!(sol.report.converged, "{:?}", sol.report);
        assert!(steiner_postconditions_hold(&sol.tree, &cfg));
        assert!(sol.report.planarity_violations.is_empty());
        assert!(sol.tree.vertices().all(|v| v.kind == VertexKind::Steiner || v.weight >= 1.0));
        assert!(sol.report.final_metrics.euclidean_length <= sol.report.plane_wmst_metrics.euclidean_length + 1e-9);
    }
}

#[test]
fn bad_config_is_rejected() {
    let cfg = SolveConfig {
        angle_tolerance_fraction: 1.0,
        ..Default::default()
    };
    assert!(matches!(solve(&equilateral(), &cfg), Err(Error::InvalidConfig(_))));
}
