//! Small parametrised terminal sets with known answers.

use crate::geometry::{Point, VertexId, WeightedVertex};
use crate::tree::PlaneTree;

/// Rectangle A=(0,l), B=(2,l), C=(2,0), D=(0,0) with w(A)=w(D)=omega and
/// w(B)=w(C)=1. Ids follow the letters: A=0 .. D=3.
pub fn rectangle(l: f64, omega: f64) -> Vec<WeightedVertex> {
    vec![
        WeightedVertex::terminal(0, 0.0, l, omega),
        WeightedVertex::terminal(1, 2.0, l, 1.0),
        WeightedVertex::terminal(2, 2.0, 0.0, 1.0),
        WeightedVertex::terminal(3, 0.0, 0.0, omega),
    ]
}

/// The rectangle with two Steiner points joined to (A, B) and (C, D), so
/// that the Steiner–Steiner edge is vertical. Steiner points start on the
/// mid-axis at heights 3l/4 and l/4 with unit weight.
pub fn rectangle_vertical_topology(l: f64, omega: f64) -> PlaneTree {
    let mut t = PlaneTree::from_vertices(rectangle(l, omega)).expect("distinct corners");
    let s1 = t.add_steiner(Point::new(1.0, 0.75 * l), 1.0);
    let s2 = t.add_steiner(Point::new(1.0, 0.25 * l), 1.0);
    for (a, s) in [(0, s1), (1, s1), (2, s2), (3, s2)] {
        t.add_edge(VertexId(a), s);
    }
    t.add_edge(s1, s2);
    t
}

/// Equilateral triangle (-1,0), (1,0), (0,sqrt 3) with unit weights.
pub fn equilateral() -> Vec<WeightedVertex> {
    vec![
        WeightedVertex::terminal(0, -1.0, 0.0, 1.0),
        WeightedVertex::terminal(1, 1.0, 0.0, 1.0),
        WeightedVertex::terminal(2, 0.0, 3f64.sqrt(), 1.0),
    ]
}

/// The six images of (1-2s, 0) under the symmetries of the equilateral
/// triangle above, unit weights, for 0 < s < 1/2. Listed along the
/// boundary so that consecutive points are joined by the short path.
pub fn hexagon_orbit(s: f64) -> Vec<WeightedVertex> {
    let centre = Point::new(0.0, 1.0 / 3f64.sqrt());
    let p = Point::new(1.0 - 2.0 * s, 0.0);
    let q = Point::new(-(1.0 - 2.0 * s), 0.0);
    let pts = [
        q,
        p,
        q.rotated_about(centre, 120.0),
        p.rotated_about(centre, 120.0),
        q.rotated_about(centre, 240.0),
        p.rotated_about(centre, 240.0),
    ];
    pts.iter()
        .enumerate()
        .map(|(i, pt)| WeightedVertex::terminal(i as u32, pt.x, pt.y, 1.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::euclid_dist;

    #[test]
    fn orbit_points_sit_on_triangle_sides() {
        let pts = hexagon_orbit(0.2);
        // each pair (2k, 2k+1) lies on one side, the gap to the next pair is 2s
        for k in 0..3 {
            let a = pts[2 * k + 1].pos;
            let b = pts[(2 * k + 2) % 6].pos;
            assert!((euclid_dist(a, b) - 0.4).abs() < 1e-12);
            assert!((euclid_dist(pts[2 * k].pos, a) - 1.2).abs() < 1e-12);
        }
    }
}
