//! Planar primitives: distances, connection costs, angles, segment contact
//! and (weighted) Fermat–Torricelli points.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn midpoint(self, other: Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    /// Rotates `self` about `center` by `degrees` (counter-clockwise positive).
    pub fn rotated_about(self, center: Point, degrees: f64) -> Point {
        let (s, c) = degrees.to_radians().sin_cos();
        let d = self - center;
        center + Point::new(c * d.x - s * d.y, s * d.x + c * d.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Terminal,
    Steiner,
}

/// A terminal or Steiner point carrying a positive weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedVertex {
    pub id: VertexId,
    pub pos: Point,
    pub weight: f64,
    pub kind: VertexKind,
}

impl WeightedVertex {
    pub fn terminal(id: u32, x: f64, y: f64, weight: f64) -> Self {
        WeightedVertex {
            id: VertexId(id),
            pos: Point::new(x, y),
            weight,
            kind: VertexKind::Terminal,
        }
    }

    pub fn is_steiner(&self) -> bool {
        self.kind == VertexKind::Steiner
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermatResult {
    pub point: Point,
    pub inherent: bool,
    /// Index (0, 1 or 2) of the input corner returned when `inherent` is set.
    pub inherent_vertex: Option<usize>,
}

pub fn euclid_dist(p: Point, q: Point) -> f64 {
    (p - q).norm()
}

/// Mean weight of the endpoints times their distance.
pub fn connection_cost(u: &WeightedVertex, v: &WeightedVertex) -> f64 {
    edge_factor(u.weight, v.weight) * euclid_dist(u.pos, v.pos)
}

/// Multiplier applied to the Euclidean length of an edge whose endpoints
/// weigh `wu` and `wv`.
pub fn edge_factor(wu: f64, wv: f64) -> f64 {
    0.5 * (wu + wv)
}

/// Interior angle at `apex` between the rays towards `a` and `b`, in degrees.
pub fn angle_at(apex: Point, a: Point, b: Point) -> Result<f64> {
    let u = a - apex;
    let v = b - apex;
    let nu = u.norm();
    let nv = v.norm();
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::DegenerateAngle);
    }
    let cos = (u.dot(v) / (nu * nv)).clamp(-1.0, 1.0);
    Ok(cos.acos().to_degrees())
}

/// Same angle as [`angle_at`] in radians, computed with `atan2` so that
/// angles near 0 and 180 degrees keep full precision.
fn angle_rad(apex: Point, a: Point, b: Point) -> f64 {
    let u = a - apex;
    let v = b - apex;
    u.cross(v).abs().atan2(u.dot(v))
}

fn bbox_diagonal(points: &[Point]) -> f64 {
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    (max_x - min_x).hypot(max_y - min_y)
}

fn orientation(a: Point, b: Point, c: Point, eps: f64) -> i8 {
    let cross = (b - a).cross(c - a);
    if cross.abs() <= eps {
        0
    } else if cross > 0.0 {
        1
    } else {
        -1
    }
}

/// `p` inside the axis-aligned box spanned by `a` and `b`; callers have
/// already established collinearity.
fn within_box(a: Point, b: Point, p: Point, tol: f64) -> bool {
    p.x >= a.x.min(b.x) - tol
        && p.x <= a.x.max(b.x) + tol
        && p.y >= a.y.min(b.y) - tol
        && p.y <= a.y.max(b.y) + tol
}

fn point_on_segment(p: Point, s: &Segment, eps: f64, tol: f64) -> bool {
    orientation(s.a, s.b, p, eps) == 0 && within_box(s.a, s.b, p, tol)
}

/// `p` lies on `s` other than at an endpoint.
pub fn segment_passes_through(s: &Segment, p: Point) -> bool {
    if p == s.a || p == s.b {
        return false;
    }
    let diag = bbox_diagonal(&[s.a, s.b, p]);
    point_on_segment(p, s, 1e-9 * diag * diag, 1e-12 * diag)
}

/// Whether two closed segments touch.
///
/// With `shared_endpoint_ok`, segments that meet only at a common endpoint
/// are not counted; any other contact (proper crossing, T-contact, collinear
/// overlap) is. Collinearity uses `|cross| <= 1e-9 * diag^2` where `diag` is
/// the diagonal of the bounding box of the four endpoints.
pub fn segments_cross(s1: &Segment, s2: &Segment, shared_endpoint_ok: bool) -> bool {
    let pts = [s1.a, s1.b, s2.a, s2.b];
    let diag = bbox_diagonal(&pts);
    let eps = 1e-9 * diag * diag;
    let tol = 1e-12 * diag;

    if shared_endpoint_ok {
        let ends1 = [(s1.a, s1.b), (s1.b, s1.a)];
        let ends2 = [(s2.a, s2.b), (s2.b, s2.a)];
        for (p1, other1) in ends1 {
            for (p2, other2) in ends2 {
                if p1 != p2 {
                    continue;
                }
                if other1 == p1 || other2 == p1 {
                    // a point segment sitting on the shared endpoint
                    return false;
                }
                if other1 == other2 {
                    return true;
                }
                return point_on_segment(other2, s1, eps, tol)
                    || point_on_segment(other1, s2, eps, tol);
            }
        }
    }

    let o1 = orientation(s1.a, s1.b, s2.a, eps);
    let o2 = orientation(s1.a, s1.b, s2.b, eps);
    let o3 = orientation(s2.a, s2.b, s1.a, eps);
    let o4 = orientation(s2.a, s2.b, s1.b, eps);

    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && within_box(s1.a, s1.b, s2.a, tol))
        || (o2 == 0 && within_box(s1.a, s1.b, s2.b, tol))
        || (o3 == 0 && within_box(s2.a, s2.b, s1.a, tol))
        || (o4 == 0 && within_box(s2.a, s2.b, s1.b, tol))
}

/// Point minimising `|Sa| + |Sb| + |Sc|`.
///
/// A corner whose interior angle is at least 120 degrees is its own optimum
/// and is reported as inherent; collinear triples land here through their
/// middle point. Otherwise the interior point seeing every side under 120
/// degrees is returned, computed from its barycentric coordinates
/// `a / sin(A + 60°) : b / sin(B + 60°) : c / sin(C + 60°)`.
pub fn fermat_point(a: Point, b: Point, c: Point) -> Result<FermatResult> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(Error::InvalidInput("non-finite coordinate".into()));
    }
    if a == b || b == c || a == c {
        return Err(Error::DegenerateTriangle);
    }
    let corners = [a, b, c];
    let angles = [angle_rad(a, b, c), angle_rad(b, c, a), angle_rad(c, a, b)];
    let limit = 2.0 * PI / 3.0;
    if let Some(i) = (0..3).find(|&i| angles[i] >= limit) {
        return Ok(FermatResult {
            point: corners[i],
            inherent: true,
            inherent_vertex: Some(i),
        });
    }
    let sides = [euclid_dist(b, c), euclid_dist(c, a), euclid_dist(a, b)];
    let mut lambda = [0.0; 3];
    for i in 0..3 {
        lambda[i] = sides[i] / (angles[i] + PI / 3.0).sin();
    }
    let total: f64 = lambda.iter().sum();
    let point = Point::new(
        (lambda[0] * a.x + lambda[1] * b.x + lambda[2] * c.x) / total,
        (lambda[0] * a.y + lambda[1] * b.y + lambda[2] * c.y) / total,
    );
    Ok(FermatResult {
        point,
        inherent: false,
        inherent_vertex: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermatOptions {
    pub max_iterations: usize,
    /// Stop once an iterate moves less than this fraction of the neighbour spread.
    pub tolerance: f64,
}

impl Default for FermatOptions {
    fn default() -> Self {
        FermatOptions {
            max_iterations: 10_000,
            tolerance: 1e-13,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedFermat {
    pub point: Point,
    pub objective: f64,
    pub iterations: usize,
    /// False when the iteration cap was hit; `point` is then the best iterate.
    pub converged: bool,
    /// Set when the minimiser is one of the neighbours.
    pub anchor: Option<usize>,
}

pub fn weighted_distance_sum(neighbors: &[(Point, f64)], p: Point) -> f64 {
    neighbors.iter().map(|&(q, f)| f * euclid_dist(p, q)).sum()
}

/// Local (and, the objective being convex, global) minimiser of
/// `sum factor_i * |P - n_i|` started from `start`.
pub fn weighted_fermat_point(neighbors: &[(Point, f64)], start: Point) -> Result<WeightedFermat> {
    weighted_fermat_point_with(neighbors, start, FermatOptions::default(), |_, _| {})
}

/// [`weighted_fermat_point`] with explicit options and an observer that is
/// called with `(iteration, objective)` for the start point and every
/// accepted iterate. Accepted objectives never increase.
///
/// Iteratively reweighted averaging (Weiszfeld) with two guards: every
/// neighbour is first tested for optimality (the norm of the pull of the
/// others must not exceed its own factor) and returned directly when it
/// passes; an iterate that lands on a non-optimal neighbour is pushed off
/// along the descent direction.
pub fn weighted_fermat_point_with(
    neighbors: &[(Point, f64)],
    start: Point,
    opts: FermatOptions,
    mut observe: impl FnMut(usize, f64),
) -> Result<WeightedFermat> {
    if neighbors.is_empty() {
        return Err(Error::InvalidInput("weighted Fermat point needs neighbours".into()));
    }
    if !start.is_finite() {
        return Err(Error::InvalidInput("non-finite start point".into()));
    }
    for &(p, f) in neighbors {
        if !p.is_finite() || !(f > 0.0 && f.is_finite()) {
            return Err(Error::InvalidInput(
                "neighbour positions must be finite and factors positive".into(),
            ));
        }
    }

    let objective = |p: Point| weighted_distance_sum(neighbors, p);
    let start_value = objective(start);
    observe(0, start_value);

    let mut best_anchor: Option<(usize, f64)> = None;
    for j in 0..neighbors.len() {
        let (pull, own) = anchor_pull(neighbors, j);
        if pull.norm() <= own * (1.0 + 1e-12) {
            let value = objective(neighbors[j].0);
            if best_anchor.is_none_or(|(_, v)| value < v) {
                best_anchor = Some((j, value));
            }
        }
    }
    if let Some((j, value)) = best_anchor {
        if value <= start_value {
            observe(1, value);
            return Ok(WeightedFermat {
                point: neighbors[j].0,
                objective: value,
                iterations: 1,
                converged: true,
                anchor: Some(j),
            });
        }
        return Ok(WeightedFermat {
            point: start,
            objective: start_value,
            iterations: 0,
            converged: true,
            anchor: None,
        });
    }

    let scale = spread(neighbors).max(f64::MIN_POSITIVE);
    let snap = 1e-12 * scale;
    let mut y = start;
    let mut fy = start_value;
    let mut converged = false;
    let mut iterations = 0;

    for it in 1..=opts.max_iterations {
        iterations = it;
        let near_anchor = neighbors
            .iter()
            .position(|&(q, _)| euclid_dist(y, q) <= snap);
        let proposal = match near_anchor {
            Some(j) => escape_anchor(neighbors, j),
            None => weiszfeld_step(neighbors, y),
        };
        let mut cand = proposal;
        let mut fc = objective(cand);
        let mut halvings = 0;
        while fc > fy && halvings < 40 {
            cand = y.midpoint(cand);
            fc = objective(cand);
            halvings += 1;
        }
        if fc > fy {
            converged = true;
            break;
        }
        let step = euclid_dist(cand, y);
        y = cand;
        fy = fc;
        observe(it, fy);
        if step <= opts.tolerance * scale {
            converged = true;
            break;
        }
    }

    Ok(WeightedFermat {
        point: y,
        objective: fy,
        iterations,
        converged,
        anchor: None,
    })
}

/// Resultant pull of the other neighbours at neighbour `j`, and the total
/// factor sitting at `j`'s position.
fn anchor_pull(neighbors: &[(Point, f64)], j: usize) -> (Point, f64) {
    let pj = neighbors[j].0;
    let mut pull = Point::default();
    let mut own = 0.0;
    for &(q, f) in neighbors {
        let d = q - pj;
        let n = d.norm();
        if n == 0.0 {
            own += f;
        } else {
            pull = pull + d * (f / n);
        }
    }
    (pull, own)
}

fn weiszfeld_step(neighbors: &[(Point, f64)], y: Point) -> Point {
    let mut num = Point::default();
    let mut den = 0.0;
    for &(q, f) in neighbors {
        let w = f / euclid_dist(y, q);
        num = num + q * w;
        den += w;
    }
    num * (1.0 / den)
}

fn escape_anchor(neighbors: &[(Point, f64)], j: usize) -> Point {
    let pj = neighbors[j].0;
    let (pull, own) = anchor_pull(neighbors, j);
    let norm = pull.norm();
    let curvature: f64 = neighbors
        .iter()
        .filter_map(|&(q, f)| {
            let d = euclid_dist(q, pj);
            (d > 0.0).then(|| f / d)
        })
        .sum();
    if norm <= own || curvature == 0.0 {
        return pj;
    }
    pj + pull * ((norm - own) / (norm * curvature))
}

fn spread(neighbors: &[(Point, f64)]) -> f64 {
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(p, _) in neighbors {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    (max_x - min_x).hypot(max_y - min_y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn tv(x: f64, y: f64, w: f64) -> WeightedVertex {
        WeightedVertex::terminal(0, x, y, w)
    }

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point::new(ax, ay), Point::new(bx, by))
    }

    /// Grid scan followed by compass search; independent of Weiszfeld.
    fn brute_minimize(neighbors: &[(Point, f64)]) -> Point {
        let f = |p: Point| weighted_distance_sum(neighbors, p);
        let (mut lo, mut hi) = (Point::new(f64::MAX, f64::MAX), Point::new(f64::MIN, f64::MIN));
        for &(p, _) in neighbors {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let n = 400;
        let mut best = lo;
        for i in 0..=n {
            for j in 0..=n {
                let p = Point::new(
                    lo.x + (hi.x - lo.x) * i as f64 / n as f64,
                    lo.y + (hi.y - lo.y) * j as f64 / n as f64,
                );
                if f(p) < f(best) {
                    best = p;
                }
            }
        }
        let mut step = (hi.x - lo.x).max(hi.y - lo.y) / n as f64;
        while step > 1e-13 {
            let mut moved = false;
            for d in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
                let c = best + Point::new(d.0, d.1) * step;
                if f(c) < f(best) {
                    best = c;
                    moved = true;
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        best
    }

    #[test]
    fn euclid_dist_examples() {
        assert_eq!(euclid_dist(Point::new(0.0, 0.0), Point::new(0.0, 0.0)), 0.0);
        assert_eq!(euclid_dist(Point::new(0.0, 0.0), Point::new(3.0, 4.0)), 5.0);
        assert_eq!(euclid_dist(Point::new(-1.0, 0.0), Point::new(1.0, 0.0)), 2.0);
    }

    #[test]
    fn connection_cost_examples() {
        assert_eq!(connection_cost(&tv(0.0, 0.0, 1.0), &tv(1.0, 0.0, 1.0)), 1.0);
        assert_eq!(connection_cost(&tv(0.0, 0.0, 7.0), &tv(0.0, 2.0, 7.0)), 14.0);
        assert_eq!(connection_cost(&tv(0.0, 0.0, 2.0), &tv(3.0, 4.0, 4.0)), 15.0);
    }

    #[test]
    fn angle_examples() {
        let o = Point::new(0.0, 0.0);
        assert_abs_diff_eq!(
            angle_at(o, Point::new(1.0, 0.0), Point::new(0.0, 1.0)).unwrap(),
            90.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            angle_at(o, Point::new(1.0, 0.0), Point::new(-1.0, 0.0)).unwrap(),
            180.0,
            epsilon = 1e-12
        );
        let c = 120f64.to_radians();
        assert_abs_diff_eq!(
            angle_at(o, Point::new(1.0, 0.0), Point::new(c.cos(), c.sin())).unwrap(),
            120.0,
            epsilon = 1e-9
        );
        assert!(matches!(
            angle_at(o, o, Point::new(1.0, 0.0)),
            Err(Error::DegenerateAngle)
        ));
    }

    #[test]
    fn segment_contact_examples() {
        assert!(segments_cross(&seg(0.0, 0.0, 2.0, 2.0), &seg(0.0, 2.0, 2.0, 0.0), true));
        assert!(!segments_cross(&seg(0.0, 0.0, 1.0, 0.0), &seg(1.0, 0.0, 2.0, 1.0), true));
        assert!(segments_cross(&seg(0.0, 0.0, 2.0, 0.0), &seg(1.0, 0.0, 1.0, 1.0), true));
    }

    #[test]
    fn segment_contact_edge_cases() {
        // shared endpoint counts when not allowed
        assert!(segments_cross(&seg(0.0, 0.0, 1.0, 0.0), &seg(1.0, 0.0, 2.0, 1.0), false));
        // collinear overlap through a shared endpoint
        assert!(segments_cross(&seg(0.0, 0.0, 2.0, 0.0), &seg(0.0, 0.0, 1.0, 0.0), true));
        // collinear, touching only at the shared endpoint
        assert!(!segments_cross(&seg(0.0, 0.0, 1.0, 0.0), &seg(1.0, 0.0, 2.0, 0.0), true));
        // disjoint collinear
        assert!(!segments_cross(&seg(0.0, 0.0, 1.0, 0.0), &seg(2.0, 0.0, 3.0, 0.0), true));
        // parallel
        assert!(!segments_cross(&seg(0.0, 0.0, 1.0, 0.0), &seg(0.0, 1.0, 1.0, 1.0), false));
        // degenerate segment lying on another
        assert!(segments_cross(&seg(0.5, 0.0, 0.5, 0.0), &seg(0.0, 0.0, 1.0, 0.0), true));
        assert!(!segments_cross(&seg(0.5, 0.1, 0.5, 0.1), &seg(0.0, 0.0, 1.0, 0.0), true));
        // identical segments
        assert!(segments_cross(&seg(0.0, 0.0, 1.0, 1.0), &seg(1.0, 1.0, 0.0, 0.0), true));
    }

    #[test]
    fn fermat_equilateral() {
        let r = fermat_point(
            Point::new(-1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 3f64.sqrt()),
        )
        .unwrap();
        assert!(!r.inherent);
        assert_abs_diff_eq!(r.point.x, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.point.y, 1.0 / 3f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn fermat_obtuse_is_inherent() {
        let r = fermat_point(Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(-0.6, 0.2))
            .unwrap();
        assert!(r.inherent);
        assert_eq!(r.inherent_vertex, Some(0));
        assert_eq!(r.point, Point::new(0.0, 0.0));
    }

    #[test]
    fn fermat_collinear_returns_middle() {
        let r = fermat_point(Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(1.0, 0.0))
            .unwrap();
        assert!(r.inherent);
        assert_eq!(r.point, Point::new(1.0, 0.0));
        assert!(matches!(
            fermat_point(Point::new(0.0, 0.0), Point::new(0.0, 0.0), Point::new(1.0, 0.0)),
            Err(Error::DegenerateTriangle)
        ));
    }

    #[test]
    fn fermat_matches_brute_force() {
        let (a, b, c) = (Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(1.0, 2.0));
        let expected = brute_minimize(&[(a, 1.0), (b, 1.0), (c, 1.0)]);
        let got = fermat_point(a, b, c).unwrap().point;
        assert_abs_diff_eq!(got.x, expected.x, epsilon = 1e-6);
        assert_abs_diff_eq!(got.y, expected.y, epsilon = 1e-6);
    }

    #[test]
    fn weighted_fermat_equilateral_objective() {
        let pts = [
            (Point::new(-1.0, 0.0), 1.0),
            (Point::new(1.0, 0.0), 1.0),
            (Point::new(0.0, 3f64.sqrt()), 1.0),
        ];
        let r = weighted_fermat_point(&pts, Point::new(0.3, 0.2)).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.objective, 2.0 * 3f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.point.y, 1.0 / 3f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn weighted_fermat_two_neighbours_on_segment() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(3.0, 1.0);
        let r = weighted_fermat_point(&[(a, 1.0), (b, 1.0)], Point::new(5.0, -2.0)).unwrap();
        let dist_to_line = (b - a).cross(r.point - a).abs() / (b - a).norm();
        assert!(dist_to_line < 1e-9);
        assert!(r.point.x >= -1e-9 && r.point.x <= 3.0 + 1e-9);
        assert_abs_diff_eq!(r.objective, (b - a).norm(), epsilon = 1e-12);
    }

    #[test]
    fn weighted_fermat_matches_brute_force() {
        let pts = [
            (Point::new(0.0, 0.0), 2.0),
            (Point::new(2.0, 0.0), 1.0),
            (Point::new(1.0, 3.0), 1.0),
        ];
        let expected = brute_minimize(&pts);
        let got = weighted_fermat_point(&pts, Point::new(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(got.point.x, expected.x, epsilon = 1e-6);
        assert_abs_diff_eq!(got.point.y, expected.y, epsilon = 1e-6);
    }

    #[test]
    fn weighted_fermat_dominant_anchor() {
        let pts = [
            (Point::new(0.0, 0.0), 5.0),
            (Point::new(2.0, 0.0), 1.0),
            (Point::new(1.0, 3.0), 1.0),
        ];
        let got = weighted_fermat_point(&pts, Point::new(1.0, 1.0)).unwrap();
        assert_eq!(got.anchor, Some(0));
        assert_eq!(got.point, Point::new(0.0, 0.0));
    }

    #[test]
    fn weighted_fermat_rejects_bad_input() {
        assert!(weighted_fermat_point(&[], Point::default()).is_err());
        assert!(weighted_fermat_point(&[(Point::default(), 0.0)], Point::default()).is_err());
    }

    fn arb_point() -> impl Strategy<Value = Point> {
        (-100.0..100.0f64, -100.0..100.0f64).prop_map(|(x, y)| Point::new(x, y))
    }

    fn arb_triangle() -> impl Strategy<Value = (Point, Point, Point)> {
        (arb_point(), arb_point(), arb_point()).prop_filter("distinct", |(a, b, c)| {
            euclid_dist(*a, *b) > 1e-3 && euclid_dist(*b, *c) > 1e-3 && euclid_dist(*a, *c) > 1e-3
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn connection_cost_symmetric(p in arb_point(), q in arb_point(), wu in 0.1..50.0f64, wv in 0.1..50.0f64) {
            let u = WeightedVertex::terminal(0, p.x, p.y, wu);
            let v = WeightedVertex::terminal(1, q.x, q.y, wv);
            prop_assert_eq!(connection_cost(&u, &v), connection_cost(&v, &u));
            let u1 = WeightedVertex { weight: 1.0, ..u };
            let v1 = WeightedVertex { weight: 1.0, ..v };
            prop_assert_eq!(connection_cost(&u1, &v1), euclid_dist(p, q));
        }

        #[test]
        fn fermat_beats_corners((a, b, c) in arb_triangle()) {
            let f = fermat_point(a, b, c).unwrap().point;
            let sum = |p: Point| euclid_dist(p, a) + euclid_dist(p, b) + euclid_dist(p, c);
            let tol = 1e-12 * sum(f).max(1.0);
            prop_assert!(sum(f) <= sum(a) + tol);
            prop_assert!(sum(f) <= sum(b) + tol);
            prop_assert!(sum(f) <= sum(c) + tol);
        }

        #[test]
        fn fermat_interior_angles_are_120((a, b, c) in arb_triangle()) {
            let r = fermat_point(a, b, c).unwrap();
            prop_assume!(!r.inherent);
            let f = r.point;
            prop_assume!(euclid_dist(f, a).min(euclid_dist(f, b)).min(euclid_dist(f, c)) > 1e-3);
            for (p, q) in [(a, b), (b, c), (a, c)] {
                prop_assert!((angle_at(f, p, q).unwrap() - 120.0).abs() < 1e-6);
            }
        }

        #[test]
        fn segments_cross_symmetric(p in arb_point(), q in arb_point(), r in arb_point(), s in arb_point(), ok in any::<bool>()) {
            let s1 = Segment::new(p, q);
            let s2 = Segment::new(r, s);
            prop_assert_eq!(segments_cross(&s1, &s2, ok), segments_cross(&s2, &s1, ok));
        }

        #[test]
        fn weighted_fermat_descent_is_monotone(
            pts in prop::collection::vec((arb_point(), 0.5..10.0f64), 2..6),
            start in arb_point(),
        ) {
            let mut last = f64::INFINITY;
            let mut ok = true;
            let r = weighted_fermat_point_with(&pts, start, FermatOptions::default(), |_, v| {
                if v > last { ok = false; }
                last = v;
            }).unwrap();
            prop_assert!(ok);
            prop_assert!(r.objective <= weighted_distance_sum(&pts, start));
        }
    }
}
