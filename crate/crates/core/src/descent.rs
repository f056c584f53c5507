//! Length minimisation over the free vertices of a tree with fixed topology.
//!
//! The objective `sum factor_e * |p_u - p_v|` is convex in the free
//! positions. Two monotone moves are alternated:
//!
//! * a joint reweighted step: every edge length is frozen into a quadratic
//!   upper bound and the bound is minimised exactly by eliminating the free
//!   forest leaf-first (no fill-in, linear in the number of free vertices);
//! * a coordinate sweep: each free vertex goes to the weighted Fermat point
//!   of its neighbours, which also snaps vertices onto optimal anchors, and
//!   free vertices that have collided are moved as one cluster.
//!
//! A move is only kept when it does not raise the objective.

use crate::geometry::{
    euclid_dist, weighted_distance_sum, weighted_fermat_point_with, FermatOptions, Point,
};

#[derive(Debug, Clone)]
pub struct Network {
    pub positions: Vec<Point>,
    pub free: Vec<bool>,
    /// `(u, v, factor)` with positive factors.
    pub edges: Vec<(usize, usize, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOptions {
    pub max_rounds: usize,
    /// Stop when a full round lowers the objective by less than this fraction.
    pub relative_tolerance: f64,
    /// A coordinate sweep runs at least every this many rounds.
    pub sweep_every: usize,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            max_rounds: 20_000,
            relative_tolerance: 1e-10,
            sweep_every: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOutcome {
    pub initial_objective: f64,
    pub objective: f64,
    pub rounds: usize,
    pub converged: bool,
}

impl Network {
    pub fn objective(&self) -> f64 {
        objective_at(&self.positions, &self.edges)
    }

    fn scale(&self) -> f64 {
        let mut it = self.positions.iter();
        let Some(&first) = it.next() else { return 1.0 };
        let (mut lo, mut hi) = (first, first);
        for p in it {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let d = euclid_dist(lo, hi);
        if d > 0.0 {
            d
        } else {
            1.0
        }
    }

    fn incident(&self) -> Vec<Vec<(usize, f64)>> {
        let mut inc = vec![Vec::new(); self.positions.len()];
        for &(u, v, f) in &self.edges {
            inc[u].push((v, f));
            inc[v].push((u, f));
        }
        inc
    }

    /// Largest norm, over free vertices, of the objective's gradient.
    /// Zero-length edges are left out.
    pub fn max_gradient_norm(&self) -> f64 {
        let inc = self.incident();
        let mut worst: f64 = 0.0;
        for (i, nbrs) in inc.iter().enumerate() {
            if !self.free[i] {
                continue;
            }
            let mut g = Point::default();
            for &(j, f) in nbrs {
                let d = self.positions[i] - self.positions[j];
                let n = d.norm();
                if n > 0.0 {
                    g = g + d * (f / n);
                }
            }
            worst = worst.max(g.norm());
        }
        worst
    }

    pub fn minimize(&mut self, opts: DescentOptions) -> DescentOutcome {
        self.minimize_observed(opts, |_, _| {})
    }

    /// Runs the descent, reporting `(round, objective)` after every round.
    pub fn minimize_observed(
        &mut self,
        opts: DescentOptions,
        mut observe: impl FnMut(usize, f64),
    ) -> DescentOutcome {
        let initial = self.objective();
        let mut f = initial;
        observe(0, f);
        if !self.free.iter().any(|&b| b) {
            return DescentOutcome {
                initial_objective: initial,
                objective: f,
                rounds: 0,
                converged: true,
            };
        }
        let inc = self.incident();
        let mut converged = false;
        let mut rounds = 0;
        for round in 1..=opts.max_rounds {
            rounds = round;
            let before = f;
            f = self.newton_step(f);
            let mut stalled = before - f <= opts.relative_tolerance * f.abs();
            if stalled {
                f = self.joint_step(f);
                stalled = before - f <= opts.relative_tolerance * f.abs();
            }
            if stalled || round % opts.sweep_every.max(1) == 0 {
                f = self.coordinate_sweep(&inc, f);
                f = self.cluster_moves(&inc, f);
                if before - f <= opts.relative_tolerance * f.abs() {
                    converged = true;
                    observe(round, f);
                    break;
                }
            }
            observe(round, f);
        }
        DescentOutcome {
            initial_objective: initial,
            objective: f,
            rounds,
            converged,
        }
    }

    /// One majorise-minimise step; returns the (possibly unchanged) objective.
    fn joint_step(&mut self, current: f64) -> f64 {
        let n = self.positions.len();
        let floor = 1e-12 * self.scale();
        let mut diag = vec![Sym2::ZERO; n];
        let mut rhs = vec![Point::default(); n];
        let mut links: Vec<Vec<(usize, Sym2)>> = vec![Vec::new(); n];
        for &(u, v, f) in &self.edges {
            let a = f / euclid_dist(self.positions[u], self.positions[v]).max(floor);
            let block = Sym2::scalar(a);
            match (self.free[u], self.free[v]) {
                (true, true) => {
                    diag[u] = diag[u] + block;
                    diag[v] = diag[v] + block;
                    links[u].push((v, block));
                    links[v].push((u, block));
                }
                (true, false) => {
                    diag[u] = diag[u] + block;
                    rhs[u] = rhs[u] + self.positions[v] * a;
                }
                (false, true) => {
                    diag[v] = diag[v] + block;
                    rhs[v] = rhs[v] + self.positions[u] * a;
                }
                (false, false) => {}
            }
        }
        let Some(next) = solve_forest(&self.free, &links, diag, rhs, &self.positions) else {
            return current;
        };
        let candidate = objective_at(&next, &self.edges);
        if candidate <= current {
            self.positions = next;
            candidate
        } else {
            current
        }
    }

    /// Damped Newton step with backtracking. Each edge contributes its exact
    /// Hessian with a small share of the isotropic majoriser mixed in, which
    /// keeps the system positive definite.
    fn newton_step(&mut self, current: f64) -> f64 {
        const MIX: f64 = 1e-3;
        let n = self.positions.len();
        let floor = 1e-9 * self.scale();
        // vertices sitting on another vertex are at a kink of the objective;
        // Newton leaves them to the coordinate and cluster moves
        let mut movable = self.free.clone();
        for &(u, v, _) in &self.edges {
            if euclid_dist(self.positions[u], self.positions[v]) <= floor {
                movable[u] = false;
                movable[v] = false;
            }
        }
        if !movable.iter().any(|&m| m) {
            return current;
        }
        let mut diag = vec![Sym2::ZERO; n];
        let mut grad = vec![Point::default(); n];
        let mut links: Vec<Vec<(usize, Sym2)>> = vec![Vec::new(); n];
        for &(u, v, f) in &self.edges {
            if !(movable[u] || movable[v]) {
                continue;
            }
            let d = self.positions[u] - self.positions[v];
            let len = d.norm();
            let e = d * (1.0 / len);
            grad[u] = grad[u] + e * f;
            grad[v] = grad[v] - e * f;
            let block = Sym2::scalar(f / len) - Sym2::outer(e) * ((1.0 - MIX) * f / len);
            if movable[u] {
                diag[u] = diag[u] + block;
            }
            if movable[v] {
                diag[v] = diag[v] + block;
            }
            if movable[u] && movable[v] {
                links[u].push((v, block));
                links[v].push((u, block));
            }
        }
        let rhs: Vec<Point> = grad.iter().map(|&g| g * -1.0).collect();
        let zero = vec![Point::default(); n];
        let Some(step) = solve_forest(&movable, &links, diag, rhs, &zero) else {
            return current;
        };
        let mut t = 1.0;
        for _ in 0..40 {
            let trial: Vec<Point> = self
                .positions
                .iter()
                .zip(&step)
                .zip(&movable)
                .map(|((&p, &s), &m)| if m { p + s * t } else { p })
                .collect();
            let value = objective_at(&trial, &self.edges);
            if value < current {
                self.positions = trial;
                return value;
            }
            t *= 0.5;
        }
        current
    }

    fn coordinate_sweep(&mut self, inc: &[Vec<(usize, f64)>], current: f64) -> f64 {
        let saved = self.positions.clone();
        let opts = FermatOptions {
            max_iterations: 200,
            tolerance: 1e-13,
        };
        for i in 0..self.positions.len() {
            if !self.free[i] || inc[i].is_empty() {
                continue;
            }
            let nbrs: Vec<(Point, f64)> = inc[i].iter().map(|&(j, f)| (self.positions[j], f)).collect();
            let old_local = weighted_distance_sum(&nbrs, self.positions[i]);
            let Ok(r) = weighted_fermat_point_with(&nbrs, self.positions[i], opts, |_, _| {}) else {
                continue;
            };
            if r.objective < old_local {
                self.positions[i] = r.point;
            }
        }
        // every move lowered its local sum, but rounding in the global sum
        // can still show a last-digit rise
        let f = self.objective();
        if f <= current {
            f
        } else {
            self.positions = saved;
            current
        }
    }

    /// Free vertices joined by (numerically) zero-length edges cannot leave
    /// each other one at a time; move each such cluster as a whole.
    /// Tries a range of proximity radii, since clusters that are still
    /// closing in converge slowly under the other moves.
    fn cluster_moves(&mut self, inc: &[Vec<(usize, f64)>], current: f64) -> f64 {
        let scale = self.scale();
        let mut f = current;
        for radius in [1e-9, 1e-6, 1e-4, 1e-2] {
            f = self.cluster_moves_within(inc, f, radius * scale);
        }
        f
    }

    fn cluster_moves_within(&mut self, inc: &[Vec<(usize, f64)>], current: f64, tiny: f64) -> f64 {
        let n = self.positions.len();
        let mut root: Vec<usize> = (0..n).collect();
        fn find(r: &mut [usize], mut x: usize) -> usize {
            while r[x] != x {
                r[x] = r[r[x]];
                x = r[x];
            }
            x
        }
        let mut any = false;
        for &(u, v, _) in &self.edges {
            if self.free[u] && self.free[v] && euclid_dist(self.positions[u], self.positions[v]) <= tiny {
                let (ru, rv) = (find(&mut root, u), find(&mut root, v));
                if ru != rv {
                    root[ru] = rv;
                    any = true;
                }
            }
        }
        if !any {
            return current;
        }
        let mut clusters: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            if self.free[i] {
                let r = find(&mut root, i);
                clusters.entry(r).or_default().push(i);
            }
        }
        let mut f = current;
        for members in clusters.values().filter(|m| m.len() > 1) {
            let mut nbrs = Vec::new();
            for &m in members {
                for &(j, fac) in &inc[m] {
                    if !members.contains(&j) {
                        nbrs.push((self.positions[j], fac));
                    }
                }
            }
            if nbrs.is_empty() {
                continue;
            }
            let start = members.iter().fold(Point::default(), |acc, &m| acc + self.positions[m]) * (1.0 / members.len() as f64);
            let opts = FermatOptions {
                max_iterations: 1000,
                tolerance: 1e-13,
            };
            let Ok(r) = weighted_fermat_point_with(&nbrs, start, opts, |_, _| {}) else {
                continue;
            };
            let saved: Vec<Point> = members.iter().map(|&m| self.positions[m]).collect();
            for &m in members {
                self.positions[m] = r.point;
            }
            let g = self.objective();
            if g < f {
                f = g;
            } else {
                for (&m, &p) in members.iter().zip(&saved) {
                    self.positions[m] = p;
                }
            }
        }
        f
    }
}

/// Symmetric 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Sym2 {
    xx: f64,
    xy: f64,
    yy: f64,
}

impl Sym2 {
    const ZERO: Sym2 = Sym2 { xx: 0.0, xy: 0.0, yy: 0.0 };

    fn scalar(a: f64) -> Sym2 {
        Sym2 { xx: a, xy: 0.0, yy: a }
    }

    fn outer(e: Point) -> Sym2 {
        Sym2 {
            xx: e.x * e.x,
            xy: e.x * e.y,
            yy: e.y * e.y,
        }
    }

    fn det(self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    fn inverse(self) -> Option<Sym2> {
        let det = self.det();
        let scale = self.xx.abs().max(self.yy.abs());
        if !(det > 1e-300 && det > 1e-24 * scale * scale) {
            return None;
        }
        Some(Sym2 {
            xx: self.yy / det,
            xy: -self.xy / det,
            yy: self.xx / det,
        })
    }

    fn apply(self, p: Point) -> Point {
        Point::new(self.xx * p.x + self.xy * p.y, self.xy * p.x + self.yy * p.y)
    }

    /// `self * m * self` for symmetric `self` and `m`.
    fn sandwich(self, m: Sym2) -> Sym2 {
        let (a, b, c) = (self.xx, self.xy, self.yy);
        let mx = Point::new(m.xx * a + m.xy * b, m.xy * a + m.yy * b);
        let my = Point::new(m.xx * b + m.xy * c, m.xy * b + m.yy * c);
        Sym2 {
            xx: a * mx.x + b * mx.y,
            xy: a * my.x + b * my.y,
            yy: b * my.x + c * my.y,
        }
    }
}

impl std::ops::Add for Sym2 {
    type Output = Sym2;
    fn add(self, o: Sym2) -> Sym2 {
        Sym2 {
            xx: self.xx + o.xx,
            xy: self.xy + o.xy,
            yy: self.yy + o.yy,
        }
    }
}

impl std::ops::Sub for Sym2 {
    type Output = Sym2;
    fn sub(self, o: Sym2) -> Sym2 {
        Sym2 {
            xx: self.xx - o.xx,
            xy: self.xy - o.xy,
            yy: self.yy - o.yy,
        }
    }
}

impl std::ops::Mul<f64> for Sym2 {
    type Output = Sym2;
    fn mul(self, k: f64) -> Sym2 {
        Sym2 {
            xx: self.xx * k,
            xy: self.xy * k,
            yy: self.yy * k,
        }
    }
}

/// Solves `D_i x_i - sum_j L_ij x_j = b_i` over the free vertices, where the
/// coupling `L` follows the free forest in `links`. Eliminates leaves first,
/// so the cost is linear. Fixed vertices keep their entry from `fallback`.
fn solve_forest(
    free: &[bool],
    links: &[Vec<(usize, Sym2)>],
    mut d: Vec<Sym2>,
    mut b: Vec<Point>,
    fallback: &[Point],
) -> Option<Vec<Point>> {
    let n = free.len();
    let mut parent: Vec<Option<(usize, Sym2)>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut order = Vec::new();
    for root in 0..n {
        if !free[root] || visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            for &(w, m) in &links[v] {
                if !visited[w] {
                    visited[w] = true;
                    parent[w] = Some((v, m));
                    stack.push(w);
                }
            }
        }
    }
    let mut inv = vec![Sym2::ZERO; n];
    for &v in order.iter().rev() {
        inv[v] = d[v].inverse()?;
        if let Some((p, m)) = parent[v] {
            d[p] = d[p] - m.sandwich(inv[v]);
            b[p] = b[p] + m.apply(inv[v].apply(b[v]));
        }
    }
    let mut x = fallback.to_vec();
    for &v in &order {
        let mut acc = b[v];
        if let Some((p, m)) = parent[v] {
            acc = acc + m.apply(x[p]);
        }
        x[v] = inv[v].apply(acc);
    }
    x.iter().all(|p| p.is_finite()).then_some(x)
}

fn objective_at(positions: &[Point], edges: &[(usize, usize, f64)]) -> f64 {
    edges
        .iter()
        .map(|&(u, v, f)| f * euclid_dist(positions[u], positions[v]))
        .sum()
}
