//! Sampling-based CAT(kappa) certification and refutation: the
//! triangle-with-side-point comparison test over finite sample windows, and
//! the end-to-end checker combining the hypothesis checks (connectivity,
//! trivial first homology) with the comparison test.

use crate::complex::{SteinerGraph, TriComplex};
use crate::error::{GeomError, Result};
use crate::model::{comparison_triangle, geodesic_point, model_distance, Kappa};
use crate::polygon::{PolygonDomain, VisGraph};
use crate::predicates::Point;
use crate::rng::CounterRng;
use serde::Serialize;

/// A finite window onto an intrinsic metric space: sample points with a
/// distance oracle and (usually) a geodesic oracle.
pub trait SampledSpace {
    fn len(&self) -> usize;
    fn dist(&self, i: usize, j: usize) -> f64;
    fn has_geodesics(&self) -> bool {
        true
    }
    /// Distance from sample `a` to the point at parameter `t` of a geodesic
    /// from sample `b` to sample `c`.
    fn dist_to_geo(&self, a: usize, b: usize, c: usize, t: f64) -> Result<f64>;
    /// Smallest violation margin this oracle can certify (0 for exact).
    fn margin_floor(&self) -> f64 {
        0.0
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Witness {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub t: f64,
    /// dist(a, m) minus the comparison bound; positive means thicker.
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub pass: bool,
    pub trials: usize,
    pub skipped_perimeter: usize,
    pub tol: f64,
    pub margin_floor: f64,
    /// Worst violating triples, at most ten, sorted by decreasing margin.
    pub witnesses: Vec<Witness>,
}

const SIDE_PARAMS: [f64; 3] = [0.25, 0.5, 0.75];

fn check_triple<S: SampledSpace + ?Sized>(
    space: &S,
    kappa: &Kappa,
    a: usize,
    b: usize,
    c: usize,
    tol: f64,
    floor: f64,
    skipped: &mut usize,
    witnesses: &mut Vec<Witness>,
) -> Result<()> {
    let (dab, dac, dbc) = (space.dist(a, b), space.dist(a, c), space.dist(b, c));
    if !(dab.is_finite() && dac.is_finite() && dbc.is_finite()) {
        return Ok(());
    }
    if dab <= 0.0 || dac <= 0.0 || dbc <= 0.0 {
        return Ok(());
    }
    let limit = kappa.d_kappa();
    if limit.is_finite() && dab + dac + dbc >= 2.0 * limit {
        *skipped += 1;
        return Ok(());
    }
    // Comparison triangle: side a joins corners 0-1, side b joins 0-2,
    // side c joins 1-2; put the tested vertex at corner 0.
    let Ok((va, vb, vc)) = comparison_triangle(kappa, dab, dac, dbc) else {
        *skipped += 1;
        return Ok(());
    };
    for t in SIDE_PARAMS {
        let dm = space.dist_to_geo(a, b, c, t)?;
        let mt = geodesic_point(kappa, &vb, &vc, t)?;
        let bound = model_distance(kappa, &va, &mt)?;
        let margin = dm - bound - tol;
        if margin > 0.0 && margin > floor {
            witnesses.push(Witness {
                a,
                b,
                c,
                t,
                margin,
            });
        }
    }
    Ok(())
}

fn finish_report(
    mut witnesses: Vec<Witness>,
    trials: usize,
    skipped: usize,
    tol: f64,
    floor: f64,
) -> ComparisonReport {
    witnesses.sort_by(|x, y| {
        y.margin
            .partial_cmp(&x.margin)
            .unwrap()
            .then_with(|| (x.a, x.b, x.c).cmp(&(y.a, y.b, y.c)))
    });
    let pass = witnesses.is_empty();
    witnesses.truncate(10);
    ComparisonReport {
        pass,
        trials,
        skipped_perimeter: skipped,
        tol,
        margin_floor: floor,
        witnesses,
    }
}

/// Random-triple comparison test at three side parameters per triple.
pub fn triangle_comparison_test<S: SampledSpace + ?Sized>(
    space: &S,
    kappa: &Kappa,
    trials: usize,
    tol: f64,
    rng: &mut CounterRng,
) -> Result<ComparisonReport> {
    if !space.has_geodesics() {
        return Err(GeomError::NeedsGeodesics);
    }
    let n = space.len();
    if n < 3 {
        return Err(GeomError::Precondition("need at least 3 samples".into()));
    }
    let floor = space.margin_floor();
    let mut witnesses = Vec::new();
    let mut skipped = 0usize;
    for _ in 0..trials {
        let a = rng.next_below(n);
        let b = rng.next_below(n);
        let c = rng.next_below(n);
        if a == b || a == c || b == c {
            continue;
        }
        check_triple(space, kappa, a, b, c, tol, floor, &mut skipped, &mut witnesses)?;
    }
    Ok(finish_report(witnesses, trials, skipped, tol, floor))
}

/// Exhaustive comparison search over all sample triples (small windows).
pub fn exhaustive_comparison_search<S: SampledSpace + ?Sized>(
    space: &S,
    kappa: &Kappa,
    tol: f64,
) -> Result<ComparisonReport> {
    if !space.has_geodesics() {
        return Err(GeomError::NeedsGeodesics);
    }
    let n = space.len();
    let floor = space.margin_floor();
    let mut witnesses = Vec::new();
    let mut skipped = 0usize;
    let mut trials = 0usize;
    for a in 0..n {
        for b in 0..n {
            for c in (b + 1)..n {
                if a == b || a == c {
                    continue;
                }
                trials += 1;
                check_triple(space, kappa, a, b, c, tol, floor, &mut skipped, &mut witnesses)?;
            }
        }
    }
    Ok(finish_report(witnesses, trials, skipped, tol, floor))
}

/// Exact intrinsic window onto a planar polygon domain: samples are the
/// domain vertices plus a strictly interior grid; distances come from the
/// visibility graph.
pub struct PlanarSpace<'a> {
    domain: &'a PolygonDomain,
    samples: Vec<Point>,
    graph: VisGraph<'a>,
    nodes: Vec<usize>,
    dists: Vec<Vec<f64>>,
    preds: Vec<Vec<usize>>,
}

impl<'a> PlanarSpace<'a> {
    pub fn new(domain: &'a PolygonDomain, grid: usize) -> Result<Self> {
        let mut samples: Vec<Point> = domain.vertices().collect();
        if grid > 0 {
            let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
            for v in domain.vertices() {
                x0 = x0.min(v.x);
                y0 = y0.min(v.y);
                x1 = x1.max(v.x);
                y1 = y1.max(v.y);
            }
            for i in 1..grid {
                for j in 1..grid {
                    let p = Point::new(
                        x0 + (x1 - x0) * i as f64 / grid as f64,
                        y0 + (y1 - y0) * j as f64 / grid as f64,
                    );
                    if domain.locate(p) == crate::polygon::Location::Inside
                        && !samples.contains(&p)
                    {
                        samples.push(p);
                    }
                }
            }
        }
        let graph = VisGraph::new(domain, &samples);
        let nodes: Vec<usize> = samples
            .iter()
            .map(|p| graph.node_index(*p).expect("sample is a graph node"))
            .collect();
        let mut dists = Vec::with_capacity(samples.len());
        let mut preds = Vec::with_capacity(samples.len());
        for &nd in &nodes {
            let (d, p) = graph.distances_from(nd);
            dists.push(d);
            preds.push(p);
        }
        Ok(PlanarSpace {
            domain,
            samples,
            graph,
            nodes,
            dists,
            preds,
        })
    }

    pub fn samples(&self) -> &[Point] {
        &self.samples
    }

    pub fn domain(&self) -> &PolygonDomain {
        self.domain
    }

    /// Geodesic polyline between two samples.
    fn path(&self, b: usize, c: usize) -> Vec<Point> {
        let all = self.graph.nodes();
        let mut rev = vec![self.nodes[c]];
        let mut cur = self.nodes[c];
        while cur != self.nodes[b] {
            cur = self.preds[b][cur];
            rev.push(cur);
        }
        rev.into_iter().rev().map(|i| all[i]).collect()
    }

    pub fn connected(&self) -> bool {
        self.dists
            .iter()
            .all(|row| self.nodes.iter().all(|&n| row[n].is_finite()))
    }

    /// Distance from a point to the nearest boundary segment.
    fn boundary_gap(&self, m: Point) -> f64 {
        let mut best = f64::INFINITY;
        let rings =
            std::iter::once(self.domain.outer()).chain(self.domain.holes().iter().map(|h| &h[..]));
        for ring in rings {
            let n = ring.len();
            for i in 0..n {
                let (u, v) = (ring[i], ring[(i + 1) % n]);
                let (ex, ey) = (v.x - u.x, v.y - u.y);
                let l2 = ex * ex + ey * ey;
                let t = (((m.x - u.x) * ex + (m.y - u.y) * ey) / l2).clamp(0.0, 1.0);
                best = best.min(m.dist(&u.lerp(&v, t)));
            }
        }
        best
    }

    /// Geodesics slide along boundary edges, so an interpolated geodesic
    /// point can land exactly on (or a rounding residue outside) the
    /// boundary, where visibility queries degrade. Nudge such points
    /// strictly inside; the shift stays well below the comparison tolerance.
    fn snap_inside(&self, m: Point) -> Result<Point> {
        if self.domain.locate(m) == crate::polygon::Location::Inside
            && self.boundary_gap(m) > 1e-11
        {
            return Ok(m);
        }
        for eps in [1e-12, 1e-11, 1e-10] {
            for (dx, dy) in [
                (1.0, 0.0),
                (-1.0, 0.0),
                (0.0, 1.0),
                (0.0, -1.0),
                (1.0, 1.0),
                (1.0, -1.0),
                (-1.0, 1.0),
                (-1.0, -1.0),
            ] {
                let p = Point::new(m.x + eps * dx, m.y + eps * dy);
                if self.domain.locate(p) == crate::polygon::Location::Inside
                    && self.boundary_gap(p) > 0.0
                {
                    return Ok(p);
                }
            }
        }
        Err(GeomError::OutOfDomain(m.x, m.y))
    }
}

impl SampledSpace for PlanarSpace<'_> {
    fn len(&self) -> usize {
        self.samples.len()
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        self.dists[i][self.nodes[j]]
    }

    fn dist_to_geo(&self, a: usize, b: usize, c: usize, t: f64) -> Result<f64> {
        let path = self.path(b, c);
        let total = self.dist(b, c);
        let m = point_along(&path, t * total);
        // When the geodesic hugs a boundary edge, the interpolated point can
        // fall on the outer side of the exact edge by a rounding residue;
        // snap it back with a sub-tolerance nudge before querying.
        let m = self.snap_inside(m)?;
        Ok(self.graph.query(self.samples[a], m)?.0)
    }
}

fn point_along(path: &[Point], target: f64) -> Point {
    let mut acc = 0.0;
    for w in path.windows(2) {
        let seg = w[0].dist(&w[1]);
        if acc + seg >= target && seg > 0.0 {
            return w[0].lerp(&w[1], (target - acc) / seg);
        }
        acc += seg;
    }
    *path.last().unwrap()
}

/// Approximate window onto a triangle complex: samples are the complex
/// vertices, distances come from a Steiner graph at resolution h. Witnesses
/// below margin 4h are not accepted.
pub struct ComplexSpace<'a> {
    _graph: SteinerGraph<'a>,
    sample_nodes: Vec<usize>,
    h: f64,
    dists: Vec<Vec<f64>>,
    preds: Vec<Vec<usize>>,
}

impl<'a> ComplexSpace<'a> {
    pub fn new(complex: &'a TriComplex, h: f64) -> Result<Self> {
        let graph = SteinerGraph::new(complex, h)?;
        let sample_nodes: Vec<usize> = graph
            .sites()
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, crate::complex::SteinerSite::Vertex(_)))
            .map(|(i, _)| i)
            .collect();
        let mut dists = Vec::with_capacity(sample_nodes.len());
        let mut preds = Vec::with_capacity(sample_nodes.len());
        for &nd in &sample_nodes {
            let (d, p) = graph.distances_from(nd);
            dists.push(d);
            preds.push(p);
        }
        Ok(ComplexSpace {
            _graph: graph,
            sample_nodes,
            h,
            dists,
            preds,
        })
    }

    pub fn connected(&self) -> bool {
        self.dists
            .iter()
            .all(|row| self.sample_nodes.iter().all(|&n| row[n].is_finite()))
    }
}

impl SampledSpace for ComplexSpace<'_> {
    fn len(&self) -> usize {
        self.sample_nodes.len()
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        self.dists[i][self.sample_nodes[j]]
    }

    fn dist_to_geo(&self, a: usize, b: usize, c: usize, t: f64) -> Result<f64> {
        // Walk the graph path from b to c and stop at the node nearest to
        // parameter t; the discretization error is folded into margin_floor.
        let target = t * self.dist(b, c);
        let mut cur = self.sample_nodes[c];
        let src = self.sample_nodes[b];
        let mut rev = vec![cur];
        while cur != src {
            cur = self.preds[b][cur];
            rev.push(cur);
        }
        rev.reverse();
        let mut m = src;
        for &node in &rev {
            if self.dists[b][node] <= target {
                m = node;
            } else {
                break;
            }
        }
        Ok(self.dists[a][m])
    }

    fn margin_floor(&self) -> f64 {
        4.0 * self.h
    }
}

/// Matrix-only window: no geodesic oracle.
pub struct MetricSpaceWindow<'a>(pub &'a crate::fillrad::FiniteMetric);

impl SampledSpace for MetricSpaceWindow<'_> {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        self.0.dist(i, j)
    }

    fn has_geodesics(&self) -> bool {
        false
    }

    fn dist_to_geo(&self, _: usize, _: usize, _: usize, _: f64) -> Result<f64> {
        Err(GeomError::NeedsGeodesics)
    }
}

/// Closed spherical cap of radius r in (pi/2, pi) on the unit sphere with
/// its intrinsic metric. Geodesics either follow great-circle arcs or wrap
/// around the excluded polar disc of radius rho0 = pi - r.
pub struct SphericalCap {
    radius: f64,
    rho0: f64,
    samples: Vec<[f64; 3]>,
}

const SOUTH: [f64; 3] = [0.0, 0.0, -1.0];

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn normalize(a: [f64; 3]) -> [f64; 3] {
    let n = norm(a);
    [a[0] / n, a[1] / n, a[2] / n]
}

fn angle(a: [f64; 3], b: [f64; 3]) -> f64 {
    dot(a, b).clamp(-1.0, 1.0).acos()
}

fn slerp(a: [f64; 3], b: [f64; 3], t: f64) -> [f64; 3] {
    let omega = angle(a, b);
    if omega < 1e-15 {
        return a;
    }
    let (sa, sb) = (((1.0 - t) * omega).sin(), (t * omega).sin());
    let s = omega.sin();
    normalize([
        (sa * a[0] + sb * b[0]) / s,
        (sa * a[1] + sb * b[1]) / s,
        (sa * a[2] + sb * b[2]) / s,
    ])
}

impl SphericalCap {
    /// Cap with `n` samples on its boundary circle.
    pub fn new(radius: f64, n: usize) -> Result<Self> {
        if !(std::f64::consts::FRAC_PI_2 < radius && radius < std::f64::consts::PI) {
            return Err(GeomError::BadInput(format!(
                "cap radius {radius} outside (pi/2, pi)"
            )));
        }
        let rho0 = std::f64::consts::PI - radius;
        let samples = (0..n)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                Self::from_polar(rho0, phi)
            })
            .collect();
        Ok(SphericalCap {
            radius,
            rho0,
            samples,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Point at colatitude theta from the south pole, azimuth phi.
    fn from_polar(theta: f64, phi: f64) -> [f64; 3] {
        [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            -theta.cos(),
        ]
    }

    fn azimuth(p: [f64; 3]) -> f64 {
        p[1].atan2(p[0])
    }

    /// Whether the minor great-circle arc from x to y enters the open
    /// excluded disc.
    fn arc_blocked(&self, x: [f64; 3], y: [f64; 3]) -> bool {
        let n = cross(x, y);
        if norm(n) < 1e-14 {
            return false;
        }
        let n = normalize(n);
        // Closest point of the full great circle to the south pole.
        let proj = [
            SOUTH[0] - dot(SOUTH, n) * n[0],
            SOUTH[1] - dot(SOUTH, n) * n[1],
            SOUTH[2] - dot(SOUTH, n) * n[2],
        ];
        if norm(proj) < 1e-14 {
            return true;
        }
        let foot = normalize(proj);
        let on_arc = (angle(x, foot) + angle(foot, y) - angle(x, y)).abs() <= 1e-9;
        on_arc && angle(foot, SOUTH) < self.rho0 - 1e-12
    }

    /// Wrap-path data: tangent lengths, azimuthal wrap angle, orientation.
    fn wrap_data(&self, x: [f64; 3], y: [f64; 3]) -> (f64, f64, f64, f64, f64) {
        let (dx, dy) = (angle(x, SOUTH), angle(y, SOUTH));
        let c0 = self.rho0.cos();
        let tx = (dx.cos() / c0).clamp(-1.0, 1.0).acos();
        let ty = (dy.cos() / c0).clamp(-1.0, 1.0).acos();
        let ax = if dx.sin() > 1e-15 {
            (tx.sin() / dx.sin()).clamp(-1.0, 1.0).asin()
        } else {
            0.0
        };
        let ay = if dy.sin() > 1e-15 {
            (ty.sin() / dy.sin()).clamp(-1.0, 1.0).asin()
        } else {
            0.0
        };
        let mut dphi = Self::azimuth(y) - Self::azimuth(x);
        while dphi > std::f64::consts::PI {
            dphi -= 2.0 * std::f64::consts::PI;
        }
        while dphi < -std::f64::consts::PI {
            dphi += 2.0 * std::f64::consts::PI;
        }
        let beta = dphi.abs() - ax - ay;
        (tx, ty, ax, ay, beta.max(0.0) * dphi.signum())
    }

    /// Intrinsic distance between two points of the closed cap.
    pub fn intrinsic_distance(&self, x: [f64; 3], y: [f64; 3]) -> f64 {
        if !self.arc_blocked(x, y) {
            return angle(x, y);
        }
        let (tx, ty, _, _, beta) = self.wrap_data(x, y);
        tx + ty + beta.abs() * self.rho0.sin()
    }

    /// Point at arclength fraction t of the intrinsic geodesic from x to y.
    pub fn geodesic(&self, x: [f64; 3], y: [f64; 3], t: f64) -> [f64; 3] {
        if !self.arc_blocked(x, y) {
            return slerp(x, y, t);
        }
        let (tx, ty, ax, ay, beta) = self.wrap_data(x, y);
        let sign = if beta >= 0.0 { 1.0 } else { -1.0 };
        let wrap_len = beta.abs() * self.rho0.sin();
        let total = tx + ty + wrap_len;
        let s = t * total;
        let phi_tx = Self::azimuth(x) + sign * ax;
        let phi_ty = Self::azimuth(y) - sign * ay;
        let t_x = Self::from_polar(self.rho0, phi_tx);
        let t_y = Self::from_polar(self.rho0, phi_ty);
        if s <= tx && tx > 1e-15 {
            slerp(x, t_x, s / tx)
        } else if s <= tx + wrap_len && wrap_len > 1e-15 {
            let frac = (s - tx) / wrap_len;
            Self::from_polar(self.rho0, phi_tx + sign * beta.abs() * frac)
        } else if ty > 1e-15 {
            slerp(t_y, y, (s - tx - wrap_len) / ty)
        } else {
            y
        }
    }
}

impl SampledSpace for SphericalCap {
    fn len(&self) -> usize {
        self.samples.len()
    }

    fn dist(&self, i: usize, j: usize) -> f64 {
        self.intrinsic_distance(self.samples[i], self.samples[j])
    }

    fn dist_to_geo(&self, a: usize, b: usize, c: usize, t: f64) -> Result<f64> {
        let m = self.geodesic(self.samples[b], self.samples[c], t);
        Ok(self.intrinsic_distance(self.samples[a], m))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Consistent,
    Violation,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub verdict: Verdict,
    pub connectivity_ok: bool,
    pub h1_trivial: bool,
    pub comparison: ComparisonReport,
    pub seed: u64,
    pub trials: usize,
    pub samples: usize,
    pub tol: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyBudget {
    pub trials: usize,
    pub grid: usize,
    pub tol: f64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        VerifyBudget {
            trials: 10_000,
            grid: 8,
            tol: 1e-9,
        }
    }
}

pub enum SceneRef<'a> {
    Planar(&'a PolygonDomain),
    Complex(&'a TriComplex),
}

fn verdict_of(connectivity_ok: bool, h1_trivial: bool, comparison: &ComparisonReport) -> Verdict {
    if !comparison.pass {
        Verdict::Violation
    } else if connectivity_ok && h1_trivial {
        Verdict::Consistent
    } else {
        Verdict::Inconclusive
    }
}

/// End-to-end check: hypothesis checks plus the comparison test. Report
/// only; VIOLATION carries re-verified witnesses.
pub fn verify_theorem_1_1(
    scene: &SceneRef<'_>,
    kappa: &Kappa,
    budget: &VerifyBudget,
    seed: u64,
) -> Result<TheoremReport> {
    let mut rng = CounterRng::new(seed).stream("verify-theorem-1-1");
    let (connectivity_ok, h1_trivial, comparison, samples) = match scene {
        SceneRef::Planar(domain) => {
            let space = PlanarSpace::new(domain, budget.grid)?;
            let comparison =
                triangle_comparison_test(&space, kappa, budget.trials, budget.tol, &mut rng)?;
            (
                space.connected(),
                domain.holes().is_empty(),
                comparison,
                space.len(),
            )
        }
        SceneRef::Complex(complex) => {
            let h = max_edge(complex) / budget.grid.max(2) as f64;
            let space = ComplexSpace::new(complex, h)?;
            let comparison =
                triangle_comparison_test(&space, kappa, budget.trials, budget.tol, &mut rng)?;
            (
                space.connected() && crate::homology::component_count(complex) == 1,
                crate::homology::h1_is_trivial(complex),
                comparison,
                space.len(),
            )
        }
    };
    Ok(TheoremReport {
        verdict: verdict_of(connectivity_ok, h1_trivial, &comparison),
        connectivity_ok,
        h1_trivial,
        comparison,
        seed,
        trials: budget.trials,
        samples,
        tol: budget.tol,
    })
}

fn max_edge(c: &TriComplex) -> f64 {
    (0..c.edges().len())
        .map(|e| c.edge_length(e))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn annulus() -> PolygonDomain {
        PolygonDomain::new(
            vec![pt(0.0, 0.0), pt(3.0, 0.0), pt(3.0, 3.0), pt(0.0, 3.0)],
            vec![vec![pt(1.0, 1.0), pt(2.0, 1.0), pt(2.0, 2.0), pt(1.0, 2.0)]],
        )
        .unwrap()
    }

    #[test]
    fn convex_polygon_passes() {
        let domain = PolygonDomain::from_ring(vec![
            pt(0.0, 0.0),
            pt(2.0, 0.0),
            pt(3.0, 1.5),
            pt(1.0, 3.0),
            pt(-0.5, 1.0),
        ])
        .unwrap();
        let space = PlanarSpace::new(&domain, 5).unwrap();
        let mut rng = CounterRng::new(42).stream("convex");
        let rep =
            triangle_comparison_test(&space, &Kappa::flat(), 2000, 1e-9, &mut rng).unwrap();
        assert!(rep.pass, "witnesses: {:?}", rep.witnesses);
    }

    #[test]
    fn annulus_violates_cat0() {
        let domain = annulus();
        let space = PlanarSpace::new(&domain, 0).unwrap();
        let rep = exhaustive_comparison_search(&space, &Kappa::flat(), 1e-9).unwrap();
        assert!(!rep.pass);
        assert!(rep.witnesses[0].margin > 1e-6);
    }

    #[test]
    fn annulus_report_is_violation() {
        let domain = annulus();
        let budget = VerifyBudget {
            trials: 4000,
            grid: 6,
            tol: 1e-9,
        };
        let rep =
            verify_theorem_1_1(&SceneRef::Planar(&domain), &Kappa::flat(), &budget, 3).unwrap();
        assert_eq!(rep.verdict, Verdict::Violation);
        assert!(!rep.h1_trivial);
    }

    #[test]
    fn jordan_domain_report_is_consistent() {
        let domain = PolygonDomain::from_ring(vec![
            pt(0.0, 0.0),
            pt(2.0, 0.0),
            pt(2.0, 1.0),
            pt(1.0, 1.0),
            pt(1.0, 2.0),
            pt(0.0, 2.0),
        ])
        .unwrap();
        let budget = VerifyBudget {
            trials: 3000,
            grid: 6,
            tol: 1e-9,
        };
        let rep =
            verify_theorem_1_1(&SceneRef::Planar(&domain), &Kappa::flat(), &budget, 5).unwrap();
        assert_eq!(rep.verdict, Verdict::Consistent);
    }

    #[test]
    fn cap_distance_and_geodesics() {
        let cap = SphericalCap::new(2.0, 12).unwrap();
        let rho0 = PI - 2.0;
        // Boundary-circle samples: wrap distance is azimuth * sin(rho0).
        let d01 = cap.dist(0, 1);
        assert!((d01 - (2.0 * PI / 12.0) * rho0.sin()).abs() < 1e-12);
        // Geodesic midpoint stays on the boundary circle.
        let m = cap.geodesic(cap.samples[0], cap.samples[2], 0.5);
        assert!((angle(m, SOUTH) - rho0).abs() < 1e-9);
        // A north-pole route is a plain great-circle arc.
        let np = [0.0f64, 0.0, 1.0];
        let x = SphericalCap::from_polar(2.5, 0.0);
        assert!((cap.intrinsic_distance(x, np) - angle(x, np)).abs() < 1e-12);
    }

    #[test]
    fn spherical_cap_violates_cat1() {
        let cap = SphericalCap::new(2.0, 24).unwrap();
        let rep = exhaustive_comparison_search(&cap, &Kappa::new(1.0), 1e-9).unwrap();
        assert!(!rep.pass);
        // The equilateral wrap triangle has margin well above half.
        assert!(rep.witnesses[0].margin > 0.5, "{:?}", rep.witnesses[0]);
    }

    #[test]
    fn slit_grid_subcomplex_consistent() {
        // 4x4 grid with a slit: remove the four triangles flanking the
        // interior edge column between (2,1)-(2,2) ... keep a disc.
        let full = crate::complex::grid_complex(4, 4);
        let removed = [2usize, 3, 10, 11]; // cells (1,0) and (1,1): a notch to the boundary
        let keep: Vec<crate::complex::Triangle> = full
            .triangles()
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, t)| t.clone())
            .collect();
        // Removing two vertically adjacent cells leaves a disc with a slot.
        let sub = TriComplex::new(Kappa::flat(), keep).unwrap();
        assert!(crate::homology::h1_is_trivial(&sub));
        let budget = VerifyBudget {
            trials: 1500,
            grid: 4,
            tol: 1e-9,
        };
        let rep =
            verify_theorem_1_1(&SceneRef::Complex(&sub), &Kappa::flat(), &budget, 9).unwrap();
        assert_eq!(rep.verdict, Verdict::Consistent, "{:?}", rep.comparison.witnesses);
    }

    #[test]
    fn matrix_window_needs_geodesics() {
        let m = crate::fillrad::FiniteMetric::circle(6, 6.0);
        let w = MetricSpaceWindow(&m);
        let mut rng = CounterRng::new(1).stream("matrix");
        assert!(matches!(
            triangle_comparison_test(&w, &Kappa::flat(), 10, 1e-9, &mut rng),
            Err(GeomError::NeedsGeodesics)
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let domain = annulus();
        let budget = VerifyBudget {
            trials: 2000,
            grid: 5,
            tol: 1e-9,
        };
        let r1 =
            verify_theorem_1_1(&SceneRef::Planar(&domain), &Kappa::flat(), &budget, 17).unwrap();
        let r2 =
            verify_theorem_1_1(&SceneRef::Planar(&domain), &Kappa::flat(), &budget, 17).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
    }

    #[test]
    fn tightening_tol_keeps_violation() {
        let domain = annulus();
        let space = PlanarSpace::new(&domain, 0).unwrap();
        for tol in [1e-6, 1e-9, 1e-12] {
            let rep = exhaustive_comparison_search(&space, &Kappa::flat(), tol).unwrap();
            assert!(!rep.pass, "tol {tol}");
        }
    }
}
