//! Jordan-curve cutting: cuts, delta-essential 2-fold cuts (non-degenerate
//! and degenerate branches) and the iterated-cut driver producing trees of
//! curves with small diameter.
//!
//! Planar scenes only: a curve is a simple polygon, its interior the bounded
//! Jordan domain, and cuts are straight chords (geodesics of the closed
//! interior whose interior avoids the curve). Curves on complexes are handled
//! only through `interior_on_complex`, which reduces to the homological
//! support of the cycle.
//!
//! Exactness note: chords between two polygon vertices are validated with the
//! exact planar predicates; chords through sampled boundary points cannot be
//! exactly collinear with their edges in floating point, so they are validated
//! on a slightly shrunk segment together with an endpoint-to-boundary
//! proximity bound. All certified quantities (piece lengths, areas,
//! delta_achieved) are measured on the actual rings produced.

use crate::error::{GeomError, Result};
use crate::polygon::{polyline_length, PolygonDomain, VisGraph};
use crate::predicates::{point_segment_distance, segment_intersect, Point, SegCross};
use std::f64::consts::PI;

/// Endpoint/boundary matching tolerance for sampled (non-vertex) chords.
const BOUNDARY_TOL: f64 = 1e-9;

/// A simple closed polygonal curve with cached arclength data.
#[derive(Clone, Debug)]
pub struct JordanPolygon {
    domain: PolygonDomain,
    /// cum[i] = arclength of vertex i from vertex 0; cum[n] = total length.
    cum: Vec<f64>,
    length: f64,
    diameter: f64,
}

/// A cut: a chord between two boundary points, stored with their arclength
/// parameters (s1 < s2).
#[derive(Clone, Debug, serde::Serialize)]
pub struct Cut {
    pub s1: f64,
    pub s2: f64,
    pub a: Point,
    pub b: Point,
    pub length: f64,
}

/// Search resolution for chord scans.
#[derive(Clone, Copy, Debug)]
pub struct SearchParams {
    pub boundary_samples: usize,
    pub directions: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            boundary_samples: 64,
            directions: 180,
        }
    }
}

impl SearchParams {
    /// Density rule tied to a target diameter: spacing about eps/8.
    pub fn for_epsilon(length: f64, eps: f64) -> Self {
        SearchParams {
            boundary_samples: 64usize.max((length / (eps / 8.0)).ceil() as usize),
            directions: 180,
        }
    }
}

impl JordanPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let domain = PolygonDomain::from_ring(vertices)?;
        let verts = domain.outer();
        let n = verts.len();
        let mut cum = Vec::with_capacity(n + 1);
        let mut s = 0.0;
        for i in 0..n {
            cum.push(s);
            s += verts[i].dist(&verts[(i + 1) % n]);
        }
        cum.push(s);
        let mut diameter = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                diameter = diameter.max(verts[i].dist(&verts[j]));
            }
        }
        Ok(JordanPolygon {
            domain,
            cum,
            length: s,
            diameter,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        self.domain.outer()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Extrinsic diameter (attained at vertices for a polygon).
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// The closed Jordan interior.
    pub fn interior(&self) -> &PolygonDomain {
        &self.domain
    }

    pub fn vertex_param(&self, i: usize) -> f64 {
        self.cum[i]
    }

    /// Point at arclength parameter `s` (taken mod the total length).
    pub fn point_at(&self, s: f64) -> Point {
        let verts = self.vertices();
        let n = verts.len();
        let s = s.rem_euclid(self.length);
        // Snap to vertices to keep their exact coordinates.
        for k in 0..n {
            if (s - self.cum[k]).abs() <= 1e-12 {
                return verts[k];
            }
        }
        if (s - self.length).abs() <= 1e-12 {
            return verts[0];
        }
        let i = match self
            .cum
            .binary_search_by(|c| c.partial_cmp(&s).unwrap())
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let i = i.min(n - 1);
        let t = (s - self.cum[i]) / (self.cum[i + 1] - self.cum[i]);
        verts[i].lerp(&verts[(i + 1) % n], t)
    }

    /// Arclength parameter of a point lying on (or within `BOUNDARY_TOL` of)
    /// the curve.
    pub fn param_of_point(&self, p: Point) -> Option<f64> {
        let verts = self.vertices();
        let n = verts.len();
        let mut best: Option<(f64, f64)> = None; // (distance, param)
        for i in 0..n {
            let (a, b) = (verts[i], verts[(i + 1) % n]);
            let d = point_segment_distance(p, a, b);
            if d <= BOUNDARY_TOL {
                let t = if (b.x - a.x).abs() >= (b.y - a.y).abs() {
                    ((p.x - a.x) / (b.x - a.x)).clamp(0.0, 1.0)
                } else {
                    ((p.y - a.y) / (b.y - a.y)).clamp(0.0, 1.0)
                };
                let s = self.cum[i] + t * (self.cum[i + 1] - self.cum[i]);
                if best.map_or(true, |(bd, _)| d < bd) {
                    best = Some((d, s));
                }
            }
        }
        best.map(|(_, s)| s)
    }

    /// Evenly spaced boundary samples merged with the vertices, in cyclic
    /// order. Returns (param, point on boundary, nudged strictly-inside copy).
    pub fn boundary_samples(&self, count: usize) -> Vec<BoundarySample> {
        let mut params: Vec<f64> = (0..count)
            .map(|k| k as f64 * self.length / count as f64)
            .collect();
        params.extend(self.cum[..self.vertices().len()].iter().copied());
        params.sort_by(|a, b| a.partial_cmp(b).unwrap());
        params.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        let mut out = Vec::with_capacity(params.len());
        for s in params {
            let p = self.point_at(s);
            if out
                .iter()
                .any(|x: &BoundarySample| x.point == p)
            {
                continue;
            }
            out.push(BoundarySample {
                param: s,
                point: p,
                inside: self.nudge_inside(s, p),
            });
        }
        out
    }

    /// Copy of a boundary point pushed slightly into the open interior, so
    /// that exact predicates treat it as an interior point.
    fn nudge_inside(&self, s: f64, p: Point) -> Point {
        let verts = self.vertices();
        let n = verts.len();
        let i = match self.cum.binary_search_by(|c| c.partial_cmp(&s).unwrap()) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        };
        // Inner normal of a CCW ring edge points left of its direction.
        let edge_normal = |k: usize| -> (f64, f64) {
            let (a, b) = (verts[k % n], verts[(k + 1) % n]);
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let l = dx.hypot(dy);
            (-dy / l, dx / l)
        };
        // At a vertex, average the two adjacent inner normals.
        let (nx, ny) = if (s - self.cum[i]).abs() <= 1e-12 {
            let (ax, ay) = edge_normal((i + n - 1) % n);
            let (bx, by) = edge_normal(i % n);
            let (mx, my) = (ax + bx, ay + by);
            let l = mx.hypot(my).max(1e-30);
            (mx / l, my / l)
        } else {
            edge_normal(i.min(n - 1))
        };
        for eps in [1e-12, 1e-10, 1e-8, 1e-6] {
            let q = Point::new(p.x + eps * nx, p.y + eps * ny);
            if self.domain.contains(q) {
                return q;
            }
        }
        p
    }

    /// Whether [a, b] is acceptable cut geometry: exact chord test when both
    /// ends are vertices, shrunk-segment test otherwise.
    pub fn chord_ok(&self, a: Point, b: Point) -> bool {
        if a == b {
            return false;
        }
        let verts = self.vertices();
        if verts.contains(&a) && verts.contains(&b) {
            return self.domain.segment_is_chord(a, b);
        }
        let len = a.dist(&b);
        if len <= 10.0 * BOUNDARY_TOL {
            return false;
        }
        if self.domain.distance_to_boundary(a) > BOUNDARY_TOL
            || self.domain.distance_to_boundary(b) > BOUNDARY_TOL
        {
            return false;
        }
        let mu = BOUNDARY_TOL.max(1e-12 * len) / len;
        let a2 = a.lerp(&b, mu);
        let b2 = a.lerp(&b, 1.0 - mu);
        if !self.domain.contains(a2) || !self.domain.contains(b2) {
            return false;
        }
        for (c, d) in self.domain.edges() {
            match segment_intersect(a2, b2, c, d) {
                SegCross::Proper => return false,
                SegCross::Touch => {
                    // Tangency in the chord interior disqualifies it.
                    if point_segment_distance(c, a2, b2).min(point_segment_distance(d, a2, b2))
                        > BOUNDARY_TOL
                        || c.dist(&a).min(c.dist(&b)) <= 10.0 * BOUNDARY_TOL
                        || d.dist(&a).min(d.dist(&b)) <= 10.0 * BOUNDARY_TOL
                    {
                        // Touch near an endpoint is fine; anything else is not.
                        let near_end = |p: Point| {
                            p.dist(&a) <= 10.0 * BOUNDARY_TOL || p.dist(&b) <= 10.0 * BOUNDARY_TOL
                        };
                        let on_chord = |p: Point| point_segment_distance(p, a2, b2) <= BOUNDARY_TOL;
                        if (on_chord(c) && !near_end(c)) || (on_chord(d) && !near_end(d)) {
                            return false;
                        }
                    }
                }
                SegCross::None => {}
            }
        }
        self.domain.locate(a.lerp(&b, 0.5)) == crate::polygon::Location::Inside
    }

    pub fn make_cut(&self, sa: f64, sb: f64) -> Cut {
        let (s1, s2) = if sa <= sb { (sa, sb) } else { (sb, sa) };
        let (a, b) = (self.point_at(s1), self.point_at(s2));
        Cut {
            s1,
            s2,
            a,
            b,
            length: a.dist(&b),
        }
    }

    /// Split the curve along a cut into the two resulting Jordan curves.
    /// Checks length additivity, strict decrease and area partition.
    pub fn split(&self, cut: &Cut) -> Result<(JordanPolygon, JordanPolygon)> {
        if cut.length <= 10.0 * BOUNDARY_TOL {
            return Err(GeomError::Precondition("cut endpoints coincide".into()));
        }
        let verts = self.vertices();
        let n = verts.len();
        let mut ring1 = vec![cut.a];
        for k in 0..n {
            let s = self.cum[k];
            if s > cut.s1 + 1e-12 && s < cut.s2 - 1e-12 {
                ring1.push(verts[k]);
            }
        }
        ring1.push(cut.b);
        let mut ring2 = vec![cut.b];
        for k in 0..n {
            let s = self.cum[k];
            if s > cut.s2 + 1e-12 {
                ring2.push(verts[k]);
            }
        }
        for k in 0..n {
            let s = self.cum[k];
            if s < cut.s1 - 1e-12 {
                ring2.push(verts[k]);
            }
        }
        ring2.push(cut.a);
        dedup_ring(&mut ring1);
        dedup_ring(&mut ring2);
        let g1 = JordanPolygon::new(ring1)?;
        let g2 = JordanPolygon::new(ring2)?;
        let scale = 1.0 + self.length;
        let additivity = (g1.length + g2.length) - (self.length + 2.0 * cut.length);
        if additivity.abs() > 1e-9 * scale {
            return Err(GeomError::Precondition(format!(
                "length additivity violated by {additivity}"
            )));
        }
        if !(g1.length < self.length - 1e-9 && g2.length < self.length - 1e-9) {
            return Err(GeomError::Precondition("no strict length decrease".into()));
        }
        let area_gap =
            (g1.domain.area() + g2.domain.area() - self.domain.area()).abs();
        if area_gap > 1e-9 * (1.0 + self.domain.area()) {
            return Err(GeomError::Precondition(format!(
                "area partition violated by {area_gap}"
            )));
        }
        Ok((g1, g2))
    }

    /// First boundary contact of the ray from `origin` in direction `dir`.
    fn ray_cast(&self, origin: Point, dir: (f64, f64)) -> Option<Point> {
        let verts = self.vertices();
        let n = verts.len();
        let mut best: Option<(f64, Point)> = None;
        for i in 0..n {
            let (a, b) = (verts[i], verts[(i + 1) % n]);
            let (ex, ey) = (b.x - a.x, b.y - a.y);
            let denom = dir.0 * ey - dir.1 * ex;
            if denom.abs() < 1e-15 {
                continue;
            }
            let (wx, wy) = (a.x - origin.x, a.y - origin.y);
            let t = (wx * ey - wy * ex) / denom;
            let u = (wx * dir.1 - wy * dir.0) / denom;
            if t > 1e-9 && (-1e-12..=1.0 + 1e-12).contains(&u) {
                let mut hit = Point::new(origin.x + t * dir.0, origin.y + t * dir.1);
                // Snap to a vertex when the hit grazes one.
                if hit.dist(&a) <= BOUNDARY_TOL {
                    hit = a;
                } else if hit.dist(&b) <= BOUNDARY_TOL {
                    hit = b;
                }
                if best.map_or(true, |(bt, _)| t < bt) {
                    best = Some((t, hit));
                }
            }
        }
        best.map(|(_, h)| h)
    }

    /// Single-cut essential factor: 1 - (longest piece)/length for the cut
    /// between parameters s1 < s2.
    fn single_cut_delta(&self, s1: f64, s2: f64, cut_len: f64) -> f64 {
        let arc1 = s2 - s1;
        let arc2 = self.length - arc1;
        1.0 - (arc1.max(arc2) + cut_len) / self.length
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BoundarySample {
    pub param: f64,
    pub point: Point,
    /// Strictly interior copy for visibility-graph queries.
    pub inside: Point,
}

fn dedup_ring(ring: &mut Vec<Point>) {
    ring.dedup();
    if ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
}

/// Interior of an edge-cycle Jordan curve on a contractible complex: the
/// homological support of the cycle.
pub fn interior_on_complex(
    c: &crate::complex::TriComplex,
    cycle_edges: &[usize],
) -> Result<std::collections::HashSet<usize>> {
    let mut z = crate::homology::Chain::new(1);
    // Orient the cycle consistently by walking it.
    let mut remaining: Vec<usize> = cycle_edges.to_vec();
    let first = remaining
        .pop()
        .ok_or_else(|| GeomError::BadInput("empty cycle".into()))?;
    let (start, mut cur) = c.edges()[first];
    z.add(first, 1.into());
    let mut prev_vertex = start;
    while cur != start {
        let next_pos = remaining.iter().position(|&e| {
            let (u, v) = c.edges()[e];
            u == cur || v == cur
        });
        let Some(pos) = next_pos else {
            return Err(GeomError::NotACycle);
        };
        let e = remaining.swap_remove(pos);
        let (u, v) = c.edges()[e];
        let nxt = if u == cur { v } else { u };
        // Edge orientation is min->max; sign +1 when traversed that way.
        z.add(e, if cur < nxt { 1.into() } else { (-1).into() });
        prev_vertex = cur;
        cur = nxt;
    }
    let _ = prev_vertex;
    if !remaining.is_empty() {
        return Err(GeomError::NotACycle);
    }
    crate::homology::support_set(c, &z)
}

/// Longest valid chord of at least `threshold` found by sampled search;
/// `None` declares the curve degenerate at this resolution.
pub fn find_long_cut(curve: &JordanPolygon, threshold: f64, params: &SearchParams) -> Option<Cut> {
    if threshold <= 0.0 {
        return None;
    }
    let samples = curve.boundary_samples(params.boundary_samples);
    let mut best: Option<(f64, Cut)> = None; // (delta_achieved, cut)
    for i in 0..samples.len() {
        for j in (i + 1)..samples.len() {
            let (si, sj) = (&samples[i], &samples[j]);
            let len = si.point.dist(&sj.point);
            if len < threshold {
                continue;
            }
            let delta = curve.single_cut_delta(si.param, sj.param, len);
            let better = match &best {
                None => true,
                Some((bd, bc)) => {
                    delta > *bd + 1e-15
                        || ((delta - *bd).abs() <= 1e-15
                            && (len < bc.length - 1e-15
                                || ((len - bc.length).abs() <= 1e-15
                                    && (si.param, sj.param) < (bc.s1, bc.s2))))
                }
            };
            if better && curve.chord_ok(si.point, sj.point) {
                best = Some((
                    delta,
                    Cut {
                        s1: si.param,
                        s2: sj.param,
                        a: si.point,
                        b: sj.point,
                        length: len,
                    },
                ));
            }
        }
    }
    best.map(|(_, c)| c)
}

/// A 2-fold cut: the root cut, the two second-level cuts and the four
/// resulting curves.
#[derive(Debug)]
pub struct TwoFoldCut {
    pub cut: Cut,
    pub children: (JordanPolygon, JordanPolygon),
    pub child_cuts: (Cut, Cut),
    pub pieces: Vec<JordanPolygon>,
    pub delta_achieved: f64,
}

/// Non-degenerate branch: midpoint normals of the cut are ray-cast into the
/// two sub-interiors; each child is cut by its normal chord.
pub fn essential_2fold_nondegenerate(curve: &JordanPolygon, cut: &Cut) -> Result<TwoFoldCut> {
    if cut.length <= 10.0 * BOUNDARY_TOL {
        return Err(GeomError::Precondition(
            "degenerate cut of zero length".into(),
        ));
    }
    let (g1, g2) = curve.split(cut)?;
    let m = cut.a.lerp(&cut.b, 0.5);
    let (dx, dy) = (cut.b.x - cut.a.x, cut.b.y - cut.a.y);
    let l = dx.hypot(dy);
    let (ux, uy) = (dx / l, dy / l);
    let mut pieces = Vec::with_capacity(4);
    let mut child_cuts = Vec::with_capacity(2);
    for child in [&g1, &g2] {
        // Normal direction pointing into this child's interior.
        let candidates = [(-uy, ux), (uy, -ux)];
        let base = candidates
            .into_iter()
            .find(|&(nx, ny)| {
                let probe = Point::new(m.x + 1e-7 * nx, m.y + 1e-7 * ny);
                child.interior().locate(probe) == crate::polygon::Location::Inside
            })
            .ok_or_else(|| {
                GeomError::CutConstructionFailed("midpoint normal finds no interior".into())
            })?;
        let mut placed = false;
        for da in [0.0, 0.01, -0.01, 0.02, -0.02] {
            let (nx, ny) = rotate(base, da);
            let Some(hit) = child.ray_cast(m, (nx, ny)) else {
                continue;
            };
            // A hit through an endpoint of the root cut is a tangency.
            if hit.dist(&cut.a) <= 10.0 * BOUNDARY_TOL || hit.dist(&cut.b) <= 10.0 * BOUNDARY_TOL {
                continue;
            }
            if !child.chord_ok(m, hit) {
                continue;
            }
            let (Some(sm), Some(sh)) = (child.param_of_point(m), child.param_of_point(hit)) else {
                continue;
            };
            let ccut = child.make_cut(sm, sh);
            match child.split(&ccut) {
                Ok((p1, p2)) => {
                    pieces.push(p1);
                    pieces.push(p2);
                    child_cuts.push(ccut);
                    placed = true;
                    break;
                }
                Err(_) => continue,
            }
        }
        if !placed {
            return Err(GeomError::CutConstructionFailed(
                "normal ray produced no valid chord after perturbation".into(),
            ));
        }
    }
    let delta_achieved = 1.0
        - pieces
            .iter()
            .map(|p| p.length / curve.length)
            .fold(0.0, f64::max);
    let c2 = child_cuts.pop().unwrap();
    let c1 = child_cuts.pop().unwrap();
    Ok(TwoFoldCut {
        cut: cut.clone(),
        children: (g1, g2),
        child_cuts: (c1, c2),
        pieces,
        delta_achieved,
    })
}

fn rotate((x, y): (f64, f64), angle: f64) -> (f64, f64) {
    let (s, c) = angle.sin_cos();
    (x * c - y * s, x * s + y * c)
}

/// Degenerate branch: diameter realizers, the two arcs, the short connector
/// eta, and a chord scan along it.
pub fn essential_cut_degenerate(
    curve: &JordanPolygon,
    delta: f64,
    params: &SearchParams,
) -> Result<Cut> {
    let ell = curve.length;
    if find_long_cut(curve, 2.0 * delta * ell, params).is_some() {
        return Err(GeomError::Precondition(
            "curve admits a long cut; not degenerate".into(),
        ));
    }
    let samples = curve.boundary_samples(params.boundary_samples);
    let inside_pts: Vec<Point> = samples.iter().map(|s| s.inside).collect();
    let graph = VisGraph::new(curve.interior(), &inside_pts);
    let idx: Vec<usize> = inside_pts
        .iter()
        .map(|p| graph.node_index(*p).expect("sample node"))
        .collect();
    let k = samples.len();
    // Intrinsic all-pairs over the samples.
    let mut dmat = vec![vec![f64::INFINITY; k]; k];
    for i in 0..k {
        let (dist, _) = graph.distances_from(idx[i]);
        for j in 0..k {
            dmat[i][j] = dist[idx[j]];
        }
    }
    let (mut pi, mut qi, mut d) = (0, 0, 0.0);
    for i in 0..k {
        for j in (i + 1)..k {
            if dmat[i][j] > d {
                d = dmat[i][j];
                pi = i;
                qi = j;
            }
        }
    }
    if !(d.is_finite() && d > 0.0) {
        return Err(GeomError::ResolutionExceeded(
            "no finite intrinsic diameter over samples".into(),
        ));
    }
    let (sp, sq) = (samples[pi].param, samples[qi].param);
    // Arc membership by parameter: plus-arc is (sp, sq), minus-arc the rest.
    let on_plus = |s: f64| s > sp + 1e-12 && s < sq - 1e-12;
    let on_minus = |s: f64| s < sp - 1e-12 || s > sq + 1e-12;
    // Restricted arcs: intrinsic distance >= d/3 from both realizers.
    let far = |i: usize| dmat[i][pi] >= d / 3.0 && dmat[i][qi] >= d / 3.0;
    let plus0: Vec<usize> = (0..k).filter(|&i| on_plus(samples[i].param) && far(i)).collect();
    let minus0: Vec<usize> = (0..k)
        .filter(|&i| on_minus(samples[i].param) && far(i))
        .collect();
    let mut close: Option<(f64, usize, usize)> = None;
    for &i in &plus0 {
        for &j in &minus0 {
            if close.map_or(true, |(cd, _, _)| dmat[i][j] < cd) {
                close = Some((dmat[i][j], i, j));
            }
        }
    }
    let Some((dxx, xp, xm)) = close else {
        return Err(GeomError::ResolutionExceeded(format!(
            "restricted arcs empty at {} samples",
            k
        )));
    };
    if dxx > 4.0 * delta * ell {
        return Err(GeomError::ResolutionExceeded(format!(
            "closest restricted pair at {dxx} > 4*delta*l = {}",
            4.0 * delta * ell
        )));
    }
    // Connector eta between the close pair, trimmed to its last contact with
    // the plus arc and first contact with the minus arc.
    let (_, eta) = graph.query(samples[xp].inside, samples[xm].inside)?;
    let near_arc = |p: Point, plus: bool| -> bool {
        curve
            .param_of_point(p)
            .map(|s| if plus { on_plus(s) } else { on_minus(s) })
            .unwrap_or(false)
    };
    let last_plus = (0..eta.len())
        .rev()
        .find(|&i| near_arc(eta[i], true) || i == 0)
        .unwrap_or(0);
    let first_minus = (last_plus..eta.len())
        .find(|&i| near_arc(eta[i], false) || i == eta.len() - 1)
        .unwrap_or(eta.len() - 1);
    let trimmed = &eta[last_plus..=first_minus];
    // Scan chord positions along eta and directions.
    let scan_points: Vec<Point> = {
        let total = polyline_length(trimmed);
        let count = 16.max(trimmed.len());
        let mut pts = Vec::new();
        if total <= 0.0 {
            pts.push(trimmed[0]);
        } else {
            for t in 0..=count {
                let target = total * t as f64 / count as f64;
                pts.push(polyline_at(trimmed, target));
            }
        }
        pts.retain(|p| curve.interior().locate(*p) == crate::polygon::Location::Inside);
        pts
    };
    let mut best: Option<(f64, Cut)> = None;
    for z in &scan_points {
        for kdir in 0..params.directions {
            let theta = PI * kdir as f64 / params.directions as f64;
            let u = (theta.cos(), theta.sin());
            let Some(h1) = curve.ray_cast(*z, u) else { continue };
            let Some(h2) = curve.ray_cast(*z, (-u.0, -u.1)) else { continue };
            let (Some(s1), Some(s2)) = (curve.param_of_point(h1), curve.param_of_point(h2)) else {
                continue;
            };
            // One endpoint on each arc.
            let crossing = (on_plus(s1) && on_minus(s2)) || (on_minus(s1) && on_plus(s2));
            if !crossing {
                continue;
            }
            if !curve.chord_ok(h1, h2) {
                continue;
            }
            let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
            let len = h1.dist(&h2);
            let delta_a = curve.single_cut_delta(lo, hi, len);
            if delta_a < delta {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bd, bc)) => {
                    delta_a > *bd + 1e-15
                        || ((delta_a - *bd).abs() <= 1e-15
                            && (len < bc.length - 1e-15
                                || ((len - bc.length).abs() <= 1e-15 && (lo, hi) < (bc.s1, bc.s2))))
                }
            };
            if better {
                best = Some((delta_a, curve.make_cut(lo, hi)));
            }
        }
    }
    best.map(|(_, c)| c).ok_or_else(|| {
        GeomError::ResolutionExceeded(format!(
            "no crossing chord at {} scan points x {} directions",
            scan_points.len(),
            params.directions
        ))
    })
}

fn polyline_at(path: &[Point], target: f64) -> Point {
    let mut acc = 0.0;
    for w in path.windows(2) {
        let seg = w[0].dist(&w[1]);
        if acc + seg >= target {
            let t = if seg > 0.0 { (target - acc) / seg } else { 0.0 };
            return w[0].lerp(&w[1], t);
        }
        acc += seg;
    }
    *path.last().unwrap()
}

/// Theoretical essential factor for diameter floor `eps0`.
pub fn delta_theory(eps0: f64) -> f64 {
    eps0 / (1000.0 * PI)
}

/// Dispatch: non-degenerate branch when a long cut exists, otherwise a
/// degenerate cut followed by per-child dispatch. Certifies the factor.
pub fn essential_2fold_cut(
    curve: &JordanPolygon,
    eps0: f64,
    params: &SearchParams,
) -> Result<TwoFoldCut> {
    if curve.diameter() < eps0 {
        return Err(GeomError::Precondition(format!(
            "diameter {} below floor {eps0}",
            curve.diameter()
        )));
    }
    let delta = delta_theory(eps0);
    let ell = curve.length;
    let result = if let Some(c) = find_long_cut(curve, 2.0 * delta * ell, params) {
        essential_2fold_nondegenerate(curve, &c)?
    } else {
        let c = essential_cut_degenerate(curve, delta, params)?;
        let (g1, g2) = curve.split(&c)?;
        let mut pieces = Vec::with_capacity(4);
        let mut child_cuts = Vec::with_capacity(2);
        for child in [&g1, &g2] {
            let ccut = match find_long_cut(child, 2.0 * delta * child.length(), params) {
                Some(cc) => cc,
                None => essential_cut_degenerate(child, delta, params)?,
            };
            let (p1, p2) = child.split(&ccut)?;
            pieces.push(p1);
            pieces.push(p2);
            child_cuts.push(ccut);
        }
        let delta_achieved = 1.0
            - pieces
                .iter()
                .map(|p| p.length() / ell)
                .fold(0.0, f64::max);
        let c2 = child_cuts.pop().unwrap();
        let c1 = child_cuts.pop().unwrap();
        TwoFoldCut {
            cut: c,
            children: (g1, g2),
            child_cuts: (c1, c2),
            pieces,
            delta_achieved,
        }
    };
    // delta-essential certificate with rho = 1 (kappa <= 0 planar scenes).
    let bound = (1.0 - delta) * ell;
    for p in &result.pieces {
        if p.length() > bound + 1e-9 {
            return Err(GeomError::CutConstructionFailed(format!(
                "piece length {} exceeds certified bound {bound}",
                p.length()
            )));
        }
    }
    Ok(result)
}

/// One node of a cut tree.
#[derive(Debug)]
pub struct CutNode {
    pub curve: JordanPolygon,
    pub cut: Option<Cut>,
    pub children: Option<(usize, usize)>,
    pub parent: Option<usize>,
    /// Number of 2-fold cut rounds from the root to this node.
    pub fold_depth: usize,
    pub delta_achieved: Option<f64>,
    pub frozen: bool,
    /// Every cut geometry of this node stays within the parent's diameter of
    /// the parent curve.
    pub containment_ok: bool,
}

#[derive(Debug)]
pub struct CutTree {
    pub nodes: Vec<CutNode>,
    pub root: usize,
    pub epsilon: f64,
    /// False when the leaf budget stopped refinement early.
    pub complete: bool,
}

impl CutTree {
    pub fn leaves(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].children.is_none())
            .collect()
    }

    pub fn max_leaf_diameter(&self) -> f64 {
        self.leaves()
            .iter()
            .map(|&i| self.nodes[i].curve.diameter())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                serde_json::json!({
                    "id": i,
                    "parent": n.parent,
                    "children": n.children.map(|(a, b)| vec![a, b]),
                    "length": n.curve.length(),
                    "diameter": n.curve.diameter(),
                    "fold_depth": n.fold_depth,
                    "delta_achieved": n.delta_achieved,
                    "frozen": n.frozen,
                    "containment_ok": n.containment_ok,
                    "cut": n.cut.as_ref().map(|c| serde_json::json!({
                        "s1": c.s1, "s2": c.s2, "length": c.length,
                        "a": [c.a.x, c.a.y], "b": [c.b.x, c.b.y],
                    })),
                })
            })
            .collect();
        serde_json::json!({
            "root": self.root,
            "epsilon": self.epsilon,
            "complete": self.complete,
            "leaf_count": self.leaves().len(),
            "max_leaf_diameter": self.max_leaf_diameter(),
            "nodes": nodes,
        })
    }
}

pub const DEFAULT_LEAF_BUDGET: usize = 1 << 14;

/// Iterated cutting until every leaf has diameter at most `eps`. Small
/// leaves are frozen. Returns a partial tree flagged incomplete when the
/// leaf budget is reached.
pub fn iterated_cut(
    curve: &JordanPolygon,
    eps: f64,
    leaf_budget: usize,
    params: &SearchParams,
) -> Result<CutTree> {
    if eps <= 0.0 {
        return Err(GeomError::BadInput("epsilon must be positive".into()));
    }
    let root_len = curve.length();
    let delta = delta_theory(eps);
    let mut tree = CutTree {
        nodes: vec![CutNode {
            curve: curve.clone(),
            cut: None,
            children: None,
            parent: None,
            fold_depth: 0,
            delta_achieved: None,
            frozen: curve.diameter() <= eps,
            containment_ok: true,
        }],
        root: 0,
        epsilon: eps,
        complete: true,
    };
    loop {
        let open: Vec<usize> = tree
            .leaves()
            .into_iter()
            .filter(|&i| !tree.nodes[i].frozen)
            .collect();
        if open.is_empty() {
            break;
        }
        for leaf in open {
            if tree.leaves().len() + 3 > leaf_budget {
                tree.complete = false;
                return Ok(tree);
            }
            let node_curve = tree.nodes[leaf].curve.clone();
            let fold = tree.nodes[leaf].fold_depth;
            let two = essential_2fold_cut(&node_curve, eps, params)?;
            // Neighborhood log: all cut geometry within the parent diameter
            // of the parent curve.
            let diam = node_curve.diameter();
            let containment = [&two.cut, &two.child_cuts.0, &two.child_cuts.1]
                .iter()
                .flat_map(|c| [c.a, c.b, c.a.lerp(&c.b, 0.5)])
                .all(|p| distance_to_curve(&node_curve, p) <= diam + 1e-9);
            // Attach: leaf gets the root cut and two children; each child
            // gets its own cut and two pieces.
            let (g1, g2) = two.children;
            let (c1id, c2id);
            {
                let base = tree.nodes.len();
                c1id = base;
                c2id = base + 1;
                tree.nodes.push(CutNode {
                    curve: g1,
                    cut: Some(two.child_cuts.0.clone()),
                    children: None,
                    parent: Some(leaf),
                    fold_depth: fold,
                    delta_achieved: None,
                    frozen: false,
                    containment_ok: containment,
                });
                tree.nodes.push(CutNode {
                    curve: g2,
                    cut: Some(two.child_cuts.1.clone()),
                    children: None,
                    parent: Some(leaf),
                    fold_depth: fold,
                    delta_achieved: None,
                    frozen: false,
                    containment_ok: containment,
                });
            }
            let mut piece_ids = Vec::with_capacity(4);
            for (pi, piece) in two.pieces.into_iter().enumerate() {
                let parent = if pi < 2 { c1id } else { c2id };
                let frozen = piece.diameter() <= eps;
                // Lemma-style bound with the theoretical factor, a fortiori.
                assert!(
                    piece.length() <= (1.0 - delta).powi(fold as i32 + 1) * root_len + 1e-9,
                    "theoretical (1-delta)^k bound violated"
                );
                piece_ids.push(tree.nodes.len());
                tree.nodes.push(CutNode {
                    curve: piece,
                    cut: None,
                    children: None,
                    parent: Some(parent),
                    fold_depth: fold + 1,
                    delta_achieved: None,
                    frozen,
                    containment_ok: containment,
                });
            }
            tree.nodes[leaf].cut = Some(two.cut);
            tree.nodes[leaf].children = Some((c1id, c2id));
            tree.nodes[leaf].delta_achieved = Some(two.delta_achieved);
            tree.nodes[c1id].children = Some((piece_ids[0], piece_ids[1]));
            tree.nodes[c2id].children = Some((piece_ids[2], piece_ids[3]));
        }
    }
    Ok(tree)
}

fn distance_to_curve(curve: &JordanPolygon, p: Point) -> f64 {
    let verts = curve.vertices();
    let n = verts.len();
    (0..n)
        .map(|i| point_segment_distance(p, verts[i], verts[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

/// Spherical defect ratio (|x,z| + |z,y| - |x,y|) / |z,m| for the symmetric
/// configuration with half-arc `a` and half-cut `b` on the unit sphere.
pub fn spherical_defect_ratio(a: f64, b: f64) -> f64 {
    ((a.cos() * b.cos()).acos() + b - a) / b
}

/// rho(l0) for kappa = 1: dense minimization of the spherical defect ratio
/// over half-arcs a in [pi/2, l0/2] and half-cuts b in (0, pi/2].
pub fn rho_spherical(l0: f64) -> f64 {
    assert!(l0 > PI && l0 < 2.0 * PI, "l0 must lie in (pi, 2pi)");
    let steps = 600;
    let mut best = f64::INFINITY;
    for ia in 0..=steps {
        let a = PI / 2.0 + (l0 / 2.0 - PI / 2.0) * ia as f64 / steps as f64;
        for ib in 1..=steps {
            let b = PI / 2.0 * ib as f64 / steps as f64;
            best = best.min(spherical_defect_ratio(a, b));
        }
    }
    best
}
