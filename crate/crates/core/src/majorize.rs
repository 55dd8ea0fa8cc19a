//! Constructive majorization of planar Jordan curves: comparison-triangle
//! fans, gluing of majorizing discs along shared geodesic chords, controlled
//! majorization of small curves, and bottom-up assembly over a cut tree.
//!
//! For flat scenes every disc triangle is congruent to its image triangle in
//! the plane, so disc edge lengths are exactly the Euclidean distances of the
//! vertex images; the per-triangle correspondence is the barycentric identity.

use crate::complex::{ComplexPoint, SteinerGraph, TriComplex, Triangle};
use crate::error::{GeomError, Result};
use crate::jordan::{CutTree, JordanPolygon};
use crate::polygon::PolygonDomain;
use crate::predicates::{orient, point_segment_distance, Point};
use crate::rng::CounterRng;

const GLUE_TOL: f64 = 1e-9;

/// A majorizing disc: a flat triangle complex with disc topology, a marked
/// boundary cycle, and a per-vertex image table into the scene.
#[derive(Debug)]
pub struct MajDisc {
    pub disc: TriComplex,
    /// Boundary vertex ids in cyclic order.
    pub boundary: Vec<usize>,
    /// Image of each disc vertex in the plane.
    pub images: Vec<Point>,
}

impl MajDisc {
    pub fn boundary_length(&self) -> f64 {
        let n = self.boundary.len();
        (0..n)
            .map(|i| {
                self.images[self.boundary[i]].dist(&self.images[self.boundary[(i + 1) % n]])
            })
            .sum()
    }

    /// Image of a point given by barycentric coordinates in a disc triangle.
    pub fn image_of(&self, tri: usize, bary: [f64; 3]) -> Point {
        let t = &self.disc.triangles()[tri];
        let [a, b, c] = t.vertices;
        let (pa, pb, pc) = (self.images[a], self.images[b], self.images[c]);
        Point::new(
            bary[0] * pa.x + bary[1] * pb.x + bary[2] * pc.x,
            bary[0] * pa.y + bary[1] * pb.y + bary[2] * pc.y,
        )
    }

    /// Exact interior flatness: every vertex not on the boundary has corner
    /// angles summing to 2*pi.
    pub fn flatness_defect(&self) -> f64 {
        let on_boundary: std::collections::HashSet<usize> = self.boundary.iter().copied().collect();
        let mut sums = vec![0.0f64; self.disc.n_vertices()];
        let mut seen = vec![false; self.disc.n_vertices()];
        for (ti, t) in self.disc.triangles().iter().enumerate() {
            for &v in &t.vertices {
                sums[v] += self.disc.corner_angle(ti, v);
                seen[v] = true;
            }
        }
        (0..self.disc.n_vertices())
            .filter(|v| seen[*v] && !on_boundary.contains(v))
            .map(|v| (sums[v] - 2.0 * std::f64::consts::PI).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "triangles": self.disc.triangles().iter().map(|t| {
                serde_json::json!({"vertices": t.vertices, "lengths": t.lengths})
            }).collect::<Vec<_>>(),
            "boundary": self.boundary,
            "images": self.images.iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        })
    }
}

/// Mutable triangle soup used while building and gluing discs.
struct Soup {
    tris: Vec<[usize; 3]>,
    images: Vec<Point>,
    boundary: Vec<usize>,
}

impl Soup {
    fn seal(self) -> Result<MajDisc> {
        let triangles: Vec<Triangle> = self
            .tris
            .iter()
            .map(|&[a, b, c]| Triangle {
                vertices: [a, b, c],
                lengths: [
                    self.images[a].dist(&self.images[b]),
                    self.images[b].dist(&self.images[c]),
                    self.images[c].dist(&self.images[a]),
                ],
            })
            .collect();
        let disc = TriComplex::new(crate::model::Kappa::flat(), triangles)?;
        if disc.euler_characteristic() != 1 {
            return Err(GeomError::InvalidComplex(format!(
                "majorizing disc has Euler characteristic {}",
                disc.euler_characteristic()
            )));
        }
        let d = MajDisc {
            disc,
            boundary: self.boundary,
            images: self.images,
        };
        if d.flatness_defect() > 1e-9 {
            return Err(GeomError::InvalidComplex(format!(
                "interior flatness defect {}",
                d.flatness_defect()
            )));
        }
        Ok(d)
    }

    /// Split the boundary edge (u, v) at parameter t, subdividing its unique
    /// incident triangle. Returns the new vertex id.
    fn split_boundary_edge(&mut self, u: usize, v: usize, t: f64) -> Result<usize> {
        let pos = self
            .tris
            .iter()
            .position(|tri| {
                (0..3).any(|k| tri[k] == u && tri[(k + 1) % 3] == v)
                    || (0..3).any(|k| tri[k] == v && tri[(k + 1) % 3] == u)
            })
            .ok_or_else(|| GeomError::InvalidComplex("edge not found for split".into()))?;
        let tri = self.tris[pos];
        let k = (0..3)
            .find(|&k| {
                (tri[k] == u && tri[(k + 1) % 3] == v) || (tri[k] == v && tri[(k + 1) % 3] == u)
            })
            .unwrap();
        let (e0, e1, w) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
        let tt = if e0 == u { t } else { 1.0 - t };
        let p = self.images.len();
        self.images
            .push(self.images[e0].lerp(&self.images[e1], tt));
        self.tris[pos] = [e0, p, w];
        self.tris.push([p, e1, w]);
        // Insert p between u and v in the boundary cycle.
        let n = self.boundary.len();
        let at = (0..n)
            .find(|&i| {
                (self.boundary[i] == u && self.boundary[(i + 1) % n] == v)
                    || (self.boundary[i] == v && self.boundary[(i + 1) % n] == u)
            })
            .ok_or_else(|| GeomError::InvalidComplex("edge not on boundary cycle".into()))?;
        self.boundary.insert(at + 1, p);
        Ok(p)
    }
}

/// Fan majorization of a planar Jordan polygon from one of its vertices.
/// Strictly collinear non-apex vertices are merged first (they subdivide
/// straight boundary runs and carry no angle).
pub fn fan_majorize(curve: &JordanPolygon, apex: usize) -> Result<MajDisc> {
    let verts = curve.vertices();
    let n = verts.len();
    if apex >= n {
        return Err(GeomError::BadInput(format!("apex {apex} out of range")));
    }
    let mut ring: Vec<Point> = Vec::new();
    for i in 0..n {
        let (a, b, c) = (verts[(i + n - 1) % n], verts[i], verts[(i + 1) % n]);
        if i != apex && orient(a, b, c) == 0 {
            continue;
        }
        ring.push(verts[i]);
    }
    let k = ring.len();
    let a0 = ring.iter().position(|&p| p == verts[apex]).unwrap();
    let ring: Vec<Point> = (0..k).map(|i| ring[(a0 + i) % k]).collect();
    let domain = curve.interior();
    // All fan diagonals must stay in the closed interior.
    for i in 2..k - 1 {
        if !domain.segment_inside(ring[0], ring[i]) {
            return Err(GeomError::FanObstructed(i));
        }
    }
    let mut tris = Vec::with_capacity(k - 2);
    let mut area2 = 0.0f64;
    for i in 1..k - 1 {
        if orient(ring[0], ring[i], ring[i + 1]) == 0 {
            return Err(GeomError::FanObstructed(i));
        }
        tris.push([0, i, i + 1]);
        area2 += (ring[i].x - ring[0].x) * (ring[i + 1].y - ring[0].y)
            - (ring[i + 1].x - ring[0].x) * (ring[i].y - ring[0].y);
    }
    // The fan tiles the polygon exactly when the triangle areas sum to it.
    if (area2.abs() / 2.0 - domain.area()).abs() > 1e-9 * (1.0 + domain.area()) {
        return Err(GeomError::FanObstructed(0));
    }
    let soup = Soup {
        tris,
        images: ring.clone(),
        boundary: (0..k).collect(),
    };
    soup.seal()
}

/// Locate the boundary subarc of a disc whose images trace the chord
/// [ga, gb]. Returns boundary positions from ga to gb inclusive.
fn boundary_arc(z: &MajDisc, ga: Point, gb: Point) -> Result<Vec<usize>> {
    let n = z.boundary.len();
    let find = |p: Point| -> Option<usize> {
        (0..n).find(|&i| z.images[z.boundary[i]].dist(&p) <= GLUE_TOL)
    };
    let (ia, ib) = match (find(ga), find(gb)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(GeomError::GlueMismatch(f64::NAN, f64::NAN));
        }
    };
    let chord = ga.dist(&gb);
    let walk = |from: usize, to: usize| -> Vec<usize> {
        let mut out = vec![from];
        let mut i = from;
        while i != to {
            i = (i + 1) % n;
            out.push(i);
        }
        out
    };
    for arc in [walk(ia, ib), walk(ib, ia)] {
        let ok_geom = arc.iter().all(|&i| {
            point_segment_distance(z.images[z.boundary[i]], ga, gb) <= GLUE_TOL
        });
        if !ok_geom {
            continue;
        }
        let len: f64 = arc
            .windows(2)
            .map(|w| z.images[z.boundary[w[0]]].dist(&z.images[z.boundary[w[1]]]))
            .sum();
        if (len - chord).abs() <= GLUE_TOL {
            // Normalize to run from ga to gb.
            return Ok(if z.images[z.boundary[arc[0]]].dist(&ga) <= GLUE_TOL {
                arc
            } else {
                arc.into_iter().rev().collect()
            });
        }
    }
    Err(GeomError::GlueMismatch(chord, f64::NAN))
}

/// Glue two majorizing discs along the shared geodesic chord [ga, gb]. The
/// seam subarcs are refined to a common subdivision, then identified.
pub fn glue_majorizations(zp: &MajDisc, zm: &MajDisc, ga: Point, gb: Point) -> Result<MajDisc> {
    let chord = ga.dist(&gb);
    let mut sides = Vec::new();
    for z in [zp, zm] {
        let arc = boundary_arc(z, ga, gb)?;
        let mut offsets = vec![0.0f64];
        for w in arc.windows(2) {
            let d = z.images[z.boundary[w[0]]].dist(&z.images[z.boundary[w[1]]]);
            offsets.push(offsets.last().unwrap() + d);
        }
        if (offsets.last().unwrap() - chord).abs() > GLUE_TOL {
            return Err(GeomError::GlueMismatch(chord, *offsets.last().unwrap()));
        }
        sides.push((z, arc, offsets));
    }
    // Union of interior seam offsets.
    let mut union: Vec<f64> = sides
        .iter()
        .flat_map(|(_, _, off)| off[1..off.len() - 1].iter().copied())
        .collect();
    union.sort_by(|a, b| a.partial_cmp(b).unwrap());
    union.dedup_by(|a, b| (*a - *b).abs() <= GLUE_TOL);
    // Refine both soups so the seams subdivide identically.
    let mut soups = Vec::new();
    for (z, arc, offsets) in sides {
        let mut soup = Soup {
            tris: z.disc.triangles().iter().map(|t| t.vertices).collect(),
            images: z.images.clone(),
            boundary: z.boundary.clone(),
        };
        // Seam as vertex ids with their offsets.
        let mut seam: Vec<(f64, usize)> = arc
            .iter()
            .zip(offsets.iter())
            .map(|(&i, &o)| (o, z.boundary[i]))
            .collect();
        for &o in &union {
            if seam.iter().any(|&(so, _)| (so - o).abs() <= GLUE_TOL) {
                continue;
            }
            let pos = seam.iter().position(|&(so, _)| so > o).unwrap();
            let (o0, u) = seam[pos - 1];
            let (o1, v) = seam[pos];
            let p = soup.split_boundary_edge(u, v, (o - o0) / (o1 - o0))?;
            seam.insert(pos, (o, p));
        }
        soups.push((soup, seam));
    }
    let (soup_p, seam_p) = &soups[0];
    let (soup_m, seam_m) = &soups[1];
    if seam_p.len() != seam_m.len() {
        return Err(GeomError::GlueMismatch(chord, chord));
    }
    for (&(op, vp), &(om, vm)) in seam_p.iter().zip(seam_m.iter()) {
        if (op - om).abs() > GLUE_TOL
            || soup_p.images[vp].dist(&soup_m.images[vm]) > GLUE_TOL
        {
            return Err(GeomError::GlueMismatch(op, om));
        }
    }
    // Relabel zm vertices: seam vertices map onto zp's, others get fresh ids.
    let np = soup_p.images.len();
    let mut map = vec![usize::MAX; soup_m.images.len()];
    for (&(_, vp), &(_, vm)) in seam_p.iter().zip(seam_m.iter()) {
        map[vm] = vp;
    }
    let mut images = soup_p.images.clone();
    for (vm, slot) in map.iter_mut().enumerate() {
        if *slot == usize::MAX {
            *slot = images.len();
            images.push(soup_m.images[vm]);
        }
    }
    let _ = np;
    let mut tris = soup_p.tris.clone();
    tris.extend(
        soup_m
            .tris
            .iter()
            .map(|&[a, b, c]| [map[a], map[b], map[c]]),
    );
    // New boundary: the complement of the seam run in each cycle, stitched
    // at the seam endpoints. The seam vertices occupy a contiguous cyclic
    // run of the boundary; the outside path walks the rest.
    let outside = |soup: &Soup, seam: &[(f64, usize)]| -> Option<Vec<usize>> {
        let n = soup.boundary.len();
        let seam_set: std::collections::HashSet<usize> = seam.iter().map(|&(_, v)| v).collect();
        let run_start = (0..n).find(|&i| {
            seam_set.contains(&soup.boundary[i])
                && !seam_set.contains(&soup.boundary[(i + n - 1) % n])
        })?;
        for k in 0..seam.len() {
            if !seam_set.contains(&soup.boundary[(run_start + k) % n]) {
                return None;
            }
        }
        let run_end = (run_start + seam.len() - 1) % n;
        let mut path = Vec::with_capacity(n - seam.len() + 2);
        let mut i = run_end;
        loop {
            path.push(soup.boundary[i]);
            if i == run_start {
                break;
            }
            i = (i + 1) % n;
        }
        Some(path)
    };
    let (Some(path_p), Some(path_m)) = (outside(soup_p, seam_p), outside(soup_m, seam_m)) else {
        return Err(GeomError::GlueMismatch(chord, chord));
    };
    // path_p runs from one seam endpoint to the other; path_m (relabeled)
    // must continue from path_p's end back to its start.
    let mut mapped: Vec<usize> = path_m.iter().map(|&v| map[v]).collect();
    if mapped[0] != *path_p.last().unwrap() {
        mapped.reverse();
    }
    if mapped[0] != *path_p.last().unwrap() || *mapped.last().unwrap() != path_p[0] {
        return Err(GeomError::GlueMismatch(chord, chord));
    }
    let mut boundary = path_p;
    boundary.extend(mapped[1..mapped.len() - 1].iter().copied());
    let soup = Soup {
        tris,
        images,
        boundary,
    };
    soup.seal()
}

/// Majorization of a small curve: a fan from the first admissible apex,
/// with the image checked to stay near the curve.
pub fn controlled_majorization(curve: &JordanPolygon, eps: f64) -> Result<MajDisc> {
    if curve.diameter() > eps + 1e-12 {
        return Err(GeomError::Precondition(format!(
            "diameter {} exceeds bound {eps}",
            curve.diameter()
        )));
    }
    let disc = fan_any_apex(curve)?;
    let tol = 1e-6;
    let mut worst = 0.0f64;
    for ti in 0..disc.disc.triangles().len() {
        for bary in sample_barycentrics() {
            let img = disc.image_of(ti, bary);
            worst = worst.max(distance_to_curve(curve, img));
        }
    }
    if worst > eps + tol {
        return Err(GeomError::ContainmentViolated(worst));
    }
    Ok(disc)
}

fn sample_barycentrics() -> [[f64; 3]; 7] {
    [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.5, 0.5, 0.0],
        [0.0, 0.5, 0.5],
        [0.5, 0.0, 0.5],
        [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    ]
}

fn distance_to_curve(curve: &JordanPolygon, p: Point) -> f64 {
    let verts = curve.vertices();
    let n = verts.len();
    (0..n)
        .map(|i| point_segment_distance(p, verts[i], verts[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

fn fan_any_apex(curve: &JordanPolygon) -> Result<MajDisc> {
    let n = curve.vertices().len();
    let mut last = GeomError::FanObstructed(0);
    for apex in 0..n {
        match fan_majorize(curve, apex) {
            Ok(d) => return Ok(d),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Majorize a curve, subdividing along a valid chord when every fan apex is
/// obstructed.
fn majorize_with_fallback(curve: &JordanPolygon, depth: usize) -> Result<MajDisc> {
    match fan_any_apex(curve) {
        Ok(d) => Ok(d),
        Err(GeomError::FanObstructed(_)) if depth > 0 => {
            let params = crate::jordan::SearchParams::default();
            let cut = crate::jordan::find_long_cut(curve, 1e-9, &params)
                .ok_or(GeomError::FanObstructed(0))?;
            let (g1, g2) = curve.split(&cut)?;
            let z1 = majorize_with_fallback(&g1, depth - 1)?;
            let z2 = majorize_with_fallback(&g2, depth - 1)?;
            glue_majorizations(&z1, &z2, cut.a, cut.b)
        }
        Err(e) => Err(e),
    }
}

/// Bottom-up assembly of a majorization of the tree's root curve: leaves are
/// majorized directly, internal nodes glue their children along the node cut.
pub fn assemble_limit_majorization(tree: &CutTree) -> Result<MajDisc> {
    let disc = assemble_node(tree, tree.root)?;
    let root_len = tree.nodes[tree.root].curve.length();
    let blen = disc.boundary_length();
    if (blen - root_len).abs() > 1e-9 * (1.0 + root_len) {
        return Err(GeomError::InvalidComplex(format!(
            "assembled boundary length {blen} vs curve length {root_len}"
        )));
    }
    Ok(disc)
}

fn assemble_node(tree: &CutTree, id: usize) -> Result<MajDisc> {
    let node = &tree.nodes[id];
    match node.children {
        None => majorize_with_fallback(&node.curve, 16),
        Some((a, b)) => {
            let za = assemble_node(tree, a)?;
            let zb = assemble_node(tree, b)?;
            let cut = node.cut.as_ref().expect("internal node carries its cut");
            glue_majorizations(&za, &zb, cut.a, cut.b)
        }
    }
}

/// Sampled 1-Lipschitz contract: for random disc point pairs, the scene
/// distance of the images never exceeds the disc distance by more than
/// 1e-6 + 2h. Returns the worst excess observed.
///
/// The pairs are drawn as a k-by-k product of random sources and targets
/// with k*k >= `pairs`, so each source shares one graph traversal.
pub fn lipschitz_excess(
    disc: &MajDisc,
    domain: &PolygonDomain,
    pairs: usize,
    h: f64,
    rng: &mut CounterRng,
) -> Result<f64> {
    let graph = SteinerGraph::new(&disc.disc, h)?;
    let vis = crate::polygon::VisGraph::new(domain, &[]);
    let ntris = disc.disc.triangles().len();
    let k = (pairs as f64).sqrt().ceil() as usize;
    let draw = |rng: &mut CounterRng| {
        let ti = rng.next_below(ntris);
        let (mut u, mut v) = (rng.next_f64(), rng.next_f64());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        (ti, [u, v, 1.0 - u - v])
    };
    let sources: Vec<(usize, [f64; 3])> = (0..k).map(|_| draw(rng)).collect();
    let targets: Vec<(usize, [f64; 3])> = (0..k).map(|_| draw(rng)).collect();
    let mut worst = f64::NEG_INFINITY;
    for &(ta, ba) in &sources {
        let pa = ComplexPoint::Tri { tri: ta, bary: ba };
        let node_dists = graph.distances_from_point(&pa)?;
        let ia = disc.image_of(ta, ba);
        for &(tb, bb) in &targets {
            let pb = ComplexPoint::Tri { tri: tb, bary: bb };
            let disc_d = graph.point_distance_with(&node_dists, &pa, &pb)?;
            let (scene_d, _) = vis.query(ia, disc.image_of(tb, bb))?;
            worst = worst.max(scene_d - disc_d);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::{iterated_cut, SearchParams, DEFAULT_LEAF_BUDGET};

    fn pt(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn unit_square() -> JordanPolygon {
        JordanPolygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn triangle_fan_is_its_comparison_triangle() {
        let g = JordanPolygon::new(vec![pt(0.0, 0.0), pt(3.0, 0.0), pt(0.0, 4.0)]).unwrap();
        let d = fan_majorize(&g, 0).unwrap();
        assert_eq!(d.disc.triangles().len(), 1);
        let t = &d.disc.triangles()[0];
        let mut sides = t.lengths.to_vec();
        sides.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(sides, vec![3.0, 4.0, 5.0]);
        assert!((d.boundary_length() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn square_fan_two_right_triangles() {
        let d = fan_majorize(&unit_square(), 0).unwrap();
        assert_eq!(d.disc.triangles().len(), 2);
        assert_eq!(d.disc.euler_characteristic(), 1);
        assert!((d.boundary_length() - 4.0).abs() < 1e-12);
        // Identity mapping: images are the square's vertices.
        assert_eq!(d.images.len(), 4);
        assert!(d.flatness_defect() <= 1e-12);
    }

    #[test]
    fn nonconvex_quad_fan_is_one_lipschitz() {
        let g = JordanPolygon::new(vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(1.0, 0.2), pt(0.0, 2.0)])
            .unwrap();
        let d = fan_majorize(&g, 0).unwrap();
        assert_eq!(d.disc.triangles().len(), 2);
        let mut rng = CounterRng::new(7).stream("quad-lipschitz");
        let h = 0.05;
        let worst = lipschitz_excess(&d, g.interior(), 300, h, &mut rng).unwrap();
        assert!(worst <= 1e-6 + 2.0 * h, "excess {worst}");
    }

    #[test]
    fn fan_obstructed_on_hidden_vertex() {
        // Apex 1 cannot see vertex 3 across the reflex corner.
        let g = JordanPolygon::new(vec![
            pt(0.0, 0.0),
            pt(4.0, 0.0),
            pt(4.0, 4.0),
            pt(0.2, 3.8),
            pt(2.0, 2.0),
        ])
        .unwrap();
        let mut obstructed = false;
        for apex in 0..5 {
            if matches!(fan_majorize(&g, apex), Err(GeomError::FanObstructed(_))) {
                obstructed = true;
            }
        }
        assert!(obstructed);
    }

    #[test]
    fn glue_square_halves() {
        let t1 = JordanPolygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0)]).unwrap();
        let t2 = JordanPolygon::new(vec![pt(0.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]).unwrap();
        let (d1, d2) = (fan_majorize(&t1, 0).unwrap(), fan_majorize(&t2, 0).unwrap());
        let glued = glue_majorizations(&d1, &d2, pt(0.0, 0.0), pt(1.0, 1.0)).unwrap();
        assert_eq!(glued.disc.triangles().len(), 2);
        assert_eq!(glued.disc.euler_characteristic(), 1);
        assert!((glued.boundary_length() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn glue_mismatch_rejected() {
        let t1 = JordanPolygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(0.5, 1.0)]).unwrap();
        let t2 = JordanPolygon::new(vec![pt(0.0, 0.0), pt(1.1, 0.0), pt(0.5, -1.0)]).unwrap();
        let (d1, d2) = (fan_majorize(&t1, 0).unwrap(), fan_majorize(&t2, 0).unwrap());
        assert!(matches!(
            glue_majorizations(&d1, &d2, pt(0.0, 0.0), pt(1.0, 0.0)),
            Err(GeomError::GlueMismatch(_, _))
        ));
    }

    #[test]
    fn controlled_majorization_small_square() {
        let g = JordanPolygon::new(vec![
            pt(0.0, 0.0),
            pt(0.1, 0.0),
            pt(0.1, 0.1),
            pt(0.0, 0.1),
        ])
        .unwrap();
        let d = controlled_majorization(&g, 0.15).unwrap();
        for ti in 0..d.disc.triangles().len() {
            for bary in sample_barycentrics() {
                assert!(distance_to_curve(&g, d.image_of(ti, bary)) <= 0.08);
            }
        }
    }

    #[test]
    fn controlled_majorization_rejects_large_diameter() {
        let g = unit_square();
        assert!(matches!(
            controlled_majorization(&g, 0.5),
            Err(GeomError::Precondition(_))
        ));
    }

    #[test]
    fn assemble_square_tree() {
        let g = unit_square();
        let tree = iterated_cut(&g, 1.0, DEFAULT_LEAF_BUDGET, &SearchParams::default()).unwrap();
        let d = assemble_limit_majorization(&tree).unwrap();
        assert!((d.boundary_length() - 4.0).abs() < 1e-9);
        assert!(d.flatness_defect() <= 1e-9);
        assert_eq!(d.disc.euler_characteristic(), 1);
        let mut rng = CounterRng::new(11).stream("square-assembly");
        let h = 0.05;
        let worst = lipschitz_excess(&d, g.interior(), 200, h, &mut rng).unwrap();
        assert!(worst <= 1e-6 + 2.0 * h, "excess {worst}");
    }

    #[test]
    fn assemble_l_domain_tree() {
        let g = JordanPolygon::new(vec![
            pt(0.0, 0.0),
            pt(2.0, 0.0),
            pt(2.0, 1.0),
            pt(1.0, 1.0),
            pt(1.0, 2.0),
            pt(0.0, 2.0),
        ])
        .unwrap();
        let eps = 0.2 * g.diameter();
        let tree = iterated_cut(&g, eps, DEFAULT_LEAF_BUDGET, &SearchParams::default()).unwrap();
        let d = assemble_limit_majorization(&tree).unwrap();
        assert!((d.boundary_length() - g.length()).abs() < 1e-9);
        assert!(d.flatness_defect() <= 1e-9);
        // Containment in the eps-neighborhood of the union of the curve and
        // all cut geometries.
        let mut segs: Vec<(Point, Point)> = g
            .interior()
            .edges();
        for n in &tree.nodes {
            if let Some(c) = &n.cut {
                segs.push((c.a, c.b));
            }
        }
        let mut worst = 0.0f64;
        for ti in 0..d.disc.triangles().len() {
            for bary in sample_barycentrics() {
                let img = d.image_of(ti, bary);
                let dist = segs
                    .iter()
                    .map(|&(a, b)| point_segment_distance(img, a, b))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(dist);
            }
        }
        assert!(worst <= eps + 1e-6, "containment worst {worst}");
        let mut rng = CounterRng::new(13).stream("l-assembly");
        let h = 0.05;
        let excess = lipschitz_excess(&d, g.interior(), 200, h, &mut rng).unwrap();
        assert!(excess <= 1e-6 + 2.0 * h, "excess {excess}");
    }

    #[test]
    fn assemble_trivial_tree_is_controlled_majorization() {
        let g = unit_square();
        let tree = iterated_cut(&g, 2.0, DEFAULT_LEAF_BUDGET, &SearchParams::default()).unwrap();
        assert_eq!(tree.nodes.len(), 1);
        let d = assemble_limit_majorization(&tree).unwrap();
        assert_eq!(d.disc.triangles().len(), 2);
    }
}
