//! Piecewise-model simplicial 2-complexes: validation, the link girth test
//! for local upper curvature bounds, and approximate intrinsic distances via
//! a Steiner-point graph.
//!
//! Geodesics on complexes are deliberately approximate: the Steiner graph
//! over-estimates the intrinsic distance and converges as the spacing `h`
//! shrinks. Planar polygonal domains have an exact kernel in `polygon`.

use crate::error::{GeomError, Result};
use crate::model::{comparison_angle, comparison_triangle, geodesic_point, model_distance, Kappa, ModelPoint};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

pub const LINK_TOL: f64 = 1e-9;

/// Triangle given by vertex ids and the three side lengths;
/// `lengths[i]` is the length of the side joining `vertices[i]` and
/// `vertices[(i + 1) % 3]`.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct Triangle {
    pub vertices: [usize; 3],
    pub lengths: [f64; 3],
}

impl Triangle {
    /// Side length of the edge from local corner `i` to corner `(i+1)%3`.
    fn side(&self, i: usize) -> f64 {
        self.lengths[i]
    }

    /// Length of the side opposite local corner `i`.
    fn opposite(&self, i: usize) -> f64 {
        self.lengths[(i + 1) % 3]
    }
}

/// A piecewise-M^2_kappa simplicial 2-complex with gluing along shared edges.
#[derive(Clone, Debug)]
pub struct TriComplex {
    kappa: Kappa,
    n_vertices: usize,
    triangles: Vec<Triangle>,
    edges: Vec<(usize, usize)>,
    edge_len: Vec<f64>,
    edge_index: HashMap<(usize, usize), usize>,
    edge_tris: Vec<Vec<usize>>,
}

/// A point of the complex: a vertex, a point interior to an edge, or a point
/// interior to a triangle in barycentric coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComplexPoint {
    Vertex(usize),
    Edge { edge: usize, t: f64 },
    Tri { tri: usize, bary: [f64; 3] },
}

impl TriComplex {
    pub fn new(kappa: Kappa, triangles: Vec<Triangle>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(GeomError::InvalidComplex("no triangles".into()));
        }
        let mut n_vertices = 0;
        for (ti, t) in triangles.iter().enumerate() {
            let [a, b, c] = t.vertices;
            if a == b || b == c || a == c {
                return Err(GeomError::InvalidComplex(format!(
                    "triangle {ti} repeats a vertex"
                )));
            }
            n_vertices = n_vertices.max(a + 1).max(b + 1).max(c + 1);
            let [x, y, z] = t.lengths;
            if !(x > 0.0 && y > 0.0 && z > 0.0 && x < y + z && y < x + z && z < x + y) {
                return Err(GeomError::InvalidComplex(format!(
                    "triangle {ti} violates the strict triangle inequality"
                )));
            }
            if x + y + z >= 2.0 * kappa.d_kappa() {
                return Err(GeomError::InvalidComplex(format!(
                    "triangle {ti} perimeter exceeds 2 D_kappa"
                )));
            }
        }
        let mut edges = Vec::new();
        let mut edge_len: Vec<f64> = Vec::new();
        let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edge_tris: Vec<Vec<usize>> = Vec::new();
        for (ti, t) in triangles.iter().enumerate() {
            for i in 0..3 {
                let (u, v) = (t.vertices[i], t.vertices[(i + 1) % 3]);
                let key = (u.min(v), u.max(v));
                let len = t.side(i);
                match edge_index.get(&key) {
                    Some(&ei) => {
                        if (edge_len[ei] - len).abs() > 1e-12 * edge_len[ei].max(1.0) {
                            return Err(GeomError::InvalidComplex(format!(
                                "edge {key:?} glued with mismatched lengths {} vs {len}",
                                edge_len[ei]
                            )));
                        }
                        edge_tris[ei].push(ti);
                    }
                    None => {
                        edge_index.insert(key, edges.len());
                        edges.push(key);
                        edge_len.push(len);
                        edge_tris.push(vec![ti]);
                    }
                }
            }
        }
        Ok(TriComplex {
            kappa,
            n_vertices,
            triangles,
            edges,
            edge_len,
            edge_index,
            edge_tris,
        })
    }

    pub fn kappa(&self) -> &Kappa {
        &self.kappa
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        self.edge_len[e]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_index.get(&(u.min(v), u.max(v))).copied()
    }

    pub fn edge_triangles(&self, e: usize) -> &[usize] {
        &self.edge_tris[e]
    }

    /// Edges incident to exactly one triangle.
    pub fn boundary_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edge_tris[e].len() == 1)
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let used: std::collections::HashSet<usize> = self
            .triangles
            .iter()
            .flat_map(|t| t.vertices.iter().copied())
            .collect();
        used.len() as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Interior angle of triangle `ti` at vertex `v`.
    pub fn corner_angle(&self, ti: usize, v: usize) -> f64 {
        let t = &self.triangles[ti];
        let i = t
            .vertices
            .iter()
            .position(|&u| u == v)
            .expect("vertex not in triangle");
        let adj1 = t.side(i);
        let adj2 = t.side((i + 2) % 3);
        comparison_angle(&self.kappa, t.opposite(i), adj1, adj2)
            .expect("validated triangle")
    }

    /// Model-chart layout of triangle `ti` in canonical placement.
    pub fn layout(&self, ti: usize) -> (ModelPoint, ModelPoint, ModelPoint) {
        let t = &self.triangles[ti];
        comparison_triangle(&self.kappa, t.side(0), t.side(2), t.side(1))
            .map(|(p0, p1, p2)| (p0, p1, p2))
            .expect("validated triangle")
    }
}

/// Result of the link girth test.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LinkReport {
    pub pass: bool,
    pub worst_vertex: Option<usize>,
    pub worst_loop_length: f64,
    /// Edge ids (global) of the witness loop, when a loop exists.
    pub witness: Vec<usize>,
}

/// Gromov link condition: the complex is locally CAT(kappa) iff every
/// injective loop in every vertex link has angular length at least 2 pi.
pub fn link_girth_check(c: &TriComplex) -> LinkReport {
    let mut worst = f64::INFINITY;
    let mut worst_vertex = None;
    let mut witness = Vec::new();
    for v in 0..c.n_vertices {
        // Link graph: nodes are edges at v, arcs are triangle corners at v
        // weighted by the corner angle.
        let mut node_of: HashMap<usize, usize> = HashMap::new();
        let mut nodes: Vec<usize> = Vec::new();
        let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
        for (ti, t) in c.triangles.iter().enumerate() {
            if let Some(i) = t.vertices.iter().position(|&u| u == v) {
                let a = t.vertices[(i + 1) % 3];
                let b = t.vertices[(i + 2) % 3];
                let ea = c.edge_id(v, a).unwrap();
                let eb = c.edge_id(v, b).unwrap();
                for e in [ea, eb] {
                    node_of.entry(e).or_insert_with(|| {
                        nodes.push(e);
                        nodes.len() - 1
                    });
                }
                arcs.push((node_of[&ea], node_of[&eb], c.corner_angle(ti, v)));
            }
        }
        // Shortest cycle through each arc: shortest path between its ends
        // with the arc removed, plus its own weight.
        for (skip, &(a, b, w)) in arcs.iter().enumerate() {
            if let Some((sp, path)) = link_shortest_path(nodes.len(), &arcs, skip, a, b) {
                let total = sp + w;
                if total < worst {
                    worst = total;
                    worst_vertex = Some(v);
                    witness = path.into_iter().map(|ni| nodes[ni]).collect();
                }
            }
        }
    }
    LinkReport {
        pass: worst >= 2.0 * std::f64::consts::PI - LINK_TOL,
        worst_vertex,
        worst_loop_length: worst,
        witness,
    }
}

fn link_shortest_path(
    n: usize,
    arcs: &[(usize, usize, f64)],
    skip: usize,
    from: usize,
    to: usize,
) -> Option<(f64, Vec<usize>)> {
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, &(a, b, w)) in arcs.iter().enumerate() {
        if i != skip {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
    }
    let (dist, pred) = dijkstra(&adj, from);
    if !dist[to].is_finite() {
        return None;
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = pred[cur];
        path.push(cur);
    }
    path.reverse();
    Some((dist[to], path))
}

struct HeapItem {
    cost: f64,
    node: usize,
}
impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cost == other.cost && self.node == other.node
    }
}
impl Eq for HeapItem {}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap()
            .then(other.node.cmp(&self.node))
    }
}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra with deterministic (cost, predecessor id) tie-breaking.
pub(crate) fn dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> (Vec<f64>, Vec<usize>) {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapItem {
        cost: 0.0,
        node: source,
    });
    while let Some(HeapItem { cost, node }) = heap.pop() {
        if cost > dist[node] {
            continue;
        }
        for &(v, w) in &adj[node] {
            let nd = cost + w;
            if nd < dist[v] || (nd == dist[v] && node < pred[v]) {
                dist[v] = nd;
                pred[v] = node;
                heap.push(HeapItem { cost: nd, node: v });
            }
        }
    }
    (dist, pred)
}

/// Where a Steiner node sits on the complex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SteinerSite {
    Vertex(usize),
    Edge { edge: usize, t: f64 },
}

/// Weighted graph over vertices and edge-subdivision points; arcs join node
/// pairs sharing a triangle and carry the intra-triangle model distance.
pub struct SteinerGraph<'a> {
    complex: &'a TriComplex,
    pub spacing: f64,
    sites: Vec<SteinerSite>,
    /// Nodes lying on each edge (including its two endpoints), with their
    /// parameter along the edge.
    nodes_on_edge: Vec<Vec<(usize, f64)>>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl<'a> SteinerGraph<'a> {
    pub fn new(complex: &'a TriComplex, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(GeomError::BadInput("spacing must be positive".into()));
        }
        let mut sites: Vec<SteinerSite> = (0..complex.n_vertices).map(SteinerSite::Vertex).collect();
        let mut nodes_on_edge: Vec<Vec<(usize, f64)>> = Vec::with_capacity(complex.edges.len());
        for (ei, &(u, v)) in complex.edges.iter().enumerate() {
            let len = complex.edge_len[ei];
            let segments = (len / h).ceil().max(1.0) as usize;
            let mut on_edge = vec![(u, 0.0)];
            for k in 1..segments {
                let t = k as f64 / segments as f64;
                sites.push(SteinerSite::Edge { edge: ei, t });
                on_edge.push((sites.len() - 1, t));
            }
            on_edge.push((v, 1.0));
            nodes_on_edge.push(on_edge);
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); sites.len()];
        for ti in 0..complex.triangles.len() {
            let tri_nodes = triangle_nodes(complex, &nodes_on_edge, ti);
            let embedded: Vec<(usize, ModelPoint)> = tri_nodes
                .iter()
                .map(|&(node, corner, t)| (node, embed_on_side(complex, ti, corner, t)))
                .collect();
            for i in 0..embedded.len() {
                for j in (i + 1)..embedded.len() {
                    let (ni, ref pi) = embedded[i];
                    let (nj, ref pj) = embedded[j];
                    if ni == nj {
                        continue;
                    }
                    let w = model_distance(complex.kappa(), pi, pj).expect("chart points");
                    adj[ni].push((nj, w));
                    adj[nj].push((ni, w));
                }
            }
        }
        Ok(SteinerGraph {
            complex,
            spacing: h,
            sites,
            nodes_on_edge,
            adj,
        })
    }

    pub fn node_count(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[SteinerSite] {
        &self.sites
    }

    pub fn complex(&self) -> &TriComplex {
        self.complex
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adj[node]
    }

    /// Triangles whose closure carries the node.
    pub fn node_triangles(&self, node: usize) -> Vec<usize> {
        match self.sites[node] {
            SteinerSite::Vertex(v) => (0..self.complex.triangles.len())
                .filter(|&ti| self.complex.triangles[ti].vertices.contains(&v))
                .collect(),
            SteinerSite::Edge { edge, .. } => self.complex.edge_tris[edge].clone(),
        }
    }

    pub fn distances_from(&self, source: usize) -> (Vec<f64>, Vec<usize>) {
        dijkstra(&self.adj, source)
    }

    /// Attach a free complex point as a transient node; returns its adjacency.
    fn attach(&self, p: &ComplexPoint) -> Vec<(usize, f64)> {
        let tris: Vec<usize> = match *p {
            ComplexPoint::Vertex(v) => (0..self.complex.triangles.len())
                .filter(|&ti| self.complex.triangles[ti].vertices.contains(&v))
                .collect(),
            ComplexPoint::Edge { edge, .. } => self.complex.edge_tris[edge].clone(),
            ComplexPoint::Tri { tri, .. } => vec![tri],
        };
        let mut out = Vec::new();
        for ti in tris {
            let pe = embed_point(self.complex, ti, p);
            for &(node, corner, t) in &triangle_nodes(self.complex, &self.nodes_on_edge, ti) {
                let qe = embed_on_side(self.complex, ti, corner, t);
                let w = model_distance(self.complex.kappa(), &pe, &qe).expect("chart points");
                if !out.iter().any(|&(n, _)| n == node) {
                    out.push((node, w));
                } else if let Some(entry) = out.iter_mut().find(|(n, _)| *n == node) {
                    entry.1 = entry.1.min(w);
                }
            }
        }
        out
    }

    /// Distances from a free complex point to every graph node: one
    /// multi-source Dijkstra seeded with the point's attachments. Lets many
    /// point-to-point queries share a single traversal.
    pub fn distances_from_point(&self, p: &ComplexPoint) -> Result<Vec<f64>> {
        validate_point(self.complex, p)?;
        let mut dist = vec![f64::INFINITY; self.sites.len()];
        let mut heap = BinaryHeap::new();
        for &(v, w) in &self.attach(p) {
            if w < dist[v] {
                dist[v] = w;
                heap.push(HeapItem { cost: w, node: v });
            }
        }
        while let Some(HeapItem { cost, node }) = heap.pop() {
            if cost > dist[node] {
                continue;
            }
            for &(v, w) in &self.adj[node] {
                let nd = cost + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(HeapItem { cost: nd, node: v });
                }
            }
        }
        Ok(dist)
    }

    /// Distance from the point behind `dist` (as produced by
    /// `distances_from_point`) to another free point, including the direct
    /// chart segment when the two points share a triangle.
    pub fn point_distance_with(
        &self,
        dist: &[f64],
        p: &ComplexPoint,
        q: &ComplexPoint,
    ) -> Result<f64> {
        validate_point(self.complex, q)?;
        let mut best = f64::INFINITY;
        for &(v, w) in &self.attach(q) {
            best = best.min(dist[v] + w);
        }
        let qtris = point_triangles(self.complex, q);
        for &ti in &point_triangles(self.complex, p) {
            if qtris.contains(&ti) {
                let d = model_distance(
                    self.complex.kappa(),
                    &embed_point(self.complex, ti, p),
                    &embed_point(self.complex, ti, q),
                )
                .expect("chart points");
                best = best.min(d);
            }
        }
        if !best.is_finite() {
            return Err(GeomError::Unreachable);
        }
        Ok(best)
    }

    /// Shortest-path distance between two complex points through the graph.
    pub fn distance(&self, p: &ComplexPoint, q: &ComplexPoint) -> Result<f64> {
        validate_point(self.complex, p)?;
        validate_point(self.complex, q)?;
        let pa = self.attach(p);
        let qa = self.attach(q);
        // Degenerate: both points attach into a common triangle; allow the
        // direct intra-triangle segment as a candidate.
        let mut direct = f64::INFINITY;
        let ptris: Vec<usize> = point_triangles(self.complex, p);
        for &ti in &ptris {
            if point_triangles(self.complex, q).contains(&ti) {
                let d = model_distance(
                    self.complex.kappa(),
                    &embed_point(self.complex, ti, p),
                    &embed_point(self.complex, ti, q),
                )
                .expect("chart points");
                direct = direct.min(d);
            }
        }
        let n = self.sites.len();
        let mut adj = self.adj.clone();
        adj.push(pa.clone()); // node n = p
        adj.push(qa.clone()); // node n+1 = q
        for &(v, w) in &pa {
            adj[v].push((n, w));
        }
        for &(v, w) in &qa {
            adj[v].push((n + 1, w));
        }
        let (dist, _) = dijkstra(&adj, n);
        let best = dist[n + 1].min(direct);
        if !best.is_finite() {
            return Err(GeomError::Unreachable);
        }
        Ok(best)
    }
}

fn point_triangles(c: &TriComplex, p: &ComplexPoint) -> Vec<usize> {
    match *p {
        ComplexPoint::Vertex(v) => (0..c.triangles.len())
            .filter(|&ti| c.triangles[ti].vertices.contains(&v))
            .collect(),
        ComplexPoint::Edge { edge, .. } => c.edge_tris[edge].clone(),
        ComplexPoint::Tri { tri, .. } => vec![tri],
    }
}

fn validate_point(c: &TriComplex, p: &ComplexPoint) -> Result<()> {
    match *p {
        ComplexPoint::Vertex(v) if v < c.n_vertices => Ok(()),
        ComplexPoint::Edge { edge, t } if edge < c.edges.len() && (0.0..=1.0).contains(&t) => Ok(()),
        ComplexPoint::Tri { tri, bary } if tri < c.triangles.len() => {
            let s: f64 = bary.iter().sum();
            if bary.iter().all(|&b| b >= -1e-12) && (s - 1.0).abs() <= 1e-12 {
                Ok(())
            } else {
                Err(GeomError::BadInput("invalid barycentric coordinates".into()))
            }
        }
        _ => Err(GeomError::BadInput("complex point out of range".into())),
    }
}

/// Nodes on the closed boundary of triangle `ti`, as
/// (node id, local corner of the side start, parameter along that side).
fn triangle_nodes(
    c: &TriComplex,
    nodes_on_edge: &[Vec<(usize, f64)>],
    ti: usize,
) -> Vec<(usize, usize, f64)> {
    let t = &c.triangles[ti];
    let mut out = Vec::new();
    for i in 0..3 {
        let (u, v) = (t.vertices[i], t.vertices[(i + 1) % 3]);
        let ei = c.edge_id(u, v).unwrap();
        let forward = c.edges[ei].0 == u;
        for &(node, te) in &nodes_on_edge[ei] {
            let t_local = if forward { te } else { 1.0 - te };
            // Skip each side's far endpoint so vertices appear once.
            if t_local < 1.0 {
                out.push((node, i, t_local));
            }
        }
    }
    out
}

/// Embed a point at parameter `t` along side `corner -> corner+1` of triangle
/// `ti` in its canonical model layout.
fn embed_on_side(c: &TriComplex, ti: usize, corner: usize, t: f64) -> ModelPoint {
    let (p0, p1, p2) = c.layout(ti);
    let corners = [p0, p1, p2];
    let a = corners[corner];
    let b = corners[(corner + 1) % 3];
    if t == 0.0 {
        return a;
    }
    geodesic_point(c.kappa(), &a, &b, t).expect("side geodesic")
}

fn embed_point(c: &TriComplex, ti: usize, p: &ComplexPoint) -> ModelPoint {
    let t = &c.triangles[ti];
    match *p {
        ComplexPoint::Vertex(v) => {
            let i = t.vertices.iter().position(|&u| u == v).expect("incident");
            let (p0, p1, p2) = c.layout(ti);
            [p0, p1, p2][i]
        }
        ComplexPoint::Edge { edge, t: te } => {
            let (u, v) = c.edges[edge];
            let i = t.vertices.iter().position(|&w| w == u).expect("incident");
            let j = t.vertices.iter().position(|&w| w == v).expect("incident");
            let (p0, p1, p2) = c.layout(ti);
            let corners = [p0, p1, p2];
            geodesic_point(c.kappa(), &corners[i], &corners[j], te).expect("edge geodesic")
        }
        ComplexPoint::Tri { tri, bary } => {
            assert_eq!(tri, ti);
            let (p0, p1, p2) = c.layout(ti);
            match (p0, p1, p2) {
                (
                    ModelPoint::Flat { x: x0, y: y0 },
                    ModelPoint::Flat { x: x1, y: y1 },
                    ModelPoint::Flat { x: x2, y: y2 },
                ) => ModelPoint::flat(
                    bary[0] * x0 + bary[1] * x1 + bary[2] * x2,
                    bary[0] * y0 + bary[1] * y1 + bary[2] * y2,
                ),
                (ModelPoint::Sphere(a), ModelPoint::Sphere(b), ModelPoint::Sphere(cc)) => {
                    ModelPoint::sphere(weighted3(&bary, &a, &b, &cc)).expect("cap point")
                }
                (
                    ModelPoint::Hyperboloid(a),
                    ModelPoint::Hyperboloid(b),
                    ModelPoint::Hyperboloid(cc),
                ) => ModelPoint::hyperboloid(weighted3(&bary, &a, &b, &cc)).expect("sheet point"),
                _ => unreachable!(),
            }
        }
    }
}

fn weighted3(w: &[f64; 3], a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> [f64; 3] {
    [
        w[0] * a[0] + w[1] * b[0] + w[2] * c[0],
        w[0] * a[1] + w[1] * b[1] + w[2] * c[1],
        w[0] * a[2] + w[1] * b[2] + w[2] * c[2],
    ]
}

/// Model distance between two points through a common triangle's chart.
pub fn intra_triangle_distance(
    c: &TriComplex,
    ti: usize,
    p: &ComplexPoint,
    q: &ComplexPoint,
) -> Result<f64> {
    let pe = embed_point(c, ti, p);
    let qe = embed_point(c, ti, q);
    model_distance(c.kappa(), &pe, &qe)
}

/// Convenience wrapper: build the Steiner graph at spacing `h` and query one
/// distance. The result over-estimates the true intrinsic distance.
pub fn approx_distance(c: &TriComplex, p: &ComplexPoint, q: &ComplexPoint, h: f64) -> Result<f64> {
    SteinerGraph::new(c, h)?.distance(p, q)
}

/// Two unit right triangles forming the unit square.
pub fn unit_square_complex(kappa: Kappa) -> TriComplex {
    let s = 2f64.sqrt();
    TriComplex::new(
        kappa,
        vec![
            Triangle {
                vertices: [0, 1, 2],
                lengths: [1.0, 1.0, s],
            },
            Triangle {
                vertices: [0, 2, 3],
                lengths: [s, 1.0, 1.0],
            },
        ],
    )
    .unwrap()
}

/// Axis-aligned n-by-m grid of unit cells, each split along its diagonal.
/// Vertex (i, j) has id j * (n + 1) + i; coordinates are (i, j).
pub fn grid_complex(n: usize, m: usize) -> TriComplex {
    let s = 2f64.sqrt();
    let id = |i: usize, j: usize| j * (n + 1) + i;
    let mut tris = Vec::new();
    for j in 0..m {
        for i in 0..n {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            tris.push(Triangle {
                vertices: [a, b, c],
                lengths: [1.0, 1.0, s],
            });
            tris.push(Triangle {
                vertices: [a, c, d],
                lengths: [s, 1.0, 1.0],
            });
        }
    }
    TriComplex::new(Kappa::flat(), tris).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn square_passes_link_check() {
        let c = unit_square_complex(Kappa::flat());
        let report = link_girth_check(&c);
        assert!(report.pass, "worst = {}", report.worst_loop_length);
    }

    #[test]
    fn cone_fails_link_check() {
        // Four triangles around an interior apex, total angle 3*pi/2.
        let apex_angle = 3.0 * PI / 8.0;
        let base = 2.0 * (apex_angle / 2.0).sin();
        let mut tris = Vec::new();
        for k in 0..4usize {
            let a = 1 + k;
            let b = 1 + (k + 1) % 4;
            tris.push(Triangle {
                vertices: [0, a, b],
                lengths: [1.0, base, 1.0],
            });
        }
        let c = TriComplex::new(Kappa::flat(), tris).unwrap();
        let report = link_girth_check(&c);
        assert!(!report.pass);
        assert_eq!(report.worst_vertex, Some(0));
        assert!((report.worst_loop_length - 3.0 * PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn book_of_three_pages_passes() {
        let s = 2f64.sqrt();
        let tris = vec![
            Triangle {
                vertices: [0, 1, 2],
                lengths: [1.0, s, 1.0],
            },
            Triangle {
                vertices: [0, 1, 3],
                lengths: [1.0, s, 1.0],
            },
            Triangle {
                vertices: [0, 1, 4],
                lengths: [1.0, s, 1.0],
            },
        ];
        let c = TriComplex::new(Kappa::flat(), tris).unwrap();
        assert!(link_girth_check(&c).pass);
    }

    #[test]
    fn rejects_mismatched_gluing() {
        let r = TriComplex::new(
            Kappa::flat(),
            vec![
                Triangle {
                    vertices: [0, 1, 2],
                    lengths: [1.0, 1.0, 1.0],
                },
                Triangle {
                    vertices: [0, 1, 3],
                    lengths: [1.1, 1.0, 1.0],
                },
            ],
        );
        assert!(matches!(r, Err(GeomError::InvalidComplex(_))));
    }

    #[test]
    fn steiner_graph_counts() {
        let c = unit_square_complex(Kappa::flat());
        // h larger than every edge: only the 4 vertices remain.
        let g = SteinerGraph::new(&c, 2.0).unwrap();
        assert_eq!(g.node_count(), 4);
        // h = 0.25 puts 3 interior nodes on each unit edge.
        let g = SteinerGraph::new(&c, 0.25).unwrap();
        let unit_edges = c
            .edges()
            .iter()
            .enumerate()
            .filter(|(e, _)| (c.edge_length(*e) - 1.0).abs() < 1e-12)
            .count();
        assert_eq!(unit_edges, 4);
        // 4 vertices + 3 per unit edge + ceil(sqrt2/0.25)-1 = 5 on the diagonal.
        assert_eq!(g.node_count(), 4 + 4 * 3 + 5);
    }

    #[test]
    fn approx_distance_diagonal() {
        let c = unit_square_complex(Kappa::flat());
        let d = approx_distance(
            &c,
            &ComplexPoint::Vertex(0),
            &ComplexPoint::Vertex(2),
            0.05,
        )
        .unwrap();
        let exact = 2f64.sqrt();
        assert!(d >= exact - 1e-12, "lower than exact: {d}");
        assert!(d <= exact + 0.02, "d = {d}");
    }

    #[test]
    fn approx_distance_zero_for_same_point() {
        let c = unit_square_complex(Kappa::flat());
        let p = ComplexPoint::Edge { edge: 0, t: 0.3 };
        assert_eq!(approx_distance(&c, &p, &p, 0.25).unwrap(), 0.0);
    }

    /// Unfolding oracle for two triangles glued along one edge.
    fn unfolded_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
        ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
    }

    #[test]
    fn two_triangle_unfolding_agreement() {
        // Unit square as two triangles: 0=(0,0) 1=(1,0) 2=(1,1) 3=(0,1).
        let c = unit_square_complex(Kappa::flat());
        let h = 0.05;
        // Interior points of each triangle (planar coordinates below).
        let p = ComplexPoint::Tri {
            tri: 0,
            bary: [0.5, 0.3, 0.2],
        };
        let q = ComplexPoint::Tri {
            tri: 1,
            bary: [0.2, 0.3, 0.5],
        };
        // Planar positions: tri0 corners (0,0),(1,0),(1,1); tri1 (0,0),(1,1),(0,1).
        let pp = (0.5 * 0.0 + 0.3 * 1.0 + 0.2 * 1.0, 0.3 * 0.0 + 0.2 * 1.0);
        let qq = (0.2 * 0.0 + 0.3 * 1.0 + 0.5 * 0.0, 0.3 * 1.0 + 0.5 * 1.0);
        let exact = unfolded_distance(pp, qq);
        let d = approx_distance(&c, &p, &q, h).unwrap();
        assert!(d >= exact - 1e-9);
        assert!(d <= exact + 2.0 * h, "d = {d}, exact = {exact}");
    }

    #[test]
    fn approx_distance_monotone_in_h() {
        let c = grid_complex(2, 2);
        let p = ComplexPoint::Vertex(0);
        let q = ComplexPoint::Vertex(8); // opposite corner (2,2)
        let d1 = approx_distance(&c, &p, &q, 0.5).unwrap();
        let d2 = approx_distance(&c, &p, &q, 0.25).unwrap();
        let d3 = approx_distance(&c, &p, &q, 0.125).unwrap();
        let exact = 8f64.sqrt();
        assert!(d1 >= d2 - 1e-12 && d2 >= d3 - 1e-12);
        assert!(d3 >= exact - 1e-12);
        assert!(d3 - exact < d1 - exact + 1e-12);
    }
}
