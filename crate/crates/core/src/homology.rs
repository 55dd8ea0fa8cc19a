//! Integer simplicial homology on triangle complexes: H1 triviality, filling
//! 1-cycles by 2-chains, support sets of the filling class, and a
//! geodesic-extension probe over the support.
//!
//! Orientation conventions: edges are oriented from the smaller to the larger
//! vertex id; triangles by their stored vertex order. All arithmetic is exact
//! over arbitrary-precision integers (Smith normal form), so results carry no
//! rounding error.

use crate::complex::{dijkstra, ComplexPoint, SteinerGraph, SteinerSite, TriComplex};
use crate::error::{GeomError, Result};
use crate::rng::CounterRng;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashSet};

/// Sparse chain with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub degree: u8,
    coefficients: BTreeMap<usize, BigInt>,
}

impl Chain {
    pub fn new(degree: u8) -> Self {
        Chain {
            degree,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, i64)>>(degree: u8, pairs: I) -> Self {
        let mut c = Chain::new(degree);
        for (id, k) in pairs {
            c.add(id, BigInt::from(k));
        }
        c
    }

    /// Add `k` to the coefficient of simplex `id`, dropping zeros.
    pub fn add(&mut self, id: usize, k: BigInt) {
        let entry = self.coefficients.entry(id).or_insert_with(BigInt::zero);
        *entry += k;
        if entry.is_zero() {
            self.coefficients.remove(&id);
        }
    }

    pub fn coefficient(&self, id: usize) -> BigInt {
        self.coefficients.get(&id).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coefficients.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coefficients.iter().map(|(&id, k)| (id, k))
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

impl serde::Serialize for Chain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.coefficients.len()))?;
        for (id, k) in &self.coefficients {
            map.serialize_entry(&id.to_string(), &k.to_string())?;
        }
        map.end()
    }
}

/// Boundary of the oriented triangle `ti` as signed edge incidences.
fn triangle_boundary(c: &TriComplex, ti: usize) -> [(usize, i64); 3] {
    let t = &c.triangles()[ti];
    let mut out = [(0usize, 0i64); 3];
    for i in 0..3 {
        let (u, v) = (t.vertices[i], t.vertices[(i + 1) % 3]);
        let e = c.edge_id(u, v).expect("edge of triangle");
        out[i] = (e, if u < v { 1 } else { -1 });
    }
    out
}

/// Boundary of a degree-2 chain.
pub fn boundary_2(c: &TriComplex, x: &Chain) -> Chain {
    assert_eq!(x.degree, 2);
    let mut z = Chain::new(1);
    for (ti, k) in x.iter() {
        for (e, s) in triangle_boundary(c, ti) {
            z.add(e, k * s);
        }
    }
    z
}

/// Boundary of a degree-1 chain (signed vertex incidences).
pub fn boundary_1(c: &TriComplex, z: &Chain) -> BTreeMap<usize, BigInt> {
    assert_eq!(z.degree, 1);
    let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (e, k) in z.iter() {
        let (u, v) = c.edges()[e];
        for (w, s) in [(v, 1), (u, -1)] {
            let entry = out.entry(w).or_insert_with(BigInt::zero);
            *entry += k * s;
            if entry.is_zero() {
                out.remove(&w);
            }
        }
    }
    out
}

/// Smith normal form S = U A V with unimodular U (rows) and V (cols).
struct Snf {
    diag: Vec<BigInt>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

fn smith_normal_form(mut a: Vec<Vec<BigInt>>) -> Snf {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut u: Vec<Vec<BigInt>> = identity(m);
    let mut v: Vec<Vec<BigInt>> = identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // Pivot: smallest nonzero magnitude at or beyond (t, t).
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero()
                    && pivot.map_or(true, |(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        // Clear row and column t; a failed exact division re-enters with a
        // smaller pivot, so this terminates.
        loop {
            let mut clean = true;
            for i in (t + 1)..m {
                if !a[i][t].is_zero() {
                    let q = div_round(&a[i][t], &a[t][t]);
                    row_sub(&mut a, i, t, &q);
                    row_sub(&mut u, i, t, &q);
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        u.swap(t, i);
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..n {
                if !a[t][j].is_zero() {
                    let q = div_round(&a[t][j], &a[t][t]);
                    col_sub(&mut a, j, t, &q);
                    col_sub(&mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        swap_cols(&mut a, t, j);
                        swap_cols(&mut v, t, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        // Divisibility: fold any entry the pivot does not divide into column t.
        let mut redo = false;
        'outer: for i in (t + 1)..m {
            for j in (t + 1)..n {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    let one = BigInt::one();
                    col_sub(&mut a, t, j, &(-&one));
                    col_sub(&mut v, t, j, &(-&one));
                    redo = true;
                    break 'outer;
                }
            }
        }
        if redo {
            continue;
        }
        if a[t][t].is_negative() {
            for j in 0..n {
                a[t][j] = -a[t][j].clone();
            }
            for j in 0..m {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    let diag = (0..m.min(n)).map(|i| a[i][i].clone()).collect();
    Snf { diag, u, v }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// row[i] -= q * row[k]
fn row_sub(a: &mut [Vec<BigInt>], i: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let rk = a[k].clone();
    for (x, y) in a[i].iter_mut().zip(rk.iter()) {
        *x -= q * y;
    }
}

/// col[j] -= q * col[k]
fn col_sub(a: &mut [Vec<BigInt>], j: usize, k: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let t = &row[k] * q;
        row[j] -= t;
    }
}

/// Quotient rounding toward the nearest integer keeps remainders small.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = (a / b, a % b);
    if &r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn d2_matrix(c: &TriComplex) -> Vec<Vec<BigInt>> {
    let m = c.edges().len();
    let n = c.triangles().len();
    let mut a = vec![vec![BigInt::zero(); n]; m];
    for ti in 0..n {
        for (e, s) in triangle_boundary(c, ti) {
            a[e][ti] += BigInt::from(s);
        }
    }
    a
}

fn d1_rank(c: &TriComplex) -> usize {
    // rank of d1 = (#used vertices) - (#connected components); integer rank
    // equals rational rank for incidence matrices.
    let mut used: Vec<usize> = c
        .triangles()
        .iter()
        .flat_map(|t| t.vertices.iter().copied())
        .collect();
    used.sort_unstable();
    used.dedup();
    let index: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut dsu: Vec<usize> = (0..used.len()).collect();
    fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
        if dsu[x] != x {
            let r = find(dsu, dsu[x]);
            dsu[x] = r;
        }
        dsu[x]
    }
    for &(u, v) in c.edges() {
        let (a, b) = (find(&mut dsu, index[&u]), find(&mut dsu, index[&v]));
        if a != b {
            dsu[a] = b;
        }
    }
    let comps: HashSet<usize> = (0..used.len()).map(|i| find(&mut dsu, i)).collect();
    used.len() - comps.len()
}

/// Connected components of the vertex graph (vertices used by triangles).
pub fn component_count(c: &TriComplex) -> usize {
    let used: HashSet<usize> = c
        .triangles()
        .iter()
        .flat_map(|t| t.vertices.iter().copied())
        .collect();
    used.len() - d1_rank(c)
}

/// H1(c; Z) = 0, decided by integer Smith normal form of the boundary maps.
pub fn h1_is_trivial(c: &TriComplex) -> bool {
    let snf = smith_normal_form(d2_matrix(c));
    let rank2 = snf.diag.iter().filter(|d| !d.is_zero()).count();
    let cycle_rank = c.edges().len() - d1_rank(c);
    rank2 == cycle_rank && snf.diag.iter().take(rank2).all(|d| d.abs().is_one())
}

/// H2(c; Z) = ker d2 = 0 (no 3-cells).
pub fn h2_is_trivial(c: &TriComplex) -> bool {
    let snf = smith_normal_form(d2_matrix(c));
    let rank2 = snf.diag.iter().filter(|d| !d.is_zero()).count();
    rank2 == c.triangles().len()
}

/// Solve d2 x = z over Z. The result is verified by direct boundary
/// evaluation before returning.
pub fn fill_cycle(c: &TriComplex, z: &Chain) -> Result<Chain> {
    if z.degree != 1 {
        return Err(GeomError::BadInput("fill_cycle expects a 1-chain".into()));
    }
    for (e, _) in z.iter() {
        if e >= c.edges().len() {
            return Err(GeomError::BadInput(format!("edge id {e} out of range")));
        }
    }
    if !boundary_1(c, z).is_empty() {
        return Err(GeomError::NotACycle);
    }
    let m = c.edges().len();
    let n = c.triangles().len();
    let snf = smith_normal_form(d2_matrix(c));
    // b = U z
    let b: Vec<BigInt> = (0..m)
        .map(|i| {
            z.iter()
                .map(|(e, k)| &snf.u[i][e] * k)
                .fold(BigInt::zero(), |acc, t| acc + t)
        })
        .collect();
    let mut w = vec![BigInt::zero(); n];
    for i in 0..m {
        let s = if i < snf.diag.len() {
            snf.diag[i].clone()
        } else {
            BigInt::zero()
        };
        if s.is_zero() {
            if !b[i].is_zero() {
                return Err(GeomError::NotNullHomologous);
            }
        } else {
            let (q, r) = (&b[i] / &s, &b[i] % &s);
            if !r.is_zero() {
                return Err(GeomError::NotNullHomologous);
            }
            w[i] = q;
        }
    }
    let mut x = Chain::new(2);
    for ti in 0..n {
        let coeff = (0..n)
            .map(|j| &snf.v[ti][j] * &w[j])
            .fold(BigInt::zero(), |acc, t| acc + t);
        if !coeff.is_zero() {
            x.add(ti, coeff);
        }
    }
    assert_eq!(boundary_2(c, &x), *z, "filling chain failed its boundary check");
    Ok(x)
}

/// Support of the unique filling class of `z` on a contractible ambient
/// complex: the triangles carrying a nonzero coefficient.
pub fn support_set(c: &TriComplex, z: &Chain) -> Result<HashSet<usize>> {
    if component_count(c) != 1 || !h1_is_trivial(c) || !h2_is_trivial(c) {
        return Err(GeomError::AmbiguousSupport);
    }
    let x = fill_cycle(c, z)?;
    let support: HashSet<usize> = x.support().collect();
    // Frontier of the support must equal the carrier of z.
    let carrier: HashSet<usize> = z.support().collect();
    let mut frontier = HashSet::new();
    for e in 0..c.edges().len() {
        let tris = c.edge_triangles(e);
        let inside = tris.iter().filter(|t| support.contains(t)).count();
        if inside >= 1 && (inside < tris.len() || tris.len() == 1) {
            frontier.insert(e);
        }
    }
    if frontier != carrier {
        return Err(GeomError::Precondition(
            "support frontier does not match the cycle carrier".into(),
        ));
    }
    Ok(support)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ProbeViolation {
    pub trial: usize,
    /// Distance by which the extension left the closed support.
    pub excess: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ProbeReport {
    pub trials: usize,
    pub spacing: f64,
    pub violations: Vec<ProbeViolation>,
}

/// For random pairs (x in the complex, p interior to the support), extend the
/// Steiner geodesic x -> p greedily beyond p and record how far it strays from
/// the closed support before reaching the cycle carrier.
pub fn geodesic_extension_probe(
    c: &TriComplex,
    support: &HashSet<usize>,
    carrier_edges: &HashSet<usize>,
    trials: usize,
    h: f64,
    rng: &mut CounterRng,
) -> Result<ProbeReport> {
    let mut report = ProbeReport {
        trials,
        spacing: h,
        violations: Vec::new(),
    };
    if trials == 0 {
        return Ok(report);
    }
    let graph = SteinerGraph::new(c, h)?;
    let support_vec: Vec<usize> = {
        let mut v: Vec<usize> = support.iter().copied().collect();
        v.sort_unstable();
        v
    };
    if support_vec.is_empty() {
        return Err(GeomError::Precondition("empty support".into()));
    }
    let on_carrier = |site: &SteinerSite| -> bool {
        match *site {
            SteinerSite::Vertex(v) => carrier_edges.iter().any(|&e| {
                let (a, b) = c.edges()[e];
                a == v || b == v
            }),
            SteinerSite::Edge { edge, .. } => carrier_edges.contains(&edge),
        }
    };
    let in_closed_support = |site: &SteinerSite| -> bool {
        match *site {
            SteinerSite::Vertex(v) => support_vec
                .iter()
                .any(|&ti| c.triangles()[ti].vertices.contains(&v)),
            SteinerSite::Edge { edge, .. } => c
                .edge_triangles(edge)
                .iter()
                .any(|t| support.contains(t)),
        }
    };
    let n = graph.node_count();
    for trial in 0..trials {
        // Random interior point of a random support triangle.
        let ti = support_vec[rng.next_below(support_vec.len())];
        let (mut b0, mut b1) = (rng.next_f64(), rng.next_f64());
        if b0 + b1 > 1.0 {
            b0 = 1.0 - b0;
            b1 = 1.0 - b1;
        }
        let p = ComplexPoint::Tri {
            tri: ti,
            bary: [b0, b1, 1.0 - b0 - b1],
        };
        let x = rng.next_below(n);
        // Distances from x over the graph with p attached as node n.
        let mut adj: Vec<Vec<(usize, f64)>> = (0..n).map(|i| graph.neighbors(i).to_vec()).collect();
        let pa = attach_point(&graph, &p);
        adj.push(pa.clone());
        for &(v, w) in &pa {
            adj[v].push((n, w));
        }
        let (dist, _) = dijkstra(&adj, x);
        if !dist[n].is_finite() {
            continue;
        }
        // Greedy extension: steepest ascent of d(x, .) starting from p.
        let mut cur = n;
        let mut worst_excess: f64 = 0.0;
        loop {
            let mut best: Option<(usize, f64)> = None;
            for &(nb, w) in &adj[cur] {
                if dist[nb] > dist[cur] + 1e-12 {
                    let slope = (dist[nb] - dist[cur]) / w;
                    if best.map_or(true, |(_, s)| slope > s) {
                        best = Some((nb, slope));
                    }
                }
            }
            let Some((next, _)) = best else { break };
            cur = next;
            if cur < n {
                let site = graph.sites()[cur];
                if on_carrier(&site) {
                    break;
                }
                if !in_closed_support(&site) {
                    // Distance from the node back to the nearest support
                    // triangle, measured through the graph.
                    let excess = distance_to_support(&graph, cur, support);
                    worst_excess = worst_excess.max(excess);
                }
            }
        }
        if worst_excess > 2.0 * h {
            report.violations.push(ProbeViolation {
                trial,
                excess: worst_excess,
            });
        }
    }
    Ok(report)
}

fn attach_point(graph: &SteinerGraph<'_>, p: &ComplexPoint) -> Vec<(usize, f64)> {
    let c = graph.complex();
    let tris: Vec<usize> = match *p {
        ComplexPoint::Tri { tri, .. } => vec![tri],
        ComplexPoint::Vertex(v) => (0..c.triangles().len())
            .filter(|&ti| c.triangles()[ti].vertices.contains(&v))
            .collect(),
        ComplexPoint::Edge { edge, .. } => c.edge_triangles(edge).to_vec(),
    };
    let mut out: Vec<(usize, f64)> = Vec::new();
    for ti in tris {
        for node in 0..graph.node_count() {
            let touches = match graph.sites()[node] {
                SteinerSite::Vertex(v) => c.triangles()[ti].vertices.contains(&v),
                SteinerSite::Edge { edge, .. } => c.edge_triangles(edge).contains(&ti),
            };
            if touches {
                let q = site_point(graph.sites()[node]);
                if let Ok(d) = crate::complex::intra_triangle_distance(c, ti, p, &q) {
                    match out.iter_mut().find(|(nd, _)| *nd == node) {
                        Some(entry) => entry.1 = entry.1.min(d),
                        None => out.push((node, d)),
                    }
                }
            }
        }
    }
    out
}

fn site_point(site: SteinerSite) -> ComplexPoint {
    match site {
        SteinerSite::Vertex(v) => ComplexPoint::Vertex(v),
        SteinerSite::Edge { edge, t } => ComplexPoint::Edge { edge, t },
    }
}

fn distance_to_support(graph: &SteinerGraph<'_>, node: usize, support: &HashSet<usize>) -> f64 {
    let (dist, _) = graph.distances_from(node);
    let mut best = f64::INFINITY;
    for other in 0..graph.node_count() {
        let touches = graph
            .node_triangles(other)
            .iter()
            .any(|t| support.contains(t));
        if touches {
            best = best.min(dist[other]);
        }
    }
    best
}
