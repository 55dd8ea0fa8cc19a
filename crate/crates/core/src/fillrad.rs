//! Filling radius of finite metric circles via Vietoris-Rips cycle death
//! over Z/2.
//!
//! `cycle_death_scale` finds the smallest Rips scale at which a given edge
//! cycle bounds, by a single incremental pass over the triangle filtration
//! (triangles sorted by longest edge) with column reduction; the cycle's
//! residual is reduced as pivots appear, so the first scale at which the
//! residual vanishes is the death scale. The witness 2-chain is tracked
//! explicitly and checked against the cycle before returning.

use crate::error::{GeomError, Result};
use serde::{Deserialize, Serialize};

/// Finite metric space as a dense symmetric matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteMetric {
    n: usize,
    d: Vec<f64>,
}

pub const TRIANGLE_TOL: f64 = 1e-9;

impl FiniteMetric {
    pub fn new(n: usize, d: Vec<f64>) -> Result<Self> {
        if d.len() != n * n {
            return Err(GeomError::BadInput(format!(
                "distance matrix has {} entries, expected {}",
                d.len(),
                n * n
            )));
        }
        let m = FiniteMetric { n, d };
        for i in 0..n {
            if m.dist(i, i) != 0.0 {
                return Err(GeomError::BadInput(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let dij = m.dist(i, j);
                if !(dij.is_finite() && dij >= 0.0) {
                    return Err(GeomError::BadInput(format!("invalid distance ({i},{j})")));
                }
                if dij != m.dist(j, i) {
                    return Err(GeomError::BadInput(format!("asymmetry at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    if m.dist(i, j) > m.dist(i, k) + m.dist(k, j) + TRIANGLE_TOL {
                        return Err(GeomError::BadInput(format!(
                            "triangle inequality fails for ({i},{j}) via {k}"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    /// Evenly spaced sample of a geodesic circle of the given circumference,
    /// with its intrinsic (arc-length) metric.
    pub fn circle(n: usize, circumference: f64) -> Self {
        let step = circumference / n as f64;
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let k = (i as i64 - j as i64).unsigned_abs() as usize;
                let k = k.min(n - k);
                d[i * n + j] = k as f64 * step;
            }
        }
        FiniteMetric { n, d }
    }

    pub fn from_points(points: &[crate::predicates::Point]) -> Self {
        let n = points.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d[i * n + j] = points[i].dist(&points[j]);
            }
        }
        FiniteMetric { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        FiniteMetric {
            n: self.n,
            d: self.d.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().cloned().fold(0.0, f64::max)
    }

    /// CSV: first line n, then n rows of comma-separated distances.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{}", self.dist(i, j))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| GeomError::BadInput("empty CSV".into()))?
            .trim()
            .parse()
            .map_err(|e| GeomError::BadInput(format!("bad point count: {e}")))?;
        let mut d = Vec::with_capacity(n * n);
        for _ in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| GeomError::BadInput("truncated CSV".into()))?;
            for field in line.split(',') {
                d.push(
                    field
                        .trim()
                        .parse()
                        .map_err(|e| GeomError::BadInput(format!("bad distance: {e}")))?,
                );
            }
        }
        FiniteMetric::new(n, d)
    }
}

/// Dense Z/2 vector as packed 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    fn zeros(bits: usize) -> Self {
        BitVec {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor_in(&mut self, other: &BitVec) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn max_bit(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(wi * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    fn iter_bits(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter_map(move |b| if w >> b & 1 == 1 { Some(wi * 64 + b) } else { None })
        })
    }
}

/// Result of a cycle-death computation.
#[derive(Clone, Debug)]
pub struct CycleDeath {
    /// Smallest Rips scale at which the cycle bounds; always an attained
    /// pairwise-distance value.
    pub scale: f64,
    /// Triangles (i < j < k) of a 2-chain whose Z/2 boundary is the cycle,
    /// all with longest edge at most `scale`.
    pub witness: Vec<[usize; 3]>,
}

fn edge_bit(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    i * n + j
}

fn cycle_bitvec(n: usize, z: &[(usize, usize)]) -> Result<BitVec> {
    let mut v = BitVec::zeros(n * n);
    let mut degree = vec![0usize; n];
    for &(a, b) in z {
        if a == b || a >= n || b >= n {
            return Err(GeomError::BadInput(format!("bad cycle edge ({a},{b})")));
        }
        let (i, j) = (a.min(b), a.max(b));
        if v.get(edge_bit(n, i, j)) {
            return Err(GeomError::BadInput(format!("repeated cycle edge ({a},{b})")));
        }
        v.flip(edge_bit(n, i, j));
        degree[a] += 1;
        degree[b] += 1;
    }
    if degree.iter().any(|&d| d % 2 != 0) {
        return Err(GeomError::NotACycle);
    }
    Ok(v)
}

/// Smallest Rips scale r* at which the edge cycle `z` becomes a Z/2 boundary.
pub fn cycle_death_scale(m: &FiniteMetric, z: &[(usize, usize)]) -> Result<CycleDeath> {
    let n = m.len();
    if z.is_empty() {
        return Err(GeomError::BadInput("empty cycle".into()));
    }
    let mut residual = cycle_bitvec(n, z)?;
    let admit_scale = z
        .iter()
        .map(|&(a, b)| m.dist(a, b))
        .fold(0.0f64, f64::max);
    if residual.is_zero() {
        return Ok(CycleDeath {
            scale: admit_scale,
            witness: Vec::new(),
        });
    }
    // Triangle filtration sorted by longest edge, ties by vertex triple.
    let mut tris: Vec<([usize; 3], f64)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let s = m.dist(i, j).max(m.dist(i, k)).max(m.dist(j, k));
                tris.push(([i, j, k], s));
            }
        }
    }
    tris.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));

    // Column reduction with witness combos tracked over pivot slots.
    struct PivotCol {
        edges: BitVec,
        /// Pivot slots whose origin triangles sum to `edges`.
        combo: BitVec,
    }
    let slot_capacity = n * (n - 1) / 2;
    let mut pivot_of_bit: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    let mut pivots: Vec<PivotCol> = Vec::new();
    let mut origins: Vec<[usize; 3]> = Vec::new();
    let mut res_combo = BitVec::zeros(slot_capacity);
    let reduce_residual =
        |residual: &mut BitVec, res_combo: &mut BitVec, pivots: &[PivotCol],
         pivot_of_bit: &std::collections::HashMap<usize, usize>| {
            while let Some(top) = residual.max_bit() {
                match pivot_of_bit.get(&top) {
                    Some(&p) => {
                        residual.xor_in(&pivots[p].edges);
                        res_combo.xor_in(&pivots[p].combo);
                    }
                    None => break,
                }
            }
        };
    for &(tri, scale) in &tris {
        let [i, j, k] = tri;
        let mut edges = BitVec::zeros(n * n);
        edges.flip(edge_bit(n, i, j));
        edges.flip(edge_bit(n, i, k));
        edges.flip(edge_bit(n, j, k));
        let mut combo = BitVec::zeros(slot_capacity);
        while let Some(top) = edges.max_bit() {
            match pivot_of_bit.get(&top) {
                Some(&p) => {
                    edges.xor_in(&pivots[p].edges);
                    combo.xor_in(&pivots[p].combo);
                }
                None => {
                    let slot = pivots.len();
                    combo.flip(slot);
                    pivot_of_bit.insert(top, slot);
                    pivots.push(PivotCol { edges, combo });
                    origins.push(tri);
                    break;
                }
            }
        }
        reduce_residual(&mut residual, &mut res_combo, &pivots, &pivot_of_bit);
        if residual.is_zero() {
            let witness: Vec<[usize; 3]> = res_combo.iter_bits().map(|s| origins[s]).collect();
            // Self-check: the witness boundary reproduces the cycle exactly.
            let mut check = BitVec::zeros(n * n);
            for &[a, b, c] in &witness {
                check.flip(edge_bit(n, a, b));
                check.flip(edge_bit(n, a, c));
                check.flip(edge_bit(n, b, c));
            }
            assert_eq!(check, cycle_bitvec(n, z)?, "witness boundary mismatch");
            let death = scale.max(admit_scale);
            debug_assert!(witness
                .iter()
                .all(|&[a, b, c]| m.dist(a, b).max(m.dist(a, c)).max(m.dist(b, c)) <= death));
            return Ok(CycleDeath {
                scale: death,
                witness,
            });
        }
    }
    Err(GeomError::NoDeath)
}

/// Finite-sample filling-radius estimator: half the Rips death scale of the
/// fundamental cycle. Converges to the absolute filling radius as the sample
/// densifies.
pub fn filling_radius_estimate(m: &FiniteMetric, z: &[(usize, usize)]) -> Result<f64> {
    Ok(cycle_death_scale(m, z)?.scale / 2.0)
}

/// The consecutive-edge fundamental cycle 0-1-...-(n-1)-0.
pub fn fundamental_cycle(n: usize) -> Vec<(usize, usize)> {
    (0..n).map(|i| (i, (i + 1) % n)).collect()
}

/// Report-only audit of the degenerate-curve picture: a chord scan decides
/// degeneracy, and for degenerate curves the boundary sample is checked to be
/// dense in the closed interior and to have a small filling radius under the
/// intrinsic metric.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DegeneracyAudit {
    pub degenerate: bool,
    /// Length of the longest cut found, when one refutes degeneracy.
    pub longest_cut: Option<f64>,
    /// Chord-scan threshold 2*delta*l.
    pub threshold: f64,
    /// Density bound delta*l + tol and worst interior distance to the sample.
    pub density_bound: f64,
    pub density_worst: Option<f64>,
    pub density_ok: Option<bool>,
    /// Filling-radius bound delta*l + tol and the measured estimate.
    pub fillrad_bound: f64,
    pub fillrad_value: Option<f64>,
    pub fillrad_ok: Option<bool>,
}

pub fn degeneracy_audit(
    curve: &crate::jordan::JordanPolygon,
    delta: f64,
    params: &crate::jordan::SearchParams,
) -> Result<DegeneracyAudit> {
    let ell = curve.length();
    let threshold = 2.0 * delta * ell;
    let samples = curve.boundary_samples(params.boundary_samples);
    // Resolution slack: one sample spacing plus numerical headroom.
    let tol = ell / params.boundary_samples.max(1) as f64 + 1e-9;
    let bound = delta * ell + tol;
    let mut audit = DegeneracyAudit {
        degenerate: false,
        longest_cut: None,
        threshold,
        density_bound: bound,
        density_worst: None,
        density_ok: None,
        fillrad_bound: bound,
        fillrad_value: None,
        fillrad_ok: None,
    };
    if let Some(c) = crate::jordan::find_long_cut(curve, threshold, params) {
        audit.longest_cut = Some(c.length);
        return Ok(audit);
    }
    audit.degenerate = true;
    // Interior grid, capped so the visibility graph stays small.
    let verts = curve.vertices();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for v in verts {
        x0 = x0.min(v.x);
        y0 = y0.min(v.y);
        x1 = x1.max(v.x);
        y1 = y1.max(v.y);
    }
    let cells = 30usize;
    let mut grid = Vec::new();
    for i in 0..=cells {
        for j in 0..=cells {
            let p = crate::predicates::Point::new(
                x0 + (x1 - x0) * i as f64 / cells as f64,
                y0 + (y1 - y0) * j as f64 / cells as f64,
            );
            if curve.interior().locate(p) == crate::polygon::Location::Inside {
                grid.push(p);
            }
        }
    }
    let mut extras: Vec<crate::predicates::Point> = samples.iter().map(|s| s.inside).collect();
    let n_samples = extras.len();
    extras.extend(grid.iter().copied());
    let graph = crate::polygon::VisGraph::new(curve.interior(), &extras);
    let sample_nodes: Vec<usize> = extras[..n_samples]
        .iter()
        .map(|p| graph.node_index(*p).expect("sample node"))
        .collect();
    let grid_nodes: Vec<usize> = extras[n_samples..]
        .iter()
        .map(|p| graph.node_index(*p).expect("grid node"))
        .collect();
    // Intrinsic distances from every boundary sample.
    let mut to_grid = vec![f64::INFINITY; grid_nodes.len()];
    let mut dmat = vec![0.0f64; n_samples * n_samples];
    for (i, &src) in sample_nodes.iter().enumerate() {
        let (dist, _) = graph.distances_from(src);
        for (g, &gn) in grid_nodes.iter().enumerate() {
            to_grid[g] = to_grid[g].min(dist[gn]);
        }
        for (j, &sn) in sample_nodes.iter().enumerate() {
            dmat[i * n_samples + j] = dist[sn];
        }
    }
    let density_worst = to_grid.iter().copied().fold(0.0, f64::max);
    audit.density_worst = Some(density_worst);
    audit.density_ok = Some(density_worst.is_finite() && density_worst <= bound);
    // Filling radius of the sampled curve under the intrinsic metric.
    for i in 0..n_samples {
        for j in (i + 1)..n_samples {
            let d = dmat[i * n_samples + j].min(dmat[j * n_samples + i]);
            dmat[i * n_samples + j] = d;
            dmat[j * n_samples + i] = d;
        }
        dmat[i * n_samples + i] = 0.0;
    }
    let metric = FiniteMetric::new(n_samples, dmat)?;
    let r = filling_radius_estimate(&metric, &fundamental_cycle(n_samples))?;
    audit.fillrad_value = Some(r);
    audit.fillrad_ok = Some(r <= bound);
    Ok(audit)
}
