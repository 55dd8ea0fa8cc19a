//! Acceptance gate: every criterion prints one pass/fail line and the whole
//! test fails unless all criteria hold. Run with `--nocapture` to see the
//! per-criterion lines.

use cat2d::complex::{grid_complex, TriComplex};
use cat2d::fillrad::{
    degeneracy_audit, filling_radius_estimate, fundamental_cycle, FiniteMetric,
};
use cat2d::homology::{boundary_2, fill_cycle, h1_is_trivial, support_set, Chain};
use cat2d::jordan::{
    delta_theory, essential_cut_degenerate, iterated_cut, JordanPolygon, SearchParams,
    DEFAULT_LEAF_BUDGET,
};
use cat2d::majorize::{assemble_limit_majorization, lipschitz_excess};
use cat2d::model::{
    comparison_angle, comparison_triangle, geodesic_point, model_distance, Kappa, ModelPoint,
};
use cat2d::polygon::{polygon_domain_distance, PolygonDomain};
use cat2d::predicates::{point_segment_distance, Point};
use cat2d::rng::CounterRng;
use cat2d::verify::{
    exhaustive_comparison_search, verify_theorem_1_1, SceneRef, SphericalCap,
    Verdict, VerifyBudget,
};
use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;
use std::time::Instant;

const SEED: u64 = 0xC2D0;

struct Outcome {
    pass: bool,
    line: String,
    /// Serialized result used for the byte-identity criterion.
    report: String,
}

fn outcome(pass: bool, line: impl Into<String>, report: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        line: line.into(),
        report: report.into(),
    }
}

// ---------------------------------------------------------------- criterion 1

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let mut worst_side = 0.0f64;
    let mut worst_angle = 0.0f64;
    let mut worst_flat_angle = 0.0f64;
    for kv in [-1.0, 0.0, 1.0] {
        let kappa = Kappa::new(kv);
        let mut rng = CounterRng::new(SEED).stream("acceptance-c1");
        for _ in 0..100_000 {
            let a = rng.in_range(0.05, 1.2);
            let b = rng.in_range(0.05, 1.2);
            let lo = (a - b).abs() + 1e-3;
            let hi = a + b - 1e-3;
            if lo >= hi {
                continue;
            }
            let c = rng.in_range(lo, hi);
            let (va, vb, vc) = comparison_triangle(&kappa, a, b, c).unwrap();
            let ma = model_distance(&kappa, &va, &vb).unwrap();
            let mb = model_distance(&kappa, &va, &vc).unwrap();
            let mc = model_distance(&kappa, &vb, &vc).unwrap();
            worst_side = worst_side
                .max((ma - a).abs())
                .max((mb - b).abs())
                .max((mc - c).abs());
            // Angles recomputed from the measured side lengths must agree
            // with the angles of the requested sides.
            for (opp, adj1, adj2, mo, m1, m2) in
                [(c, a, b, mc, ma, mb), (b, a, c, mb, ma, mc), (a, b, c, ma, mb, mc)]
            {
                let alpha = comparison_angle(&kappa, opp, adj1, adj2).unwrap();
                let beta = comparison_angle(&kappa, mo, m1, m2).unwrap();
                worst_angle = worst_angle.max((alpha - beta).abs());
            }
            // Independent oracle in the flat chart: angle at corner 0 from
            // the embedded coordinates.
            if kv == 0.0 {
                if let (
                    ModelPoint::Flat { x: xa, y: ya },
                    ModelPoint::Flat { x: xb, y: yb },
                    ModelPoint::Flat { x: xc, y: yc },
                ) = (&va, &vb, &vc)
                {
                    let (ux, uy) = (xb - xa, yb - ya);
                    let (vx, vy) = (xc - xa, yc - ya);
                    let dot = ux * vx + uy * vy;
                    let cr = ux * vy - uy * vx;
                    let measured = cr.abs().atan2(dot);
                    let alpha = comparison_angle(&kappa, c, a, b).unwrap();
                    worst_flat_angle = worst_flat_angle.max((alpha - measured).abs());
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    let pass = worst_side <= 1e-10
        && worst_angle <= 1e-10
        && worst_flat_angle <= 1e-10
        && elapsed.as_secs_f64() < 10.0;
    outcome(
        pass,
        format!(
            "model kernel: side err {worst_side:.2e}, angle err {worst_angle:.2e}, \
             flat-chart angle err {worst_flat_angle:.2e}, {:.1}s",
            elapsed.as_secs_f64()
        ),
        format!("{worst_side:e},{worst_angle:e},{worst_flat_angle:e}"),
    )
}

// ---------------------------------------------------------------- criterion 2

fn star_polygon(rng: &mut CounterRng, n: usize) -> Vec<Point> {
    (0..n)
        .map(|k| {
            let jitter_span = 0.4 * PI / n as f64;
            let t = 2.0 * PI * k as f64 / n as f64 + rng.in_range(-jitter_span, jitter_span);
            let r = rng.in_range(0.3, 1.0);
            Point::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

fn criterion_2() -> Outcome {
    let t0 = Instant::now();
    let mut rng = CounterRng::new(SEED).stream("acceptance-c2");
    let budget = VerifyBudget {
        trials: 10_000,
        grid: 8,
        tol: 1e-9,
    };
    let mut pass = true;
    let mut reports = Vec::new();
    for i in 0..20 {
        let n = 5 + rng.next_below(8); // 5..=12 vertices
        let domain = PolygonDomain::new(star_polygon(&mut rng, n), vec![]).unwrap();
        let report =
            verify_theorem_1_1(&SceneRef::Planar(&domain), &Kappa::flat(), &budget, SEED + i)
                .unwrap();
        if report.verdict != Verdict::Consistent {
            pass = false;
        }
        reports.push(serde_json::to_string(&report).unwrap());
    }
    let elapsed = t0.elapsed();
    pass = pass && elapsed.as_secs_f64() < 60.0;
    outcome(
        pass,
        format!(
            "Jordan domains CONSISTENT: 20 polygons x 10^4 trials, {:.1}s",
            elapsed.as_secs_f64()
        ),
        reports.join("\n"),
    )
}

// ---------------------------------------------------------------- criterion 3

fn annulus_domain() -> PolygonDomain {
    PolygonDomain::new(
        vec![
            Point::new(0.0, 0.0),
            Point::new(3.0, 0.0),
            Point::new(3.0, 3.0),
            Point::new(0.0, 3.0),
        ],
        vec![vec![
            Point::new(1.0, 1.0),
            Point::new(2.0, 1.0),
            Point::new(2.0, 2.0),
            Point::new(1.0, 2.0),
        ]],
    )
    .unwrap()
}

/// Re-derive a planar witness from scratch: exact pairwise geodesics, the
/// geodesic midpoint by arclength, and the flat comparison bound.
fn reverify_planar_witness(
    domain: &PolygonDomain,
    pa: Point,
    pb: Point,
    pc: Point,
    t: f64,
) -> f64 {
    let kappa = Kappa::flat();
    let (dab, _) = polygon_domain_distance(domain, pa, pb).unwrap();
    let (dac, _) = polygon_domain_distance(domain, pa, pc).unwrap();
    let (dbc, path) = polygon_domain_distance(domain, pb, pc).unwrap();
    let mut target = t * dbc;
    let mut m = path[0];
    for w in path.windows(2) {
        let seg = w[0].dist(&w[1]);
        if target <= seg {
            m = w[0].lerp(&w[1], target / seg);
            break;
        }
        target -= seg;
        m = w[1];
    }
    let (dam, _) = polygon_domain_distance(domain, pa, m).unwrap();
    let (va, vb, vc) = comparison_triangle(&kappa, dab, dac, dbc).unwrap();
    let mbar = geodesic_point(&kappa, &vb, &vc, t).unwrap();
    let bound = model_distance(&kappa, &va, &mbar).unwrap();
    dam - bound
}

fn criterion_3() -> Outcome {
    let t0 = Instant::now();
    let domain = annulus_domain();
    let space = cat2d::verify::PlanarSpace::new(&domain, 6).unwrap();
    let search = exhaustive_comparison_search(&space, &Kappa::flat(), 1e-9).unwrap();
    let annulus_found = !search.pass && !search.witnesses.is_empty();
    let mut reverified = 0.0f64;
    if annulus_found {
        let w = &search.witnesses[0];
        let pts = space.samples();
        reverified = reverify_planar_witness(&domain, pts[w.a], pts[w.b], pts[w.c], w.t);
    }
    let budget = VerifyBudget {
        trials: 4_000,
        grid: 6,
        tol: 1e-9,
    };
    let theorem = verify_theorem_1_1(&SceneRef::Planar(&domain), &Kappa::flat(), &budget, SEED)
        .unwrap();
    let annulus_elapsed = t0.elapsed();

    let t1 = Instant::now();
    let cap = SphericalCap::new(2.0, 24).unwrap();
    let cap_search = exhaustive_comparison_search(&cap, &Kappa::new(1.0), 1e-9).unwrap();
    let cap_margin = cap_search
        .witnesses
        .first()
        .map(|w| w.margin)
        .unwrap_or(0.0);
    let cap_elapsed = t1.elapsed();

    let pass = annulus_found
        && reverified > 1e-6
        && theorem.verdict == Verdict::Violation
        && !theorem.h1_trivial
        && !cap_search.pass
        && cap_margin > 0.5
        && annulus_elapsed.as_secs_f64() < 30.0
        && cap_elapsed.as_secs_f64() < 30.0;
    outcome(
        pass,
        format!(
            "counterexamples: annulus margin {reverified:.3} (re-verified exactly), \
             cap(2.0) margin {cap_margin:.3}, {:.1}s + {:.1}s",
            annulus_elapsed.as_secs_f64(),
            cap_elapsed.as_secs_f64()
        ),
        format!(
            "{}\n{}\n{}",
            serde_json::to_string(&search).unwrap(),
            serde_json::to_string(&theorem).unwrap(),
            serde_json::to_string(&cap_search).unwrap()
        ),
    )
}

// ---------------------------------------------------------------- criterion 4

fn unit_square() -> JordanPolygon {
    JordanPolygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ])
    .unwrap()
}

fn criterion_4() -> Outcome {
    let t0 = Instant::now();
    let curve = unit_square();
    let eps = 0.25 * curve.diameter();
    let delta = delta_theory(eps);
    let params = SearchParams::for_epsilon(curve.length(), eps);
    let tree = iterated_cut(&curve, eps, DEFAULT_LEAF_BUDGET, &params).unwrap();
    let leaves = tree.leaves();
    let root_len = tree.nodes[tree.root].curve.length();
    let mut cert_ok = true;
    for i in 0..tree.nodes.len() {
        let node = &tree.nodes[i];
        // Per-fold certificate: after k completed 2-fold rounds the
        // perimeter has shrunk by (1 - delta)^k.
        if node.curve.length() > (1.0 - delta).powi(node.fold_depth as i32) * root_len + 1e-9 {
            cert_ok = false;
        }
        if !node.containment_ok {
            cert_ok = false;
        }
    }
    let elapsed = t0.elapsed();
    let max_leaf = tree.max_leaf_diameter();
    let pass = tree.complete
        && max_leaf <= eps + 1e-12
        && leaves.len() <= 1 << 10
        && cert_ok
        && elapsed.as_secs_f64() < 60.0;
    outcome(
        pass,
        format!(
            "cutting pipeline: {} leaves, max diameter {max_leaf:.4} <= {eps:.4}, \
             certificates and containment hold, {:.1}s",
            leaves.len(),
            elapsed.as_secs_f64()
        ),
        serde_json::to_string(&tree.to_json()).unwrap(),
    )
}

// ---------------------------------------------------------------- criterion 5

fn zigzag_strip(teeth: usize) -> JordanPolygon {
    let (step, amp, width) = (0.5, 1.0, 0.05);
    let mut ring: Vec<Point> = (0..=teeth)
        .map(|k| Point::new(k as f64 * step, if k % 2 == 0 { 0.0 } else { amp }))
        .collect();
    let top: Vec<Point> = ring
        .iter()
        .rev()
        .map(|p| Point::new(p.x, p.y + width))
        .collect();
    ring.extend(top);
    JordanPolygon::new(ring).unwrap()
}

fn degenerate_case(curve: &JordanPolygon, delta: f64) -> (bool, String) {
    let params = SearchParams::default();
    let ell = curve.length();
    let cut = match essential_cut_degenerate(curve, delta, &params) {
        Ok(c) => c,
        Err(e) => return (false, format!("cut failed: {e}")),
    };
    let (p1, p2) = match curve.split(&cut) {
        Ok(pieces) => pieces,
        Err(e) => return (false, format!("split failed: {e}")),
    };
    let pieces_ok =
        p1.length() <= (1.0 - delta) * ell + 1e-9 && p2.length() <= (1.0 - delta) * ell + 1e-9;
    let audit = match degeneracy_audit(curve, delta, &params) {
        Ok(a) => a,
        Err(e) => return (false, format!("audit failed: {e}")),
    };
    let audit_ok =
        audit.degenerate && audit.density_ok == Some(true) && audit.fillrad_ok == Some(true);
    (
        pieces_ok && audit_ok,
        serde_json::to_string(&audit).unwrap(),
    )
}

fn criterion_5() -> Outcome {
    let t0 = Instant::now();
    // The theoretical delta = eps0/(1000*pi) sits far below the chord scale
    // of both scenes (each admits cuts much longer than 2*delta*l), so the
    // degenerate hypothesis is exercised at the largest delta for which it
    // genuinely holds.
    let rect = JordanPolygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 0.01),
        Point::new(0.0, 0.01),
    ])
    .unwrap();
    let (rect_ok, rect_report) = degenerate_case(&rect, 0.26);
    let zig = zigzag_strip(20);
    let (zig_ok, zig_report) = degenerate_case(&zig, 0.02);
    let elapsed = t0.elapsed();
    let pass = rect_ok && zig_ok && elapsed.as_secs_f64() < 120.0;
    outcome(
        pass,
        format!(
            "degenerate branch: rectangle (delta 0.26) ok {rect_ok}, \
             zigzag strip (delta 0.02) ok {zig_ok}, {:.1}s",
            elapsed.as_secs_f64()
        ),
        format!("{rect_report}\n{zig_report}"),
    )
}

// ---------------------------------------------------------------- criterion 6

fn majorization_scenes() -> Vec<(String, JordanPolygon)> {
    let mut rng = CounterRng::new(SEED).stream("acceptance-c6");
    let mut out: Vec<(String, JordanPolygon)> = vec![
        ("square".into(), unit_square()),
        (
            "rectangle".into(),
            JordanPolygon::new(vec![
                Point::new(0.0, 0.0),
                Point::new(2.0, 0.0),
                Point::new(2.0, 1.0),
                Point::new(0.0, 1.0),
            ])
            .unwrap(),
        ),
        (
            "l-domain".into(),
            JordanPolygon::new(vec![
                Point::new(0.0, 0.0),
                Point::new(2.0, 0.0),
                Point::new(2.0, 1.0),
                Point::new(1.0, 1.0),
                Point::new(1.0, 2.0),
                Point::new(0.0, 2.0),
            ])
            .unwrap(),
        ),
        (
            "triangle".into(),
            JordanPolygon::new(vec![
                Point::new(0.0, 0.0),
                Point::new(3.0, 0.0),
                Point::new(0.0, 4.0),
            ])
            .unwrap(),
        ),
        (
            "pentagon".into(),
            JordanPolygon::new(
                (0..5)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / 5.0;
                        Point::new(t.cos(), t.sin())
                    })
                    .collect(),
            )
            .unwrap(),
        ),
        (
            "hexagon".into(),
            JordanPolygon::new(
                (0..6)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / 6.0;
                        Point::new(t.cos(), t.sin())
                    })
                    .collect(),
            )
            .unwrap(),
        ),
    ];
    for i in 0..4 {
        let n = 6 + rng.next_below(5);
        out.push((
            format!("star-{i}"),
            JordanPolygon::new(star_polygon(&mut rng, n)).unwrap(),
        ));
    }
    out
}

fn criterion_6() -> Outcome {
    let t0 = Instant::now();
    let mut pass = true;
    let mut lines = Vec::new();
    for (name, curve) in majorization_scenes() {
        let eps = 0.4 * curve.diameter();
        let params = SearchParams::for_epsilon(curve.length(), eps);
        let tree = match iterated_cut(&curve, eps, DEFAULT_LEAF_BUDGET, &params) {
            Ok(t) => t,
            Err(e) => {
                pass = false;
                lines.push(format!("{name}: cut failed: {e}"));
                continue;
            }
        };
        let disc = match assemble_limit_majorization(&tree) {
            Ok(d) => d,
            Err(e) => {
                pass = false;
                lines.push(format!("{name}: assembly failed: {e}"));
                continue;
            }
        };
        let blen_err = (disc.boundary_length() - curve.length()).abs();
        let h = eps / 8.0;
        let mut rng = CounterRng::new(SEED).stream("acceptance-c6-lipschitz");
        let excess =
            lipschitz_excess(&disc, curve.interior(), 10_000, h, &mut rng).unwrap();
        // Containment: every disc vertex image stays within eps of the
        // graph G made of the curve and all cut segments.
        let mut segments: Vec<(Point, Point)> = Vec::new();
        let verts = curve.vertices();
        for i in 0..verts.len() {
            segments.push((verts[i], verts[(i + 1) % verts.len()]));
        }
        for node in &tree.nodes {
            if let Some(cut) = &node.cut {
                segments.push((cut.a, cut.b));
            }
        }
        let worst_containment = disc
            .images
            .iter()
            .map(|p| {
                segments
                    .iter()
                    .map(|&(a, b)| point_segment_distance(*p, a, b))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        let ok = blen_err <= 1e-9 * (1.0 + curve.length())
            && excess <= 1e-6 + 2.0 * h
            && worst_containment <= eps + 1e-9;
        if !ok {
            pass = false;
        }
        lines.push(format!(
            "{name}: boundary err {blen_err:.2e}, excess {excess:.2e} (tol {:.2e}), \
             containment {worst_containment:.3} <= {eps:.3}: {}",
            1e-6 + 2.0 * h,
            if ok { "ok" } else { "FAIL" }
        ));
    }
    let elapsed = t0.elapsed();
    pass = pass && elapsed.as_secs_f64() < 300.0;
    outcome(
        pass,
        format!(
            "majorization contract: 10 scenes x 10^4 pairs, {:.1}s",
            elapsed.as_secs_f64()
        ),
        lines.join("\n"),
    )
}

// ---------------------------------------------------------------- criterion 7

/// Brute-force filling radius through the Kuratowski embedding i -> d(i, .)
/// into l_inf: at radius r the cycle bounds iff it is a Z/2 combination of
/// nerve triangles of the box cover.
fn kuratowski_radius(m: &FiniteMetric, z: &[(usize, usize)]) -> Option<f64> {
    let n = m.len();
    assert!(n * n <= 128, "oracle limited to small point sets");
    let bit = |i: usize, j: usize| -> u128 { 1u128 << (i.min(j) * n + i.max(j)) };
    let boxes_intersect = |ids: &[usize], r: f64| -> bool {
        (0..n).all(|coord| {
            let lo = ids
                .iter()
                .map(|&i| m.dist(i, coord) - r)
                .fold(f64::MIN, f64::max);
            let hi = ids
                .iter()
                .map(|&i| m.dist(i, coord) + r)
                .fold(f64::MAX, f64::min);
            lo <= hi
        })
    };
    let mut candidates: Vec<f64> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| m.dist(i, j) / 2.0))
        .collect();
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();
    let target: u128 = z.iter().map(|&(a, b)| bit(a, b)).fold(0, |acc, b| acc ^ b);
    for &r in &candidates {
        if z.iter().any(|&(a, b)| !boxes_intersect(&[a, b], r)) {
            continue;
        }
        let mut basis: Vec<u128> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    if boxes_intersect(&[i, j, k], r) {
                        let mut v = bit(i, j) ^ bit(i, k) ^ bit(j, k);
                        for &b in &basis {
                            let top = 127 - b.leading_zeros();
                            if v >> top & 1 == 1 {
                                v ^= b;
                            }
                        }
                        if v != 0 {
                            basis.push(v);
                            basis.sort_by_key(|b| std::cmp::Reverse(*b));
                        }
                    }
                }
            }
        }
        let mut t = target;
        for &b in &basis {
            let top = 127 - b.leading_zeros();
            if t >> top & 1 == 1 {
                t ^= b;
            }
        }
        if t == 0 {
            return Some(r);
        }
    }
    None
}

fn criterion_7() -> Outcome {
    let t0 = Instant::now();
    let m = FiniteMetric::circle(128, 2.0 * PI);
    let est = filling_radius_estimate(&m, &fundamental_cycle(128)).unwrap();
    let target = PI / 3.0;
    let circle_ok = est >= target - 0.06 && est <= target + 0.02;

    let mut oracle_ok = true;
    let mut oracle_lines = Vec::new();
    for n in 4..=8usize {
        let mn = FiniteMetric::circle(n, 2.0 * PI);
        let z = fundamental_cycle(n);
        let e = filling_radius_estimate(&mn, &z).unwrap();
        let o = kuratowski_radius(&mn, &z).unwrap();
        let mesh = 2.0 * PI / n as f64;
        if (e - o).abs() > mesh + 1e-9 {
            oracle_ok = false;
        }
        oracle_lines.push(format!("n={n}: estimate {e:.6}, oracle {o:.6}"));
    }
    let elapsed = t0.elapsed();
    let pass = circle_ok && oracle_ok && elapsed.as_secs_f64() < 300.0;
    outcome(
        pass,
        format!(
            "filling radius: circle-128 estimate {est:.4} (target pi/3 = {target:.4}), \
             Kuratowski agreement at n <= 8, {:.1}s",
            elapsed.as_secs_f64()
        ),
        format!("{est:e}\n{}", oracle_lines.join("\n")),
    )
}

// ---------------------------------------------------------------- criterion 8

/// Rank of the triangle boundary map over the rationals, by exact Gaussian
/// elimination on i128 fractions kept in integer form (entries stay tiny for
/// incidence-like matrices; overflow panics rather than corrupting ranks).
fn rank_d2_rational(c: &TriComplex) -> usize {
    let ne = c.edges().len();
    let nt = c.triangles().len();
    let mut cols: Vec<Vec<(usize, i128)>> = Vec::with_capacity(nt);
    for ti in 0..nt {
        let chain = Chain::from_pairs(2, [(ti, 1i64)]);
        let b = boundary_2(c, &chain);
        let col: Vec<(usize, i128)> = b
            .iter()
            .map(|(e, k)| {
                let v: i64 = k.try_into().expect("small coefficient");
                (e, v as i128)
            })
            .collect();
        cols.push(col);
    }
    // Dense elimination over Q with a shared denominator per row is overkill
    // here: column entries are +-1 and stay small, so plain fraction-free
    // elimination with exact integer pivoting suffices.
    let mut dense: Vec<Vec<i128>> = cols
        .into_iter()
        .map(|col| {
            let mut row = vec![0i128; ne];
            for (e, v) in col {
                row[e] = v;
            }
            row
        })
        .collect();
    let mut rank = 0usize;
    let mut pivot_col = 0usize;
    while rank < dense.len() && pivot_col < ne {
        if let Some(r) = (rank..dense.len()).find(|&r| dense[r][pivot_col] != 0) {
            dense.swap(rank, r);
            let p = dense[rank][pivot_col];
            for r2 in 0..dense.len() {
                if r2 != rank && dense[r2][pivot_col] != 0 {
                    let q = dense[r2][pivot_col];
                    for c2 in 0..ne {
                        dense[r2][c2] = dense[r2][c2]
                            .checked_mul(p)
                            .and_then(|x| x.checked_sub(dense[rank][c2].checked_mul(q).unwrap()))
                            .expect("rank elimination overflow");
                    }
                    // Keep magnitudes down: divide the row by its gcd.
                    let g = dense[r2].iter().fold(0i128, |acc, &v| gcd(acc, v.abs()));
                    if g > 1 {
                        for c2 in 0..ne {
                            dense[r2][c2] /= g;
                        }
                    }
                }
            }
            rank += 1;
        }
        pivot_col += 1;
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// First Betti number over Q: cycle rank of the edge graph minus rank d2.
fn betti_1_rational(c: &TriComplex) -> usize {
    let mut verts: Vec<usize> = c
        .edges()
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect();
    verts.sort_unstable();
    verts.dedup();
    let index: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut dsu: Vec<usize> = (0..verts.len()).collect();
    fn find(dsu: &mut Vec<usize>, mut x: usize) -> usize {
        while dsu[x] != x {
            dsu[x] = dsu[dsu[x]];
            x = dsu[x];
        }
        x
    }
    for &(u, v) in c.edges() {
        let (a, b) = (find(&mut dsu, index[&u]), find(&mut dsu, index[&v]));
        if a != b {
            dsu[a] = b;
        }
    }
    let comps: HashSet<usize> = (0..verts.len()).map(|i| find(&mut dsu, i)).collect();
    let rank_d1 = verts.len() - comps.len();
    let cycle_rank = c.edges().len() - rank_d1;
    cycle_rank - rank_d2_rational(c)
}

fn random_subcomplex(rng: &mut CounterRng, full: &TriComplex) -> TriComplex {
    let total = full.triangles().len();
    let count = 30 + rng.next_below(120);
    let mut chosen = HashSet::new();
    while chosen.len() < count {
        chosen.insert(rng.next_below(total));
    }
    let mut ids: Vec<usize> = chosen.into_iter().collect();
    ids.sort_unstable();
    let tris = ids.iter().map(|&i| full.triangles()[i].clone()).collect();
    TriComplex::new(Kappa::flat(), tris).unwrap()
}

fn criterion_8() -> Outcome {
    let t0 = Instant::now();
    let full = grid_complex(20, 20);
    let mut rng = CounterRng::new(SEED).stream("acceptance-c8");
    let mut pass = true;
    let mut trivial = 0usize;
    let mut fills = 0usize;
    for _ in 0..50 {
        let sub = random_subcomplex(&mut rng, &full);
        let by_snf = h1_is_trivial(&sub);
        let by_rank = betti_1_rational(&sub) == 0;
        if by_snf != by_rank {
            pass = false;
        }
        if by_snf {
            trivial += 1;
        }
        // A random boundary must be refilled exactly.
        let nt = sub.triangles().len();
        let x0 = Chain::from_pairs(
            2,
            (0..8).map(|_| (rng.next_below(nt), rng.next_below(5) as i64 - 2)),
        );
        let z = boundary_2(&sub, &x0);
        match fill_cycle(&sub, &z) {
            Ok(x) => {
                if boundary_2(&sub, &x) != z {
                    pass = false;
                }
                fills += 1;
            }
            Err(e) => {
                pass = false;
                eprintln!("fill_cycle failed: {e}");
            }
        }
    }
    // Unique fillings on a contractible ambient: rectangular sub-grids are
    // discs, where the filling of a blob frontier is the blob itself.
    for _ in 0..5 {
        let n = 4 + rng.next_below(5);
        let m = 4 + rng.next_below(5);
        let patch = grid_complex(n, m);
        let nt = patch.triangles().len();
        let mut blob = HashSet::new();
        while blob.len() < 6 {
            blob.insert(rng.next_below(nt));
        }
        let x0 = Chain::from_pairs(2, blob.iter().map(|&t| (t, 1i64)));
        let z = boundary_2(&patch, &x0);
        match support_set(&patch, &z) {
            Ok(s) => {
                if s != blob {
                    pass = false;
                }
            }
            Err(e) => {
                pass = false;
                eprintln!("support_set failed: {e}");
            }
        }
    }
    let elapsed = t0.elapsed();
    pass = pass && elapsed.as_secs_f64() < 60.0;
    outcome(
        pass,
        format!(
            "homology kernel: 50 sub-complexes ({trivial} with trivial H1) agree with the \
             Q-rank oracle, {fills} exact refills, unique fillings match, {:.1}s",
            elapsed.as_secs_f64()
        ),
        format!("trivial={trivial},fills={fills}"),
    )
}

// ---------------------------------------------------------------- harness

#[test]
fn acceptance() {
    let mut all = true;
    let mut report = |n: usize, o: &Outcome| {
        println!(
            "acceptance criterion {n}: {} — {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.line
        );
        if !o.pass {
            all = false;
        }
    };

    let c1 = criterion_1();
    report(1, &c1);
    let runs: Vec<fn() -> Outcome> = vec![
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
    ];
    let first: Vec<Outcome> = runs.iter().map(|f| f()).collect();
    for (i, o) in first.iter().enumerate() {
        report(i + 2, o);
    }

    // Criterion 9: identical seeds reproduce byte-identical reports.
    let second: Vec<Outcome> = runs.iter().map(|f| f()).collect();
    let identical = first
        .iter()
        .zip(&second)
        .all(|(a, b)| a.report == b.report);
    let c9 = outcome(
        identical,
        format!(
            "determinism: criteria 2-8 rerun with seed {SEED:#x} produce byte-identical reports"
        ),
        String::new(),
    );
    report(9, &c9);

    assert!(all, "one or more acceptance criteria failed");
}
