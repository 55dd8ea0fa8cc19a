//! Closed-form geometry of the model surfaces of constant curvature:
//! distances, geodesics, angles and comparison triangles.
//!
//! Internally everything is computed on one of three normalized charts
//! (plane, unit sphere, unit hyperboloid); an arbitrary curvature constant is
//! handled by rescaling lengths by `sqrt(|kappa|)`. Angle formulas use
//! half-angle (haversine-style) forms so that near-degenerate triangles do not
//! lose precision. Tolerance budget for the round-trip identities is 1e-10.

use crate::error::{GeomError, Result};

/// Curvature constant, normalized to a sign in {-1, 0, +1} plus a length
/// scale `sqrt(|kappa|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Kappa {
    value: f64,
    sign: i8,
    scale: f64,
}

impl Kappa {
    pub fn new(value: f64) -> Self {
        let sign = if value > 0.0 {
            1
        } else if value < 0.0 {
            -1
        } else {
            0
        };
        let scale = if sign == 0 { 1.0 } else { value.abs().sqrt() };
        Kappa { value, sign, scale }
    }

    pub fn flat() -> Self {
        Kappa::new(0.0)
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Length rescaling factor into the normalized chart.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Diameter of the model surface: pi/sqrt(kappa) for kappa > 0, infinite
    /// otherwise.
    pub fn d_kappa(&self) -> f64 {
        if self.sign > 0 {
            std::f64::consts::PI / self.scale
        } else {
            f64::INFINITY
        }
    }

    fn to_normalized(&self, len: f64) -> f64 {
        len * self.scale
    }

    fn from_normalized(&self, len: f64) -> f64 {
        len / self.scale
    }
}

/// A point on the model surface, in the chart matching the curvature sign.
///
/// Flat points are planar pairs; spherical points are unit 3-vectors;
/// hyperbolic points live on the upper hyperboloid sheet (Minkowski square
/// -1, last coordinate is time).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelPoint {
    Flat { x: f64, y: f64 },
    Sphere([f64; 3]),
    Hyperboloid([f64; 3]),
}

const CHART_TOL: f64 = 1e-9;

fn dot3(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
}

fn cross3(p: &[f64; 3], q: &[f64; 3]) -> [f64; 3] {
    [
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    ]
}

fn minkowski(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    p[0] * q[0] + p[1] * q[1] - p[2] * q[2]
}

impl ModelPoint {
    pub fn flat(x: f64, y: f64) -> Self {
        ModelPoint::Flat { x, y }
    }

    /// Unit-sphere point; the input is normalized.
    pub fn sphere(v: [f64; 3]) -> Result<Self> {
        let n = dot3(&v, &v).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(GeomError::InvalidModelPoint(format!("norm {n}")));
        }
        Ok(ModelPoint::Sphere([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Upper-sheet hyperboloid point; the input is re-projected onto the sheet.
    pub fn hyperboloid(v: [f64; 3]) -> Result<Self> {
        if v[2] <= 0.0 || !v.iter().all(|c| c.is_finite()) {
            return Err(GeomError::InvalidModelPoint(format!(
                "time coordinate {} must be positive",
                v[2]
            )));
        }
        let q = -minkowski(&v, &v);
        if q <= 0.0 {
            return Err(GeomError::InvalidModelPoint(
                "Minkowski square must be negative".into(),
            ));
        }
        let s = q.sqrt();
        Ok(ModelPoint::Hyperboloid([v[0] / s, v[1] / s, v[2] / s]))
    }

    pub fn validate(&self, kappa: &Kappa) -> Result<()> {
        match (self, kappa.sign()) {
            (ModelPoint::Flat { x, y }, 0) => {
                if x.is_finite() && y.is_finite() {
                    Ok(())
                } else {
                    Err(GeomError::InvalidModelPoint("non-finite".into()))
                }
            }
            (ModelPoint::Sphere(v), 1) => {
                let n = dot3(v, v).sqrt();
                if (n - 1.0).abs() <= CHART_TOL {
                    Ok(())
                } else {
                    Err(GeomError::InvalidModelPoint(format!("sphere norm {n}")))
                }
            }
            (ModelPoint::Hyperboloid(v), -1) => {
                let m = minkowski(v, v);
                if (m + 1.0).abs() <= CHART_TOL && v[2] >= 1.0 - CHART_TOL {
                    Ok(())
                } else {
                    Err(GeomError::InvalidModelPoint(format!(
                        "Minkowski square {m}, time {}",
                        v[2]
                    )))
                }
            }
            _ => Err(GeomError::InvalidModelPoint(
                "chart does not match curvature sign".into(),
            )),
        }
    }
}

/// Distance between two model points, in the units of `kappa`.
pub fn model_distance(kappa: &Kappa, p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    p.validate(kappa)?;
    q.validate(kappa)?;
    let d = match (p, q) {
        (ModelPoint::Flat { x: px, y: py }, ModelPoint::Flat { x: qx, y: qy }) => {
            (px - qx).hypot(py - qy)
        }
        (ModelPoint::Sphere(a), ModelPoint::Sphere(b)) => {
            // atan2 of cross and dot is stable at both ends of [0, pi].
            let c = cross3(a, b);
            dot3(&c, &c).sqrt().atan2(dot3(a, b))
        }
        (ModelPoint::Hyperboloid(a), ModelPoint::Hyperboloid(b)) => {
            // 4 sinh^2(d/2) equals the Minkowski square of the difference.
            let diff = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
            let e = minkowski(&diff, &diff).max(0.0);
            2.0 * (e.sqrt() / 2.0).asinh()
        }
        _ => unreachable!("validate rejects mixed charts"),
    };
    Ok(kappa.from_normalized(d))
}

fn check_triangle(kappa: &Kappa, a: f64, b: f64, c: f64) -> Result<(f64, f64, f64)> {
    if !(a >= 0.0 && b >= 0.0 && c >= 0.0) {
        return Err(GeomError::NotATriangle(a, b, c));
    }
    let slack = 1e-12 * (a + b + c).max(1.0);
    if a > b + c + slack || b > a + c + slack || c > a + b + slack {
        return Err(GeomError::NotATriangle(a, b, c));
    }
    let perimeter = a + b + c;
    let limit = 2.0 * kappa.d_kappa();
    if perimeter >= limit {
        return Err(GeomError::PerimeterTooLarge { perimeter, limit });
    }
    Ok((
        kappa.to_normalized(a),
        kappa.to_normalized(b),
        kappa.to_normalized(c),
    ))
}

/// Comparison triangle with the canonical placement: first vertex at the
/// chart origin, second along the first axis, third in the upper half-chart.
///
/// Side `a` joins vertices 0-1, side `b` joins 0-2, side `c` joins 1-2.
pub fn comparison_triangle(
    kappa: &Kappa,
    a: f64,
    b: f64,
    c: f64,
) -> Result<(ModelPoint, ModelPoint, ModelPoint)> {
    let (na, nb, nc) = check_triangle(kappa, a, b, c)?;
    // Angle at vertex 0, between the sides of lengths a and b.
    let alpha = angle_normalized(kappa.sign(), nc, na, nb);
    match kappa.sign() {
        0 => Ok((
            ModelPoint::flat(0.0, 0.0),
            ModelPoint::flat(na, 0.0),
            ModelPoint::flat(nb * alpha.cos(), nb * alpha.sin()),
        )),
        1 => Ok((
            ModelPoint::Sphere([0.0, 0.0, 1.0]),
            ModelPoint::Sphere([na.sin(), 0.0, na.cos()]),
            ModelPoint::Sphere([nb.sin() * alpha.cos(), nb.sin() * alpha.sin(), nb.cos()]),
        )),
        _ => Ok((
            ModelPoint::Hyperboloid([0.0, 0.0, 1.0]),
            ModelPoint::Hyperboloid([na.sinh(), 0.0, na.cosh()]),
            ModelPoint::Hyperboloid([
                nb.sinh() * alpha.cos(),
                nb.sinh() * alpha.sin(),
                nb.cosh(),
            ]),
        )),
    }
}

/// Half-angle law of cosines on the normalized chart. `opposite` faces the
/// returned angle; `adj1`, `adj2` are the adjacent sides.
fn angle_normalized(sign: i8, opposite: f64, adj1: f64, adj2: f64) -> f64 {
    if adj1 == 0.0 || adj2 == 0.0 {
        // Angle at the tip of a degenerate spike is conventionally 0.
        return 0.0;
    }
    let s = 0.5 * (opposite + adj1 + adj2);
    let f: fn(f64) -> f64 = match sign {
        0 => |x| x,
        1 => f64::sin,
        _ => f64::sinh,
    };
    let num = (f(s - adj1) * f(s - adj2)).max(0.0);
    let den = (f(s) * f(s - opposite)).max(0.0);
    2.0 * num.sqrt().atan2(den.sqrt())
}

/// Angle of the comparison triangle at the vertex joining `adj1` and `adj2`.
pub fn comparison_angle(kappa: &Kappa, opposite: f64, adj1: f64, adj2: f64) -> Result<f64> {
    let (no, n1, n2) = check_triangle(kappa, opposite, adj1, adj2)?;
    Ok(angle_normalized(kappa.sign(), no, n1, n2))
}

/// Point at parameter `t` along the unique geodesic from `p` to `q`.
pub fn geodesic_point(kappa: &Kappa, p: &ModelPoint, q: &ModelPoint, t: f64) -> Result<ModelPoint> {
    p.validate(kappa)?;
    q.validate(kappa)?;
    match (p, q) {
        (ModelPoint::Flat { x: px, y: py }, ModelPoint::Flat { x: qx, y: qy }) => {
            Ok(ModelPoint::flat(px + t * (qx - px), py + t * (qy - py)))
        }
        (ModelPoint::Sphere(a), ModelPoint::Sphere(b)) => {
            let c = cross3(a, b);
            let theta = dot3(&c, &c).sqrt().atan2(dot3(a, b));
            if theta >= std::f64::consts::PI - 1e-12 {
                return Err(GeomError::NonUniqueGeodesic);
            }
            if theta == 0.0 {
                return Ok(*p);
            }
            let (wa, wb) = (
                ((1.0 - t) * theta).sin() / theta.sin(),
                (t * theta).sin() / theta.sin(),
            );
            ModelPoint::sphere([
                wa * a[0] + wb * b[0],
                wa * a[1] + wb * b[1],
                wa * a[2] + wb * b[2],
            ])
        }
        (ModelPoint::Hyperboloid(a), ModelPoint::Hyperboloid(b)) => {
            let diff = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
            let e = minkowski(&diff, &diff).max(0.0);
            let theta = 2.0 * (e.sqrt() / 2.0).asinh();
            if theta == 0.0 {
                return Ok(*p);
            }
            let (wa, wb) = (
                ((1.0 - t) * theta).sinh() / theta.sinh(),
                (t * theta).sinh() / theta.sinh(),
            );
            ModelPoint::hyperboloid([
                wa * a[0] + wb * b[0],
                wa * a[1] + wb * b[1],
                wa * a[2] + wb * b[2],
            ])
        }
        _ => Err(GeomError::InvalidModelPoint("mixed charts".into())),
    }
}
