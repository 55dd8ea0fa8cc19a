//! Exact planar orientation and segment-intersection predicates.
//!
//! The fast path evaluates the orientation determinant in f64 with a Shewchuk
//! style error bound; only when the result is ambiguous do we fall back to
//! exact rational arithmetic (every f64 is an exact rational, so the fallback
//! is error free). The cutting pipeline relies on these decisions being exact.

use num_rational::BigRational;

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(&self, other: &Point, t: f64) -> Point {
        Point::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }

    pub fn key(&self) -> (u64, u64) {
        (self.x.to_bits(), self.y.to_bits())
    }
}

/// Shewchuk's first-stage error bound coefficient for orient2d.
const CCW_ERR_BOUND: f64 = 3.3306690738754716e-16;

fn orient_exact(a: Point, b: Point, c: Point) -> i8 {
    let r = |v: f64| BigRational::from_float(v).expect("finite coordinate");
    let det = (r(b.x) - r(a.x)) * (r(c.y) - r(a.y)) - (r(b.y) - r(a.y)) * (r(c.x) - r(a.x));
    if det > BigRational::from_float(0.0).unwrap() {
        1
    } else if det < BigRational::from_float(0.0).unwrap() {
        -1
    } else {
        0
    }
}

/// Sign of the signed area of triangle (a, b, c): +1 counterclockwise,
/// -1 clockwise, 0 collinear. Exact.
pub fn orient(a: Point, b: Point, c: Point) -> i8 {
    let detleft = (b.x - a.x) * (c.y - a.y);
    let detright = (b.y - a.y) * (c.x - a.x);
    let det = detleft - detright;
    let detsum = detleft.abs() + detright.abs();
    if det.abs() > CCW_ERR_BOUND * detsum {
        if det > 0.0 {
            1
        } else {
            -1
        }
    } else if det == 0.0 && detsum == 0.0 {
        0
    } else {
        orient_exact(a, b, c)
    }
}

/// Whether `p` lies on the closed segment [a, b]. Exact.
pub fn on_segment(p: Point, a: Point, b: Point) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// How two closed segments intersect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegCross {
    None,
    /// Interiors cross transversally in a single point.
    Proper,
    /// They touch: an endpoint lies on the other segment, or they overlap
    /// collinearly.
    Touch,
}

pub fn segment_intersect(a: Point, b: Point, c: Point, d: Point) -> SegCross {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return SegCross::Proper;
    }
    if (o1 == 0 && on_segment(c, a, b))
        || (o2 == 0 && on_segment(d, a, b))
        || (o3 == 0 && on_segment(a, c, d))
        || (o4 == 0 && on_segment(b, c, d))
    {
        return SegCross::Touch;
    }
    SegCross::None
}

/// Point-to-segment Euclidean distance.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.dist(&a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.dist(&a.lerp(&b, t))
}
