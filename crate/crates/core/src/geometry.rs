//! Planar primitives with explicit tolerances.
//!
//! Directions are carried as unit vectors rather than angles so that
//! comparisons reduce to dot and cross products. Every predicate that can
//! hit a coincidence (tangency, shared endpoints) takes a [`Tolerance`].

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// A point (or free vector) in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    /// Unit vector in this direction, `None` for the zero vector.
    pub fn direction(self) -> Option<UnitDir> {
        UnitDir::new(self.x, self.y)
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// A direction on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitDir {
    pub ux: f64,
    pub uy: f64,
}

impl UnitDir {
    pub const E1: UnitDir = UnitDir { ux: 1.0, uy: 0.0 };
    pub const E2: UnitDir = UnitDir { ux: 0.0, uy: 1.0 };

    /// Normalizes `(x, y)`; `None` if the vector is zero or not finite.
    pub fn new(x: f64, y: f64) -> Option<Self> {
        let n = x.hypot(y);
        if n > 0.0 && n.is_finite() {
            Some(UnitDir { ux: x / n, uy: y / n })
        } else {
            None
        }
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        UnitDir { ux: c, uy: s }
    }

    #[inline]
    pub fn vec(self) -> Point2 {
        Point2::new(self.ux, self.uy)
    }

    /// Angle in `(-pi, pi]`.
    #[inline]
    pub fn angle(self) -> f64 {
        self.uy.atan2(self.ux)
    }

    #[inline]
    pub fn dot(self, o: UnitDir) -> f64 {
        self.ux * o.ux + self.uy * o.uy
    }

    #[inline]
    pub fn cross(self, o: UnitDir) -> f64 {
        self.ux * o.uy - self.uy * o.ux
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn rot_ccw(self) -> UnitDir {
        UnitDir { ux: -self.uy, uy: self.ux }
    }

    /// Clockwise quarter turn.
    #[inline]
    pub fn rot_cw(self) -> UnitDir {
        UnitDir { ux: self.uy, uy: -self.ux }
    }

    #[inline]
    pub fn rotate(self, theta: f64) -> UnitDir {
        let (s, c) = theta.sin_cos();
        UnitDir {
            ux: c * self.ux - s * self.uy,
            uy: s * self.ux + c * self.uy,
        }
    }

    /// Unsigned angle in `[0, pi]`.
    pub fn angle_to(self, o: UnitDir) -> f64 {
        self.cross(o).abs().atan2(self.dot(o))
    }

    /// Counter-clockwise angle from `self` to `o`, in `[0, 2pi)`.
    pub fn ccw_angle_to(self, o: UnitDir) -> f64 {
        let a = self.cross(o).atan2(self.dot(o));
        if a < 0.0 {
            a + 2.0 * PI
        } else {
            a
        }
    }

    pub fn is_unit(self, tol: &Tolerance) -> bool {
        ((self.ux * self.ux + self.uy * self.uy) - 1.0).abs() <= tol.unit
    }

    pub fn approx_eq(self, o: UnitDir, tol: &Tolerance) -> bool {
        self.angle_to(o) <= tol.ang
    }
}

impl Neg for UnitDir {
    type Output = UnitDir;
    #[inline]
    fn neg(self) -> UnitDir {
        UnitDir { ux: -self.ux, uy: -self.uy }
    }
}

/// Coincidence thresholds used throughout the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Coincidence distance, scene units.
    pub pos: f64,
    /// Slack on unit-vector norms and direction predicates.
    pub unit: f64,
    /// Angle slack, radians.
    pub ang: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { pos: 1e-9, unit: 1e-9, ang: 1e-7 }
    }
}

impl Tolerance {
    /// Default tolerances with `pos` scaled to a scene diameter.
    pub fn for_diameter(diameter: f64) -> Self {
        Tolerance {
            pos: 1e-9 * diameter.max(f64::MIN_POSITIVE),
            ..Tolerance::default()
        }
    }

    pub fn with_pos(self, pos: f64) -> Self {
        Tolerance { pos, ..self }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if ok(self.pos) && ok(self.unit) && ok(self.ang) {
            Ok(())
        } else {
            Err(GeometryError::InvalidTolerance)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Result<Self, GeometryError> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return Err(GeometryError::InvalidCircle);
        }
        Ok(Circle { center, radius })
    }

    pub fn point_at(&self, u: UnitDir) -> Point2 {
        self.center + u.vec() * self.radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CircleIntersection {
    Empty,
    Tangent(Point2),
    Pair(Point2, Point2),
}

fn canonical_order(a: &Circle, b: &Circle) -> bool {
    (a.center.x, a.center.y, a.radius) <= (b.center.x, b.center.y, b.radius)
}

fn lex_le(p: Point2, q: Point2) -> bool {
    (p.x, p.y) <= (q.x, q.y)
}

/// Intersects two circles.
///
/// Tangency (external or internal) is reported whenever the centre
/// distance is within `tol.pos` of the tangent configuration. The result
/// does not depend on argument order.
pub fn circle_circle_intersect(
    c1: &Circle,
    c2: &Circle,
    tol: &Tolerance,
) -> Result<CircleIntersection, GeometryError> {
    let (a, b) = if canonical_order(c1, c2) { (c1, c2) } else { (c2, c1) };
    let delta = b.center - a.center;
    let d = delta.norm();
    if d <= tol.pos {
        if (a.radius - b.radius).abs() <= tol.pos {
            return Err(GeometryError::ConcentricEqual);
        }
        return Ok(CircleIntersection::Empty);
    }
    let sum = a.radius + b.radius;
    let diff = (a.radius - b.radius).abs();
    if (d - sum).abs() <= tol.pos {
        return Ok(CircleIntersection::Tangent(a.center + delta * (a.radius / sum)));
    }
    if (d - diff).abs() <= tol.pos {
        let (big, sign) = if a.radius >= b.radius { (a, 1.0) } else { (b, -1.0) };
        return Ok(CircleIntersection::Tangent(
            big.center + delta * (sign * big.radius / d),
        ));
    }
    if d > sum || d < diff {
        return Ok(CircleIntersection::Empty);
    }
    let along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    let h = (a.radius * a.radius - along * along).max(0.0).sqrt();
    let ex = delta * (1.0 / d);
    let base = a.center + ex * along;
    let off = ex.perp() * h;
    let (p, q) = (base + off, base - off);
    Ok(if lex_le(p, q) {
        CircleIntersection::Pair(p, q)
    } else {
        CircleIntersection::Pair(q, p)
    })
}

/// Intersection of a circle with the closed segment `a`-`b`.
///
/// Returns `(t, point)` with `t` the segment parameter in `[0, 1]`, sorted
/// by `t`. A line within `tol.pos` of tangency yields its single foot point.
pub fn circle_segment_intersect(
    c: &Circle,
    a: Point2,
    b: Point2,
    tol: &Tolerance,
) -> Vec<(f64, Point2)> {
    let d = b - a;
    let len = d.norm();
    if len <= 0.0 {
        return Vec::new();
    }
    let dir = d * (1.0 / len);
    let foot_t = (c.center - a).dot(dir);
    let foot = a + dir * foot_t;
    let off = (c.center - foot).norm();
    let slack = tol.pos / len;
    let mut out = Vec::new();
    let mut push = |t_len: f64| {
        let t = t_len / len;
        if t >= -slack && t <= 1.0 + slack {
            let t = t.clamp(0.0, 1.0);
            out.push((t, a + d * t));
        }
    };
    if (off - c.radius).abs() <= tol.pos {
        push(foot_t);
    } else if off < c.radius {
        let h = (c.radius * c.radius - off * off).sqrt();
        push(foot_t - h);
        push(foot_t + h);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SegmentIntersection {
    None,
    /// Single crossing with parameters on both segments.
    Point { t: f64, u: f64, p: Point2 },
    /// Collinear overlap, given as parameter ranges on the first segment.
    Overlap { t0: f64, t1: f64 },
}

/// Intersects closed segments `a0-a1` and `b0-b1`.
pub fn segment_segment_intersect(
    a0: Point2,
    a1: Point2,
    b0: Point2,
    b1: Point2,
    tol: &Tolerance,
) -> SegmentIntersection {
    let da = a1 - a0;
    let db = b1 - b0;
    let la = da.norm();
    let lb = db.norm();
    if la <= 0.0 || lb <= 0.0 {
        return SegmentIntersection::None;
    }
    let denom = da.cross(db);
    let w = b0 - a0;
    // Sine of the angle between the supports, times both lengths.
    if denom.abs() <= tol.unit * la * lb {
        // Parallel: overlap only if collinear within tolerance.
        let off = w.cross(da).abs() / la;
        if off > tol.pos {
            return SegmentIntersection::None;
        }
        let ta = w.dot(da) / (la * la);
        let tb = (b1 - a0).dot(da) / (la * la);
        let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
        let slack = tol.pos / la;
        let t0 = lo.max(0.0);
        let t1 = hi.min(1.0);
        if t1 < t0 - slack {
            return SegmentIntersection::None;
        }
        if (t1 - t0).abs() <= slack {
            let t = t0.clamp(0.0, 1.0);
            let p = a0 + da * t;
            let u = ((p - b0).dot(db) / (lb * lb)).clamp(0.0, 1.0);
            return SegmentIntersection::Point { t, u, p };
        }
        return SegmentIntersection::Overlap { t0, t1 };
    }
    let t = w.cross(db) / denom;
    let u = w.cross(da) / denom;
    let sa = tol.pos / la;
    let sb = tol.pos / lb;
    if t < -sa || t > 1.0 + sa || u < -sb || u > 1.0 + sb {
        return SegmentIntersection::None;
    }
    let t = t.clamp(0.0, 1.0);
    let u = u.clamp(0.0, 1.0);
    SegmentIntersection::Point { t, u, p: a0 + da * t }
}

/// Closest point on segment `a-b` to `p` and its parameter in `[0, 1]`.
pub fn closest_on_segment(p: Point2, a: Point2, b: Point2) -> (Point2, f64) {
    let d = b - a;
    let l2 = d.norm_sq();
    if l2 == 0.0 {
        return (a, 0.0);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    (a + d * t, t)
}

pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    closest_on_segment(p, a, b).0.dist(p)
}

pub fn segment_segment_distance(a0: Point2, a1: Point2, b0: Point2, b1: Point2) -> f64 {
    let tol = Tolerance::default().with_pos(0.0);
    if !matches!(
        segment_segment_intersect(a0, a1, b0, b1, &tol),
        SegmentIntersection::None
    ) {
        return 0.0;
    }
    point_segment_distance(a0, b0, b1)
        .min(point_segment_distance(a1, b0, b1))
        .min(point_segment_distance(b0, a0, a1))
        .min(point_segment_distance(b1, a0, a1))
}

/// Shape of a geodesic arc-segment on the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeodesicKind {
    /// The shorter arc between two non-antipodal directions.
    ProperArc,
    /// `a == b`.
    Singleton,
    /// `b == -a`; the closed half circle counter-clockwise from `a` to `b`.
    HalfCircle,
}

/// A closed arc of directions, `[a, b]` on the unit circle.
///
/// For [`GeodesicKind::ProperArc`] the endpoints are stored so that the arc
/// runs counter-clockwise from `a` to `b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicArc {
    pub a: UnitDir,
    pub b: UnitDir,
    pub kind: GeodesicKind,
}

impl GeodesicArc {
    /// The set of nonnegative combinations of `v` and `w`, normalized.
    ///
    /// Antipodal input has no such arc; use [`GeodesicArc::half_circle`].
    pub fn between(v: UnitDir, w: UnitDir, tol: &Tolerance) -> Result<Self, GeometryError> {
        if v.angle_to(w) <= tol.ang {
            return Ok(GeodesicArc { a: v, b: v, kind: GeodesicKind::Singleton });
        }
        if v.angle_to(-w) <= tol.ang {
            return Err(GeometryError::AntipodalArc);
        }
        let (a, b) = if v.cross(w) > 0.0 { (v, w) } else { (w, v) };
        Ok(GeodesicArc { a, b, kind: GeodesicKind::ProperArc })
    }

    /// Closed half circle `{u : <u, normal> >= 0}`.
    pub fn half_circle(normal: UnitDir) -> Self {
        GeodesicArc {
            a: normal.rot_cw(),
            b: normal.rot_ccw(),
            kind: GeodesicKind::HalfCircle,
        }
    }

    /// Angular length in `[0, pi]`.
    pub fn length(&self) -> f64 {
        match self.kind {
            GeodesicKind::Singleton => 0.0,
            GeodesicKind::HalfCircle => PI,
            GeodesicKind::ProperArc => self.a.angle_to(self.b),
        }
    }

    pub fn contains(&self, u: UnitDir, tol: &Tolerance) -> bool {
        geodesic_contains(self, u, tol)
    }
}

/// Membership in a geodesic arc-segment: `u = alpha a + beta b` with
/// `alpha, beta >= 0` up to normalization.
pub fn geodesic_contains(g: &GeodesicArc, u: UnitDir, tol: &Tolerance) -> bool {
    let Some(u) = UnitDir::new(u.ux, u.uy) else {
        return false;
    };
    match g.kind {
        GeodesicKind::Singleton => u.angle_to(g.a) <= tol.unit.max(tol.ang),
        GeodesicKind::HalfCircle => g.a.cross(u) >= -tol.unit,
        GeodesicKind::ProperArc => {
            g.a.cross(u) >= -tol.unit
                && u.cross(g.b) >= -tol.unit
                && u.vec().dot(g.a.vec() + g.b.vec()) > 0.0
        }
    }
}

/// Clockwise sweep from `from` to `to` in `(0, 2pi]`; a zero sweep is read
/// as a full turn.
pub fn cw_sweep(from: UnitDir, to: UnitDir) -> f64 {
    let s = to.ccw_angle_to(from);
    if s <= 0.0 {
        2.0 * PI
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn circ(x: f64, y: f64, r: f64) -> Circle {
        Circle::new(Point2::new(x, y), r).unwrap()
    }

    #[test]
    fn lens_circles_cross_on_the_axis() {
        let r = 2f64.sqrt();
        match circle_circle_intersect(&circ(-1.0, 0.0, r), &circ(1.0, 0.0, r), &tol()).unwrap() {
            CircleIntersection::Pair(p, q) => {
                assert!(p.dist(Point2::new(0.0, -1.0)) < 1e-12);
                assert!(q.dist(Point2::new(0.0, 1.0)) < 1e-12);
            }
            other => panic!("expected pair, got {other:?}"),
        }
    }

    #[test]
    fn touching_circles_report_tangent() {
        let got = circle_circle_intersect(&circ(-1.0, 0.0, 1.0), &circ(1.0, 0.0, 1.0), &tol());
        assert_eq!(got.unwrap(), CircleIntersection::Tangent(Point2::new(0.0, 0.0)));
    }

    #[test]
    fn separated_circles_are_empty() {
        let got = circle_circle_intersect(&circ(-1.0, 0.0, 0.5), &circ(1.0, 0.0, 0.5), &tol());
        assert_eq!(got.unwrap(), CircleIntersection::Empty);
    }

    #[test]
    fn coincident_circles_are_an_error() {
        let got = circle_circle_intersect(&circ(0.0, 0.0, 1.0), &circ(0.0, 0.0, 1.0), &tol());
        assert_eq!(got, Err(GeometryError::ConcentricEqual));
    }

    #[test]
    fn internal_tangency() {
        let got = circle_circle_intersect(&circ(0.0, 0.0, 2.0), &circ(1.0, 0.0, 1.0), &tol());
        assert_eq!(got.unwrap(), CircleIntersection::Tangent(Point2::new(2.0, 0.0)));
    }

    #[test]
    fn geodesic_membership_examples() {
        let q = GeodesicArc::between(UnitDir::E1, UnitDir::E2, &tol()).unwrap();
        let h = 0.5f64.sqrt();
        assert!(geodesic_contains(&q, UnitDir::new(h, h).unwrap(), &tol()));
        assert!(!geodesic_contains(&q, UnitDir::new(0.0, -1.0).unwrap(), &tol()));
        let single = GeodesicArc::between(UnitDir::E1, UnitDir::E1, &tol()).unwrap();
        assert_eq!(single.kind, GeodesicKind::Singleton);
        assert!(geodesic_contains(&single, UnitDir::E1, &tol()));
        assert!(!geodesic_contains(&single, UnitDir::E2, &tol()));
    }

    #[test]
    fn half_circle_flag() {
        let half = GeodesicArc::half_circle(UnitDir::E2);
        assert!(half.contains(UnitDir::E1, &tol()));
        assert!(half.contains(-UnitDir::E1, &tol()));
        assert!(half.contains(UnitDir::E2, &tol()));
        assert!(!half.contains(-UnitDir::E2, &tol()));
        assert!(GeodesicArc::between(UnitDir::E1, -UnitDir::E1, &tol()).is_err());
    }

    #[test]
    fn circle_segment_tangent_and_secant() {
        let c = circ(0.0, 0.0, 1.0);
        let hits = circle_segment_intersect(&c, Point2::new(-2.0, 1.0), Point2::new(2.0, 1.0), &tol());
        assert_eq!(hits.len(), 1);
        assert!(hits[0].1.dist(Point2::new(0.0, 1.0)) < 1e-12);
        let hits = circle_segment_intersect(&c, Point2::new(-2.0, 0.0), Point2::new(2.0, 0.0), &tol());
        assert_eq!(hits.len(), 2);
        assert!(hits[0].1.dist(Point2::new(-1.0, 0.0)) < 1e-12);
        let hits = circle_segment_intersect(&c, Point2::new(0.0, 0.0), Point2::new(0.5, 0.0), &tol());
        assert!(hits.is_empty());
    }

    #[test]
    fn segment_crossings() {
        let t = tol();
        let got = segment_segment_intersect(
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, -1.0),
            Point2::new(1.0, 1.0),
            &t,
        );
        match got {
            SegmentIntersection::Point { t, u, p } => {
                assert!((t - 0.5).abs() < 1e-12 && (u - 0.5).abs() < 1e-12);
                assert!(p.dist(Point2::new(1.0, 0.0)) < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let got = segment_segment_intersect(
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(3.0, 0.0),
            &t,
        );
        assert_eq!(got, SegmentIntersection::Overlap { t0: 0.5, t1: 1.0 });
    }

    #[test]
    fn cw_sweep_wraps() {
        assert!((cw_sweep(UnitDir::E2, UnitDir::E1) - PI / 2.0).abs() < 1e-12);
        assert!((cw_sweep(UnitDir::E1, UnitDir::E2) - 1.5 * PI).abs() < 1e-12);
        assert!((cw_sweep(UnitDir::E1, UnitDir::E1) - 2.0 * PI).abs() < 1e-12);
    }
}
