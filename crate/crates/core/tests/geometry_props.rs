use epshull::geometry::{circle_circle_intersect, geodesic_contains, Circle, CircleIntersection, GeodesicArc};
use epshull::scene::GeneratorScene;
use epshull::{GeneratorShape, Point2, Tolerance, UnitDir};
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

fn circle() -> impl Strategy<Value = Circle> {
    (coord(), coord(), 0.1..4.0f64).prop_map(|(x, y, r)| Circle::new(Point2::new(x, y), r).unwrap())
}

fn dir() -> impl Strategy<Value = UnitDir> {
    (0.0..std::f64::consts::TAU).prop_map(UnitDir::from_angle)
}

fn same_points(a: &CircleIntersection, b: &CircleIntersection) -> bool {
    match (a, b) {
        (CircleIntersection::Empty, CircleIntersection::Empty) => true,
        (CircleIntersection::Tangent(p), CircleIntersection::Tangent(q)) => p == q,
        (CircleIntersection::Pair(p0, p1), CircleIntersection::Pair(q0, q1)) => (p0, p1) == (q0, q1) || (p0, p1) == (q1, q0),
        _ => false,
    }
}

proptest! {
    #[test]
    fn circle_intersection_is_symmetric(a in circle(), b in circle()) {
        let tol = Tolerance::default();
        match (circle_circle_intersect(&a, &b, &tol), circle_circle_intersect(&b, &a, &tol)) {
            (Ok(x), Ok(y)) => prop_assert!(same_points(&x, &y)),
            (Err(x), Err(y)) => prop_assert_eq!(x, y),
            _ => prop_assert!(false, "one order failed"),
        }
    }

    #[test]
    fn intersection_points_lie_on_both_circles(a in circle(), b in circle()) {
        let tol = Tolerance::default();
        let pts = match circle_circle_intersect(&a, &b, &tol).unwrap() {
            CircleIntersection::Empty => vec![],
            CircleIntersection::Tangent(p) => vec![p],
            CircleIntersection::Pair(p, q) => vec![p, q],
        };
        for p in pts {
            // Centred tangency absorbs up to tol.pos of centre distance.
            prop_assert!((p.dist(a.center) - a.radius).abs() <= 2.0 * tol.pos + 1e-12 * (a.radius + b.radius));
            prop_assert!((p.dist(b.center) - b.radius).abs() <= 2.0 * tol.pos + 1e-12 * (a.radius + b.radius));
        }
    }

    #[test]
    fn geodesic_arc_contains_its_endpoints(v in dir(), w in dir()) {
        let tol = Tolerance::default();
        prop_assume!(v.angle_to(-w) > 1e-6);
        let g = GeodesicArc::between(v, w, &tol).unwrap();
        prop_assert!(geodesic_contains(&g, g.a, &tol));
        prop_assert!(geodesic_contains(&g, g.b, &tol));
        prop_assert!(geodesic_contains(&g, v, &tol) && geodesic_contains(&g, w, &tol));
    }

    /// `[v,w]`, `[w,-v]`, `[-v,-w]`, `[-w,v]` tile the circle; off their
    /// endpoints every direction lies in exactly one.
    #[test]
    fn geodesic_quarters_partition_the_circle(v in dir(), turn in 0.05..3.09f64, u in dir()) {
        let tol = Tolerance::default();
        let w = v.rotate(turn);
        for e in [v, w, -v, -w] {
            prop_assume!(u.angle_to(e) > 1e-6);
        }
        let arcs = [
            GeodesicArc::between(v, w, &tol).unwrap(),
            GeodesicArc::between(w, -v, &tol).unwrap(),
            GeodesicArc::between(-v, -w, &tol).unwrap(),
            GeodesicArc::between(-w, v, &tol).unwrap(),
        ];
        let hits = arcs.iter().filter(|g| geodesic_contains(g, u, &tol)).count();
        prop_assert_eq!(hits, 1);
    }

    /// Membership by the explicit combination `u = alpha v + beta w`.
    #[test]
    fn geodesic_membership_matches_combination(v in dir(), w in dir(), u in dir()) {
        let tol = Tolerance::default();
        prop_assume!(v.angle_to(-w) > 1e-3 && v.angle_to(w) > 1e-3);
        let det = v.ux * w.uy - v.uy * w.ux;
        let alpha = (u.ux * w.uy - u.uy * w.ux) / det;
        let beta = (v.ux * u.uy - v.uy * u.ux) / det;
        prop_assume!(alpha.abs() > 1e-6 && beta.abs() > 1e-6);
        let g = GeodesicArc::between(v, w, &tol).unwrap();
        prop_assert_eq!(geodesic_contains(&g, u, &tol), alpha > 0.0 && beta > 0.0);
    }
}

fn shape() -> impl Strategy<Value = GeneratorShape> {
    prop_oneof![
        (coord(), coord()).prop_map(|(x, y)| GeneratorShape::Point { p: Point2::new(x, y) }),
        (coord(), coord(), coord(), coord()).prop_map(|(a, b, c, d)| GeneratorShape::Segment { a: Point2::new(a, b), b: Point2::new(c, d) }),
    ]
}

fn scene() -> impl Strategy<Value = GeneratorScene> {
    (prop::collection::vec(shape(), 1..8), 0.1..2.0f64).prop_filter_map("valid scene", |(s, e)| GeneratorScene::new(s, e, None).ok())
}

/// Distance to a segment by minimizing over a fine parameter grid and
/// polishing, independent of the library's projection.
fn brute_distance(s: &GeneratorShape, p: Point2) -> f64 {
    match *s {
        GeneratorShape::Point { p: q } => q.dist(p),
        GeneratorShape::Segment { a, b } => {
            let n = 2000;
            let best = (0..=n).map(|k| k as f64 / n as f64).min_by(|x, y| a.lerp(b, *x).dist(p).total_cmp(&a.lerp(b, *y).dist(p))).unwrap();
            let (mut lo, mut hi) = ((best - 1.0 / n as f64).max(0.0), (best + 1.0 / n as f64).min(1.0));
            for _ in 0..100 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if a.lerp(b, m1).dist(p) < a.lerp(b, m2).dist(p) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            a.lerp(b, 0.5 * (lo + hi)).dist(p)
        }
    }
}

proptest! {
    #[test]
    fn distance_is_one_lipschitz(s in scene(), px in coord(), py in coord(), qx in coord(), qy in coord()) {
        let (p, q) = (Point2::new(px, py), Point2::new(qx, qy));
        prop_assert!((s.distance(p) - s.distance(q)).abs() <= p.dist(q) + 1e-12);
    }

    #[test]
    fn membership_matches_brute_distance(s in scene(), px in coord(), py in coord()) {
        let p = Point2::new(px, py);
        let brute = s.generators().iter().map(|g| brute_distance(&g.shape, p)).fold(f64::INFINITY, f64::min);
        prop_assert!((s.distance(p) - brute).abs() <= 1e-9);
        let eps = s.epsilon();
        if (brute - eps).abs() > 1e-8 {
            prop_assert_eq!(s.distance(p) <= eps, brute <= eps);
        }
    }
}
