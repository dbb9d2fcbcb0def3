mod common;

use epshull::analysis::analyze;
use epshull::boundary::{build_boundary_with, contributors_at, BuildOptions, VertexKind};
use epshull::singularity::{extremal_pairs, local_repr, SingularityClass};
use epshull::topology::check_structure;
use epshull::UnitDir;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    /// Interior points of every element lie at distance epsilon.
    #[test]
    fn elements_are_sound(seed in 0..100_000u64) {
        let s = common::random_scene(seed);
        let a = analyze(&s).unwrap();
        let tol = 2.0 * s.tol().pos + 1e-12 * s.epsilon();
        for el in &a.graph.elements {
            for k in 0..200 {
                let p = el.support.point_at((k as f64 + 0.5) / 200.0);
                prop_assert!((s.distance(p) - s.epsilon()).abs() <= tol, "element {} off by {:e}", el.id, s.distance(p) - s.epsilon());
            }
        }
    }

    #[test]
    fn pruning_and_threads_do_not_change_the_graph(seed in 0..100_000u64) {
        let s = common::random_scene(seed);
        let base = build_boundary_with(&s, BuildOptions::default()).unwrap();
        for opts in [
            BuildOptions { prune: false, parallel: false },
            BuildOptions { prune: false, parallel: true },
            BuildOptions { prune: true, parallel: false },
        ] {
            prop_assert_eq!(&build_boundary_with(&s, opts).unwrap(), &base);
        }
    }

    /// Junctions carry at least two contributors, seams exactly one, and
    /// element interiors one unless the element is shared.
    #[test]
    fn contributor_counts(seed in 0..100_000u64) {
        let s = common::random_scene(seed);
        let a = analyze(&s).unwrap();
        for v in &a.graph.vertices {
            let n = contributors_at(&s, v.pos).unwrap().len();
            match v.kind {
                VertexKind::Junction => prop_assert!(n >= 2),
                VertexKind::Seam => prop_assert_eq!(n, 1),
            }
        }
        for el in &a.graph.elements {
            let n = contributors_at(&s, el.support.point_at(0.5)).unwrap().len();
            prop_assert_eq!(n, 1, "element {}", el.id);
        }
    }

    /// Departure tangents at a vertex are exactly its extremal outward
    /// directions, and every extremal pair is orthogonal.
    #[test]
    fn tangent_identity_and_orthogonality(seed in 0..100_000u64) {
        let s = common::random_scene(seed);
        let a = analyze(&s).unwrap();
        let tol = s.tol();
        for v in &a.graph.vertices {
            let pairs = extremal_pairs(&s, v.pos).unwrap();
            for p in &pairs {
                prop_assert!((p.y - v.pos).dot(p.xi.vec()).abs() <= s.epsilon() * tol.ang.max(1e-6));
            }
            let ext: Vec<UnitDir> = pairs.iter().map(|p| p.xi).collect();
            for &(e, end) in &v.incident {
                let d = a.graph.elements[e].departure(end).0;
                prop_assert!(ext.iter().any(|x| x.angle_to(d) <= 1e-7));
            }
            for x in &ext {
                prop_assert!(v.incident.iter().any(|&(e, end)| a.graph.elements[e].departure(end).0.angle_to(*x) <= 1e-7));
            }
        }
    }

    #[test]
    fn classification_is_exhaustive_and_wedges_match_tangents(seed in 0..100_000u64) {
        let s = common::random_scene(seed);
        let a = analyze(&s).unwrap();
        for (v, c) in a.graph.vertices.iter().zip(&a.decomposition.classes) {
            let finite = matches!(c, SingularityClass::Smooth | SingularityClass::Wedge { .. } | SingularityClass::Sharp | SingularityClass::SharpSharp { .. });
            prop_assert!(finite, "vertex {} classified {:?}", v.id, c);
            if let SingularityClass::Wedge { theta } = *c {
                prop_assert_eq!(v.incident.len(), 2);
                let d0 = a.graph.elements[v.incident[0].0].departure(v.incident[0].1).0;
                let d1 = a.graph.elements[v.incident[1].0].departure(v.incident[1].1).0;
                prop_assert!((d0.angle_to(d1) - theta).abs() <= 1e-7, "{} vs {theta}", d0.angle_to(d1));
            }
        }
    }

    /// Points near a smooth point carry a single contributor.
    #[test]
    fn smooth_points_have_unique_contributors(seed in 0..100_000u64) {
        let s = common::random_scene(seed);
        let a = analyze(&s).unwrap();
        for el in &a.graph.elements {
            let len = el.support.length();
            let r = (0.1 * len).min(0.05 * s.epsilon());
            for k in 0..100 {
                let t = 0.5 + (k as f64 / 99.0 - 0.5) * 2.0 * r / len;
                prop_assert_eq!(contributors_at(&s, el.support.point_at(t)).unwrap().len(), 1);
            }
        }
    }

    /// Local graph representations are 1/sqrt(3)-Lipschitz.
    #[test]
    fn local_representations_are_lipschitz(seed in 0..100_000u64) {
        let s = common::random_scene(seed);
        let a = analyze(&s).unwrap();
        let bound = 1.0 / 3f64.sqrt();
        let slack = 2.0 * s.tol().pos;
        let mut bases: Vec<_> = a.graph.vertices.iter().map(|v| v.pos).collect();
        bases.extend(a.graph.elements.iter().map(|e| e.support.point_at(0.3)));
        for x in bases {
            for pair in extremal_pairs(&s, x).unwrap() {
                let Ok(r) = local_repr(&s, &a.graph, x, pair, 24) else { continue };
                for i in 0..r.samples.len() {
                    for j in (i + 1)..r.samples.len() {
                        let (si, fi) = r.samples[i];
                        let (sj, fj) = r.samples[j];
                        prop_assert!((fi - fj).abs() <= (si - sj).abs() * bound + slack);
                        let planar = ((si - sj).powi(2) + (fi - fj).powi(2)).sqrt();
                        prop_assert!(planar <= 2.0 / 3f64.sqrt() * (si - sj).abs() + slack);
                    }
                }
            }
        }
    }

    /// Partition, simplicity, pairwise intersections, orientation and the
    /// union of curves.
    #[test]
    fn jordan_structure(seed in 0..100_000u64) {
        let s = common::random_scene(seed);
        let a = analyze(&s).unwrap();
        let r = check_structure(&a.graph, &a.faces, &a.decomposition);
        prop_assert!(r.all_ok(), "{:?}", r.problems);
        let mut all: Vec<usize> = a.decomposition.curves.iter().flat_map(|c| c.elements()).collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..a.graph.elements.len()).collect::<Vec<_>>());
        prop_assert!(a.decomposition.inaccessible.is_empty());
    }
}
