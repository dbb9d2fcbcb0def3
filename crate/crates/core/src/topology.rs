//! Complement components and the Jordan-curve decomposition of the boundary.
//!
//! Each element has the complement on its left. Walking elements and
//! turning onto the first end clockwise from the reversed arrival direction
//! traces the boundary cycles of the complement faces. Jordan curves follow
//! the same walk except at tangencies where one complement component
//! touches from both sides; there the curve passes straight through.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryGraph, ElementSupport, End};
use crate::error::{Error, Result};
use crate::geometry::{
    circle_circle_intersect, circle_segment_intersect, segment_segment_intersect, Circle,
    CircleIntersection, Point2, SegmentIntersection, UnitDir,
};
use crate::raster;
use crate::scene::GeneratorScene;
use crate::singularity::{classify_graph, QSplit, SingularityClass};

/// An element end at a vertex with the direction leaving the vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StarEntry {
    pub element: usize,
    pub end: End,
    pub dir: UnitDir,
    pub curvature: f64,
}

/// Element ends at vertex `v` in counter-clockwise order of departure.
/// Ends leaving in the same direction are ordered by how they bend.
pub fn vertex_star(g: &BoundaryGraph, v: usize) -> Vec<StarEntry> {
    let ang_tol = g.tol.ang;
    let mut entries: Vec<(f64, StarEntry)> = g.vertices[v]
        .incident
        .iter()
        .map(|&(e, end)| {
            let (dir, curvature) = g.elements[e].departure(end);
            let a = dir.angle().rem_euclid(TAU);
            (a, StarEntry { element: e, end, dir, curvature })
        })
        .collect();
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    if entries.is_empty() {
        return Vec::new();
    }
    // Cluster nearly equal angles; the last cluster may wrap onto the first.
    let mut cluster = vec![0usize; entries.len()];
    for k in 1..entries.len() {
        cluster[k] = if entries[k].0 - entries[k - 1].0 <= ang_tol { cluster[k - 1] } else { cluster[k - 1] + 1 };
    }
    let last = *cluster.last().unwrap();
    if last > 0 && entries[0].0 + TAU - entries[entries.len() - 1].0 <= ang_tol {
        for k in 0..entries.len() {
            if cluster[k] == last {
                cluster[k] = 0;
                entries[k].0 -= TAU;
            }
        }
    }
    let mut keyed: Vec<(usize, f64, StarEntry)> =
        entries.into_iter().zip(cluster).map(|((a, e), c)| (c, a, e)).collect();
    keyed.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.2.curvature.total_cmp(&b.2.curvature))
            .then(a.1.total_cmp(&b.1))
            .then(a.2.element.cmp(&b.2.element))
    });
    keyed.into_iter().map(|(_, _, e)| e).collect()
}

/// The end immediately clockwise of `(element, end)` in the star of `v`.
fn cw_neighbour(star: &[StarEntry], element: usize, end: End) -> Option<StarEntry> {
    let i = star.iter().position(|s| s.element == element && s.end == end)?;
    Some(star[(i + star.len() - 1) % star.len()])
}

/// Face-walk successor of element `e` at its stop vertex.
pub fn face_successor(g: &BoundaryGraph, e: usize) -> Result<Option<usize>> {
    let Some(v) = g.elements[e].stop else { return Ok(None) };
    let star = vertex_star(g, v);
    match cw_neighbour(&star, e, End::Stop) {
        Some(StarEntry { element, end: End::Start, .. }) => Ok(Some(element)),
        other => Err(Error::TraversalStuck {
            vertex: v,
            detail: format!("arrival on element {e} is followed by {other:?}"),
        }),
    }
}

/// Closed walk of elements bounding one complement face.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceCycle {
    pub elements: Vec<usize>,
    pub signed_area: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceStructure {
    pub cycles: Vec<FaceCycle>,
    pub cycle_of_element: Vec<usize>,
    pub cycle_component: Vec<usize>,
    pub n_components: usize,
    pub witnesses: Vec<Point2>,
}

impl FaceStructure {
    pub fn component_of_element(&self, e: usize) -> usize {
        self.cycle_component[self.cycle_of_element[e]]
    }

    /// Complement component containing `q`, or `None` inside the
    /// neighbourhood.
    pub fn component_of_point(&self, scene: &GeneratorScene, g: &BoundaryGraph, q: Point2) -> Option<usize> {
        if scene.distance(q) <= scene.epsilon() {
            return None;
        }
        let mut best: Option<(f64, usize)> = None;
        for (k, c) in self.cycles.iter().enumerate() {
            if c.signed_area <= 0.0 {
                continue;
            }
            if winding_number(g, &c.elements, q) != 0 && best.is_none_or(|(a, _)| c.signed_area < a) {
                best = Some((c.signed_area, k));
            }
        }
        Some(best.map_or(0, |(_, k)| self.cycle_component[k]))
    }
}

/// Signed area enclosed by a closed sequence of elements.
pub fn signed_area(g: &BoundaryGraph, elements: &[usize]) -> f64 {
    elements
        .iter()
        .map(|&e| match g.elements[e].support {
            ElementSupport::OffsetSegment { p0, p1 } => 0.5 * p0.cross(p1),
            ElementSupport::Arc { radius, ccw, sweep, .. } => {
                let s = &g.elements[e].support;
                let chord = 0.5 * s.start_point().cross(s.end_point());
                let seg = 0.5 * radius * radius * (sweep - sweep.sin());
                chord + if ccw { seg } else { -seg }
            }
        })
        .sum()
}

fn turn(a: Point2, b: Point2) -> f64 {
    a.cross(b).atan2(a.dot(b))
}

/// Total angle swept by `support` as seen from `q`.
fn swept_angle(support: &ElementSupport, q: Point2) -> f64 {
    match *support {
        ElementSupport::OffsetSegment { p0, p1 } => turn(p0 - q, p1 - q),
        ElementSupport::Arc { center, radius, ccw, sweep, .. } => {
            let sign = if ccw { 1.0 } else { -1.0 };
            let inside = q.dist(center) < radius;
            if support.is_full_circle() {
                return if inside { sign * TAU } else { 0.0 };
            }
            // Split so that no chord passes through `q`.
            let base = ((sweep / (0.5 * PI)).ceil() as usize).max(1);
            let pieces = (base..base + 3)
                .find(|&n| {
                    (0..n).all(|k| {
                        let a = support.point_at(k as f64 / n as f64);
                        let b = support.point_at((k + 1) as f64 / n as f64);
                        (b - a).cross(q - a).abs() > 1e-9 * radius * radius
                    })
                })
                .unwrap_or(base);
            let mut total = 0.0;
            for k in 0..pieces {
                let t0 = k as f64 / pieces as f64;
                let t1 = (k + 1) as f64 / pieces as f64;
                let a = support.point_at(t0);
                let b = support.point_at(t1);
                let m = support.point_at(0.5 * (t0 + t1));
                total += turn(a - q, b - q);
                let chord = b - a;
                if inside && chord.cross(q - a) * chord.cross(m - a) > 0.0 {
                    total += sign * TAU;
                }
            }
            total
        }
    }
}

/// Winding number of the closed element sequence around `q`.
pub fn winding_number(g: &BoundaryGraph, elements: &[usize], q: Point2) -> i64 {
    let total: f64 = elements.iter().map(|&e| swept_angle(&g.elements[e].support, q)).sum();
    (total / TAU).round() as i64
}

/// Traces all face cycles and groups them into complement components.
/// Component 0 is the unbounded one.
pub fn face_structure(scene: &GeneratorScene, g: &BoundaryGraph) -> Result<FaceStructure> {
    let n = g.elements.len();
    let mut cycle_of_element = vec![usize::MAX; n];
    let mut cycles = Vec::new();
    for e0 in 0..n {
        if cycle_of_element[e0] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut elems = Vec::new();
        let mut cur = e0;
        loop {
            if cycle_of_element[cur] != usize::MAX {
                return Err(Error::TraversalStuck {
                    vertex: g.elements[cur].start.unwrap_or(usize::MAX),
                    detail: format!("element {cur} reached twice by the face walk"),
                });
            }
            cycle_of_element[cur] = id;
            elems.push(cur);
            match face_successor(g, cur)? {
                None => break,
                Some(next) if next == e0 => break,
                Some(next) => cur = next,
            }
        }
        let signed_area = signed_area(g, &elems);
        cycles.push(FaceCycle { elements: elems, signed_area });
    }

    let mut cycle_component = vec![0usize; cycles.len()];
    let mut n_components = 1;
    for (k, c) in cycles.iter().enumerate() {
        if c.signed_area > 0.0 {
            cycle_component[k] = n_components;
            n_components += 1;
        }
    }
    for k in 0..cycles.len() {
        if cycles[k].signed_area > 0.0 {
            continue;
        }
        let probe = g.elements[cycles[k].elements[0]].support.point_at(0.5);
        let mut best: Option<(f64, usize)> = None;
        for (j, c) in cycles.iter().enumerate() {
            if c.signed_area > 0.0
                && winding_number(g, &c.elements, probe) != 0
                && best.is_none_or(|(a, _)| c.signed_area < a)
            {
                best = Some((c.signed_area, j));
            }
        }
        cycle_component[k] = best.map_or(0, |(_, j)| cycle_component[j]);
    }

    let mut fs = FaceStructure { cycles, cycle_of_element, cycle_component, n_components, witnesses: Vec::new() };
    fs.witnesses = (0..n_components)
        .map(|c| witness(scene, g, &fs, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(fs)
}

/// A point of component `c` just off its longest boundary element.
fn witness(scene: &GeneratorScene, g: &BoundaryGraph, fs: &FaceStructure, c: usize) -> Result<Point2> {
    let mut elems: Vec<usize> = (0..g.elements.len()).filter(|&e| fs.component_of_element(e) == c).collect();
    elems.sort_by(|&a, &b| g.elements[b].support.length().total_cmp(&g.elements[a].support.length()).then(a.cmp(&b)));
    let eps = scene.epsilon();
    for &e in &elems {
        for step in [1e-3, 1e-5, 1e-7] {
            let s = &g.elements[e].support;
            let q = s.point_at(0.5) + s.outward_normal_at(0.5).vec() * (step * eps);
            if scene.distance(q) > eps && fs.component_of_point(scene, g, q) == Some(c) {
                return Ok(q);
            }
        }
    }
    Err(Error::Invariant(format!("no witness point found for complement component {c}")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplementComponent {
    pub id: usize,
    pub bounded: bool,
    pub witness: Point2,
    pub boundary_curve_ids: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Reverse,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JordanCurve {
    pub id: usize,
    pub component: usize,
    pub cycle: Vec<(usize, Direction)>,
    pub vertices: Vec<usize>,
    pub signed_area: f64,
}

impl JordanCurve {
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.cycle.iter().map(|&(e, _)| e)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub curves: Vec<JordanCurve>,
    pub inaccessible: Vec<Point2>,
    pub per_component: BTreeMap<usize, Vec<usize>>,
    pub components: Vec<ComplementComponent>,
    pub classes: Vec<SingularityClass>,
    pub curve_of_element: Vec<usize>,
}

/// Complement components found by the face walk. With `oracle_grid` set,
/// the count is cross-checked against a raster flood fill.
pub fn complement_components(
    scene: &GeneratorScene,
    g: &BoundaryGraph,
    oracle_grid: Option<usize>,
) -> Result<Vec<ComplementComponent>> {
    let d = decompose(scene, g)?;
    if let Some(res) = oracle_grid {
        let field = raster::build_field(scene, res);
        let raster_count = raster::resolved_components(&field, scene.epsilon());
        if raster_count != d.components.len() {
            return Err(Error::OracleMismatch { symbolic: d.components.len(), raster: raster_count });
        }
    }
    Ok(d.components)
}

pub fn decompose(scene: &GeneratorScene, g: &BoundaryGraph) -> Result<Decomposition> {
    let faces = face_structure(scene, g)?;
    let classes = classify_graph(scene, g, &faces)?;
    decompose_with(g, &faces, classes)
}

/// Jordan decomposition from precomputed faces and vertex classes.
pub fn decompose_with(g: &BoundaryGraph, faces: &FaceStructure, classes: Vec<SingularityClass>) -> Result<Decomposition> {
    let n = g.elements.len();
    let mut curve_of_element = vec![usize::MAX; n];
    let mut curves: Vec<JordanCurve> = Vec::new();
    for e0 in 0..n {
        if curve_of_element[e0] != usize::MAX {
            continue;
        }
        let id = curves.len();
        let mut cycle = Vec::new();
        let mut vertices = Vec::new();
        let mut cur = e0;
        loop {
            if curve_of_element[cur] != usize::MAX {
                return Err(Error::TraversalStuck {
                    vertex: g.elements[cur].start.unwrap_or(usize::MAX),
                    detail: format!("element {cur} reached twice"),
                });
            }
            curve_of_element[cur] = id;
            cycle.push((cur, Direction::Forward));
            if let Some(v) = g.elements[cur].start {
                vertices.push(v);
            }
            let Some(v) = g.elements[cur].stop else { break };
            let next = if matches!(classes[v], SingularityClass::SharpSharp { split: QSplit::Q1 }) {
                pass_through(g, v, cur)?
            } else {
                face_successor(g, cur)?.expect("element with a stop vertex")
            };
            if next == e0 {
                break;
            }
            cur = next;
        }
        let elems: Vec<usize> = cycle.iter().map(|&(e, _)| e).collect();
        let component = faces.component_of_element(e0);
        curves.push(JordanCurve { id, component, cycle, vertices, signed_area: signed_area(g, &elems) });
    }
    let mut per_component: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in &curves {
        per_component.entry(c.component).or_default().push(c.id);
    }
    let components = (0..faces.n_components)
        .map(|c| ComplementComponent {
            id: c,
            bounded: c != 0,
            witness: faces.witnesses[c],
            boundary_curve_ids: per_component.get(&c).cloned().unwrap_or_default(),
        })
        .collect();
    Ok(Decomposition { curves, inaccessible: Vec::new(), per_component, components, classes, curve_of_element })
}

/// Continuation at a tangency shared by one component: the departing
/// element realized by the same contributor as the arriving one.
fn pass_through(g: &BoundaryGraph, v: usize, arriving: usize) -> Result<usize> {
    let x = g.vertices[v].pos;
    let eps = g.epsilon;
    let y = g.elements[arriving].contributor_point(x, eps);
    let reach = 10.0 * g.tol.pos;
    let found: Vec<usize> = g.vertices[v]
        .incident
        .iter()
        .filter(|&&(e, end)| end == End::Start && g.elements[e].contributor_point(x, eps).dist(y) <= reach)
        .map(|&(e, _)| e)
        .collect();
    match found.as_slice() {
        [e] => Ok(*e),
        _ => Err(Error::TraversalStuck {
            vertex: v,
            detail: format!("{} departures share the contributor of element {arriving}", found.len()),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Accessibility {
    Accessible(Vec<usize>),
    Inaccessible,
}

/// Components whose boundary curves pass through the boundary point `x`.
pub fn accessibility(g: &BoundaryGraph, d: &Decomposition, x: Point2) -> Result<Accessibility> {
    let reach = 2.0 * g.tol.pos;
    let mut comps: Vec<usize> = g
        .elements_near(x, reach)
        .into_iter()
        .map(|(e, _)| d.curves[d.curve_of_element[e]].component)
        .collect();
    comps.sort_unstable();
    comps.dedup();
    if comps.is_empty() {
        return Err(Error::NotOnBoundary { point: x, offset: f64::NAN });
    }
    Ok(Accessibility::Accessible(comps))
}

/// Points where two elements meet away from their shared vertices.
fn element_crossings(g: &BoundaryGraph, a: usize, b: usize) -> Vec<Point2> {
    let ea = &g.elements[a];
    let eb = &g.elements[b];
    let tol = &g.tol;
    let mut pts: Vec<Point2> = Vec::new();
    match (ea.support, eb.support) {
        (ElementSupport::Arc { center: c1, radius: r1, .. }, ElementSupport::Arc { center: c2, radius: r2, .. }) => {
            if let (Ok(k1), Ok(k2)) = (Circle::new(c1, r1), Circle::new(c2, r2)) {
                match circle_circle_intersect(&k1, &k2, tol) {
                    Ok(CircleIntersection::Tangent(p)) => pts.push(p),
                    Ok(CircleIntersection::Pair(p, q)) => pts.extend([p, q]),
                    _ => {}
                }
            }
        }
        (ElementSupport::Arc { center, radius, .. }, ElementSupport::OffsetSegment { p0, p1 })
        | (ElementSupport::OffsetSegment { p0, p1 }, ElementSupport::Arc { center, radius, .. }) => {
            if let Ok(k) = Circle::new(center, radius) {
                pts.extend(circle_segment_intersect(&k, p0, p1, tol).into_iter().map(|(_, p)| p));
            }
        }
        (ElementSupport::OffsetSegment { p0: a0, p1: a1 }, ElementSupport::OffsetSegment { p0: b0, p1: b1 }) => {
            match segment_segment_intersect(a0, a1, b0, b1, tol) {
                SegmentIntersection::Point { p, .. } => pts.push(p),
                SegmentIntersection::Overlap { t0, t1 } => pts.push(a0.lerp(a1, 0.5 * (t0 + t1))),
                SegmentIntersection::None => {}
            }
        }
    }
    let on = 100.0 * tol.pos;
    let shared: Vec<Point2> = [ea.start, ea.stop, eb.start, eb.stop]
        .into_iter()
        .flatten()
        .map(|v| g.vertices[v].pos)
        .collect();
    pts.into_iter()
        .filter(|&p| ea.support.project(p).1 <= on && eb.support.project(p).1 <= on)
        .filter(|&p| !shared.iter().any(|&s| s.dist(p) <= on))
        .collect()
}

/// Failed structural checks on a decomposition; empty when all hold.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub partition_ok: bool,
    pub simple_ok: bool,
    pub pairwise_ok: bool,
    pub orientation_ok: bool,
    pub count_bound_ok: bool,
    pub inaccessible_empty: bool,
    pub problems: Vec<String>,
}

impl StructureReport {
    pub fn all_ok(&self) -> bool {
        self.partition_ok
            && self.simple_ok
            && self.pairwise_ok
            && self.orientation_ok
            && self.count_bound_ok
            && self.inaccessible_empty
    }
}

/// Checks partition, simplicity, pairwise-intersection, orientation and
/// curve-count properties of `d`.
pub fn check_structure(g: &BoundaryGraph, faces: &FaceStructure, d: &Decomposition) -> StructureReport {
    let mut r = StructureReport { inaccessible_empty: d.inaccessible.is_empty(), ..Default::default() };
    if !r.inaccessible_empty {
        r.problems.push(format!("{} inaccessible elements", d.inaccessible.len()));
    }

    let mut seen = vec![0usize; g.elements.len()];
    for c in &d.curves {
        for e in c.elements() {
            seen[e] += 1;
        }
    }
    r.partition_ok = seen.iter().all(|&k| k == 1);
    if !r.partition_ok {
        r.problems.push("elements not partitioned into curves".into());
    }

    r.simple_ok = true;
    for c in &d.curves {
        let mut vs = c.vertices.clone();
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            r.simple_ok = false;
            r.problems.push(format!("curve {} repeats a vertex", c.id));
        }
        let es: Vec<usize> = c.elements().collect();
        for i in 0..es.len() {
            for j in (i + 1)..es.len() {
                if !element_crossings(g, es[i], es[j]).is_empty() {
                    r.simple_ok = false;
                    r.problems.push(format!("curve {} crosses itself at elements {} and {}", c.id, es[i], es[j]));
                }
            }
        }
    }

    r.pairwise_ok = true;
    for a in 0..d.curves.len() {
        for b in (a + 1)..d.curves.len() {
            let (ca, cb) = (&d.curves[a], &d.curves[b]);
            let shared = ca.vertices.iter().filter(|v| cb.vertices.contains(v)).count();
            if ca.component == cb.component && shared > 1 {
                r.pairwise_ok = false;
                r.problems.push(format!("curves {a} and {b} share {shared} vertices"));
            }
            for ea in ca.elements() {
                for eb in cb.elements() {
                    if !element_crossings(g, ea, eb).is_empty() {
                        r.pairwise_ok = false;
                        r.problems.push(format!("curves {a} and {b} meet away from vertices"));
                    }
                }
            }
        }
    }

    r.orientation_ok = true;
    for comp in &d.components {
        let positive = comp.boundary_curve_ids.iter().filter(|&&c| d.curves[c].signed_area > 0.0).count();
        let expected = usize::from(comp.bounded);
        if positive != expected {
            r.orientation_ok = false;
            r.problems.push(format!("component {} has {positive} positively oriented curves", comp.id));
        }
    }

    r.count_bound_ok = true;
    for comp in &d.components {
        let cycles = faces.cycle_component.iter().filter(|&&c| c == comp.id).count();
        let mut q1: Vec<usize> = comp
            .boundary_curve_ids
            .iter()
            .flat_map(|&c| d.curves[c].vertices.iter().copied())
            .filter(|&v| matches!(d.classes[v], SingularityClass::SharpSharp { split: QSplit::Q1 }))
            .collect();
        q1.sort_unstable();
        q1.dedup();
        let m = comp.boundary_curve_ids.len();
        if m > cycles + q1.len() {
            r.count_bound_ok = false;
            r.problems.push(format!("component {} has {m} curves for {cycles} cycles and {} Q1 vertices", comp.id, q1.len()));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::build_boundary;
    use crate::scene::parse_scene;

    fn setup(text: &str) -> (GeneratorScene, BoundaryGraph, Decomposition, FaceStructure) {
        let s = parse_scene(text).unwrap();
        let g = build_boundary(&s).unwrap();
        let f = face_structure(&s, &g).unwrap();
        let d = decompose(&s, &g).unwrap();
        (s, g, d, f)
    }

    #[test]
    fn single_point_is_one_curve_one_component() {
        let (_, g, d, f) = setup("epsilon 1\npoint 0 0");
        assert_eq!(d.curves.len(), 1);
        assert_eq!(d.components.len(), 1);
        assert!(!d.components[0].bounded);
        assert!((d.curves[0].signed_area + PI).abs() < 1e-12);
        assert!(check_structure(&g, &f, &d).all_ok());
    }

    #[test]
    fn tangent_discs_split_into_two_curves() {
        let (s, g, d, f) = setup("epsilon 1\npoint -1 0\npoint 1 0");
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.curves.len(), 2);
        assert_eq!(f.cycles.len(), 1);
        let shared: Vec<&usize> = d.curves[0].vertices.iter().filter(|v| d.curves[1].vertices.contains(v)).collect();
        assert_eq!(shared.len(), 1);
        assert!(g.vertices[*shared[0]].pos.norm() < 1e-12);
        let r = check_structure(&g, &f, &d);
        assert!(r.all_ok(), "{:?}", r.problems);
        assert_eq!(accessibility(&g, &d, Point2::ORIGIN).unwrap(), Accessibility::Accessible(vec![0]));
        assert_eq!(complement_components(&s, &g, Some(256)).unwrap().len(), 1);
    }

    #[test]
    fn triangle_hole_has_two_components() {
        let (s, g, d, f) = setup(&format!("epsilon 1.1\npoint 0 0\npoint 2 0\npoint 1 {}", 3f64.sqrt()));
        assert_eq!(d.components.len(), 2);
        assert_eq!(d.curves.len(), 2);
        for c in &d.curves {
            assert_eq!(c.cycle.len(), 3);
        }
        let hole = &d.components[1];
        assert!(hole.bounded);
        assert!(hole.witness.dist(Point2::new(1.0, 1.0 / 3f64.sqrt())) < 0.1);
        assert!(check_structure(&g, &f, &d).all_ok());
        let inner = d.curves.iter().find(|c| c.component == 1).unwrap();
        let e = inner.cycle[0].0;
        let x = g.elements[e].support.point_at(0.5);
        assert_eq!(accessibility(&g, &d, x).unwrap(), Accessibility::Accessible(vec![1]));
        assert_eq!(complement_components(&s, &g, Some(256)).unwrap().len(), 2);
    }

    #[test]
    fn pocket_closed_by_tangency_is_a_second_component() {
        let text = "epsilon 1\nsegment 2 2 -2 2\nsegment -2 2 -2 -2\nsegment -2 -2 2 -2\nsegment 4 -3 4 3";
        let (_, g, d, f) = setup(text);
        assert_eq!(d.components.len(), 2);
        let q2: Vec<usize> = (0..g.vertices.len())
            .filter(|&v| matches!(d.classes[v], SingularityClass::SharpSharp { split: QSplit::Q2 }))
            .collect();
        assert_eq!(q2.len(), 2);
        let x = g.vertices[q2[0]].pos;
        assert!((x.x - 3.0).abs() < 1e-9 && (x.y.abs() - 2.0).abs() < 1e-9);
        assert_eq!(accessibility(&g, &d, x).unwrap(), Accessibility::Accessible(vec![0, 1]));
        let r = check_structure(&g, &f, &d);
        assert!(r.all_ok(), "{:?}", r.problems);
    }

    #[test]
    fn winding_of_circle() {
        let (_, g, _, _) = setup("epsilon 1\npoint 0 0");
        assert_eq!(winding_number(&g, &[0], Point2::new(0.2, 0.1)), -1);
        assert_eq!(winding_number(&g, &[0], Point2::new(2.0, 0.0)), 0);
    }

    #[test]
    fn winding_of_partial_arcs_matches_polygon() {
        let (_, g, d, _) = setup(&format!("epsilon {}\npoint -1 0\npoint 1 0", 2f64.sqrt()));
        let elems: Vec<usize> = d.curves[0].elements().collect();
        for q in [Point2::new(0.0, 0.0), Point2::new(0.0, 0.9), Point2::new(-2.0, 0.0), Point2::new(2.3, 0.0)] {
            assert_eq!(winding_number(&g, &elems, q), -1, "{q:?}");
        }
        for q in [Point2::new(0.0, 1.2), Point2::new(3.0, 0.0), Point2::new(0.0, -1.1)] {
            assert_eq!(winding_number(&g, &elems, q), 0, "{q:?}");
        }
    }
}
