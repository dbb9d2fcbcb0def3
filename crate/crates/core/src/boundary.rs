//! The boundary of the epsilon-neighbourhood as an arrangement of circular
//! arcs and straight offset pieces.
//!
//! Candidate curves are the circles of radius epsilon around point sites
//! and segment endpoints and the two parallel offsets of every segment.
//! Each candidate is split at its intersections with the others; a piece
//! survives when it lies on the boundary of the union. Every surviving
//! element is oriented so that the neighbourhood lies on its right.

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    circle_circle_intersect, circle_segment_intersect, cw_sweep, segment_segment_intersect, Circle,
    CircleIntersection, Point2, SegmentIntersection, Tolerance, UnitDir,
};
use crate::scene::{GeneratorScene, GeneratorShape};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointWhich {
    First,
    Second,
}

/// Which part of a generator produced an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "which", rename_all = "snake_case")]
pub enum ContributorLocus {
    PointSite,
    SegmentEndpoint(EndpointWhich),
    SegmentInterior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContributorTag {
    pub generator: usize,
    pub locus: ContributorLocus,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementSupport {
    /// Arc of the circle `center, radius`, from `from` to `to`, sweeping
    /// `sweep` radians in the stated sense. `sweep == 2pi` is a full circle.
    Arc {
        center: Point2,
        radius: f64,
        from: UnitDir,
        to: UnitDir,
        ccw: bool,
        sweep: f64,
    },
    OffsetSegment { p0: Point2, p1: Point2 },
}

impl ElementSupport {
    pub fn length(&self) -> f64 {
        match *self {
            ElementSupport::Arc { radius, sweep, .. } => radius * sweep,
            ElementSupport::OffsetSegment { p0, p1 } => p0.dist(p1),
        }
    }

    /// Point at fraction `t` of the element, in traversal order.
    pub fn point_at(&self, t: f64) -> Point2 {
        match *self {
            ElementSupport::Arc { center, radius, from, ccw, sweep, .. } => {
                let sign = if ccw { 1.0 } else { -1.0 };
                center + from.rotate(sign * t * sweep).vec() * radius
            }
            ElementSupport::OffsetSegment { p0, p1 } => p0.lerp(p1, t),
        }
    }

    pub fn start_point(&self) -> Point2 {
        self.point_at(0.0)
    }

    pub fn end_point(&self) -> Point2 {
        self.point_at(1.0)
    }

    /// Unit tangent in traversal direction at fraction `t`.
    pub fn tangent_at(&self, t: f64) -> UnitDir {
        match *self {
            ElementSupport::Arc { from, ccw, sweep, .. } => {
                let sign = if ccw { 1.0 } else { -1.0 };
                let u = from.rotate(sign * t * sweep);
                if ccw {
                    u.rot_ccw()
                } else {
                    u.rot_cw()
                }
            }
            ElementSupport::OffsetSegment { p0, p1 } => {
                (p1 - p0).direction().unwrap_or(UnitDir::E1)
            }
        }
    }

    /// Left normal of the traversal, pointing away from the neighbourhood.
    pub fn outward_normal_at(&self, t: f64) -> UnitDir {
        self.tangent_at(t).rot_ccw()
    }

    /// Signed curvature of the traversal (left turns positive).
    pub fn curvature(&self) -> f64 {
        match *self {
            ElementSupport::Arc { radius, ccw, .. } => {
                if ccw {
                    1.0 / radius
                } else {
                    -1.0 / radius
                }
            }
            ElementSupport::OffsetSegment { .. } => 0.0,
        }
    }

    /// Fraction of the closest point on the element and its distance.
    pub fn project(&self, p: Point2) -> (f64, f64) {
        match *self {
            ElementSupport::Arc { center, radius, from, ccw, sweep, .. } => {
                if let Some(u) = (p - center).direction() {
                    let ang = if ccw { from.ccw_angle_to(u) } else { u.ccw_angle_to(from) };
                    if ang <= sweep {
                        return (ang / sweep, ((p - center).norm() - radius).abs());
                    }
                }
                let d0 = p.dist(self.start_point());
                let d1 = p.dist(self.end_point());
                if d0 <= d1 {
                    (0.0, d0)
                } else {
                    (1.0, d1)
                }
            }
            ElementSupport::OffsetSegment { p0, p1 } => {
                let (q, t) = crate::geometry::closest_on_segment(p, p0, p1);
                (t, q.dist(p))
            }
        }
    }

    pub fn is_full_circle(&self) -> bool {
        matches!(*self, ElementSupport::Arc { sweep, .. } if sweep >= 2.0 * PI)
    }

    /// Points along the element with spacing at most `spacing`, both ends
    /// included.
    pub fn sample(&self, spacing: f64) -> Vec<Point2> {
        let n = ((self.length() / spacing).ceil() as usize).max(1);
        (0..=n).map(|k| self.point_at(k as f64 / n as f64)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum End {
    Start,
    Stop,
}

/// One maximal arc or straight piece of the boundary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryElement {
    pub id: usize,
    pub support: ElementSupport,
    /// Generators realizing this piece. More than one entry only when
    /// distinct generators share an offset curve.
    pub contributors: Vec<ContributorTag>,
    pub start: Option<usize>,
    pub stop: Option<usize>,
}

impl BoundaryElement {
    pub fn contributor_gen(&self) -> usize {
        self.contributors[0].generator
    }

    pub fn contributor_locus(&self) -> ContributorLocus {
        self.contributors[0].locus
    }

    pub fn is_multi_contributor(&self) -> bool {
        self.contributors.len() > 1
    }

    pub fn vertex_at(&self, end: End) -> Option<usize> {
        match end {
            End::Start => self.start,
            End::Stop => self.stop,
        }
    }

    /// The nearest generator point of a point `p` on this element.
    pub fn contributor_point(&self, p: Point2, epsilon: f64) -> Point2 {
        match self.support {
            ElementSupport::Arc { center, .. } => center,
            ElementSupport::OffsetSegment { .. } => {
                let (t, _) = self.support.project(p);
                let n = self.support.outward_normal_at(t);
                p - n.vec() * epsilon
            }
        }
    }

    /// Direction leaving the vertex at `end` along the element, and the
    /// signed curvature seen by a walker moving that way.
    pub fn departure(&self, end: End) -> (UnitDir, f64) {
        match end {
            End::Start => (self.support.tangent_at(0.0), self.support.curvature()),
            End::Stop => (-self.support.tangent_at(1.0), -self.support.curvature()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    /// Two or more contributors meet.
    Junction,
    /// Tangent continuation between offset curves of the same generator
    /// point (for example where a stadium's straight side meets its cap).
    Seam,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryVertex {
    pub id: usize,
    pub pos: Point2,
    pub incident: Vec<(usize, End)>,
    pub contributors: Vec<Point2>,
    pub kind: VertexKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryGraph {
    pub elements: Vec<BoundaryElement>,
    pub vertices: Vec<BoundaryVertex>,
    pub epsilon: f64,
    pub tol: Tolerance,
}

impl BoundaryGraph {
    pub fn element(&self, id: usize) -> &BoundaryElement {
        &self.elements[id]
    }

    pub fn vertex(&self, id: usize) -> &BoundaryVertex {
        &self.vertices[id]
    }

    /// Vertex within `tol.pos`-scaled reach of `p`.
    pub fn vertex_near(&self, p: Point2, reach: f64) -> Option<usize> {
        self.vertices
            .iter()
            .filter(|v| v.pos.dist(p) <= reach)
            .min_by(|a, b| a.pos.dist(p).total_cmp(&b.pos.dist(p)))
            .map(|v| v.id)
    }

    /// Elements whose support passes within `reach` of `p`, with the
    /// fraction of the closest point.
    pub fn elements_near(&self, p: Point2, reach: f64) -> Vec<(usize, f64)> {
        self.elements
            .iter()
            .filter_map(|e| {
                let (t, d) = e.support.project(p);
                (d <= reach).then_some((e.id, t))
            })
            .collect()
    }

    /// Total number of endpoint incidences; twice the number of non-closed
    /// elements.
    pub fn incidence_count(&self) -> usize {
        self.vertices.iter().map(|v| v.incident.len()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Skip candidate pairs whose generators are farther than `2 epsilon`
    /// apart. Never changes the result.
    pub prune: bool,
    /// Evaluate candidate pairs on the rayon pool.
    pub parallel: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { prune: true, parallel: true }
    }
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    Circle { center: Point2 },
    /// Oriented so that the generating segment lies on the right.
    Line { p0: Point2, p1: Point2 },
}

#[derive(Clone, Debug)]
struct Candidate {
    shape: Shape,
    tags: Vec<ContributorTag>,
    /// Geometry the candidate is offset from, for pruning.
    source: GeneratorShape,
}

fn candidates(scene: &GeneratorScene) -> Vec<Candidate> {
    let eps = scene.epsilon();
    let tol = scene.tol();
    let mut circles: Vec<Candidate> = Vec::new();
    let mut add_circle = |c: Point2, tag: ContributorTag| {
        if let Some(existing) = circles.iter_mut().find(|k| match k.shape {
            Shape::Circle { center } => center.dist(c) <= tol.pos,
            _ => false,
        }) {
            existing.tags.push(tag);
        } else {
            circles.push(Candidate {
                shape: Shape::Circle { center: c },
                tags: vec![tag],
                source: GeneratorShape::Point { p: c },
            });
        }
    };
    for g in scene.generators() {
        match g.shape {
            GeneratorShape::Point { p } => {
                add_circle(p, ContributorTag { generator: g.id, locus: ContributorLocus::PointSite })
            }
            GeneratorShape::Segment { a, b } => {
                add_circle(
                    a,
                    ContributorTag {
                        generator: g.id,
                        locus: ContributorLocus::SegmentEndpoint(EndpointWhich::First),
                    },
                );
                add_circle(
                    b,
                    ContributorTag {
                        generator: g.id,
                        locus: ContributorLocus::SegmentEndpoint(EndpointWhich::Second),
                    },
                );
            }
        }
    }
    let mut out = circles;
    for g in scene.generators() {
        if let GeneratorShape::Segment { a, b } = g.shape {
            let dir = (b - a).direction().expect("validated segment");
            for normal in [dir.rot_ccw(), dir.rot_cw()] {
                let travel = normal.rot_cw();
                let off = normal.vec() * eps;
                let (p0, p1) = if (b - a).dot(travel.vec()) > 0.0 {
                    (a + off, b + off)
                } else {
                    (b + off, a + off)
                };
                out.push(Candidate {
                    shape: Shape::Line { p0, p1 },
                    tags: vec![ContributorTag {
                        generator: g.id,
                        locus: ContributorLocus::SegmentInterior,
                    }],
                    source: g.shape,
                });
            }
        }
    }
    out
}

/// Intersection points between two candidates, tagged with the candidate
/// they lie on.
fn pair_events(
    ci: &Candidate,
    cj: &Candidate,
    i: usize,
    j: usize,
    eps: f64,
    tol: &Tolerance,
) -> Result<Vec<(usize, Point2)>> {
    let mut pts: Vec<Point2> = Vec::new();
    let mut extra: Vec<(usize, Point2)> = Vec::new();
    match (ci.shape, cj.shape) {
        (Shape::Circle { center: a }, Shape::Circle { center: b }) => {
            let c1 = Circle::new(a, eps)?;
            let c2 = Circle::new(b, eps)?;
            match circle_circle_intersect(&c1, &c2, tol)? {
                CircleIntersection::Empty => {}
                CircleIntersection::Tangent(p) => pts.push(p),
                CircleIntersection::Pair(p, q) => {
                    pts.push(p);
                    pts.push(q);
                }
            }
        }
        (Shape::Circle { center }, Shape::Line { p0, p1, .. })
        | (Shape::Line { p0, p1, .. }, Shape::Circle { center }) => {
            let c = Circle::new(center, eps)?;
            pts.extend(circle_segment_intersect(&c, p0, p1, tol).into_iter().map(|(_, p)| p));
        }
        (Shape::Line { p0: a0, p1: a1, .. }, Shape::Line { p0: b0, p1: b1, .. }) => {
            match segment_segment_intersect(a0, a1, b0, b1, tol) {
                SegmentIntersection::None => {}
                SegmentIntersection::Point { p, .. } => pts.push(p),
                SegmentIntersection::Overlap { t0, t1 } => {
                    // Each line is split where the other one ends.
                    for t in [t0, t1] {
                        let p = a0.lerp(a1, t);
                        extra.push((i, p));
                        extra.push((j, p));
                    }
                }
            }
        }
    }
    let mut out = extra;
    for p in pts {
        out.push((i, p));
        out.push((j, p));
    }
    Ok(out)
}

/// Snaps points closer than `tol.pos` onto a single vertex.
struct Snapper {
    cell: f64,
    grid: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Point2>,
    reach: f64,
}

impl Snapper {
    fn new(reach: f64) -> Self {
        Snapper { cell: reach.max(f64::MIN_POSITIVE) * 2.0, grid: HashMap::new(), points: Vec::new(), reach }
    }

    fn key(&self, p: Point2) -> (i64, i64) {
        ((p.x / self.cell).floor() as i64, (p.y / self.cell).floor() as i64)
    }

    fn snap(&mut self, p: Point2) -> usize {
        let (kx, ky) = self.key(p);
        let mut best: Option<(usize, f64)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        let d = self.points[id].dist(p);
                        if d <= self.reach && best.is_none_or(|(_, bd)| d < bd) {
                            best = Some((id, d));
                        }
                    }
                }
            }
        }
        if let Some((id, _)) = best {
            return id;
        }
        let id = self.points.len();
        self.points.push(p);
        self.grid.entry((kx, ky)).or_default().push(id);
        id
    }
}

#[derive(Clone, Debug)]
struct Piece {
    cands: Vec<usize>,
    support: ElementSupport,
    start: Option<usize>,
    stop: Option<usize>,
}

/// Computes the boundary arrangement of the closed epsilon-neighbourhood.
pub fn build_boundary(scene: &GeneratorScene) -> Result<BoundaryGraph> {
    build_boundary_with(scene, BuildOptions::default())
}

pub fn build_boundary_with(scene: &GeneratorScene, opts: BuildOptions) -> Result<BoundaryGraph> {
    let eps = scene.epsilon();
    let tol = *scene.tol();
    let cands = candidates(scene);

    let mut pairs = Vec::new();
    for i in 0..cands.len() {
        for j in (i + 1)..cands.len() {
            if opts.prune && cands[i].source.distance_to(&cands[j].source) > 2.0 * eps + 4.0 * tol.pos
            {
                continue;
            }
            pairs.push((i, j));
        }
    }
    let eval = |&(i, j): &(usize, usize)| pair_events(&cands[i], &cands[j], i, j, eps, &tol);
    let batches: Vec<Result<Vec<(usize, Point2)>>> = if opts.parallel {
        pairs.par_iter().map(eval).collect()
    } else {
        pairs.iter().map(eval).collect()
    };

    let mut snapper = Snapper::new(tol.pos);
    let mut on_cand: Vec<Vec<usize>> = vec![Vec::new(); cands.len()];
    // Line ends are always split points.
    for (k, c) in cands.iter().enumerate() {
        if let Shape::Line { p0, p1, .. } = c.shape {
            let a = snapper.snap(p0);
            let b = snapper.snap(p1);
            on_cand[k].push(a);
            on_cand[k].push(b);
        }
    }
    for batch in batches {
        for (k, p) in batch? {
            let v = snapper.snap(p);
            on_cand[k].push(v);
        }
    }
    let vpos = snapper.points.clone();

    let mut pieces: Vec<Piece> = Vec::new();
    for (k, c) in cands.iter().enumerate() {
        let mut vs = on_cand[k].clone();
        vs.sort_unstable();
        vs.dedup();
        match c.shape {
            Shape::Circle { center } => {
                let mut with_dir: Vec<(f64, usize, UnitDir)> = vs
                    .iter()
                    .filter_map(|&v| {
                        let u = (vpos[v] - center).direction()?;
                        // Clockwise order starting from +x.
                        Some((UnitDir::E1.ccw_angle_to(u), v, u))
                    })
                    .collect();
                with_dir.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
                if with_dir.is_empty() {
                    pieces.push(Piece {
                        cands: vec![k],
                        support: ElementSupport::Arc {
                            center,
                            radius: eps,
                            from: UnitDir::E1,
                            to: UnitDir::E1,
                            ccw: false,
                            sweep: 2.0 * PI,
                        },
                        start: None,
                        stop: None,
                    });
                    continue;
                }
                let n = with_dir.len();
                for idx in 0..n {
                    let (_, va, ua) = with_dir[idx];
                    let (_, vb, ub) = with_dir[(idx + 1) % n];
                    let sweep = if n == 1 { 2.0 * PI } else { cw_sweep(ua, ub) };
                    pieces.push(Piece {
                        cands: vec![k],
                        support: ElementSupport::Arc {
                            center,
                            radius: eps,
                            from: ua,
                            to: ub,
                            ccw: false,
                            sweep,
                        },
                        start: Some(va),
                        stop: Some(vb),
                    });
                }
            }
            Shape::Line { p0, p1, .. } => {
                let d = p1 - p0;
                let l2 = d.norm_sq();
                let mut with_t: Vec<(f64, usize)> =
                    vs.iter().map(|&v| ((vpos[v] - p0).dot(d) / l2, v)).collect();
                with_t.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                for w in with_t.windows(2) {
                    let (va, vb) = (w[0].1, w[1].1);
                    if va == vb {
                        continue;
                    }
                    pieces.push(Piece {
                        cands: vec![k],
                        support: ElementSupport::OffsetSegment { p0: vpos[va], p1: vpos[vb] },
                        start: Some(va),
                        stop: Some(vb),
                    });
                }
            }
        }
    }

    // Keep pieces on the boundary of the union: not inside any other
    // neighbourhood, and with complement immediately on their outer side.
    let probe = 1e-6 * eps;
    let keep = |p: &Piece| -> bool {
        if p.support.length() <= tol.pos {
            return false;
        }
        let mid = p.support.point_at(0.5);
        if scene.distance(mid) < eps - 2.0 * tol.pos {
            return false;
        }
        let n = p.support.outward_normal_at(0.5);
        scene.distance(mid + n.vec() * probe) > eps + 0.5 * probe
    };
    let flags: Vec<bool> = if opts.parallel {
        pieces.par_iter().map(keep).collect()
    } else {
        pieces.iter().map(keep).collect()
    };
    let mut alive: Vec<Option<Piece>> = pieces
        .into_iter()
        .zip(flags)
        .map(|(p, k)| k.then_some(p))
        .collect();

    merge_duplicates(&mut alive);
    merge_seams(&mut alive, &vpos);

    let pieces: Vec<Piece> = alive.into_iter().flatten().collect();
    if pieces.is_empty() {
        return Err(Error::DegenerateScene(
            "no candidate offset curve survives on the boundary".into(),
        ));
    }

    // Renumber vertices by first creation.
    let mut used: Vec<usize> = pieces.iter().flat_map(|p| p.start.into_iter().chain(p.stop)).collect();
    used.sort_unstable();
    used.dedup();
    let remap: HashMap<usize, usize> = used.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let mut vertices: Vec<BoundaryVertex> = used
        .iter()
        .enumerate()
        .map(|(n, &o)| {
            let pos = vpos[o];
            let contributors = contributors_at(scene, pos).unwrap_or_default();
            let kind = if contributors.len() >= 2 { VertexKind::Junction } else { VertexKind::Seam };
            BoundaryVertex { id: n, pos, incident: Vec::new(), contributors, kind }
        })
        .collect();
    let mut elements = Vec::with_capacity(pieces.len());
    for (id, p) in pieces.into_iter().enumerate() {
        let start = p.start.map(|v| remap[&v]);
        let stop = p.stop.map(|v| remap[&v]);
        if let Some(v) = start {
            vertices[v].incident.push((id, End::Start));
        }
        if let Some(v) = stop {
            vertices[v].incident.push((id, End::Stop));
        }
        let mut tags: Vec<ContributorTag> = p.cands.iter().flat_map(|&c| cands[c].tags.clone()).collect();
        tags.dedup();
        elements.push(BoundaryElement { id, support: p.support, contributors: tags, start, stop });
    }
    Ok(BoundaryGraph { elements, vertices, epsilon: eps, tol })
}

/// Straight pieces produced by distinct collinear offsets are the same
/// element; fold them together.
fn merge_duplicates(alive: &mut [Option<Piece>]) {
    for i in 0..alive.len() {
        let Some(pi) = alive[i].clone() else { continue };
        if !matches!(pi.support, ElementSupport::OffsetSegment { .. }) {
            continue;
        }
        for j in (i + 1)..alive.len() {
            let dup = match &alive[j] {
                Some(pj) => {
                    matches!(pj.support, ElementSupport::OffsetSegment { .. })
                        && pj.start == pi.start
                        && pj.stop == pi.stop
                }
                None => false,
            };
            if dup {
                let pj = alive[j].take().unwrap();
                let target = alive[i].as_mut().unwrap();
                target.cands.extend(pj.cands);
            }
        }
    }
}

/// Joins consecutive pieces of the same candidate curve at vertices where
/// nothing else survives.
fn merge_seams(alive: &mut [Option<Piece>], vpos: &[Point2]) {
    let mut changed = true;
    while changed {
        changed = false;
        let mut incident: HashMap<usize, Vec<(usize, End)>> = HashMap::new();
        for (k, p) in alive.iter().enumerate() {
            if let Some(p) = p {
                if let Some(v) = p.start {
                    incident.entry(v).or_default().push((k, End::Start));
                }
                if let Some(v) = p.stop {
                    incident.entry(v).or_default().push((k, End::Stop));
                }
            }
        }
        let mut verts: Vec<usize> = incident.keys().copied().collect();
        verts.sort_unstable();
        for v in verts {
            let inc = &incident[&v];
            if inc.len() != 2 {
                continue;
            }
            let (a, b) = match (inc[0], inc[1]) {
                ((ka, End::Stop), (kb, End::Start)) => (ka, kb),
                ((kb, End::Start), (ka, End::Stop)) => (ka, kb),
                _ => continue,
            };
            let (Some(pa), Some(pb)) = (alive[a].clone(), alive[b].clone()) else { continue };
            if pa.cands != pb.cands {
                continue;
            }
            if a == b {
                // A closed arc whose only vertex is its own seam.
                if let ElementSupport::Arc { center, radius, .. } = pa.support {
                    alive[a] = Some(Piece {
                        cands: pa.cands,
                        support: ElementSupport::Arc {
                            center,
                            radius,
                            from: UnitDir::E1,
                            to: UnitDir::E1,
                            ccw: false,
                            sweep: 2.0 * PI,
                        },
                        start: None,
                        stop: None,
                    });
                    changed = true;
                }
                continue;
            }
            let support = match (pa.support, pb.support) {
                (
                    ElementSupport::Arc { center, radius, from, ccw, sweep: s1, .. },
                    ElementSupport::Arc { to, sweep: s2, .. },
                ) => ElementSupport::Arc { center, radius, from, to, ccw, sweep: s1 + s2 },
                (ElementSupport::OffsetSegment { p0, .. }, ElementSupport::OffsetSegment { p1, .. }) => {
                    ElementSupport::OffsetSegment { p0, p1 }
                }
                _ => continue,
            };
            let (lo, hi) = (a.min(b), a.max(b));
            alive[hi] = None;
            alive[lo] = Some(Piece { cands: pa.cands, support, start: pa.start, stop: pb.stop });
            let _ = vpos;
            changed = true;
            break;
        }
    }
}

/// Generator points at distance epsilon from a boundary point `p`.
pub fn contributors_at(scene: &GeneratorScene, p: Point2) -> Result<Vec<Point2>> {
    let eps = scene.epsilon();
    let tol = scene.tol();
    let d = scene.distance(p);
    if (d - eps).abs() > 2.0 * tol.pos {
        return Err(Error::NotOnBoundary { point: p, offset: d - eps });
    }
    let mut out: Vec<Point2> = Vec::new();
    for g in scene.generators() {
        let y = g.shape.closest_point(p);
        if (y.dist(p) - eps).abs() <= 2.0 * tol.pos && !out.iter().any(|q| q.dist(y) <= tol.pos) {
            out.push(y);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::parse_scene;

    fn graph(text: &str) -> BoundaryGraph {
        build_boundary(&parse_scene(text).unwrap()).unwrap()
    }

    #[test]
    fn single_disc_is_one_full_circle() {
        let g = graph("epsilon 1\npoint 0 0");
        assert_eq!(g.elements.len(), 1);
        assert!(g.vertices.is_empty());
        assert!(g.elements[0].support.is_full_circle());
        assert!((g.elements[0].support.length() - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn lens_has_two_arcs_and_two_vertices() {
        let g = graph(&format!("epsilon {}\npoint -1 0\npoint 1 0", 2f64.sqrt()));
        assert_eq!(g.elements.len(), 2);
        assert_eq!(g.vertices.len(), 2);
        let mut ys: Vec<f64> = g.vertices.iter().map(|v| v.pos.y).collect();
        ys.sort_by(f64::total_cmp);
        assert!((ys[0] + 1.0).abs() < 1e-12 && (ys[1] - 1.0).abs() < 1e-12);
        for v in &g.vertices {
            assert!(v.pos.x.abs() < 1e-12);
            assert_eq!(v.contributors.len(), 2);
            assert_eq!(v.kind, VertexKind::Junction);
        }
        // Each surviving arc is the outer three quarters of its circle.
        for e in &g.elements {
            assert!((e.support.length() - 2f64.sqrt() * 1.5 * PI).abs() < 1e-9);
        }
    }

    #[test]
    fn stadium_has_four_elements() {
        let g = graph("epsilon 1\nsegment 0 0 2 0");
        assert_eq!(g.elements.len(), 4);
        assert_eq!(g.vertices.len(), 4);
        let straight = g
            .elements
            .iter()
            .filter(|e| matches!(e.support, ElementSupport::OffsetSegment { .. }))
            .count();
        assert_eq!(straight, 2);
        for v in &g.vertices {
            assert_eq!(v.kind, VertexKind::Seam);
            assert_eq!(v.incident.len(), 2);
        }
        let perimeter: f64 = g.elements.iter().map(|e| e.support.length()).sum();
        assert!((perimeter - (4.0 + 2.0 * PI)).abs() < 1e-9);
    }

    #[test]
    fn orientation_keeps_neighbourhood_on_the_right() {
        let s = parse_scene("epsilon 0.7\nsegment 0 0 2 1\npoint 3 0\npoint -1 1").unwrap();
        let g = build_boundary(&s).unwrap();
        for e in &g.elements {
            let mid = e.support.point_at(0.5);
            let right = -e.support.outward_normal_at(0.5);
            assert!(s.distance(mid + right.vec() * 1e-3) < s.epsilon());
            assert!(s.distance(mid - right.vec() * 1e-3) > s.epsilon());
        }
    }

    #[test]
    fn point_on_segment_adds_no_vertex() {
        let g = graph("epsilon 1\nsegment 0 0 2 0\npoint 1 0");
        assert_eq!(g.elements.len(), 4);
        assert_eq!(g.vertices.len(), 4);
    }

    #[test]
    fn polyline_joint_shares_the_cap_circle() {
        let g = graph("epsilon 0.5\nsegment 0 0 2 0\nsegment 2 0 2 2");
        let s = parse_scene("epsilon 0.5\nsegment 0 0 2 0\nsegment 2 0 2 2").unwrap();
        for e in &g.elements {
            for k in 0..=8 {
                let p = e.support.point_at(k as f64 / 8.0);
                assert!((s.distance(p) - 0.5).abs() < 1e-12);
            }
        }
        // Outer corner cap, inner concave corner wedge, two end caps.
        let arcs = g.elements.iter().filter(|e| matches!(e.support, ElementSupport::Arc { .. })).count();
        assert_eq!(arcs, 3);
        let junctions = g.vertices.iter().filter(|v| v.kind == VertexKind::Junction).count();
        assert_eq!(junctions, 1);
    }

    #[test]
    fn collinear_overlap_is_one_multi_contributor_element() {
        let g = graph("epsilon 0.5\nsegment 0 0 2 0\nsegment 1 0 3 0");
        assert!(g.elements.iter().any(|e| e.is_multi_contributor()));
        let perimeter: f64 = g.elements.iter().map(|e| e.support.length()).sum();
        assert!((perimeter - (6.0 + PI * 0.5 * 2.0)).abs() < 1e-9, "{perimeter}");
    }

    #[test]
    fn facing_offsets_at_distance_two_epsilon_are_interior() {
        let g = graph("epsilon 1\nsegment 0 0 4 0\nsegment 0 2 4 2");
        // The shared offset line y = 1 is interior; only the outer hull remains.
        for e in &g.elements {
            let mid = e.support.point_at(0.5);
            assert!((mid.y - 1.0).abs() > 0.5 || mid.x < 0.0 || mid.x > 4.0);
        }
    }

    #[test]
    fn contributors_examples() {
        let s = parse_scene("epsilon 1\npoint -1 0\npoint 1 0").unwrap();
        let c = contributors_at(&s, Point2::new(0.0, 0.0)).unwrap();
        assert_eq!(c, vec![Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0)]);
        let s = parse_scene(&format!("epsilon {}\npoint -1 0\npoint 1 0", 2f64.sqrt())).unwrap();
        let c = contributors_at(&s, Point2::new(0.0, 1.0)).unwrap();
        assert_eq!(c.len(), 2);
        let s = parse_scene("epsilon 1\npoint 0 0").unwrap();
        assert_eq!(contributors_at(&s, Point2::new(1.0, 0.0)).unwrap(), vec![Point2::ORIGIN]);
        assert!(matches!(
            contributors_at(&s, Point2::new(0.5, 0.0)),
            Err(Error::NotOnBoundary { .. })
        ));
    }

    #[test]
    fn pruning_and_parallelism_do_not_change_the_graph() {
        let s = parse_scene(
            "epsilon 0.6\npoint 0 0\npoint 1 0.3\nsegment 2 -1 3 1\npoint 8 8\nsegment 7 7 9 6",
        )
        .unwrap();
        let a = build_boundary_with(&s, BuildOptions { prune: true, parallel: true }).unwrap();
        let b = build_boundary_with(&s, BuildOptions { prune: false, parallel: false }).unwrap();
        assert_eq!(a, b);
    }
}
