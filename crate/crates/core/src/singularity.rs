//! Outward directions, extremal pairs, local graph representations and
//! the classification of boundary points.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{contributors_at, BoundaryGraph, ElementSupport, End, VertexKind};
use crate::error::{Error, Result};
use crate::geometry::{GeodesicArc, Point2, Tolerance, UnitDir};
use crate::scene::GeneratorScene;
use crate::topology::{face_structure, vertex_star, FaceStructure};

/// The set of outward directions at a boundary point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OutwardSet {
    HalfCircle { normal: UnitDir },
    Arc { arc: GeodesicArc },
    AntipodalPair { dir: UnitDir },
    Singleton { dir: UnitDir },
}

impl OutwardSet {
    /// Endpoints of the set; these are the only extremal directions.
    pub fn extremal_dirs(&self) -> Vec<UnitDir> {
        match *self {
            OutwardSet::HalfCircle { normal } => vec![normal.rot_cw(), normal.rot_ccw()],
            OutwardSet::Arc { arc } => vec![arc.a, arc.b],
            OutwardSet::AntipodalPair { dir } => vec![dir, -dir],
            OutwardSet::Singleton { dir } => vec![dir],
        }
    }

    /// Angle between the two extremal directions.
    pub fn opening(&self) -> f64 {
        match *self {
            OutwardSet::HalfCircle { .. } | OutwardSet::AntipodalPair { .. } => PI,
            OutwardSet::Arc { arc } => arc.a.angle_to(arc.b),
            OutwardSet::Singleton { .. } => 0.0,
        }
    }
}

/// Outward set cut out by the contributor normals `(x - y) / |x - y|`.
/// `None` when the normals surround `x`, so `x` is interior.
pub fn outward_from_normals(normals: &[UnitDir], tol: &Tolerance) -> Option<OutwardSet> {
    match normals {
        [] => None,
        [n] => Some(OutwardSet::HalfCircle { normal: *n }),
        _ => {
            let mut ang: Vec<f64> = normals.iter().map(|n| n.angle().rem_euclid(TAU)).collect();
            ang.sort_by(f64::total_cmp);
            let k = ang.len();
            let gaps: Vec<f64> = (0..k)
                .map(|i| if i + 1 < k { ang[i + 1] - ang[i] } else { ang[0] + TAU - ang[k - 1] })
                .collect();
            let (imax, gmax) = gaps
                .iter()
                .copied()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            // Normals span [start, start + spread] counter-clockwise.
            let start = ang[(imax + 1) % k];
            let spread = TAU - gmax;
            if spread > PI + tol.ang {
                return None;
            }
            if (spread - PI).abs() <= tol.ang {
                let wide = gaps.iter().filter(|&&g| g >= PI - tol.ang).count();
                let dir = UnitDir::from_angle(start + 0.5 * PI);
                return Some(if wide >= 2 {
                    let canon = if dir.uy > 0.0 || (dir.uy == 0.0 && dir.ux > 0.0) { dir } else { -dir };
                    OutwardSet::AntipodalPair { dir: canon }
                } else {
                    OutwardSet::Singleton { dir }
                });
            }
            let a = UnitDir::from_angle(start + spread - 0.5 * PI);
            let b = UnitDir::from_angle(start + 0.5 * PI);
            if PI - spread <= tol.ang {
                return Some(OutwardSet::Singleton { dir: UnitDir::from_angle(start + 0.5 * spread) });
            }
            Some(OutwardSet::Arc { arc: GeodesicArc::between(a, b, tol).ok()? })
        }
    }
}

fn normals_at(scene: &GeneratorScene, x: Point2) -> Result<(Vec<Point2>, Vec<UnitDir>)> {
    let ys = contributors_at(scene, x)?;
    let ns = ys
        .iter()
        .map(|&y| (x - y).direction().ok_or(Error::NotOnBoundary { point: x, offset: -scene.epsilon() }))
        .collect::<Result<Vec<_>>>()?;
    Ok((ys, ns))
}

/// Outward directions at boundary point `x`, from its contributors.
pub fn outward_set(scene: &GeneratorScene, x: Point2) -> Result<OutwardSet> {
    let (_, ns) = normals_at(scene, x)?;
    outward_from_normals(&ns, scene.tol()).ok_or(Error::NotOnBoundary { point: x, offset: 0.0 })
}

/// An extremal outward direction with a contributor orthogonal to it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalPair {
    pub xi: UnitDir,
    pub y: Point2,
}

pub fn extremal_pairs(scene: &GeneratorScene, x: Point2) -> Result<Vec<ExtremalPair>> {
    let (ys, ns) = normals_at(scene, x)?;
    let set = outward_from_normals(&ns, scene.tol()).ok_or(Error::NotOnBoundary { point: x, offset: 0.0 })?;
    let eps = scene.epsilon();
    let mut out = Vec::new();
    for xi in set.extremal_dirs() {
        for &y in &ys {
            if (y - x).dot(xi.vec()).abs() <= eps * scene.tol().ang.max(1e-6) {
                out.push(ExtremalPair { xi, y });
            }
        }
    }
    if out.is_empty() || out.len() > 4 {
        return Err(Error::Invariant(format!("{} extremal pairs at {x:?}", out.len())));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QSplit {
    Q1,
    Q2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnrealizableKind {
    S4,
    S5,
    S6,
    S7,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum SingularityClass {
    Smooth,
    #[serde(rename = "S1_Wedge")]
    Wedge { theta: f64 },
    #[serde(rename = "S2_Sharp")]
    Sharp,
    #[serde(rename = "S3_SharpSharp")]
    SharpSharp { split: QSplit },
    #[serde(rename = "S8_SharpChain")]
    SharpChain,
    Unrealizable { kind: UnrealizableKind },
}

impl SingularityClass {
    pub fn label(&self) -> &'static str {
        match self {
            SingularityClass::Smooth => "smooth",
            SingularityClass::Wedge { .. } => "S1",
            SingularityClass::Sharp => "S2",
            SingularityClass::SharpSharp { .. } => "S3",
            SingularityClass::SharpChain => "S8",
            SingularityClass::Unrealizable { .. } => "unrealizable",
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            SingularityClass::Wedge { theta } => Some(theta),
            SingularityClass::Sharp | SingularityClass::SharpSharp { .. } => Some(0.0),
            _ => None,
        }
    }

    pub fn q_split(&self) -> Option<QSplit> {
        match *self {
            SingularityClass::SharpSharp { split } => Some(split),
            _ => None,
        }
    }

    pub fn is_singular(&self) -> bool {
        !matches!(self, SingularityClass::Smooth)
    }

    /// Classes a finite scene can produce.
    pub fn is_finite_realizable(&self) -> bool {
        matches!(
            self,
            SingularityClass::Smooth
                | SingularityClass::Wedge { .. }
                | SingularityClass::Sharp
                | SingularityClass::SharpSharp { .. }
        )
    }
}

/// Complement cells on a polar grid around `x`, restricted to directions
/// within a right angle of `side` when given. Returns the number of
/// 4-connected complement pieces.
pub fn local_complement_pieces(scene: &GeneratorScene, x: Point2, r: f64, side: Option<UnitDir>) -> usize {
    const RINGS: usize = 24;
    const SECTORS: usize = 1024;
    let eps = scene.epsilon();
    let mut cells = vec![false; RINGS * SECTORS];
    for i in 0..RINGS {
        let rho = r / 8.0 + (r - r / 8.0) * i as f64 / (RINGS - 1) as f64;
        for j in 0..SECTORS {
            let u = UnitDir::from_angle(TAU * (j as f64 + 0.5) / SECTORS as f64);
            if side.is_some_and(|s| s.dot(u) <= 0.0) {
                continue;
            }
            cells[i * SECTORS + j] = scene.distance(x + u.vec() * rho) > eps;
        }
    }
    let wrap = side.is_none();
    let mut label = vec![usize::MAX; cells.len()];
    let mut pieces = 0;
    let mut stack = Vec::new();
    for start in 0..cells.len() {
        if !cells[start] || label[start] != usize::MAX {
            continue;
        }
        label[start] = pieces;
        stack.push(start);
        while let Some(c) = stack.pop() {
            let (i, j) = (c / SECTORS, c % SECTORS);
            let mut nb = Vec::with_capacity(4);
            if i > 0 {
                nb.push(c - SECTORS);
            }
            if i + 1 < RINGS {
                nb.push(c + SECTORS);
            }
            if j > 0 {
                nb.push(c - 1);
            } else if wrap {
                nb.push(c + SECTORS - 1);
            }
            if j + 1 < SECTORS {
                nb.push(c + 1);
            } else if wrap {
                nb.push(c + 1 - SECTORS);
            }
            for n in nb {
                if cells[n] && label[n] == usize::MAX {
                    label[n] = pieces;
                    stack.push(n);
                }
            }
        }
        pieces += 1;
    }
    pieces
}

/// Probe radius at vertex `v`: a quarter epsilon, and at most half the
/// distance to any other vertex.
pub fn probe_radius(g: &BoundaryGraph, v: usize) -> f64 {
    let x = g.vertices[v].pos;
    let near = g
        .vertices
        .iter()
        .filter(|w| w.id != v)
        .map(|w| w.pos.dist(x))
        .fold(f64::INFINITY, f64::min);
    (0.25 * g.epsilon).min(0.5 * near)
}

/// Components touching vertex `v` in the complement corners that face
/// `dir` and `-dir`.
fn corner_components(g: &BoundaryGraph, faces: &FaceStructure, v: usize, dir: UnitDir) -> Result<(usize, usize)> {
    let star = vertex_star(g, v);
    let n = star.len();
    let mut plus = None;
    let mut minus = None;
    for i in 0..n {
        let a = star[i];
        let b = star[(i + 1) % n];
        // A departing end followed counter-clockwise by an arriving end
        // encloses a complement corner.
        if a.end == End::Start && b.end == End::Stop {
            let comp = faces.component_of_element(a.element);
            if a.dir.dot(dir) > 0.0 {
                plus = Some(comp);
            } else {
                minus = Some(comp);
            }
        }
    }
    match (plus, minus) {
        (Some(p), Some(m)) => Ok((p, m)),
        _ => Err(Error::TraversalStuck { vertex: v, detail: "tangency without two complement corners".into() }),
    }
}

/// Classifies vertex `v` of `g`.
pub fn classify_graph_vertex(
    scene: &GeneratorScene,
    g: &BoundaryGraph,
    faces: &FaceStructure,
    v: usize,
) -> Result<SingularityClass> {
    let vert = &g.vertices[v];
    if vert.kind == VertexKind::Seam {
        return Ok(SingularityClass::Smooth);
    }
    let set = outward_set(scene, vert.pos)?;
    let class = match set {
        OutwardSet::HalfCircle { .. } => SingularityClass::Smooth,
        OutwardSet::Arc { .. } => SingularityClass::Wedge { theta: set.opening() },
        OutwardSet::Singleton { .. } => {
            let r = probe_radius(g, v);
            match local_complement_pieces(scene, vert.pos, r, None) {
                1 => SingularityClass::Sharp,
                k => {
                    return Err(Error::Invariant(format!(
                        "sharp vertex {v} sees {k} local complement pieces"
                    )))
                }
            }
        }
        OutwardSet::AntipodalPair { dir } => {
            let r = probe_radius(g, v);
            let up = local_complement_pieces(scene, vert.pos, r, Some(dir));
            let down = local_complement_pieces(scene, vert.pos, r, Some(-dir));
            match (up, down) {
                (1, 1) => {
                    let (p, m) = corner_components(g, faces, v, dir)?;
                    SingularityClass::SharpSharp { split: if p == m { QSplit::Q1 } else { QSplit::Q2 } }
                }
                (1, 0) | (0, 1) => SingularityClass::Sharp,
                _ => {
                    return Err(Error::Invariant(format!(
                        "tangency vertex {v} sees {up} and {down} complement pieces"
                    )))
                }
            }
        }
    };
    debug_assert!(class.is_finite_realizable());
    Ok(class)
}

/// Classes of all vertices of `g`, in vertex order.
pub fn classify_graph(scene: &GeneratorScene, g: &BoundaryGraph, faces: &FaceStructure) -> Result<Vec<SingularityClass>> {
    (0..g.vertices.len())
        .into_par_iter()
        .map(|v| classify_graph_vertex(scene, g, faces, v))
        .collect()
}

/// Classifies the boundary point `x`, which need not be a vertex.
pub fn classify_vertex(scene: &GeneratorScene, g: &BoundaryGraph, x: Point2) -> Result<SingularityClass> {
    let (_, ns) = normals_at(scene, x)?;
    if ns.len() == 1 {
        return Ok(SingularityClass::Smooth);
    }
    match g.vertex_near(x, 10.0 * g.tol.pos) {
        Some(v) => {
            let faces = face_structure(scene, g)?;
            classify_graph_vertex(scene, g, &faces, v)
        }
        None => Err(Error::Invariant(format!("point {x:?} has several contributors but is not a vertex"))),
    }
}

/// The local coordinate frame `x + s xi + f nu` of an extremal pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub x: Point2,
    pub xi: UnitDir,
    pub nu: UnitDir,
}

impl Frame {
    pub fn new(x: Point2, pair: ExtremalPair) -> Option<Self> {
        Some(Frame { x, xi: pair.xi, nu: (x - pair.y).direction()? })
    }

    pub fn point(&self, s: f64, f: f64) -> Point2 {
        self.x + self.xi.vec() * s + self.nu.vec() * f
    }
}

/// Offsets `f` with `frame.point(s, f)` on the element, paired with the
/// element fraction of the hit.
pub fn solve_on_element(support: &ElementSupport, frame: &Frame, s: f64, slack: f64) -> Vec<(f64, f64)> {
    let xi = frame.xi.vec();
    let nu = frame.nu.vec();
    let mut hits = Vec::new();
    match *support {
        ElementSupport::Arc { center, radius, .. } => {
            let w0 = frame.x - center;
            let b = w0.dot(nu) + s * xi.dot(nu);
            let c0 = (w0.norm_sq() - radius * radius) + 2.0 * s * w0.dot(xi) + s * s;
            let disc = b * b - c0;
            if disc < 0.0 {
                return hits;
            }
            let q = -(b + b.signum() * disc.sqrt());
            let mut roots = vec![q];
            if q != 0.0 {
                roots.push(c0 / q);
            }
            for t in roots {
                let p = frame.point(s, t);
                let (frac, d) = support.project(p);
                if d <= slack {
                    hits.push((frac, t));
                }
            }
        }
        ElementSupport::OffsetSegment { p0, p1 } => {
            let n = support.outward_normal_at(0.5).vec();
            let denom = nu.dot(n);
            if denom.abs() < 1e-12 {
                return hits;
            }
            let t = ((p0 - frame.x).dot(n) - s * xi.dot(n)) / denom;
            let p = frame.point(s, t);
            let d = p1 - p0;
            let len = d.norm();
            let u = (p - p0).dot(d) / len;
            if (-slack..=len + slack).contains(&u) {
                let frac = u / len;
                hits.push((frac.clamp(0.0, 1.0), t));
            }
        }
    }
    hits
}

/// Ordered elements walked from a base point, each forward or reversed.
#[derive(Clone, Debug)]
pub struct Chain {
    pub steps: Vec<(usize, bool)>,
    /// Progress along the first step where the base point sits.
    pub start: f64,
}

fn progress(frac: f64, reversed: bool) -> f64 {
    if reversed {
        1.0 - frac
    } else {
        frac
    }
}

/// Extent of the chain that stays a graph over the `xi` axis with
/// contributors near `y`, capped at `eps / 2`.
pub fn chain_reach(g: &BoundaryGraph, chain: &Chain, frame: &Frame, y: Point2) -> f64 {
    let eps = g.epsilon;
    let cap = 0.5 * eps;
    let spacing = eps / 512.0;
    let mut last = 0.0;
    for (k, &(e, rev)) in chain.steps.iter().enumerate() {
        let el = &g.elements[e];
        let p0 = if k == 0 { chain.start } else { 0.0 };
        let m = ((el.support.length() * (1.0 - p0) / spacing).ceil() as usize).max(1);
        for i in 1..=m {
            let pr = p0 + (1.0 - p0) * i as f64 / m as f64;
            let frac = progress(pr, rev);
            let p = el.support.point_at(frac);
            let u = (p - frame.x).dot(frame.xi.vec());
            let yc = el.contributor_point(p, eps);
            if u <= last || yc.dist(y) > cap + g.tol.pos {
                return last.min(cap);
            }
            last = u;
            if last >= cap {
                return cap;
            }
        }
    }
    last.min(cap)
}

/// `f(s)` along a chain for increasing `s`.
pub fn chain_values(g: &BoundaryGraph, chain: &Chain, frame: &Frame, s_values: &[f64]) -> Result<Vec<f64>> {
    let slack = 100.0 * g.tol.pos;
    let mut idx = 0usize;
    let mut at = chain.start;
    let mut out = Vec::with_capacity(s_values.len());
    for &s in s_values {
        loop {
            let Some(&(e, rev)) = chain.steps.get(idx) else {
                return Err(Error::NoGraphRepresentation { point: frame.point(s, 0.0) });
            };
            let closed = g.elements[e].support.is_full_circle();
            let hit = solve_on_element(&g.elements[e].support, frame, s, slack)
                .into_iter()
                .map(|(frac, f)| {
                    let pr = progress(frac, rev);
                    // A closed element's seam counts as its beginning.
                    (if closed && at < 1e-9 && pr > 1.0 - 1e-9 { 0.0 } else { pr }, f)
                })
                .filter(|&(pr, _)| pr >= at - 1e-9)
                .min_by(|a, b| a.0.total_cmp(&b.0));
            match hit {
                Some((pr, f)) => {
                    at = pr;
                    out.push(f);
                    break;
                }
                None => {
                    idx += 1;
                    at = 0.0;
                }
            }
        }
    }
    Ok(out)
}

/// The boundary near `base` written as a graph over the `xi` axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalRepr {
    pub base: Point2,
    pub pair: ExtremalPair,
    pub s_max: f64,
    /// `(s, f)` in scene units.
    pub samples: Vec<(f64, f64)>,
}

impl LocalRepr {
    /// Samples divided by epsilon.
    pub fn normalized(&self, eps: f64) -> Vec<(f64, f64)> {
        self.samples.iter().map(|&(s, f)| (s / eps, f / eps)).collect()
    }

    /// Largest difference quotient between consecutive samples.
    pub fn max_slope(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
            .fold(0.0, f64::max)
    }
}

/// Samples `n` points of the graph representation for `pair` at `x`, on
/// the element leaving `x` along `pair.xi`.
pub fn local_repr(
    scene: &GeneratorScene,
    g: &BoundaryGraph,
    x: Point2,
    pair: ExtremalPair,
    n: usize,
) -> Result<LocalRepr> {
    if n < 2 {
        return Err(Error::Domain("at least two samples are needed".into()));
    }
    let eps = scene.epsilon();
    let tol = scene.tol();
    let frame = Frame::new(x, pair).ok_or(Error::NotOnBoundary { point: x, offset: -eps })?;
    let chain = departing_step(g, x, pair).ok_or(Error::NoGraphRepresentation { point: x })?;
    let s_max = chain_reach(g, &chain, &frame, pair.y);
    if s_max < 4.0 * tol.pos {
        return Err(Error::NoGraphRepresentation { point: x });
    }
    let s: Vec<f64> = (0..n).map(|k| s_max * k as f64 / (n - 1) as f64).collect();
    let f = chain_values(g, &chain, &frame, &s)?;
    Ok(LocalRepr { base: x, pair, s_max, samples: s.into_iter().zip(f).collect() })
}

/// The single element leaving `x` along `pair.xi` with contributor `pair.y`.
fn departing_step(g: &BoundaryGraph, x: Point2, pair: ExtremalPair) -> Option<Chain> {
    let eps = g.epsilon;
    let reach = 10.0 * g.tol.pos;
    if let Some(v) = g.vertex_near(x, reach) {
        for &(e, end) in &g.vertices[v].incident {
            let (dir, _) = g.elements[e].departure(end);
            let yc = g.elements[e].contributor_point(x, eps);
            if dir.dot(pair.xi) > 1.0 - 1e-6 && yc.dist(pair.y) <= reach {
                return Some(Chain { steps: vec![(e, end == End::Stop)], start: 0.0 });
            }
        }
        return None;
    }
    for (e, frac) in g.elements_near(x, 2.0 * g.tol.pos) {
        let el = &g.elements[e];
        let t = el.support.tangent_at(frac);
        let closed = el.support.is_full_circle();
        if el.contributor_point(x, eps).dist(pair.y) > reach {
            continue;
        }
        if t.dot(pair.xi) > 1.0 - 1e-6 {
            let start = if closed && frac > 1.0 - 1e-12 { 0.0 } else { frac };
            return Some(Chain { steps: vec![(e, false)], start });
        }
        if t.dot(pair.xi) < -1.0 + 1e-6 {
            let start = if closed && frac < 1e-12 { 0.0 } else { 1.0 - frac };
            return Some(Chain { steps: vec![(e, true)], start });
        }
    }
    None
}
