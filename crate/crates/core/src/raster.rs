//! Brute-force oracle: a sampled distance field, flood-fill component
//! counts, marching-squares contours and Hausdorff distances.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryGraph;
use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::scene::GeneratorScene;

/// Distance-to-scene samples at cell centres.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RasterField {
    /// Lower-left corner of cell (0, 0).
    pub origin: Point2,
    pub cell: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `values[j * nx + i]`.
    pub values: Vec<f64>,
}

impl RasterField {
    pub fn center(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.origin.x + (i as f64 + 0.5) * self.cell, self.origin.y + (j as f64 + 0.5) * self.cell)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }
}

pub const MIN_RESOLUTION: usize = 64;

/// Samples the distance field on a `resolution` square grid covering the
/// scene box with a margin of `2 epsilon + 4` cells on every side.
pub fn build_field(scene: &GeneratorScene, resolution: usize) -> RasterField {
    let res = resolution.max(MIN_RESOLUTION);
    let (lo, hi) = scene.bbox();
    let eps = scene.epsilon();
    let span = (hi.x - lo.x).max(hi.y - lo.y) + 4.0 * eps;
    let cell = span / (res - 8) as f64;
    let mid = lo.lerp(hi, 0.5);
    let half = 0.5 * res as f64 * cell;
    let origin = Point2::new(mid.x - half, mid.y - half);
    let mut field = RasterField { origin, cell, nx: res, ny: res, values: vec![0.0; res * res] };
    let f = &field;
    let values: Vec<f64> = (0..res)
        .into_par_iter()
        .flat_map_iter(|j| (0..res).map(move |i| scene.distance(f.center(i, j))))
        .collect();
    field.values = values;
    field
}

/// Labels 4-connected cells with value above `epsilon`. Border cells share
/// label 0. Returns the labels (`usize::MAX` inside) and the label count.
pub fn label_components(f: &RasterField, epsilon: f64) -> (Vec<usize>, usize) {
    let (nx, ny) = (f.nx, f.ny);
    let free: Vec<bool> = f.values.iter().map(|&v| v > epsilon).collect();
    let mut label = vec![usize::MAX; nx * ny];
    let mut stack = Vec::new();
    let fill = |seed: usize, id: usize, label: &mut Vec<usize>, stack: &mut Vec<usize>| {
        label[seed] = id;
        stack.push(seed);
        while let Some(c) = stack.pop() {
            let (i, j) = (c % nx, c / nx);
            let mut visit = |n: usize| {
                if free[n] && label[n] == usize::MAX {
                    label[n] = id;
                    stack.push(n);
                }
            };
            if i > 0 {
                visit(c - 1);
            }
            if i + 1 < nx {
                visit(c + 1);
            }
            if j > 0 {
                visit(c - nx);
            }
            if j + 1 < ny {
                visit(c + nx);
            }
        }
    };
    let mut any_border = false;
    for c in 0..nx * ny {
        let (i, j) = (c % nx, c / nx);
        let border = i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
        if border && free[c] && label[c] == usize::MAX {
            fill(c, 0, &mut label, &mut stack);
            any_border = true;
        }
    }
    let mut next = 1;
    for c in 0..nx * ny {
        if free[c] && label[c] == usize::MAX {
            fill(c, next, &mut label, &mut stack);
            next += 1;
        }
    }
    let count = if any_border { next } else { next - 1 };
    (label, count)
}

/// Number of complement components seen by the grid.
pub fn flood_components(f: &RasterField, epsilon: f64) -> usize {
    label_components(f, epsilon).1
}

/// Number of complement components resolved by the grid.
///
/// A bounded label counts only if some cell centre clears `epsilon` by at
/// least one cell. Shallower labels are aliasing fragments: a thin cusp of
/// the complement whose cells touch only diagonally. Any component that
/// contains a disc of radius one cell has a 4-connected run of centres
/// through it, so genuine components at that scale are never dropped.
pub fn resolved_components(f: &RasterField, epsilon: f64) -> usize {
    let (labels, count) = label_components(f, epsilon);
    let has_border = labels.iter().any(|&l| l == 0);
    let first = usize::from(has_border);
    let mut deep = vec![false; count + 1];
    for (&l, &v) in labels.iter().zip(&f.values) {
        if l != usize::MAX && v > epsilon + f.cell {
            deep[l] = true;
        }
    }
    let bounded = (1..=count - first).filter(|&l| deep[l]).count();
    first + bounded
}

/// A closed polyline; the last point connects back to the first.
pub type Polyline = Vec<Point2>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum EdgeId {
    H(usize, usize),
    V(usize, usize),
}

/// Marching-squares approximation of the level set `distance = epsilon`.
/// Diagonal complement corners are kept apart, as in the flood fill.
pub fn contour(f: &RasterField, epsilon: f64) -> Vec<Polyline> {
    let (nx, ny) = (f.nx, f.ny);
    let out = |i: usize, j: usize| f.value(i, j) > epsilon;
    let cross = |a: (usize, usize), b: (usize, usize)| {
        let va = f.value(a.0, a.1) - epsilon;
        let vb = f.value(b.0, b.1) - epsilon;
        let t = va / (va - vb);
        f.center(a.0, a.1).lerp(f.center(b.0, b.1), t)
    };
    let mut links: HashMap<EdgeId, Vec<EdgeId>> = HashMap::new();
    let mut pos: HashMap<EdgeId, Point2> = HashMap::new();
    let mut link = |a: EdgeId, b: EdgeId| {
        links.entry(a).or_default().push(b);
        links.entry(b).or_default().push(a);
    };
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let c = [out(i, j), out(i + 1, j), out(i + 1, j + 1), out(i, j + 1)];
            let e = [EdgeId::H(i, j), EdgeId::V(i + 1, j), EdgeId::H(i, j + 1), EdgeId::V(i, j)];
            let ends = [((i, j), (i + 1, j)), ((i + 1, j), (i + 1, j + 1)), ((i, j + 1), (i + 1, j + 1)), ((i, j), (i, j + 1))];
            let crossing: Vec<usize> = (0..4).filter(|&k| c[ends_idx(k).0] != c[ends_idx(k).1]).collect();
            for &k in &crossing {
                pos.entry(e[k]).or_insert_with(|| cross(ends[k].0, ends[k].1));
            }
            match crossing.len() {
                2 => link(e[crossing[0]], e[crossing[1]]),
                4 => {
                    if c[0] {
                        link(e[0], e[3]);
                        link(e[1], e[2]);
                    } else {
                        link(e[0], e[1]);
                        link(e[2], e[3]);
                    }
                }
                _ => {}
            }
        }
    }
    let mut keys: Vec<EdgeId> = links.keys().copied().collect();
    keys.sort_unstable();
    let mut seen: HashMap<EdgeId, bool> = HashMap::new();
    let mut lines = Vec::new();
    for k in keys {
        if seen.contains_key(&k) {
            continue;
        }
        let mut line = Vec::new();
        let mut prev: Option<EdgeId> = None;
        let mut cur = k;
        loop {
            seen.insert(cur, true);
            line.push(pos[&cur]);
            let next = links[&cur].iter().copied().find(|&n| Some(n) != prev && !seen.contains_key(&n));
            match next {
                Some(n) => {
                    prev = Some(cur);
                    cur = n;
                }
                None => break,
            }
        }
        lines.push(line);
    }
    lines
}

fn ends_idx(k: usize) -> (usize, usize) {
    match k {
        0 => (0, 1),
        1 => (1, 2),
        2 => (3, 2),
        _ => (0, 3),
    }
}

/// Total length of closed polylines.
pub fn polyline_length(lines: &[Polyline]) -> f64 {
    lines
        .iter()
        .map(|l| (0..l.len()).map(|k| l[k].dist(l[(k + 1) % l.len()])).sum::<f64>())
        .sum()
}

/// Points along every boundary element with spacing at most `spacing`.
pub fn sample_boundary(g: &BoundaryGraph, spacing: f64) -> Vec<Point2> {
    g.elements.iter().flat_map(|e| e.support.sample(spacing)).collect()
}

struct Buckets<'a> {
    pts: &'a [Point2],
    lo: Point2,
    hi: Point2,
    h: f64,
    nx: usize,
    ny: usize,
    cells: Vec<Vec<usize>>,
}

impl<'a> Buckets<'a> {
    fn new(pts: &'a [Point2]) -> Self {
        let mut lo = pts[0];
        let mut hi = pts[0];
        for p in pts {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        let side = (pts.len() as f64).sqrt().ceil().max(1.0);
        let h = span / side;
        let nx = ((hi.x - lo.x) / h).floor() as usize + 1;
        let ny = ((hi.y - lo.y) / h).floor() as usize + 1;
        let mut cells = vec![Vec::new(); nx * ny];
        for (k, p) in pts.iter().enumerate() {
            let i = (((p.x - lo.x) / h).floor() as usize).min(nx - 1);
            let j = (((p.y - lo.y) / h).floor() as usize).min(ny - 1);
            cells[j * nx + i].push(k);
        }
        Buckets { pts, lo, hi, h, nx, ny, cells }
    }

    fn nearest(&self, p: Point2) -> f64 {
        let q = Point2::new(p.x.clamp(self.lo.x, self.hi.x), p.y.clamp(self.lo.y, self.hi.y));
        let ci = (((q.x - self.lo.x) / self.h).floor() as isize).min(self.nx as isize - 1);
        let cj = (((q.y - self.lo.y) / self.h).floor() as isize).min(self.ny as isize - 1);
        let mut best = f64::INFINITY;
        let max_r = self.nx.max(self.ny) as isize;
        for r in 0..=max_r {
            for dj in -r..=r {
                for di in -r..=r {
                    if di.abs() != r && dj.abs() != r {
                        continue;
                    }
                    let (i, j) = (ci + di, cj + dj);
                    if i < 0 || j < 0 || i >= self.nx as isize || j >= self.ny as isize {
                        continue;
                    }
                    for &k in &self.cells[j as usize * self.nx + i as usize] {
                        best = best.min(self.pts[k].dist(p));
                    }
                }
            }
            // Cells beyond ring r are at least r cells from q, and p is
            // no closer than q to any of them.
            if best <= r as f64 * self.h {
                break;
            }
        }
        best
    }
}

/// Largest distance from a point of `a` to its nearest point in `b`.
pub fn directed_hausdorff(a: &[Point2], b: &[Point2]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let buckets = Buckets::new(b);
    Ok(a.par_iter().map(|&p| buckets.nearest(p)).reduce(|| 0.0, f64::max))
}

pub fn hausdorff_distance(a: &[Point2], b: &[Point2]) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}
