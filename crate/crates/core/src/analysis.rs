//! The whole pipeline for one scene, plus the invariant suites behind the
//! `check` command.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{build_boundary, build_boundary_with, contributors_at, BoundaryGraph, BuildOptions};
use crate::curvature::{bv_check, curvature_on_curve, CurvatureSample};
use crate::error::{Error, Result};
use crate::geometry::UnitDir;
use crate::raster;
use crate::scene::GeneratorScene;
use crate::singularity::{classify_vertex, extremal_pairs, local_repr, outward_set, SingularityClass};
use crate::topology::{check_structure, decompose_with, face_structure, Decomposition, FaceStructure};

/// Built boundary, faces and decomposition of one scene.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub scene: GeneratorScene,
    pub graph: BoundaryGraph,
    pub faces: FaceStructure,
    pub decomposition: Decomposition,
}

pub fn analyze(scene: &GeneratorScene) -> Result<Analysis> {
    let graph = build_boundary(scene)?;
    let faces = face_structure(scene, &graph)?;
    let classes = crate::singularity::classify_graph(scene, &graph, &faces)?;
    let decomposition = decompose_with(&graph, &faces, classes)?;
    Ok(Analysis { scene: scene.clone(), graph, faces, decomposition })
}

impl Analysis {
    /// Number of S1 vertices.
    pub fn wedge_count(&self) -> usize {
        self.decomposition.classes.iter().filter(|c| matches!(c, SingularityClass::Wedge { .. })).count()
    }
}

/// Raster cross-check of one analysis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub grid: usize,
    pub cell: f64,
    pub symbolic_components: usize,
    /// Components resolved at grid scale.
    pub components: usize,
    /// Raw 4-connected count, aliasing fragments included.
    pub raw_components: usize,
    pub hausdorff: f64,
    pub hausdorff_bound: f64,
}

impl OracleResult {
    pub fn components_ok(&self) -> bool {
        self.components == self.symbolic_components
    }

    pub fn hausdorff_ok(&self) -> bool {
        self.hausdorff <= self.hausdorff_bound
    }
}

pub fn oracle(a: &Analysis, grid: usize) -> Result<OracleResult> {
    let eps = a.scene.epsilon();
    let field = raster::build_field(&a.scene, grid);
    let lines = raster::contour(&field, eps);
    let contour_pts: Vec<_> = lines.concat();
    let boundary_pts = raster::sample_boundary(&a.graph, 0.5 * field.cell);
    Ok(OracleResult {
        grid: field.nx,
        cell: field.cell,
        symbolic_components: a.decomposition.components.len(),
        components: raster::resolved_components(&field, eps),
        raw_components: raster::flood_components(&field, eps),
        hausdorff: raster::hausdorff_distance(&boundary_pts, &contour_pts)?,
        hausdorff_bound: 2.0 * 2f64.sqrt() * field.cell,
    })
}

/// Largest normalized slope over local graph representations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzResult {
    pub windows: usize,
    pub max_slope: f64,
}

/// Samples local representations at every vertex and at interior points of
/// every element (both tangent directions), `n` samples each.
pub fn lipschitz_windows(a: &Analysis, interior_per_element: usize, n: usize) -> Result<LipschitzResult> {
    let g = &a.graph;
    let mut bases: Vec<_> = g.vertices.iter().map(|v| v.pos).collect();
    for el in &g.elements {
        for k in 0..interior_per_element {
            bases.push(el.support.point_at((k as f64 + 0.5) / interior_per_element as f64));
        }
    }
    let per_base: Vec<Result<(usize, f64)>> = bases
        .par_iter()
        .map(|&x| {
            let mut count = 0;
            let mut worst = 0.0f64;
            for pair in extremal_pairs(&a.scene, x)? {
                match local_repr(&a.scene, g, x, pair, n) {
                    Ok(r) => {
                        count += 1;
                        worst = worst.max(r.max_slope());
                    }
                    // Pairs along which the boundary leaves at once (the
                    // inner side of a sharp point) carry no window.
                    Err(Error::NoGraphRepresentation { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok((count, worst))
        })
        .collect();
    let mut out = LipschitzResult { windows: 0, max_slope: 0.0 };
    for r in per_base {
        let (c, w) = r?;
        out.windows += c;
        out.max_slope = out.max_slope.max(w);
    }
    Ok(out)
}

/// Per-element curvature with the worst finite-difference disagreement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementCurvature {
    pub element: usize,
    pub curve: usize,
    pub kappa: f64,
    pub abs_kappa: f64,
    pub max_fd_error: Option<f64>,
    pub tol_fd: f64,
}

impl ElementCurvature {
    pub fn ok(&self) -> bool {
        self.max_fd_error.is_none_or(|e| e <= self.tol_fd)
    }
}

pub fn element_curvatures(a: &Analysis, n: usize) -> Result<Vec<ElementCurvature>> {
    let mut samples: Vec<CurvatureSample> = Vec::new();
    for c in 0..a.decomposition.curves.len() {
        samples.extend(curvature_on_curve(&a.graph, &a.decomposition, c, n)?);
    }
    let mut out: Vec<ElementCurvature> = Vec::new();
    for s in samples.iter().filter(|s| s.defined) {
        if out.last().is_none_or(|o| o.element != s.element) {
            out.push(ElementCurvature {
                element: s.element,
                curve: s.curve,
                kappa: s.kappa,
                abs_kappa: s.kappa.abs(),
                max_fd_error: None,
                tol_fd: s.tol_fd(),
            });
        }
        let o = out.last_mut().expect("pushed above");
        if let Some(err) = s.fd_error() {
            o.max_fd_error = Some(o.max_fd_error.map_or(err, |m| m.max(err)));
        }
        o.tol_fd = o.tol_fd.min(s.tol_fd());
    }
    out.sort_by_key(|o| o.element);
    Ok(out)
}

/// One named suite of the `check` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

fn outcome(name: &str, ok: bool, detail: impl Into<String>) -> CheckOutcome {
    CheckOutcome { name: name.into(), ok, detail: detail.into() }
}

/// Every invariant suite on one analysis. Errors inside a suite become a
/// failed outcome carrying the error text.
pub fn run_checks(a: &Analysis, grid: usize) -> Vec<CheckOutcome> {
    let suites: [(&str, fn(&Analysis, usize) -> Result<(bool, String)>); 11] = [
        ("soundness", check_soundness),
        ("contributors", check_contributors),
        ("structure", check_topology),
        ("classification", check_classes),
        ("tangents", check_tangents),
        ("lipschitz", check_lipschitz),
        ("curvature", check_curvature),
        ("bounded_variation", check_bv),
        ("oracle_components", check_oracle_components),
        ("oracle_hausdorff", check_oracle_hausdorff),
        ("pruning", check_pruning),
    ];
    suites
        .iter()
        .map(|(name, f)| match f(a, grid) {
            Ok((ok, detail)) => outcome(name, ok, detail),
            Err(e) => outcome(name, false, e.to_string()),
        })
        .collect()
}

fn check_soundness(a: &Analysis, _: usize) -> Result<(bool, String)> {
    let eps = a.scene.epsilon();
    let slack = 100.0 * a.scene.tol().pos + 1e-9 * eps;
    let mut worst = 0.0f64;
    let mut probes_ok = true;
    for el in &a.graph.elements {
        for k in 0..16 {
            let t = (k as f64 + 0.5) / 16.0;
            let p = el.support.point_at(t);
            worst = worst.max((a.scene.distance(p) - eps).abs());
            let out = p + el.support.outward_normal_at(t).vec() * (1e-6 * eps);
            probes_ok &= a.scene.distance(out) > eps;
        }
    }
    Ok((worst <= slack && probes_ok, format!("max |d - eps| {worst:.3e}, outward probes {}", if probes_ok { "free" } else { "covered" })))
}

fn check_contributors(a: &Analysis, _: usize) -> Result<(bool, String)> {
    let reach = 10.0 * a.scene.tol().pos;
    let mut bad = 0;
    for v in &a.graph.vertices {
        let found = contributors_at(&a.scene, v.pos)?;
        let same = found.len() == v.contributors.len()
            && found.iter().all(|p| v.contributors.iter().any(|q| q.dist(*p) <= reach));
        if !same {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{bad} of {} vertices disagree", a.graph.vertices.len())))
}

fn check_topology(a: &Analysis, _: usize) -> Result<(bool, String)> {
    let r = check_structure(&a.graph, &a.faces, &a.decomposition);
    let detail = if r.problems.is_empty() { "partition, simplicity, pairwise, orientation, count".into() } else { r.problems.join("; ") };
    Ok((r.all_ok(), detail))
}

fn check_classes(a: &Analysis, _: usize) -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for (v, class) in a.graph.vertices.iter().zip(&a.decomposition.classes) {
        if !class.is_finite_realizable() {
            bad.push(format!("vertex {} is {}", v.id, class.label()));
            continue;
        }
        let again = classify_vertex(&a.scene, &a.graph, v.pos)?;
        let theta_ok = match (class.theta(), again.theta()) {
            (Some(x), Some(y)) => (x - y).abs() <= 1e-9,
            (x, y) => x == y,
        };
        if again.label() != class.label() || again.q_split() != class.q_split() || !theta_ok {
            bad.push(format!("vertex {} {} vs {}", v.id, class.label(), again.label()));
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { format!("{} vertices", a.graph.vertices.len()) } else { bad.join("; ") }))
}

fn check_tangents(a: &Analysis, _: usize) -> Result<(bool, String)> {
    let close = |u: UnitDir, w: UnitDir| u.angle_to(w) <= 1e-7;
    let mut bad = 0;
    for v in &a.graph.vertices {
        let dirs: Vec<UnitDir> = v.incident.iter().map(|&(e, end)| a.graph.elements[e].departure(end).0).collect();
        let ext = outward_set(&a.scene, v.pos)?.extremal_dirs();
        let covered = dirs.iter().all(|&d| ext.iter().any(|&x| close(d, x)));
        let onto = ext.iter().all(|&x| dirs.iter().any(|&d| close(d, x)));
        if !(covered && onto) {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{bad} vertices with tangents off the extremal directions")))
}

/// Normalized slope bound of local graph representations.
pub const LIPSCHITZ_SLACK: f64 = 1e-6;

fn check_lipschitz(a: &Analysis, _: usize) -> Result<(bool, String)> {
    let r = lipschitz_windows(a, 4, 33)?;
    let bound = 1.0 / 3f64.sqrt() + LIPSCHITZ_SLACK;
    Ok((r.max_slope <= bound, format!("{} windows, max slope {:.9}", r.windows, r.max_slope)))
}

fn check_curvature(a: &Analysis, _: usize) -> Result<(bool, String)> {
    let ks = element_curvatures(a, 8)?;
    let bad = ks.iter().filter(|k| !k.ok()).count();
    Ok((bad == 0, format!("{bad} of {} elements disagree with finite differences", ks.len())))
}

fn check_bv(a: &Analysis, _: usize) -> Result<(bool, String)> {
    let mut windows = 0;
    let mut tv_ok = true;
    for c in &a.decomposition.curves {
        let r = bv_check(&a.scene, &a.graph, c, 17)?;
        windows += r.windows;
        tv_ok &= r.tv_ok;
    }
    Ok((tv_ok, format!("{windows} windows")))
}

fn check_oracle_components(a: &Analysis, grid: usize) -> Result<(bool, String)> {
    let o = oracle(a, grid)?;
    Ok((o.components_ok(), format!("symbolic {} vs raster {}", o.symbolic_components, o.components)))
}

fn check_oracle_hausdorff(a: &Analysis, grid: usize) -> Result<(bool, String)> {
    let o = oracle(a, grid)?;
    Ok((o.hausdorff_ok(), format!("{:.3} cells", o.hausdorff / o.cell)))
}

fn check_pruning(a: &Analysis, _: usize) -> Result<(bool, String)> {
    let unpruned = build_boundary_with(&a.scene, BuildOptions { prune: false, parallel: false })?;
    let same = unpruned == a.graph;
    Ok((same, if same { "identical graphs".into() } else { "graphs differ".into() }))
}
