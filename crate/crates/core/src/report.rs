//! Machine-readable report. Field order is fixed by declaration order and
//! every float is rounded to 9 significant digits, so equal inputs give
//! byte-identical JSON.

use serde::{Deserialize, Serialize};

use crate::analysis::{Analysis, CheckOutcome, ElementCurvature, OracleResult};
use crate::boundary::ElementSupport;
use crate::scene::GeneratorShape;
use crate::singularity::QSplit;
use crate::topology::Direction;

/// Rounds to 9 significant digits; maps `-0.0` to `0.0`.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneSummary {
    pub epsilon: f64,
    pub tolerance: f64,
    pub points: usize,
    pub segments: usize,
    pub elements: usize,
    pub vertices: usize,
    pub components: usize,
    pub curves: usize,
    pub wedges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementRow {
    pub id: usize,
    pub kind: String,
    pub generators: Vec<usize>,
    pub length: f64,
    pub start: Option<usize>,
    pub stop: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRow {
    pub x: f64,
    pub y: f64,
    pub class: String,
    pub theta: Option<f64>,
    pub q_split: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub id: usize,
    pub component: usize,
    /// Element ids in traversal order.
    pub elements: Vec<usize>,
    /// Parallel to `elements`: true where the element is walked backwards.
    pub reversed: Vec<bool>,
    pub signed_area: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentRow {
    pub id: usize,
    pub bounded: bool,
    pub curves: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRow {
    pub element: usize,
    pub curve: usize,
    pub kappa: f64,
    pub abs_kappa: f64,
    pub max_fd_error: Option<f64>,
    pub tol_fd: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSection {
    pub per_element: Vec<CurvatureRow>,
    pub fd_ok: bool,
    pub bv_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bv_witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSection {
    pub grid: usize,
    pub cell: f64,
    pub components: usize,
    pub raw_components: usize,
    pub hausdorff: f64,
    pub hausdorff_bound: f64,
    pub components_ok: bool,
    pub hausdorff_ok: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scene: Option<SceneSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<ElementRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<VertexRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curves: Option<Vec<CurveRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<ComponentRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<CurvatureSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckOutcome>>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn scene_summary(a: &Analysis) -> SceneSummary {
    let points = a.scene.generators().iter().filter(|g| matches!(g.shape, GeneratorShape::Point { .. })).count();
    SceneSummary {
        epsilon: round9(a.scene.epsilon()),
        tolerance: round9(a.scene.tol().pos),
        points,
        segments: a.scene.generators().len() - points,
        elements: a.graph.elements.len(),
        vertices: a.graph.vertices.len(),
        components: a.decomposition.components.len(),
        curves: a.decomposition.curves.len(),
        wedges: a.wedge_count(),
    }
}

pub fn element_rows(a: &Analysis) -> Vec<ElementRow> {
    a.graph
        .elements
        .iter()
        .map(|e| {
            let mut generators: Vec<usize> = e.contributors.iter().map(|c| c.generator).collect();
            generators.sort_unstable();
            generators.dedup();
            ElementRow {
                id: e.id,
                kind: match e.support {
                    ElementSupport::Arc { .. } => "arc".into(),
                    ElementSupport::OffsetSegment { .. } => "offset_segment".into(),
                },
                generators,
                length: round9(e.support.length()),
                start: e.start,
                stop: e.stop,
            }
        })
        .collect()
}

pub fn vertex_rows(a: &Analysis) -> Vec<VertexRow> {
    a.graph
        .vertices
        .iter()
        .zip(&a.decomposition.classes)
        .map(|(v, c)| VertexRow {
            x: round9(v.pos.x),
            y: round9(v.pos.y),
            class: c.label().into(),
            theta: c.theta().map(round9),
            q_split: c.q_split().map(|q| match q {
                QSplit::Q1 => "Q1".into(),
                QSplit::Q2 => "Q2".into(),
            }),
        })
        .collect()
}

pub fn curve_rows(a: &Analysis) -> Vec<CurveRow> {
    a.decomposition
        .curves
        .iter()
        .map(|c| CurveRow {
            id: c.id,
            component: c.component,
            elements: c.cycle.iter().map(|&(e, _)| e).collect(),
            reversed: c.cycle.iter().map(|&(_, d)| d == Direction::Reverse).collect(),
            signed_area: round9(c.signed_area),
        })
        .collect()
}

pub fn component_rows(a: &Analysis) -> Vec<ComponentRow> {
    a.decomposition
        .components
        .iter()
        .map(|c| ComponentRow { id: c.id, bounded: c.bounded, curves: c.boundary_curve_ids.clone() })
        .collect()
}

pub fn curvature_section(rows: &[ElementCurvature], bv_witness: Option<String>) -> CurvatureSection {
    CurvatureSection {
        per_element: rows
            .iter()
            .map(|k| CurvatureRow {
                element: k.element,
                curve: k.curve,
                kappa: round9(k.kappa),
                abs_kappa: round9(k.abs_kappa),
                max_fd_error: k.max_fd_error.map(round9),
                tol_fd: round9(k.tol_fd),
            })
            .collect(),
        fd_ok: rows.iter().all(|k| k.ok()),
        bv_ok: bv_witness.is_none(),
        bv_witness,
    }
}

pub fn oracle_section(o: &OracleResult) -> OracleSection {
    OracleSection {
        grid: o.grid,
        cell: round9(o.cell),
        components: o.components,
        raw_components: o.raw_components,
        hausdorff: round9(o.hausdorff),
        hausdorff_bound: round9(o.hausdorff_bound),
        components_ok: o.components_ok(),
        hausdorff_ok: o.hausdorff_ok(),
    }
}
