//! SVG 1.1 figure: one path per Jordan curve with exact arc commands, and
//! vertex markers coloured by singularity class.

use std::fmt::Write;

use crate::analysis::Analysis;
use crate::boundary::ElementSupport;
use crate::geometry::Point2;
use crate::scene::GeneratorShape;
use crate::singularity::SingularityClass;
use crate::topology::Direction;

const CURVE_COLOURS: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];

pub fn class_colour(c: &SingularityClass) -> &'static str {
    match c {
        SingularityClass::Smooth => "#999999",
        SingularityClass::Wedge { .. } => "#1f77b4",
        SingularityClass::Sharp => "#d62728",
        SingularityClass::SharpSharp { .. } => "#9467bd",
        SingularityClass::SharpChain | SingularityClass::Unrealizable { .. } => "#000000",
    }
}

fn num(x: f64) -> String {
    let r = crate::report::round9(x);
    format!("{r}")
}

fn pt(p: Point2) -> String {
    format!("{} {}", num(p.x), num(p.y))
}

/// Path data for one element walked forward or reversed, starting with the
/// pen already at its first point.
fn element_path(support: &ElementSupport, dir: Direction, out: &mut String) {
    let reversed = dir == Direction::Reverse;
    match *support {
        ElementSupport::OffsetSegment { .. } => {
            let end = if reversed { support.start_point() } else { support.end_point() };
            let _ = write!(out, " L {}", pt(end));
        }
        ElementSupport::Arc { radius, ccw, sweep, .. } => {
            // Positive-angle sweep in scene coordinates is counter-clockwise.
            let sweep_flag = u8::from(ccw != reversed);
            let r = num(radius);
            let fracs: &[f64] = if support.is_full_circle() { &[0.5, 1.0] } else { &[1.0] };
            let piece = sweep / fracs.len() as f64;
            let large = u8::from(piece > std::f64::consts::PI);
            for &t in fracs {
                let end = support.point_at(if reversed { 1.0 - t } else { t });
                let _ = write!(out, " A {r} {r} 0 {large} {sweep_flag} {}", pt(end));
            }
        }
    }
}

pub fn render_svg(a: &Analysis) -> String {
    let eps = a.scene.epsilon();
    let (lo, hi) = a.scene.bbox();
    let margin = 1.5 * eps;
    let (x0, y0) = (lo.x - margin, lo.y - margin);
    let (w, h) = (hi.x - lo.x + 2.0 * margin, hi.y - lo.y + 2.0 * margin);
    let stroke = 0.004 * w.max(h);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="800" height="{}" viewBox="{} {} {} {}">"#,
        num(800.0 * h / w),
        num(x0),
        num(-(y0 + h)),
        num(w),
        num(h)
    );
    let _ = writeln!(s, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(s, r##"<g id="generators" stroke="#444444" fill="#444444" stroke-width="{}">"##, num(stroke));
    for g in a.scene.generators() {
        match g.shape {
            GeneratorShape::Point { p } => {
                let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="{}"/>"#, num(p.x), num(p.y), num(1.5 * stroke));
            }
            GeneratorShape::Segment { a: p, b: q } => {
                let _ = writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(p.x), num(p.y), num(q.x), num(q.y));
            }
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="curves" fill="none" stroke-width="{}">"#, num(stroke));
    for c in &a.decomposition.curves {
        let Some(&(e0, d0)) = c.cycle.first() else { continue };
        let sup0 = &a.graph.elements[e0].support;
        let start = if d0 == Direction::Reverse { sup0.end_point() } else { sup0.start_point() };
        let mut d = format!("M {}", pt(start));
        for &(e, dir) in &c.cycle {
            element_path(&a.graph.elements[e].support, dir, &mut d);
        }
        d.push_str(" Z");
        let _ = writeln!(
            s,
            r#"<path id="curve-{}" data-component="{}" stroke="{}" d="{d}"/>"#,
            c.id,
            c.component,
            CURVE_COLOURS[c.id % CURVE_COLOURS.len()]
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="vertices">"#);
    for (v, class) in a.graph.vertices.iter().zip(&a.decomposition.classes) {
        let _ = writeln!(
            s,
            r#"<circle class="{}" cx="{}" cy="{}" r="{}" fill="{}"/>"#,
            class.label(),
            num(v.pos.x),
            num(v.pos.y),
            num(3.0 * stroke),
            class_colour(class)
        );
    }
    let _ = writeln!(s, "</g>\n</g>\n</svg>");
    s
}
