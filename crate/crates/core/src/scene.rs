//! Generator scenes: finite unions of points and closed segments plus the
//! neighbourhood radius, and the line-oriented text format they are read
//! from.

use serde::{Deserialize, Serialize};

use crate::error::SceneError;
use crate::geometry::{closest_on_segment, segment_segment_distance, Point2, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorShape {
    Point { p: Point2 },
    Segment { a: Point2, b: Point2 },
}

impl GeneratorShape {
    /// Nearest point of the generator to `p`.
    pub fn closest_point(&self, p: Point2) -> Point2 {
        match *self {
            GeneratorShape::Point { p: q } => q,
            GeneratorShape::Segment { a, b } => closest_on_segment(p, a, b).0,
        }
    }

    pub fn distance(&self, p: Point2) -> f64 {
        self.closest_point(p).dist(p)
    }

    /// Distance between two generators (zero when they touch).
    pub fn distance_to(&self, other: &GeneratorShape) -> f64 {
        use GeneratorShape::*;
        match (*self, *other) {
            (Point { p }, _) => other.distance(p),
            (_, Point { p }) => self.distance(p),
            (Segment { a, b }, Segment { a: c, b: d }) => segment_segment_distance(a, b, c, d),
        }
    }

    fn same_as(&self, other: &GeneratorShape, tol: f64) -> bool {
        use GeneratorShape::*;
        match (*self, *other) {
            (Point { p }, Point { p: q }) => p.dist(q) <= tol,
            (Segment { a, b }, Segment { a: c, b: d }) => {
                (a.dist(c) <= tol && b.dist(d) <= tol) || (a.dist(d) <= tol && b.dist(c) <= tol)
            }
            _ => false,
        }
    }

    fn extend_bbox(&self, lo: &mut Point2, hi: &mut Point2) {
        let mut take = |q: Point2| {
            lo.x = lo.x.min(q.x);
            lo.y = lo.y.min(q.y);
            hi.x = hi.x.max(q.x);
            hi.y = hi.y.max(q.y);
        };
        match *self {
            GeneratorShape::Point { p } => take(p),
            GeneratorShape::Segment { a, b } => {
                take(a);
                take(b);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub id: usize,
    pub shape: GeneratorShape,
}

/// The compact set `E` together with the radius `epsilon`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorScene {
    generators: Vec<Generator>,
    epsilon: f64,
    tol: Tolerance,
}

impl GeneratorScene {
    /// Validates and builds a scene. Ids are assigned in input order.
    ///
    /// With `tol = None` the coincidence distance defaults to `1e-9` times
    /// the larger of the generator bounding-box diagonal and `epsilon`.
    pub fn new(
        shapes: Vec<GeneratorShape>,
        epsilon: f64,
        tol: Option<Tolerance>,
    ) -> Result<Self, SceneError> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(SceneError::Validation(format!(
                "epsilon must be a positive finite number, got {epsilon}"
            )));
        }
        if shapes.is_empty() {
            return Err(SceneError::Validation("scene has no generators".into()));
        }
        for s in &shapes {
            let finite = match *s {
                GeneratorShape::Point { p } => p.is_finite(),
                GeneratorShape::Segment { a, b } => a.is_finite() && b.is_finite(),
            };
            if !finite {
                return Err(SceneError::Validation("non-finite coordinate".into()));
            }
        }
        let (lo, hi) = bbox_of(&shapes);
        let diameter = (hi - lo).norm().max(epsilon);
        let tol = tol.unwrap_or_else(|| Tolerance::for_diameter(diameter));
        tol.validate()
            .map_err(|e| SceneError::Validation(e.to_string()))?;

        for (i, s) in shapes.iter().enumerate() {
            if let GeneratorShape::Segment { a, b } = *s {
                if a.dist(b) <= tol.pos {
                    return Err(SceneError::Validation(format!(
                        "generator {i}: zero-length segment"
                    )));
                }
            }
        }
        for i in 0..shapes.len() {
            for j in 0..i {
                if shapes[i].same_as(&shapes[j], tol.pos) {
                    return Err(SceneError::Validation(format!(
                        "generator {i} duplicates generator {j}"
                    )));
                }
                // Touching generators (distance 0) are fine; near misses
                // below the coincidence distance are not resolvable.
                let d = shapes[i].distance_to(&shapes[j]);
                if d > 0.0 && d <= 10.0 * tol.pos {
                    return Err(SceneError::Validation(format!(
                        "generators {j} and {i} are {d:e} apart, below the coincidence tolerance"
                    )));
                }
            }
        }
        let generators = shapes
            .into_iter()
            .enumerate()
            .map(|(id, shape)| Generator { id, shape })
            .collect();
        Ok(GeneratorScene { generators, epsilon, tol })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    /// Same generators and tolerance with a different radius.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self, SceneError> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(SceneError::Validation(format!(
                "epsilon must be a positive finite number, got {epsilon}"
            )));
        }
        Ok(GeneratorScene { epsilon, ..self.clone() })
    }

    /// Bounding box of the generators (not inflated).
    pub fn bbox(&self) -> (Point2, Point2) {
        let shapes: Vec<_> = self.generators.iter().map(|g| g.shape).collect();
        bbox_of(&shapes)
    }

    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bbox();
        (hi - lo).norm()
    }

    pub fn distance(&self, p: Point2) -> f64 {
        distance_to_scene(self, p)
    }

    /// Renders the scene back into the text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("epsilon {}\n", self.epsilon);
        for g in &self.generators {
            match g.shape {
                GeneratorShape::Point { p } => out.push_str(&format!("point {} {}\n", p.x, p.y)),
                GeneratorShape::Segment { a, b } => {
                    out.push_str(&format!("segment {} {} {} {}\n", a.x, a.y, b.x, b.y))
                }
            }
        }
        out
    }
}

fn bbox_of(shapes: &[GeneratorShape]) -> (Point2, Point2) {
    let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for s in shapes {
        s.extend_bbox(&mut lo, &mut hi);
    }
    (lo, hi)
}

/// Euclidean distance from `p` to the generator set.
pub fn distance_to_scene(s: &GeneratorScene, p: Point2) -> f64 {
    s.generators
        .iter()
        .map(|g| g.shape.distance(p))
        .fold(f64::INFINITY, f64::min)
}

/// Parses the scene text format:
///
/// ```text
/// epsilon <float>
/// point <x> <y>
/// segment <x1> <y1> <x2> <y2>
/// ```
///
/// One directive per line, `#` starts a comment.
pub fn parse_scene(text: &str) -> Result<GeneratorScene, SceneError> {
    parse_scene_with_tolerance(text, None)
}

pub fn parse_scene_with_tolerance(
    text: &str,
    tol: Option<Tolerance>,
) -> Result<GeneratorScene, SceneError> {
    let mut epsilon: Option<f64> = None;
    let mut shapes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        let head = toks.next().unwrap_or_default();
        let args: Vec<&str> = toks.collect();
        let nums = |want: usize| -> Result<Vec<f64>, SceneError> {
            if args.len() != want {
                return Err(SceneError::Syntax {
                    line,
                    message: format!("`{head}` takes {want} numbers, got {}", args.len()),
                });
            }
            args.iter()
                .map(|t| {
                    t.parse::<f64>().map_err(|_| SceneError::Syntax {
                        line,
                        message: format!("not a number: `{t}`"),
                    })
                })
                .collect()
        };
        match head {
            "epsilon" => {
                let v = nums(1)?;
                if epsilon.is_some() {
                    return Err(SceneError::Syntax {
                        line,
                        message: "epsilon given more than once".into(),
                    });
                }
                epsilon = Some(v[0]);
            }
            "point" => {
                let v = nums(2)?;
                shapes.push(GeneratorShape::Point { p: Point2::new(v[0], v[1]) });
            }
            "segment" => {
                let v = nums(4)?;
                shapes.push(GeneratorShape::Segment {
                    a: Point2::new(v[0], v[1]),
                    b: Point2::new(v[2], v[3]),
                });
            }
            other => {
                return Err(SceneError::Syntax {
                    line,
                    message: format!("unknown directive `{other}`"),
                })
            }
        }
    }
    let epsilon =
        epsilon.ok_or_else(|| SceneError::Validation("missing `epsilon` directive".into()))?;
    GeneratorScene::new(shapes, epsilon, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scene() {
        let s = parse_scene("epsilon 1\npoint 0 0").unwrap();
        assert_eq!(s.generators().len(), 1);
        assert_eq!(s.epsilon(), 1.0);
        assert_eq!(s.generators()[0].id, 0);
    }

    #[test]
    fn duplicate_point_rejected() {
        let err = parse_scene("epsilon 1\npoint 0 0\npoint 0 0").unwrap_err();
        assert!(matches!(err, SceneError::Validation(ref m) if m.contains("duplicates")));
    }

    #[test]
    fn missing_epsilon_rejected() {
        let err = parse_scene("point 0 0").unwrap_err();
        assert!(matches!(err, SceneError::Validation(ref m) if m.contains("epsilon")));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_scene("epsilon 1\n# c\npoint 0 zero").unwrap_err();
        assert_eq!(
            err,
            SceneError::Syntax { line: 3, message: "not a number: `zero`".into() }
        );
        let err = parse_scene("epsilon 1\ncircle 0 0 1").unwrap_err();
        assert!(matches!(err, SceneError::Syntax { line: 2, .. }));
        let err = parse_scene("epsilon 1\nepsilon 2\npoint 0 0").unwrap_err();
        assert!(matches!(err, SceneError::Syntax { line: 2, .. }));
    }

    #[test]
    fn validation_rules() {
        assert!(parse_scene("epsilon 0\npoint 0 0").is_err());
        assert!(parse_scene("epsilon -1\npoint 0 0").is_err());
        assert!(parse_scene("epsilon 1").is_err());
        assert!(parse_scene("epsilon 1\nsegment 1 1 1 1").is_err());
        assert!(parse_scene("epsilon 1\nsegment 0 0 1 0\nsegment 1 0 0 0").is_err());
        // Shared endpoints and a point on a segment are legitimate.
        assert!(parse_scene("epsilon 1\nsegment 0 0 1 0\nsegment 1 0 1 1\npoint 0.5 0").is_ok());
    }

    #[test]
    fn comments_and_order() {
        let s = parse_scene("# scene\npoint 1 2 # site\nepsilon 0.5\nsegment 0 0 1 0\n").unwrap();
        assert_eq!(s.generators().len(), 2);
        assert_eq!(s.generators()[1].id, 1);
    }

    #[test]
    fn distance_examples() {
        let s = parse_scene("epsilon 1\npoint 0 0").unwrap();
        assert_eq!(distance_to_scene(&s, Point2::new(3.0, 4.0)), 5.0);
        let s = parse_scene("epsilon 1\nsegment 0 0 2 0").unwrap();
        assert_eq!(distance_to_scene(&s, Point2::new(1.0, 1.0)), 1.0);
        assert_eq!(distance_to_scene(&s, Point2::new(3.0, 0.0)), 1.0);
    }

    #[test]
    fn text_round_trip() {
        let s = parse_scene("epsilon 0.75\npoint 1 2\nsegment 0 0 3 1\n").unwrap();
        assert_eq!(parse_scene(&s.to_text()).unwrap(), s);
    }
}
