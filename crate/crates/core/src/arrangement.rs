//! Arrangements of circles with a seed-selected region, and their validity.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{intersect_circles, poles, Axis, Circle, GeomError, Point, Side, Tolerance};
use crate::sweep::{in_closure, Sweep, SweepError, SweepOptions, MERGE_FACTOR};

/// Circles, a seed point in the region, and the working tolerance.
///
/// The region is the connected component containing `seed` of the set of
/// points lying on every circle's `side`.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrangement {
    pub circles: Vec<Circle>,
    pub seed: Point,
    pub tol: Tolerance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CircleRecord {
    id: String,
    cx: f64,
    cy: f64,
    r: f64,
    region_side: Side,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrangementFile {
    circles: Vec<CircleRecord>,
    seed: [f64; 2],
    #[serde(default)]
    tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArrangementError {
    #[error("cannot parse arrangement: {0}")]
    Parse(String),
    #[error("malformed arrangement: {0}")]
    Malformed(String),
}

impl Arrangement {
    pub fn new(circles: Vec<Circle>, seed: Point) -> Self {
        Arrangement {
            circles,
            seed,
            tol: Tolerance::DEFAULT,
        }
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn circle(&self, id: &str) -> Option<&Circle> {
        self.circles.iter().find(|c| c.id == id)
    }

    /// Smallest `c{n}` id not used yet.
    pub fn fresh_id(&self) -> String {
        (0..)
            .map(|n| format!("c{n}"))
            .find(|id| self.circle(id).is_none())
            .expect("unbounded range")
    }

    pub fn from_json(text: &str) -> Result<Self, ArrangementError> {
        let file: ArrangementFile = serde_json::from_str(text).map_err(|e| ArrangementError::Parse(e.to_string()))?;
        let tol = match file.tolerance {
            Some(t) => Tolerance::new(t).map_err(|e| ArrangementError::Malformed(e.to_string()))?,
            None => Tolerance::DEFAULT,
        };
        let circles = file
            .circles
            .into_iter()
            .map(|c| Circle::new(c.id, Point::new(c.cx, c.cy), c.r, c.region_side))
            .collect();
        let arr = Arrangement {
            circles,
            seed: Point::new(file.seed[0], file.seed[1]),
            tol,
        };
        if let Some(problem) = arr.malformed() {
            return Err(ArrangementError::Malformed(problem));
        }
        Ok(arr)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let file = ArrangementFile {
            circles: self
                .circles
                .iter()
                .map(|c| CircleRecord {
                    id: c.id.clone(),
                    cx: c.center.x,
                    cy: c.center.y,
                    r: c.radius,
                    region_side: c.side,
                })
                .collect(),
            seed: [self.seed.x, self.seed.y],
            tolerance: Some(self.tol.eps()),
        };
        serde_json::to_value(file).expect("arrangement serializes")
    }

    pub fn to_json(&self) -> String {
        crate::json::canonical(&self.to_json_value())
    }

    /// Structural problems that make the other checks meaningless.
    fn malformed(&self) -> Option<String> {
        if !self.seed.is_finite() {
            return Some("seed is not finite".into());
        }
        let mut ids = BTreeSet::new();
        for c in &self.circles {
            if c.id.is_empty() {
                return Some("empty circle id".into());
            }
            if !ids.insert(c.id.as_str()) {
                return Some(format!("duplicate circle id {}", c.id));
            }
            if !c.center.is_finite() || !c.radius.is_finite() {
                return Some(format!("circle {} has non-finite data", c.id));
            }
            if c.radius <= self.tol.eps() {
                return Some(format!("circle {} has radius {} not above tolerance", c.id, c.radius));
            }
        }
        if self.circles.is_empty() {
            return Some("no circles".into());
        }
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "circles", rename_all = "lowercase")]
pub enum Membership {
    Interior,
    /// On the listed circles and on the region side of all others.
    Boundary(Vec<String>),
    Exterior,
}

/// Position of `q` relative to the sign cell (not only the seed component).
pub fn membership(arr: &Arrangement, q: Point) -> Membership {
    let eps = arr.tol.eps();
    let mut on = Vec::new();
    for c in &arr.circles {
        let s = c.side_distance(q);
        if s < -eps {
            return Membership::Exterior;
        }
        if s <= eps {
            on.push(c.id.clone());
        }
    }
    if on.is_empty() {
        Membership::Interior
    } else {
        Membership::Boundary(on)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corner {
    pub point: Point,
    pub circles: [String; 2],
}

/// All transversal intersection points of circle pairs.
pub fn corners(arr: &Arrangement) -> Vec<Corner> {
    let mut out = Vec::new();
    for (i, a) in arr.circles.iter().enumerate() {
        for b in &arr.circles[i + 1..] {
            if let Ok(points) = intersect_circles(a, b, arr.tol) {
                out.extend(points.into_iter().map(|point| Corner {
                    point,
                    circles: [a.id.clone(), b.id.clone()],
                }));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Malformed,
    SeedInterior,
    Bounded,
    Transversal,
    NoTriple,
    NoPoleIntersection,
    TouchesAllCircles,
    NearDegenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub clause: Clause,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, clause: Clause) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateOptions {
    /// Only report tangencies, triple points and pole hits that lie on the
    /// closure of the region's sign cell.
    #[serde(default)]
    pub lenient: bool,
}

pub fn validate(arr: &Arrangement) -> ValidationReport {
    validate_with(arr, ValidateOptions::default())
}

pub fn validate_with(arr: &Arrangement, opts: ValidateOptions) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |clause, detail: String, points: Vec<Point>| {
        violations.push(Violation {
            clause,
            detail,
            points: points.into_iter().map(|p| [p.x, p.y]).collect(),
        })
    };
    if let Some(problem) = arr.malformed() {
        push(Clause::Malformed, problem, Vec::new());
        return ValidationReport {
            valid: false,
            violations,
        };
    }
    let eps = arr.tol.eps();
    let relevant = |p: Point| !opts.lenient || in_closure(&arr.circles, p, eps);

    let seed_interior = membership(arr, arr.seed) == Membership::Interior;
    if !seed_interior {
        push(Clause::SeedInterior, format!("seed {} is not interior", arr.seed), vec![arr.seed]);
    }

    let mut all_corners = Vec::new();
    for (i, a) in arr.circles.iter().enumerate() {
        for b in &arr.circles[i + 1..] {
            match intersect_circles(a, b, arr.tol) {
                Ok(points) => all_corners.extend(points.into_iter().map(|p| (p, [a.id.as_str(), b.id.as_str()]))),
                Err(GeomError::Degenerate(x, y, kind)) => {
                    let contact = contact_point(a, b);
                    if relevant(contact) {
                        push(Clause::Transversal, format!("{x} and {y}: {kind:?}"), vec![contact]);
                    }
                }
                Err(e) => push(Clause::Transversal, e.to_string(), Vec::new()),
            }
        }
    }

    let mut triples: Vec<Point> = Vec::new();
    for (p, pair) in &all_corners {
        let third = arr
            .circles
            .iter()
            .find(|c| !pair.contains(&c.id.as_str()) && c.curve_distance(*p) <= eps);
        if let Some(c) = third {
            if relevant(*p) && !triples.iter().any(|q| q.dist(*p) <= 10.0 * eps) {
                triples.push(*p);
                push(
                    Clause::NoTriple,
                    format!("{}, {} and {} meet at {p}", pair[0], pair[1], c.id),
                    vec![*p],
                );
            }
        }
    }

    for (p, pair) in &all_corners {
        for c in &arr.circles {
            if let Some(e) = c.extremes().into_iter().find(|e| e.dist(*p) <= eps) {
                if relevant(*p) {
                    push(
                        Clause::NoPoleIntersection,
                        format!("corner of {} and {} is a pole of {}", pair[0], pair[1], c.id),
                        vec![e],
                    );
                }
            }
        }
    }

    if seed_interior {
        let mut sweeps = Vec::new();
        for axis in Axis::BOTH {
            match Sweep::build(arr, axis, SweepOptions::default()) {
                Ok(s) => sweeps.push(s),
                Err(SweepError::SeedNotInterior) => {
                    push(Clause::SeedInterior, "seed is not interior".into(), vec![arr.seed]);
                }
                Err(e) => push(Clause::NearDegenerate, format!("axis {axis}: {e}"), Vec::new()),
            }
        }
        if let Some(sx) = sweeps.iter().find(|s| s.axis() == Axis::X) {
            if sx.seed_unbounded() {
                push(Clause::Bounded, "seed component is unbounded".into(), Vec::new());
            }
            let touched = sx.touched_circles();
            for c in &arr.circles {
                if !touched.contains(&c.id) {
                    push(
                        Clause::TouchesAllCircles,
                        format!("circle {} does not bound the seed component", c.id),
                        Vec::new(),
                    );
                }
            }
        }
        for s in &sweeps {
            for a in s.anomalies() {
                push(Clause::NearDegenerate, format!("axis {}: {a}", s.axis()), Vec::new());
            }
            near_ties(s, eps, &mut push);
        }
    }

    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

/// Values that are neither equal nor separated by more than the merge
/// distance cannot be ordered reliably.
fn near_ties(s: &Sweep, eps: f64, push: &mut impl FnMut(Clause, String, Vec<Point>)) {
    let mut feats: Vec<(f64, Point)> = s
        .seed_features()
        .into_iter()
        .map(|(_, f)| (s.axis().value(f.point), f.point))
        .collect();
    feats.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in feats.windows(2) {
        let gap = w[1].0 - w[0].0;
        let exact = gap <= 1e-12 * (1.0 + w[0].0.abs());
        if !exact && gap <= MERGE_FACTOR * eps {
            push(
                Clause::NearDegenerate,
                format!("axis {}: critical values {} and {} nearly coincide", s.axis(), w[0].0, w[1].0),
                vec![w[0].1, w[1].1],
            );
        }
    }
}

/// The touching point of two (nearly) tangent circles.
fn contact_point(a: &Circle, b: &Circle) -> Point {
    let d = b.center - a.center;
    if d.norm() == 0.0 {
        return a.point_at(0.0);
    }
    let u = d.normalized();
    let p = a.center + u * a.radius;
    let q = a.center - u * a.radius;
    if b.curve_distance(p) <= b.curve_distance(q) {
        p
    } else {
        q
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryFeature {
    pub kind: crate::sweep::FeatureKind,
    pub circles: Vec<String>,
    pub point: Point,
    pub on_region_boundary: bool,
}

/// Every pole (for axis `a`) and corner, flagged by whether it lies on the
/// boundary of the seed component.
pub fn boundary_features(arr: &Arrangement, a: Axis) -> Result<Vec<BoundaryFeature>, SweepError> {
    use crate::sweep::FeatureKind;
    let sweep = Sweep::new(arr, a, SweepOptions::default())?;
    let on = |p: Point| matches!(membership(arr, p), Membership::Boundary(_)) && sweep.locate(p).is_some();
    let mut out = Vec::new();
    for c in &arr.circles {
        let ps = poles(c, a);
        for (pole, kind) in ps
            .critical
            .iter()
            .map(|p| (p, FeatureKind::Pole))
            .chain(ps.regular.iter().map(|p| (p, FeatureKind::RegularPole)))
        {
            out.push(BoundaryFeature {
                kind,
                circles: vec![c.id.clone()],
                point: pole.point,
                on_region_boundary: on(pole.point),
            });
        }
    }
    for corner in corners(arr) {
        out.push(BoundaryFeature {
            kind: FeatureKind::Corner,
            circles: corner.circles.to_vec(),
            point: corner.point,
            on_region_boundary: on(corner.point),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn file_round_trip() {
        let text = r#"{"circles":[{"id":"c0","cx":0,"cy":0,"r":1,"region_side":"inside"}],"seed":[0,0]}"#;
        let arr = Arrangement::from_json(text).unwrap();
        assert_eq!(arr, fixtures::disk());
        let back = Arrangement::from_json(&arr.to_json()).unwrap();
        assert_eq!(back, arr);
    }

    #[test]
    fn file_errors() {
        assert!(matches!(Arrangement::from_json("{"), Err(ArrangementError::Parse(_))));
        let dup = r#"{"circles":[{"id":"a","cx":0,"cy":0,"r":1,"region_side":"inside"},
                                  {"id":"a","cx":0,"cy":0,"r":2,"region_side":"inside"}],"seed":[0,0]}"#;
        assert!(matches!(Arrangement::from_json(dup), Err(ArrangementError::Malformed(_))));
        let neg = r#"{"circles":[{"id":"a","cx":0,"cy":0,"r":-1,"region_side":"inside"}],"seed":[0,0]}"#;
        assert!(matches!(Arrangement::from_json(neg), Err(ArrangementError::Malformed(_))));
        let tol = r#"{"circles":[{"id":"a","cx":0,"cy":0,"r":1,"region_side":"inside"}],"seed":[0,0],"tolerance":0.1}"#;
        assert!(matches!(Arrangement::from_json(tol), Err(ArrangementError::Malformed(_))));
    }

    #[test]
    fn membership_cases() {
        let arr = fixtures::annulus();
        assert_eq!(membership(&arr, Point::new(0.75, 0.0)), Membership::Interior);
        assert_eq!(membership(&arr, Point::new(0.0, 0.0)), Membership::Exterior);
        assert_eq!(membership(&arr, Point::new(1.0, 0.0)), Membership::Boundary(vec!["c0".into()]));
    }

    #[test]
    fn valid_fixtures() {
        for arr in [fixtures::disk(), fixtures::annulus(), fixtures::lens(), fixtures::shallow_bite()] {
            let r = validate(&arr);
            assert!(r.valid, "{:?}", r.violations);
        }
    }

    #[test]
    fn triple_point_rejected() {
        let s = 0.75f64.sqrt();
        let arr = Arrangement::new(
            vec![
                Circle::new("c0", Point::new(0.0, 0.0), 1.0, Side::Inside),
                Circle::new("c1", Point::new(1.0, 0.0), 1.0, Side::Inside),
                Circle::new("c2", Point::new(0.5, 0.0), s, Side::Inside),
            ],
            Point::new(0.5, 0.0),
        );
        let r = validate(&arr);
        assert!(!r.valid);
        assert!(r.has(Clause::NoTriple));
    }

    #[test]
    fn corner_on_pole_rejected() {
        let arr = Arrangement::new(
            vec![
                Circle::new("c0", Point::new(0.0, 0.0), 1.0, Side::Inside),
                Circle::new("c1", Point::new(1.0, 1.0), 1.0, Side::Inside),
            ],
            Point::new(0.5, 0.5),
        );
        let r = validate(&arr);
        assert!(r.has(Clause::NoPoleIntersection));
    }

    #[test]
    fn tangency_and_seed_rejected() {
        let arr = Arrangement::new(
            vec![
                Circle::new("c0", Point::new(0.0, 0.0), 1.0, Side::Inside),
                Circle::new("c1", Point::new(0.5, 0.0), 0.5, Side::Outside),
            ],
            Point::new(-0.5, 0.0),
        );
        assert!(validate(&arr).has(Clause::Transversal));

        let mut off = fixtures::annulus();
        off.seed = Point::new(0.0, 0.0);
        let r = validate(&off);
        assert!(r.has(Clause::SeedInterior));
    }

    #[test]
    fn unbounded_and_untouched() {
        let hole = Arrangement::new(
            vec![Circle::new("c0", Point::new(0.0, 0.0), 1.0, Side::Outside)],
            Point::new(2.0, 0.0),
        );
        assert!(validate(&hole).has(Clause::Bounded));

        let mut far = fixtures::disk();
        far.circles.push(Circle::new("c1", Point::new(5.0, 5.0), 1.0, Side::Outside));
        assert!(validate(&far).has(Clause::TouchesAllCircles));
    }

    #[test]
    fn lenient_ignores_far_degeneracy() {
        let mut arr = fixtures::disk();
        // two outside circles tangent to each other far from the disk
        arr.circles.push(Circle::new("c1", Point::new(5.0, 0.0), 1.0, Side::Outside));
        arr.circles.push(Circle::new("c2", Point::new(7.0, 0.0), 1.0, Side::Outside));
        let strict = validate(&arr);
        assert!(strict.has(Clause::Transversal));
        let lenient = validate_with(&arr, ValidateOptions { lenient: true });
        assert!(!lenient.has(Clause::Transversal));
    }

    #[test]
    fn features_flagged() {
        let feats = boundary_features(&fixtures::lens(), Axis::X).unwrap();
        let on: Vec<_> = feats.iter().filter(|f| f.on_region_boundary).collect();
        // two folds, two corners, and the top/bottom regular poles are off the lens
        assert_eq!(on.iter().filter(|f| f.kind == crate::sweep::FeatureKind::Corner).count(), 2);
        assert_eq!(on.iter().filter(|f| f.kind == crate::sweep::FeatureKind::Pole).count(), 2);
        assert_eq!(on.len(), 4);
    }
}
