//! Circle primitives: poles, pairwise intersections, tangent directions and
//! the congruence transforms (translations, axis reflections, quarter turns).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::Arrangement;

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Quarter turn counter-clockwise.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    /// Exchange the two coordinates.
    pub fn swapped(self) -> Point {
        Point::new(self.y, self.x)
    }

    pub fn normalized(self) -> Point {
        let n = self.norm();
        Point::new(self.x / n, self.y / n)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Which side of a circle the region lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Inside,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub id: String,
    pub center: Point,
    pub radius: f64,
    pub side: Side,
}

impl Circle {
    pub fn new(id: impl Into<String>, center: Point, radius: f64, side: Side) -> Self {
        Circle {
            id: id.into(),
            center,
            radius,
            side,
        }
    }

    /// Signed distance to the circle, positive on the region side.
    pub fn side_distance(&self, q: Point) -> f64 {
        let d = self.radius - q.dist(self.center);
        match self.side {
            Side::Inside => d,
            Side::Outside => -d,
        }
    }

    /// Absolute distance from `q` to the circle curve.
    pub fn curve_distance(&self, q: Point) -> f64 {
        (q.dist(self.center) - self.radius).abs()
    }

    pub fn point_at(&self, angle: f64) -> Point {
        self.center + Point::new(angle.cos(), angle.sin()) * self.radius
    }

    pub fn angle_of(&self, q: Point) -> f64 {
        let d = q - self.center;
        d.y.atan2(d.x)
    }

    /// The four axis-extreme points: left, right, bottom, top.
    pub fn extremes(&self) -> [Point; 4] {
        let (c, r) = (self.center, self.radius);
        [
            Point::new(c.x - r, c.y),
            Point::new(c.x + r, c.y),
            Point::new(c.x, c.y - r),
            Point::new(c.x, c.y + r),
        ]
    }

    pub(crate) fn swapped(&self) -> Circle {
        Circle {
            center: self.center.swapped(),
            ..self.clone()
        }
    }
}

/// The projection an arrangement is swept along.
///
/// `X` takes the first coordinate as the graph value, so fibers are vertical
/// lines; `Y` takes the second coordinate and fibers are horizontal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X, Axis::Y];

    pub fn value(self, p: Point) -> f64 {
        match self {
            Axis::X => p.x,
            Axis::Y => p.y,
        }
    }

    /// Coordinates in which this axis becomes the first coordinate.
    pub fn to_frame(self, p: Point) -> Point {
        match self {
            Axis::X => p,
            Axis::Y => p.swapped(),
        }
    }

    pub fn from_frame(self, p: Point) -> Point {
        self.to_frame(p)
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Axis {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            other => Err(format!("unknown axis '{other}' (expected x or y)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PoleKind {
    /// Tangent line parallel to the fiber: a fold of the projection.
    SweepCritical,
    /// Tangent line transverse to the fiber.
    SweepRegular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub point: Point,
    pub owner: String,
    pub kind: PoleKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleSet {
    /// Ordered by increasing transverse coordinate.
    pub critical: [Pole; 2],
    pub regular: [Pole; 2],
}

/// Absolute coordinate tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tolerance(f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);

    pub fn new(eps: f64) -> Result<Self, GeomError> {
        if eps.is_finite() && eps > 0.0 && eps < 1e-3 {
            Ok(Tolerance(eps))
        } else {
            Err(GeomError::BadTolerance(eps))
        }
    }

    pub fn eps(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    Tangency,
    Coincident,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("circles {0} and {1} meet degenerately ({2:?})")]
    Degenerate(String, String, Degeneracy),
    #[error("point {point} is not on circle {circle} (off by {offset:e})")]
    NotOnCircle {
        circle: String,
        point: Point,
        offset: f64,
    },
    #[error("tolerance {0} outside (0, 1e-3)")]
    BadTolerance(f64),
}

pub fn poles(c: &Circle, a: Axis) -> PoleSet {
    let [left, right, bottom, top] = c.extremes();
    let mk = |point, kind| Pole {
        point,
        owner: c.id.clone(),
        kind,
    };
    let (crit, reg) = match a {
        Axis::X => ([left, right], [bottom, top]),
        Axis::Y => ([bottom, top], [left, right]),
    };
    PoleSet {
        critical: crit.map(|p| mk(p, PoleKind::SweepCritical)),
        regular: reg.map(|p| mk(p, PoleKind::SweepRegular)),
    }
}

/// Transversal intersection points of two circles, sorted by (x, y).
///
/// Returns an empty vector when the circles are apart or nested, and an
/// error when they are tangent or coincide within tolerance.
pub fn intersect_circles(c1: &Circle, c2: &Circle, tol: Tolerance) -> Result<Vec<Point>, GeomError> {
    let eps = tol.eps();
    let d = c1.center.dist(c2.center);
    let (r1, r2) = (c1.radius, c2.radius);
    let degenerate = |k| GeomError::Degenerate(c1.id.clone(), c2.id.clone(), k);
    if d <= eps && (r1 - r2).abs() <= eps {
        return Err(degenerate(Degeneracy::Coincident));
    }
    if (d - (r1 + r2)).abs() <= eps || (d - (r1 - r2).abs()).abs() <= eps {
        return Err(degenerate(Degeneracy::Tangency));
    }
    if d > r1 + r2 || d < (r1 - r2).abs() {
        return Ok(Vec::new());
    }
    let u = (c2.center - c1.center) * (1.0 / d);
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let base = c1.center + u * a;
    let mut pts = vec![base + u.perp() * h, base - u.perp() * h];
    pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    Ok(pts)
}

/// Both unit tangent directions of `c` at `p`; the first is counter-clockwise.
pub fn tangent_direction(c: &Circle, p: Point, tol: Tolerance) -> Result<[Point; 2], GeomError> {
    let offset = c.curve_distance(p);
    if offset > tol.eps() {
        return Err(GeomError::NotOnCircle {
            circle: c.id.clone(),
            point: p,
            offset,
        });
    }
    let t = (p - c.center).normalized().perp();
    Ok([t, -t])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rotation {
    Ccw,
    Cw,
}

/// Congruences that carry arrangements to arrangements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RigidMove {
    Translate { dx: f64, dy: f64 },
    /// Mirror across the vertical line `x = x0`.
    ReflectVertical { x0: f64 },
    /// Mirror across the horizontal line `y = y0`.
    ReflectHorizontal { y0: f64 },
    RotateQuarter { center: Point, direction: Rotation },
}

impl RigidMove {
    pub fn apply_point(&self, p: Point) -> Point {
        match *self {
            RigidMove::Translate { dx, dy } => Point::new(p.x + dx, p.y + dy),
            RigidMove::ReflectVertical { x0 } => Point::new(2.0 * x0 - p.x, p.y),
            RigidMove::ReflectHorizontal { y0 } => Point::new(p.x, 2.0 * y0 - p.y),
            RigidMove::RotateQuarter { center: c, direction } => {
                let d = p - c;
                match direction {
                    Rotation::Ccw => Point::new(c.x - d.y, c.y + d.x),
                    Rotation::Cw => Point::new(c.x + d.y, c.y - d.x),
                }
            }
        }
    }
}

/// Transforms every circle center and the seed; radii and sides are kept.
pub fn apply_move(arr: &Arrangement, m: &RigidMove) -> Arrangement {
    let circles = arr
        .circles
        .iter()
        .map(|c| Circle {
            center: m.apply_point(c.center),
            ..c.clone()
        })
        .collect();
    Arrangement {
        circles,
        seed: m.apply_point(arr.seed),
        tol: arr.tol,
    }
}
