//! Adding a small circle centered on the region boundary: placement,
//! classification into the case catalog, predicted graph rewrites and
//! verification against recomputation.
//!
//! Everything below works in the frame of the sweep axis (see
//! [`crate::sweep`]), so "left", "right", "below" and "above" refer to that
//! frame: the value coordinate is x and the fiber coordinate is y.

mod fuzz;
mod predict;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{membership, validate, Arrangement, Membership, ValidationReport};
use crate::geom::{intersect_circles, Axis, Circle, Point, Side};
use crate::json::graph_to_value;
use crate::sweep::{frame_circles, in_closure, raw_slice, GraphLoc, Sweep, SweepError, SweepOptions};
use crate::vdigraph::{isomorphic, VDigraph};

pub use fuzz::{fuzz_run, random_base, FuzzConfig, FuzzReport, FuzzViolation};
pub use predict::{predict, Candidate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MoveError {
    #[error("no circle named {0}")]
    UnknownCircle(String),
    #[error("point {0} is not on the boundary of the seed component")]
    NotOnBoundary(Point),
    #[error("point {0} is outside the region closure")]
    OutsideClosure(Point),
    #[error("point {0} is too close to another feature")]
    DegeneratePoint(Point),
    #[error("cannot place circle: {0}")]
    CannotPlace(String),
    #[error("the seed would be swallowed by the new circle")]
    SeedSwallowed,
    #[error("point {0} is not a corner")]
    NotACorner(Point),
    #[error("corner direction has a vanishing component")]
    ZeroComponent,
    #[error("point {0} is not a sweep-critical pole on the region boundary")]
    NotCriticalPole(Point),
    #[error("unknown case {0}")]
    UnknownCase(String),
    #[error("bad anchor: {0}")]
    BadAnchor(String),
    #[error("arrangement is invalid")]
    InvalidArrangement(ValidationReport),
    #[error(transparent)]
    Sweep(#[from] SweepError),
}

/// Point on a named circle, given by its angle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MovePoint {
    pub circle: String,
    pub angle: f64,
    pub point: Point,
}

/// Corner and pole tolerance when snapping a resolved point.
const SNAP: f64 = 10.0;

impl MovePoint {
    /// Resolves `angle` on circle `circle`, snapping onto a pole or corner
    /// within tolerance, and checks the point bounds the seed component.
    pub fn resolve(arr: &Arrangement, circle: &str, angle: f64) -> Result<MovePoint, MoveError> {
        let c = arr.circle(circle).ok_or_else(|| MoveError::UnknownCircle(circle.to_owned()))?;
        let eps = arr.tol.eps();
        let mut q = c.point_at(angle);
        if let Some(e) = c.extremes().into_iter().find(|e| e.dist(q) <= SNAP * eps) {
            q = e;
        }
        for other in arr.circles.iter().filter(|o| o.id != c.id) {
            if let Ok(points) = intersect_circles(c, other, arr.tol) {
                if let Some(k) = points.into_iter().find(|k| k.dist(q) <= SNAP * eps) {
                    q = k;
                }
            }
        }
        let p = MovePoint {
            circle: circle.to_owned(),
            angle,
            point: q,
        };
        if !matches!(membership(arr, q), Membership::Boundary(_)) {
            return Err(MoveError::NotOnBoundary(q));
        }
        let sweep = Sweep::build(arr, Axis::X, SweepOptions::default())?;
        if sweep.locate(q).is_none() {
            return Err(MoveError::NotOnBoundary(q));
        }
        Ok(p)
    }

    /// The circles through the point (the named one first).
    pub fn hosts(&self, arr: &Arrangement) -> Vec<usize> {
        let eps = arr.tol.eps();
        let mut out: Vec<usize> = arr.circles.iter().position(|c| c.id == self.circle).into_iter().collect();
        for (i, c) in arr.circles.iter().enumerate() {
            if c.id != self.circle && c.curve_distance(self.point) <= SNAP * eps {
                out.push(i);
            }
        }
        out
    }
}

/// Radius small enough for the new circle to meet only its host circle(s)
/// and to stay clear of every other feature: a quarter of the distance from
/// `p` to the nearest circle not through it, pole or corner other than `p`.
pub fn safe_radius(arr: &Arrangement, p: &MovePoint) -> Result<f64, MoveError> {
    let eps = arr.tol.eps();
    let q = p.point;
    let mut d = f64::INFINITY;
    for c in &arr.circles {
        let off = c.curve_distance(q);
        if off > SNAP * eps {
            d = d.min(off);
        }
        for e in c.extremes() {
            let de = e.dist(q);
            if de > SNAP * eps {
                d = d.min(de);
            }
        }
    }
    for k in crate::arrangement::corners(arr) {
        let dk = k.point.dist(q);
        if dk > SNAP * eps {
            d = d.min(dk);
        }
    }
    if d <= SNAP * eps {
        return Err(MoveError::DegeneratePoint(q));
    }
    Ok(d / 4.0)
}

/// True when no pole or corner other than those tied with `p` has a value
/// within `r` of p's value, on either axis.
fn shadow_clear(arr: &Arrangement, p: Point, r: f64) -> bool {
    let eps = arr.tol.eps();
    let values = arr
        .circles
        .iter()
        .flat_map(|c| c.extremes())
        .chain(crate::arrangement::corners(arr).into_iter().map(|k| k.point));
    values.into_iter().all(|q| {
        Axis::BOTH.iter().all(|&a| {
            let d = (a.value(q) - a.value(p)).abs();
            d <= SNAP * eps || d > r
        })
    })
}

/// True when every value contributed by the last circle of `next` (its
/// extremes and its crossings) is either tied with or well apart from every
/// other pole and corner value, on both axes; otherwise the sweep would merge
/// features that are geometrically distinct.
fn resolvable(next: &Arrangement) -> bool {
    let eps = next.tol.eps();
    let Some(n) = next.circles.last() else {
        return true;
    };
    let mut fresh: Vec<Point> = n.extremes().to_vec();
    for c in &next.circles[..next.circles.len() - 1] {
        fresh.extend(intersect_circles(n, c, next.tol).unwrap_or_default());
    }
    let all: Vec<Point> = next
        .circles
        .iter()
        .flat_map(|c| c.extremes())
        .chain(crate::arrangement::corners(next).into_iter().map(|k| k.point))
        .collect();
    Axis::BOTH.iter().all(|&a| {
        fresh.iter().all(|&q| {
            all.iter().all(|&o| {
                let (u, v) = (a.value(q), a.value(o));
                let d = (u - v).abs();
                d <= 1e-12 * (1.0 + u.abs()) || d > 100.0 * eps
            })
        })
    })
}

/// Appends a circle of radius `r` (default: the safe radius) centered at
/// `p`, halving the radius up to eight times until the result validates and
/// the circle's shadow on each axis holds no other critical value.
/// Returns the new arrangement and the radius used.
pub fn add_small_circle(arr: &Arrangement, p: &MovePoint, r: Option<f64>) -> Result<(Arrangement, f64), MoveError> {
    let limit = safe_radius(arr, p)?;
    let mut r = r.unwrap_or(limit);
    if !(r > 0.0) || r > limit * (1.0 + 1e-12) {
        return Err(MoveError::CannotPlace(format!("radius {r} exceeds the safe radius {limit}")));
    }
    if arr.seed.dist(p.point) <= r + arr.tol.eps() {
        return Err(MoveError::SeedSwallowed);
    }
    let id = arr.fresh_id();
    for _ in 0..=8 {
        let mut next = arr.clone();
        next.circles.push(Circle::new(id.clone(), p.point, r, Side::Outside));
        if shadow_clear(arr, p.point, r) && validate(&next).valid {
            if !resolvable(&next) {
                break;
            }
            return Ok((next, r));
        }
        r /= 2.0;
    }
    Err(MoveError::CannotPlace(format!("no valid radius found at {}", p.point)))
}

/// Image of `p` in the graph for axis `a`.
pub fn locate(arr: &Arrangement, a: Axis, p: Point) -> Result<GraphLoc, MoveError> {
    let sweep = Sweep::new(arr, a, SweepOptions::default())?;
    sweep.locate(p).ok_or(MoveError::OutsideClosure(p))
}

/// Directions along which the region boundary leaves a corner.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CornerFrame {
    pub corner: Point,
    pub circles: [String; 2],
    pub d1: Point,
    pub d2: Point,
    /// Signs of `d1.x * d2.x` and `d1.y * d2.y`.
    pub pattern: [i8; 2],
    pub theta: f64,
    /// `corner + r * d1` and `corner + r * d2`.
    pub points: [Point; 2],
}

impl CornerFrame {
    /// Sign pattern with the sweep axis component first.
    pub fn pattern_for(&self, a: Axis) -> [i8; 2] {
        match a {
            Axis::X => self.pattern,
            Axis::Y => [self.pattern[1], self.pattern[0]],
        }
    }
}

pub fn corner_frame(arr: &Arrangement, p: Point, r: f64) -> Result<CornerFrame, MoveError> {
    let eps = arr.tol.eps();
    let on: Vec<&Circle> = arr.circles.iter().filter(|c| c.curve_distance(p) <= SNAP * eps).collect();
    if on.len() != 2 {
        return Err(MoveError::NotACorner(p));
    }
    let (h1, h2) = (on[0], on[1]);
    // tangent of `h` at p heading to the region side of `other`
    let dir = |h: &Circle, other: &Circle| {
        let t = (p - h.center).normalized().perp();
        let n = (p - other.center).normalized();
        let s = t.dot(n);
        let into = match other.side {
            Side::Inside => s < 0.0,
            Side::Outside => s > 0.0,
        };
        if into {
            t
        } else {
            -t
        }
    };
    let (d1, d2) = (dir(h1, h2), dir(h2, h1));
    if [d1.x, d1.y, d2.x, d2.y].iter().any(|c| c.abs() <= eps) {
        return Err(MoveError::ZeroComponent);
    }
    let sign = |v: f64| if v > 0.0 { 1 } else { -1 };
    Ok(CornerFrame {
        corner: p,
        circles: [h1.id.clone(), h2.id.clone()],
        d1,
        d2,
        pattern: [sign(d1.x * d2.x), sign(d1.y * d2.y)],
        theta: d1.dot(d2).clamp(-1.0, 1.0).acos(),
        points: [p + d1 * r, p + d2 * r],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoleType {
    I,
    II,
}

/// Poles on the fiber segment through a critical pole.
///
/// For a type II pole everything is measured after mirroring the value
/// axis, which turns it into a type I pole.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleFiberProfile {
    pub pole_type: PoleType,
    /// Fiber coordinates of the type I poles, then the top of the segment.
    pub l: Vec<f64>,
    /// Fiber coordinates of the type II poles, then the top of the segment.
    pub r: Vec<f64>,
    pub a: usize,
    pub b: usize,
    pub j0_l: usize,
    pub j0_r: usize,
    /// The segment is the single point `p` (a birth or death leaf).
    pub degenerate: bool,
}

impl PoleFiberProfile {
    pub fn indices(&self) -> (usize, usize, usize, usize) {
        (self.a, self.b, self.j0_l, self.j0_r)
    }
}

/// Circles expressed in the sweep frame, optionally mirrored so that the
/// value axis is reversed.
pub(crate) fn frame_arrangement(arr: &Arrangement, a: Axis, mirrored: bool) -> Arrangement {
    let mut circles = frame_circles(&arr.circles, a);
    let mut seed = a.to_frame(arr.seed);
    if mirrored {
        for c in &mut circles {
            c.center.x = -c.center.x;
        }
        seed.x = -seed.x;
    }
    Arrangement {
        circles,
        seed,
        tol: arr.tol,
    }
}

pub(crate) fn frame_point(p: Point, a: Axis, mirrored: bool) -> Point {
    let q = a.to_frame(p);
    if mirrored {
        Point::new(-q.x, q.y)
    } else {
        q
    }
}

/// Type I when the region is absent just before the pole's value.
fn pole_type(framed: &Arrangement, q: Point, r_host: f64) -> PoleType {
    let probe = Point::new(q.x - 1e-6 * r_host, q.y);
    if in_closure(&framed.circles, probe, 0.0) {
        PoleType::II
    } else {
        PoleType::I
    }
}

pub fn pole_fiber_profile(arr: &Arrangement, a: Axis, p: Point) -> Result<PoleFiberProfile, MoveError> {
    let eps = arr.tol.eps();
    let framed = frame_arrangement(arr, a, false);
    let q = a.to_frame(p);
    let host = framed
        .circles
        .iter()
        .find(|c| {
            let [l, r, _, _] = c.extremes();
            l.dist(q) <= SNAP * eps || r.dist(q) <= SNAP * eps
        })
        .ok_or(MoveError::NotCriticalPole(p))?;
    if !matches!(membership(&framed, q), Membership::Boundary(_)) {
        return Err(MoveError::NotCriticalPole(p));
    }
    let kind = pole_type(&framed, q, host.radius);
    let mirrored = kind == PoleType::II;
    let framed = frame_arrangement(arr, a, mirrored);
    let q = frame_point(p, a, mirrored);

    let scale = framed.circles.iter().map(|c| c.radius).fold(1.0, f64::max);
    // merge gaps left by rounding at tangent crossings
    let mut segs: Vec<(f64, f64)> = Vec::new();
    for s in raw_slice(&framed.circles, q.x) {
        match segs.last_mut() {
            Some(last) if s.lo - last.1 <= 1e-6 * scale => last.1 = s.hi,
            _ => segs.push((s.lo, s.hi)),
        }
    }
    let seg = segs.into_iter().find(|&(lo, hi)| lo - 1e-6 * scale <= q.y && q.y <= hi + 1e-6 * scale);
    let Some((lo, hi)) = seg.filter(|&(lo, hi)| hi - lo > 1e-6 * scale) else {
        return Ok(PoleFiberProfile {
            pole_type: kind,
            l: vec![q.y],
            r: vec![q.y],
            a: 1,
            b: 1,
            j0_l: 1,
            j0_r: 1,
            degenerate: true,
        });
    };
    let mut type_one = Vec::new();
    let mut type_two = Vec::new();
    for c in &framed.circles {
        let [l, r, _, _] = c.extremes();
        for e in [l, r] {
            if (e.x - q.x).abs() <= SNAP * eps
                && e.y > lo
                && e.y < hi
                && matches!(membership(&framed, e), Membership::Boundary(_))
            {
                match pole_type(&framed, e, c.radius) {
                    PoleType::I => type_one.push(e.y),
                    PoleType::II => type_two.push(e.y),
                }
            }
        }
    }
    type_one.sort_by(f64::total_cmp);
    type_two.sort_by(f64::total_cmp);
    let j0_l = 1 + type_one.iter().filter(|&&y| y < q.y - SNAP * eps).count();
    let j0_r = 1 + type_two.iter().filter(|&&y| y < q.y).count();
    type_one.push(hi);
    type_two.push(hi);
    Ok(PoleFiberProfile {
        pole_type: kind,
        a: type_one.len(),
        b: type_two.len(),
        l: type_one,
        r: type_two,
        j0_l,
        j0_r,
        degenerate: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    GenericEdge,
    GenericVertex,
    PoleInside,
    PoleOutside,
    RegularInsideEdge,
    RegularOutsideEdge,
    RegularInsideVertex,
    RegularOutsideVertex,
    CornerSameSame,
    CornerSplitDistinct,
    CornerSplitTied,
    CornerOppositeSame,
    CornerOppositeOpposite,
    StackedPoleI,
    StackedPoleII,
}

impl Case {
    pub const ALL: [Case; 15] = [
        Case::GenericEdge,
        Case::GenericVertex,
        Case::PoleInside,
        Case::PoleOutside,
        Case::RegularInsideEdge,
        Case::RegularOutsideEdge,
        Case::RegularInsideVertex,
        Case::RegularOutsideVertex,
        Case::CornerSameSame,
        Case::CornerSplitDistinct,
        Case::CornerSplitTied,
        Case::CornerOppositeSame,
        Case::CornerOppositeOpposite,
        Case::StackedPoleI,
        Case::StackedPoleII,
    ];

    /// Catalog identifier, e.g. `"2.2.1"`.
    pub fn id(self) -> &'static str {
        match self {
            Case::GenericEdge => "2.1.1",
            Case::GenericVertex => "2.1.2",
            Case::PoleInside => "2.2.1",
            Case::PoleOutside => "2.2.2",
            Case::RegularInsideEdge => "2.3.1",
            Case::RegularOutsideEdge => "2.3.2",
            Case::RegularInsideVertex => "2.3.3",
            Case::RegularOutsideVertex => "2.3.4",
            Case::CornerSameSame => "3.2.1",
            Case::CornerSplitDistinct => "3.2.2.1",
            Case::CornerSplitTied => "3.2.2.2",
            Case::CornerOppositeSame => "3.2.3",
            Case::CornerOppositeOpposite => "3.2.4",
            Case::StackedPoleI => "5.I",
            Case::StackedPoleII => "5.II",
        }
    }

    /// Cases that never arise from circle-centered moves on valid input.
    pub fn is_forbidden(self) -> bool {
        matches!(self, Case::CornerSameSame | Case::CornerSplitTied | Case::CornerOppositeOpposite)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Case {
    type Err = MoveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Case::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| MoveError::UnknownCase(s.to_owned()))
    }
}

impl Serialize for Case {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Case {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Fiber-side structure at a stacked pole, counted from the sweep: `a`
/// edges enter the pole's vertex and `b` leave it; `j0_l` is the index of
/// the entering edge just below the pole and `j0_r` that of the leaving edge
/// through it (both 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SideCounts {
    pub a: usize,
    pub b: usize,
    pub j0_l: usize,
    pub j0_r: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoveClassification {
    pub axis: Axis,
    pub case: Case,
    pub anchor: GraphLoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corner_frame: Option<CornerFrame>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<PoleFiberProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sides: Option<SideCounts>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PointKind {
    Generic,
    Critical,
    Regular,
    Corner,
}

/// Pre-move state in the sweep frame.
pub(crate) struct Ctx {
    pub framed: Arrangement,
    pub sweep: Sweep,
    pub p: Point,
    pub hosts: Vec<usize>,
    pub mirrored: bool,
}

impl Ctx {
    pub fn new(arr: &Arrangement, a: Axis, mp: &MovePoint, mirrored: bool) -> Result<Ctx, MoveError> {
        let framed = frame_arrangement(arr, a, mirrored);
        let sweep = Sweep::build(&framed, Axis::X, SweepOptions::default())?;
        Ok(Ctx {
            framed,
            sweep,
            p: frame_point(mp.point, a, mirrored),
            hosts: mp.hosts(arr),
            mirrored,
        })
    }

    pub fn kind(&self) -> PointKind {
        if self.hosts.len() >= 2 {
            return PointKind::Corner;
        }
        let eps = self.framed.tol.eps();
        let [l, r, b, t] = self.framed.circles[self.hosts[0]].extremes();
        if l.dist(self.p) <= SNAP * eps || r.dist(self.p) <= SNAP * eps {
            PointKind::Critical
        } else if b.dist(self.p) <= SNAP * eps || t.dist(self.p) <= SNAP * eps {
            PointKind::Regular
        } else {
            PointKind::Generic
        }
    }

    pub fn anchor(&self) -> Result<GraphLoc, MoveError> {
        // the sweep works in its own frame, where the point is already placed
        self.sweep.locate(self.p).ok_or(MoveError::NotOnBoundary(self.p))
    }

    pub fn host(&self) -> &Circle {
        &self.framed.circles[self.hosts[0]]
    }

    /// Entering and leaving edges at vertex `v` nearest to the point.
    pub fn edges_near(&self, v: usize) -> Result<(usize, usize), MoveError> {
        let sides = self
            .sweep
            .vertex_sides(v)
            .ok_or_else(|| MoveError::BadAnchor(format!("no vertex {v}")))?;
        let pick = |list: &[crate::sweep::SideEdge]| {
            list.iter()
                .min_by(|a, b| dist_to(a, self.p.y).total_cmp(&dist_to(b, self.p.y)))
                .and_then(|s| s.edge)
        };
        match (pick(&sides.before), pick(&sides.after)) {
            (Some(i), Some(o)) => Ok((i, o)),
            _ => Err(MoveError::BadAnchor(format!("vertex {v} lacks an edge on one side of the point"))),
        }
    }

    pub fn side_counts(&self, v: usize) -> Result<SideCounts, MoveError> {
        let sides = self
            .sweep
            .vertex_sides(v)
            .ok_or_else(|| MoveError::BadAnchor(format!("no vertex {v}")))?;
        let below = sides.before.iter().filter(|s| 0.5 * (s.lo + s.hi) < self.p.y).count();
        let through = sides.after.iter().filter(|s| s.hi < self.p.y).count();
        Ok(SideCounts {
            a: sides.before.len(),
            b: sides.after.len(),
            j0_l: below,
            j0_r: through + 1,
        })
    }
}

fn dist_to(s: &crate::sweep::SideEdge, y: f64) -> f64 {
    if y < s.lo {
        s.lo - y
    } else if y > s.hi {
        y - s.hi
    } else {
        0.0
    }
}

pub fn classify(arr: &Arrangement, a: Axis, p: &MovePoint) -> Result<MoveClassification, MoveError> {
    let report = validate(arr);
    if !report.valid {
        return Err(MoveError::InvalidArrangement(report));
    }
    let ctx = Ctx::new(arr, a, p, false)?;
    let anchor = ctx.anchor()?;
    let on_vertex = matches!(anchor, GraphLoc::Vertex(_));
    let inside = ctx.host().side == Side::Inside;
    let mut out = MoveClassification {
        axis: a,
        case: Case::GenericEdge,
        anchor,
        corner_frame: None,
        profile: None,
        sides: None,
    };
    out.case = match ctx.kind() {
        PointKind::Generic if on_vertex => Case::GenericVertex,
        PointKind::Generic => Case::GenericEdge,
        PointKind::Regular => match (inside, on_vertex) {
            (true, false) => Case::RegularInsideEdge,
            (true, true) => Case::RegularInsideVertex,
            (false, false) => Case::RegularOutsideEdge,
            (false, true) => Case::RegularOutsideVertex,
        },
        PointKind::Critical if inside => Case::PoleInside,
        PointKind::Critical => {
            let kind = pole_type(&ctx.framed, ctx.p, ctx.host().radius);
            out.profile = Some(pole_fiber_profile(arr, a, p.point)?);
            let ctx = if kind == PoleType::II { Ctx::new(arr, a, p, true)? } else { ctx };
            let GraphLoc::Vertex(v) = ctx.anchor()? else {
                return Err(MoveError::BadAnchor("a boundary pole must map to a vertex".into()));
            };
            let counts = ctx.side_counts(v)?;
            out.sides = Some(counts);
            let plain = SideCounts {
                a: 2,
                b: 1,
                j0_l: 1,
                j0_r: 1,
            };
            match (counts == plain, kind) {
                (true, _) => Case::PoleOutside,
                (false, PoleType::I) => Case::StackedPoleI,
                (false, PoleType::II) => Case::StackedPoleII,
            }
        }
        PointKind::Corner => {
            let r = safe_radius(arr, p)?;
            let frame = corner_frame(arr, p.point, r)?;
            let along = a.to_frame(frame.d1).x - a.to_frame(frame.d2).x;
            let case = match frame.pattern_for(a) {
                [1, 1] => Case::CornerSameSame,
                [1, _] if along.abs() <= crate::vdigraph::TIE_TOLERANCE => Case::CornerSplitTied,
                [1, _] => Case::CornerSplitDistinct,
                [_, 1] => Case::CornerOppositeSame,
                _ => Case::CornerOppositeOpposite,
            };
            out.corner_frame = Some(frame);
            case
        }
    };
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisReport {
    pub classification: MoveClassification,
    pub candidates: Vec<Candidate>,
    pub recomputed: VDigraph,
    /// Index of the first candidate isomorphic to the recomputed graph.
    pub matched: Option<usize>,
    pub match_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoveReport {
    pub point: MovePoint,
    pub radius: f64,
    pub new_circle: String,
    pub arrangement: Arrangement,
    pub axes: Vec<AxisReport>,
}

impl MoveReport {
    pub fn ok(&self) -> bool {
        self.axes.iter().all(|a| a.matched.is_some())
    }

    pub fn case(&self, a: Axis) -> Option<Case> {
        self.axes
            .iter()
            .find(|r| r.classification.axis == a)
            .map(|r| r.classification.case)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let axes: Vec<serde_json::Value> = self
            .axes
            .iter()
            .map(|r| {
                serde_json::json!({
                    "axis": r.classification.axis,
                    "case": r.classification.case,
                    "classification": r.classification,
                    "candidates": r.candidates.iter().map(|c| serde_json::json!({
                        "label": c.label,
                        "graph": graph_to_value(&c.graph),
                    })).collect::<Vec<_>>(),
                    "recomputed": graph_to_value(&r.recomputed),
                    "matched": r.matched,
                    "match_count": r.match_count,
                    "verdict": if r.matched.is_some() { "ok" } else { "mismatch" },
                })
            })
            .collect();
        serde_json::json!({
            "point": self.point,
            "radius": self.radius,
            "new_circle": self.new_circle,
            "verdict": if self.ok() { "ok" } else { "mismatch" },
            "axes": axes,
        })
    }
}

/// Classifies, predicts, adds the circle, recomputes and compares, for
/// both axes.
pub fn verify(arr: &Arrangement, p: &MovePoint, r: Option<f64>) -> Result<MoveReport, MoveError> {
    let (next, radius) = add_small_circle(arr, p, r)?;
    let new_circle = next.circles.last().map(|c| c.id.clone()).unwrap_or_default();
    let mut axes = Vec::new();
    for a in Axis::BOTH {
        let classification = classify(arr, a, p)?;
        let candidates = predict(arr, &classification, p, radius).unwrap_or_default();
        let recomputed = crate::sweep::build_graph(&next, a)?;
        let hits: Vec<usize> = candidates
            .iter()
            .enumerate()
            .filter(|(_, c)| isomorphic(&c.graph, &recomputed).is_ok_and(|r| r.isomorphic))
            .map(|(i, _)| i)
            .collect();
        axes.push(AxisReport {
            classification,
            candidates,
            recomputed,
            matched: hits.first().copied(),
            match_count: hits.len(),
        });
    }
    Ok(MoveReport {
        point: p.clone(),
        radius,
        new_circle,
        arrangement: next,
        axes,
    })
}

/// One entry of a move file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveSpec {
    pub circle: String,
    pub angle: f64,
    #[serde(default)]
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveFile {
    pub moves: Vec<MoveSpec>,
}
