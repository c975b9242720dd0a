//! Small arrangements used by tests, benches and the command line demos.

use crate::arrangement::Arrangement;
use crate::geom::{Circle, Point, Side};

fn c(id: &str, x: f64, y: f64, r: f64, side: Side) -> Circle {
    Circle::new(id, Point::new(x, y), r, side)
}

/// Unit disk at the origin.
pub fn disk() -> Arrangement {
    Arrangement::new(vec![c("c0", 0.0, 0.0, 1.0, Side::Inside)], Point::new(0.0, 0.0))
}

/// Unit disk minus the concentric disk of radius one half.
pub fn annulus() -> Arrangement {
    Arrangement::new(
        vec![c("c0", 0.0, 0.0, 1.0, Side::Inside), c("c1", 0.0, 0.0, 0.5, Side::Outside)],
        Point::new(0.75, 0.0),
    )
}

/// Intersection of the unit disks at (0, 0) and (1, 0).
pub fn lens() -> Arrangement {
    Arrangement::new(
        vec![c("c0", 0.0, 0.0, 1.0, Side::Inside), c("c1", 1.0, 0.0, 1.0, Side::Inside)],
        Point::new(0.5, 0.0),
    )
}

/// Unit disk with a shallow bite taken by a radius-5 circle whose boundary
/// passes through the unit-circle points at 25 and 65 degrees.
pub fn shallow_bite() -> Arrangement {
    let (a, b) = (25f64.to_radians(), 65f64.to_radians());
    let (p, q) = (Point::new(a.cos(), a.sin()), Point::new(b.cos(), b.sin()));
    let m = (p + q) * 0.5;
    let half = p.dist(q) * 0.5;
    let r = 5.0;
    let u = m.normalized();
    let center = m + u * (r * r - half * half).sqrt();
    Arrangement::new(
        vec![c("c0", 0.0, 0.0, 1.0, Side::Inside), c("c1", center.x, center.y, r, Side::Outside)],
        Point::new(0.0, 0.0),
    )
}

/// Unit disk with a hole tucked against its right side.
pub fn disk_with_hole() -> Arrangement {
    Arrangement::new(
        vec![c("c0", 0.0, 0.0, 1.0, Side::Inside), c("c1", 0.3, 0.0, 0.3, Side::Outside)],
        Point::new(-0.5, 0.0),
    )
}

/// Unit disk with two holes.
pub fn disk_with_two_holes() -> Arrangement {
    Arrangement::new(
        vec![
            c("c0", 0.0, 0.0, 1.0, Side::Inside),
            c("c1", 0.25, 0.0, 0.25, Side::Outside),
            c("c2", 0.0, -0.6, 0.2, Side::Outside),
        ],
        Point::new(-0.5, 0.5),
    )
}

/// Unit disk with two equal bites placed symmetrically about the x axis on
/// the left, so their right poles share one value and one fiber.
pub fn twin_bites() -> Arrangement {
    let theta = 150f64.to_radians();
    let r = 0.3;
    Arrangement::new(
        vec![
            c("c0", 0.0, 0.0, 1.0, Side::Inside),
            c("c1", theta.cos(), theta.sin(), r, Side::Outside),
            c("c2", theta.cos(), -theta.sin(), r, Side::Outside),
        ],
        Point::new(0.3, 0.0),
    )
}
