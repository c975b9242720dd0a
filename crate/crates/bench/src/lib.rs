//! Inputs shared by the benchmarks.

use mbc_core::{Arrangement, Circle, Point, Side};

/// A disk holding `n` small holes on a jittered grid, so no two critical
/// values tie.
pub fn holes(n: usize) -> Arrangement {
    let side = (n as f64).sqrt().ceil().max(1.0) as usize;
    let big = side as f64 + 1.0;
    let mut circles = vec![Circle::new("c0", Point::new(0.0, 0.0), big * 1.5, Side::Inside)];
    for k in 0..n {
        let (i, j) = ((k % side) as f64, (k / side) as f64);
        let jitter = 0.013 * k as f64 / n as f64;
        let center = Point::new(i - side as f64 / 2.0 + jitter, j - side as f64 / 2.0 + 0.7 * jitter);
        circles.push(Circle::new(format!("c{}", k + 1), center, 0.2 + 0.05 * jitter, Side::Outside));
    }
    Arrangement::new(circles, Point::new(-(side as f64) / 2.0 - 0.5, 0.0))
}
