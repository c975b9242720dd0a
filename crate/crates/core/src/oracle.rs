//! Brute-force fiber counting, used to cross-check the swept graphs.
//!
//! Every pole and every corner of the whole arrangement counts as a critical
//! value here, boundary or not, and components are glued only by overlap of
//! slices taken on both sides of each critical value.

use crate::arrangement::{corners, Arrangement};
use crate::geom::{Axis, Point};
use crate::sweep::{frame_circles, raw_slice, Span};

fn critical_values(arr: &Arrangement, a: Axis) -> Vec<f64> {
    let mut vals: Vec<f64> = arr
        .circles
        .iter()
        .flat_map(|c| {
            let v = a.value(c.center);
            [v - c.radius, v + c.radius]
        })
        .chain(corners(arr).into_iter().map(|k| a.value(k.point)))
        .collect();
    vals.sort_by(f64::total_cmp);
    vals.dedup_by(|x, y| (*x - *y).abs() <= 10.0 * arr.tol.eps());
    vals
}

/// Samples `samples` evenly spaced values across the critical range and
/// returns how many intervals of the fiber at each belong to the seed's
/// component. Values closer than `100 * eps` to a critical value are skipped.
pub fn fiber_count_oracle(arr: &Arrangement, a: Axis, samples: usize) -> Vec<(f64, usize)> {
    let circles = frame_circles(&arr.circles, a);
    let crit = critical_values(arr, a);
    if crit.is_empty() || samples == 0 {
        return Vec::new();
    }
    let eps = arr.tol.eps();
    let n = crit.len();
    // gap g lies between crit[g-1] and crit[g]
    let mid = |g: usize| -> f64 {
        match (g, g == n) {
            (0, _) => crit[0] - 1.0,
            (_, true) => crit[n - 1] + 1.0,
            _ => 0.5 * (crit[g - 1] + crit[g]),
        }
    };
    let reps: Vec<Vec<Span>> = (0..=n).map(|g| raw_slice(&circles, mid(g))).collect();
    let mut offset = vec![0usize; n + 2];
    for g in 0..=n {
        offset[g + 1] = offset[g] + reps[g].len();
    }
    let mut parent: Vec<usize> = (0..offset[n + 1]).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for k in 0..n {
        let lo_gap = if k == 0 { f64::INFINITY } else { crit[k] - crit[k - 1] };
        let hi_gap = if k + 1 == n { f64::INFINITY } else { crit[k + 1] - crit[k] };
        let d = 1e-7 * lo_gap.min(hi_gap).min(1.0);
        let before = raw_slice(&circles, crit[k] - d);
        let after = raw_slice(&circles, crit[k] + d);
        // chain rep(k) ~ before ~ after ~ rep(k+1), each link by overlap
        let base_b = parent.len();
        parent.extend(base_b..base_b + before.len());
        let base_a = parent.len();
        parent.extend(base_a..base_a + after.len());
        let links: [(&[Span], usize, &[Span], usize); 3] = [
            (&reps[k], offset[k], &before, base_b),
            (&before, base_b, &after, base_a),
            (&after, base_a, &reps[k + 1], offset[k + 1]),
        ];
        for (xs, ox, ys, oy) in links {
            for (i, s) in xs.iter().enumerate() {
                for (j, t) in ys.iter().enumerate() {
                    if s.overlaps(t) {
                        let (x, y) = (root(&mut parent, ox + i), root(&mut parent, oy + j));
                        parent[x.max(y)] = x.min(y);
                    }
                }
            }
        }
    }

    let gap_of = |t: f64| crit.iter().take_while(|&&c| c < t).count();
    let seed = a.to_frame(arr.seed);
    let sg = gap_of(seed.x);
    let seed_root = raw_slice(&circles, seed.x)
        .iter()
        .position(|s| s.distance_to(seed.y) == 0.0)
        .filter(|_| raw_slice(&circles, seed.x).len() == reps[sg].len())
        .map(|i| root(&mut parent, offset[sg] + i));

    let (lo, hi) = (crit[0], crit[n - 1]);
    let mut out = Vec::new();
    for s in 0..samples {
        let t = lo + (hi - lo) * (s as f64 + 0.5) / samples as f64;
        if crit.iter().any(|c| (c - t).abs() < 100.0 * eps) {
            continue;
        }
        let g = gap_of(t);
        let count = (0..reps[g].len())
            .filter(|&i| Some(root(&mut parent, offset[g] + i)) == seed_root)
            .count();
        out.push((t, count));
    }
    out
}

/// Whether `p` is inside the fiber interval of the seed component at its
/// own axis value; a slow reference for graph locating.
pub fn in_seed_fiber(arr: &Arrangement, a: Axis, p: Point) -> bool {
    let t = a.value(p);
    let circles = frame_circles(&arr.circles, a);
    let q = a.to_frame(p);
    raw_slice(&circles, t).iter().any(|s| s.distance_to(q.y) == 0.0)
}
