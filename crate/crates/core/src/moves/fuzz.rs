//! Randomised runs of moves on random disks with holes, checking each step
//! against recomputation and the brute-force fiber counts.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{verify, MoveError, MovePoint};
use crate::arrangement::{corners, validate, Arrangement};
use crate::geom::{Circle, Point, Side};
use crate::oracle::fiber_count_oracle;
use crate::sweep::build_graph;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzConfig {
    /// Number of independent base arrangements.
    pub seeds: u64,
    /// Moves attempted on each.
    pub moves: usize,
    pub rng_seed: u64,
    /// Oracle samples per axis after every move.
    pub oracle_samples: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            seeds: 20,
            moves: 10,
            rng_seed: 0,
            oracle_samples: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzViolation {
    pub seed: u64,
    pub step: usize,
    pub kind: String,
    pub detail: String,
    /// Arrangement before the offending move.
    pub arrangement: serde_json::Value,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FuzzReport {
    pub runs: u64,
    pub attempted: usize,
    pub verified: usize,
    /// Moves rejected before verification (degenerate point, no room).
    pub skipped: usize,
    pub violations: Vec<FuzzViolation>,
    pub case_counts: BTreeMap<String, usize>,
}

impl FuzzReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A disk of random radius in [1, 2] with up to two disjoint holes.
pub fn random_base(rng: &mut impl Rng) -> Arrangement {
    loop {
        let r0: f64 = rng.gen_range(1.0..2.0);
        let c0 = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let mut circles = vec![Circle::new("c0", c0, r0, Side::Inside)];
        let holes = rng.gen_range(0..=2);
        for _ in 0..holes {
            let rh = rng.gen_range(0.1..0.3) * r0;
            let reach = r0 - rh - 0.05 * r0;
            let (ang, d): (f64, f64) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..reach));
            let center = c0 + Point::new(ang.cos(), ang.sin()) * d;
            let clear = circles[1..]
                .iter()
                .all(|h| h.center.dist(center) > h.radius + rh + 0.05 * r0);
            if clear {
                circles.push(Circle::new(format!("c{}", circles.len()), center, rh, Side::Outside));
            }
        }
        for _ in 0..20 {
            let (ang, d): (f64, f64) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..0.9 * r0));
            let seed = c0 + Point::new(ang.cos(), ang.sin()) * d;
            if circles.iter().all(|c| c.side_distance(seed) > 0.05 * r0) {
                let arr = Arrangement::new(circles.clone(), seed);
                if validate(&arr).valid {
                    return arr;
                }
            }
        }
    }
}

/// Chooses a move point: mostly generic angles, some poles, some corners.
fn pick_point(rng: &mut impl Rng, arr: &Arrangement) -> Option<(String, f64)> {
    let roll: f64 = rng.gen();
    if roll < 0.2 {
        let ks = corners(arr);
        if !ks.is_empty() {
            let k = &ks[rng.gen_range(0..ks.len())];
            let id = k.circles[rng.gen_range(0..2)].clone();
            let c = arr.circle(&id)?;
            return Some((id, c.angle_of(k.point)));
        }
    }
    let c = &arr.circles[rng.gen_range(0..arr.circles.len())];
    let angle = if roll < 0.45 {
        [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2][rng.gen_range(0..4)]
    } else {
        rng.gen_range(0.0..TAU)
    };
    Some((c.id.clone(), angle))
}

/// Sorted vertex values of `g` outside `[lo, hi]`.
fn values_outside(g: &crate::vdigraph::VDigraph, lo: f64, hi: f64) -> Vec<f64> {
    let mut v: Vec<f64> = g.vertices.iter().map(|v| v.value).filter(|&x| x < lo || x > hi).collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn fuzz_run(cfg: &FuzzConfig) -> FuzzReport {
    let mut report = FuzzReport::default();
    for s in 0..cfg.seeds {
        let seed = cfg.rng_seed.wrapping_mul(1_000_003).wrapping_add(s);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut arr = random_base(&mut rng);
        report.runs += 1;
        for step in 0..cfg.moves {
            let Some((circle, angle)) = pick_point(&mut rng, &arr) else {
                continue;
            };
            report.attempted += 1;
            let mut flag = |kind: &str, detail: String, arr: &Arrangement| {
                report.violations.push(FuzzViolation {
                    seed,
                    step,
                    kind: kind.into(),
                    detail,
                    arrangement: arr.to_json_value(),
                });
            };
            let p = match MovePoint::resolve(&arr, &circle, angle) {
                Ok(p) => p,
                Err(_) => {
                    report.skipped += 1;
                    continue;
                }
            };
            let rep = match verify(&arr, &p, None) {
                Ok(r) => r,
                Err(
                    MoveError::DegeneratePoint(_)
                    | MoveError::CannotPlace(_)
                    | MoveError::SeedSwallowed
                    | MoveError::NotOnBoundary(_)
                    | MoveError::ZeroComponent,
                ) => {
                    report.skipped += 1;
                    continue;
                }
                Err(e) => {
                    flag("error", format!("{circle}@{angle}: {e}"), &arr);
                    continue;
                }
            };
            let next = rep.arrangement.clone();
            let mut bad = false;
            if !validate(&next).valid {
                flag("invalid", format!("{circle}@{angle}"), &arr);
                bad = true;
            }
            for ax in &rep.axes {
                let case = ax.classification.case;
                *report.case_counts.entry(case.id().to_owned()).or_default() += 1;
                let a = ax.classification.axis;
                let tag = format!("{circle}@{angle} axis {a} case {case}");
                if case.is_forbidden() {
                    flag("forbidden", tag.clone(), &arr);
                    bad = true;
                }
                if ax.match_count != 1 {
                    flag("mismatch", format!("{tag}: {} matching candidates", ax.match_count), &arr);
                    bad = true;
                }
                for (t, count) in fiber_count_oracle(&next, a, cfg.oracle_samples) {
                    let got = ax.recomputed.edges_crossing(t);
                    if got != count {
                        flag("oracle", format!("{tag}: at {t} graph has {got}, oracle {count}"), &arr);
                        bad = true;
                        break;
                    }
                }
                // nothing moves outside the new circle's shadow
                if let Ok(before) = build_graph(&arr, a) {
                    let (c, r) = (a.value(p.point), rep.radius);
                    let (lo, hi) = (c - 2.0 * r, c + 2.0 * r);
                    let (x, y) = (values_outside(&before, lo, hi), values_outside(&ax.recomputed, lo, hi));
                    let same = x.len() == y.len() && x.iter().zip(&y).all(|(u, v)| (u - v).abs() <= 1e-9);
                    if !same {
                        flag("locality", tag.clone(), &arr);
                        bad = true;
                    }
                }
            }
            if !bad {
                report.verified += 1;
            }
            arr = next;
        }
    }
    report
}
