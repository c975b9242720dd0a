use mbc_core::geom::{apply_move, intersect_circles, Axis, Circle, Point, RigidMove, Rotation, Side, Tolerance};
use mbc_core::moves::{random_base, safe_radius, MovePoint};
use mbc_core::vdigraph::{isomorphic, VDigraph};
use mbc_core::{build_graph, validate, Arrangement};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn base(seed: u64) -> Arrangement {
    random_base(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn iso(a: &VDigraph, b: &VDigraph) -> bool {
    isomorphic(a, b).is_ok_and(|r| r.isomorphic)
}

fn circle() -> impl Strategy<Value = Circle> {
    (-3.0..3.0f64, -3.0..3.0f64, 0.1..2.0f64).prop_map(|(x, y, r)| Circle::new("c", Point::new(x, y), r, Side::Inside))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersections_are_symmetric(a in circle(), b in circle()) {
        let tol = Tolerance::default();
        match (intersect_circles(&a, &b, tol), intersect_circles(&b, &a, tol)) {
            (Ok(mut p), Ok(mut q)) => {
                let key = |u: &Point, v: &Point| u.x.total_cmp(&v.x).then(u.y.total_cmp(&v.y));
                p.sort_by(key);
                q.sort_by(key);
                prop_assert_eq!(p.len(), q.len());
                for (u, v) in p.iter().zip(&q) {
                    prop_assert!(u.dist(*v) < 1e-9);
                    prop_assert!(a.curve_distance(*u) < 1e-9 && b.curve_distance(*u) < 1e-9);
                }
            }
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "asymmetric result {:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn translation_keeps_graphs(seed in 0u64..10_000, dx in -5.0..5.0f64, dy in -5.0..5.0f64) {
        let arr = base(seed);
        let moved = apply_move(&arr, &RigidMove::Translate { dx, dy });
        prop_assert!(validate(&moved).valid);
        for a in Axis::BOTH {
            prop_assert!(iso(&build_graph(&arr, a).unwrap(), &build_graph(&moved, a).unwrap()));
        }
    }

    #[test]
    fn reflections_keep_or_negate(seed in 0u64..10_000, at in -2.0..2.0f64) {
        let arr = base(seed);
        let gx = build_graph(&arr, Axis::X).unwrap();
        let gy = build_graph(&arr, Axis::Y).unwrap();
        let v = apply_move(&arr, &RigidMove::ReflectVertical { x0: at });
        prop_assert!(iso(&build_graph(&v, Axis::Y).unwrap(), &gy));
        prop_assert!(iso(&build_graph(&v, Axis::X).unwrap(), &gx.negated()));
        let h = apply_move(&arr, &RigidMove::ReflectHorizontal { y0: at });
        prop_assert!(iso(&build_graph(&h, Axis::X).unwrap(), &gx));
        prop_assert!(iso(&build_graph(&h, Axis::Y).unwrap(), &gy.negated()));
    }

    #[test]
    fn quarter_turns_swap_axes(seed in 0u64..10_000) {
        let arr = base(seed);
        let gx = build_graph(&arr, Axis::X).unwrap();
        let c = Point::new(0.3, -0.2);
        let ccw = apply_move(&arr, &RigidMove::RotateQuarter { center: c, direction: Rotation::Ccw });
        let cw = apply_move(&arr, &RigidMove::RotateQuarter { center: c, direction: Rotation::Cw });
        prop_assert!(iso(&build_graph(&ccw, Axis::Y).unwrap(), &gx));
        prop_assert!(iso(&build_graph(&cw, Axis::Y).unwrap(), &gx.negated()));
    }

    #[test]
    fn isomorphism_is_an_equivalence(s1 in 0u64..10_000, s2 in 0u64..10_000, dx in -3.0..3.0f64) {
        let (a, b) = (base(s1), base(s2));
        let ga = build_graph(&a, Axis::X).unwrap();
        let gb = build_graph(&b, Axis::X).unwrap();
        let gt = build_graph(&apply_move(&a, &RigidMove::Translate { dx, dy: 0.0 }), Axis::X).unwrap();
        prop_assert!(iso(&ga, &ga));
        prop_assert_eq!(iso(&ga, &gb), iso(&gb, &ga));
        // ga ~ gt, so gb ~ ga iff gb ~ gt
        prop_assert_eq!(iso(&gb, &ga), iso(&gb, &gt));
    }

    #[test]
    fn safe_radius_scales(seed in 0u64..10_000, k in 0.2..5.0f64, angle in 0.0..std::f64::consts::TAU) {
        let arr = base(seed);
        let mut scaled = arr.clone();
        for c in &mut scaled.circles {
            c.center = c.center * k;
            c.radius *= k;
        }
        scaled.seed = scaled.seed * k;
        let (Ok(p), Ok(q)) = (MovePoint::resolve(&arr, "c0", angle), MovePoint::resolve(&scaled, "c0", angle)) else {
            return Ok(());
        };
        if let (Ok(r), Ok(s)) = (safe_radius(&arr, &p), safe_radius(&scaled, &q)) {
            prop_assert!((s - k * r).abs() <= 1e-9 * (1.0 + s));
        }
    }
}
