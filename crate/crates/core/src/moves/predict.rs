//! Predicted graphs after a move, one per alternative left open by the case.

use serde::Serialize;

use super::{pole_type, Case, Ctx, MoveClassification, MoveError, MovePoint, PoleType};
use crate::arrangement::Arrangement;
use crate::geom::{intersect_circles, Axis, Circle, Point, Side};
use crate::sweep::{in_closure, GraphLoc};
use crate::vdigraph::{LeafDirection, Provenance, Rewrite, VDigraph};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub label: String,
    #[serde(skip)]
    pub graph: VDigraph,
}

/// Boundary features of the new circle, in the sweep frame.
struct Bite {
    /// Values of the new circle's sweep-critical poles on the boundary.
    folds: Vec<f64>,
    /// New corners on the boundary, sorted by value.
    corners: Vec<Point>,
}

fn bite(ctx: &Ctx, r: f64) -> Bite {
    let tol = ctx.framed.tol;
    let n = Circle::new("", ctx.p, r, Side::Outside);
    let mut all = ctx.framed.circles.clone();
    all.push(n.clone());
    let eps = tol.eps();
    let folds = [ctx.p.x - r, ctx.p.x + r]
        .into_iter()
        .filter(|&x| in_closure(&all, Point::new(x, ctx.p.y), eps))
        .collect();
    let mut corners: Vec<Point> = ctx
        .hosts
        .iter()
        .filter_map(|&h| intersect_circles(&n, &ctx.framed.circles[h], tol).ok())
        .flatten()
        .filter(|&k| in_closure(&all, k, eps))
        .collect();
    corners.sort_by(|a, b| a.x.total_cmp(&b.x));
    Bite { folds, corners }
}

fn expect(b: &Bite, folds: usize, corners: usize) -> Result<(), MoveError> {
    if b.folds.len() == folds && b.corners.len() == corners {
        Ok(())
    } else {
        Err(MoveError::BadAnchor(format!(
            "expected {folds} folds and {corners} corners from the new circle, found {} and {}",
            b.folds.len(),
            b.corners.len()
        )))
    }
}

fn vertex_of(anchor: GraphLoc) -> Result<usize, MoveError> {
    match anchor {
        GraphLoc::Vertex(v) => Ok(v),
        GraphLoc::Edge(e) => Err(MoveError::BadAnchor(format!("expected a vertex, found edge {e}"))),
    }
}

fn edge_of(anchor: GraphLoc) -> Result<usize, MoveError> {
    match anchor {
        GraphLoc::Edge(e) => Ok(e),
        GraphLoc::Vertex(v) => Err(MoveError::BadAnchor(format!("expected an edge, found vertex {v}"))),
    }
}

fn rw(g: &mut VDigraph, r: Rewrite) -> Result<Vec<usize>, MoveError> {
    g.rewrite(&r).map_err(|e| MoveError::BadAnchor(e.to_string()))
}

fn subdivide(g: &mut VDigraph, edge: usize, values: Vec<f64>) -> Result<Vec<usize>, MoveError> {
    rw(g, Rewrite::SubdivideEdge { edge, values })
}

fn leaf(g: &mut VDigraph, at: usize, value: f64) -> Result<(), MoveError> {
    let direction = if value > g.value(at) {
        LeafDirection::Above
    } else {
        LeafDirection::Below
    };
    rw(g, Rewrite::AttachLeaf { at, direction, value }).map(|_| ())
}

fn single(label: &str, g: VDigraph) -> Vec<Candidate> {
    vec![Candidate {
        label: label.to_owned(),
        graph: g,
    }]
}

/// Candidate graphs for the move, in the axis of `cls`.
pub fn predict(arr: &Arrangement, cls: &MoveClassification, p: &MovePoint, r: f64) -> Result<Vec<Candidate>, MoveError> {
    let a = cls.axis;
    let mut ctx = Ctx::new(arr, a, p, false)?;
    if matches!(cls.case, Case::PoleOutside | Case::StackedPoleI | Case::StackedPoleII)
        && pole_type(&ctx.framed, ctx.p, ctx.host().radius) == PoleType::II
    {
        ctx = Ctx::new(arr, a, p, true)?;
    }
    let mut out = candidates(&ctx, cls.case, r)?;
    for c in &mut out {
        if ctx.mirrored {
            c.graph = c.graph.negated();
        }
        unframe(&mut c.graph, a, ctx.mirrored);
    }
    Ok(out)
}

fn unframe(g: &mut VDigraph, a: Axis, mirrored: bool) {
    g.axis = a;
    let fix = |q: Point| {
        let q = if mirrored { Point::new(-q.x, q.y) } else { q };
        a.from_frame(q)
    };
    for v in &mut g.vertices {
        for pr in &mut v.provenance {
            match pr {
                Provenance::Pole { point, .. }
                | Provenance::Corner { point, .. }
                | Provenance::RegularPole { point, .. } => *point = fix(*point),
            }
        }
    }
}

fn candidates(ctx: &Ctx, case: Case, r: f64) -> Result<Vec<Candidate>, MoveError> {
    let mut g = ctx.sweep.graph().clone();
    let b = bite(ctx, r);
    let anchor = ctx.anchor()?;
    let px = ctx.p.x;
    let label = case.id();
    match case {
        Case::GenericEdge | Case::GenericVertex => {
            expect(&b, 1, 2)?;
            let f = b.folds[0];
            let (near, far) = if (b.corners[0].x - f).abs() <= (b.corners[1].x - f).abs() {
                (b.corners[0].x, b.corners[1].x)
            } else {
                (b.corners[1].x, b.corners[0].x)
            };
            if case == Case::GenericEdge {
                let e0 = edge_of(anchor)?;
                let created = subdivide(&mut g, e0, if f < far { vec![f, far] } else { vec![far, f] })?;
                let fv = created[usize::from(f > far)];
                leaf(&mut g, fv, near)?;
            } else {
                let (ein, eout) = ctx.edges_near(vertex_of(anchor)?)?;
                let (fold_edge, far_edge) = if f < px { (ein, eout) } else { (eout, ein) };
                let fv = subdivide(&mut g, fold_edge, vec![f])?[0];
                leaf(&mut g, fv, near)?;
                subdivide(&mut g, far_edge, vec![far])?;
            }
            Ok(single(label, g))
        }
        Case::PoleInside => {
            expect(&b, 1, 2)?;
            let v0 = vertex_of(anchor)?;
            rw(
                &mut g,
                Rewrite::SplitLeaf {
                    vertex: v0,
                    new_value: b.folds[0],
                    leaf_values: [b.corners[0].x, b.corners[1].x],
                },
            )?;
            Ok(single(label, g))
        }
        Case::PoleOutside | Case::StackedPoleI | Case::StackedPoleII => stacked(ctx, &b, label),
        Case::RegularInsideEdge => {
            expect(&b, 0, 2)?;
            subdivide(&mut g, edge_of(anchor)?, vec![b.corners[0].x, b.corners[1].x])?;
            Ok(single(label, g))
        }
        Case::RegularInsideVertex => {
            expect(&b, 0, 2)?;
            let (ein, eout) = ctx.edges_near(vertex_of(anchor)?)?;
            subdivide(&mut g, ein, vec![b.corners[0].x])?;
            subdivide(&mut g, eout, vec![b.corners[1].x])?;
            Ok(single(label, g))
        }
        Case::RegularOutsideEdge => {
            expect(&b, 2, 2)?;
            let created = subdivide(&mut g, edge_of(anchor)?, b.folds.clone())?;
            leaf(&mut g, created[0], b.corners[0].x)?;
            leaf(&mut g, created[1], b.corners[1].x)?;
            Ok(single(label, g))
        }
        Case::RegularOutsideVertex => {
            expect(&b, 2, 2)?;
            let (ein, eout) = ctx.edges_near(vertex_of(anchor)?)?;
            let lv = subdivide(&mut g, ein, vec![b.folds[0]])?[0];
            leaf(&mut g, lv, b.corners[0].x)?;
            let rv = subdivide(&mut g, eout, vec![b.folds[1]])?[0];
            leaf(&mut g, rv, b.corners[1].x)?;
            Ok(single(label, g))
        }
        Case::CornerSameSame => {
            if b.corners.len() != 2 {
                expect(&b, 0, 2)?;
            }
            let v0 = vertex_of(anchor)?;
            let (near, far) = if (b.corners[0].x - px).abs() <= (b.corners[1].x - px).abs() {
                (b.corners[0].x, b.corners[1].x)
            } else {
                (b.corners[1].x, b.corners[0].x)
            };
            let edges: Vec<usize> = g.in_edges(v0).into_iter().chain(g.out_edges(v0)).collect();
            let [e] = edges[..] else {
                return Err(MoveError::BadAnchor("corner vertex is not a leaf".into()));
            };
            rw(&mut g, Rewrite::RelabelVertex { vertex: v0, value: near })?;
            subdivide(&mut g, e, vec![far])?;
            Ok(single(label, g))
        }
        Case::CornerSplitDistinct | Case::CornerSplitTied => {
            expect(&b, 1, 2)?;
            let v0 = vertex_of(anchor)?;
            let f = b.folds[0];
            let (c0, c1) = (b.corners[0].x, b.corners[1].x);
            let tied = (c0 - c1).abs() <= crate::vdigraph::TIE_TOLERANCE;
            let split = |leaves: [f64; 2]| {
                let mut h = g.clone();
                rw(
                    &mut h,
                    Rewrite::SplitLeaf {
                        vertex: v0,
                        new_value: f,
                        leaf_values: leaves,
                    },
                )
                .map(|_| h)
            };
            let actual = Candidate {
                label: if tied { "3.2.2.2" } else { "3.2.2.1" }.into(),
                graph: split([c0, c1])?,
            };
            let other_leaves = if tied { [c0, 0.5 * (c0 + f)] } else { [c0, c0] };
            let mut out = vec![actual];
            if let Ok(h) = split(other_leaves) {
                out.push(Candidate {
                    label: if tied { "3.2.2.1" } else { "3.2.2.2" }.into(),
                    graph: h,
                });
            }
            Ok(out)
        }
        Case::CornerOppositeSame | Case::CornerOppositeOpposite => {
            if b.corners.len() != 2 {
                expect(&b, 0, 2)?;
            }
            let v0 = vertex_of(anchor)?;
            let (ein, eout) = ctx.edges_near(v0)?;
            let (cl, cr) = (b.corners[0].x, b.corners[1].x);
            let mut out = Vec::new();
            let mut moved = g.clone();
            if rw(&mut moved, Rewrite::RelabelVertex { vertex: v0, value: cl }).is_ok()
                && subdivide(&mut moved, eout, vec![cr]).is_ok()
            {
                out.push(Candidate {
                    label: "2.3.1".into(),
                    graph: moved,
                });
            }
            let mut kept = g.clone();
            if subdivide(&mut kept, ein, vec![cl]).is_ok() && subdivide(&mut kept, eout, vec![cr]).is_ok() {
                out.push(Candidate {
                    label: "2.3.3".into(),
                    graph: kept,
                });
            }
            // a fold of the new circle survives when the corner is obtuse
            if let [f] = b.folds[..] {
                let (near, far) = if (cl - f).abs() <= (cr - f).abs() { (cl, cr) } else { (cr, cl) };
                let mut folded = g.clone();
                let far_edge = if far > f { eout } else { ein };
                if rw(&mut folded, Rewrite::RelabelVertex { vertex: v0, value: f }).is_ok()
                    && leaf(&mut folded, v0, near).is_ok()
                    && subdivide(&mut folded, far_edge, vec![far]).is_ok()
                {
                    out.push(Candidate {
                        label: "fold".into(),
                        graph: folded,
                    });
                }
            }
            Ok(out)
        }
    }
}

/// A type I pole: the vertex moves up to the new fold, the two entering
/// edges beside the pole are cut at the new corners, and whatever else met
/// at the pole's fiber stays at the old value on vertices below and above
/// the new circle.
fn stacked(ctx: &Ctx, b: &Bite, label: &str) -> Result<Vec<Candidate>, MoveError> {
    expect(b, 1, 2)?;
    let v0 = vertex_of(ctx.anchor()?)?;
    let counts = ctx.side_counts(v0)?;
    let sides = ctx.sweep.vertex_sides(v0).ok_or_else(|| MoveError::BadAnchor("pole vertex".into()))?;
    let l: Vec<usize> = sides.before.iter().filter_map(|s| s.edge).collect();
    let rr: Vec<usize> = sides.after.iter().filter_map(|s| s.edge).collect();
    if l.len() != counts.a || rr.len() != counts.b || counts.j0_l == 0 || counts.j0_l >= counts.a {
        return Err(MoveError::BadAnchor(format!("unexpected fiber structure at the pole: {counts:?}")));
    }
    let g0 = ctx.sweep.graph();
    let (fold, corner, old) = (b.folds[0], b.corners[0].x, g0.value(v0));
    let (j0l, j0r) = (counts.j0_l, counts.j0_r);
    let build = |has_low: bool, has_high: bool| -> Option<VDigraph> {
        let mut g = g0.clone();
        let v1 = g.add_vertex(corner);
        let v2 = g.add_vertex(corner);
        g.edges[l[j0l - 1]].dst = v1;
        g.edges[l[j0l]].dst = v2;
        let mut join = |from: usize, keep: bool| {
            if keep {
                let v = g.add_vertex(old);
                g.add_edge(from, v);
                g.add_edge(v, v0);
                v
            } else {
                g.add_edge(from, v0);
                v0
            }
        };
        let low = join(v1, has_low);
        let high = join(v2, has_high);
        for (j, &e) in l.iter().enumerate() {
            let j = j + 1;
            if j < j0l {
                g.edges[e].dst = low;
            } else if j > j0l + 1 {
                g.edges[e].dst = high;
            }
        }
        for (j, &e) in rr.iter().enumerate() {
            let j = j + 1;
            if j < j0r {
                g.edges[e].src = low;
            } else if j > j0r {
                g.edges[e].src = high;
            }
        }
        g.vertices[v0].value = fold;
        g.check_invariants().ok.then_some(g)
    };
    let low = j0l != 1 || j0r != 1;
    let high = j0l + 1 != counts.a || j0r != counts.b;
    let mut out = Vec::new();
    if let Some(g) = build(low, high) {
        out.push(Candidate {
            label: label.to_owned(),
            graph: g,
        });
    }
    // the reading that keeps the upper vertex whenever the pole is not last
    let (lit_low, lit_high) = (j0l != 1, j0l != counts.a);
    if (lit_low, lit_high) != (low, high) {
        if let Some(g) = build(lit_low, lit_high) {
            out.push(Candidate {
                label: format!("{label} literal"),
                graph: g,
            });
        }
    }
    if out.is_empty() {
        return Err(MoveError::BadAnchor("no consistent rewrite at the pole".into()));
    }
    Ok(out)
}
