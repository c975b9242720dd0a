//! Sweeping the seed region along an axis.
//!
//! All work happens in a frame where the sweep axis is the first coordinate;
//! for `Axis::Y` the circles are mirrored across the diagonal first. Between
//! two consecutive boundary features the fiber structure is constant, so
//! each gap is represented by two slices (just after the previous event and
//! just before the next one). At every event the slices on both sides are
//! clustered by overlap; clusters are fiber components through the event.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::arrangement::{validate, Arrangement, ValidationReport};
use crate::geom::{intersect_circles, Axis, Circle, Point, Side, Tolerance};
use crate::vdigraph::{Provenance, VDigraph};

pub use crate::oracle::fiber_count_oracle;

/// Features closer than this multiple of the tolerance share one event.
pub(crate) const MERGE_FACTOR: f64 = 10.0;

/// Interior interval of one fiber, in frame coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Span {
    pub lo: f64,
    pub hi: f64,
    pub lo_circle: Option<usize>,
    pub hi_circle: Option<usize>,
}

impl Span {
    pub fn distance_to(&self, y: f64) -> f64 {
        if y < self.lo {
            self.lo - y
        } else if y > self.hi {
            y - self.hi
        } else {
            0.0
        }
    }

    pub fn overlaps(&self, o: &Span) -> bool {
        self.lo.max(o.lo) < self.hi.min(o.hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    fn endpoints(&self) -> [(f64, Option<usize>); 2] {
        [(self.lo, self.lo_circle), (self.hi, self.hi_circle)]
    }
}

/// Interior intervals of the sign cell on the vertical line `x = t`.
pub(crate) fn raw_slice(circles: &[Circle], t: f64) -> Vec<Span> {
    let mut crossings: Vec<(f64, usize, bool)> = Vec::new();
    for (i, c) in circles.iter().enumerate() {
        let dx = t - c.center.x;
        if dx.abs() < c.radius {
            let h = ((c.radius - dx) * (c.radius + dx)).sqrt();
            crossings.push((c.center.y - h, i, true));
            crossings.push((c.center.y + h, i, false));
        }
    }
    crossings.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.2.cmp(&a.2)));

    // number of circles whose inside/outside status disagrees with the region
    let mut bad = circles.iter().filter(|c| c.side == Side::Inside).count() as i64;
    let mut out: Vec<Span> = Vec::new();
    let mut lo = f64::NEG_INFINITY;
    let mut lo_circle = None;
    for &(y, i, entering) in &crossings {
        if bad == 0 {
            push_span(
                &mut out,
                Span {
                    lo,
                    hi: y,
                    lo_circle,
                    hi_circle: Some(i),
                },
            );
        }
        let wants_inside = circles[i].side == Side::Inside;
        bad += if entering == wants_inside { -1 } else { 1 };
        lo = y;
        lo_circle = Some(i);
    }
    if bad == 0 {
        push_span(
            &mut out,
            Span {
                lo,
                hi: f64::INFINITY,
                lo_circle,
                hi_circle: None,
            },
        );
    }
    out
}

fn push_span(out: &mut Vec<Span>, s: Span) {
    if s.hi <= s.lo {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.hi == s.lo {
            last.hi = s.hi;
            last.hi_circle = s.hi_circle;
            return;
        }
    }
    out.push(s);
}

pub(crate) fn frame_circles(circles: &[Circle], axis: Axis) -> Vec<Circle> {
    match axis {
        Axis::X => circles.to_vec(),
        Axis::Y => circles.iter().map(Circle::swapped).collect(),
    }
}

/// True when `p` is not strictly outside any circle's region side.
pub(crate) fn in_closure(circles: &[Circle], p: Point, eps: f64) -> bool {
    circles.iter().all(|c| c.side_distance(p) >= -eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    /// Sweep-critical pole.
    Pole,
    RegularPole,
    Corner,
}

/// A boundary point of the region that may carry a vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feature {
    pub kind: FeatureKind,
    pub circles: Vec<String>,
    pub point: Point,
}

impl Feature {
    pub fn provenance(&self) -> Provenance {
        match self.kind {
            FeatureKind::Pole => Provenance::Pole {
                circle: self.circles[0].clone(),
                point: self.point,
            },
            FeatureKind::RegularPole => Provenance::RegularPole {
                circle: self.circles[0].clone(),
                point: self.point,
            },
            FeatureKind::Corner => Provenance::Corner {
                circles: [self.circles[0].clone(), self.circles[1].clone()],
                point: self.point,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub axis_value: f64,
    pub features: Vec<Feature>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_circle: Option<String>,
    pub hi_circle: Option<String>,
    pub component: usize,
    pub in_seed_component: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberSlice {
    pub axis: Axis,
    pub t: f64,
    pub intervals: Vec<FiberInterval>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SweepOptions {
    /// Emit vertices at boundary sweep-regular poles too.
    #[serde(default)]
    pub declare_regular_poles: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("arrangement is invalid")]
    InvalidArrangement(ValidationReport),
    #[error("t = {t} coincides with the critical value {event}")]
    RequestAtEvent { t: f64, event: f64 },
    #[error("seed is not in the interior of the region")]
    SeedNotInterior,
    #[error("inconsistent sweep: {0}")]
    Inconsistent(String),
}

/// Where a point of the region closure sits in the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "lowercase")]
pub enum GraphLoc {
    Vertex(usize),
    Edge(usize),
}

/// An edge leaving a vertex on one side, with its transverse extent on the
/// slice next to the vertex (frame coordinates).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideEdge {
    pub edge: Option<usize>,
    pub lo: f64,
    pub hi: f64,
}

/// Edges at a vertex, each side sorted by transverse coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexSides {
    pub before: Vec<SideEdge>,
    pub after: Vec<SideEdge>,
}

#[derive(Debug, Clone)]
struct Feat {
    point: Point,
    circles: Vec<usize>,
    kind: FeatureKind,
}

#[derive(Debug, Clone)]
struct Ev {
    lo: f64,
    hi: f64,
    delta: f64,
    feats: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Gap {
    left: Vec<Span>,
    right: Vec<Span>,
}

#[derive(Debug, Clone)]
struct Cluster {
    event: usize,
    /// Indices into the right slice of the gap before the event.
    before: Vec<usize>,
    /// Indices into the left slice of the gap after the event.
    after: Vec<usize>,
    feats: Vec<usize>,
}

impl Cluster {
    fn passes_through(&self) -> bool {
        self.feats.is_empty() && self.before.len() == 1 && self.after.len() == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Loc {
    Cluster(usize),
    Piece(usize, usize),
}

/// The swept decomposition of one arrangement along one axis.
#[derive(Debug, Clone)]
pub struct Sweep {
    axis: Axis,
    circles: Vec<Circle>,
    eps: f64,
    feats: Vec<Feat>,
    events: Vec<Ev>,
    gaps: Vec<Gap>,
    clusters: Vec<Cluster>,
    before_cluster: Vec<Vec<usize>>,
    after_cluster: Vec<Vec<usize>>,
    comp: Vec<usize>,
    unbounded: Vec<bool>,
    seed_comp: Option<usize>,
    seed_unbounded: bool,
    vertex_of_cluster: Vec<Option<usize>>,
    edge_of_piece: Vec<Vec<Option<usize>>>,
    graph: VDigraph,
    anomalies: Vec<String>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

impl Sweep {
    /// Validates the arrangement, then sweeps it.
    pub fn new(arr: &Arrangement, axis: Axis, opts: SweepOptions) -> Result<Sweep, SweepError> {
        let report = validate(arr);
        if !report.valid {
            return Err(SweepError::InvalidArrangement(report));
        }
        Sweep::build(arr, axis, opts)
    }

    /// Sweeps without validating first.
    pub(crate) fn build(arr: &Arrangement, axis: Axis, opts: SweepOptions) -> Result<Sweep, SweepError> {
        let circles = frame_circles(&arr.circles, axis);
        let eps = arr.tol.eps();
        let scale = circles
            .iter()
            .map(|c| c.radius + c.center.x.abs().max(c.center.y.abs()))
            .fold(1.0, f64::max);
        let feats = collect_features(&circles, arr.tol, opts);
        let events = group_events(&feats, eps, scale);
        let n = events.len();
        let mut anomalies = Vec::new();

        let margin = scale;
        let mut gaps = Vec::with_capacity(n + 1);
        for g in 0..=n {
            let left_t = if g == 0 {
                events.first().map_or(0.0, |e| e.lo - margin)
            } else {
                events[g - 1].hi + events[g - 1].delta
            };
            let right_t = if g == n {
                events.last().map_or(0.0, |e| e.hi + margin)
            } else {
                events[g].lo - events[g].delta
            };
            let left = raw_slice(&circles, left_t);
            let right = raw_slice(&circles, right_t);
            if left.len() != right.len() {
                return Err(SweepError::Inconsistent(format!(
                    "fiber count changes inside the gap ({left_t}, {right_t})"
                )));
            }
            gaps.push(Gap { left, right });
        }

        let mut clusters: Vec<Cluster> = Vec::new();
        let mut before_cluster = Vec::with_capacity(n);
        let mut after_cluster = Vec::with_capacity(n);
        for (k, ev) in events.iter().enumerate() {
            let before = &gaps[k].right;
            let after = &gaps[k + 1].left;
            let nb = before.len();
            let mut parent: Vec<usize> = (0..nb + after.len()).collect();
            for (i, a) in before.iter().enumerate() {
                for (j, b) in after.iter().enumerate() {
                    if a.overlaps(b) {
                        union(&mut parent, i, nb + j);
                    }
                }
            }
            let mut local_of_root = std::collections::BTreeMap::new();
            let mut node_cluster = vec![0; parent.len()];
            for node in 0..parent.len() {
                let root = find(&mut parent, node);
                let id = *local_of_root.entry(root).or_insert_with(|| {
                    clusters.push(Cluster {
                        event: k,
                        before: Vec::new(),
                        after: Vec::new(),
                        feats: Vec::new(),
                    });
                    clusters.len() - 1
                });
                node_cluster[node] = id;
                if node < nb {
                    clusters[id].before.push(node);
                } else {
                    clusters[id].after.push(node - nb);
                }
            }
            for &f in &ev.feats {
                let feat = &feats[f];
                let mut best: Option<(f64, usize)> = None;
                let sides = before.iter().enumerate().map(|(i, s)| (i, s)).chain(
                    after.iter().enumerate().map(|(j, s)| (nb + j, s)),
                );
                for (node, span) in sides {
                    for (y, tag) in span.endpoints() {
                        if tag.is_some_and(|c| feat.circles.contains(&c)) {
                            let d = (y - feat.point.y).abs();
                            if best.is_none_or(|(bd, _)| d < bd) {
                                best = Some((d, node));
                            }
                        }
                    }
                    // a fold of a birth or death sits inside its own span
                    if feat.kind != FeatureKind::Corner && span.distance_to(feat.point.y) == 0.0 {
                        let d = 0.0;
                        if best.is_none_or(|(bd, _)| d < bd) {
                            best = Some((d, node));
                        }
                    }
                }
                match best {
                    Some((_, node)) => clusters[node_cluster[node]].feats.push(f),
                    None => anomalies.push(format!("feature at {} has no fiber near it", feat.point)),
                }
            }
            before_cluster.push(node_cluster[..nb].to_vec());
            after_cluster.push(node_cluster[nb..].to_vec());
        }

        // connected components over clusters, glued by gap pieces
        let nc = clusters.len();
        let mut parent: Vec<usize> = (0..nc).collect();
        for g in 1..n {
            for i in 0..gaps[g].left.len() {
                union(&mut parent, after_cluster[g - 1][i], before_cluster[g][i]);
            }
        }
        let comp: Vec<usize> = (0..nc).map(|c| find(&mut parent, c)).collect();
        let mut unbounded = vec![false; nc];
        if n > 0 {
            for &c in &before_cluster[0] {
                unbounded[comp[c]] = true;
            }
            for &c in &after_cluster[n - 1] {
                unbounded[comp[c]] = true;
            }
        }
        for (g, gap) in gaps.iter().enumerate() {
            for (i, s) in gap.left.iter().enumerate() {
                if !s.is_bounded() {
                    if g > 0 {
                        unbounded[comp[after_cluster[g - 1][i]]] = true;
                    }
                    if g < n {
                        unbounded[comp[before_cluster[g][i]]] = true;
                    }
                }
            }
        }

        let mut sweep = Sweep {
            axis,
            circles,
            eps,
            feats,
            events,
            gaps,
            clusters,
            before_cluster,
            after_cluster,
            comp,
            unbounded,
            seed_comp: None,
            seed_unbounded: true,
            vertex_of_cluster: vec![None; nc],
            edge_of_piece: Vec::new(),
            graph: VDigraph::new(axis),
            anomalies,
        };

        let seed = axis.to_frame(arr.seed);
        if !sweep.circles.iter().all(|c| c.side_distance(seed) > eps) {
            return Err(SweepError::SeedNotInterior);
        }
        match sweep.locate_frame(seed) {
            Some(loc) => {
                let comp = sweep.loc_comp(loc);
                sweep.seed_comp = comp;
                sweep.seed_unbounded = comp.is_none_or(|c| sweep.unbounded[c]);
            }
            None => {
                return Err(SweepError::Inconsistent(
                    "the seed's fiber could not be placed among the sweep slices".into(),
                ))
            }
        }
        sweep.build_graph_structure();
        Ok(sweep)
    }

    fn piece_comp(&self, g: usize, i: usize) -> Option<usize> {
        if g > 0 {
            Some(self.comp[self.after_cluster[g - 1][i]])
        } else if g < self.events.len() {
            Some(self.comp[self.before_cluster[g][i]])
        } else {
            None
        }
    }

    fn loc_comp(&self, loc: Loc) -> Option<usize> {
        match loc {
            Loc::Cluster(c) => Some(self.comp[c]),
            Loc::Piece(g, i) => self.piece_comp(g, i),
        }
    }

    fn in_seed(&self, comp: Option<usize>) -> bool {
        comp.is_some() && comp == self.seed_comp
    }

    fn event_at(&self, t: f64, slack: f64) -> Option<usize> {
        self.events.iter().position(|e| t >= e.lo - slack && t <= e.hi + slack)
    }

    fn gap_of(&self, t: f64) -> usize {
        self.events.iter().take_while(|e| e.hi < t).count()
    }

    /// Locates a frame point of the closure among clusters and pieces.
    fn locate_frame(&self, p: Point) -> Option<Loc> {
        if let Some(k) = self.event_at(p.x, MERGE_FACTOR * self.eps) {
            let mut best: Option<(f64, usize)> = None;
            for (c, cl) in self.clusters.iter().enumerate().filter(|(_, c)| c.event == k) {
                let spans = cl
                    .before
                    .iter()
                    .map(|&i| self.gaps[k].right[i])
                    .chain(cl.after.iter().map(|&i| self.gaps[k + 1].left[i]));
                for s in spans {
                    let d = s.distance_to(p.y);
                    if best.is_none_or(|(bd, _)| d < bd) {
                        best = Some((d, c));
                    }
                }
            }
            return best.map(|(_, c)| Loc::Cluster(c));
        }
        let g = self.gap_of(p.x);
        let slice = raw_slice(&self.circles, p.x);
        if slice.len() != self.gaps[g].left.len() {
            return None;
        }
        slice
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.distance_to(p.y).total_cmp(&b.1.distance_to(p.y)))
            .map(|(i, _)| Loc::Piece(g, i))
    }

    fn build_graph_structure(&mut self) {
        let n = self.events.len();
        self.edge_of_piece = self.gaps.iter().map(|g| vec![None; g.left.len()]).collect();
        let mut vertex_clusters: Vec<usize> = (0..self.clusters.len())
            .filter(|&c| self.in_seed(Some(self.comp[c])) && !self.clusters[c].passes_through())
            .collect();
        for &c in &vertex_clusters {
            if self.clusters[c].feats.is_empty() {
                self.anomalies.push(format!(
                    "fiber component at {} changes without a boundary feature",
                    self.events[self.clusters[c].event].lo
                ));
            }
        }
        let key = |s: &Sweep, c: usize| {
            let cl = &s.clusters[c];
            let value = s.cluster_value(c);
            let y = cl
                .feats
                .iter()
                .map(|&f| s.feats[f].point.y)
                .fold(f64::INFINITY, f64::min);
            (value, y)
        };
        vertex_clusters.sort_by(|&a, &b| {
            let (ka, kb) = (key(self, a), key(self, b));
            ka.0.total_cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
        });
        let mut graph = VDigraph::new(self.axis);
        for &c in &vertex_clusters {
            let v = graph.add_vertex(self.cluster_value(c));
            self.vertex_of_cluster[c] = Some(v);
            let mut feats = self.clusters[c].feats.clone();
            feats.sort_by(|&a, &b| self.feats[a].point.y.total_cmp(&self.feats[b].point.y));
            graph.vertices[v].provenance = feats.iter().map(|&f| self.public_feature(f).provenance()).collect();
        }
        for &c in &vertex_clusters {
            let k = self.clusters[c].event;
            for &i in &self.clusters[c].after.clone() {
                let mut pieces = vec![(k + 1, i)];
                let mut end = None;
                let (mut g, mut idx) = (k + 1, i);
                while g < n {
                    let d = self.before_cluster[g][idx];
                    if self.clusters[d].passes_through() {
                        idx = self.clusters[d].after[0];
                        g += 1;
                        pieces.push((g, idx));
                    } else {
                        end = Some(d);
                        break;
                    }
                }
                match end.and_then(|d| self.vertex_of_cluster[d]) {
                    Some(dst) => {
                        let src = self.vertex_of_cluster[c].expect("vertex cluster");
                        let e = graph.add_edge(src, dst);
                        for (g, idx) in pieces {
                            self.edge_of_piece[g][idx] = Some(e);
                        }
                    }
                    None => self.anomalies.push(format!(
                        "edge leaving {} never reaches a vertex",
                        self.events[k].lo
                    )),
                }
            }
        }
        self.graph = graph;
    }

    fn cluster_value(&self, c: usize) -> f64 {
        let cl = &self.clusters[c];
        if cl.feats.is_empty() {
            self.events[cl.event].lo
        } else {
            cl.feats
                .iter()
                .map(|&f| self.feats[f].point.x)
                .fold(f64::INFINITY, f64::min)
        }
    }

    fn public_feature(&self, f: usize) -> Feature {
        let feat = &self.feats[f];
        Feature {
            kind: feat.kind,
            circles: feat.circles.iter().map(|&c| self.circles[c].id.clone()).collect(),
            point: self.axis.from_frame(feat.point),
        }
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn graph(&self) -> &VDigraph {
        &self.graph
    }

    pub fn into_graph(self) -> VDigraph {
        self.graph
    }

    pub fn seed_unbounded(&self) -> bool {
        self.seed_unbounded
    }

    /// Irregularities met while building; empty for well-posed input.
    pub fn anomalies(&self) -> &[String] {
        &self.anomalies
    }

    /// Boundary events of the seed component in increasing order.
    pub fn events(&self) -> Vec<Event> {
        let mut out: Vec<Event> = Vec::new();
        for (k, ev) in self.events.iter().enumerate() {
            let mut feats: Vec<usize> = self
                .clusters
                .iter()
                .enumerate()
                .filter(|(c, cl)| cl.event == k && self.in_seed(Some(self.comp[*c])))
                .flat_map(|(_, cl)| cl.feats.iter().copied())
                .collect();
            if feats.is_empty() {
                continue;
            }
            feats.sort_by(|&a, &b| self.feats[a].point.y.total_cmp(&self.feats[b].point.y));
            out.push(Event {
                axis_value: ev.lo,
                features: feats.iter().map(|&f| self.public_feature(f)).collect(),
            });
        }
        out
    }

    /// Boundary features of the seed component, with their event value.
    pub(crate) fn seed_features(&self) -> Vec<(f64, Feature)> {
        self.events()
            .into_iter()
            .flat_map(|e| {
                let v = e.axis_value;
                e.features.into_iter().map(move |f| (v, f))
            })
            .collect()
    }

    /// Ids of circles bounding the seed component somewhere.
    pub fn touched_circles(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for (c, cl) in self.clusters.iter().enumerate() {
            if !self.in_seed(Some(self.comp[c])) {
                continue;
            }
            let k = cl.event;
            let spans = cl
                .before
                .iter()
                .map(|&i| self.gaps[k].right[i])
                .chain(cl.after.iter().map(|&i| self.gaps[k + 1].left[i]));
            for s in spans {
                for tag in [s.lo_circle, s.hi_circle].into_iter().flatten() {
                    out.insert(self.circles[tag].id.clone());
                }
            }
            for &f in &cl.feats {
                for &ci in &self.feats[f].circles {
                    out.insert(self.circles[ci].id.clone());
                }
            }
        }
        out
    }

    /// The fiber over `t`, with component labels.
    pub fn fiber_at(&self, t: f64) -> Result<FiberSlice, SweepError> {
        if let Some(k) = self.event_at(t, self.eps) {
            return Err(SweepError::RequestAtEvent {
                t,
                event: self.events[k].lo,
            });
        }
        let g = self.gap_of(t);
        let slice = raw_slice(&self.circles, t);
        if slice.len() != self.gaps[g].left.len() {
            return Err(SweepError::Inconsistent(format!("fiber count at {t} disagrees with its gap")));
        }
        let intervals = slice
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let comp = self.piece_comp(g, i);
                FiberInterval {
                    lo: s.lo,
                    hi: s.hi,
                    lo_circle: s.lo_circle.map(|c| self.circles[c].id.clone()),
                    hi_circle: s.hi_circle.map(|c| self.circles[c].id.clone()),
                    component: comp.unwrap_or(0),
                    in_seed_component: self.in_seed(comp) || (comp.is_none() && self.seed_comp.is_none()),
                }
            })
            .collect();
        Ok(FiberSlice {
            axis: self.axis,
            t,
            intervals,
        })
    }

    /// Graph position of a point of the seed component's closure.
    pub fn locate(&self, p: Point) -> Option<GraphLoc> {
        if !in_closure(&frame_circles(&self.circles, Axis::X), self.axis.to_frame(p), self.eps) {
            return None;
        }
        let loc = self.locate_frame(self.axis.to_frame(p))?;
        if !self.in_seed(self.loc_comp(loc)) {
            return None;
        }
        match loc {
            Loc::Cluster(c) => match self.vertex_of_cluster[c] {
                Some(v) => Some(GraphLoc::Vertex(v)),
                None => {
                    let cl = &self.clusters[c];
                    self.edge_of_piece[cl.event][cl.before[0]].map(GraphLoc::Edge)
                }
            },
            Loc::Piece(g, i) => self.edge_of_piece[g][i].map(GraphLoc::Edge),
        }
    }

    /// Edges at vertex `v` on the sides of lower and higher values.
    pub fn vertex_sides(&self, v: usize) -> Option<VertexSides> {
        let c = self.vertex_of_cluster.iter().position(|&x| x == Some(v))?;
        let cl = &self.clusters[c];
        let k = cl.event;
        let side = |g: usize, spans: &[Span], idx: &[usize]| -> Vec<SideEdge> {
            let mut out: Vec<SideEdge> = idx
                .iter()
                .map(|&i| SideEdge {
                    edge: self.edge_of_piece[g][i],
                    lo: spans[i].lo,
                    hi: spans[i].hi,
                })
                .collect();
            out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
            out
        };
        Some(VertexSides {
            before: side(k, &self.gaps[k].right, &cl.before),
            after: side(k + 1, &self.gaps[k + 1].left, &cl.after),
        })
    }
}

fn collect_features(circles: &[Circle], tol: Tolerance, opts: SweepOptions) -> Vec<Feat> {
    let eps = tol.eps();
    let mut feats = Vec::new();
    let on_boundary = |p: Point, own: &[usize]| {
        circles
            .iter()
            .enumerate()
            .all(|(i, c)| own.contains(&i) || c.side_distance(p) >= -eps)
    };
    for (i, c) in circles.iter().enumerate() {
        let [left, right, bottom, top] = c.extremes();
        for p in [left, right] {
            if on_boundary(p, &[i]) {
                feats.push(Feat {
                    point: p,
                    circles: vec![i],
                    kind: FeatureKind::Pole,
                });
            }
        }
        if opts.declare_regular_poles {
            for p in [bottom, top] {
                if on_boundary(p, &[i]) {
                    feats.push(Feat {
                        point: p,
                        circles: vec![i],
                        kind: FeatureKind::RegularPole,
                    });
                }
            }
        }
    }
    for i in 0..circles.len() {
        for j in i + 1..circles.len() {
            let Ok(points) = intersect_circles(&circles[i], &circles[j], tol) else {
                continue;
            };
            for p in points {
                if on_boundary(p, &[i, j]) {
                    feats.push(Feat {
                        point: p,
                        circles: vec![i, j],
                        kind: FeatureKind::Corner,
                    });
                }
            }
        }
    }
    feats
}

fn group_events(feats: &[Feat], eps: f64, scale: f64) -> Vec<Ev> {
    let mut order: Vec<usize> = (0..feats.len()).collect();
    order.sort_by(|&a, &b| feats[a].point.x.total_cmp(&feats[b].point.x));
    let mut events: Vec<Ev> = Vec::new();
    for f in order {
        let x = feats[f].point.x;
        match events.last_mut() {
            Some(e) if x - e.hi <= MERGE_FACTOR * eps => {
                e.hi = x;
                e.feats.push(f);
            }
            _ => events.push(Ev {
                lo: x,
                hi: x,
                delta: 0.0,
                feats: vec![f],
            }),
        }
    }
    for k in 0..events.len() {
        let mut gap = scale;
        if k > 0 {
            gap = gap.min(events[k].lo - events[k - 1].hi);
        }
        if k + 1 < events.len() {
            gap = gap.min(events[k + 1].lo - events[k].hi);
        }
        events[k].delta = 1e-6 * gap;
    }
    events
}

pub fn fiber_at(arr: &Arrangement, a: Axis, t: f64) -> Result<FiberSlice, SweepError> {
    Sweep::new(arr, a, SweepOptions::default())?.fiber_at(t)
}

pub fn critical_events(arr: &Arrangement, a: Axis) -> Result<Vec<Event>, SweepError> {
    Ok(Sweep::new(arr, a, SweepOptions::default())?.events())
}

pub fn build_graph(arr: &Arrangement, a: Axis) -> Result<VDigraph, SweepError> {
    build_graph_with(arr, a, SweepOptions::default())
}

pub fn build_graph_with(arr: &Arrangement, a: Axis, opts: SweepOptions) -> Result<VDigraph, SweepError> {
    Ok(Sweep::new(arr, a, opts)?.into_graph())
}
