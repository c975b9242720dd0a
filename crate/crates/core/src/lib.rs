//! Arrangements of circles, their swept Reeb-type digraphs along the two
//! coordinate axes, and the effect of adding a small circle at a boundary
//! point.

pub mod arrangement;
pub mod fixtures;
pub mod geom;
pub mod json;
pub mod moves;
pub mod oracle;
pub mod sweep;
pub mod vdigraph;

pub use arrangement::{
    boundary_features, corners, membership, validate, validate_with, Arrangement, ArrangementError, Clause, Corner,
    Membership, ValidateOptions, ValidationReport, Violation,
};
pub use geom::{
    apply_move, intersect_circles, poles, tangent_direction, Axis, Circle, GeomError, Point, Pole, PoleKind,
    RigidMove, Rotation, Side, Tolerance,
};
pub use sweep::{
    build_graph, build_graph_with, critical_events, fiber_at, fiber_count_oracle, Event, Feature, FeatureKind,
    FiberSlice, GraphLoc, Sweep, SweepError, SweepOptions,
};
pub use vdigraph::{apply_rewrite, check_invariants, isomorphic, GraphError, IsoResult, Rewrite, VDigraph};
pub use moves::{
    add_small_circle, classify, corner_frame, fuzz_run, locate, pole_fiber_profile, predict, random_base, safe_radius,
    verify, Candidate, Case, CornerFrame, FuzzConfig, FuzzReport, MoveClassification, MoveError, MovePoint,
    MoveReport, PoleFiberProfile, PoleType,
};
