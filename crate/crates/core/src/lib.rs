//! Metric geometry with a relaxed triangle inequality.
//!
//! This crate implements distance spaces whose triangle inequality is
//! loosened by a multiplicative slack `b` and an additive slack `c`,
//! quasi-isometry sandwich checks between such spaces, and *collapsing
//! maps* on concrete Euclidean scenes: a strip around a Lipschitz curve
//! whose vertical fibers are identified with the points of the curve,
//! and a ball collapsed to a point. The collapsed distance deforms the
//! ambient metric only near the collapsed set; the interesting claims
//! (the collapse is a quasi-isometry, the image satisfies a transferred
//! relaxed triangle inequality, constant formulas for both) are checked
//! numerically on seeded samples by [`harness`].
//!
//! Everything is deterministic: sampling is seeded, quadrature and
//! minimization tolerances are fixed, and reports render byte-identically
//! for identical inputs.

pub mod ball;
pub mod collapse;
pub mod curve;
pub mod error;
pub mod harness;
pub mod metric;
pub mod numerics;
pub mod point;
pub mod qi;
pub mod report;
pub mod sample;
pub mod scene;

pub use ball::{ball_sigma, chord_length, BallQuotientDistance};
pub use collapse::{
    collapse_bounds, max_fiber_length, nearest_distance_to_scene, quasi_isometry_constants,
    quasi_isometry_constants_from_slope, CollapseBounds, CollapsedDistanceBreakdown,
    CollapsedMetric, CollapsedSpace, LinearBound, PointProfile,
};
pub use curve::CurveSpec;
pub use error::{GeomError, Result};
pub use harness::{
    run_ball_suite, run_bc_transfer_check, run_suite, CheckRecord, CheckStatus,
    VerificationReport, WorstWitness,
};
pub use metric::{
    check_semimetric, estimate_bc, transfer_bc, verify_bc, AxiomViolation, BcFrontier, BcParams,
    DistanceFn, Euclidean, TripleViolation,
};
pub use point::{aabb2, p1, p2, Aabb, Point};
pub use qi::{
    check_qi, estimate_qi, floor_map, FloorMap, Identity, PairViolation, PointMap, QiEstimate,
    QiParams, Side,
};
pub use sample::{sample, SampleConfig, SampleSet};
pub use scene::{builtin_scene, scene_from_toml, BallScene, Scene, StripScene, BUILTIN_SCENES};
