//! Semi-metric axioms and the relaxed triangle inequality.
//!
//! A distance `d` is a *semi-metric* here in the operational sense:
//! non-negative, symmetric, and zero exactly on equal points (equal at
//! equivalence-class level for collapsed distances). It is a
//! `(b, c)`-metric when additionally
//!
//! ```text
//! d(x, z) <= b * (d(x, y) + d(y, z)) + c        b >= 1, c >= 0
//! ```
//!
//! for all x, y, z. The checkers in this module test those statements on
//! finite samples and estimate the tightest constants a sample supports.

use crate::error::{GeomError, Result};
use crate::point::Point;
use crate::qi::QiParams;

/// A symmetric, non-negative pairwise distance on points.
///
/// Implementations must be total on their scene domain: a NaN result is
/// an error, never a sentinel.
pub trait DistanceFn {
    fn eval(&self, x: &Point, y: &Point) -> Result<f64>;
}

impl<F> DistanceFn for F
where
    F: Fn(&Point, &Point) -> f64,
{
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        Ok(self(x, y))
    }
}

/// The standard Euclidean distance.
#[derive(Clone, Copy, Debug, Default)]
pub struct Euclidean;

impl DistanceFn for Euclidean {
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        x.checked_euclidean(y)
    }
}

/// Evaluate a distance and reject non-finite values.
pub(crate) fn finite_distance<D: DistanceFn + ?Sized>(d: &D, x: &Point, y: &Point) -> Result<f64> {
    let v = d.eval(x, y)?;
    if !v.is_finite() {
        return Err(GeomError::NonFiniteDistance {
            x: x.clone(),
            y: y.clone(),
        });
    }
    Ok(v)
}

/// Multiplicative and additive slack of a relaxed triangle inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BcParams {
    b: f64,
    c: f64,
}

impl BcParams {
    pub fn new(b: f64, c: f64) -> Result<Self> {
        if !(b.is_finite() && b >= 1.0) {
            return Err(GeomError::InvalidArgument(format!(
                "multiplicative slack b must be finite and >= 1, got {b}"
            )));
        }
        if !(c.is_finite() && c >= 0.0) {
            return Err(GeomError::InvalidArgument(format!(
                "additive slack c must be finite and >= 0, got {c}"
            )));
        }
        Ok(Self { b, c })
    }

    /// The `(1, 0)` parameters of an ordinary metric space.
    pub fn metric() -> Self {
        Self { b: 1.0, c: 0.0 }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// One semi-metric axiom failure on a sampled point set.
#[derive(Clone, Debug)]
pub enum AxiomViolation {
    /// d(x, y) < -tol
    Negative { x: Point, y: Point, value: f64 },
    /// |d(x, y) - d(y, x)| > tol
    Asymmetric {
        x: Point,
        y: Point,
        forward: f64,
        backward: f64,
    },
    /// d(x, x) > tol
    NonzeroSelf { x: Point, value: f64 },
}

/// One sampled triple breaking the relaxed triangle inequality.
#[derive(Clone, Debug)]
pub struct TripleViolation {
    pub x: Point,
    pub y: Point,
    pub z: Point,
    /// d(x, z)
    pub lhs: f64,
    /// b * (d(x, y) + d(y, z)) + c
    pub rhs: f64,
    /// lhs - rhs; strictly positive for every recorded violation
    pub deficit: f64,
}

/// For each probed `b`, the least `c` making all sampled triples satisfy
/// the relaxed triangle inequality. `c_min` is non-increasing in `b`.
#[derive(Clone, Debug)]
pub struct BcFrontier {
    entries: Vec<(f64, f64)>,
}

impl BcFrontier {
    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    /// The frontier entry for a probed `b`, as validated parameters.
    pub fn entry(&self, b: f64) -> Option<BcParams> {
        self.entries
            .iter()
            .find(|(eb, _)| *eb == b)
            .map(|&(eb, c)| BcParams::new(eb, c).expect("frontier entries are valid parameters"))
    }
}

/// Check the semi-metric axioms (non-negativity, symmetry, zero self
/// distance) on a point sample. An empty result means the axioms hold on
/// the sample.
pub fn check_semimetric<D: DistanceFn + ?Sized>(
    d: &D,
    pts: &[Point],
    tol: f64,
) -> Result<Vec<AxiomViolation>> {
    if pts.is_empty() {
        return Err(GeomError::InvalidArgument("empty point sample".into()));
    }
    if tol < 0.0 {
        return Err(GeomError::InvalidArgument("tol must be >= 0".into()));
    }
    let mut violations = Vec::new();
    for x in pts {
        let self_dist = finite_distance(d, x, x)?;
        if self_dist > tol {
            violations.push(AxiomViolation::NonzeroSelf {
                x: x.clone(),
                value: self_dist,
            });
        }
    }
    for (i, x) in pts.iter().enumerate() {
        for y in &pts[i + 1..] {
            let forward = finite_distance(d, x, y)?;
            let backward = finite_distance(d, y, x)?;
            if forward < -tol {
                violations.push(AxiomViolation::Negative {
                    x: x.clone(),
                    y: y.clone(),
                    value: forward,
                });
            }
            if (forward - backward).abs() > tol {
                violations.push(AxiomViolation::Asymmetric {
                    x: x.clone(),
                    y: y.clone(),
                    forward,
                    backward,
                });
            }
        }
    }
    Ok(violations)
}

/// Check `d(x, z) <= b (d(x, y) + d(y, z)) + c` on each ordered triple,
/// returning every triple that breaks it by more than `tol`.
pub fn verify_bc<D: DistanceFn + ?Sized>(
    d: &D,
    params: BcParams,
    triples: &[(Point, Point, Point)],
    tol: f64,
) -> Result<Vec<TripleViolation>> {
    let mut violations = Vec::new();
    for (x, y, z) in triples {
        let lhs = finite_distance(d, x, z)?;
        let rhs = params.b() * (finite_distance(d, x, y)? + finite_distance(d, y, z)?) + params.c();
        if lhs > rhs + tol {
            violations.push(TripleViolation {
                x: x.clone(),
                y: y.clone(),
                z: z.clone(),
                lhs,
                rhs,
                deficit: lhs - rhs,
            });
        }
    }
    Ok(violations)
}

/// For each `b` in the grid, the least additive slack:
///
/// ```text
/// c_min(b) = max over triples of max(0, d(x,z) - b (d(x,y) + d(y,z)))
/// ```
///
/// The resulting `(b, c_min)` satisfies [`verify_bc`] with zero tolerance
/// on the same triples.
pub fn estimate_bc<D: DistanceFn + ?Sized>(
    d: &D,
    triples: &[(Point, Point, Point)],
    b_grid: &[f64],
) -> Result<BcFrontier> {
    if triples.is_empty() {
        return Err(GeomError::InvalidArgument("empty triple sample".into()));
    }
    for &b in b_grid {
        if !(b.is_finite() && b >= 1.0) {
            return Err(GeomError::InvalidArgument(format!(
                "grid value b = {b} must be finite and >= 1"
            )));
        }
    }
    // Evaluate each triple once; reuse across the whole grid.
    let mut legs = Vec::with_capacity(triples.len());
    for (x, y, z) in triples {
        let lhs = finite_distance(d, x, z)?;
        let via = finite_distance(d, x, y)? + finite_distance(d, y, z)?;
        legs.push((lhs, via));
    }
    let entries = b_grid
        .iter()
        .map(|&b| {
            let c_min = legs
                .iter()
                .map(|&(lhs, via)| (lhs - b * via).max(0.0))
                .fold(0.0, f64::max);
            (b, c_min)
        })
        .collect();
    Ok(BcFrontier { entries })
}

/// Constants transferred through a quasi-isometry: the image of a
/// `(b, c)`-metric space under a `(K, C)`-quasi-isometry satisfies the
/// relaxed triangle inequality with
///
/// ```text
/// b' = b K^2          c' = 2 b C K^2 + K c + C
/// ```
pub fn transfer_bc(source: BcParams, qi: QiParams) -> BcParams {
    let (b, c) = (source.b(), source.c());
    let (k, cc) = (qi.k(), qi.c());
    let b_out = b * k * k;
    let c_out = 2.0 * b * cc * k * k + k * c + cc;
    BcParams::new(b_out, c_out).expect("transfer preserves parameter domains")
}
