//! Quasi-isometry sandwich checks and tightest-constant estimation.
//!
//! A map `f` between distance spaces is a `(K, C)`-quasi-isometry when
//!
//! ```text
//! rho(x, y) / K - C <= rho'(f(x), f(y)) <= K rho(x, y) + C
//! ```
//!
//! for all x, y, with K >= 1 and C >= 0.

use crate::error::{GeomError, Result};
use crate::metric::{finite_distance, DistanceFn};
use crate::point::Point;

/// Multiplicative and additive constants of a quasi-isometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QiParams {
    k: f64,
    c: f64,
}

impl QiParams {
    pub fn new(k: f64, c: f64) -> Result<Self> {
        if !(k.is_finite() && k >= 1.0) {
            return Err(GeomError::InvalidArgument(format!(
                "multiplicative constant K must be finite and >= 1, got {k}"
            )));
        }
        if !(c.is_finite() && c >= 0.0) {
            return Err(GeomError::InvalidArgument(format!(
                "additive constant C must be finite and >= 0, got {c}"
            )));
        }
        Ok(Self { k, c })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// A map from points to points, evaluated pointwise by the checkers.
pub trait PointMap {
    fn apply(&self, x: &Point) -> Result<Point>;
}

impl<F> PointMap for F
where
    F: Fn(&Point) -> Point,
{
    fn apply(&self, x: &Point) -> Result<Point> {
        Ok(self(x))
    }
}

/// The identity map.
#[derive(Clone, Copy, Debug, Default)]
pub struct Identity;

impl PointMap for Identity {
    fn apply(&self, x: &Point) -> Result<Point> {
        Ok(x.clone())
    }
}

/// Greatest integer <= x.
pub fn floor_map(x: f64) -> Result<i64> {
    if !x.is_finite() {
        return Err(GeomError::InvalidArgument(format!(
            "floor is undefined at {x}"
        )));
    }
    Ok(x.floor() as i64)
}

/// Coordinatewise floor as a point map.
#[derive(Clone, Copy, Debug, Default)]
pub struct FloorMap;

impl PointMap for FloorMap {
    fn apply(&self, x: &Point) -> Result<Point> {
        Point::new(x.coords().iter().map(|c| c.floor()).collect())
    }
}

/// Which side of the sandwich a pair broke.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// rho_image < rho / K - C
    Lower,
    /// rho_image > K rho + C
    Upper,
}

/// One sampled pair breaking the sandwich inequality.
#[derive(Clone, Debug)]
pub struct PairViolation {
    pub x: Point,
    pub y: Point,
    pub rho: f64,
    pub rho_image: f64,
    pub side: Side,
    /// How far past the broken bound the image distance lies; > 0.
    pub excess: f64,
}

/// Empirical tightest quasi-isometry constants over a K-grid.
///
/// For each grid `K`, `c` is the least additive constant making all
/// sampled pairs satisfy both sandwich sides; it is non-increasing in
/// `K` along the frontier.
#[derive(Clone, Debug)]
pub struct QiEstimate {
    frontier: Vec<(f64, f64)>,
}

impl QiEstimate {
    pub fn frontier(&self) -> &[(f64, f64)] {
        &self.frontier
    }

    /// Smallest probed K.
    pub fn k_emp(&self) -> f64 {
        self.frontier[0].0
    }

    /// Least C at the smallest probed K.
    pub fn c_emp_at_k(&self) -> f64 {
        self.frontier[0].1
    }

    pub fn entry(&self, k: f64) -> Option<QiParams> {
        self.frontier
            .iter()
            .find(|(ek, _)| *ek == k)
            .map(|&(ek, c)| QiParams::new(ek, c).expect("frontier entries are valid parameters"))
    }
}

/// Check the sandwich inequality on each sampled pair; an empty result
/// means `f` is a `(K, C)`-quasi-isometry on the sample.
pub fn check_qi<M, D1, D2>(
    f: &M,
    d_dom: &D1,
    d_cod: &D2,
    params: QiParams,
    pairs: &[(Point, Point)],
    tol: f64,
) -> Result<Vec<PairViolation>>
where
    M: PointMap + ?Sized,
    D1: DistanceFn + ?Sized,
    D2: DistanceFn + ?Sized,
{
    let mut violations = Vec::new();
    for (x, y) in pairs {
        let rho = finite_distance(d_dom, x, y)?;
        let fx = f.apply(x)?;
        let fy = f.apply(y)?;
        let rho_image = finite_distance(d_cod, &fx, &fy)?;
        let upper = params.k() * rho + params.c();
        let lower = rho / params.k() - params.c();
        if rho_image > upper + tol {
            violations.push(PairViolation {
                x: x.clone(),
                y: y.clone(),
                rho,
                rho_image,
                side: Side::Upper,
                excess: rho_image - upper,
            });
        }
        if rho_image < lower - tol {
            violations.push(PairViolation {
                x: x.clone(),
                y: y.clone(),
                rho,
                rho_image,
                side: Side::Lower,
                excess: lower - rho_image,
            });
        }
    }
    Ok(violations)
}

/// For each grid `K`, the least additive constant
///
/// ```text
/// C(K) = max over pairs of max(0, rho_image - K rho, rho / K - rho_image)
/// ```
///
/// Pairs with x = y are skipped (both sides hold trivially for them).
/// [`check_qi`] with a returned entry and zero tolerance passes on the
/// same pairs.
pub fn estimate_qi<M, D1, D2>(
    f: &M,
    d_dom: &D1,
    d_cod: &D2,
    pairs: &[(Point, Point)],
    k_grid: &[f64],
) -> Result<QiEstimate>
where
    M: PointMap + ?Sized,
    D1: DistanceFn + ?Sized,
    D2: DistanceFn + ?Sized,
{
    if pairs.is_empty() {
        return Err(GeomError::InvalidArgument("empty pair sample".into()));
    }
    for &k in k_grid {
        if !(k.is_finite() && k >= 1.0) {
            return Err(GeomError::InvalidArgument(format!(
                "grid value K = {k} must be finite and >= 1"
            )));
        }
    }
    let mut legs = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        if x == y {
            continue;
        }
        let rho = finite_distance(d_dom, x, y)?;
        let fx = f.apply(x)?;
        let fy = f.apply(y)?;
        let rho_image = finite_distance(d_cod, &fx, &fy)?;
        legs.push((rho, rho_image));
    }
    let frontier = k_grid
        .iter()
        .map(|&k| {
            let c = legs
                .iter()
                .map(|&(rho, img)| (img - k * rho).max(rho / k - img).max(0.0))
                .fold(0.0, f64::max);
            (k, c)
        })
        .collect();
    Ok(QiEstimate { frontier })
}
