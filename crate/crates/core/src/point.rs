//! Points of the ambient Euclidean scenes.

use std::fmt;

use crate::error::{GeomError, Result};

/// A point of R^n with finite coordinates.
///
/// Construction validates the invariants (dimension >= 1, no NaN or
/// infinities) so every downstream operation can assume them.
#[derive(Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(GeomError::InvalidPoint("dimension must be >= 1".into()));
        }
        if let Some(bad) = coords.iter().find(|c| !c.is_finite()) {
            return Err(GeomError::InvalidPoint(format!(
                "non-finite coordinate {bad}"
            )));
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(coords.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn coord(&self, axis: usize) -> f64 {
        self.coords[axis]
    }

    /// Euclidean distance to `other`, assuming equal dimensions.
    ///
    /// Exactly symmetric: each squared difference is sign-free and the
    /// summation order does not depend on argument order.
    pub fn euclidean(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn checked_euclidean(&self, other: &Point) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self.euclidean(other))
    }

    /// Componentwise maximum absolute difference; used for "same point
    /// within tol" comparisons in checks.
    pub fn max_abs_diff(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{self}")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            // Debug form of f64: shortest round-trip, exponent notation
            // for extreme magnitudes.
            write!(f, "{c:?}")?;
        }
        write!(f, ")")
    }
}

/// 1-D point helper. Panics on non-finite input; intended for literals.
pub fn p1(x: f64) -> Point {
    Point::new(vec![x]).expect("finite coordinate")
}

/// 2-D point helper. Panics on non-finite input; intended for literals.
pub fn p2(x: f64, y: f64) -> Point {
    Point::new(vec![x, y]).expect("finite coordinates")
}

/// Axis-aligned box in R^n; bounds all sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct Aabb {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Aabb {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(GeomError::InvalidArgument(
                "box bounds must be non-empty and of equal dimension".into(),
            ));
        }
        for (axis, (l, h)) in lo.iter().zip(&hi).enumerate() {
            if !l.is_finite() || !h.is_finite() || l >= h {
                return Err(GeomError::InvalidArgument(format!(
                    "degenerate box on axis {axis}: [{l}, {h}]"
                )));
            }
        }
        Ok(Self { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn interval(&self, axis: usize) -> (f64, f64) {
        (self.lo[axis], self.hi[axis])
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && p.coords()
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(c, (l, h))| *c >= *l && *c <= *h)
    }
}

/// 2-D box helper.
pub fn aabb2(x: (f64, f64), y: (f64, f64)) -> Aabb {
    Aabb::new(vec![x.0, y.0], vec![x.1, y.1]).expect("valid box")
}
