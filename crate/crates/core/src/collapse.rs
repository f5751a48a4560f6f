//! The collapsed distance on a strip scene.
//!
//! Collapsing a strip identifies every vertical fiber with the point
//! where it meets the center curve `T`. For classes `[x]`, `[y]` the
//! collapsed distance is
//!
//! ```text
//! rho_phi([x], [y]) = rho(x, y)                      off vicinity
//! rho_phi([x], [y]) = rho_p(x', y') + r_x + r_y      in vicinity
//! ```
//!
//! where `r_x` is the least distance from `x` to the strip, `x'` is the
//! T-representative of `x`'s fiber, `rho_p` is the path (arc-length)
//! metric along `T`, and a pair is *in the vicinity* of the strip when
//! `rho(x, y) > r_x + r_y` (strictly).
//!
//! Representatives of points outside the strip go through the nearest
//! strip point: `x' = fiber_project(nearest_point(x))`. That is the only
//! reading that keeps `rho_p(x', y')` defined for all pairs.

use crate::curve::nearest_on_graph;
use crate::error::{GeomError, Result};
use crate::metric::{BcParams, DistanceFn};
use crate::numerics::adaptive_simpson_panels;
use crate::point::{p2, Point};
use crate::qi::QiParams;
use crate::scene::{Scene, StripScene, MEMBERSHIP_TOL};

/// Relative tolerance of the arc-length quadrature.
pub const QUAD_REL_TOL: f64 = 1e-10;
/// Recursion cap of the arc-length quadrature; a breach is an error.
pub const QUAD_MAX_DEPTH: u32 = 48;
/// Bracket width at which nearest-point refinement stops.
pub const REFINE_TOL: f64 = 1e-12;
/// How far off the center curve a "point on T" may sit.
pub const ON_T_TOL: f64 = 1e-6;

/// A strip scene together with the constants of its collapse: the
/// longest fiber length, the slope bound of the transversal, and the
/// Lipschitz constant of the identity from `(T, rho)` to `(T, rho_p)`.
#[derive(Clone, Debug)]
pub struct CollapsedSpace {
    scene: StripScene,
    lipschitz: f64,
    path_ratio: f64,
    ambient: BcParams,
}

/// Everything [`CollapsedSpace::collapsed_distance`] computes for a pair.
#[derive(Clone, Debug)]
pub struct CollapsedDistanceBreakdown {
    /// Ambient distance rho(x, y).
    pub rho: f64,
    /// rho(x, y) > r_x + r_y, strictly.
    pub in_vicinity: bool,
    pub r_x: f64,
    pub r_y: f64,
    pub x_prime: Point,
    pub y_prime: Point,
    /// Path distance along `T`; present only for vicinity pairs.
    pub rho_p: Option<f64>,
    pub rho_phi: f64,
}

/// Per-point data reused when a point participates in many pairs: its
/// distance to the strip, its T-representative, and the representative's
/// signed arc-length coordinate along the center curve.
#[derive(Clone, Debug)]
pub struct PointProfile {
    pub point: Point,
    pub r: f64,
    pub nearest: Point,
    pub rep: Point,
    pub rep_t: f64,
    pub arc: f64,
}

impl CollapsedSpace {
    /// Collapse a strip inside a Euclidean (ordinary metric) ambient.
    pub fn new(scene: StripScene) -> Result<Self> {
        Self::with_ambient(scene, BcParams::metric())
    }

    /// Collapse a strip whose ambient satisfies a relaxed triangle
    /// inequality with the given parameters.
    pub fn with_ambient(scene: StripScene, ambient: BcParams) -> Result<Self> {
        let (x_lo, x_hi) = scene.domain().interval(0);
        let lipschitz = scene.center().lipschitz_bound(x_lo, x_hi);
        if !lipschitz.is_finite() {
            return Err(GeomError::Scene(
                "center curve has no finite slope bound on the domain".into(),
            ));
        }
        let path_ratio = (1.0 + lipschitz * lipschitz).sqrt();
        Ok(Self {
            scene,
            lipschitz,
            path_ratio,
            ambient,
        })
    }

    pub fn scene(&self) -> &StripScene {
        &self.scene
    }

    /// Slope bound `L` of the center curve over the scene domain.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// `K_L = sqrt(1 + L^2)`: the arc-length integrand bound, which is
    /// the Lipschitz constant of the identity `(T, rho) -> (T, rho_p)`
    /// for a graph transversal.
    pub fn path_ratio(&self) -> f64 {
        self.path_ratio
    }

    pub fn ambient(&self) -> BcParams {
        self.ambient
    }

    /// Length of the longest fiber (all strip fibers are equal).
    pub fn max_fiber_length(&self) -> f64 {
        self.scene.fiber_length()
    }

    /// Where the fiber through `x` meets the center curve. `x` must be
    /// inside the strip (within tolerance).
    pub fn fiber_project(&self, x: &Point) -> Result<Point> {
        self.check_dim(x)?;
        if !self.scene.contains(x, MEMBERSHIP_TOL) {
            return Err(GeomError::OutsideDomain {
                point: x.clone(),
                region: "the strip".into(),
            });
        }
        let t = x.coord(0);
        Ok(p2(t, self.scene.center().value(t)))
    }

    /// Least distance from `x` to the strip and the strip point
    /// realizing it.
    ///
    /// Points inside the strip return `(0, x)`. For a point outside,
    /// the nearest strip point lies on the nearer boundary graph; it is
    /// found by bracketing all local minima of the distance to that
    /// graph on a coarse grid and refining each bracket by golden
    /// section.
    pub fn nearest_distance_to_set(&self, x: &Point) -> Result<(f64, Point)> {
        self.check_dim(x)?;
        if self.scene.contains(x, 0.0) {
            return Ok((0.0, x.clone()));
        }
        let (px, py) = (x.coord(0), x.coord(1));
        let above = py > self.scene.center().value(px) + self.scene.half_width_above();
        let scene = self.scene.clone();
        let boundary = move |t: f64| {
            if above {
                scene.upper_boundary(t)
            } else {
                scene.lower_boundary(t)
            }
        };
        // Boundary graphs are the center curve shifted vertically, so
        // they share its derivative.
        let curve = self.scene.center().clone();
        let boundary_slope = move |t: f64| curve.derivative(t);
        // The vertical drop bounds the answer, so the minimizing abscissa
        // lies within that radius of x.
        let vertical = (py - boundary(px)).abs();
        let spacing = self.scene.center().scan_spacing();
        let (t, r) = nearest_on_graph(
            &boundary,
            &boundary_slope,
            px,
            py,
            px - vertical,
            px + vertical,
            spacing.min(vertical.max(spacing * 1e-3)),
        );
        if !r.is_finite() || !t.is_finite() {
            return Err(GeomError::Numerical(format!(
                "nearest-point search failed to converge at {x}"
            )));
        }
        Ok((r, p2(t, boundary(t))))
    }

    /// The T-representative of the fiber through `x`'s nearest strip
    /// point (which is `x` itself when `x` is inside the strip).
    pub fn collapse_representative(&self, x: &Point) -> Result<Point> {
        if self.scene.contains(x, MEMBERSHIP_TOL) {
            return self.fiber_project(x);
        }
        let (_, nearest) = self.nearest_distance_to_set(x)?;
        let t = nearest.coord(0);
        Ok(p2(t, self.scene.center().value(t)))
    }

    fn arc_integrand(&self) -> impl Fn(f64) -> f64 + '_ {
        move |t: f64| {
            let d = self.scene.center().derivative(t);
            (1.0 + d * d).sqrt()
        }
    }

    /// Arc length of the center curve between the abscissae of two
    /// points on `T`, by adaptive quadrature. Symmetric by construction
    /// (always integrates from the lower abscissa to the higher one).
    pub fn path_metric(&self, x_prime: &Point, y_prime: &Point) -> Result<f64> {
        self.check_dim(x_prime)?;
        self.check_dim(y_prime)?;
        for p in [x_prime, y_prime] {
            let off = (p.coord(1) - self.scene.center().value(p.coord(0))).abs();
            if off > ON_T_TOL {
                return Err(GeomError::OutsideDomain {
                    point: p.clone(),
                    region: format!("the transversal curve (off by {off:.3e})"),
                });
            }
        }
        let (a, b) = if x_prime.coord(0) <= y_prime.coord(0) {
            (x_prime.coord(0), y_prime.coord(0))
        } else {
            (y_prime.coord(0), x_prime.coord(0))
        };
        let panel = self.scene.center().quadrature_panel();
        adaptive_simpson_panels(&self.arc_integrand(), a, b, QUAD_REL_TOL, QUAD_MAX_DEPTH, panel)
    }

    /// Signed arc-length coordinate of abscissa `t` (zero at `t = 0`).
    /// Path distances along `T` are differences of arc coordinates.
    pub fn arc_coordinate(&self, t: f64) -> Result<f64> {
        let panel = self.scene.center().quadrature_panel();
        if t >= 0.0 {
            adaptive_simpson_panels(&self.arc_integrand(), 0.0, t, QUAD_REL_TOL, QUAD_MAX_DEPTH, panel)
        } else {
            Ok(-adaptive_simpson_panels(
                &self.arc_integrand(),
                t,
                0.0,
                QUAD_REL_TOL,
                QUAD_MAX_DEPTH,
                panel,
            )?)
        }
    }

    /// Is the pair `{x, y}` in the vicinity of the strip, i.e. is
    /// `rho(x, y) > r_x + r_y` strictly? Symmetric in its arguments.
    pub fn in_vicinity(&self, x: &Point, y: &Point) -> Result<bool> {
        let rho = x.checked_euclidean(y)?;
        let (r_x, _) = self.nearest_distance_to_set(x)?;
        let (r_y, _) = self.nearest_distance_to_set(y)?;
        Ok(rho > r_x + r_y)
    }

    /// The collapsed distance with its full breakdown.
    pub fn collapsed_distance(&self, x: &Point, y: &Point) -> Result<CollapsedDistanceBreakdown> {
        let rho = x.checked_euclidean(y)?;
        let (r_x, x_near) = self.nearest_distance_to_set(x)?;
        let (r_y, y_near) = self.nearest_distance_to_set(y)?;
        let x_prime = self.representative_of_strip_point(&x_near)?;
        let y_prime = self.representative_of_strip_point(&y_near)?;
        let in_vicinity = rho > r_x + r_y;
        let (rho_p, rho_phi) = if in_vicinity {
            let rho_p = self.path_metric(&x_prime, &y_prime)?;
            (Some(rho_p), rho_p + (r_x + r_y))
        } else {
            (None, rho)
        };
        Ok(CollapsedDistanceBreakdown {
            rho,
            in_vicinity,
            r_x,
            r_y,
            x_prime,
            y_prime,
            rho_p,
            rho_phi,
        })
    }

    /// Representative of a point already known to lie in the strip
    /// (a nearest-point result or an interior point).
    fn representative_of_strip_point(&self, p: &Point) -> Result<Point> {
        let t = p.coord(0);
        Ok(p2(t, self.scene.center().value(t)))
    }

    /// Precompute the per-point quantities pair evaluations reuse.
    pub fn profile(&self, x: &Point) -> Result<PointProfile> {
        let (r, nearest) = self.nearest_distance_to_set(x)?;
        let rep = self.representative_of_strip_point(&nearest)?;
        let rep_t = rep.coord(0);
        let arc = self.arc_coordinate(rep_t)?;
        Ok(PointProfile {
            point: x.clone(),
            r,
            nearest,
            rep,
            rep_t,
            arc,
        })
    }

    /// Breakdown of a pair from precomputed profiles. Path distances are
    /// differences of arc coordinates, which agrees with
    /// [`Self::path_metric`] to within the quadrature tolerance.
    pub fn breakdown_from_profiles(
        &self,
        px: &PointProfile,
        py: &PointProfile,
    ) -> CollapsedDistanceBreakdown {
        let rho = px.point.euclidean(&py.point);
        let in_vicinity = rho > px.r + py.r;
        let (rho_p, rho_phi) = if in_vicinity {
            let rho_p = (px.arc - py.arc).abs();
            (Some(rho_p), rho_p + (px.r + py.r))
        } else {
            (None, rho)
        };
        CollapsedDistanceBreakdown {
            rho,
            in_vicinity,
            r_x: px.r,
            r_y: py.r,
            x_prime: px.rep.clone(),
            y_prime: py.rep.clone(),
            rho_p,
            rho_phi,
        }
    }

    /// Empirical slope and path-ratio constants from a sample of
    /// abscissae on the transversal:
    ///
    /// * `l_emp`  = sup |center(s) - center(t)| / |s - t|
    /// * `kl_emp` = sup rho_p / rho over the induced T-point pairs
    pub fn lipschitz_estimates(&self, abscissae: &[f64]) -> Result<(f64, f64)> {
        let mut distinct = false;
        for w in abscissae.windows(2) {
            if w[0] != w[1] {
                distinct = true;
            }
        }
        if abscissae.len() < 2 || !distinct {
            return Err(GeomError::InvalidArgument(
                "need at least two distinct abscissae".into(),
            ));
        }
        let curve = self.scene.center();
        let arcs: Vec<f64> = abscissae
            .iter()
            .map(|&t| self.arc_coordinate(t))
            .collect::<Result<_>>()?;
        let mut l_emp: f64 = 0.0;
        let mut kl_emp: f64 = 0.0;
        for (i, &s) in abscissae.iter().enumerate() {
            for (j, &t) in abscissae.iter().enumerate().skip(i + 1) {
                if s == t {
                    continue;
                }
                let dv = (curve.value(s) - curve.value(t)).abs();
                let dt = (s - t).abs();
                l_emp = l_emp.max(dv / dt);
                let rho = (dt * dt + dv * dv).sqrt();
                let rho_p = (arcs[i] - arcs[j]).abs();
                kl_emp = kl_emp.max(rho_p / rho);
            }
        }
        Ok((l_emp, kl_emp))
    }

    fn check_dim(&self, p: &Point) -> Result<()> {
        if p.dim() != 2 {
            return Err(GeomError::DimensionMismatch {
                expected: 2,
                actual: p.dim(),
            });
        }
        Ok(())
    }
}

/// Length of the longest fiber of a scene: the common fiber length for
/// strips, the diameter for balls.
pub fn max_fiber_length(scene: &Scene) -> f64 {
    match scene {
        Scene::Strip(s) => s.fiber_length(),
        Scene::Ball(b) => b.fiber_length(),
    }
}

/// Nearest distance to the collapsed set of either scene kind.
pub fn nearest_distance_to_scene(scene: &Scene, x: &Point) -> Result<(f64, Point)> {
    match scene {
        Scene::Strip(s) => CollapsedSpace::new(s.clone())?.nearest_distance_to_set(x),
        Scene::Ball(b) => b.nearest_distance(x),
    }
}

/// The collapsed distance as a distance function on ambient points.
#[derive(Clone, Debug)]
pub struct CollapsedMetric<'a> {
    pub space: &'a CollapsedSpace,
}

impl DistanceFn for CollapsedMetric<'_> {
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        Ok(self.space.collapsed_distance(x, y)?.rho_phi)
    }
}

/// The constants that make the collapse map a quasi-isometry:
///
/// ```text
/// K = b^3 max(K_L, 1) + 1        C = K (3 b^2 f + b c + c)
/// ```
///
/// with `f` the longest fiber length. The multiplicative constant is
/// driven by the path-ratio bound `K_L` of the transversal; see
/// [`quasi_isometry_constants_from_slope`] for the raw-slope variant.
pub fn quasi_isometry_constants(space: &CollapsedSpace) -> QiParams {
    qi_from_mult(space, space.path_ratio().max(1.0))
}

/// Variant of [`quasi_isometry_constants`] that plugs the raw slope
/// bound `L` into the same formulas. With a flat transversal (`L = 0`)
/// this yields `K = 1`, which hand-checkable flat-strip pairs violate;
/// it is reported alongside the sound constants, not used for checking.
pub fn quasi_isometry_constants_from_slope(space: &CollapsedSpace) -> QiParams {
    qi_from_mult(space, space.lipschitz())
}

fn qi_from_mult(space: &CollapsedSpace, mult: f64) -> QiParams {
    let b = space.ambient().b();
    let c = space.ambient().c();
    let f = space.max_fiber_length();
    let k = b * b * b * mult + 1.0;
    let cc = k * (3.0 * b * b * f + b * c + c);
    QiParams::new(k, cc).expect("derived constants are in the valid domain")
}

/// A one-sided affine bound `value <= mult * rho + add`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearBound {
    pub mult: f64,
    pub add: f64,
}

/// Theoretical constants of the collapse, per statement.
#[derive(Clone, Copy, Debug)]
pub struct CollapseBounds {
    /// On T-pairs: rho_phi <= transversal_ratio * rho. Equals `K_L`.
    pub transversal_ratio: f64,
    /// Representative shift: rho(x', y') <= b^2 rho + (b^2 f + b c + c)
    /// for strip pairs.
    pub rep_shift: LinearBound,
    /// Metric-ambient form of the shift bound: rho(x', y') <= rho + 2 f.
    pub rep_shift_metric_add: f64,
    /// Strip pairs with rho >= f:
    /// rho_phi <= b^2 K_L rho + K_L (b^2 f + b c + c).
    pub upper_far: LinearBound,
    /// Strip pairs with rho < f:
    /// rho_phi <= b^2 K_L rho + K_L (3 b^2 f + b c + c).
    pub upper_near: LinearBound,
    /// All pairs: rho_phi <= (b^2 K_L + 1) rho + (b^2 f + b c + c).
    pub upper_all: LinearBound,
    /// All pairs: rho / lower_divisor - lower_offset <= rho_phi, with
    /// divisor b^3 and offset 2 b f + (c (2b + 1) + 1) / b^2 (points of
    /// one fiber are at most f apart in a Euclidean scene).
    pub lower_divisor: f64,
    pub lower_offset: f64,
}

pub fn collapse_bounds(space: &CollapsedSpace) -> CollapseBounds {
    let b = space.ambient().b();
    let c = space.ambient().c();
    let f = space.max_fiber_length();
    let kl = space.path_ratio();
    let b2 = b * b;
    let shift_add = b2 * f + b * c + c;
    CollapseBounds {
        transversal_ratio: kl,
        rep_shift: LinearBound {
            mult: b2,
            add: shift_add,
        },
        rep_shift_metric_add: 2.0 * f,
        upper_far: LinearBound {
            mult: b2 * kl,
            add: kl * shift_add,
        },
        upper_near: LinearBound {
            mult: b2 * kl,
            add: kl * (3.0 * b2 * f + b * c + c),
        },
        upper_all: LinearBound {
            mult: b2 * kl + 1.0,
            add: shift_add,
        },
        lower_divisor: b * b2,
        lower_offset: 2.0 * b * f + (c * (2.0 * b + 1.0) + 1.0) / b2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveSpec;
    use crate::point::aabb2;
    use crate::scene::builtin_scene;

    fn strip_space(name: &str) -> CollapsedSpace {
        match builtin_scene(name) {
            Some(Scene::Strip(s)) => CollapsedSpace::new(s).unwrap(),
            _ => panic!("not a strip builtin: {name}"),
        }
    }

    #[test]
    fn fiber_projection_examples() {
        let sine = strip_space("sine_strip");
        let p = sine.fiber_project(&p2(0.0, 0.5)).unwrap();
        assert!(p.max_abs_diff(&p2(0.0, 0.0)) < 1e-12);

        let flat = strip_space("flat_strip");
        let p = flat.fiber_project(&p2(3.0, -0.7)).unwrap();
        assert!(p.max_abs_diff(&p2(3.0, 0.0)) < 1e-12);

        // sin(pi/2) = 1 and 1.9 <= 1 + 1, so this point is in the strip.
        let top = sine
            .fiber_project(&p2(std::f64::consts::FRAC_PI_2, 1.9))
            .unwrap();
        assert!(top.max_abs_diff(&p2(std::f64::consts::FRAC_PI_2, 1.0)) < 1e-12);

        // Idempotent: a projected point projects to itself.
        assert_eq!(sine.fiber_project(&top).unwrap(), top);
    }

    #[test]
    fn fiber_projection_rejects_outside_points() {
        let sine = strip_space("sine_strip");
        let err = sine.fiber_project(&p2(0.0, 5.0)).unwrap_err();
        assert!(matches!(err, GeomError::OutsideDomain { .. }));
    }

    #[test]
    fn nearest_distance_flat_strip() {
        let flat = strip_space("flat_strip");
        let (r, s) = flat.nearest_distance_to_set(&p2(0.0, 5.0)).unwrap();
        assert!((r - 4.0).abs() < 1e-9, "r = {r}");
        assert!(s.max_abs_diff(&p2(0.0, 1.0)) < 1e-6);

        let (r0, s0) = flat.nearest_distance_to_set(&p2(2.0, 0.3)).unwrap();
        assert_eq!(r0, 0.0);
        assert_eq!(s0, p2(2.0, 0.3));
    }

    #[test]
    fn nearest_distance_sine_strip_beats_the_vertical_drop() {
        let sine = strip_space("sine_strip");
        let (r, s) = sine.nearest_distance_to_set(&p2(0.0, 5.0)).unwrap();
        // The upper boundary rises toward y = 2 near t = pi/2.
        assert!(r < 4.0, "r = {r}");
        assert!(s.coord(0) > 0.0, "nearest point should shift toward the crest");

        // Dense-grid oracle with the same refinement.
        let boundary = |t: f64| t.sin() + 1.0;
        let mut best = (0.0_f64, f64::INFINITY);
        let mut t = -4.0;
        while t <= 4.0 {
            let d2 = t * t + (5.0 - boundary(t)).powi(2);
            if d2 < best.1 {
                best = (t, d2);
            }
            t += 1e-4;
        }
        let (_, refined) = crate::numerics::golden_section_min(
            |t| t * t + (5.0 - boundary(t)).powi(2),
            best.0 - 1e-4,
            best.0 + 1e-4,
            1e-12,
        );
        assert!((r - refined.sqrt()).abs() < 1e-6, "r = {r} vs oracle {}", refined.sqrt());
    }

    #[test]
    fn representative_examples() {
        let flat = strip_space("flat_strip");
        let rep = flat.collapse_representative(&p2(0.0, 5.0)).unwrap();
        assert!(rep.max_abs_diff(&p2(0.0, 0.0)) < 1e-6);

        // Inside the strip the representative is the fiber projection.
        let sine = strip_space("sine_strip");
        let inside = p2(1.3, 0.7);
        assert_eq!(
            sine.collapse_representative(&inside).unwrap(),
            sine.fiber_project(&inside).unwrap()
        );
    }

    #[test]
    fn path_metric_flat_segment() {
        let flat = strip_space("flat_strip");
        let v = flat.path_metric(&p2(0.0, 0.0), &p2(3.0, 0.0)).unwrap();
        assert!((v - 3.0).abs() < 1e-12, "v = {v}");
        // Symmetry is exact: the integral always runs left to right.
        assert_eq!(v, flat.path_metric(&p2(3.0, 0.0), &p2(0.0, 0.0)).unwrap());
    }

    #[test]
    fn path_metric_sine_arc_matches_the_frozen_value() {
        let sine = strip_space("sine_strip");
        let v = sine
            .path_metric(&p2(0.0, 0.0), &p2(2.0 * std::f64::consts::PI, 0.0))
            .unwrap();
        // Full-period arc length of sin: 7.6403955780554 (elliptic-integral
        // value), frozen here to the precision the quadrature guarantees.
        assert!((v - 7.640_395_578_055_4).abs() < 1e-8, "v = {v}");
        assert!((v - 7.640_396).abs() < 1e-5);
    }

    #[test]
    fn path_metric_rejects_points_off_the_curve() {
        let sine = strip_space("sine_strip");
        let err = sine.path_metric(&p2(0.0, 0.5), &p2(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, GeomError::OutsideDomain { .. }));
    }

    #[test]
    fn path_metric_dominates_chord() {
        let sine = strip_space("sine_strip");
        for (a, b) in [(0.0, 1.0), (-2.0, 3.5), (1.0, 29.0)] {
            let xa = p2(a, a.sin());
            let xb = p2(b, b.sin());
            let arc = sine.path_metric(&xa, &xb).unwrap();
            assert!(arc >= xa.euclidean(&xb) - 1e-8);
        }
    }

    #[test]
    fn cos2x_arc_respects_both_integrand_bounds() {
        let space = strip_space("cos2x_strip");
        let curve = space.scene().center();
        for (a, b) in [(0.0, 0.7), (-3.0, 2.0), (5.0, 11.0)] {
            let xa = p2(a, curve.value(a));
            let xb = p2(b, curve.value(b));
            let arc = space.path_metric(&xa, &xb).unwrap();
            let rho = xa.euclidean(&xb);
            assert!(arc <= 17.0_f64.sqrt() * rho + 1e-9);
            assert!(arc <= 5.0_f64.sqrt() * (b - a).abs() + 1e-9);
        }
    }

    #[test]
    fn vicinity_examples() {
        let flat = strip_space("flat_strip");
        let x = p2(0.0, 5.0);
        assert!(!flat.in_vicinity(&x, &x).unwrap(), "x = y is never in the vicinity");
        assert!(flat.in_vicinity(&x, &p2(9.0, 5.0)).unwrap());
        // rho = 8 equals r_x + r_y = 8: the strict inequality fails.
        assert!(!flat.in_vicinity(&x, &p2(8.0, 5.0)).unwrap());
    }

    #[test]
    fn collapsed_distance_flat_strip_hand_values() {
        let flat = strip_space("flat_strip");

        let b = flat.collapsed_distance(&p2(0.0, 5.0), &p2(9.0, 5.0)).unwrap();
        assert!(b.in_vicinity);
        assert!((b.rho_phi - 17.0).abs() < 1e-9, "rho_phi = {}", b.rho_phi);
        assert!((b.r_x - 4.0).abs() < 1e-9);
        assert!((b.r_y - 4.0).abs() < 1e-9);
        assert!(b.x_prime.max_abs_diff(&p2(0.0, 0.0)) < 1e-6);
        assert!(b.y_prime.max_abs_diff(&p2(9.0, 0.0)) < 1e-6);
        assert!((b.rho_p.unwrap() - 9.0).abs() < 1e-9);

        // Both points inside the strip: r = 0, pure path distance.
        let b = flat
            .collapsed_distance(&p2(0.0, 0.5), &p2(4.0, -0.5))
            .unwrap();
        assert!(b.in_vicinity);
        assert!((b.rho_phi - 4.0).abs() < 1e-9, "rho_phi = {}", b.rho_phi);

        // Boundary pair: off vicinity, so the distance is unchanged.
        let b = flat.collapsed_distance(&p2(0.0, 5.0), &p2(8.0, 5.0)).unwrap();
        assert!(!b.in_vicinity);
        assert_eq!(b.rho_phi, b.rho);
    }

    #[test]
    fn collapsed_distance_is_exactly_symmetric() {
        let sine = strip_space("sine_strip");
        let pairs = [
            (p2(0.3, 4.0), p2(7.0, -3.0)),
            (p2(-2.0, 0.5), p2(2.0, 0.6)),
            (p2(-10.0, -8.0), p2(12.0, 9.0)),
        ];
        for (x, y) in pairs {
            let fwd = sine.collapsed_distance(&x, &y).unwrap();
            let bwd = sine.collapsed_distance(&y, &x).unwrap();
            assert_eq!(fwd.rho_phi, bwd.rho_phi);
            assert_eq!(fwd.in_vicinity, bwd.in_vicinity);
        }
    }

    #[test]
    fn same_fiber_points_collapse_to_distance_zero() {
        let flat = strip_space("flat_strip");
        let b = flat
            .collapsed_distance(&p2(2.0, 0.5), &p2(2.0, -0.5))
            .unwrap();
        assert!(b.in_vicinity);
        assert!(b.rho_phi.abs() < 1e-12);
    }

    #[test]
    fn profiles_agree_with_the_direct_operation() {
        let sine = strip_space("sine_strip");
        let pts = [p2(0.3, 4.0), p2(7.0, -3.0), p2(-2.0, 0.5), p2(6.0, 1.2)];
        let profiles: Vec<_> = pts.iter().map(|p| sine.profile(p).unwrap()).collect();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let direct = sine.collapsed_distance(&pts[i], &pts[j]).unwrap();
                let cached = sine.breakdown_from_profiles(&profiles[i], &profiles[j]);
                assert_eq!(direct.in_vicinity, cached.in_vicinity);
                assert!(
                    (direct.rho_phi - cached.rho_phi).abs() < 1e-8,
                    "direct {} vs cached {}",
                    direct.rho_phi,
                    cached.rho_phi
                );
            }
        }
    }

    #[test]
    fn fiber_lengths() {
        assert_eq!(strip_space("sine_strip").max_fiber_length(), 2.0);
        let asym = StripScene::new(
            CurveSpec::Constant { level: 0.0 },
            0.5,
            1.5,
            aabb2((-5.0, 5.0), (-5.0, 5.0)),
        )
        .unwrap();
        assert_eq!(CollapsedSpace::new(asym).unwrap().max_fiber_length(), 2.0);
        let ball = builtin_scene("unit_ball").unwrap();
        assert_eq!(max_fiber_length(&ball), 2.0);
    }

    #[test]
    fn quasi_isometry_constants_examples() {
        let sine = strip_space("sine_strip");
        let qi = quasi_isometry_constants(&sine);
        let sqrt2 = 2.0_f64.sqrt();
        assert!((qi.k() - (sqrt2 + 1.0)).abs() < 1e-12);
        assert!((qi.c() - (sqrt2 + 1.0) * 6.0).abs() < 1e-12);

        let flat = strip_space("flat_strip");
        let qi = quasi_isometry_constants(&flat);
        assert_eq!((qi.k(), qi.c()), (2.0, 12.0));

        // Raw-slope variant: L = 1 gives the same (2, 12); L = 0 gives
        // the unusable (1, 6), which is reported but never checked.
        let slope = quasi_isometry_constants_from_slope(&sine);
        assert_eq!((slope.k(), slope.c()), (2.0, 12.0));
        let slope = quasi_isometry_constants_from_slope(&flat);
        assert_eq!((slope.k(), slope.c()), (1.0, 6.0));
    }

    #[test]
    fn collapse_bounds_examples() {
        let flat = strip_space("flat_strip");
        let bounds = collapse_bounds(&flat);
        assert_eq!(bounds.transversal_ratio, 1.0);
        assert_eq!(bounds.rep_shift, LinearBound { mult: 1.0, add: 2.0 });
        assert_eq!(bounds.rep_shift_metric_add, 4.0);
        assert_eq!(bounds.upper_all, LinearBound { mult: 2.0, add: 2.0 });
        assert_eq!((bounds.lower_divisor, bounds.lower_offset), (1.0, 5.0));

        let sine = strip_space("sine_strip");
        let bounds = collapse_bounds(&sine);
        let sqrt2 = 2.0_f64.sqrt();
        assert!((bounds.transversal_ratio - sqrt2).abs() < 1e-12);
        assert!((bounds.upper_far.add - sqrt2 * 2.0).abs() < 1e-12);
        assert!((bounds.upper_near.add - sqrt2 * 6.0).abs() < 1e-12);
    }

    #[test]
    fn lipschitz_estimates_examples() {
        let flat = strip_space("flat_strip");
        let samples: Vec<f64> = (0..40).map(|i| -10.0 + i as f64 * 0.5).collect();
        let (l, kl) = flat.lipschitz_estimates(&samples).unwrap();
        assert_eq!(l, 0.0);
        assert!((kl - 1.0).abs() < 1e-9);

        let sine = strip_space("sine_strip");
        let (l, kl) = sine.lipschitz_estimates(&samples).unwrap();
        assert!(l <= 1.0 + 1e-9, "l = {l}");
        assert!(kl <= 2.0_f64.sqrt() + 1e-9, "kl = {kl}");

        let cos2x = strip_space("cos2x_strip");
        let (l, kl) = cos2x.lipschitz_estimates(&samples).unwrap();
        assert!(l <= 2.0 + 1e-9);
        assert!(kl <= 5.0_f64.sqrt() + 1e-9, "kl = {kl}");
        assert!(kl <= 17.0_f64.sqrt());

        // Analytic path ratio stays under the cruder sqrt(1 + 4 L^2).
        let l_bound = cos2x.lipschitz();
        assert!(cos2x.path_ratio() <= (1.0 + 4.0 * l_bound * l_bound).sqrt());

        assert!(flat.lipschitz_estimates(&[1.0, 1.0, 1.0]).is_err());
    }
}
