//! The ball-quotient distance: collapse a closed ball to a point and
//! charge only the part of the segment that travels outside it.

use crate::error::{GeomError, Result};
use crate::metric::DistanceFn;
use crate::point::Point;
use crate::scene::BallScene;

/// Length of the intersection of segment `x y` with the ball.
///
/// Solves `|x + t (y - x) - center| = radius` and clamps the root
/// interval to `t` in `[0, 1]`; zero when the segment misses the ball.
pub fn chord_length(ball: &BallScene, x: &Point, y: &Point) -> Result<f64> {
    if x == y {
        return Err(GeomError::InvalidArgument(
            "chord of a degenerate segment (x = y)".into(),
        ));
    }
    if x.dim() != ball.dim() || y.dim() != ball.dim() {
        return Err(GeomError::DimensionMismatch {
            expected: ball.dim(),
            actual: if x.dim() != ball.dim() { x.dim() } else { y.dim() },
        });
    }
    let d: Vec<f64> = y
        .coords()
        .iter()
        .zip(x.coords())
        .map(|(yc, xc)| yc - xc)
        .collect();
    let m: Vec<f64> = x
        .coords()
        .iter()
        .zip(ball.center().coords())
        .map(|(xc, cc)| xc - cc)
        .collect();
    let a: f64 = d.iter().map(|v| v * v).sum();
    let b: f64 = 2.0 * d.iter().zip(&m).map(|(dv, mv)| dv * mv).sum::<f64>();
    let c: f64 = m.iter().map(|v| v * v).sum::<f64>() - ball.radius() * ball.radius();
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return Ok(0.0);
    }
    let sqrt_disc = disc.sqrt();
    let t_enter = ((-b - sqrt_disc) / (2.0 * a)).max(0.0);
    let t_exit = ((-b + sqrt_disc) / (2.0 * a)).min(1.0);
    Ok((t_exit - t_enter).max(0.0) * a.sqrt())
}

/// Quotient distance for points outside (or on) the ball:
/// the Euclidean distance minus the chord through the collapsed ball.
pub fn ball_sigma(ball: &BallScene, x: &Point, y: &Point) -> Result<f64> {
    let rho = x.checked_euclidean(y)?;
    let u = chord_length(ball, x, y)?;
    Ok((rho - u).max(0.0))
}

/// The quotient distance as a total distance function on the ambient
/// space, well defined on equivalence classes:
///
/// * both points in the ball: same class, distance 0;
/// * one inside: distance from the other point to the ball;
/// * both outside: [`ball_sigma`].
#[derive(Clone, Debug)]
pub struct BallQuotientDistance<'a> {
    pub ball: &'a BallScene,
}

impl DistanceFn for BallQuotientDistance<'_> {
    fn eval(&self, x: &Point, y: &Point) -> Result<f64> {
        let x_in = self.ball.contains(x, 0.0);
        let y_in = self.ball.contains(y, 0.0);
        match (x_in, y_in) {
            (true, true) => Ok(0.0),
            (true, false) => Ok(self.ball.center().checked_euclidean(y)? - self.ball.radius()),
            (false, true) => Ok(self.ball.center().checked_euclidean(x)? - self.ball.radius()),
            (false, false) => {
                if x == y {
                    Ok(0.0)
                } else {
                    ball_sigma(self.ball, x, y)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::{aabb2, p2};

    fn unit_disk() -> BallScene {
        BallScene::new(p2(0.0, 0.0), 1.0, aabb2((-12.0, 12.0), (-12.0, 12.0))).unwrap()
    }

    #[test]
    fn diameter_chord() {
        let d = unit_disk();
        assert!((chord_length(&d, &p2(-2.0, 0.0), &p2(2.0, 0.0)).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grazing_segment_has_full_chord() {
        let d = unit_disk();
        let u = chord_length(&d, &p2(-1.1, 0.0), &p2(1.1, 0.0)).unwrap();
        assert!((u - 2.0).abs() < 1e-12, "u = {u}");
    }

    #[test]
    fn segment_missing_the_disk_has_zero_chord() {
        let d = unit_disk();
        // Closest approach of this segment to the origin is ~1.074 > 1.
        let u = chord_length(&d, &p2(-1.1, 0.0), &p2(1.1, 10.0)).unwrap();
        assert_eq!(u, 0.0);

        // Point-line distance oracle: |cross(y-x, x-0)| / |y-x|.
        let (x, y) = (p2(-1.1, 0.0), p2(1.1, 10.0));
        let (dx, dy) = (y.coord(0) - x.coord(0), y.coord(1) - x.coord(1));
        let cross = (dx * (-x.coord(1)) - dy * (-x.coord(0))).abs();
        let approach = cross / (dx * dx + dy * dy).sqrt();
        assert!(approach > 1.0, "approach = {approach}");
    }

    #[test]
    fn quotient_distance_golden_values() {
        let d = unit_disk();
        let a = p2(-1.1, 0.0);
        let b = p2(1.1, 0.0);
        let c = p2(1.1, 10.0);
        let ab = ball_sigma(&d, &a, &b).unwrap();
        let bc = ball_sigma(&d, &b, &c).unwrap();
        let ac = ball_sigma(&d, &a, &c).unwrap();
        assert!((ab - 0.2).abs() < 1e-12, "ab = {ab}");
        assert!((bc - 10.0).abs() < 1e-12, "bc = {bc}");
        // Hand value by Pythagoras: sqrt(2.2^2 + 10^2).
        assert!((ac - 104.84_f64.sqrt()).abs() < 1e-12, "ac = {ac}");
        assert!((ac - 10.2391).abs() < 1e-3);
        // The strict triangle inequality fails on this triple; the
        // doubled one holds.
        assert!(ab + bc < ac);
        assert!(ac <= 2.0 * (ab + bc));
    }

    #[test]
    fn sigma_equals_rho_when_the_segment_misses() {
        let d = unit_disk();
        let x = p2(3.0, 3.0);
        let y = p2(5.0, 4.0);
        let s = ball_sigma(&d, &x, &y).unwrap();
        assert_eq!(s, x.euclidean(&y));
    }

    #[test]
    fn degenerate_segment_is_an_error() {
        let d = unit_disk();
        assert!(chord_length(&d, &p2(2.0, 0.0), &p2(2.0, 0.0)).is_err());
    }

    #[test]
    fn class_aware_distance_handles_interior_points() {
        let d = unit_disk();
        let q = BallQuotientDistance { ball: &d };
        assert_eq!(q.eval(&p2(0.1, 0.2), &p2(-0.3, 0.0)).unwrap(), 0.0);
        let v = q.eval(&p2(0.0, 0.5), &p2(4.0, 0.0)).unwrap();
        assert!((v - 3.0).abs() < 1e-12, "v = {v}");
        let w = q.eval(&p2(4.0, 0.0), &p2(0.0, 0.5)).unwrap();
        assert_eq!(v, w);
    }
}
