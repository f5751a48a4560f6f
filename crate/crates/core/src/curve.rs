//! Transversal curves: graphs of Lipschitz functions over the x-axis.

use crate::error::{GeomError, Result};
use crate::numerics::golden_section_min;

/// A curve `t -> f(t)` with an analytic derivative, used as the center
/// line of a strip scene.
#[derive(Clone, Debug, PartialEq)]
pub enum CurveSpec {
    Constant {
        level: f64,
    },
    /// `t -> amplitude * sin(frequency * t + phase) + offset`
    Sinusoid {
        amplitude: f64,
        frequency: f64,
        phase: f64,
        offset: f64,
    },
    /// Coefficients in ascending degree order; evaluated on the scene
    /// domain only.
    Polynomial {
        coefficients: Vec<f64>,
    },
}

impl CurveSpec {
    pub fn validate(&self) -> Result<()> {
        let finite = match self {
            CurveSpec::Constant { level } => level.is_finite(),
            CurveSpec::Sinusoid {
                amplitude,
                frequency,
                phase,
                offset,
            } => [amplitude, frequency, phase, offset]
                .iter()
                .all(|v| v.is_finite()),
            CurveSpec::Polynomial { coefficients } => {
                !coefficients.is_empty() && coefficients.iter().all(|c| c.is_finite())
            }
        };
        if finite {
            Ok(())
        } else {
            Err(GeomError::Scene(
                "curve parameters must be finite (and a polynomial needs coefficients)".into(),
            ))
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            CurveSpec::Constant { level } => *level,
            CurveSpec::Sinusoid {
                amplitude,
                frequency,
                phase,
                offset,
            } => amplitude * (frequency * t + phase).sin() + offset,
            CurveSpec::Polynomial { coefficients } => horner(coefficients, t),
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self {
            CurveSpec::Constant { .. } => 0.0,
            CurveSpec::Sinusoid {
                amplitude,
                frequency,
                phase,
                ..
            } => amplitude * frequency * (frequency * t + phase).cos(),
            CurveSpec::Polynomial { coefficients } => horner(&differentiate(coefficients), t),
        }
    }

    /// Exact bound on |f'| over `[lo, hi]`.
    ///
    /// Constant: 0. Sinusoid: |amplitude * frequency|. Polynomial: the
    /// derivative's extrema are located by scanning the second
    /// derivative for roots, so the bound is attained at a root of f''
    /// or an interval endpoint.
    pub fn lipschitz_bound(&self, lo: f64, hi: f64) -> f64 {
        match self {
            CurveSpec::Constant { .. } => 0.0,
            CurveSpec::Sinusoid {
                amplitude,
                frequency,
                ..
            } => (amplitude * frequency).abs(),
            CurveSpec::Polynomial { coefficients } => {
                let d1 = differentiate(coefficients);
                let d2 = differentiate(&d1);
                let mut candidates = roots_in_interval(&d2, lo, hi);
                candidates.push(lo);
                candidates.push(hi);
                candidates
                    .into_iter()
                    .map(|t| horner(&d1, t).abs())
                    .fold(0.0, f64::max)
            }
        }
    }

    /// Grid spacing for bracketing minima of point-to-curve distance.
    /// Oscillating boundaries need a grid finer than a quarter period.
    pub(crate) fn scan_spacing(&self) -> f64 {
        match self {
            CurveSpec::Sinusoid { frequency, .. } => {
                (0.1_f64).min(1.0 / (4.0 * frequency.abs().max(1.0)))
            }
            _ => 0.1,
        }
    }

    /// Largest quadrature panel that stays safely below the curve's
    /// oscillation scale (an eighth of a period for sinusoids).
    pub(crate) fn quadrature_panel(&self) -> f64 {
        match self {
            CurveSpec::Sinusoid { frequency, .. } => {
                let period = std::f64::consts::TAU / frequency.abs().max(f64::MIN_POSITIVE);
                (0.5_f64).min(period / 8.0)
            }
            _ => 0.5,
        }
    }
}

fn horner(coefficients: &[f64], t: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn differentiate(coefficients: &[f64]) -> Vec<f64> {
    if coefficients.len() <= 1 {
        return vec![0.0];
    }
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| i as f64 * c)
        .collect()
}

/// All real roots of a polynomial inside `[lo, hi]`, located by a dense
/// sign-change scan refined with bisection. Good enough for the low
/// degrees scene files use.
fn roots_in_interval(coefficients: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let degree = coefficients.len().saturating_sub(1);
    if degree == 0 || hi <= lo {
        return Vec::new();
    }
    let n = (256 * degree.max(1)).min(65_536);
    let step = (hi - lo) / n as f64;
    let mut roots = Vec::new();
    let mut prev_t = lo;
    let mut prev_v = horner(coefficients, lo);
    if prev_v == 0.0 {
        roots.push(lo);
    }
    for i in 1..=n {
        let t = lo + i as f64 * step;
        let v = horner(coefficients, t);
        if v == 0.0 {
            roots.push(t);
        } else if prev_v != 0.0 && prev_v.signum() != v.signum() {
            roots.push(bisect(coefficients, prev_t, t));
        }
        prev_t = t;
        prev_v = v;
    }
    roots
}

fn bisect(coefficients: &[f64], mut a: f64, mut b: f64) -> f64 {
    let mut fa = horner(coefficients, a);
    for _ in 0..128 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = horner(coefficients, m);
        if fm == 0.0 {
            return m;
        }
        if fa.signum() != fm.signum() {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Least distance from a point `(px, py)` to the graph of `t -> g(t)`
/// and the abscissa where it is attained. `dg` is the analytic
/// derivative of `g`.
///
/// Scans a grid over `[t_lo, t_hi]`, brackets every local minimum,
/// polishes each bracket with golden-section search, then pins the
/// winning abscissa by bisecting the distance derivative. The last step
/// matters: value-based search alone localizes a smooth minimum's
/// argument only to about sqrt(machine epsilon).
pub(crate) fn nearest_on_graph(
    g: impl Fn(f64) -> f64 + Copy,
    dg: impl Fn(f64) -> f64 + Copy,
    px: f64,
    py: f64,
    t_lo: f64,
    t_hi: f64,
    spacing: f64,
) -> (f64, f64) {
    let dist2 = move |t: f64| {
        let dx = px - t;
        let dy = py - g(t);
        dx * dx + dy * dy
    };
    let (t, d2) = crate::numerics::min_over_grid(dist2, t_lo, t_hi, spacing, 1e-12);
    let (t, d2) = {
        let (t2, v2) = golden_section_min(dist2, t - spacing, t + spacing, 1e-12);
        if v2 < d2 {
            (t2, v2)
        } else {
            (t, d2)
        }
    };
    // Half the derivative of dist2; its simple root is the argmin. Near
    // the minimum the values of dist2 are flat to rounding, so the root
    // is accepted under a relative slack rather than a strict value
    // comparison.
    let slope = move |t: f64| (t - px) + (g(t) - py) * dg(t);
    let (t, d2) = match crate::numerics::bisect_root(slope, t - spacing, t + spacing) {
        Some(root) => {
            let v = dist2(root);
            if v <= d2 + d2.abs() * 1e-9 {
                (root, v)
            } else {
                (t, d2)
            }
        }
        None => (t, d2),
    };
    (t, d2.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_curve_is_flat() {
        let c = CurveSpec::Constant { level: 2.5 };
        assert_eq!(c.value(17.0), 2.5);
        assert_eq!(c.derivative(3.0), 0.0);
        assert_eq!(c.lipschitz_bound(-10.0, 10.0), 0.0);
    }

    #[test]
    fn sinusoid_slope_bound_is_amplitude_times_frequency() {
        let c = CurveSpec::Sinusoid {
            amplitude: 1.5,
            frequency: 2.0,
            phase: 0.0,
            offset: 0.0,
        };
        assert_eq!(c.lipschitz_bound(-30.0, 30.0), 3.0);
        assert!((c.value(std::f64::consts::FRAC_PI_4) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn polynomial_bound_matches_dense_scan() {
        // f(t) = t^3 - 3t on [-2, 2]: f' = 3t^2 - 3, |f'| max = 9 at t = +-2.
        let c = CurveSpec::Polynomial {
            coefficients: vec![0.0, -3.0, 0.0, 1.0],
        };
        let bound = c.lipschitz_bound(-2.0, 2.0);
        assert!((bound - 9.0).abs() < 1e-9, "bound = {bound}");

        // Interior extremum: f' = 3t^2 - 3 has |f'| = 3 at t = 0; on
        // [-0.5, 0.5] that interior value dominates the endpoints.
        let inner = c.lipschitz_bound(-0.5, 0.5);
        assert!((inner - 3.0).abs() < 1e-9, "inner = {inner}");

        // Brute-force oracle over a dense grid.
        let oracle = (0..=200_000)
            .map(|i| -2.0 + i as f64 * (4.0 / 200_000.0))
            .map(|t| c.derivative(t).abs())
            .fold(0.0, f64::max);
        assert!(bound >= oracle - 1e-9);
    }

    #[test]
    fn sampled_slopes_respect_the_bound() {
        let c = CurveSpec::Sinusoid {
            amplitude: 1.0,
            frequency: 1.0,
            phase: 0.0,
            offset: 0.0,
        };
        let bound = c.lipschitz_bound(-10.0, 10.0);
        let mut t = -10.0;
        while t < 10.0 {
            let s = t + 0.37;
            let slope = (c.value(s) - c.value(t)).abs() / (s - t);
            assert!(slope <= bound + 1e-9);
            t += 0.11;
        }
    }

    #[test]
    fn nearest_on_graph_flat_line() {
        let (t, d) = nearest_on_graph(|_| 1.0, |_| 0.0, 0.0, 5.0, -4.0, 4.0, 0.1);
        assert!(t.abs() < 1e-12, "t = {t}");
        assert!((d - 4.0).abs() < 1e-12);
    }

    #[test]
    fn nearest_on_graph_sloped_line() {
        // Distance from (0, 2) to the line y = t: foot at (1, 1).
        let (t, d) = nearest_on_graph(|t| t, |_| 1.0, 0.0, 2.0, -4.0, 4.0, 0.1);
        assert!((t - 1.0).abs() < 1e-12, "t = {t}");
        assert!((d - 2.0_f64.sqrt()).abs() < 1e-12);
    }
}
