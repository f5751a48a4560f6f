//! 1-D minimization and quadrature used by the scene geometry.

use crate::error::{GeomError, Result};

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Shrinks the bracket until its width is below `tol`, then returns the
/// best evaluated `(x, f(x))`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;

    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    // Width shrinks by INV_PHI each step, so this always terminates.
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        if x2 <= x1 {
            // Bracket collapsed to floating-point resolution.
            break;
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Global minimum of `f` on `[lo, hi]`: coarse grid scan, bracket every
/// local minimum, refine each bracket by golden section, keep the best.
///
/// A single descent is unsound for oscillating objectives (sinusoidal
/// boundaries have many local minima), hence the bracket-all strategy.
pub fn min_over_grid(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    spacing: f64,
    refine_tol: f64,
) -> (f64, f64) {
    debug_assert!(spacing > 0.0);
    if hi <= lo {
        return (lo, f(lo));
    }
    let n = ((hi - lo) / spacing).ceil() as usize;
    let n = n.max(2);
    let step = (hi - lo) / n as f64;
    let values: Vec<f64> = (0..=n).map(|i| f(lo + i as f64 * step)).collect();

    let mut best = (lo, values[0]);
    let mut consider = |cand: (f64, f64)| {
        if cand.1 < best.1 {
            best = cand;
        }
    };

    consider((hi, values[n]));
    // Endpoint brackets: a minimum may sit in the first or last cell.
    consider(golden_section_min(&f, lo, lo + step, refine_tol));
    consider(golden_section_min(&f, hi - step, hi, refine_tol));
    for i in 1..n {
        if values[i] <= values[i - 1] && values[i] <= values[i + 1] {
            let a = lo + (i - 1) as f64 * step;
            let b = lo + (i + 1) as f64 * step;
            consider(golden_section_min(&f, a, b, refine_tol));
        }
    }
    best
}

/// Root of `f` in `[a, b]` by bisection, or `None` when the endpoint
/// signs do not differ. Runs to floating-point resolution.
pub fn bisect_root(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Some(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` with relative
/// tolerance `rel_tol`.
///
/// Exceeding the recursion cap is an error, never a silent result.
/// Oscillatory integrands alias the plain three-point starting estimate
/// (the refinement test can accept a wrong value on an interval spanning
/// several periods), so callers with a known oscillation scale should
/// use [`adaptive_simpson_panels`].
pub fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return Err(GeomError::InvalidArgument(format!(
            "quadrature interval [{a}, {b}] is reversed"
        )));
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let eps = rel_tol * whole.abs().max(f64::MIN_POSITIVE);
    simpson_step(f, a, m, b, fa, fm, fb, whole, eps, max_depth)
}

/// [`adaptive_simpson`] over fixed panels no wider than `max_panel`.
///
/// Each panel adapts independently with its share of the tolerance
/// budget; the panel width defeats aliasing as long as it stays below
/// the integrand's oscillation scale.
pub fn adaptive_simpson_panels(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: u32,
    max_panel: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return Err(GeomError::InvalidArgument(format!(
            "quadrature interval [{a}, {b}] is reversed"
        )));
    }
    if max_panel.is_nan() || max_panel <= 0.0 {
        return Err(GeomError::InvalidArgument(format!(
            "panel width must be positive, got {max_panel}"
        )));
    }
    let n = ((b - a) / max_panel).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let per_panel_tol = rel_tol / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let lo = a + i as f64 * h;
        let hi = if i + 1 == n { b } else { a + (i + 1) as f64 * h };
        total += adaptive_simpson(f, lo, hi, per_panel_tol, max_depth)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(GeomError::Numerical(format!(
            "adaptive quadrature exceeded its recursion cap on [{a}, {b}] (residual {:.3e})",
            delta.abs()
        )));
    }
    let l = simpson_step(f, a, lm, m, fa, flm, fm, left, 0.5 * eps, depth - 1)?;
    let r = simpson_step(f, m, rm, b, fm, frm, fb, right, 0.5 * eps, depth - 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_quadratic_minimum() {
        let (x, v) = golden_section_min(|t| (t - 1.25) * (t - 1.25) + 3.0, -10.0, 10.0, 1e-12);
        // Value-based search pins the argument only to ~sqrt(eps) on a
        // smooth minimum; the value itself is exact to rounding.
        assert!((x - 1.25).abs() < 1e-6, "x = {x}");
        assert!((v - 3.0).abs() < 1e-15);
    }

    #[test]
    fn grid_scan_beats_local_minima() {
        // Two wells; the deeper one is off to the right. The argmin
        // solves 4 t^3 - 16 t - 1 = 0.
        let f = |t: f64| (t * t - 4.0).powi(2) - t;
        let (x, _) = min_over_grid(f, -5.0, 5.0, 0.1, 1e-12);
        assert!((x - 2.030_546_6).abs() < 1e-4, "x = {x}");
    }

    #[test]
    fn bisection_finds_a_simple_root() {
        let r = bisect_root(|t| t * t * t - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2.0_f64.powf(1.0 / 3.0)).abs() < 1e-14);
        assert!(bisect_root(|t| t * t + 1.0, -1.0, 1.0).is_none());
    }

    #[test]
    fn simpson_is_exact_for_cubics() {
        let v = adaptive_simpson(&|t| t * t * t - 2.0 * t + 1.0, 0.0, 2.0, 1e-10, 40).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "v = {v}");
    }

    #[test]
    fn simpson_integrates_sine() {
        let v = adaptive_simpson(&f64::sin, 0.0, std::f64::consts::PI, 1e-12, 48).unwrap();
        assert!((v - 2.0).abs() < 1e-10, "v = {v}");
    }

    #[test]
    fn simpson_depth_cap_is_an_error() {
        // |t|^0.1 has an unbounded derivative at 0; depth 1 cannot resolve it.
        let r = adaptive_simpson(&|t: f64| t.abs().powf(0.1), -1.0, 1.0, 1e-14, 1);
        assert!(matches!(r, Err(GeomError::Numerical(_))));
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(adaptive_simpson(&f64::sin, 1.0, 1.0, 1e-10, 10).unwrap(), 0.0);
    }
}
