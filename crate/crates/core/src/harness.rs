//! Seeded verification suites: sandwich and triangle bounds checked on
//! deterministic samples, with empirical-vs-theoretical constant
//! comparison and one record per check.

use std::time::{Duration, Instant};

use crate::ball::BallQuotientDistance;
use crate::collapse::{
    collapse_bounds, quasi_isometry_constants, quasi_isometry_constants_from_slope,
    CollapsedSpace, PointProfile,
};
use crate::error::Result;
use crate::metric::{check_semimetric, transfer_bc, verify_bc, BcParams, DistanceFn};
use crate::point::Point;
use crate::qi::{check_qi, Identity, PointMap, QiParams};
use crate::sample::{sample, SampleConfig};
use crate::scene::BallScene;

/// Pairs closer than this to the strict vicinity boundary are flagged
/// in the report (they are still checked; the bounds hold on both
/// branches).
pub const VICINITY_BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The check could not be evaluated; see the record note.
    Errored,
}

/// The single worst witness of a check, kept for debugging.
#[derive(Clone, Debug)]
pub struct WorstWitness {
    pub points: Vec<Point>,
    pub lhs: f64,
    pub rhs: f64,
}

impl WorstWitness {
    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// Outcome of one named check over the whole sample.
#[derive(Clone, Debug)]
pub struct CheckRecord {
    pub name: &'static str,
    pub status: CheckStatus,
    pub checked: usize,
    pub violations: usize,
    /// Theoretical constants the check used, by name.
    pub constants: Vec<(&'static str, f64)>,
    /// Empirical extremes observed on the sample, by name.
    pub empirical: Vec<(&'static str, f64)>,
    pub worst: Option<WorstWitness>,
    pub note: Option<String>,
}

impl CheckRecord {
    fn errored(name: &'static str, note: String) -> Self {
        CheckRecord {
            name,
            status: CheckStatus::Errored,
            checked: 0,
            violations: 0,
            constants: Vec::new(),
            empirical: Vec::new(),
            worst: None,
            note: Some(note),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Accumulates `lhs <= rhs + tol` observations for one check.
struct BoundCheck {
    name: &'static str,
    tol: f64,
    checked: usize,
    violations: usize,
    worst: Option<WorstWitness>,
}

impl BoundCheck {
    fn new(name: &'static str, tol: f64) -> Self {
        BoundCheck {
            name,
            tol,
            checked: 0,
            violations: 0,
            worst: None,
        }
    }

    fn observe(&mut self, lhs: f64, rhs: f64, witness: &[&Point]) {
        self.checked += 1;
        if lhs > rhs + self.tol {
            self.violations += 1;
        }
        let margin = lhs - rhs;
        if self.worst.as_ref().is_none_or(|w| margin > w.margin()) {
            self.worst = Some(WorstWitness {
                points: witness.iter().map(|p| (*p).clone()).collect(),
                lhs,
                rhs,
            });
        }
    }

    fn into_record(
        self,
        constants: Vec<(&'static str, f64)>,
        empirical: Vec<(&'static str, f64)>,
    ) -> CheckRecord {
        CheckRecord {
            name: self.name,
            status: if self.violations == 0 {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            checked: self.checked,
            violations: self.violations,
            constants,
            empirical,
            worst: self.worst,
            note: None,
        }
    }
}

/// Structured result of a verification run.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub scene: String,
    pub config: SampleConfig,
    pub tol: f64,
    pub checks: Vec<CheckRecord>,
    /// Sampled pairs within [`VICINITY_BOUNDARY_TOL`] of the strict
    /// vicinity boundary.
    pub boundary_pairs: usize,
    pub wall: Duration,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn max0(v: f64) -> f64 {
    v.max(0.0)
}

/// Run the full strip suite: semi-metric axioms, the transversal ratio
/// bound, the representative shift bound, the three upper bounds, the
/// lower bound, the quasi-isometry sandwich, and the transferred
/// relaxed-triangle check on the collapsed distance.
pub fn run_suite(
    space: &CollapsedSpace,
    config: &SampleConfig,
    tol: f64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let sets = sample(config)?;
    let profiles: Vec<PointProfile> = sets
        .points
        .iter()
        .map(|p| space.profile(p))
        .collect::<Result<_>>()?;

    // Arc coordinates for the T-points induced by the sampled abscissae
    // (used by the transversal-ratio check).
    let t_arcs: Vec<f64> = sets
        .points
        .iter()
        .map(|p| space.arc_coordinate(p.coord(0)))
        .collect::<Result<_>>()?;

    let bounds = collapse_bounds(space);
    let qi = quasi_isometry_constants(space);
    let qi_slope = quasi_isometry_constants_from_slope(space);
    let fiber = space.max_fiber_length();
    let ambient_is_metric = space.ambient() == BcParams::metric();

    let mut boundary_pairs = 0usize;
    for &(i, j) in &sets.pairs {
        let rho = profiles[i].point.euclidean(&profiles[j].point);
        if (rho - (profiles[i].r + profiles[j].r)).abs() < VICINITY_BOUNDARY_TOL && rho > 0.0 {
            boundary_pairs += 1;
        }
    }

    let mut checks = Vec::new();

    // Semi-metric behaviour of the collapsed distance: non-negative,
    // exactly symmetric, zero only on identified points.
    {
        let mut check = BoundCheck::new("semimetric_axioms", tol);
        let mut min_rho_phi = f64::INFINITY;
        for &(i, j) in &sets.pairs {
            let b = space.breakdown_from_profiles(&profiles[i], &profiles[j]);
            min_rho_phi = min_rho_phi.min(b.rho_phi);
            // Non-negativity: 0 <= rho_phi.
            check.observe(-b.rho_phi, 0.0, &[&profiles[i].point, &profiles[j].point]);
            if b.rho_phi <= tol {
                // Separation at class level: a vanishing distance must
                // mean a shared representative (or equal points).
                let same_class = profiles[i].point == profiles[j].point
                    || profiles[i].rep.max_abs_diff(&profiles[j].rep) <= 1e-6;
                check.observe(
                    if same_class { 0.0 } else { 1.0 },
                    0.0,
                    &[&profiles[i].point, &profiles[j].point],
                );
            }
        }
        // Exact symmetry of the full operation on a subsample.
        let sym_n = sets.pairs.len().min(100);
        let mut sym_result = Ok(());
        for &(i, j) in sets.pairs.iter().take(sym_n) {
            let fwd = space.collapsed_distance(&sets.points[i], &sets.points[j]);
            let bwd = space.collapsed_distance(&sets.points[j], &sets.points[i]);
            match (fwd, bwd) {
                (Ok(f), Ok(b)) => {
                    let diff = if f.rho_phi == b.rho_phi { 0.0 } else { 1.0 };
                    check.observe(diff, 0.0, &[&sets.points[i], &sets.points[j]]);
                }
                (Err(e), _) | (_, Err(e)) => {
                    sym_result = Err(e);
                    break;
                }
            }
        }
        match sym_result {
            Ok(()) => {
                let emp = vec![("min_rho_phi", if min_rho_phi.is_finite() { min_rho_phi } else { 0.0 })];
                checks.push(check.into_record(Vec::new(), emp));
            }
            Err(e) => checks.push(CheckRecord::errored("semimetric_axioms", e.to_string())),
        }
    }

    // On T-pairs the collapsed distance is the path metric, and its
    // ratio to the ambient distance is bounded by the path-ratio
    // constant.
    {
        let mut check = BoundCheck::new("transversal_ratio", tol);
        let mut k_emp: f64 = 0.0;
        let curve = space.scene().center();
        for &(i, j) in &sets.pairs {
            let (ti, tj) = (sets.points[i].coord(0), sets.points[j].coord(0));
            if ti == tj {
                continue;
            }
            let a = Point::new(vec![ti, curve.value(ti)]).expect("curve values are finite");
            let b = Point::new(vec![tj, curve.value(tj)]).expect("curve values are finite");
            let rho = a.euclidean(&b);
            let rho_phi = (t_arcs[i] - t_arcs[j]).abs();
            k_emp = k_emp.max(rho_phi / rho);
            check.observe(rho_phi, bounds.transversal_ratio * rho, &[&a, &b]);
        }
        let consts = vec![("ratio", bounds.transversal_ratio)];
        let emp = vec![("ratio", k_emp)];
        checks.push(check.into_record(consts, emp));
    }

    // Representative shift for strip pairs: moving both endpoints to
    // their T-representatives stretches the ambient distance by at most
    // the fiber-length terms.
    {
        let mut check = BoundCheck::new("representative_shift", tol);
        let mut shift_emp: f64 = 0.0;
        for &(i, j) in &sets.pairs {
            let (pi, pj) = (&profiles[i], &profiles[j]);
            if pi.r > 0.0 || pj.r > 0.0 {
                continue;
            }
            let rho = pi.point.euclidean(&pj.point);
            let rep_rho = pi.rep.euclidean(&pj.rep);
            shift_emp = shift_emp.max(rep_rho - rho);
            check.observe(
                rep_rho,
                bounds.rep_shift.mult * rho + bounds.rep_shift.add,
                &[&pi.point, &pj.point],
            );
            if ambient_is_metric {
                check.observe(
                    rep_rho,
                    rho + bounds.rep_shift_metric_add,
                    &[&pi.point, &pj.point],
                );
            }
        }
        let consts = vec![
            ("mult", bounds.rep_shift.mult),
            ("add", bounds.rep_shift.add),
            ("metric_add", bounds.rep_shift_metric_add),
        ];
        let emp = vec![("shift", shift_emp)];
        checks.push(check.into_record(consts, emp));
    }

    // Upper bounds on strip pairs, split at the fiber length, and the
    // all-pairs upper bound.
    {
        let mut far = BoundCheck::new("upper_bound_far", tol);
        let mut near = BoundCheck::new("upper_bound_near", tol);
        let mut all = BoundCheck::new("upper_bound_all", tol);
        let mut far_c: f64 = 0.0;
        let mut near_c: f64 = 0.0;
        let mut all_c: f64 = 0.0;
        for &(i, j) in &sets.pairs {
            let (pi, pj) = (&profiles[i], &profiles[j]);
            let b = space.breakdown_from_profiles(pi, pj);
            let witness: [&Point; 2] = [&pi.point, &pj.point];

            all_c = all_c.max(b.rho_phi - bounds.upper_all.mult * b.rho);
            all.observe(
                b.rho_phi,
                bounds.upper_all.mult * b.rho + bounds.upper_all.add,
                &witness,
            );

            if pi.r == 0.0 && pj.r == 0.0 {
                if b.rho >= fiber {
                    far_c = far_c.max(b.rho_phi - bounds.upper_far.mult * b.rho);
                    far.observe(
                        b.rho_phi,
                        bounds.upper_far.mult * b.rho + bounds.upper_far.add,
                        &witness,
                    );
                } else {
                    near_c = near_c.max(b.rho_phi - bounds.upper_near.mult * b.rho);
                    near.observe(
                        b.rho_phi,
                        bounds.upper_near.mult * b.rho + bounds.upper_near.add,
                        &witness,
                    );
                }
            }
        }
        checks.push(far.into_record(
            vec![("mult", bounds.upper_far.mult), ("add", bounds.upper_far.add)],
            vec![("add_at_mult", max0(far_c))],
        ));
        checks.push(near.into_record(
            vec![
                ("mult", bounds.upper_near.mult),
                ("add", bounds.upper_near.add),
            ],
            vec![("add_at_mult", max0(near_c))],
        ));
        checks.push(all.into_record(
            vec![("mult", bounds.upper_all.mult), ("add", bounds.upper_all.add)],
            vec![("add_at_mult", max0(all_c))],
        ));
    }

    // Lower bound on all pairs: the collapse cannot shrink distances by
    // more than the fiber-controlled offset.
    {
        let mut check = BoundCheck::new("lower_bound_all", tol);
        let mut c_emp: f64 = 0.0;
        for &(i, j) in &sets.pairs {
            let (pi, pj) = (&profiles[i], &profiles[j]);
            let b = space.breakdown_from_profiles(pi, pj);
            c_emp = c_emp.max(b.rho / bounds.lower_divisor - b.rho_phi);
            check.observe(
                b.rho / bounds.lower_divisor - bounds.lower_offset,
                b.rho_phi,
                &[&pi.point, &pj.point],
            );
        }
        checks.push(check.into_record(
            vec![
                ("divisor", bounds.lower_divisor),
                ("offset", bounds.lower_offset),
            ],
            vec![("offset_at_divisor", max0(c_emp))],
        ));
    }

    // The collapse map is a quasi-isometry: both sandwich sides with the
    // derived constants. The raw-slope constants are reported alongside.
    {
        let mut check = BoundCheck::new("qi_sandwich", tol);
        let mut upper_c: f64 = 0.0;
        let mut lower_c: f64 = 0.0;
        for &(i, j) in &sets.pairs {
            let (pi, pj) = (&profiles[i], &profiles[j]);
            let b = space.breakdown_from_profiles(pi, pj);
            let witness: [&Point; 2] = [&pi.point, &pj.point];
            upper_c = upper_c.max(b.rho_phi - qi.k() * b.rho);
            lower_c = lower_c.max(b.rho / qi.k() - b.rho_phi);
            check.observe(b.rho_phi, qi.k() * b.rho + qi.c(), &witness);
            check.observe(b.rho / qi.k() - qi.c(), b.rho_phi, &witness);
        }
        checks.push(check.into_record(
            vec![
                ("k", qi.k()),
                ("c", qi.c()),
                ("k_slope", qi_slope.k()),
                ("c_slope", qi_slope.c()),
            ],
            vec![
                ("c_upper_at_k", max0(upper_c)),
                ("c_lower_at_k", max0(lower_c)),
            ],
        ));
    }

    // The collapsed distance satisfies the relaxed triangle inequality
    // with the constants transferred through the quasi-isometry.
    {
        let transferred = transfer_bc(space.ambient(), qi);
        let mut check = BoundCheck::new("bc_transfer", tol);
        let mut c_emp: f64 = 0.0;
        for &(i, j, l) in &sets.triples {
            let (pi, pj, pl) = (&profiles[i], &profiles[j], &profiles[l]);
            let lhs = space.breakdown_from_profiles(pi, pl).rho_phi;
            let via = space.breakdown_from_profiles(pi, pj).rho_phi
                + space.breakdown_from_profiles(pj, pl).rho_phi;
            c_emp = c_emp.max(lhs - transferred.b() * via);
            check.observe(
                lhs,
                transferred.b() * via + transferred.c(),
                &[&pi.point, &pj.point, &pl.point],
            );
        }
        checks.push(check.into_record(
            vec![("b", transferred.b()), ("c", transferred.c())],
            vec![("c_at_b", max0(c_emp))],
        ));
    }

    Ok(VerificationReport {
        scene: format!("collapsed strip: {}", crate::scene::Scene::Strip(space.scene().clone()).summary()),
        config: config.clone(),
        tol,
        checks,
        boundary_pairs,
        wall: start.elapsed(),
    })
}

/// Suite for ball scenes: semi-metric axioms of the quotient distance,
/// the relaxed triangle inequality at the given parameters, and the
/// quasi-isometry of the quotient against the ambient metric.
///
/// For 2-D scenes a witness triple grazing the ball is appended to the
/// sampled triples; it is the sharp case for the doubled triangle
/// inequality.
pub fn run_ball_suite(
    ball: &BallScene,
    bc: BcParams,
    config: &SampleConfig,
    tol: f64,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let sets = sample(config)?;
    let sigma = BallQuotientDistance { ball };

    let mut checks = Vec::new();

    {
        match check_semimetric(&sigma, &sets.points, tol) {
            Ok(violations) => {
                let mut check = BoundCheck::new("semimetric_axioms", tol);
                check.checked = sets.points.len() * (sets.points.len().saturating_sub(1)) / 2;
                check.violations = violations.len();
                checks.push(check.into_record(Vec::new(), Vec::new()));
            }
            Err(e) => checks.push(CheckRecord::errored("semimetric_axioms", e.to_string())),
        }
    }

    {
        let mut triples = sets.triple_points();
        if let Some(witness) = grazing_triple(ball) {
            triples.push(witness);
        }
        let n = triples.len();
        match verify_bc(&sigma, bc, &triples, tol) {
            Ok(violations) => {
                let mut check = BoundCheck::new("relaxed_triangle", tol);
                check.checked = n;
                check.violations = violations.len();
                check.worst = violations
                    .iter()
                    .max_by(|a, b| a.deficit.total_cmp(&b.deficit))
                    .map(|v| WorstWitness {
                        points: vec![v.x.clone(), v.y.clone(), v.z.clone()],
                        lhs: v.lhs,
                        rhs: v.rhs,
                    });
                let c_emp = crate::metric::estimate_bc(&sigma, &triples, &[bc.b()])
                    .map(|f| f.entries()[0].1)
                    .unwrap_or(f64::NAN);
                checks.push(check.into_record(
                    vec![("b", bc.b()), ("c", bc.c())],
                    vec![("c_at_b", c_emp)],
                ));
            }
            Err(e) => checks.push(CheckRecord::errored("relaxed_triangle", e.to_string())),
        }
    }

    {
        // sigma never stretches distances and shrinks them by at most
        // the diameter of the collapsed ball.
        let qi = QiParams::new(1.0, ball.fiber_length()).expect("valid ball constants");
        let pairs = sets.pair_points();
        match check_qi(&Identity, &crate::metric::Euclidean, &sigma, qi, &pairs, tol) {
            Ok(violations) => {
                let mut check = BoundCheck::new("qi_vs_ambient", tol);
                check.checked = pairs.len();
                check.violations = violations.len();
                checks.push(check.into_record(
                    vec![("k", qi.k()), ("c", qi.c())],
                    Vec::new(),
                ));
            }
            Err(e) => checks.push(CheckRecord::errored("qi_vs_ambient", e.to_string())),
        }
    }

    Ok(VerificationReport {
        scene: format!("collapsed ball: {}", crate::scene::Scene::Ball(ball.clone()).summary()),
        config: config.clone(),
        tol,
        checks,
        boundary_pairs: 0,
        wall: start.elapsed(),
    })
}

/// The sharp witness triple for a 2-D ball: two points grazing the ball
/// on one axis and a third far off it.
pub fn grazing_triple(ball: &BallScene) -> Option<(Point, Point, Point)> {
    if ball.dim() != 2 {
        return None;
    }
    let (cx, cy) = (ball.center().coord(0), ball.center().coord(1));
    let r = ball.radius();
    let a = Point::new(vec![cx - 1.1 * r, cy]).ok()?;
    let b = Point::new(vec![cx + 1.1 * r, cy]).ok()?;
    let c = Point::new(vec![cx + 1.1 * r, cy + 10.0 * r]).ok()?;
    Some((a, b, c))
}

/// Verify that mapping a relaxed-triangle space through a checked
/// quasi-isometry lands in the transferred parameters: first confirm the
/// sandwich on sampled pairs (a failure is recorded as an errored check
/// naming the violating pair), then check the transferred triangle
/// inequality on image triples.
pub fn run_bc_transfer_check<M, D1, D2>(
    d: &D1,
    map: &M,
    d_image: &D2,
    source: BcParams,
    qi: QiParams,
    config: &SampleConfig,
    tol: f64,
) -> Result<CheckRecord>
where
    M: PointMap + ?Sized,
    D1: DistanceFn + ?Sized,
    D2: DistanceFn + ?Sized,
{
    let sets = sample(config)?;
    let pairs = sets.pair_points();
    let qi_violations = check_qi(map, d, d_image, qi, &pairs, tol)?;
    if let Some(v) = qi_violations.first() {
        return Ok(CheckRecord::errored(
            "bc_transfer",
            format!(
                "quasi-isometry precondition failed at ({}, {}): image {} vs ambient {}",
                v.x, v.y, v.rho_image, v.rho
            ),
        ));
    }

    let transferred = transfer_bc(source, qi);
    let mut image_triples = Vec::with_capacity(sets.triples.len());
    for (x, y, z) in sets.triple_points() {
        image_triples.push((map.apply(&x)?, map.apply(&y)?, map.apply(&z)?));
    }
    let violations = verify_bc(d_image, transferred, &image_triples, tol)?;
    let mut check = BoundCheck::new("bc_transfer", tol);
    check.checked = image_triples.len();
    check.violations = violations.len();
    check.worst = violations
        .iter()
        .max_by(|a, b| a.deficit.total_cmp(&b.deficit))
        .map(|v| WorstWitness {
            points: vec![v.x.clone(), v.y.clone(), v.z.clone()],
            lhs: v.lhs,
            rhs: v.rhs,
        });
    Ok(check.into_record(
        vec![("b", transferred.b()), ("c", transferred.c())],
        Vec::new(),
    ))
}

