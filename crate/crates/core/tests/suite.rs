//! Integration tests for the verification harness and report rendering.

use metric_collapse::report::{render_human, render_machine};
use metric_collapse::*;

fn strip_space(name: &str) -> CollapsedSpace {
    match builtin_scene(name) {
        Some(Scene::Strip(s)) => CollapsedSpace::new(s).unwrap(),
        _ => panic!("not a strip builtin: {name}"),
    }
}

fn strip_config(seed: u64, n_pairs: usize, n_triples: usize) -> SampleConfig {
    SampleConfig {
        seed,
        n_points: 400,
        n_pairs,
        n_triples,
        bbox: aabb2((-30.0, 30.0), (-30.0, 30.0)),
    }
}

const STRIP_CHECKS: [&str; 9] = [
    "semimetric_axioms",
    "transversal_ratio",
    "representative_shift",
    "upper_bound_far",
    "upper_bound_near",
    "upper_bound_all",
    "lower_bound_all",
    "qi_sandwich",
    "bc_transfer",
];

#[test]
fn strip_suites_pass_on_builtin_scenes() {
    for name in ["sine_strip", "flat_strip", "cos2x_strip"] {
        let space = strip_space(name);
        let report = run_suite(&space, &strip_config(7, 1500, 1500), 1e-6).unwrap();
        assert!(report.all_passed(), "{name} failed:\n{}", render_human(&report));
        for check in STRIP_CHECKS {
            assert!(report.check(check).is_some(), "{name} missing check {check}");
        }
    }
}

#[test]
fn reports_are_reproducible() {
    let space = strip_space("sine_strip");
    let a = run_suite(&space, &strip_config(42, 800, 800), 1e-6).unwrap();
    let b = run_suite(&space, &strip_config(42, 800, 800), 1e-6).unwrap();
    assert_eq!(render_machine(&a), render_machine(&b));
}

#[test]
fn different_seeds_change_the_machine_report() {
    let space = strip_space("flat_strip");
    let a = run_suite(&space, &strip_config(1, 300, 300), 1e-6).unwrap();
    let b = run_suite(&space, &strip_config(2, 300, 300), 1e-6).unwrap();
    assert_ne!(render_machine(&a), render_machine(&b));
}

#[test]
fn restricting_a_passing_sample_keeps_it_passing() {
    // Same seed and pool: the smaller pair/triple lists are prefixes of
    // the larger ones, so this is a genuine subset check.
    let space = strip_space("sine_strip");
    let full = run_suite(&space, &strip_config(11, 1000, 1000), 1e-6).unwrap();
    assert!(full.all_passed());
    let subset = run_suite(&space, &strip_config(11, 250, 250), 1e-6).unwrap();
    assert!(subset.all_passed());
}

#[test]
fn empirical_constants_stay_under_theoretical_on_passing_checks() {
    let space = strip_space("sine_strip");
    let report = run_suite(&space, &strip_config(5, 2000, 1000), 1e-6).unwrap();
    assert!(report.all_passed());

    let ratio = report.check("transversal_ratio").unwrap();
    let k_theory = ratio.constants.iter().find(|(n, _)| *n == "ratio").unwrap().1;
    let k_emp = ratio.empirical.iter().find(|(n, _)| *n == "ratio").unwrap().1;
    assert!(k_emp <= k_theory + 1e-6, "{k_emp} vs {k_theory}");

    let upper = report.check("upper_bound_all").unwrap();
    let c_theory = upper.constants.iter().find(|(n, _)| *n == "add").unwrap().1;
    let c_emp = upper
        .empirical
        .iter()
        .find(|(n, _)| *n == "add_at_mult")
        .unwrap()
        .1;
    assert!(c_emp <= c_theory + 1e-6, "{c_emp} vs {c_theory}");

    let qi = report.check("qi_sandwich").unwrap();
    let c_theory = qi.constants.iter().find(|(n, _)| *n == "c").unwrap().1;
    for key in ["c_upper_at_k", "c_lower_at_k"] {
        let c_emp = qi.empirical.iter().find(|(n, _)| *n == key).unwrap().1;
        assert!(c_emp <= c_theory + 1e-6, "{key}: {c_emp} vs {c_theory}");
    }
}

#[test]
fn flat_strip_hand_pair_is_covered_by_the_qi_constants() {
    // rho_phi((0,5),(9,5)) = 17 and the flat-strip constants are
    // (K, C) = (2, 12): 17 <= 2 * 9 + 12.
    let space = strip_space("flat_strip");
    let qi = quasi_isometry_constants(&space);
    assert_eq!((qi.k(), qi.c()), (2.0, 12.0));
    let b = space
        .collapsed_distance(&p2(0.0, 5.0), &p2(9.0, 5.0))
        .unwrap();
    assert!(b.rho_phi <= qi.k() * b.rho + qi.c());
    assert!(b.rho / qi.k() - qi.c() <= b.rho_phi);
}

fn ball_scene() -> BallScene {
    match builtin_scene("unit_ball") {
        Some(Scene::Ball(b)) => b,
        _ => panic!("missing unit_ball builtin"),
    }
}

fn ball_config(seed: u64) -> SampleConfig {
    SampleConfig {
        seed,
        n_points: 300,
        n_pairs: 1500,
        n_triples: 1500,
        bbox: aabb2((-12.0, 12.0), (-12.0, 12.0)),
    }
}

#[test]
fn ball_suite_passes_at_the_doubled_triangle() {
    let ball = ball_scene();
    let report = run_ball_suite(
        &ball,
        BcParams::new(2.0, 0.0).unwrap(),
        &ball_config(42),
        1e-9,
    )
    .unwrap();
    assert!(report.all_passed(), "{}", render_human(&report));
}

#[test]
fn ball_suite_fails_the_strict_triangle_on_the_grazing_triple() {
    let ball = ball_scene();
    let report = run_ball_suite(&ball, BcParams::metric(), &ball_config(42), 1e-9).unwrap();
    let triangle = report.check("relaxed_triangle").unwrap();
    assert_eq!(triangle.status, CheckStatus::Fail);
    assert!(triangle.violations >= 1);

    // The appended grazing triple on its own breaks the strict triangle
    // inequality by sqrt(104.84) - 10.2.
    let sigma = BallQuotientDistance { ball: &ball };
    let (a, b, c) = metric_collapse::harness::grazing_triple(&ball).unwrap();
    let violations = verify_bc(&sigma, BcParams::metric(), &[(a, b, c)], 1e-9).unwrap();
    assert_eq!(violations.len(), 1);
    assert!((violations[0].lhs - 104.84_f64.sqrt()).abs() < 1e-9);
    assert!((violations[0].rhs - 10.2).abs() < 1e-9);
    assert!((violations[0].deficit - (104.84_f64.sqrt() - 10.2)).abs() < 1e-9);
}

#[test]
fn quotient_distance_satisfies_the_semimetric_axioms_on_seeded_points() {
    let ball = ball_scene();
    let sigma = BallQuotientDistance { ball: &ball };
    let sets = sample(&SampleConfig {
        seed: 42,
        n_points: 100,
        n_pairs: 0,
        n_triples: 0,
        bbox: aabb2((-5.0, 5.0), (-5.0, 5.0)),
    })
    .unwrap();
    let violations = check_semimetric(&sigma, &sets.points, 1e-9).unwrap();
    assert!(violations.is_empty(), "{} violations", violations.len());
}

#[test]
fn disk_frontier_on_the_grazing_triple_and_seeded_triples() {
    let ball = ball_scene();
    let sigma = BallQuotientDistance { ball: &ball };

    // The grazing triple alone: at b = 1 the least additive slack is
    // sqrt(104.84) - 10.2 (the hand value by Pythagoras).
    let triple = vec![metric_collapse::harness::grazing_triple(&ball).unwrap()];
    let frontier = estimate_bc(&sigma, &triple, &[1.0]).unwrap();
    let c_min = frontier.entries()[0].1;
    assert!(
        (c_min - (104.84_f64.sqrt() - 10.2)).abs() < 1e-9,
        "c_min = {c_min}"
    );
    assert!((c_min - 0.0391).abs() < 1e-4);

    // Seeded triples need no additive slack once b = 2.
    let sets = sample(&SampleConfig {
        seed: 42,
        n_points: 200,
        n_pairs: 0,
        n_triples: 2000,
        bbox: aabb2((-10.0, 10.0), (-10.0, 10.0)),
    })
    .unwrap();
    let frontier = estimate_bc(&sigma, &sets.triple_points(), &[2.0]).unwrap();
    assert_eq!(frontier.entries()[0].1, 0.0);
}

#[test]
fn sine_strip_representative_matches_the_minimization_oracle() {
    let space = strip_space("sine_strip");
    let rep = space.collapse_representative(&p2(0.0, 5.0)).unwrap();

    // Oracle: dense grid over the upper boundary plus golden-section
    // refinement of the winning bracket.
    let boundary = |t: f64| t.sin() + 1.0;
    let dist2 = |t: f64| t * t + (5.0 - boundary(t)).powi(2);
    let mut best = (0.0_f64, f64::INFINITY);
    let mut t = -4.0;
    while t <= 4.0 {
        let v = dist2(t);
        if v < best.1 {
            best = (t, v);
        }
        t += 1e-4;
    }
    let (t_star, _) =
        metric_collapse::numerics::golden_section_min(dist2, best.0 - 1e-4, best.0 + 1e-4, 1e-12);
    assert!(
        (rep.coord(0) - t_star).abs() < 1e-5,
        "rep abscissa {} vs oracle {t_star}",
        rep.coord(0)
    );
    assert!((rep.coord(1) - t_star.sin()).abs() < 1e-5);
}

#[test]
fn identity_transfer_check_is_trivially_clean() {
    let config = SampleConfig {
        seed: 9,
        n_points: 100,
        n_pairs: 300,
        n_triples: 300,
        bbox: aabb2((-10.0, 10.0), (-10.0, 10.0)),
    };
    let record = run_bc_transfer_check(
        &Euclidean,
        &Identity,
        &Euclidean,
        BcParams::metric(),
        QiParams::new(1.0, 0.0).unwrap(),
        &config,
        1e-9,
    )
    .unwrap();
    assert_eq!(record.status, CheckStatus::Pass);
    let b = record.constants.iter().find(|(n, _)| *n == "b").unwrap().1;
    let c = record.constants.iter().find(|(n, _)| *n == "c").unwrap().1;
    assert_eq!((b, c), (1.0, 0.0));
}

#[test]
fn floor_map_transfer_check_passes() {
    let config = SampleConfig {
        seed: 42,
        n_points: 500,
        n_pairs: 3000,
        n_triples: 3000,
        bbox: Aabb::new(vec![-100.0], vec![100.0]).unwrap(),
    };
    let record = run_bc_transfer_check(
        &Euclidean,
        &FloorMap,
        &Euclidean,
        BcParams::metric(),
        QiParams::new(1.0, 1.0).unwrap(),
        &config,
        1e-9,
    )
    .unwrap();
    assert_eq!(record.status, CheckStatus::Pass);
    assert_eq!(record.violations, 0);
    let b = record.constants.iter().find(|(n, _)| *n == "b").unwrap().1;
    let c = record.constants.iter().find(|(n, _)| *n == "c").unwrap().1;
    assert_eq!((b, c), (1.0, 3.0));
}

#[test]
fn transfer_check_errors_when_the_sandwich_precondition_fails() {
    let config = SampleConfig {
        seed: 1,
        n_points: 100,
        n_pairs: 500,
        n_triples: 100,
        bbox: Aabb::new(vec![-100.0], vec![100.0]).unwrap(),
    };
    // The floor map is not a (1, 0)-quasi-isometry.
    let record = run_bc_transfer_check(
        &Euclidean,
        &FloorMap,
        &Euclidean,
        BcParams::metric(),
        QiParams::new(1.0, 0.0).unwrap(),
        &config,
        1e-9,
    )
    .unwrap();
    assert_eq!(record.status, CheckStatus::Errored);
    assert!(record.note.as_ref().unwrap().contains("precondition"));
}

#[test]
fn sine_strip_collapse_estimate_stays_under_the_derived_constants() {
    // Estimating the collapse map against the ambient metric at K = 2
    // must come in under the additive constant of the derived
    // quasi-isometry parameters.
    let space = strip_space("sine_strip");
    let metric = CollapsedMetric { space: &space };
    let sets = sample(&SampleConfig {
        seed: 42,
        n_points: 300,
        n_pairs: 2000,
        n_triples: 0,
        bbox: aabb2((-30.0, 30.0), (-30.0, 30.0)),
    })
    .unwrap();
    let est = estimate_qi(&Identity, &Euclidean, &metric, &sets.pair_points(), &[2.0]).unwrap();
    let c = est.entry(2.0).unwrap().c();
    assert!(c <= 12.0, "C_emp at K=2 was {c}");
}

#[test]
fn machine_report_schema_has_the_expected_keys() {
    let space = strip_space("flat_strip");
    let report = run_suite(&space, &strip_config(3, 200, 200), 1e-6).unwrap();
    let text = render_machine(&report);
    for needle in [
        "format = metric-collapse.report/1",
        "seed = 3",
        "pairs = 200",
        "check.qi_sandwich.status = pass",
        "check.qi_sandwich.const.k = 2.00000000000e0",
        "result = pass",
    ] {
        assert!(text.contains(needle), "missing `{needle}` in:\n{text}");
    }
    // Wall time must not leak into the machine document.
    assert!(!text.contains("wall"));
}
