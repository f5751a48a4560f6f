//! Command-line runner: verify suites, estimate tightest constants,
//! print single-pair distance breakdowns, and emit CSV plot data.
//!
//! Exit status: 0 when everything passed, 2 when a verification check
//! failed, 1 on usage or IO errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use metric_collapse::report::{fmt_sig, render_human, render_machine};
use metric_collapse::*;

// The glob brings in the crate's error-typed Result alias; commands
// want plain std Result with string errors.
use std::result::Result;

#[derive(Parser)]
#[command(
    name = "metric-collapse",
    version,
    about = "Collapsing-map geometry: verification suites, constant estimation, plot data",
    after_help = "Scenes are builtin names (sine_strip, flat_strip, cos2x_strip, unit_ball) \
                  or paths to TOML scene files."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite for a scene and write a report
    Verify(SceneArgs),
    /// Estimate the tightest empirical constants a sample supports
    Estimate(SceneArgs),
    /// Print the collapsed-distance breakdown for one pair of points
    Dist(DistArgs),
    /// Emit one CSV row per sampled pair (rho vs rho_phi)
    PlotData(SceneArgs),
}

#[derive(Args)]
struct SceneArgs {
    /// Builtin scene name or path to a scene file
    #[arg(long)]
    scene: String,
    /// Seed for the deterministic sampler
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Size of the sampled point pool
    #[arg(long, default_value_t = 1000)]
    points: usize,
    /// Number of sampled pairs
    #[arg(long, default_value_t = 1000)]
    pairs: usize,
    /// Number of sampled triples
    #[arg(long, default_value_t = 1000)]
    triples: usize,
    /// Write the machine-readable document here
    #[arg(long)]
    out: Option<PathBuf>,
    /// Check tolerance (default: 1e-6 for strips, 1e-9 for balls)
    #[arg(long)]
    tol: Option<f64>,
    /// Relaxed-triangle parameters as "b,c"
    #[arg(long, value_parser = parse_bc)]
    bc: Option<BcParams>,
    /// Quasi-isometry parameters as "K,C"
    #[arg(long, value_parser = parse_qi)]
    qi: Option<QiParams>,
}

#[derive(Args)]
struct DistArgs {
    /// Builtin scene name or path to a scene file
    #[arg(long)]
    scene: String,
    /// First point as comma-separated reals
    #[arg(long)]
    x: String,
    /// Second point as comma-separated reals
    #[arg(long)]
    y: String,
}

fn parse_reals(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| format!("`{part}` is not a real number: {e}"))
        })
        .collect()
}

fn parse_bc(s: &str) -> Result<BcParams, String> {
    let v = parse_reals(s)?;
    if v.len() != 2 {
        return Err("expected exactly two values: b,c".into());
    }
    BcParams::new(v[0], v[1]).map_err(|e| e.to_string())
}

fn parse_qi(s: &str) -> Result<QiParams, String> {
    let v = parse_reals(s)?;
    if v.len() != 2 {
        return Err("expected exactly two values: K,C".into());
    }
    QiParams::new(v[0], v[1]).map_err(|e| e.to_string())
}

fn load_scene(spec: &str) -> Result<Scene, String> {
    if let Some(scene) = builtin_scene(spec) {
        return Ok(scene);
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| format!("cannot read scene `{spec}`: {e} (builtins: {})", BUILTIN_SCENES.join(", ")))?;
    scene_from_toml(&text).map_err(|e| e.to_string())
}

fn sample_config(args: &SceneArgs, scene: &Scene) -> SampleConfig {
    SampleConfig {
        seed: args.seed,
        n_points: args.points,
        n_pairs: args.pairs,
        n_triples: args.triples,
        bbox: scene.domain().clone(),
    }
}

fn default_tol(scene: &Scene) -> f64 {
    // Strip distances go through quadrature and minimization; ball
    // distances are closed-form.
    match scene {
        Scene::Strip(_) => 1e-6,
        Scene::Ball(_) => 1e-9,
    }
}

fn write_out(path: &Option<PathBuf>, contents: &str) -> Result<(), String> {
    if let Some(path) = path {
        fs::write(path, contents)
            .map_err(|e| format!("cannot write `{}`: {e}", path.display()))?;
    }
    Ok(())
}

fn cmd_verify(args: SceneArgs) -> Result<ExitCode, String> {
    let scene = load_scene(&args.scene)?;
    let tol = args.tol.unwrap_or_else(|| default_tol(&scene));
    let config = sample_config(&args, &scene);
    let mut report = match &scene {
        Scene::Strip(strip) => {
            let space = match args.bc {
                Some(bc) => CollapsedSpace::with_ambient(strip.clone(), bc),
                None => CollapsedSpace::new(strip.clone()),
            }
            .map_err(|e| e.to_string())?;
            let mut report = run_suite(&space, &config, tol).map_err(|e| e.to_string())?;
            if let Some(user_qi) = args.qi {
                let metric = CollapsedMetric { space: &space };
                report
                    .checks
                    .push(user_qi_check(&metric, user_qi, &config, tol)?);
            }
            report
        }
        Scene::Ball(ball) => {
            let bc = args.bc.unwrap_or_else(|| BcParams::new(2.0, 0.0).expect("valid"));
            let mut report = run_ball_suite(ball, bc, &config, tol).map_err(|e| e.to_string())?;
            if let Some(user_qi) = args.qi {
                let sigma = BallQuotientDistance { ball };
                report
                    .checks
                    .push(user_qi_check(&sigma, user_qi, &config, tol)?);
            }
            report
        }
    };
    report.scene = format!("{} [{}]", report.scene, args.scene);
    print!("{}", render_human(&report));
    write_out(&args.out, &render_machine(&report))?;
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

/// Sandwich check of the collapse against the ambient metric at
/// user-supplied constants, reported as an extra record.
fn user_qi_check<D: DistanceFn>(
    image_metric: &D,
    qi: QiParams,
    config: &SampleConfig,
    tol: f64,
) -> Result<CheckRecord, String> {
    let sets = sample(config).map_err(|e| e.to_string())?;
    let pairs = sets.pair_points();
    let violations = check_qi(&Identity, &Euclidean, image_metric, qi, &pairs, tol)
        .map_err(|e| e.to_string())?;
    Ok(CheckRecord {
        name: "qi_user",
        status: if violations.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        checked: pairs.len(),
        violations: violations.len(),
        constants: vec![("k", qi.k()), ("c", qi.c())],
        empirical: Vec::new(),
        worst: violations
            .iter()
            .max_by(|a, b| a.excess.total_cmp(&b.excess))
            .map(|v| WorstWitness {
                points: vec![v.x.clone(), v.y.clone()],
                lhs: v.rho_image,
                rhs: v.rho,
            }),
        note: None,
    })
}

fn cmd_estimate(args: SceneArgs) -> Result<ExitCode, String> {
    let scene = load_scene(&args.scene)?;
    let config = sample_config(&args, &scene);
    let sets = sample(&config).map_err(|e| e.to_string())?;
    let pairs = sets.pair_points();
    let triples = sets.triple_points();
    let k_grid: Vec<f64> = match args.qi {
        Some(qi) => vec![qi.k()],
        None => vec![1.0, 1.5, 2.0, 2.5, 3.0],
    };
    let b_grid: Vec<f64> = match args.bc {
        Some(bc) => vec![bc.b()],
        None => vec![1.0, 1.5, 2.0, 3.0, 4.0],
    };

    let (qi_est, bc_est, label) = match &scene {
        Scene::Strip(strip) => {
            let space = CollapsedSpace::new(strip.clone()).map_err(|e| e.to_string())?;
            let metric = CollapsedMetric { space: &space };
            let qi_est = estimate_qi(&Identity, &Euclidean, &metric, &pairs, &k_grid)
                .map_err(|e| e.to_string())?;
            let bc_est = estimate_bc(&metric, &triples, &b_grid).map_err(|e| e.to_string())?;
            (qi_est, bc_est, scene.summary())
        }
        Scene::Ball(ball) => {
            let sigma = BallQuotientDistance { ball };
            let qi_est = estimate_qi(&Identity, &Euclidean, &sigma, &pairs, &k_grid)
                .map_err(|e| e.to_string())?;
            let bc_est = estimate_bc(&sigma, &triples, &b_grid).map_err(|e| e.to_string())?;
            (qi_est, bc_est, scene.summary())
        }
    };

    let mut machine = String::new();
    machine.push_str("format = metric-collapse.estimate/1\n");
    machine.push_str(&format!("scene = {label} [{}]\n", args.scene));
    machine.push_str(&format!("seed = {}\n", config.seed));
    machine.push_str(&format!("points = {}\n", config.n_points));
    machine.push_str(&format!("pairs = {}\n", config.n_pairs));
    machine.push_str(&format!("triples = {}\n", config.n_triples));
    println!("scene: {label}");
    println!("tightest additive constant C so the sandwich holds at each K:");
    for (i, (k, c)) in qi_est.frontier().iter().enumerate() {
        println!("  K = {k:<6} C = {c:.9}");
        machine.push_str(&format!("qi_frontier.{i}.k = {}\n", fmt_sig(*k)));
        machine.push_str(&format!("qi_frontier.{i}.c = {}\n", fmt_sig(*c)));
    }
    println!("least additive slack c so the relaxed triangle holds at each b:");
    for (i, (b, c)) in bc_est.entries().iter().enumerate() {
        println!("  b = {b:<6} c_min = {c:.9}");
        machine.push_str(&format!("bc_frontier.{i}.b = {}\n", fmt_sig(*b)));
        machine.push_str(&format!("bc_frontier.{i}.c_min = {}\n", fmt_sig(*c)));
    }
    write_out(&args.out, &machine)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_dist(args: DistArgs) -> Result<ExitCode, String> {
    let scene = load_scene(&args.scene)?;
    let x = Point::new(parse_reals(&args.x)?).map_err(|e| e.to_string())?;
    let y = Point::new(parse_reals(&args.y)?).map_err(|e| e.to_string())?;
    let dim = scene.domain().dim();
    if x.dim() != dim || y.dim() != dim {
        return Err(format!(
            "scene is {dim}-dimensional but the points have {} and {} coordinates",
            x.dim(),
            y.dim()
        ));
    }
    match &scene {
        Scene::Strip(strip) => {
            let space = CollapsedSpace::new(strip.clone()).map_err(|e| e.to_string())?;
            let b = space.collapsed_distance(&x, &y).map_err(|e| e.to_string())?;
            println!("rho = {}", fmt_sig(b.rho));
            println!("r_x = {}", fmt_sig(b.r_x));
            println!("r_y = {}", fmt_sig(b.r_y));
            println!("in_vicinity = {}", b.in_vicinity);
            println!("x_prime = {}", b.x_prime);
            println!("y_prime = {}", b.y_prime);
            if let Some(rho_p) = b.rho_p {
                println!("rho_p = {}", fmt_sig(rho_p));
            }
            println!("rho_phi = {}", fmt_sig(b.rho_phi));
        }
        Scene::Ball(ball) => {
            let sigma = BallQuotientDistance { ball };
            let value = sigma.eval(&x, &y).map_err(|e| e.to_string())?;
            let rho = x.euclidean(&y);
            let (r_x, _) = ball.nearest_distance(&x).map_err(|e| e.to_string())?;
            let (r_y, _) = ball.nearest_distance(&y).map_err(|e| e.to_string())?;
            println!("rho = {}", fmt_sig(rho));
            println!("r_x = {}", fmt_sig(r_x));
            println!("r_y = {}", fmt_sig(r_y));
            if x != y && !ball.contains(&x, 0.0) && !ball.contains(&y, 0.0) {
                let u = chord_length(ball, &x, &y).map_err(|e| e.to_string())?;
                println!("chord = {}", fmt_sig(u));
            }
            println!("sigma = {}", fmt_sig(value));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_plot_data(args: SceneArgs) -> Result<ExitCode, String> {
    let scene = load_scene(&args.scene)?;
    let config = sample_config(&args, &scene);
    let sets = sample(&config).map_err(|e| e.to_string())?;

    let mut csv = String::from("rho,rho_phi,in_vicinity,r_x,r_y\n");
    match &scene {
        Scene::Strip(strip) => {
            let space = CollapsedSpace::new(strip.clone()).map_err(|e| e.to_string())?;
            let profiles: Vec<PointProfile> = sets
                .points
                .iter()
                .map(|p| space.profile(p))
                .collect::<metric_collapse::Result<_>>()
                .map_err(|e| e.to_string())?;
            for &(i, j) in &sets.pairs {
                let b = space.breakdown_from_profiles(&profiles[i], &profiles[j]);
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_sig(b.rho),
                    fmt_sig(b.rho_phi),
                    b.in_vicinity,
                    fmt_sig(b.r_x),
                    fmt_sig(b.r_y)
                ));
            }
        }
        Scene::Ball(ball) => {
            let sigma = BallQuotientDistance { ball };
            for &(i, j) in &sets.pairs {
                let (x, y) = (&sets.points[i], &sets.points[j]);
                let rho = x.euclidean(y);
                let value = sigma.eval(x, y).map_err(|e| e.to_string())?;
                let (r_x, _) = ball.nearest_distance(x).map_err(|e| e.to_string())?;
                let (r_y, _) = ball.nearest_distance(y).map_err(|e| e.to_string())?;
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_sig(rho),
                    fmt_sig(value),
                    rho > r_x + r_y,
                    fmt_sig(r_x),
                    fmt_sig(r_y)
                ));
            }
        }
    }
    match &args.out {
        Some(_) => write_out(&args.out, &csv)?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_help = matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    let result = match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Dist(args) => cmd_dist(args),
        Command::PlotData(args) => cmd_plot_data(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
