//! Command-line front end: verification, iterated cutting, majorization,
//! filling-radius estimation and built-in counterexamples.
//!
//! Exit codes: 0 consistent/success, 2 violation, 3 inconclusive or partial
//! result, 64 unreadable or malformed input, 65 perimeter too large for the
//! requested curvature.

use cat2d::fillrad::{degeneracy_audit, filling_radius_estimate, fundamental_cycle, FiniteMetric};
use cat2d::jordan::{iterated_cut, JordanPolygon, SearchParams, DEFAULT_LEAF_BUDGET};
use cat2d::majorize::{assemble_limit_majorization, lipschitz_excess};
use cat2d::rng::CounterRng;
use cat2d::scene::{Scene, ScenePayload};
use cat2d::svg;
use cat2d::verify::{
    exhaustive_comparison_search, verify_theorem_1_1, SceneRef, SphericalCap, TheoremReport,
    Verdict, VerifyBudget,
};
use cat2d::GeomError;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_VIOLATION: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_BAD_INPUT: u8 = 64;
const EXIT_PERIMETER: u8 = 65;

#[derive(Parser)]
#[command(name = "cat2d", version, about = "Intrinsic geometry of planar and piecewise-flat CAT(kappa) scenes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a scene against the comparison inequality and its hypotheses.
    Verify {
        scene: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Iterated 2-fold cutting of a Jordan polygon down to a diameter bound.
    Cut {
        scene: PathBuf,
        /// Target leaf diameter; defaults to a quarter of the curve diameter.
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_LEAF_BUDGET)]
        leaf_budget: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Build the assembled majorizing disc and audit its 1-Lipschitz map.
    Majorize {
        scene: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Random point pairs for the Lipschitz audit.
        #[arg(long, default_value_t = 2000)]
        pairs: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Filling radius of a finite metric (CSV) or degeneracy audit of a curve.
    Fillrad {
        /// CSV distance matrix: first line n, then n rows of n entries.
        #[arg(long, conflicts_with = "scene")]
        matrix: Option<PathBuf>,
        #[arg(long, requires = "delta")]
        scene: Option<PathBuf>,
        /// Essentiality parameter for the degeneracy audit.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Emit one of the built-in counterexample scenes.
    Counterexample {
        #[arg(long, value_enum, default_value_t = Example::Annulus)]
        which: Example,
        /// Destination file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Annulus,
    SphericalCap,
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}

fn run(cli: Cli) -> u8 {
    match cli.cmd {
        Cmd::Verify {
            scene,
            trials,
            grid,
            tol,
            seed,
            out_dir,
        } => cmd_verify(&scene, trials, grid, tol, seed, &out_dir),
        Cmd::Cut {
            scene,
            epsilon,
            leaf_budget,
            out_dir,
        } => cmd_cut(&scene, epsilon, leaf_budget, &out_dir),
        Cmd::Majorize {
            scene,
            epsilon,
            pairs,
            seed,
            out_dir,
        } => cmd_majorize(&scene, epsilon, pairs, seed, &out_dir),
        Cmd::Fillrad {
            matrix,
            scene,
            delta,
            out_dir,
        } => cmd_fillrad(matrix.as_deref(), scene.as_deref(), delta, &out_dir),
        Cmd::Counterexample { which, out } => cmd_counterexample(which, out.as_deref()),
    }
}

fn fail(code: u8, msg: &str) -> u8 {
    eprintln!("cat2d: {msg}");
    code
}

fn load_scene(path: &Path) -> Result<Scene, u8> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_BAD_INPUT, &format!("{}: {e}", path.display())))?;
    Scene::from_str(&text).map_err(|e| fail(EXIT_BAD_INPUT, &format!("{}: {e}", path.display())))
}

/// Seed priority: CAT2D_SEED environment variable, then the --seed flag,
/// then the seed recorded in the scene metadata.
fn effective_seed(flag: Option<u64>, scene_seed: u64) -> u64 {
    if let Ok(v) = std::env::var("CAT2D_SEED") {
        if let Ok(s) = v.trim().parse() {
            return s;
        }
    }
    flag.unwrap_or(scene_seed)
}

fn write_out(dir: &Path, name: &str, contents: &str) -> Result<(), u8> {
    fs::create_dir_all(dir)
        .and_then(|_| fs::write(dir.join(name), contents))
        .map_err(|e| fail(EXIT_BAD_INPUT, &format!("writing {name}: {e}")))
}

fn report_envelope(scene: &Scene, seed: u64, body: serde_json::Value) -> serde_json::Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "scene": scene.name,
        "kappa": scene.kappa.value(),
        "seed": seed,
        "report": body,
    })
}

/// Extract the boundary Jordan curve of a hole-free planar scene.
fn jordan_curve(scene: &Scene) -> Result<JordanPolygon, u8> {
    match &scene.payload {
        ScenePayload::Planar(d) if d.holes().is_empty() => JordanPolygon::new(d.outer().to_vec())
            .map_err(|e| fail(EXIT_BAD_INPUT, &format!("boundary curve: {e}"))),
        ScenePayload::Planar(_) => Err(fail(
            EXIT_BAD_INPUT,
            "this command needs a simply connected plane-domain scene (no holes)",
        )),
        _ => Err(fail(EXIT_BAD_INPUT, "this command needs a plane-domain scene")),
    }
}

fn cmd_verify(
    path: &Path,
    trials: Option<usize>,
    grid: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
    out_dir: &Path,
) -> u8 {
    let scene = match load_scene(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let mut budget = VerifyBudget::default();
    if let Some(t) = trials {
        budget.trials = t;
    }
    if let Some(g) = grid {
        budget.grid = g;
    }
    if let Some(t) = tol {
        budget.tol = t;
    }
    let seed = effective_seed(seed, scene.seed);
    let report: Result<TheoremReport, GeomError> = match &scene.payload {
        ScenePayload::Planar(d) => {
            verify_theorem_1_1(&SceneRef::Planar(d), &scene.kappa, &budget, seed)
        }
        ScenePayload::Complex(c) => {
            verify_theorem_1_1(&SceneRef::Complex(c), &scene.kappa, &budget, seed)
        }
        ScenePayload::SphericalCap { radius, samples } => {
            // The closed cap is contractible, so the hypotheses hold; only
            // the comparison inequality is in question.
            SphericalCap::new(*radius, *samples).and_then(|cap| {
                let comparison = exhaustive_comparison_search(&cap, &scene.kappa, budget.tol)?;
                let verdict = if comparison.pass {
                    Verdict::Consistent
                } else {
                    Verdict::Violation
                };
                Ok(TheoremReport {
                    verdict,
                    connectivity_ok: true,
                    h1_trivial: true,
                    trials: comparison.trials,
                    samples: *samples,
                    tol: budget.tol,
                    seed,
                    comparison,
                })
            })
        }
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return fail(EXIT_BAD_INPUT, &format!("verification failed: {e}")),
    };
    let body = serde_json::to_value(&report).expect("report serializes");
    let envelope = report_envelope(&scene, seed, body);
    let mut csv = String::from("a,b,c,t,margin\n");
    for w in &report.comparison.witnesses {
        csv.push_str(&format!("{},{},{},{},{:.17e}\n", w.a, w.b, w.c, w.t, w.margin));
    }
    if let Err(code) = write_out(out_dir, "report.json", &pretty(&envelope))
        .and_then(|_| write_out(out_dir, "witnesses.csv", &csv))
    {
        return code;
    }
    println!("{:?}", report.verdict);
    match report.verdict {
        Verdict::Consistent => EXIT_OK,
        Verdict::Violation => EXIT_VIOLATION,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn cmd_cut(path: &Path, epsilon: Option<f64>, leaf_budget: usize, out_dir: &Path) -> u8 {
    let scene = match load_scene(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let curve = match jordan_curve(&scene) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let eps = epsilon.unwrap_or(0.25 * curve.diameter());
    let params = SearchParams::for_epsilon(curve.length(), eps);
    let tree = match iterated_cut(&curve, eps, leaf_budget, &params) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_BAD_INPUT, &format!("cut failed: {e}")),
    };
    let body = json!({
        "epsilon": eps,
        "leaf_budget": leaf_budget,
        "complete": tree.complete,
        "leaves": tree.leaves().len(),
        "max_leaf_diameter": tree.max_leaf_diameter(),
        "tree": tree.to_json(),
    });
    let envelope = report_envelope(&scene, scene.seed, body);
    if let Err(code) = write_out(out_dir, "cut.json", &pretty(&envelope))
        .and_then(|_| write_out(out_dir, "cut.svg", &svg::render_cut_tree(&tree)))
    {
        return code;
    }
    if tree.complete {
        println!(
            "complete: {} leaves, max diameter {:.6}",
            tree.leaves().len(),
            tree.max_leaf_diameter()
        );
        EXIT_OK
    } else {
        println!("partial: leaf budget {leaf_budget} exhausted");
        EXIT_INCONCLUSIVE
    }
}

fn cmd_majorize(
    path: &Path,
    epsilon: Option<f64>,
    pairs: usize,
    seed: Option<u64>,
    out_dir: &Path,
) -> u8 {
    let scene = match load_scene(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let curve = match jordan_curve(&scene) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let limit = scene.kappa.d_kappa();
    if limit.is_finite() && curve.length() >= 2.0 * limit {
        return fail(
            EXIT_PERIMETER,
            &format!(
                "perimeter {} is not below 2*D_kappa = {}",
                curve.length(),
                2.0 * limit
            ),
        );
    }
    let seed = effective_seed(seed, scene.seed);
    let eps = epsilon.unwrap_or(0.25 * curve.diameter());
    let params = SearchParams::for_epsilon(curve.length(), eps);
    let result = iterated_cut(&curve, eps, DEFAULT_LEAF_BUDGET, &params)
        .and_then(|tree| {
            if !tree.complete {
                return Err(GeomError::BudgetExceeded(DEFAULT_LEAF_BUDGET));
            }
            assemble_limit_majorization(&tree)
        })
        .and_then(|disc| {
            let h = (eps / 8.0).max(1e-3);
            let mut rng = CounterRng::new(seed).stream("cli-majorize");
            let excess = lipschitz_excess(&disc, curve.interior(), pairs, h, &mut rng)?;
            Ok((disc, h, excess))
        });
    let (disc, h, excess) = match result {
        Ok(v) => v,
        Err(e) => return fail(EXIT_BAD_INPUT, &format!("majorization failed: {e}")),
    };
    let lip_tol = 1e-6 + 2.0 * h;
    let lipschitz_ok = excess <= lip_tol;
    let body = json!({
        "epsilon": eps,
        "boundary_length": disc.boundary_length(),
        "curve_length": curve.length(),
        "flatness_defect": disc.flatness_defect(),
        "lipschitz": {
            "pairs": pairs,
            "h": h,
            "tolerance": lip_tol,
            "worst_excess": excess,
            "ok": lipschitz_ok,
        },
        "disc": disc.to_json(),
    });
    let envelope = report_envelope(&scene, seed, body);
    if let Err(code) = write_out(out_dir, "majorization.json", &pretty(&envelope))
        .and_then(|_| write_out(out_dir, "majorization.svg", &svg::render_majorization(&disc)))
    {
        return code;
    }
    if lipschitz_ok {
        println!("majorization ok: worst excess {excess:.3e} within {lip_tol:.3e}");
        EXIT_OK
    } else {
        println!("majorization FAILED the Lipschitz audit: excess {excess:.3e}");
        EXIT_VIOLATION
    }
}

fn cmd_fillrad(
    matrix: Option<&Path>,
    scene: Option<&Path>,
    delta: Option<f64>,
    out_dir: &Path,
) -> u8 {
    match (matrix, scene) {
        (Some(m), None) => {
            let text = match fs::read_to_string(m) {
                Ok(t) => t,
                Err(e) => return fail(EXIT_BAD_INPUT, &format!("{}: {e}", m.display())),
            };
            let metric = match FiniteMetric::from_csv(&text) {
                Ok(m) => m,
                Err(e) => return fail(EXIT_BAD_INPUT, &format!("malformed matrix: {e}")),
            };
            let n = metric.len();
            let z = fundamental_cycle(n);
            let estimate = match filling_radius_estimate(&metric, &z) {
                Ok(e) => e,
                Err(e) => return fail(EXIT_BAD_INPUT, &format!("estimate failed: {e}")),
            };
            let row = format!("n,estimate\n{n},{estimate:.17e}\n");
            if let Err(code) = write_out(out_dir, "fillrad.csv", &row) {
                return code;
            }
            print!("{row}");
            EXIT_OK
        }
        (None, Some(s)) => {
            let delta = delta.expect("clap enforces --delta with --scene");
            let scene = match load_scene(s) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let curve = match jordan_curve(&scene) {
                Ok(c) => c,
                Err(code) => return code,
            };
            let params = SearchParams::default();
            let audit = match degeneracy_audit(&curve, delta, &params) {
                Ok(a) => a,
                Err(e) => return fail(EXIT_BAD_INPUT, &format!("audit failed: {e}")),
            };
            let body = serde_json::to_value(&audit).expect("audit serializes");
            let envelope = report_envelope(&scene, scene.seed, body);
            if let Err(code) = write_out(out_dir, "audit.json", &pretty(&envelope)) {
                return code;
            }
            println!(
                "degenerate: {} (threshold {:.6}, longest cut {:?})",
                audit.degenerate, audit.threshold, audit.longest_cut
            );
            EXIT_OK
        }
        _ => fail(EXIT_BAD_INPUT, "fillrad needs exactly one of --matrix or --scene"),
    }
}

fn cmd_counterexample(which: Example, out: Option<&Path>) -> u8 {
    let scene = match which {
        Example::Annulus => Scene::annulus(),
        Example::SphericalCap => Scene::spherical_cap(),
    };
    let text = pretty(&scene.to_value());
    match out {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => EXIT_OK,
            Err(e) => fail(EXIT_BAD_INPUT, &format!("{}: {e}", path.display())),
        },
        None => {
            print!("{text}");
            EXIT_OK
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}
