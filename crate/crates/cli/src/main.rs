//! Command-line surface for the strata toolkit: complex verification, Betti
//! tables, Pieri products, Chern numbers, loop holonomies and gap scans,
//! with JSON as the primary output format.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use strata_core::curvature::{chern_fhs, chern_via_form, min_gap_scan, sw1_holonomy, ParamFamily};
use strata_core::error::Error as CoreError;
use strata_core::families;
use strata_core::schubert::{
    betti_grassmannian, pieri, BoxContext, FieldCase, Partition,
};
use strata_core::spectral::GapTolerance;
use strata_core::strata_complex::{betti_mk, term_basis, verify_exactness, ComplexSpec};

const SCAN_CLOSING_THRESHOLD: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "strata",
    version,
    about = "Cochain complexes, curvature and holonomy of eigenvalue strata"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Coefficient case / operator field
    #[arg(long, global = true, value_enum, default_value_t = CaseArg::Real)]
    case: CaseArg,

    /// Output format (csv is available for degree -> count tables only)
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    Real,
    Hermitian,
}

impl From<CaseArg> for FieldCase {
    fn from(c: CaseArg) -> FieldCase {
        match c {
            CaseArg::Real => FieldCase::Real,
            CaseArg::Hermitian => FieldCase::Hermitian,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Form,
    Fhs,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Grassmannian,
    Mk,
    Pair,
}

#[derive(Subcommand)]
enum Command {
    /// Build and verify the cochain complex of the multiplicity filtration
    Complex(ComplexArgs),
    /// Betti tables: the Grassmannian, the stratum M^k, or the pair term
    Betti(BettiArgs),
    /// Pieri product of a one-row class with a partition class
    Pieri(PieriArgs),
    /// Chern number of the lowest-k eigenbundle over a closed surface
    Chern(ChernArgs),
    /// First Stiefel-Whitney holonomy of a real loop
    Holonomy(HolonomyArgs),
    /// Minimum-gap scan over random segments or a family file
    Scan(ScanArgs),
}

#[derive(Args)]
struct ComplexArgs {
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct BettiArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = SpaceArg::Grassmannian)]
    space: SpaceArg,
}

#[derive(Args)]
struct PieriArgs {
    /// Row size of the multiplying class
    #[arg(long)]
    a: u32,
    /// Partition as comma-separated decreasing parts ("" for the empty one)
    #[arg(long, default_value = "")]
    p: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
struct ChernArgs {
    /// Builtin name (pauli_sphere, block) or path to a family file
    #[arg(long)]
    family: String,
    #[arg(long)]
    k: usize,
    /// Grid as NuxNv, e.g. 200x100 (builtins only)
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    method: MethodArg,
}

#[derive(Args)]
struct HolonomyArgs {
    /// Builtin name (real_loop_2x2) or path to a loop file
    #[arg(long = "loop")]
    loop_family: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Scan a stored path file instead of random segments
    #[arg(long)]
    family: Option<PathBuf>,
}

/// What a command hands back: the rendered payload plus whether the
/// verification it performed succeeded.
struct Outcome {
    payload: String,
    verified: bool,
}

fn usage_error(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::RangeError { .. }
            | CoreError::InvalidInput(_)
            | CoreError::BoxViolation { .. }
            | CoreError::DomainViolation { .. }
            | CoreError::NotSelfAdjoint(_)
            | CoreError::LoopNotClosed { .. }
    )
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("STRATA_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }

    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Complex(args) => run_complex(&cli, args),
        Command::Betti(args) => run_betti(&cli, args),
        Command::Pieri(args) => run_pieri(&cli, args),
        Command::Chern(args) => run_chern(&cli, args),
        Command::Holonomy(args) => run_holonomy(&cli, args),
        Command::Scan(args) => run_scan(&cli, args),
    };

    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.payload) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if usage_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn emit(cli: &Cli, payload: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, format!("{payload}\n")),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

fn reject_csv(cli: &Cli) -> Result<(), CoreError> {
    if cli.format == FormatArg::Csv {
        return Err(CoreError::InvalidInput(
            "csv output is only available for degree -> count tables (betti)".into(),
        ));
    }
    Ok(())
}

// --- complex ---------------------------------------------------------------

fn run_complex(cli: &Cli, args: &ComplexArgs) -> Result<Outcome, CoreError> {
    reject_csv(cli)?;
    let spec = ComplexSpec::new(args.n, cli.case.into())?;
    let report = verify_exactness(&spec)?;
    let payload = match cli.format {
        FormatArg::Json => to_json(&report),
        FormatArg::Text => {
            let mut s = String::new();
            let dims: Vec<usize> = report.terms.iter().map(|t| t.dim).collect();
            let kernels: Vec<usize> = report.kernels.iter().map(|k| k.matrix).collect();
            writeln!(s, "n = {}, case = {}", report.n, report.case).unwrap();
            writeln!(s, "term dimensions: {dims:?}").unwrap();
            writeln!(s, "kernel dimensions: {kernels:?}").unwrap();
            writeln!(s, "degree shift: {}", report.degree_shift).unwrap();
            if report.exact {
                write!(s, "exact: all checks passed").unwrap();
            } else {
                writeln!(s, "NOT EXACT:").unwrap();
                for f in &report.failures {
                    writeln!(s, "  - {f}").unwrap();
                }
            }
            s.trim_end().to_string()
        }
        FormatArg::Csv => unreachable!(),
    };
    Ok(Outcome {
        verified: report.exact,
        payload,
    })
}

// --- betti -----------------------------------------------------------------

#[derive(Serialize)]
struct BettiReport {
    n: usize,
    k: usize,
    space: String,
    case: FieldCase,
    betti: std::collections::BTreeMap<i64, u64>,
}

fn run_betti(cli: &Cli, args: &BettiArgs) -> Result<Outcome, CoreError> {
    let case: FieldCase = cli.case.into();
    let (space, betti) = match args.space {
        SpaceArg::Grassmannian => {
            let ctx = BoxContext::new(args.k, args.n)?;
            ("grassmannian", betti_grassmannian(ctx, case))
        }
        SpaceArg::Mk => {
            let spec = ComplexSpec::new(args.n, case)?;
            ("mk", betti_mk(args.k, &spec)?)
        }
        SpaceArg::Pair => {
            let spec = ComplexSpec::new(args.n, case)?;
            let term = term_basis(args.k, &spec)?;
            let mut map = std::collections::BTreeMap::new();
            for d in term.degrees {
                *map.entry(d).or_insert(0u64) += 1;
            }
            ("pair", map)
        }
    };
    let report = BettiReport {
        n: args.n,
        k: args.k,
        space: space.to_string(),
        case,
        betti,
    };
    let payload = match cli.format {
        FormatArg::Json => to_json(&report),
        FormatArg::Csv => {
            let mut s = String::from("degree,count");
            for (d, c) in &report.betti {
                write!(s, "\n{d},{c}").unwrap();
            }
            s
        }
        FormatArg::Text => {
            let mut s = format!("betti of {} (n={}, k={}, {})", space, args.n, args.k, case);
            for (d, c) in &report.betti {
                write!(s, "\n  degree {d}: {c}").unwrap();
            }
            s
        }
    };
    Ok(Outcome {
        verified: true,
        payload,
    })
}

// --- pieri -----------------------------------------------------------------

#[derive(Serialize)]
struct PieriReport {
    a: u32,
    p: Partition,
    k: usize,
    n: usize,
    product: Vec<Partition>,
}

fn run_pieri(cli: &Cli, args: &PieriArgs) -> Result<Outcome, CoreError> {
    reject_csv(cli)?;
    let p: Partition = args.p.parse()?;
    let ctx = BoxContext::new(args.k, args.n)?;
    let product: Vec<Partition> = pieri(args.a, &p, ctx)?.into_iter().collect();
    let report = PieriReport {
        a: args.a,
        p,
        k: args.k,
        n: args.n,
        product,
    };
    let payload = match cli.format {
        FormatArg::Json => to_json(&report),
        FormatArg::Text => {
            let items: Vec<String> = report
                .product
                .iter()
                .map(|q| format!("({q})"))
                .collect();
            format!(
                "sigma_{} . sigma_({}) = {}",
                args.a,
                report.p,
                if items.is_empty() {
                    "0".to_string()
                } else {
                    items.join(" + ")
                }
            )
        }
        FormatArg::Csv => unreachable!(),
    };
    Ok(Outcome {
        verified: true,
        payload,
    })
}

// --- chern -----------------------------------------------------------------

#[derive(Serialize)]
struct ChernReport {
    family: String,
    k: usize,
    grid: String,
    method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    form_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    form_rounded: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fhs_value: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

fn parse_grid(s: &str) -> Result<(usize, usize), CoreError> {
    let (u, v) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| CoreError::InvalidInput(format!("grid must look like 200x100, got {s:?}")))?;
    let nu = u
        .parse()
        .map_err(|_| CoreError::InvalidInput(format!("bad grid size {u:?}")))?;
    let nv = v
        .parse()
        .map_err(|_| CoreError::InvalidInput(format!("bad grid size {v:?}")))?;
    Ok((nu, nv))
}

fn load_family_arg(
    name: &str,
    grid: Option<(usize, usize)>,
) -> Result<strata_core::curvature::SurfaceFamily, CoreError> {
    let path = std::path::Path::new(name);
    if path.exists() {
        let text = fs::read_to_string(path)
            .map_err(|e| CoreError::InvalidInput(format!("cannot read {name}: {e}")))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CoreError::InvalidInput(format!("bad JSON in {name}: {e}")))?;
        families::load_surface_family(&value, grid)
    } else {
        families::load_surface_family(&serde_json::json!({ "builtin": name }), grid)
    }
}

fn run_chern(cli: &Cli, args: &ChernArgs) -> Result<Outcome, CoreError> {
    reject_csv(cli)?;
    let grid = args.grid.as_deref().map(parse_grid).transpose()?;
    let family = load_family_arg(&args.family, grid)?;
    let tol = GapTolerance::default();

    let form = match args.method {
        MethodArg::Form | MethodArg::Both => Some(chern_via_form(&family, args.k, &tol)?),
        MethodArg::Fhs => None,
    };
    let fhs = match args.method {
        MethodArg::Fhs | MethodArg::Both => Some(chern_fhs(&family, args.k)?),
        MethodArg::Form => None,
    };
    let agree = match (form, fhs) {
        (Some(f), Some(i)) => Some(f.round() as i64 == i),
        _ => None,
    };
    let report = ChernReport {
        family: args.family.clone(),
        k: args.k,
        grid: format!("{}x{}", family.nu, family.nv),
        method: match args.method {
            MethodArg::Form => "form",
            MethodArg::Fhs => "fhs",
            MethodArg::Both => "both",
        }
        .to_string(),
        form_value: form,
        form_rounded: form.map(|f| f.round() as i64),
        fhs_value: fhs,
        agree,
    };
    let payload = match cli.format {
        FormatArg::Json => to_json(&report),
        FormatArg::Text => {
            let mut s = format!("family {} at grid {}, k = {}", report.family, report.grid, args.k);
            if let (Some(f), Some(r)) = (report.form_value, report.form_rounded) {
                write!(s, "\n  curvature integral: {f:.6} (rounds to {r})").unwrap();
            }
            if let Some(i) = report.fhs_value {
                write!(s, "\n  field strength:     {i}").unwrap();
            }
            if let Some(a) = report.agree {
                write!(s, "\n  methods agree: {a}").unwrap();
            }
            s
        }
        FormatArg::Csv => unreachable!(),
    };
    Ok(Outcome {
        verified: agree.unwrap_or(true),
        payload,
    })
}

// --- holonomy ----------------------------------------------------------------

#[derive(Serialize)]
struct HolonomyReport {
    #[serde(rename = "loop")]
    loop_family: String,
    k: usize,
    steps: usize,
    holonomy: i32,
}

fn run_holonomy(cli: &Cli, args: &HolonomyArgs) -> Result<Outcome, CoreError> {
    reject_csv(cli)?;
    let path = std::path::Path::new(&args.loop_family);
    let family = if path.exists() {
        let text = fs::read_to_string(path)
            .map_err(|e| CoreError::InvalidInput(format!("cannot read {}: {e}", args.loop_family)))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| CoreError::InvalidInput(format!("bad JSON: {e}")))?;
        families::load_loop_family(&value, args.steps)
    } else {
        families::load_loop_family(
            &serde_json::json!({ "builtin": args.loop_family }),
            args.steps,
        )
    }?;
    let holonomy = sw1_holonomy(&family, args.k, &GapTolerance::default())?;
    let report = HolonomyReport {
        loop_family: args.loop_family.clone(),
        k: args.k,
        steps: family.steps,
        holonomy,
    };
    let payload = match cli.format {
        FormatArg::Json => to_json(&report),
        FormatArg::Text => format!(
            "holonomy of {} at k = {} ({} steps): {:+}",
            report.loop_family, report.k, report.steps, report.holonomy
        ),
        FormatArg::Csv => unreachable!(),
    };
    Ok(Outcome {
        verified: true,
        payload,
    })
}

// --- scan --------------------------------------------------------------------

#[derive(Serialize)]
struct ScanReport {
    n: usize,
    k: usize,
    case: FieldCase,
    source: String,
    trials: usize,
    samples: usize,
    seed: u64,
    threshold: f64,
    closings: usize,
    min_gap_overall: f64,
    argmin: ScanArgmin,
    distribution: ScanDistribution,
}

#[derive(Serialize)]
struct ScanArgmin {
    trial: usize,
    t: f64,
}

#[derive(Serialize)]
struct ScanDistribution {
    min: f64,
    median: f64,
    mean: f64,
    max: f64,
}

/// Scan samples live on the normalized sphere; a (near-)scalar sample has no
/// image there and is kept raw, where its zero gap reports as a closing.
fn normalize_or_keep(
    a: &strata_core::spectral::SelfAdjointOperator,
) -> strata_core::spectral::SelfAdjointOperator {
    strata_core::spectral::normalize_to_sphere(a).unwrap_or_else(|_| a.clone())
}

fn run_scan(cli: &Cli, args: &ScanArgs) -> Result<Outcome, CoreError> {
    reject_csv(cli)?;
    let mut case: FieldCase = cli.case.into();
    let mut per_trial: Vec<(f64, f64)> = Vec::new(); // (min_gap, argmin t)
    let mut samples_used = args.samples;
    let (source, n, trials) = match &args.family {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CoreError::InvalidInput(format!("cannot read {path:?}: {e}")))?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CoreError::InvalidInput(format!("bad JSON: {e}")))?;
            let stored = families::load_path_samples(&value)?;
            let n = stored[0].n();
            case = stored[0].field();
            samples_used = stored.len();
            let last = stored.len() - 1;
            // with samples = len the scan grid hits each stored index exactly
            let sampler = move |t: f64| {
                let idx = ((t * last as f64).round() as usize).min(last);
                normalize_or_keep(&stored[idx])
            };
            let report = min_gap_scan(
                &ParamFamily::Curve {
                    sampler: &sampler,
                    samples: samples_used,
                },
                args.k,
            )?;
            per_trial.push((report.min_gap, report.argmin[0]));
            (format!("{}", path.display()), n, 1)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            for _ in 0..args.trials {
                let segment = families::random_segment(&mut rng, case, args.n);
                let on_sphere = |t: f64| normalize_or_keep(&segment(t));
                let report = min_gap_scan(
                    &ParamFamily::Curve {
                        sampler: &on_sphere,
                        samples: args.samples,
                    },
                    args.k,
                )?;
                per_trial.push((report.min_gap, report.argmin[0]));
            }
            ("random segments".to_string(), args.n, args.trials)
        }
    };

    let mut gaps: Vec<f64> = per_trial.iter().map(|x| x.0).collect();
    gaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let closings = gaps.iter().filter(|&&g| g < SCAN_CLOSING_THRESHOLD).count();
    let (worst_idx, worst) = per_trial
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.partial_cmp(&b.1 .0).unwrap())
        .map(|(i, v)| (i, *v))
        .expect("at least one trial");
    let report = ScanReport {
        n,
        k: args.k,
        case,
        source,
        trials,
        samples: samples_used,
        seed: cli.seed,
        threshold: SCAN_CLOSING_THRESHOLD,
        closings,
        min_gap_overall: worst.0,
        argmin: ScanArgmin {
            trial: worst_idx,
            t: worst.1,
        },
        distribution: ScanDistribution {
            min: gaps[0],
            median: gaps[gaps.len() / 2],
            mean: gaps.iter().sum::<f64>() / gaps.len() as f64,
            max: gaps[gaps.len() - 1],
        },
    };
    let payload = match cli.format {
        FormatArg::Json => to_json(&report),
        FormatArg::Text => format!(
            "scanned {} ({} trials x {} samples, n = {}, k = {}, {}):\n  \
             min gap {:.3e} at trial {} t = {:.6}\n  \
             gaps below {:.0e}: {}\n  distribution: min {:.3e} median {:.3e} mean {:.3e} max {:.3e}",
            report.source,
            report.trials,
            report.samples,
            report.n,
            report.k,
            report.case,
            report.min_gap_overall,
            report.argmin.trial,
            report.argmin.t,
            report.threshold,
            report.closings,
            report.distribution.min,
            report.distribution.median,
            report.distribution.mean,
            report.distribution.max
        ),
        FormatArg::Csv => unreachable!(),
    };
    // informational command: exit 0 regardless of findings
    Ok(Outcome {
        verified: true,
        payload,
    })
}
