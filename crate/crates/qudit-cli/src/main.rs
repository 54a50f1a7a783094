//! `quditsim` — batch driver for the radix-n register simulator.
//!
//! Subcommands: `dj` (Deutsch-Jozsa run), `classify` (function
//! classification and affine detection), `grover` (search trace or scan),
//! `radix-study` (radix comparison CSV), `verify` (numerical identity
//! battery). Reports are UTF-8 JSON on stdout; a human summary goes to
//! stderr unless `--quiet`. Exit codes: 0 ok, 1 check failure, 2 usage
//! error.

mod input;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qudit_sim::batch;
use qudit_sim::checks::{run_all_checks, VerifyConfig};
use qudit_sim::deutsch_jozsa::{dj_decide, dj_run_full, dj_run_phase};
use qudit_sim::grover::{
    default_scan_depth, find_optimal_iterations, grover_iterate, radix_study, GroverProblem,
    RadixStudyRow,
};
use qudit_sim::mvlogic::{classify, count_balanced, detect_affine};
use qudit_sim::qft::qft_power_structure;
use qudit_sim::{RegisterShape, SimError};

use input::FunctionInput;
use report::RunReport;

#[derive(Parser)]
#[command(
    name = "quditsim",
    version,
    about = "Dense radix-n qudit register simulator: multi-valued Deutsch-Jozsa and Grover search"
)]
struct Cli {
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the generalized Deutsch-Jozsa circuit on a function.
    Dj(DjArgs),
    /// Classify a function and detect its affine form, if any.
    Classify(ClassifyArgs),
    /// Run Grover iterations (JSONL trace) or scan for the first peak.
    Grover(GroverArgs),
    /// Compare radices at matched search-space sizes (CSV output).
    RadixStudy(RadixStudyArgs),
    /// Run the numerical verification battery.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DjArgs {
    #[command(flatten)]
    input: FunctionInput,

    /// Simulate the two-register circuit instead of the phase-oracle form.
    #[arg(long)]
    full: bool,

    /// Also sample this many measurements of the output register.
    #[arg(long)]
    runs: Option<usize>,

    /// Seed for sampled measurements.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    input: FunctionInput,
}

#[derive(Args)]
struct GroverArgs {
    /// Radix of each digit.
    #[arg(short = 'n', long)]
    radix: usize,

    /// Number of digits in the register.
    #[arg(short = 'r', long)]
    arity: usize,

    /// Searched state: a basis index, or comma-separated digits ("2,1").
    #[arg(long)]
    target: String,

    /// Number of Grover iterations to trace.
    #[arg(long, conflicts_with = "scan")]
    iterations: Option<usize>,

    /// Scan iteration counts for the first probability peak.
    #[arg(long)]
    scan: bool,

    /// Scan depth (default ceil(3·n·√N)).
    #[arg(long)]
    k_max: Option<usize>,

    /// Recorded in the report for reproducibility of downstream sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RadixStudyArgs {
    /// Minimum search-space size each radix must reach.
    #[arg(long)]
    nmin: usize,

    /// Comma-separated radices, e.g. "2,3,4,5" (empty for none).
    #[arg(long, allow_hyphen_values = false)]
    radices: String,

    /// Skip rows whose search space would exceed this dimension.
    #[arg(long)]
    dim_cap: Option<usize>,

    /// Emit the JSON report instead of CSV on stdout.
    #[arg(long)]
    json: bool,

    /// Worker threads for the row scans (default: rayon's choice).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Upper radix (inclusive, >= 2) for the Fourier identity sweeps.
    #[arg(long, default_value_t = 16)]
    radix_max: usize,

    /// Seed for the randomized suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Worker threads for the check battery (default: rayon's choice).
    #[arg(long)]
    jobs: Option<usize>,
}

/// Exit code for a failed run: bad inputs are usage errors (2), numerical
/// failures inside an otherwise valid run are check failures (1).
fn exit_code_for(err: &SimError) -> u8 {
    match err {
        SimError::NonFinite(_) | SimError::NotNormalized(_) | SimError::ZeroVector => 1,
        _ => 2,
    }
}

fn emit(report: &RunReport, quiet: bool, summary: &str) {
    println!("{}", serde_json::to_string(report).expect("report serializes"));
    if !quiet && !summary.is_empty() {
        eprintln!("{summary}");
    }
}

fn cmd_dj(args: &DjArgs, quiet: bool) -> Result<u8, SimError> {
    let (f, given_form) = args.input.resolve()?;
    let shape = f.shape();
    let outcome = if args.full { dj_run_full(&f)? } else { dj_run_phase(&f)? };
    let dist = outcome.final_state.measure_distribution()?;
    let sampling = args.runs.map(|runs| dj_decide(&f, runs, args.seed)).transpose()?;

    let payload = json!({
        "radix": shape.radix(),
        "arity": shape.arity(),
        "circuit": if args.full { "full" } else { "phase" },
        "input_affine": given_form.as_ref().map(|form| form.coefficients().to_vec()),
        "amplitudes": outcome.final_state.amplitudes(),
        "probabilities": dist.probabilities(),
        "decision": outcome.decision,
        "coefficients": outcome.recovered_coefficients,
        "phase_constant_c": outcome.recovered_phase_constant,
        "a0_simulation_only": outcome.recovered_constant_term(),
        "y_register": outcome.y_final,
        "sampling": sampling,
    });
    let parameters = json!({
        "function": args.input.function,
        "chart": args.input.chart,
        "affine": args.input.affine,
        "full": args.full,
        "runs": args.runs,
    });

    let summary = match (&outcome.decision, &outcome.recovered_coefficients) {
        (d, Some(coeffs)) => format!(
            "decision {d:?}, coefficients {coeffs:?}, C = {}",
            outcome.recovered_phase_constant.expect("phase present with coefficients")
        ),
        (d, None) => format!("decision {d:?}"),
    };
    let report = RunReport::ok("dj", parameters, Some(args.seed), payload);
    emit(&report, quiet, &summary);
    Ok(0)
}

fn cmd_classify(args: &ClassifyArgs, quiet: bool) -> Result<u8, SimError> {
    let (f, _) = args.input.resolve()?;
    let shape = f.shape();
    let class = classify(&f);
    let affine = detect_affine(&f);
    let balanced_total = count_balanced(shape).ok();

    let payload = json!({
        "radix": shape.radix(),
        "arity": shape.arity(),
        "class": class.tag,
        "histogram": class.histogram,
        "affine": affine.as_ref().map(|form| form.coefficients().to_vec()),
        "balanced_tables_on_shape": balanced_total,
    });
    let parameters = json!({
        "function": args.input.function,
        "chart": args.input.chart,
        "affine": args.input.affine,
    });

    let summary = match &affine {
        Some(form) => format!("{:?}, affine {:?}", class.tag, form.coefficients()),
        None => format!("{:?}, not affine", class.tag),
    };
    let report = RunReport::ok("classify", parameters, None, payload);
    emit(&report, quiet, &summary);
    Ok(0)
}

fn parse_target(shape: RegisterShape, text: &str) -> Result<usize, SimError> {
    if text.contains(',') {
        let digits: Vec<usize> = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| SimError::InvalidArgument(format!("invalid target digit '{t}'")))
            })
            .collect::<Result<_, _>>()?;
        shape.digits_to_index(&digits)
    } else {
        text.trim()
            .parse()
            .map_err(|_| SimError::InvalidArgument(format!("invalid target '{text}'")))
    }
}

fn cmd_grover(args: &GroverArgs, quiet: bool) -> Result<u8, SimError> {
    let shape = RegisterShape::new(args.radix, args.arity)?;
    let target = parse_target(shape, &args.target)?;
    let problem = GroverProblem::new(shape, target)?;
    let parameters = json!({
        "radix": args.radix,
        "arity": args.arity,
        "target": target,
        "iterations": args.iterations,
        "scan": args.scan,
        "k_max": args.k_max,
    });

    if args.scan {
        let depth = args.k_max.unwrap_or_else(|| default_scan_depth(&problem));
        let (k_opt, p_max) = find_optimal_iterations(&problem, depth)?;
        let payload = json!({
            "mode": "scan",
            "radix": args.radix,
            "arity": args.arity,
            "dimension": shape.dimension(),
            "target": target,
            "target_digits": problem.target_digits(),
            "scan_depth": depth,
            "k_opt": k_opt,
            "p_max": p_max,
        });
        let report = RunReport::ok("grover", parameters, Some(args.seed), payload);
        emit(&report, quiet, &format!("k_opt {k_opt}, p_max {p_max}"));
        return Ok(0);
    }

    let iterations = args.iterations.ok_or_else(|| {
        SimError::InvalidArgument("provide --iterations K or --scan".into())
    })?;
    let trace = grover_iterate(&problem, iterations)?;
    for step in &trace.steps {
        println!("{}", serde_json::to_string(step).expect("step serializes"));
    }
    let last = trace.steps.last().expect("trace has step 0");
    let payload = json!({
        "mode": "run",
        "radix": args.radix,
        "arity": args.arity,
        "dimension": shape.dimension(),
        "target": target,
        "target_digits": problem.target_digits(),
        "iterations": iterations,
        "final_target_probability": last.target_probability,
        "final_max_other_probability": last.max_other_probability,
    });
    let report = RunReport::ok("grover", parameters, Some(args.seed), payload);
    emit(
        &report,
        quiet,
        &format!(
            "{} steps, final target probability {}",
            trace.steps.len(),
            last.target_probability
        ),
    );
    Ok(0)
}

fn render_csv(rows: &[RadixStudyRow]) -> String {
    let mut csv = String::from("n,r,N,k_opt,p_max\n");
    for row in rows {
        let cell = |v: Option<String>| v.unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.radix,
            cell(row.arity.map(|v| v.to_string())),
            cell(row.dimension.map(|v| v.to_string())),
            cell(row.k_opt.map(|v| v.to_string())),
            cell(row.p_max.map(|v| v.to_string())),
        ));
    }
    csv
}

fn cmd_radix_study(args: &RadixStudyArgs, quiet: bool) -> Result<u8, SimError> {
    let radices: Vec<usize> = args
        .radices
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| SimError::InvalidArgument(format!("invalid radix '{t}'")))
        })
        .collect::<Result<_, _>>()?;

    let nmin = args.nmin;
    let dim_cap = args.dim_cap;
    let rows = batch::with_threads(args.jobs, move || radix_study(nmin, &radices, dim_cap));
    let csv = render_csv(&rows);

    if args.json {
        let parameters = json!({
            "nmin": args.nmin,
            "radices": args.radices,
            "dim_cap": args.dim_cap,
        });
        let payload = json!({ "rows": rows, "csv": csv });
        let report = RunReport::ok("radix-study", parameters, None, payload);
        emit(&report, quiet, &format!("{} rows", rows.len()));
    } else {
        print!("{csv}");
        if !quiet {
            eprintln!("{} rows ({} skipped)", rows.len(), rows.iter().filter(|r| r.skipped).count());
        }
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs, quiet: bool) -> Result<u8, SimError> {
    if args.radix_max < 2 {
        return Err(SimError::InvalidArgument(format!(
            "--radix-max must be at least 2, got {}",
            args.radix_max
        )));
    }
    let cfg = VerifyConfig { radix_max: args.radix_max, seed: args.seed };
    let checks = batch::with_threads(args.jobs, move || run_all_checks(&cfg))?;
    let all_passed = checks.iter().all(|c| c.passed);

    let power_reports = (2..=args.radix_max)
        .map(qft_power_structure)
        .collect::<Result<Vec<_>, _>>()?;

    if !quiet {
        for check in &checks {
            eprintln!(
                "{} {:<32} max_dev={:.3e} tol={:.3e}",
                if check.passed { "PASS" } else { "FAIL" },
                check.name,
                check.max_deviation,
                check.tolerance
            );
        }
    }

    let parameters = json!({ "radix_max": args.radix_max });
    let payload = json!({
        "all_passed": all_passed,
        "checks": checks,
        "qft_power_structure": power_reports,
    });
    let report = RunReport::ok("verify", parameters, Some(args.seed), payload);
    emit(
        &report,
        quiet,
        &format!(
            "{}/{} checks passed",
            checks.iter().filter(|c| c.passed).count(),
            checks.len()
        ),
    );
    Ok(if all_passed { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    let (name, result) = match &cli.command {
        Command::Dj(args) => ("dj", cmd_dj(args, quiet)),
        Command::Classify(args) => ("classify", cmd_classify(args, quiet)),
        Command::Grover(args) => ("grover", cmd_grover(args, quiet)),
        Command::RadixStudy(args) => ("radix-study", cmd_radix_study(args, quiet)),
        Command::Verify(args) => ("verify", cmd_verify(args, quiet)),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let report = RunReport::error(name, err.to_string());
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
