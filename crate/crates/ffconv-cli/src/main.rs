//! Command-line front end: parse polynomials, dispatch to the library,
//! emit JSON/CSV.
//!
//! Exit codes: 0 success, 1 property violation, 2 parse/config error,
//! 3 precondition violation, 4 numerical failure.

mod io;

use std::hash::{BuildHasher, Hasher};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ffconv::conjecture::{self, FuzzConfig};
use ffconv::flow::{f_monotonicity_check, integrate_flow};
use ffconv::interlacing::{
    check_interlacing, root_hull, standard_grid, wronskian_envelope, wronskian_poly, WronskianSign,
    NONNEG_TOL,
};
use ffconv::spectral::{self, DisMethod};
use ffconv::verify::{run_suite, TheoremSuite};
use ffconv::RealRootedPoly;

use io::{load_poly, poly_json, write_output, CliError};

#[derive(Parser)]
#[command(
    name = "ffconv",
    version,
    about = "Finite free additive convolution of real-rooted polynomials: \
             discriminants, interlacing checks, root flows, verification \
             suites and a seeded fuzzing campaign"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convolve two polynomials of equal degree
    Convolve(TwoPolyArgs),
    /// Discriminant report (log value, entropy, normalized form)
    Discriminant(DiscriminantArgs),
    /// Entropy (mean log root gap) and the normalized discriminant
    Entropy(OnePolyArgs),
    /// Polar derivative d·p − x·p′ as raw coefficients
    Polar(OnePolyArgs),
    /// Wronskian p′q − q′p of two polynomials, with its sign on a grid
    Wronskian(TwoPolyArgs),
    /// Root-alternation and Wronskian-sign interlacing verdict
    Interlace(TwoPolyArgs),
    /// Integrate the dilation flow from t_min to 1 and export the trace
    Flow(FlowArgs),
    /// Run a property suite (base, general, flow, interlacing)
    Verify(VerifyArgs),
    /// Run the superadditivity fuzzing campaign
    Fuzz(FuzzArgs),
}

#[derive(Args)]
struct OnePolyArgs {
    /// Polynomial JSON file ({"degree":d,"roots":[…]} or {"degree":d,"coeffs":[…]})
    file: Option<PathBuf>,
    /// Inline roots, comma separated
    #[arg(long, allow_hyphen_values = true)]
    roots: Option<String>,
    /// Inline monic coefficients c_0..c_{d−1}, comma separated
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Output path (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TwoPolyArgs {
    /// First polynomial JSON file
    p_file: Option<PathBuf>,
    /// Second polynomial JSON file
    q_file: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    p_roots: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    p_coeffs: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q_roots: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q_coeffs: Option<String>,
    /// Output path (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl TwoPolyArgs {
    fn load(&self) -> Result<(RealRootedPoly, RealRootedPoly), CliError> {
        let p = load_poly(
            "p",
            self.p_file.as_ref(),
            self.p_roots.as_deref(),
            self.p_coeffs.as_deref(),
        )?;
        let q = load_poly(
            "q",
            self.q_file.as_ref(),
            self.q_roots.as_deref(),
            self.q_coeffs.as_deref(),
        )?;
        Ok((p, q))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    #[value(name = "root-pairs")]
    RootPairs,
    #[value(name = "derivative-product")]
    DerivativeProduct,
}

#[derive(Args)]
struct DiscriminantArgs {
    #[command(flatten)]
    poly: OnePolyArgs,
    /// Computation route
    #[arg(long, value_enum, default_value = "root-pairs")]
    method: MethodArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum TraceFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct FlowArgs {
    #[command(flatten)]
    polys: TwoPolyArgs,
    /// Flow start time in (0, 1)
    #[arg(long, default_value_t = 1e-4)]
    tmin: f64,
    /// Fixed RK4 steps from √tmin to 1
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Trace format
    #[arg(long, value_enum, default_value = "csv")]
    format: TraceFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which property suite to run
    #[arg(long, value_parser = parse_suite)]
    theorem: TheoremSuite,
    /// Trial count (default depends on the suite)
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed (default: drawn from the OS and printed)
    #[arg(long)]
    seed: Option<u64>,
    /// Output path for the report (default: standard output)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FuzzArgs {
    /// Campaign config JSON; omit to use defaults plus the flags below
    config: Option<PathBuf>,
    /// Override the master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override the trial count
    #[arg(long)]
    trials: Option<u64>,
    /// Override the failure slack tolerance
    #[arg(long)]
    tolerance: Option<f64>,
    /// Output prefix: writes `<prefix>.jsonl` and `<prefix>.summary.json`
    #[arg(long, default_value = "campaign")]
    out: String,
}

fn parse_suite(name: &str) -> Result<TheoremSuite, String> {
    TheoremSuite::from_name(name)
        .ok_or_else(|| format!("unknown suite {name:?} (base, general, flow, interlacing)"))
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(err) => {
            eprintln!("error: {}", err.message);
            std::process::exit(err.code);
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Convolve(args) => cmd_convolve(args),
        Command::Discriminant(args) => cmd_discriminant(args),
        Command::Entropy(args) => cmd_entropy(args),
        Command::Polar(args) => cmd_polar(args),
        Command::Wronskian(args) => cmd_wronskian(args),
        Command::Interlace(args) => cmd_interlace(args),
        Command::Flow(args) => cmd_flow(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Fuzz(args) => cmd_fuzz(args),
    }
}

fn cmd_convolve(args: TwoPolyArgs) -> Result<(), CliError> {
    let (p, q) = args.load()?;
    let r = ffconv::convolution::convolve(&p, &q)?;
    write_output(args.out.as_ref(), &(poly_json(&r) + "\n"))
}

fn cmd_discriminant(args: DiscriminantArgs) -> Result<(), CliError> {
    let p = load_poly(
        "p",
        args.poly.file.as_ref(),
        args.poly.roots.as_deref(),
        args.poly.coeffs.as_deref(),
    )?;
    let method = match args.method {
        MethodArg::RootPairs => DisMethod::RootPairs,
        MethodArg::DerivativeProduct => DisMethod::DerivativeProduct,
    };
    let report = spectral::report(&p, method);
    write_output(
        args.poly.out.as_ref(),
        &(ffconv::json::to_string(&report) + "\n"),
    )
}

fn cmd_entropy(args: OnePolyArgs) -> Result<(), CliError> {
    let p = load_poly(
        "p",
        args.file.as_ref(),
        args.roots.as_deref(),
        args.coeffs.as_deref(),
    )?;
    #[derive(Serialize)]
    struct EntropyOut {
        degree: usize,
        entropy: f64,
        normalized: f64,
    }
    let out = EntropyOut {
        degree: p.degree(),
        entropy: spectral::entropy(&p),
        normalized: spectral::normalized_discriminant(&p),
    };
    write_output(args.out.as_ref(), &(ffconv::json::to_string(&out) + "\n"))
}

fn cmd_polar(args: OnePolyArgs) -> Result<(), CliError> {
    let p = load_poly(
        "p",
        args.file.as_ref(),
        args.roots.as_deref(),
        args.coeffs.as_deref(),
    )?;
    let polar = p.polar_derivative();
    #[derive(Serialize)]
    struct PolarOut<'a> {
        degree: Option<usize>,
        coeffs: &'a [f64],
    }
    let out = PolarOut {
        degree: polar.degree(),
        coeffs: polar.coeffs(),
    };
    write_output(args.out.as_ref(), &(ffconv::json::to_string(&out) + "\n"))
}

fn cmd_wronskian(args: TwoPolyArgs) -> Result<(), CliError> {
    let (p, q) = args.load()?;
    let f = p.to_poly();
    let g = q.to_poly();
    let w = wronskian_poly(&f, &g);
    let grid = standard_grid(root_hull(&[&p, &q]));
    let mut grid_min = f64::INFINITY;
    let mut grid_max = f64::NEG_INFINITY;
    let mut saw_pos = false;
    let mut saw_neg = false;
    for &x in &grid {
        let value = w.eval(x);
        grid_min = grid_min.min(value);
        grid_max = grid_max.max(value);
        let margin = NONNEG_TOL * (wronskian_envelope(&f, &g, x) + f64::MIN_POSITIVE);
        if value > margin {
            saw_pos = true;
        } else if value < -margin {
            saw_neg = true;
        }
    }
    let sign = match (saw_pos, saw_neg) {
        (true, true) => WronskianSign::Mixed,
        (false, true) => WronskianSign::NonPos,
        _ => WronskianSign::NonNeg,
    };
    #[derive(Serialize)]
    struct WronskianOut<'a> {
        degree: Option<usize>,
        coeffs: &'a [f64],
        sign: WronskianSign,
        grid_min: f64,
        grid_max: f64,
    }
    let out = WronskianOut {
        degree: w.degree(),
        coeffs: w.coeffs(),
        sign,
        grid_min,
        grid_max,
    };
    write_output(args.out.as_ref(), &(ffconv::json::to_string(&out) + "\n"))
}

fn cmd_interlace(args: TwoPolyArgs) -> Result<(), CliError> {
    let (p, q) = args.load()?;
    let verdict = check_interlacing(&p, &q)?;
    write_output(args.out.as_ref(), &(ffconv::json::to_string(&verdict) + "\n"))
}

fn cmd_flow(args: FlowArgs) -> Result<(), CliError> {
    let (p, q) = args.polys.load()?;
    let trace = integrate_flow(&p, &q, args.tmin, args.steps)?;
    if trace.max_deviation > 1e-6 {
        eprintln!(
            "warning: integrated roots deviate from direct root finding by {:.3e}; \
             increase --steps for a tighter trace",
            trace.max_deviation
        );
    }
    let monotone = trace.log_dis_nondecreasing(1e-9);
    let report = f_monotonicity_check(&trace)?;

    #[derive(Serialize)]
    struct FlowSummary {
        degree: usize,
        t_min: f64,
        steps: usize,
        checkpoints: usize,
        final_log_dis: f64,
        total_log_dis_increase: f64,
        max_deviation: f64,
        log_dis_nondecreasing: bool,
        f_series_monotone: bool,
    }
    let summary = FlowSummary {
        degree: trace.degree(),
        t_min: args.tmin,
        steps: args.steps,
        checkpoints: trace.checkpoints(),
        final_log_dis: *trace.log_dis.last().unwrap(),
        total_log_dis_increase: trace.total_log_dis_increase(),
        max_deviation: trace.max_deviation,
        log_dis_nondecreasing: monotone,
        f_series_monotone: report.monotone,
    };
    let summary_line = ffconv::json::to_string(&summary) + "\n";

    let rendered = match args.format {
        TraceFormat::Csv => trace.to_csv(),
        TraceFormat::Json => ffconv::json::to_string(&trace) + "\n",
    };
    match &args.polys.out {
        Some(path) => {
            write_output(Some(path), &rendered)?;
            print!("{summary_line}");
        }
        None => {
            print!("{rendered}");
            eprint!("{summary_line}");
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let trials = args.trials.unwrap_or(match args.theorem {
        TheoremSuite::Base => 1000,
        TheoremSuite::General => 500,
        TheoremSuite::Flow => 200,
        TheoremSuite::Interlacing => 500,
    });
    let seed = args.seed.unwrap_or_else(entropy_seed);
    let report = run_suite(args.theorem, trials, seed);
    write_output(args.out.as_ref(), &(ffconv::json::to_string(&report) + "\n"))?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::violation(format!(
            "{} suite: {} violation(s) over {} trials (seed {seed})",
            report.suite, report.violations, report.trials
        )))
    }
}

fn cmd_fuzz(args: FuzzArgs) -> Result<(), CliError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<FuzzConfig>(&text)
                .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?
        }
        None => FuzzConfig::with_seed(entropy_seed()),
    };
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(tolerance) = args.tolerance {
        config.slack_tolerance = tolerance;
    }
    let report = conjecture::run_campaign(&config)?;

    let records_path = format!("{}.jsonl", args.out);
    let summary_path = format!("{}.summary.json", args.out);
    std::fs::write(&records_path, report.to_jsonl())
        .map_err(|e| CliError::parse(format!("cannot write {records_path}: {e}")))?;
    std::fs::write(&summary_path, report.summary_json() + "\n")
        .map_err(|e| CliError::parse(format!("cannot write {summary_path}: {e}")))?;

    #[derive(Serialize)]
    struct FuzzOut<'a> {
        master_seed: u64,
        records: &'a str,
        summary: &'a conjecture::CampaignSummary,
    }
    println!(
        "{}",
        ffconv::json::to_string(&FuzzOut {
            master_seed: config.master_seed,
            records: &records_path,
            summary: &report.summary,
        })
    );
    if report.summary.failures > 0 {
        return Err(CliError::violation(format!(
            "{} failing trial(s); worst slack {:?} at trial {:?} (seed {})",
            report.summary.failures,
            report.summary.min_slack,
            report.summary.argmin_trial,
            config.master_seed
        )));
    }
    Ok(())
}

/// A process-random seed when none is given; always printed in the output
/// so the run can be replayed.
fn entropy_seed() -> u64 {
    std::collections::hash_map::RandomState::new()
        .build_hasher()
        .finish()
}
