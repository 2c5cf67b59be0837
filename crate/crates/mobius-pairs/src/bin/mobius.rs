//! Command-line front end: sieve dumps, transforms over CSV functions,
//! density operations, the pair constructions, and the named experiments.
//!
//! Exit codes: 0 success, 1 verdict failure, 2 usage/argument error,
//! 3 capacity/overflow error.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use mobius_pairs::arithfn::{
    dirichlet_transform, moebius_transform, truncated_dirichlet, truncated_moebius,
};
use mobius_pairs::construct::{
    construct_prescribed_pair, greedy_thin_support_pair, ConstructionReport, PrimeSelection,
    ZFunction,
};
use mobius_pairs::density::{self, Checkpoint, CheckpointPlan, DensityEstimate};
use mobius_pairs::error::{Error, Result};
use mobius_pairs::experiment::{
    recompute_verdict, run_lemma_checks, run_primes_demo, run_prop_best, run_theorem1,
    run_theorem2, run_theorem3, ExperimentReport, FunctionSpec, Theorem2Tolerances,
    LEMMA_CHECK_SEED,
};
use mobius_pairs::io as mio;
use mobius_pairs::sieve::{build_sieve, SieveTables};

#[derive(Parser)]
#[command(name = "mobius", version, about = "Möbius pairs at desk scale")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build sieve tables and dump one as CSV (n,value)
    Sieve {
        #[arg(long)]
        limit: u64,
        #[arg(long, value_enum)]
        dump: SieveDump,
        /// Output path; stdout when absent
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Apply a transform to a function read from CSV
    Transform {
        /// Input CSV with header n,value, rows n = 1..N
        #[arg(long)]
        input: PathBuf,
        /// dirichlet | moebius | trunc-dirichlet:Y | trunc-moebius:Y
        #[arg(long)]
        op: String,
        /// Restrict to [1, limit] (defaults to the input length)
        #[arg(long)]
        limit: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Density estimates, set-of-multiples counting, and formula checks
    Density {
        #[command(subcommand)]
        op: DensityCmd,
    },
    /// Build Möbius pairs with prescribed properties
    Construct {
        #[command(subcommand)]
        kind: ConstructCmd,
    },
    /// Run named experiments and write JSON reports
    Experiment {
        #[command(subcommand)]
        action: ExperimentCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SieveDump {
    Mu,
    Spf,
    Primes,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

/// Checkpoint and output options shared by the density subcommands.
#[derive(Args)]
struct DensityOpts {
    #[arg(long, default_value_t = 1_000_000)]
    limit: u64,
    /// Smallest checkpoint of the geometric plan
    #[arg(long, default_value_t = 1000)]
    checkpoint_min: u64,
    /// Geometric ratio between consecutive checkpoints
    #[arg(long, default_value_t = 2)]
    checkpoint_ratio: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

impl DensityOpts {
    fn plan(&self) -> Result<CheckpointPlan> {
        if self.checkpoint_min < 10 {
            return Err(Error::Argument("checkpoint minimum must be >= 10".into()));
        }
        CheckpointPlan::geometric(
            self.limit,
            self.checkpoint_min.min(self.limit),
            self.checkpoint_ratio,
        )
    }
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Density of the support of a CSV function
    Support {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        opts: DensityOpts,
    },
    /// Mean value (1/x) Σ f(n), optionally of |f|
    Mean {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        absolute: bool,
        #[command(flatten)]
        opts: DensityOpts,
    },
    /// Partial sums Σ 1/a over a set or a function's support
    ReciprocalSum {
        #[arg(long, value_delimiter = ',')]
        elements: Vec<u64>,
        #[arg(long, conflicts_with = "elements")]
        input: Option<PathBuf>,
        #[command(flatten)]
        opts: DensityOpts,
    },
    /// Set of multiples of a finite set
    Multiples {
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<u64>,
        #[command(flatten)]
        opts: DensityOpts,
    },
    /// Formula bound 1 - prod(1 - 1/a)
    HrBound {
        #[arg(long, value_delimiter = ',')]
        elements: Vec<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Counts of n with a prescribed divisor set (and squarefree quotients)
    PrescribedDivisors {
        #[arg(long = "set-a", value_delimiter = ',', required = true)]
        set_a: Vec<u64>,
        #[arg(long = "set-s", value_delimiter = ',')]
        set_s: Vec<u64>,
        #[arg(long = "set-t", value_delimiter = ',')]
        set_t: Vec<u64>,
        #[arg(long, value_enum, default_value_t = PrescribedRoute::Empirical)]
        route: PrescribedRoute,
        #[command(flatten)]
        opts: DensityOpts,
    },
    /// Σ g(n)/n up to y, with the absolute companion
    Wintner {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        y: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Mean-value-zero diagnostics for Σ h(n)/n
    Kronecker {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        tol_g: f64,
        #[arg(long, default_value_t = 0.01)]
        tol_h: f64,
        #[command(flatten)]
        opts: DensityOpts,
    },
    /// Density formula for squarefree integers coprime to P
    Landau {
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Empirical counterpart of the landau formula
    SquarefreeCoprime {
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[command(flatten)]
        opts: DensityOpts,
    },
    /// Density of n with a divisor >= T from the set, per threshold
    Evaporating {
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        thresholds: Vec<u64>,
        #[command(flatten)]
        opts: DensityOpts,
    },
    /// Growth diagnostic count(x) (log x)^delta / x
    LogGrowth {
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<u64>,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        opts: DensityOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PrescribedRoute {
    Empirical,
    Formula,
    Expansion,
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Multiplicative pair with prescribed support densities
    Prescribed {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Greedy thin-support pair under a growth bound Z
    GreedyThin {
        /// log | loglog | logpow:C | table:FILE
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Run one named experiment
    Run {
        #[arg(value_enum)]
        name: ExperimentName,
        #[command(flatten)]
        opts: ExperimentOpts,
    },
    /// Run every experiment with default parameters
    All {
        #[command(flatten)]
        opts: ExperimentOpts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentName {
    Theorem1,
    Theorem2,
    Theorem3,
    PropBest,
    PrimesDemo,
    LemmaChecks,
}

impl ExperimentName {
    fn all() -> [ExperimentName; 6] {
        [
            ExperimentName::Theorem1,
            ExperimentName::Theorem2,
            ExperimentName::Theorem3,
            ExperimentName::PropBest,
            ExperimentName::PrimesDemo,
            ExperimentName::LemmaChecks,
        ]
    }
}

#[derive(Args)]
struct ExperimentOpts {
    #[arg(long, default_value_t = 1_000_000)]
    limit: u64,
    #[arg(long, default_value_t = 1000)]
    checkpoint_min: u64,
    #[arg(long, default_value_t = 2)]
    checkpoint_ratio: u64,
    /// Function for theorem1/theorem2: squares | explicit:FILE
    #[arg(long, default_value = "squares")]
    g: String,
    /// Stabilization tolerance for theorem1
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    /// Truncation bounds for theorem2
    #[arg(long, value_delimiter = ',', default_values_t = [10u64, 100, 1000, 10_000])]
    y_list: Vec<u64>,
    #[arg(long, default_value_t = 0.6)]
    alpha: f64,
    #[arg(long, default_value_t = 0.7)]
    beta: f64,
    /// Greedy tolerance for theorem3
    #[arg(long, default_value_t = 0.01)]
    tol: f64,
    /// Empirical-vs-predicted tolerance for theorem3
    #[arg(long, default_value_t = 0.02)]
    empirical_tol: f64,
    /// Growth bound for prop-best: log | loglog | logpow:C | table:FILE
    #[arg(long, default_value = "log")]
    z: String,
    /// Smoothness cut for primes-demo
    #[arg(long, default_value_t = 10)]
    y: u64,
    #[arg(long, default_value_t = LEMMA_CHECK_SEED)]
    seed: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

impl ExperimentOpts {
    fn validate(&self) -> Result<()> {
        if self.limit < 1000 {
            return Err(Error::Argument("experiment limit must be >= 10^3".into()));
        }
        if self.checkpoint_min < 10 {
            return Err(Error::Argument("checkpoint minimum must be >= 10".into()));
        }
        Ok(())
    }

    fn plan(&self) -> Result<CheckpointPlan> {
        CheckpointPlan::geometric(
            self.limit,
            self.checkpoint_min.min(self.limit),
            self.checkpoint_ratio,
        )
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Sieve {
            limit,
            dump,
            output,
        } => cmd_sieve(limit, dump, output.as_deref()),
        Command::Transform {
            input,
            op,
            limit,
            output,
        } => cmd_transform(&input, &op, limit, output.as_deref()),
        Command::Density { op } => cmd_density(op),
        Command::Construct { kind } => cmd_construct(kind),
        Command::Experiment { action } => cmd_experiment(action),
    }
}

/// Writes through a closure either to the given path or to stdout.
fn with_output<F>(output: Option<&Path>, write: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    match output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            write(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_sieve(limit: u64, dump: SieveDump, output: Option<&Path>) -> Result<u8> {
    let tables = build_sieve(limit)?;
    with_output(output, |w| {
        writeln!(w, "n,value")?;
        match dump {
            SieveDump::Mu => {
                for n in 1..=limit {
                    writeln!(w, "{n},{}", tables.mu(n))?;
                }
            }
            SieveDump::Spf => {
                for n in 2..=limit {
                    writeln!(w, "{n},{}", tables.spf(n))?;
                }
            }
            SieveDump::Primes => {
                for (i, p) in tables.primes().iter().enumerate() {
                    writeln!(w, "{},{p}", i + 1)?;
                }
            }
        }
        Ok(())
    })?;
    eprintln!("sieve: built tables up to {limit}");
    Ok(0)
}

fn cmd_transform(input: &Path, op: &str, limit: Option<u64>, output: Option<&Path>) -> Result<u8> {
    let f = mio::read_function_csv_path(input)?;
    let f = match limit {
        Some(0) => return Err(Error::Argument("limit must be >= 1".into())),
        Some(n) if n > f.limit() => {
            return Err(Error::Range {
                what: "transform limit",
                value: n,
                limit: f.limit(),
            })
        }
        Some(n) => f.truncate(n),
        None => f,
    };
    let result = match op.split_once(':') {
        None => match op {
            "dirichlet" => dirichlet_transform(&f)?,
            "moebius" => moebius_transform(&f, &build_sieve(f.limit().max(2))?)?,
            other => {
                return Err(Error::Argument(format!(
                    "unknown op '{other}' (expected dirichlet, moebius, \
                     trunc-dirichlet:Y, trunc-moebius:Y)"
                )))
            }
        },
        Some((kind, y_str)) => {
            let y: u64 = y_str
                .parse()
                .map_err(|e| Error::Argument(format!("bad truncation bound '{y_str}': {e}")))?;
            match kind {
                "trunc-dirichlet" => truncated_dirichlet(&f, y)?,
                "trunc-moebius" => truncated_moebius(&f, y, &build_sieve(f.limit().max(2))?)?,
                other => return Err(Error::Argument(format!("unknown op '{other}:'"))),
            }
        }
    };
    with_output(output, |w| mio::write_function_csv(w, &result))?;
    eprintln!("transform: {op} over [1, {}]", result.limit());
    Ok(0)
}

#[derive(Serialize)]
struct DensityJson {
    op: String,
    params: BTreeMap<String, String>,
    checkpoints: Vec<Checkpoint>,
    verdict: Option<bool>,
}

fn emit_estimate(
    op: &str,
    params: BTreeMap<String, String>,
    est: &DensityEstimate,
    verdict: Option<bool>,
    format: OutputFormat,
    output: Option<&Path>,
) -> Result<()> {
    match format {
        OutputFormat::Csv => with_output(output, |w| mio::write_density_csv(w, est)),
        OutputFormat::Json => {
            let json = serde_json::to_string_pretty(&DensityJson {
                op: op.to_string(),
                params,
                checkpoints: est.checkpoints.clone(),
                verdict,
            })
            .expect("density report serialization");
            with_output(output, |w| writeln!(w, "{json}"))
        }
    }
}

#[derive(Serialize)]
struct ScalarJson {
    op: String,
    params: BTreeMap<String, String>,
    values: BTreeMap<String, f64>,
}

fn emit_scalars(
    op: &str,
    params: BTreeMap<String, String>,
    values: BTreeMap<String, f64>,
    format: OutputFormat,
    output: Option<&Path>,
) -> Result<()> {
    match format {
        OutputFormat::Csv => with_output(output, |w| {
            writeln!(w, "name,value")?;
            for (k, v) in &values {
                writeln!(w, "{k},{v}")?;
            }
            Ok(())
        }),
        OutputFormat::Json => {
            let json = serde_json::to_string_pretty(&ScalarJson {
                op: op.to_string(),
                params,
                values,
            })
            .expect("scalar report serialization");
            with_output(output, |w| writeln!(w, "{json}"))
        }
    }
}

fn emit_points(header: (&str, &str), points: &[(u64, f64)], output: Option<&Path>) -> Result<()> {
    with_output(output, |w| {
        writeln!(w, "{},{}", header.0, header.1)?;
        for &(x, v) in points {
            writeln!(w, "{x},{v}")?;
        }
        Ok(())
    })
}

fn params_of<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn join_u64(values: &[u64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_density(op: DensityCmd) -> Result<u8> {
    match op {
        DensityCmd::Support { input, opts } => {
            let f = mio::read_function_csv_path(&input)?;
            let plan = opts.plan()?;
            let est = density::support_density(&f, &plan)?;
            let params = params_of([("input", input.display().to_string())]);
            emit_estimate(
                "support",
                params,
                &est,
                None,
                opts.format,
                opts.output.as_deref(),
            )?;
            println!(
                "support density at {}: {:.6}",
                est.final_x(),
                est.final_ratio
            );
        }
        DensityCmd::Mean {
            input,
            absolute,
            opts,
        } => {
            let f = mio::read_function_csv_path(&input)?;
            let plan = opts.plan()?;
            let est = density::mean_value(&f, &plan, absolute)?;
            let params = params_of([
                ("input", input.display().to_string()),
                ("absolute", absolute.to_string()),
            ]);
            emit_estimate(
                "mean",
                params,
                &est,
                None,
                opts.format,
                opts.output.as_deref(),
            )?;
            println!("mean value at {}: {:.6}", est.final_x(), est.final_ratio);
        }
        DensityCmd::ReciprocalSum {
            elements,
            input,
            opts,
        } => {
            let elements = match input {
                Some(path) => mio::read_function_csv_path(&path)?.support(),
                None => elements,
            };
            let plan = opts.plan()?;
            let sums = density::reciprocal_sum_partial(&elements, &plan);
            emit_points(("x", "sum"), &sums, opts.output.as_deref())?;
            println!(
                "reciprocal sum at {}: {:.6}",
                sums.last().map(|&(x, _)| x).unwrap_or(0),
                sums.last().map(|&(_, s)| s).unwrap_or(0.0)
            );
        }
        DensityCmd::Multiples { elements, opts } => {
            let plan = opts.plan()?;
            let (_, est) = density::set_of_multiples(&elements, opts.limit, &plan)?;
            let params = params_of([("elements", join_u64(&elements))]);
            emit_estimate(
                "multiples",
                params,
                &est,
                None,
                opts.format,
                opts.output.as_deref(),
            )?;
            println!(
                "multiples density at {}: {:.6}",
                est.final_x(),
                est.final_ratio
            );
        }
        DensityCmd::HrBound {
            elements,
            format,
            output,
        } => {
            let bound = density::heilbronn_rohrbach_bound(&elements);
            let params = params_of([("elements", join_u64(&elements))]);
            let values = [("bound".to_string(), bound)].into_iter().collect();
            emit_scalars("hr-bound", params, values, format, output.as_deref())?;
            println!("bound: {bound:.6}");
        }
        DensityCmd::PrescribedDivisors {
            set_a,
            set_s,
            set_t,
            route,
            opts,
        } => {
            let plan = opts.plan()?;
            let params = params_of([
                ("set_a", join_u64(&set_a)),
                ("set_s", join_u64(&set_s)),
                ("set_t", join_u64(&set_t)),
            ]);
            // the formula route never consults the sieve tables
            let est = match route {
                PrescribedRoute::Empirical => {
                    let tables = build_sieve(opts.limit)?;
                    density::prescribed_divisors_empirical(&set_a, &set_s, &set_t, &tables, &plan)?
                }
                PrescribedRoute::Formula => {
                    density::prescribed_divisors_formula(&set_a, &set_s, &set_t, opts.limit, &plan)?
                        .estimate
                }
                PrescribedRoute::Expansion => {
                    let tables = build_sieve(opts.limit)?;
                    let counts = density::prescribed_divisors_chi_counts(
                        &set_a, &set_s, &set_t, &tables, &plan,
                    )?;
                    DensityEstimate::from_counts(plan.points(), counts.as_slice())
                }
            };
            emit_estimate(
                "prescribed-divisors",
                params,
                &est,
                None,
                opts.format,
                opts.output.as_deref(),
            )?;
            println!(
                "prescribed-divisor density at {}: {:.6}",
                est.final_x(),
                est.final_ratio
            );
        }
        DensityCmd::Wintner {
            input,
            y,
            format,
            output,
        } => {
            let g = mio::read_function_csv_path(&input)?;
            let sums = density::wintner_prediction(&g, y)?;
            let params = params_of([("input", input.display().to_string()), ("y", y.to_string())]);
            let values = [
                ("signed".to_string(), sums.signed),
                ("absolute".to_string(), sums.absolute),
            ]
            .into_iter()
            .collect();
            emit_scalars("wintner", params, values, format, output.as_deref())?;
            println!(
                "wintner sums up to {y}: {:.6} (abs {:.6})",
                sums.signed, sums.absolute
            );
        }
        DensityCmd::Kronecker {
            input,
            tol_g,
            tol_h,
            opts,
        } => {
            let h = mio::read_function_csv_path(&input)?;
            let plan = opts.plan()?;
            let report = density::kronecker_check(&h, &plan, tol_g, tol_h)?;
            match opts.format {
                OutputFormat::Json => {
                    let json = serde_json::to_string_pretty(&report).expect("kronecker report");
                    with_output(opts.output.as_deref(), |w| writeln!(w, "{json}"))?;
                }
                OutputFormat::Csv => with_output(opts.output.as_deref(), |w| {
                    writeln!(w, "x,g,h_ratio")?;
                    for (&(x, g), &(_, hr)) in report.g_series.iter().zip(&report.h_ratio_series) {
                        writeln!(w, "{x},{g},{hr}")?;
                    }
                    Ok(())
                })?,
            }
            println!(
                "kronecker verdict: {} (G oscillation {:.6}, final H/x {:.6})",
                report.verdict, report.g_tail_oscillation, report.final_h_ratio
            );
            return Ok(if report.verdict { 0 } else { 1 });
        }
        DensityCmd::Landau {
            primes,
            format,
            output,
        } => {
            let value = density::landau_density(&primes)?;
            let params = params_of([("primes", join_u64(&primes))]);
            let values = [("density".to_string(), value)].into_iter().collect();
            emit_scalars("landau", params, values, format, output.as_deref())?;
            println!("landau density: {value:.6}");
        }
        DensityCmd::SquarefreeCoprime { primes, opts } => {
            let plan = opts.plan()?;
            let tables = build_sieve(opts.limit)?;
            let est = density::squarefree_coprime_density(&primes, &plan, &tables)?;
            let params = params_of([("primes", join_u64(&primes))]);
            emit_estimate(
                "squarefree-coprime",
                params,
                &est,
                None,
                opts.format,
                opts.output.as_deref(),
            )?;
            println!(
                "squarefree-coprime density at {}: {:.6}",
                est.final_x(),
                est.final_ratio
            );
        }
        DensityCmd::Evaporating {
            elements,
            thresholds,
            opts,
        } => {
            let plan = opts.plan()?;
            let profile = density::evaporating_profile(&elements, &thresholds, opts.limit, &plan)?;
            let points: Vec<(u64, f64)> = profile
                .iter()
                .map(|(t, est)| (*t, est.final_ratio))
                .collect();
            emit_points(("threshold", "density"), &points, opts.output.as_deref())?;
            println!("evaporating profile over {} thresholds", points.len());
        }
        DensityCmd::LogGrowth {
            elements,
            delta,
            opts,
        } => {
            let plan = opts.plan()?;
            let series = density::log_power_growth(&elements, delta, &plan)?;
            emit_points(("x", "scaled_count"), &series, opts.output.as_deref())?;
            println!(
                "log-growth diagnostic at {}: {:.6}",
                series.last().map(|&(x, _)| x).unwrap_or(0),
                series.last().map(|&(_, v)| v).unwrap_or(0.0)
            );
        }
    }
    Ok(0)
}

fn parse_z(z: &str) -> Result<ZFunction> {
    match z.split_once(':') {
        None => match z {
            "log" => Ok(ZFunction::Log),
            "loglog" => Ok(ZFunction::LogLog),
            other => Err(Error::Argument(format!(
                "unknown Z '{other}' (expected log, loglog, logpow:C, table:FILE)"
            ))),
        },
        Some(("logpow", c)) => {
            let c: f64 = c
                .parse()
                .map_err(|e| Error::Argument(format!("bad exponent '{c}': {e}")))?;
            Ok(ZFunction::LogPower(c))
        }
        Some(("table", path)) => Ok(ZFunction::Table(mio::read_ztable_path(Path::new(path))?)),
        Some((other, _)) => Err(Error::Argument(format!("unknown Z kind '{other}'"))),
    }
}

fn parse_g(g: &str) -> Result<FunctionSpec> {
    match g.split_once(':') {
        None => match g {
            "squares" => Ok(FunctionSpec::squares()),
            other => Err(Error::Argument(format!(
                "unknown g '{other}' (expected squares or explicit:FILE)"
            ))),
        },
        Some(("explicit", path)) => Ok(FunctionSpec::Explicit(mio::read_support_csv_path(
            Path::new(path),
        )?)),
        Some((other, _)) => Err(Error::Argument(format!("unknown g kind '{other}'"))),
    }
}

#[derive(Serialize)]
struct ConstructionJson {
    kind: String,
    params: BTreeMap<String, String>,
    selections: Vec<PrimeSelection>,
    predicted_supp_f: f64,
    predicted_supp_g: f64,
    achieved_alpha: f64,
    achieved_beta: f64,
    f_csv: String,
    g_csv: String,
}

#[derive(Serialize)]
struct Manifest {
    command: Vec<String>,
    version: String,
    seed: Option<u64>,
    params: BTreeMap<String, String>,
    outputs: Vec<String>,
}

fn write_manifest(
    out_dir: &Path,
    seed: Option<u64>,
    params: BTreeMap<String, String>,
    outputs: &[String],
) -> Result<()> {
    let manifest = Manifest {
        command: std::env::args().collect(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        params,
        outputs: outputs.to_vec(),
    };
    let path = out_dir.join("manifest.json");
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(
        w,
        "{}",
        serde_json::to_string_pretty(&manifest).expect("manifest serialization")
    )?;
    Ok(())
}

fn write_construction(
    kind: &str,
    params: BTreeMap<String, String>,
    report: &ConstructionReport,
    out_dir: &Path,
) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let f_csv = out_dir.join(format!("{kind}.f.csv"));
    let g_csv = out_dir.join(format!("{kind}.g.csv"));
    let mut w = BufWriter::new(File::create(&f_csv)?);
    mio::write_function_csv(&mut w, report.pair.f())?;
    w.flush()?;
    let mut w = BufWriter::new(File::create(&g_csv)?);
    mio::write_function_csv(&mut w, report.pair.g())?;
    w.flush()?;

    let json = ConstructionJson {
        kind: kind.to_string(),
        params: params.clone(),
        selections: report.selections.clone(),
        predicted_supp_f: report.predicted_densities.0,
        predicted_supp_g: report.predicted_densities.1,
        achieved_alpha: report.achieved_targets.0,
        achieved_beta: report.achieved_targets.1,
        f_csv: f_csv.display().to_string(),
        g_csv: g_csv.display().to_string(),
    };
    let report_path = out_dir.join(format!("{kind}.report.json"));
    let mut w = BufWriter::new(File::create(&report_path)?);
    writeln!(
        w,
        "{}",
        serde_json::to_string_pretty(&json).expect("construction serialization")
    )?;
    w.flush()?;
    let outputs = vec![
        f_csv.display().to_string(),
        g_csv.display().to_string(),
        report_path.display().to_string(),
    ];
    write_manifest(out_dir, None, params, &outputs)?;
    Ok(())
}

fn cmd_construct(kind: ConstructCmd) -> Result<u8> {
    match kind {
        ConstructCmd::Prescribed {
            alpha,
            beta,
            tol,
            limit,
            out_dir,
        } => {
            let tables = build_sieve(limit)?;
            let report = construct_prescribed_pair(alpha, beta, tol, limit, &tables)?;
            let params = params_of([
                ("alpha", alpha.to_string()),
                ("beta", beta.to_string()),
                ("tol", tol.to_string()),
                ("limit", limit.to_string()),
            ]);
            write_construction("prescribed", params, &report, &out_dir)?;
            println!(
                "prescribed pair: predicted supports ({:.4}, {:.4}) for targets ({alpha}, {beta})",
                report.predicted_densities.0, report.predicted_densities.1
            );
        }
        ConstructCmd::GreedyThin { z, limit, out_dir } => {
            let zf = parse_z(&z)?;
            let tables = build_sieve(limit)?;
            let report = greedy_thin_support_pair(&zf, limit, &tables)?;
            let params = params_of([("z", z.clone()), ("limit", limit.to_string())]);
            write_construction("greedy-thin", params, &report, &out_dir)?;
            println!(
                "greedy thin pair: {} primes selected, product {:.4}",
                report.selections[0].primes.len(),
                report.selections[0].achieved
            );
        }
    }
    Ok(0)
}

fn run_one(
    name: ExperimentName,
    opts: &ExperimentOpts,
    tables: &SieveTables,
) -> Result<ExperimentReport> {
    let plan = opts.plan()?;
    match name {
        ExperimentName::Theorem1 => {
            let g = parse_g(&opts.g)?;
            run_theorem1(&g, opts.limit, &plan, opts.tolerance, tables)
        }
        ExperimentName::Theorem2 => {
            let g = parse_g(&opts.g)?;
            let tolerances = Theorem2Tolerances::default();
            run_theorem2(&g, opts.limit, &opts.y_list, &plan, tolerances, tables)
        }
        ExperimentName::Theorem3 => run_theorem3(
            opts.alpha,
            opts.beta,
            opts.tol,
            opts.empirical_tol,
            opts.limit,
            &plan,
            tables,
        ),
        ExperimentName::PropBest => {
            let z = parse_z(&opts.z)?;
            run_prop_best(&z, opts.limit, &plan, tables)
        }
        ExperimentName::PrimesDemo => run_primes_demo(opts.y, opts.limit, &plan, tables),
        ExperimentName::LemmaChecks => run_lemma_checks(opts.limit, &plan, tables, opts.seed),
    }
}

fn write_report(report: &ExperimentReport, out_dir: &Path) -> Result<String> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("{}.report.json", report.name));
    let mut w = BufWriter::new(File::create(&path)?);
    writeln!(w, "{}", mio::report_to_json(report))?;
    w.flush()?;
    Ok(path.display().to_string())
}

fn summarize(report: &ExperimentReport) {
    let verdict = recompute_verdict(report);
    debug_assert_eq!(verdict.pass, report.verdict.pass);
    println!(
        "{}: {} ({} criteria, {} ms)",
        report.name,
        if report.verdict.pass { "pass" } else { "FAIL" },
        report.verdict.criteria.len(),
        report.runtime_ms
    );
    for c in &report.verdict.criteria {
        let status = match c.status {
            mobius_pairs::experiment::CriterionStatus::Pass => "pass",
            mobius_pairs::experiment::CriterionStatus::Fail => "FAIL",
            mobius_pairs::experiment::CriterionStatus::Inconclusive => "inconclusive",
        };
        match c.observed {
            Some(obs) => eprintln!(
                "  {}: {status} (observed {obs:.6}, threshold {:.6})",
                c.id, c.threshold
            ),
            None => eprintln!("  {}: {status}", c.id),
        }
    }
}

fn cmd_experiment(action: ExperimentCmd) -> Result<u8> {
    match action {
        ExperimentCmd::Run { name, opts } => {
            opts.validate()?;
            let tables = build_sieve(opts.limit)?;
            let report = run_one(name, &opts, &tables)?;
            let path = write_report(&report, &opts.out_dir)?;
            write_manifest(
                &opts.out_dir,
                Some(opts.seed),
                report.params.clone(),
                &[path],
            )?;
            summarize(&report);
            Ok(if report.verdict.pass { 0 } else { 1 })
        }
        ExperimentCmd::All { opts } => {
            opts.validate()?;
            let tables = build_sieve(opts.limit)?;
            let mut all_pass = true;
            let mut outputs = Vec::new();
            for name in ExperimentName::all() {
                let report = run_one(name, &opts, &tables)?;
                outputs.push(write_report(&report, &opts.out_dir)?);
                summarize(&report);
                all_pass &= report.verdict.pass;
            }
            let params = params_of([("limit", opts.limit.to_string())]);
            write_manifest(&opts.out_dir, Some(opts.seed), params, &outputs)?;
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}
