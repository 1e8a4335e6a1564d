use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use faa_cli::compare::{run_compare, summary_table, CompareConfig};
use faa_cli::config::{read_json, FieldName, NumberOr, OrderName, ProblemName, StrategyName};
use faa_cli::error::{HarnessError, EXIT_CONFIG, EXIT_CONVERGED, EXIT_MAX_ITERS};
use faa_cli::sweep::{run_sweep, SweepConfig, SweepGrid};
use faa_cli::{artifacts, execute, ProblemSpec, RunConfig, SolverSpec};

/// Filtered Anderson acceleration experiments.
///
/// Exit codes: 0 converged, 1 configuration error, 2 iteration limit
/// reached, 3 diverged, 4 runtime failure.
#[derive(Parser, Debug)]
#[command(name = "faa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one problem with one strategy.
    Run(RunArgs),
    /// Run several strategies on the same problem (`runs` list in --config).
    Compare(RunArgs),
    /// Run a parameter grid (`base` and `grid` in --config, or --sweep-* flags).
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    label: Option<String>,
    /// Skip SVG plots.
    #[arg(long)]
    no_plots: bool,

    /// linear_toy, nlh, quasilinear or plap.
    #[arg(long, value_parser = parse_named::<ProblemName>)]
    problem: Option<ProblemName>,
    /// linear_toy dimension.
    #[arg(long)]
    n: Option<usize>,
    /// linear_toy spectral norm of A.
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    k0: Option<f64>,
    /// nlh Kerr coefficient.
    #[arg(long)]
    eps: Option<f64>,
    /// nlh grid nodes.
    #[arg(long)]
    nodes: Option<usize>,
    /// nlh coefficient field: real or complex.
    #[arg(long, value_parser = parse_named::<FieldName>)]
    field: Option<FieldName>,
    /// Grid subdivisions per axis (quasilinear, plap).
    #[arg(long)]
    subdivisions: Option<usize>,
    #[arg(long)]
    forcing: Option<f64>,
    /// plap exponent.
    #[arg(long)]
    p: Option<f64>,
    /// plap regularization.
    #[arg(long)]
    eps_reg: Option<f64>,

    /// none, plain, faa or tsvd.
    #[arg(long, value_parser = parse_named::<StrategyName>)]
    strategy: Option<StrategyName>,
    /// History depth.
    #[arg(long)]
    m: Option<usize>,
    /// Angle threshold: a number or `dynamic`.
    #[arg(long)]
    cs: Option<String>,
    /// Condition cap (faa) or truncation ratio (tsvd).
    #[arg(long)]
    kappa: Option<f64>,
    /// Damping: a number or `beta-star`.
    #[arg(long)]
    beta: Option<String>,
    /// length-first or angle-first.
    #[arg(long, value_parser = parse_named::<OrderName>)]
    order: Option<OrderName>,
    /// `constant` or `multilevel:tau,m_early,m_late`.
    #[arg(long)]
    depth_schedule: Option<String>,
    /// Repeat the length filter after the angle filter.
    #[arg(long)]
    sharpen: bool,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated strategies.
    #[arg(long, value_delimiter = ',', value_parser = parse_named::<StrategyName>)]
    sweep_strategy: Vec<StrategyName>,
    #[arg(long, value_delimiter = ',')]
    sweep_m: Vec<usize>,
    /// Comma-separated values; `dynamic` allowed.
    #[arg(long, value_delimiter = ',')]
    sweep_cs: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    sweep_kappa: Vec<f64>,
    /// Comma-separated values; `beta-star` allowed.
    #[arg(long, value_delimiter = ',')]
    sweep_beta: Vec<String>,
    #[arg(long, value_delimiter = ',', value_parser = parse_named::<OrderName>)]
    sweep_order: Vec<OrderName>,
}

fn parse_named<T: std::str::FromStr<Err = String>>(s: &str) -> Result<T, String> {
    s.parse()
}

impl RunArgs {
    fn overrides(&self) -> RunConfig {
        RunConfig {
            problem: ProblemSpec {
                name: self.problem,
                n: self.n,
                rho: self.rho,
                seed: self.seed,
                k0: self.k0,
                eps: self.eps,
                nodes: self.nodes,
                field: self.field,
                subdivisions: self.subdivisions,
                forcing: self.forcing,
                p: self.p,
                eps_reg: self.eps_reg,
            },
            solver: SolverSpec {
                strategy: self.strategy,
                m: self.m,
                cs: self.cs.as_deref().map(NumberOr::parse),
                kappa: self.kappa,
                beta: self.beta.as_deref().map(NumberOr::parse),
                order: self.order,
                depth_schedule: self.depth_schedule.clone(),
                sharpen: self.sharpen.then_some(true),
                tol: self.tol,
                max_iters: self.max_iters,
            },
            out: self.out.clone(),
            label: self.label.clone(),
        }
    }
}

fn default_out(kind: &str) -> PathBuf {
    Path::new("faa-out").join(kind)
}

fn cmd_run(args: &RunArgs) -> Result<i32, HarnessError> {
    let mut cfg = match &args.config {
        Some(path) => read_json::<RunConfig>(path)?,
        None => RunConfig::default(),
    };
    cfg.overlay(&args.overrides());
    let report = execute(&cfg)?;
    let out = cfg.out_dir();
    artifacts::write_run(&report, &out, !args.no_plots)?;
    println!(
        "{}: {} after {} iterations, |w| = {:.3e}, max cond_F = {:.2e}",
        report.label,
        faa_cli::runner::status_name(report.status),
        report.iterations(),
        report.final_residual(),
        report.max_cond()
    );
    println!("artifacts: {}", out.display());
    Ok(report.exit_code())
}

fn cmd_compare(args: &RunArgs) -> Result<i32, HarnessError> {
    let path = args
        .config
        .as_ref()
        .ok_or_else(|| HarnessError::config("compare needs --config with a `runs` list"))?;
    let file: CompareConfig = read_json(path)?;
    let mut overrides = args.overrides();
    let out = overrides
        .out
        .take()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| default_out("compare"));
    if overrides.label.is_some() {
        return Err(HarnessError::config("--label does not apply to compare"));
    }
    let runs = file.prepare(&overrides)?;
    let reports = run_compare(&runs, &out, !args.no_plots)?;
    print!("{}", summary_table(&reports));
    println!("artifacts: {}", out.display());
    Ok(if reports.iter().all(|r| r.exit_code() == EXIT_CONVERGED) {
        EXIT_CONVERGED
    } else {
        EXIT_MAX_ITERS
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32, HarnessError> {
    let mut file = match &args.run.config {
        Some(path) => read_json::<SweepConfig>(path)?,
        None => SweepConfig::default(),
    };
    let mut overrides = args.run.overrides();
    let out = overrides
        .out
        .take()
        .or_else(|| file.out.clone())
        .unwrap_or_else(|| default_out("sweep"));
    file.base.overlay(&overrides);
    file.grid.extend(&SweepGrid {
        strategy: args.sweep_strategy.clone(),
        m: args.sweep_m.clone(),
        cs: args.sweep_cs.iter().map(|s| NumberOr::parse(s)).collect(),
        kappa: args.sweep_kappa.clone(),
        beta: args.sweep_beta.iter().map(|s| NumberOr::parse(s)).collect(),
        order: args.sweep_order.clone(),
    });
    file.base.problem.validate()?;
    let points = file.grid.points(&file.base)?;
    let index = run_sweep(&points, &out, !args.run.no_plots)?;
    println!(
        "{} grid points, {} failed; index: {}",
        index["points"],
        index["failed"],
        out.join(faa_cli::sweep::INDEX_FILE).display()
    );
    Ok(EXIT_CONVERGED)
}

fn main() -> ExitCode {
    // Flag errors are configuration errors (exit 1), not clap's default 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    let code = result.unwrap_or_else(|e| {
        eprintln!("faa: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
