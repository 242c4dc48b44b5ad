use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use varbesov::exponents::ExponentSpec;
use varbesov::grid::GridSpec;
use varbesov::littlewood_paley::Flavor;
use varbesov::run::{run, ExponentSpecs, FunctionSpec, Params, RunConfig};
use varbesov::trace_ext::{ExtPath, HestenesVariant};
use varbesov::verify::{measure_bands, verify, Bands, SUITES};
use varbesov::Error;

#[derive(Parser)]
#[command(name = "varbesov", version, about = "Variable-exponent Besov and Triebel-Lizorkin numerics on periodic grids")]
struct Cli {
    /// Grid as `dim,T,N`: dimension, half extent and samples per axis.
    #[arg(long, global = true, default_value = "1,4,128", value_parser = parse_grid)]
    grid: GridSpec,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Norms of a grid function or coefficient array.
    Norm {
        #[arg(value_enum)]
        kind: NormKind,
        #[command(flatten)]
        common: Common,
    },
    /// Quarkonial analysis or synthesis.
    Quark {
        #[arg(value_enum)]
        action: QuarkAction,
        #[command(flatten)]
        common: Common,
    },
    /// Trace on x_n = 0 of a 2-D function.
    Trace(Common),
    /// Traces of every extension path and their spread.
    Utrace(Common),
    /// Co-extension of boundary data given with repeated --g.
    Coextend {
        /// Boundary data g_0, g_1, ... as expressions in x.
        #[arg(long = "g", required = true)]
        g: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Extension from the upper half-space.
    Extend(Common),
    /// Apply the lift J_sigma.
    Lift(Common),
    /// Hardy-Littlewood maximal function.
    Maximal(Common),
    /// Exponent diagnostics.
    Exponents {
        #[arg(value_enum)]
        action: ExponentsAction,
        #[command(flatten)]
        common: Common,
    },
    /// Run a JSON config file.
    Run { config: PathBuf },
    /// Run the verification suite.
    Verify {
        /// `all` or a module name.
        #[arg(default_value = "all")]
        suite: String,
        /// Regression bands to compare against (default: the shipped fixture).
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Measure the regression constants and write fresh bands to this file.
        #[arg(long)]
        write_bands: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NormKind {
    Lp,
    Mixed,
    Besov,
    Triebel,
    Sequence,
    Quark,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuarkAction {
    Analyze,
    Synthesize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExponentsAction {
    Check,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Smooth,
    Lifted,
    Hestenes,
}

/// Inputs, exponents and parameters shared by the operation subcommands.
#[derive(Args, Clone, Default)]
struct Common {
    /// Input function as an expression in x, y and r.
    #[arg(long)]
    expr: Option<String>,
    /// Input function saved by a previous run (binary plus `.json` sidecar).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Input 1-D function from CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Input from the seeded corpus: `smooth` or `decaying`.
    #[arg(long)]
    corpus: Option<String>,
    #[arg(long, default_value_t = 0)]
    index: usize,
    /// Exponent p(x) as an expression.
    #[arg(long)]
    p: Option<String>,
    /// Exponent q(x) as an expression, or `inf`.
    #[arg(long)]
    q: Option<String>,
    /// Smoothness s(x) as an expression.
    #[arg(long)]
    s: Option<String>,
    /// Value of the exponents at infinity, when they have one.
    #[arg(long)]
    limit: Option<f64>,
    #[arg(long, value_parser = ["besov", "triebel"])]
    flavor: Option<String>,
    /// Mixed-norm order: `lq_lp` or `lp_lq`.
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    j_max: Option<usize>,
    #[arg(long)]
    nu_max: Option<u32>,
    #[arg(long)]
    beta_max: Option<u32>,
    #[arg(long)]
    rho: Option<u32>,
    /// JSON-lines coefficient file.
    #[arg(long)]
    coefficients: Option<PathBuf>,
    #[arg(long, value_enum)]
    path: Option<PathArg>,
    /// Reflection order M.
    #[arg(long)]
    reflection_order: Option<usize>,
    /// Use the alternative Hestenes system with right-hand side delta_{l,0}.
    #[arg(long)]
    delta_variant: bool,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Co-extension parameter L.
    #[arg(long)]
    l: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    #[arg(long)]
    r: Option<f64>,
    /// Artifact file written by the operation.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err("expected dim,T,N".into());
    }
    Ok(GridSpec {
        dim: parts[0].parse().map_err(|e| format!("dim: {e}"))?,
        half_extent: parts[1].parse().map_err(|e| format!("T: {e}"))?,
        samples_per_axis: parts[2].parse().map_err(|e| format!("N: {e}"))?,
    })
}

fn exponent(expr: &Option<String>, limit: Option<f64>) -> Option<ExponentSpec> {
    expr.as_ref().map(|e| ExponentSpec { expr: Some(e.clone()), samples: None, grid: None, limit })
}

impl Common {
    fn config(&self, cli: &Cli, operation: &str) -> RunConfig {
        let any_input = self.expr.is_some() || self.input.is_some() || self.csv.is_some() || self.corpus.is_some();
        let input = any_input.then(|| FunctionSpec {
            expr: self.expr.clone(),
            file: self.input.clone(),
            csv: self.csv.clone(),
            corpus: self.corpus.clone(),
            index: self.index,
        });
        let params = Params {
            flavor: self.flavor.as_deref().map(|f| if f == "triebel" { Flavor::Triebel } else { Flavor::Besov }),
            order: self.order.clone(),
            j_max: self.j_max,
            nu_max: self.nu_max,
            beta_max: self.beta_max,
            rho: self.rho,
            coefficients: self.coefficients.clone(),
            path: self.path.map(|p| match p {
                PathArg::Smooth => ExtPath::Smooth,
                PathArg::Lifted => ExtPath::Lifted,
                PathArg::Hestenes => ExtPath::Hestenes,
            }),
            reflection_order: self.reflection_order,
            variant: self.delta_variant.then_some(HestenesVariant::Delta),
            sigma: self.sigma,
            epsilon: self.epsilon,
            boundary: Vec::new(),
            l: self.l,
            radii: self.radii.clone(),
            r: self.r,
        };
        RunConfig {
            grid: cli.grid,
            exponents: ExponentSpecs { p: exponent(&self.p, self.limit), q: exponent(&self.q, self.limit), s: exponent(&self.s, None) },
            operation: operation.into(),
            params,
            input,
            output: self.output.clone(),
            seed: cli.seed,
        }
    }
}

/// What went wrong, mapped onto the exit codes: 1 for a failed invariant, 2 for bad input.
enum Failure {
    Invariant(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Invariant(e.to_string())
        }
    }
}

fn emit(cli: &Cli, json: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(p) => std::fs::write(p, format!("{json}\n")).map_err(|e| Failure::Input(format!("--out {}: {e}", p.display()))),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, Failure> {
    let config = match &cli.command {
        Command::Norm { kind, common } => {
            let op = match kind {
                NormKind::Lp => "norm.lp",
                NormKind::Mixed => "norm.mixed",
                NormKind::Besov => "norm.besov",
                NormKind::Triebel => "norm.triebel",
                NormKind::Sequence => "norm.sequence",
                NormKind::Quark => "norm.quark",
            };
            common.config(cli, op)
        }
        Command::Quark { action, common } => common.config(cli, if matches!(action, QuarkAction::Analyze) { "quark.analyze" } else { "quark.synthesize" }),
        Command::Trace(c) => c.config(cli, "trace"),
        Command::Utrace(c) => c.config(cli, "utrace"),
        Command::Coextend { g, common } => {
            let mut config = common.config(cli, "coextend");
            config.params.boundary = g.iter().map(|e| FunctionSpec { expr: Some(e.clone()), ..Default::default() }).collect();
            config
        }
        Command::Extend(c) => c.config(cli, "extend"),
        Command::Lift(c) => c.config(cli, "lift"),
        Command::Maximal(c) => c.config(cli, "maximal"),
        Command::Exponents { action: ExponentsAction::Check, common } => common.config(cli, "exponents.check"),
        Command::Run { config } => {
            let mut c = RunConfig::load(config)?;
            // An explicit --seed overrides the file.
            if cli.seed != 0 {
                c.seed = cli.seed;
            }
            c
        }
        Command::Verify { suite, fixtures, write_bands } => return run_verify(cli, suite, fixtures, write_bands),
    };
    let report = run(&config)?;
    emit(cli, &serde_json::to_string_pretty(&report).expect("reports serialise"))?;
    Ok(report.ok)
}

fn run_verify(cli: &Cli, suite: &str, fixtures: &Option<PathBuf>, write_bands: &Option<PathBuf>) -> Result<bool, Failure> {
    if !SUITES.contains(&suite) {
        return Err(Failure::Input(format!("unknown suite `{suite}`; expected one of {}", SUITES.join(", "))));
    }
    if let Some(path) = write_bands {
        let bands = measure_bands(suite, cli.seed)?;
        std::fs::write(path, bands.to_json()? + "\n").map_err(|e| Failure::Input(format!("--write-bands {}: {e}", path.display())))?;
        eprintln!("wrote {} bands to {}", bands.0.len(), path.display());
        return Ok(true);
    }
    let bands = match fixtures {
        Some(p) => Bands::load(p)?,
        None => Bands::shipped(),
    };
    let report = verify(suite, cli.seed, &bands)?;
    for c in report.checks.iter().filter(|c| c.status == varbesov::verify::Status::Fail) {
        eprintln!("FAIL {} ({}): {}", c.check_id, if c.hard { "hard" } else { "regression" }, c.detail);
    }
    eprintln!(
        "{} checks, {} hard failures, {} regression failures",
        report.checks.len(),
        report.hard_failures,
        report.regression_failures
    );
    emit(cli, &serde_json::to_string_pretty(&report).expect("reports serialise"))?;
    Ok(report.hard_failures == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Invariant(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
