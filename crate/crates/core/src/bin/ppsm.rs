use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ppsm::commands::{self, CommandError, EvalFlags, ModelSource, OptimizeArgs, EXIT_VALIDATION};
use ppsm::generators::Generator;
use ppsm::optimize::{DEFAULT_EVALS_PER_RESTART, DEFAULT_RESTARTS};
use ppsm::sweep::{ParamRange, Quantity, SweepSpec};

/// Pre/post-selected shift models of three dichotomous events.
#[derive(Parser)]
#[command(name = "ppsm", version)]
struct Cli {
    /// Pretty-print JSON output (sweep: emit JSON records instead of CSV).
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact shift and conditional-independence reports for one model.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        /// Report pre/post-selected shifts.
        #[arg(long)]
        shift: bool,
        /// Report the conditional-independence check.
        #[arg(long)]
        ci: bool,
        /// Print the model file for this model and nothing else.
        #[arg(long)]
        emit_model: bool,
    },
    /// Conditional-independence report.
    CheckCi {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Evaluate a generator over a parameter grid and write CSV.
    Sweep {
        /// Generator family: qs, qw, cd, cmax, boxes.
        #[arg(long = "gen")]
        generator: String,
        /// Value or start:stop:step (radians unless --deg).
        #[arg(long)]
        theta: Option<String>,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        deg: bool,
        /// Comma-separated: pre, post, margin, z_w, ci_residuals, min_slack.
        #[arg(long, default_value = "pre,post,margin")]
        outputs: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a seeded sample and report empirical shifts.
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'n', long, default_value_t = 10_000)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the batch as psi,s,phi,count CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximize the anomaly margin over valid models.
    Optimize {
        /// Restrict to models with s and phi independent given psi.
        #[arg(long)]
        require_ci: bool,
        /// Number of restarts.
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        budget: usize,
        /// Objective evaluations per restart.
        #[arg(long, default_value_t = DEFAULT_EVALS_PER_RESTART)]
        evals: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the winning restart's (iteration, margin) trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Generator family: qs, qw, cd, cmax, boxes.
    #[arg(
        long = "gen",
        conflicts_with = "model",
        required_unless_present = "model"
    )]
    generator: Option<String>,
    /// ppsm-v1 model file.
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Interpret --theta in degrees.
    #[arg(long)]
    deg: bool,
}

impl ModelArgs {
    fn source(&self) -> Result<ModelSource, CommandError> {
        if let Some(path) = &self.model {
            return Ok(ModelSource::File(path.clone()));
        }
        let name = self.generator.as_deref().unwrap_or_default();
        let theta = self
            .theta
            .map(|t| if self.deg { t.to_radians() } else { t });
        Generator::from_name(name, theta, self.lambda, self.delta)
            .map(ModelSource::Generator)
            .map_err(|e| CommandError {
                code: EXIT_VALIDATION,
                message: e.to_string(),
                stdout: None,
            })
    }
}

fn parse_range(s: &Option<String>) -> Result<Option<ParamRange>, ppsm::Error> {
    s.as_deref().map(ParamRange::parse).transpose()
}

fn sweep_spec(
    generator: String,
    theta: &Option<String>,
    lambda: &Option<String>,
    delta: &Option<String>,
    deg: bool,
    outputs: &str,
) -> Result<SweepSpec, ppsm::Error> {
    let spec = SweepSpec {
        family: generator,
        theta: parse_range(theta)?,
        lambda: parse_range(lambda)?,
        delta: parse_range(delta)?,
        outputs: outputs
            .split(',')
            .map(|q| q.trim().parse::<Quantity>())
            .collect::<Result<_, _>>()?,
    };
    Ok(if deg { spec.theta_in_degrees() } else { spec })
}

fn configure_threads() {
    let threads = std::env::var("PPSM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    if threads > 0 {
        // Only fails if a global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
}

fn dispatch(cli: Cli) -> commands::CommandResult {
    let pretty = cli.json;
    match cli.command {
        Command::Eval {
            model,
            shift,
            ci,
            emit_model,
        } => commands::eval(
            &model.source()?,
            EvalFlags {
                shift,
                ci,
                emit_model,
                pretty,
            },
        ),
        Command::CheckCi { model } => commands::check_ci(&model.source()?, pretty),
        Command::Sweep {
            generator,
            theta,
            lambda,
            delta,
            deg,
            outputs,
            out,
        } => {
            let spec =
                sweep_spec(generator, &theta, &lambda, &delta, deg, &outputs).map_err(|e| {
                    CommandError {
                        code: EXIT_VALIDATION,
                        message: e.to_string(),
                        stdout: None,
                    }
                })?;
            commands::sweep(&spec, out.as_deref(), cli.json)
        }
        Command::Sample {
            model,
            n,
            seed,
            out,
        } => commands::sample(&model.source()?, n, seed, out.as_deref(), pretty),
        Command::Optimize {
            require_ci,
            budget,
            evals,
            seed,
            trace,
        } => commands::optimize(&OptimizeArgs {
            require_ci,
            budget,
            evals,
            seed,
            trace,
            pretty,
        }),
    }
}

fn main() -> ExitCode {
    configure_threads();
    match dispatch(Cli::parse()) {
        Ok(text) => {
            if !text.is_empty() {
                println!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let Some(text) = &e.stdout {
                println!("{text}");
            }
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
