//! Implementations behind the `ppsm` subcommands. Each returns the text for
//! standard output, or a [`CommandError`] carrying the process exit code.
//!
//! Exit codes: 0 success, 2 validation failure, 3 runtime failure,
//! 4 optimizer budget exhausted (the best-so-far result is still printed).

use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::ci::ci_report;
use crate::error::Error;
use crate::generators::Generator;
use crate::io::{self, ModelSpec};
use crate::montecarlo;
use crate::optimize::{self, Constraint, OptimizerConfig};
use crate::shift::shift_report;
use crate::sweep::{self, SweepSpec};

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug)]
pub struct CommandError {
    pub code: i32,
    pub message: String,
    /// Output still worth printing (budget exhaustion carries a result).
    pub stdout: Option<String>,
}

impl CommandError {
    fn validation(e: impl fmt::Display) -> Self {
        CommandError {
            code: EXIT_VALIDATION,
            message: e.to_string(),
            stdout: None,
        }
    }

    fn runtime(e: impl fmt::Display) -> Self {
        CommandError {
            code: EXIT_RUNTIME,
            message: e.to_string(),
            stdout: None,
        }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CommandResult = std::result::Result<String, CommandError>;

/// Where a command's model comes from.
#[derive(Clone, Debug)]
pub enum ModelSource {
    Generator(Generator),
    File(PathBuf),
}

impl ModelSource {
    pub fn load(&self) -> Result<ModelSpec, CommandError> {
        match self {
            ModelSource::Generator(g) => match g {
                Generator::Boxes => g.table().map(ModelSpec::Table),
                _ => g.coefficients().map(ModelSpec::Coefficients),
            }
            .and_then(|m| m.table().map(|_| m)),
            ModelSource::File(path) => io::read_model(path),
        }
        .map_err(CommandError::validation)
    }
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("json values serialize")
    } else {
        v.to_string()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EvalFlags {
    pub shift: bool,
    pub ci: bool,
    pub emit_model: bool,
    pub pretty: bool,
}

pub fn eval(source: &ModelSource, flags: EvalFlags) -> CommandResult {
    let spec = source.load()?;
    if flags.emit_model {
        return Ok(spec.to_json());
    }
    let table = spec.table().map_err(CommandError::validation)?;
    let (shift, ci) = if flags.shift || flags.ci {
        (flags.shift, flags.ci)
    } else {
        (true, true)
    };
    let mut out = json!({
        "model": {"coefficients": table.coefficients(), "table": table},
    });
    if shift {
        out["shift"] =
            serde_json::to_value(shift_report(&table).map_err(CommandError::validation)?)
                .expect("report serializes");
    }
    if ci {
        out["ci"] = serde_json::to_value(ci_report(&table)).expect("report serializes");
    }
    Ok(render(&out, flags.pretty))
}

pub fn check_ci(source: &ModelSource, pretty: bool) -> CommandResult {
    let table = source.load()?.table().map_err(CommandError::validation)?;
    let v = serde_json::to_value(ci_report(&table)).expect("report serializes");
    Ok(render(&v, pretty))
}

/// Writes the sweep CSV to `out`, or returns it (or JSON rows when `json`) for stdout.
pub fn sweep(spec: &SweepSpec, out: Option<&Path>, json: bool) -> CommandResult {
    let classify = |e: Error| match e {
        Error::Format(_) => CommandError::validation(e),
        other => CommandError::runtime(other),
    };
    if json {
        let (header, rows) = sweep::run_sweep(spec).map_err(classify)?;
        let records: Vec<Value> = rows
            .iter()
            .map(|r| {
                let obj = header
                    .iter()
                    .zip(r)
                    .map(|(h, c)| {
                        let v = c.parse::<f64>().map(Value::from).unwrap_or(Value::Null);
                        (h.clone(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let text = render(&Value::Array(records), false);
        return match out {
            Some(path) => std::fs::write(path, text)
                .map(|_| String::new())
                .map_err(CommandError::runtime),
            None => Ok(text),
        };
    }
    match out {
        Some(path) => sweep::write_sweep(spec, path)
            .map(|_| String::new())
            .map_err(classify),
        None => sweep::sweep_csv(spec).map_err(classify),
    }
}

/// Samples `n` draws, optionally writes the batch CSV, and reports the estimates as JSON.
pub fn sample(
    source: &ModelSource,
    n: u64,
    seed: u64,
    out: Option<&Path>,
    pretty: bool,
) -> CommandResult {
    let table = source.load()?.table().map_err(CommandError::validation)?;
    let batch = montecarlo::sample(&table, n, seed).map_err(CommandError::validation)?;
    if let Some(path) = out {
        let mut buf = Vec::new();
        io::write_batch_csv(&batch, &mut buf).map_err(CommandError::runtime)?;
        std::fs::write(path, buf).map_err(CommandError::runtime)?;
    }
    let report = montecarlo::estimate(&batch);
    let v = json!({
        "n": batch.n,
        "seed": batch.seed,
        "counts": batch.counts,
        "estimate": report,
    });
    Ok(render(&v, pretty))
}

#[derive(Clone, Debug)]
pub struct OptimizeArgs {
    pub require_ci: bool,
    pub budget: usize,
    pub evals: usize,
    pub seed: u64,
    pub trace: Option<PathBuf>,
    pub pretty: bool,
}

pub fn optimize(args: &OptimizeArgs) -> CommandResult {
    let constraint = if args.require_ci {
        Constraint::RequireCi
    } else {
        Constraint::None
    };
    let config = OptimizerConfig {
        evals_per_restart: args.evals,
        ..OptimizerConfig::new(constraint, args.budget, args.seed)
    };
    let (result, exhausted) = match optimize::run(&config) {
        Ok(r) => (r, false),
        Err(Error::BudgetExhausted(r)) => (*r, true),
        Err(e) => return Err(CommandError::validation(e)),
    };
    if let Some(path) = &args.trace {
        let mut buf = Vec::new();
        io::write_trace_csv(&result.trace, &mut buf).map_err(CommandError::runtime)?;
        std::fs::write(path, buf).map_err(CommandError::runtime)?;
    }
    let text = render(&io::optimization_json(&result), args.pretty);
    if exhausted {
        return Err(CommandError {
            code: EXIT_BUDGET,
            message: format!(
                "budget of {} restarts did not cover every deterministic start",
                args.budget
            ),
            stdout: Some(text),
        });
    }
    Ok(text)
}
