// `!(x > 0.0)` deliberately rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use abmd::coeffs::CoefficientTable;
use abmd::csv::Table;
use abmd::driver::{IntegratorConfig, MAX_ORDER};
use abmd::experiments::{self, Model, ModelKind};

#[derive(Parser)]
#[command(name = "abmd", version, about = "Adams-Bashforth-Moulton integration of neutral delay equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print c_j and gamma_j up to the given order.
    Coeffs {
        #[arg(long, default_value_t = MAX_ORDER)]
        order: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Integrate a model and write every grid node.
    Integrate(RunArgs),
    /// Integrate forward, then back to the start, and write the differences.
    Roundtrip(RunArgs),
    /// Compare delayed values used during integration with the final solution.
    DelayedCompare(RunArgs),
    /// Maximum error under four successive step halvings.
    Convergence(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    model: ModelKind,
    #[arg(long, default_value_t = 13)]
    order: usize,
    /// Step magnitude; the direction follows from --t0 and --t-end.
    #[arg(long, default_value_t = 0.0625)]
    step: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t0: f64,
    /// Defaults to t0 plus the model's span.
    #[arg(long, allow_negative_numbers = true)]
    t_end: Option<f64>,
    #[arg(long, default_value_t = 2)]
    corrections: usize,
    #[arg(long, default_value_t = 8)]
    startup_divisor: usize,
    #[arg(long)]
    inner_step: Option<f64>,
    #[arg(long)]
    stencil: Option<usize>,
    /// `key = value` parameter file for the model.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<abmd::Error> for Failure {
    fn from(e: abmd::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

impl RunArgs {
    fn config(&self, t_end: f64) -> Result<IntegratorConfig, Failure> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Failure::Usage(format!("--step must be positive, got {}", self.step)));
        }
        let span = t_end - self.t0;
        if span == 0.0 || !span.is_finite() {
            return Err(Failure::Usage("--t-end must differ from --t0".into()));
        }
        let cfg = IntegratorConfig {
            order: self.order,
            step: self.step.copysign(span),
            corrections: self.corrections,
            startup_divisor: self.startup_divisor,
            inner_step: self.inner_step,
            stencil_size: self.stencil,
            max_extrapolation: None,
        };
        cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(cfg)
    }

    fn load(&self) -> Result<(Model, IntegratorConfig, f64), Failure> {
        let model = Model::load(self.model, self.params.as_deref())?;
        let t_end = self.t_end.unwrap_or(self.t0 + model.default_span());
        let cfg = self.config(t_end)?;
        Ok((model, cfg, t_end))
    }
}

fn emit(table: &Table, output: Option<&PathBuf>) -> Result<(), Failure> {
    let text = table.to_csv_string();
    let io = |e: std::io::Error| Failure::Runtime(e.to_string());
    match output {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Coeffs { order, output } => {
            if !(1..=MAX_ORDER).contains(&order) {
                return Err(Failure::Usage(format!("--order must be in 1..={MAX_ORDER}")));
            }
            let text = CoefficientTable::new(order).to_csv();
            emit(&Table::parse(&text)?, output.as_ref())
        }
        Command::Integrate(a) => {
            let (model, cfg, t_end) = a.load()?;
            emit(&experiments::integrate_table(&model, a.t0, t_end, &cfg)?, a.output.as_ref())
        }
        Command::Roundtrip(a) => {
            let (model, cfg, t_end) = a.load()?;
            let rt = experiments::roundtrip(&model, a.t0, t_end, &cfg)?;
            eprintln!("relative closure at t0: {:e}", rt.closure());
            emit(&rt.table(), a.output.as_ref())
        }
        Command::DelayedCompare(a) => {
            let (model, cfg, t_end) = a.load()?;
            let dc = experiments::delayed_compare(&model, a.t0, t_end - a.t0, &cfg)?;
            emit(&dc.table(), a.output.as_ref())
        }
        Command::Convergence(a) => {
            let (model, cfg, t_end) = a.load()?;
            let rows = experiments::convergence(&model, a.t0, t_end, &cfg, 4)?;
            emit(&experiments::convergence_table(&rows), a.output.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
