use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lqu_cli::commands;
use lqu_cli::spec::{Format, Resolved};
use lqu_cli::{CliError, Result};
use serde::Serialize;

/// Local quantum uncertainty under amplitude damping, with weak-measurement
/// protection.
#[derive(Parser)]
#[command(name = "lqu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the reference table at the quoted filter strengths; exits 1
    /// if any value is outside tolerance.
    Table1(OutArgs),
    /// Run the protocol once and report every stage.
    Run(ScenarioArgs),
    /// Sweep the first reversal entries on A and B (CSV: n1,n2,lqu).
    Sweep(ScenarioArgs),
    /// Maximize LQU(ρ3) over all filter strengths.
    Optimize(ScenarioArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Write machine-readable output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file (JSON).
    #[arg(long)]
    spec: PathBuf,
    #[command(flatten)]
    out: OutArgs,
    /// Optimizer seed; implies optimizing the filters.
    #[arg(long)]
    seed: Option<u64>,
    /// Optimizer evaluation budget; implies optimizing the filters.
    #[arg(long)]
    budget: Option<usize>,
    /// Points per sweep axis.
    #[arg(long)]
    grid: Option<usize>,
}

impl ScenarioArgs {
    fn resolve(&self) -> Result<Resolved> {
        let mut res = Resolved::from_file(&self.spec)?;
        if self.seed.is_some() || self.budget.is_some() {
            res.force_optimize(self.budget, self.seed);
        }
        if let Some(g) = self.grid {
            res.set_grid(g);
        }
        Ok(res)
    }

    fn destination(&self, res: &Resolved, default: Format) -> (Option<PathBuf>, Format) {
        let path = self.out.out.clone().or_else(|| res.output_path());
        let format = self.out.format.or(res.output_format()).unwrap_or(default);
        (path, format)
    }
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn emit(body: &str, summary: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, body).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            print!("{summary}");
            eprintln!("wrote {}", p.display());
        }
        None => print!("{body}"),
    }
    Ok(())
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Table1(out) => {
            let report = commands::table1()?;
            print!("{}", report.render());
            if let Some(p) = &out.out {
                let body = match out.format.unwrap_or(Format::Json) {
                    Format::Json => json(&report)?,
                    Format::Csv => report.to_csv()?,
                };
                emit(&body, "", Some(p))?;
            }
            Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Run(args) => {
            let res = args.resolve()?;
            let report = commands::run(&res)?;
            warn(&report.warnings);
            let (path, format) = args.destination(&res, Format::Json);
            let body = match format {
                Format::Json => json(&report)?,
                Format::Csv => report.to_csv()?,
            };
            emit(&body, &report.summary(), path.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep(args) => {
            let res = args.resolve()?;
            let report = commands::sweep(&res)?;
            let (path, format) = args.destination(&res, Format::Csv);
            let body = match format {
                Format::Json => json(&report)?,
                Format::Csv => report.to_csv()?,
            };
            emit(&body, &report.summary(), path.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize(args) => {
            let mut res = args.resolve()?;
            res.force_optimize(args.budget, args.seed);
            let report = commands::optimize(&res)?;
            warn(&report.warnings);
            let (path, format) = args.destination(&res, Format::Json);
            let body = match format {
                Format::Json => json(&report)?,
                Format::Csv => report.to_csv()?,
            };
            emit(&body, &report.summary(), path.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
