use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context as _, Result};
use clap::Parser;
use ncg::workspace::EXAMPLE;
use ncg::{parse_workspace, run_command, verify_example_report, Command, Context, Report, Settings};
use ncg_core::homology::Window;
use ncg_core::scalars::{FieldKind, PrimeField, Rationals};

/// Graded noncommutative algebras and their modules: Groebner bases, Ext,
/// endomorphism algebras and the checks built on them.
#[derive(Parser, Debug)]
#[command(name = "ncg", version)]
struct Cli {
    /// Base field, `GF(p)` or `QQ`; defaults to the workspace's field.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Truncation degree for presented algebras.
    #[arg(long, global = true)]
    max_deg: Option<i64>,
    /// Window `lo,hi,hmax,cap`: internal degrees, homological bound and
    /// kernel degree cap.
    #[arg(long, global = true, allow_hyphen_values = true, value_parser = parse_window)]
    window: Option<Window>,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Workspace file; the built-in example when omitted.
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn parse_window(s: &str) -> Result<Window, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err("expected `lo,hi,hmax,cap`".into());
    }
    let num = |i: usize| parts[i].parse::<i64>().map_err(|_| format!("`{}` is not an integer", parts[i]));
    let hmax = usize::try_from(num(2)?).map_err(|_| "hmax must be non-negative".to_string())?;
    Window::new(num(0)?, num(1)?, hmax, num(3)?).map_err(|e| e.to_string())
}

fn run(cli: &Cli) -> Result<Report> {
    let field = cli
        .field
        .as_deref()
        .map(str::parse::<FieldKind>)
        .transpose()
        .context("--field")?;
    let settings = Settings {
        max_deg: cli.max_deg,
        window: cli.window,
        seed: cli.seed,
    };
    if let Command::VerifyExample = cli.command {
        return Ok(verify_example_report(field, &settings));
    }
    let text = match &cli.workspace {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => EXAMPLE.to_string(),
    };
    let ws = parse_workspace(&text).context("parsing workspace")?;
    let kind = match field {
        Some(k) => k,
        None => ws.field_kind()?,
    };
    let start = Instant::now();
    let mut report = match kind {
        FieldKind::Prime(p) => run_command(&Context::new(ws, PrimeField::new(p)?, &settings)?, &cli.command)?,
        FieldKind::Rational => run_command(&Context::new(ws, Rationals, &settings)?, &cli.command)?,
    };
    report.elapsed = start.elapsed();
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // Usage errors share the exit code of other errors; 2 means inconclusive.
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            let json = report.to_json();
            println!("{json}");
            if let Some(path) = &cli.json {
                if let Err(e) = std::fs::write(path, format!("{json}\n")) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            }
            if let Some(e) = &report.error {
                eprintln!("error: {e}");
            }
            let status = if report.error.is_some() { "error".to_string() } else { format!("{:?}", report.verdict) };
            eprintln!("{}: {status} in {:.2?}", report.command, report.elapsed);
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
