//! Command-line front end for the relay simulator.
//!
//! Exit codes: 0 success, 2 unphysical environment, 3 configuration error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use relay_cli::config::{resolve, CommonArgs, ModeKind, OutputFormat};
use relay_cli::record::{render_csv, render_json, PointRecord};
use relay_cli::scan::{self, CliError};

#[derive(Parser)]
#[command(
    name = "relay",
    about = "Quantum-relay protocols in correlated Gaussian environments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every metric at one parameter point (JSON to stdout or --out).
    Eval(CommonArgs),
    /// Sweep the correlation plane (g, g'); writes a grid file plus an
    /// antidiagonal diagnostic slice alongside it.
    ScanPlane(CommonArgs),
    /// Sweep the additive-noise variance n; appends monotonicity and
    /// sign-change diagnostics.
    ScanNoise(CommonArgs),
    /// Classify an environment: physicality, separability, EB threshold.
    EnvCheck(CommonArgs),
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(CliError::Io),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(CliError::Io),
    }
}

fn sidecar_path(out: &Path, tag: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("scan");
    let ext = out.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    out.with_file_name(format!("{stem}_{tag}.{ext}"))
}

fn render(
    format: OutputFormat,
    echo: &[(String, String)],
    records: &[PointRecord],
    diagnostics: &[(String, String)],
) -> String {
    match format {
        OutputFormat::Csv => render_csv(echo, records, diagnostics),
        OutputFormat::Json => render_json(echo, records, diagnostics),
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Eval(args) => {
            let cfg = resolve(ModeKind::Eval, args)?;
            let text = scan::eval_point(&cfg)?;
            write_or_print(&cfg.out, &text)
        }
        Command::EnvCheck(args) => {
            let cfg = resolve(ModeKind::EnvCheck, args)?;
            let (text, physical) = scan::env_check(&cfg)?;
            write_or_print(&cfg.out, &text)?;
            if physical {
                Ok(())
            } else {
                Err(CliError::UnphysicalEnvironment(
                    "see the report above".into(),
                ))
            }
        }
        Command::ScanPlane(args) => {
            let cfg = resolve(ModeKind::ScanPlane, args)?;
            let out = cfg.out.clone().expect("resolve enforces --out for scans");
            let plane = scan::run_plane(&cfg)?;
            write_or_print(
                &Some(out.clone()),
                &render(cfg.format, &plane.echo, &plane.records, &[]),
            )?;
            write_or_print(
                &Some(sidecar_path(&out, "antidiag")),
                &render(
                    cfg.format,
                    &plane.antidiagonal_echo,
                    &plane.antidiagonal,
                    &[],
                ),
            )
        }
        Command::ScanNoise(args) => {
            let cfg = resolve(ModeKind::ScanNoise, args)?;
            let out = cfg.out.clone().expect("resolve enforces --out for scans");
            let noise = scan::run_noise(&cfg)?;
            write_or_print(
                &Some(out),
                &render(cfg.format, &noise.echo, &noise.records, &noise.diagnostics),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("relay: {e}");
            match e {
                CliError::UnphysicalEnvironment(_) => ExitCode::from(2),
                CliError::Config(_) => ExitCode::from(3),
                CliError::Io(_) | CliError::Internal(_) => ExitCode::from(1),
            }
        }
    }
}
