//! Command-line front end: `evolve`, `measure`, `timescales`, `sweep` and
//! `selfcheck`.
//!
//! Exit codes: 0 success, 1 validation or check failure, 2 usage error.

pub mod config;
pub mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{ohmic_environment, run_sweep, GradientSpec, SweepRecord};
use crate::error::Result;
use crate::selfcheck;
use crate::states::DIM;
use config::RunConfig;
use output::{EvolveRow, Format, ParamRow, RecordRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "tripartite",
    version,
    about = "Dephasing of three qubits in independent thermal reservoirs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the evolved 8x8 density matrix at every requested time.
    Evolve(RunArgs),
    /// Sample the selected measures over the time grid.
    Measure(RunArgs),
    /// Preservation time, characteristic time and freezing intervals.
    Timescales(RunArgs),
    /// Curves and timescales over the full parameter grid.
    Sweep(RunArgs),
    /// Run the embedded oracle suite.
    Selfcheck,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// JSON configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file (standard output if omitted).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Override a configuration key, e.g. `--set x=[0.5,0.8]`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    run(cli, stdout, stderr)
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let args = match cli.command {
        Command::Selfcheck => {
            let report = selfcheck::run();
            let _ = write!(stdout, "{report}");
            return report.exit_code();
        }
        Command::Evolve(ref a)
        | Command::Measure(ref a)
        | Command::Timescales(ref a)
        | Command::Sweep(ref a) => a,
    };
    let cfg = match load_config(args) {
        Ok(cfg) => cfg,
        Err((code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return code;
        }
    };
    let mut buffer = Vec::new();
    let outcome = match cli.command {
        Command::Evolve(_) => cmd_evolve(&cfg, args.format, &mut buffer).map(|()| 0),
        Command::Measure(_) => cmd_records(cfg, args.format, true, false, &mut buffer),
        Command::Timescales(_) => cmd_records(cfg, args.format, false, true, &mut buffer),
        Command::Sweep(_) => {
            let (curves, timescales) = (cfg.grid.curves, cfg.grid.timescales);
            cmd_records(cfg, args.format, curves, timescales, &mut buffer)
        }
        Command::Selfcheck => unreachable!(),
    };
    let failures = match outcome {
        Ok(n) => n,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    if let Err(e) = emit(args.out.as_ref(), &buffer, stdout) {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_FAILURE;
    }
    if failures > 0 {
        let _ = writeln!(
            stderr,
            "error: {failures} grid point(s) failed; see rows with record = failure"
        );
        return EXIT_FAILURE;
    }
    EXIT_OK
}

fn load_config(args: &RunArgs) -> std::result::Result<RunConfig, (i32, String)> {
    let doc = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                (
                    EXIT_USAGE,
                    format!("cannot read config {}: {e}", path.display()),
                )
            })?;
            serde_json::from_str(&text).map_err(|e| {
                (
                    EXIT_FAILURE,
                    format!("config {} is not valid JSON: {e}", path.display()),
                )
            })?
        }
        None => serde_json::Value::Null,
    };
    RunConfig::from_value(doc, &args.overrides).map_err(|e| (EXIT_FAILURE, e.to_string()))
}

fn emit(path: Option<&PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(bytes)?;
            w.flush()
        }
        None => stdout.write_all(bytes),
    }
}

/// Long-format density matrix rows: one per (point, t, i, j).
pub fn cmd_evolve(cfg: &RunConfig, format: Format, out: &mut dyn Write) -> Result<()> {
    let grid = &cfg.grid;
    let times = grid.time.samples();
    let mut rows = Vec::new();
    for point in grid.points() {
        let gradient = GradientSpec::new(point.beta_a, point.k1, point.k2)?;
        let env = ohmic_environment(&cfg.qubits, point.eta, grid.omega_c, &gradient, grid.method)?;
        let rho0 = grid.state.build(point.x)?;
        let params = ParamRow::new(
            &crate::measures::Parameters {
                x: point.x,
                eta: point.eta,
                beta_a: point.beta_a.beta(),
                k1: point.k1,
                k2: point.k2,
                omega_sq: cfg.qubits.omega_sq(),
                method: grid.method,
            },
            grid,
            cfg.omega_sq,
        );
        for &tau in &times {
            let rho = env.evolve(&rho0, tau / grid.omega_c)?;
            for i in 0..DIM {
                for j in 0..DIM {
                    let z = rho.get(i, j);
                    rows.push(EvolveRow {
                        params: params.clone(),
                        t: tau,
                        i,
                        j,
                        re: z.re,
                        im: z.im,
                        abs: z.norm(),
                    });
                }
            }
        }
    }
    output::write_evolve(out, format, &rows)?;
    Ok(())
}

/// Measure and timescale rows; returns the number of failed rows.
pub fn cmd_records(
    mut cfg: RunConfig,
    format: Format,
    curves: bool,
    timescales: bool,
    out: &mut dyn Write,
) -> Result<usize> {
    cfg.grid.curves = curves;
    cfg.grid.timescales = timescales;
    let records = run_sweep(&cfg.grid, &cfg.qubits)?;
    let failures = records
        .iter()
        .filter(|r| matches!(r, SweepRecord::Failure { .. }))
        .count();
    let rows: Vec<RecordRow> = records
        .iter()
        .map(|r| RecordRow::from_record(r, &cfg.grid, cfg.omega_sq))
        .collect();
    output::write_records(out, format, &rows)?;
    Ok(failures)
}
