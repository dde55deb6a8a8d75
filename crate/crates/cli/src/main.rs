use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nls_lab::config::load_config;
use nls_lab::snapshot::{read_header, read_snapshot};
use nls_lab::sweep::{cmd_sweep, parse_values, write_sweep, Axis};
use nls_lab::verify::{run_suite, Suite};
use nls_lab::{run, CliError, EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE};

/// Coupled defocusing cubic NLS laboratory.
#[derive(Parser)]
#[command(name = "nls-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a configuration and write timeseries.csv, final.snap and report.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides out_dir from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the I-operator threshold or the data amplitude.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// `N` or `amplitude`.
        #[arg(long)]
        axis: String,
        /// Comma-separated axis values (at least 3).
        #[arg(long)]
        values: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite: spectral, conservation, morawetz, scattering or all.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Inspect a snapshot file.
    Snapshot {
        #[command(subcommand)]
        action: SnapshotAction,
    },
}

#[derive(Subcommand)]
enum SnapshotAction {
    /// Print every sample as CSV.
    Dump { file: PathBuf },
    /// Print the header.
    Info { file: PathBuf },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("NLS_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("NLS_THREADS: expected a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("NLS_THREADS: {e}")))
}

fn execute(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Run { config, out } => {
            let cfg = load_config(&config)?;
            let outcome = run::cmd_run(&cfg, out.as_deref())?;
            let r = &outcome.report;
            println!(
                "{}: {} samples, t={} ({}), artifacts in {}",
                config.display(),
                r.samples,
                r.t_end,
                r.status,
                outcome.out_dir.display()
            );
            if let Some(t) = &r.truncation {
                eprintln!("blow-up at t={}: {}", t.t, t.reason);
            }
            Ok(outcome.exit_code())
        }
        Command::Sweep {
            config,
            axis,
            values,
            out,
        } => {
            let cfg = load_config(&config)?;
            let axis: Axis = axis.parse()?;
            let output = cmd_sweep(&cfg, axis, &parse_values(&values)?)?;
            let dir = out.unwrap_or_else(|| cfg.out_dir.clone());
            let path = write_sweep(&dir, axis, &output)?;
            println!("{}", serde_json::to_string_pretty(&output).expect("sweep output serializes"));
            eprintln!("wrote {}", path.display());
            Ok(if output.all_ok() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse().map_err(CliError::Usage)?;
            let reports = run_suite(suite, |r| print!("{r}"));
            let failed = reports.iter().filter(|r| !r.pass()).count();
            println!("{} of {} criteria passed", reports.len() - failed, reports.len());
            Ok(if failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Snapshot { action } => match action {
            SnapshotAction::Info { file } => {
                let h = read_header(&file)?;
                println!("version: {}", h.version);
                println!("grid: {:?}", h.grid);
                println!("t: {}", h.t);
                println!(
                    "lambda: {}\nmu: {}\ns: {}\nN: {}",
                    h.params.lambda, h.params.mu, h.params.s, h.params.threshold
                );
                println!("samples per component: {}", h.samples);
                // Reading the full file validates the payload checksum too.
                read_snapshot(&file)?;
                println!("payload: ok");
                Ok(EXIT_OK)
            }
            SnapshotAction::Dump { file } => {
                let state = read_snapshot(&file)?;
                let mut w = csv::Writer::from_writer(std::io::stdout().lock());
                let io = |e: csv::Error| CliError::io(&file, e.into());
                w.write_record(["index", "r", "u_re", "u_im", "v_re", "v_im"]).map_err(io)?;
                let (u, v) = (state.u().samples(), state.v().samples());
                for (k, &r) in state.grid().radii().iter().enumerate() {
                    w.write_record([
                        k.to_string(),
                        format!("{r:e}"),
                        format!("{:e}", u[k].re),
                        format!("{:e}", u[k].im),
                        format!("{:e}", v[k].re),
                        format!("{:e}", v[k].im),
                    ])
                    .map_err(io)?;
                }
                w.flush().map_err(|e| CliError::io(&file, e))?;
                Ok(EXIT_OK)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match configure_threads().and_then(|()| execute(cli.command)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
