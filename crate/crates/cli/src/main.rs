use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use maxsat::config::Format;
use maxsat::{run, CliError, Command, Overrides, RunConfig};

/// Coupled scalar recursions: potentials, thresholds, EXIT curves.
#[derive(Debug, Parser)]
#[command(name = "maxsat", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Channel parameter; overrides the config.
    #[arg(long)]
    eps: Option<f64>,
    /// Number of coupled positions.
    #[arg(long = "N")]
    n: Option<usize>,
    /// Coupling window width.
    #[arg(long)]
    w: Option<usize>,
    /// Output file (stdout if absent); CSV metadata goes to `<out>.meta.json`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::load(&cli.config)?;
    let ov = Overrides { eps: cli.eps, n: cli.n, w: cli.w, out: cli.out, format: cli.format };
    let (report, st) = run(cli.command, &cfg, &ov)?;
    match &st.out {
        Some(path) => {
            let mut out = BufWriter::new(File::create(path)?);
            if st.format == Format::Csv {
                let mut meta = BufWriter::new(File::create(meta_path(path))?);
                report.output.render(st.format, &mut out, &mut meta)?;
                meta.flush()?;
            } else {
                report.output.render(st.format, &mut out, io::sink())?;
            }
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            report.output.render(st.format, &mut out, io::stderr().lock())?;
            out.flush()?;
        }
    }
    match report.error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("maxsat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
