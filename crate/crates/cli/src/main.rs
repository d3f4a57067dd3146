use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use weno_lab::config::{parse_config, RunConfig};
use weno_lab::{run, CliError};

/// Run WENO benchmarks and write CSV tables.
///
/// Commands: solve, accuracy, adr, weights, ek-table, distribution.
/// Values from `--config` are applied first; flags override them.
#[derive(Debug, Parser)]
#[command(name = "weno-lab", version)]
struct Args {
    /// solve | accuracy | adr | weights | ek-table | distribution
    command: Option<String>,
    /// File of `key = value` lines
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    nx: Option<String>,
    #[arg(long)]
    ny: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    #[arg(long = "t_final", alias = "t-final")]
    t_final: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    /// Three comma-separated coefficients
    #[arg(long)]
    c: Option<String>,
    /// characteristic | componentwise
    #[arg(long)]
    mode: Option<String>,
    /// tent | printed
    #[arg(long)]
    triangle: Option<String>,
    /// Comma-separated grid sizes
    #[arg(long)]
    resolutions: Option<String>,
    /// Comma-separated times
    #[arg(long = "record_times", alias = "record-times")]
    record_times: Option<String>,
    #[arg(long = "n_points", alias = "n-points")]
    n_points: Option<String>,
    #[arg(long = "dt_probe", alias = "dt-probe")]
    dt_probe: Option<String>,
    #[arg(long, short)]
    output: Option<String>,
}

impl Args {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                parse_config(&text)?
            }
            None => RunConfig::default(),
        };
        let flags = [
            ("command", self.command),
            ("problem", self.problem),
            ("scheme", self.scheme),
            ("function", self.function),
            ("n", self.n),
            ("nx", self.nx),
            ("ny", self.ny),
            ("cfl", self.cfl),
            ("t_final", self.t_final),
            ("epsilon", self.epsilon),
            ("p", self.p),
            ("eta", self.eta),
            ("c", self.c),
            ("mode", self.mode),
            ("triangle", self.triangle),
            ("resolutions", self.resolutions),
            ("record_times", self.record_times),
            ("n_points", self.n_points),
            ("dt_probe", self.dt_probe),
            ("output", self.output),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = args.into_config().and_then(|cfg| run(&cfg));
    match result {
        Ok(s) => {
            println!("wrote {} rows to {}", s.rows, s.path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("weno-lab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
