use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qutrit_thermal::sweep::{self, Mode, SweepConfig};
use qutrit_thermal::Error;

/// Thermal entanglement and dense coding sweeps for the two-qutrit
/// bilinear-biquadratic chain.
#[derive(Debug, Parser)]
#[command(name = "qtherm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grid or line sweep of the requested measures.
    Sweep {
        /// grid-b1b2 | line-b1eqnegb2 | grid-kt | grid-b2t | bounds-scan | densecode-scan
        #[arg(long)]
        mode: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Separability temperatures T_s and T* along K.
    Threshold {
        /// Also estimate T_s from the algebraic lower bound.
        #[arg(long)]
        ts_alb: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form and numerical energies along K.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// All measures at one parameter point, as key=value lines.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long = "J", allow_hyphen_values = true)]
    j: Option<String>,
    #[arg(long = "K", allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long = "B1", allow_hyphen_values = true)]
    b1: Option<String>,
    #[arg(long = "B2", allow_hyphen_values = true)]
    b2: Option<String>,
    #[arg(long = "T", allow_hyphen_values = true)]
    t: Option<String>,
    /// start:stop:count
    #[arg(long = "range-b1", value_name = "RANGE", allow_hyphen_values = true)]
    range_b1: Option<String>,
    #[arg(long = "range-b2", value_name = "RANGE", allow_hyphen_values = true)]
    range_b2: Option<String>,
    /// B1 = B, B2 = -B
    #[arg(long = "range-b", value_name = "RANGE", allow_hyphen_values = true)]
    range_b: Option<String>,
    #[arg(long = "range-k", value_name = "RANGE", allow_hyphen_values = true)]
    range_k: Option<String>,
    #[arg(long = "range-t", value_name = "RANGE", allow_hyphen_values = true)]
    range_t: Option<String>,
    /// Comma-separated subset of the report fields.
    #[arg(long)]
    measures: Option<String>,
    /// Output file; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// key=value file; flags given here take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    threads: Option<String>,
}

impl Common {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let opts: [(&'static str, &Option<String>); 12] = [
            ("J", &self.j),
            ("K", &self.k),
            ("B1", &self.b1),
            ("B2", &self.b2),
            ("T", &self.t),
            ("range-b1", &self.range_b1),
            ("range-b2", &self.range_b2),
            ("range-b", &self.range_b),
            ("range-k", &self.range_k),
            ("range-t", &self.range_t),
            ("measures", &self.measures),
            ("threads", &self.threads),
        ];
        let mut out: Vec<(&'static str, String)> =
            opts.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k, v))).collect();
        if let Some(p) = &self.out {
            out.push(("out", p.display().to_string()));
        }
        out
    }
}

enum Failure {
    Config(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::Config(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

fn build_config(common: &Common, mode: Option<Mode>, mode_flag: Option<&str>, ts_alb: bool) -> Result<SweepConfig, Failure> {
    let mut cfg = SweepConfig::default();
    if let Some(path) = &common.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", path.display())))?;
        cfg.apply_file_text(&text)?;
    }
    if let Some(m) = mode {
        cfg.mode = m;
    }
    if let Some(m) = mode_flag {
        cfg.apply("mode", m)?;
    }
    if ts_alb {
        cfg.ts_alb = true;
    }
    for (k, v) in common.pairs() {
        cfg.apply(k, &v)?;
    }
    Ok(cfg)
}

fn emit(cfg: &SweepConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Config(format!("cannot write to stdout: {e}"))),
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep { mode, common } => {
            let cfg = build_config(&common, None, mode.as_deref(), false)?;
            if matches!(cfg.mode, Mode::Threshold | Mode::Spectrum) {
                return Err(Failure::Config(format!("use the '{}' subcommand for mode {}", cfg.mode, cfg.mode)));
            }
            emit(&cfg, &sweep::run_sweep(&cfg)?.to_csv())
        }
        Command::Threshold { ts_alb, common } => {
            let cfg = build_config(&common, Some(Mode::Threshold), None, ts_alb)?;
            emit(&cfg, &sweep::run_threshold(&cfg)?.to_csv())
        }
        Command::Spectrum { common } => {
            let cfg = build_config(&common, Some(Mode::Spectrum), None, false)?;
            emit(&cfg, &sweep::run_spectrum(&cfg)?.to_csv())
        }
        Command::Report { common } => {
            let cfg = build_config(&common, None, None, false)?;
            emit(&cfg, &sweep::format_report(&sweep::report(&cfg)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("qtherm: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("qtherm: {msg}");
            ExitCode::from(3)
        }
    }
}
