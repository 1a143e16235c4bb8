mod commands;
mod report;

use std::fmt;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use resram::config::{ConfigError, OutputFormat};
use resram::sizing::Infeasibility;

#[derive(Parser, Debug)]
#[command(name = "resram", version, about = "Resonant SRAM bitline models")]
pub struct Cli {
    /// Configuration file (flat `key = value` lines).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Artifact path; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Suppress the config echo and warnings.
    #[arg(long, global = true)]
    pub quiet: bool,

    /// Override a config key, e.g. `--set circuit.v_dd=0.8V`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,

    /// Do not write the `<output>.meta.json` sidecar.
    #[arg(long, global = true)]
    pub no_meta: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Resonance figures and swing for the configured tank.
    Derive,
    /// Discharge time for the three MUX configurations.
    Table1,
    /// Transient write cycle: trace CSV plus energy report.
    Simulate {
        /// Validate the configuration and exit.
        #[arg(long)]
        dry_run: bool,
        /// Integration step, e.g. `50fs`.
        #[arg(long)]
        dt: Option<String>,
    },
    /// Smallest inductance meeting the sizing constraints.
    Size,
    /// Design-space sweep over the given axes.
    Sweep {
        #[arg(long, value_delimiter = ',')]
        bits: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        rows: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        inductance: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        vdd: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        corners: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
            OutputFormat::Table => Format::Table,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config(ConfigError),
    Io { path: String, source: io::Error },
    Infeasible(Infeasibility),
    Model(resram::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Io { .. } => 4,
            CliError::Infeasible(_) => 5,
            CliError::Model(_) => 6,
        }
    }
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: kind=usage msg={}", quoted(m)),
            CliError::Config(e) => write!(
                f,
                "error: kind=config key={} msg={}",
                e.key.replace(' ', "_"),
                quoted(&e.kind.to_string())
            ),
            CliError::Io { path, source } => {
                write!(f, "error: kind=io path={} msg={}", quoted(path), quoted(&source.to_string()))
            }
            CliError::Infeasible(i) => write!(
                f,
                "error: kind=infeasible binding={} msg={}",
                i.binding.name(),
                quoted(&i.detail)
            ),
            CliError::Model(e) => write!(f, "error: kind=numeric msg={}", quoted(&e.to_string())),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<resram::Error> for CliError {
    fn from(e: resram::Error) -> Self {
        match e {
            resram::Error::Infeasible(i) => CliError::Infeasible(i),
            other => CliError::Model(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
