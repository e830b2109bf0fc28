//! `hecke-moments`: command-line access to the toolkit.

mod commands;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit status 2.
    Invalid(String),
    /// A numerical tolerance was not met; exit status 1.
    Contract(String),
    /// Writing the output failed; exit status 1.
    Io(String),
}

impl From<hecke_moments::Error> for CliError {
    fn from(e: hecke_moments::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Parser)]
#[command(name = "hecke-moments", version, about = "Twisted first moments of weight-two L-functions")]
#[command(args_override_self = true)]
#[command(after_help = "Any subcommand also accepts --config PATH: a file of key=value lines (keys are long option \
names without the dashes) read as defaults, which explicit options override.")]
struct Cli {
    #[command(flatten)]
    output: OutputArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Leave wall-clock timings out of the output, so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub omit_timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Table of the Dirichlet characters modulo q.
    Chars(commands::CharsArgs),
    /// Gauss sum of a character.
    Gauss(commands::CharacterArgs),
    /// Kloosterman sum S(m, n; c).
    Kloosterman(commands::KloostermanArgs),
    /// Weil-bound ratios over a box of (m, n, c).
    WeilSweep(commands::WeilSweepArgs),
    /// Hurwitz or periodic zeta value.
    Zeta(commands::ZetaArgs),
    /// Bessel function J1.
    Besselj1(commands::BesselArgs),
    /// The smooth cutoff V(x).
    Cutoff(commands::CutoffArgs),
    /// Twisted periodic zeta function F*(s, chi, a/c).
    Fstar(commands::FstarArgs),
    /// Both sides of the functional equation of F*.
    FeqCheck(commands::FeqArgs),
    /// |F*| against its convexity bound on a grid.
    ConvexitySweep(commands::ConvexityArgs),
    /// First moment over a basis or over newforms of level N.
    Moment(commands::MomentArgs),
    /// Error decay of the moment along a list of levels.
    Sweep(commands::SweepArgs),
    /// Run every verification suite.
    VerifyAll(commands::VerifyArgs),
}

/// Rendered output plus, when a tolerance check failed, the reason.
pub struct Outcome {
    pub text: String,
    pub violation: Option<String>,
}

impl Outcome {
    pub fn ok(text: String) -> Self {
        Self { text, violation: None }
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let out = &cli.output;
    match cli.command {
        Command::Chars(a) => commands::chars(&a, out),
        Command::Gauss(a) => commands::gauss(&a, out),
        Command::Kloosterman(a) => commands::kloosterman(&a, out),
        Command::WeilSweep(a) => commands::weil_sweep(&a, out),
        Command::Zeta(a) => commands::zeta(&a, out),
        Command::Besselj1(a) => commands::besselj1(&a, out),
        Command::Cutoff(a) => commands::cutoff(&a, out),
        Command::Fstar(a) => commands::fstar(&a, out),
        Command::FeqCheck(a) => commands::feq_check(&a, out),
        Command::ConvexitySweep(a) => commands::convexity_sweep(&a, out),
        Command::Moment(a) => commands::moment(&a, out),
        Command::Sweep(a) => commands::sweep(&a, out),
        Command::VerifyAll(a) => commands::verify_all(&a, out),
    }
}

fn emit(text: &str, out: &OutputArgs) -> Result<(), CliError> {
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match input::merge_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => return report(e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = cli.output.clone();
    // Output is written even when a tolerance check fails; the failure is reported afterwards.
    let outcome = match run(cli) {
        Ok(o) => o,
        Err(e) => return report(e),
    };
    if let Err(e) = emit(&outcome.text, &out) {
        return report(e);
    }
    match outcome.violation {
        Some(reason) => report(CliError::Contract(reason)),
        None => ExitCode::SUCCESS,
    }
}

fn report(e: CliError) -> ExitCode {
    match e {
        CliError::Invalid(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        CliError::Contract(msg) => {
            eprintln!("tolerance not met: {msg}");
            ExitCode::from(1)
        }
        CliError::Io(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
