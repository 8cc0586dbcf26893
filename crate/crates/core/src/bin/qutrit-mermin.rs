use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qutrit_mermin::pauli::WVariant;
use qutrit_mermin::report::{
    self, KSelection, MethodChoice, OutputFormat, Report, ReportError, RunConfig,
    DEFAULT_MAX_BRUTE_N, MAX_BRUTE_N_ENV,
};

/// Exact Mermin operators and hidden-variable maxima for N qutrits.
///
/// Exit codes: 0 success, 1 internal error, 2 input error, 3 size guard
/// violated, 4 verification failure, 5 methods disagree.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum and maximum hidden-variable values per N.
    Table(Common),
    /// Eigenstate, closed-form and partition checks.
    Verify(Common),
    /// Hidden-variable maxima per (N, k) and method.
    Hvmax(Common),
    /// Three-qutrit operators with their W terms and maximizers.
    N3(Common),
    /// Qubit ratios next to the qutrit ratios.
    Qubit(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Brute,
    Symmetric,
    Theorem,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Markdown,
}

#[derive(Clone, Copy, ValueEnum)]
enum WVariantArg {
    Conjugation,
    Displayed,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// k values (comma separated); default depends on the method.
    #[arg(long, value_delimiter = ',')]
    k: Vec<u8>,
    #[arg(long, value_enum, default_value = "all")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "markdown")]
    format: FormatArg,
    #[arg(long, value_enum, default_value = "conjugation")]
    w_variant: WVariantArg,
    /// Omit floating-point columns.
    #[arg(long)]
    exact_only: bool,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, env = MAX_BRUTE_N_ENV, default_value_t = DEFAULT_MAX_BRUTE_N)]
    max_brute_n: usize,
}

impl Common {
    fn config(&self, default_range: (usize, usize)) -> RunConfig {
        RunConfig {
            n_min: self.n_min.unwrap_or(default_range.0),
            n_max: self.n_max.unwrap_or(default_range.1),
            k: if self.k.is_empty() {
                KSelection::Auto
            } else {
                KSelection::Explicit(self.k.clone())
            },
            method: match self.method {
                MethodArg::Brute => MethodChoice::Brute,
                MethodArg::Symmetric => MethodChoice::Symmetric,
                MethodArg::Theorem => MethodChoice::Theorem,
                MethodArg::All => MethodChoice::All,
            },
            format: match self.format {
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Markdown => OutputFormat::Markdown,
            },
            exact_only: self.exact_only,
            jobs: self.jobs,
            max_brute_n: self.max_brute_n,
            w_variant: match self.w_variant {
                WVariantArg::Conjugation => WVariant::Conjugation,
                WVariantArg::Displayed => WVariant::Displayed,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<Report, ReportError> = match &cli.command {
        Command::Table(c) => report::table(&c.config((4, 13))),
        Command::Verify(c) => report::verify(&c.config((3, 10))),
        Command::Hvmax(c) => report::hvmax(&c.config((4, 9))),
        Command::N3(c) => report::n3(&c.config((3, 3))),
        Command::Qubit(c) => report::qubit(&c.config((3, 12))),
    };
    match result {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(report.output.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            for line in &report.diagnostics {
                eprintln!("{line}");
            }
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
