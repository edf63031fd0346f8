use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use planar_cumulants::perm::{NumericalPartition, Permutation};
use planar_cumulants::report::{self, RunReport};
use planar_cumulants::{Error, Result};

#[derive(Parser)]
#[command(name = "planar-cumulants", version, about = "Verify map, Goulden-Jackson and GUE cumulant identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here in the chosen format; a table still goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Lift the size caps.
    #[arg(long, global = true)]
    unsafe_sizes: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Count GJdM and maps per conjugacy class.
    VerifyMain {
        #[arg(long = "n", default_value_t = 8)]
        n_max: usize,
        /// Restrict to these cycle types, e.g. "4;2,2".
        #[arg(long)]
        classes: Option<String>,
    },
    /// Brute-force map counts against Tutte's formula.
    Tutte {
        #[arg(long = "n", default_value_t = 8)]
        n_max: usize,
    },
    /// Leading cumulant coefficients against map counts.
    Thooft {
        #[arg(long = "n", default_value_t = 6)]
        n_max: usize,
    },
    /// Random instances of the BKAR formula.
    Bkar {
        #[arg(long = "n", default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Random instances of the tree expansion of Gaussian cumulants.
    Maintool {
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Tree-indexed expansions of a GUE cumulant.
    Expansion {
        #[arg(long)]
        lambda: String,
        #[arg(long = "N")]
        levels: usize,
    },
    /// Monte-Carlo cumulant from the tridiagonal model.
    Mc {
        #[arg(long)]
        lambda: String,
        #[arg(long = "N")]
        levels: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Export the tree, colored tree or mobile of a pair.
    Export {
        #[arg(long = "n")]
        n: usize,
        #[arg(long)]
        theta: String,
        #[arg(long)]
        sigma: String,
        /// Signs g as "1,-1,0,...".
        #[arg(long, conflicts_with = "g_file")]
        g: Option<String>,
        #[arg(long)]
        g_file: Option<PathBuf>,
        #[arg(long)]
        mobile: bool,
    },
}

fn parse_classes(text: &str) -> Result<Vec<NumericalPartition>> {
    text.split(';').map(|t| NumericalPartition::parse(t.trim())).collect()
}

fn run(cli: &Cli) -> Result<RunReport> {
    let unsafe_sizes = cli.unsafe_sizes;
    match &cli.command {
        Command::VerifyMain { n_max, classes } => {
            let classes = classes.as_deref().map(parse_classes).transpose()?;
            report::cmd_verify_main(*n_max, classes.as_deref(), unsafe_sizes)
        }
        Command::Tutte { n_max } => report::cmd_tutte(*n_max, unsafe_sizes),
        Command::Thooft { n_max } => report::cmd_thooft(*n_max, unsafe_sizes),
        Command::Bkar { n, trials } => report::cmd_bkar(*n, *trials, cli.seed, unsafe_sizes),
        Command::Maintool { trials } => report::cmd_maintool(*trials, cli.seed),
        Command::Expansion { lambda, levels } => {
            report::cmd_expansion(&NumericalPartition::parse(lambda)?, *levels, unsafe_sizes)
        }
        Command::Mc { lambda, levels, samples } => {
            report::cmd_mc(&NumericalPartition::parse(lambda)?, *levels, *samples, cli.seed, unsafe_sizes)
        }
        Command::Export { n, theta, sigma, g, g_file, mobile } => {
            let theta = Permutation::parse_cycles(theta, *n)?;
            let sigma = Permutation::parse_cycles(sigma, *n)?;
            let g = match (g, g_file) {
                (Some(text), _) => Some(report::parse_signs(text)?),
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
                    Some(report::parse_signs(&text)?)
                }
                (None, None) => None,
            };
            if *mobile && g.is_none() {
                return Err(Error::Invalid("--mobile needs --g or --g-file".into()));
            }
            report::cmd_export(&theta, &sigma, g.as_deref(), *mobile)
        }
    }
}

fn render(report: &RunReport, format: Format) -> Result<String> {
    match format {
        Format::Table => Ok(report.to_table()),
        Format::Json => Ok(report.to_json()),
        Format::Csv => report.to_csv(),
        Format::Dot => report
            .dot
            .clone()
            .ok_or_else(|| Error::Invalid(format!("{} has no dot output", report.command))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli).and_then(|mut report| {
        report.elapsed = Some(start.elapsed());
        let rendered = render(&report, cli.format)?;
        match &cli.out {
            Some(path) => {
                std::fs::write(path, rendered).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
                print!("{}", report.to_table());
            }
            None => print!("{rendered}"),
        }
        Ok(report.all_pass())
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
