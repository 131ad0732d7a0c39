//! Command-line driver: one subcommand per verification suite.
//!
//! Exit status: 0 all checks pass, 1 some check fails, 2 usage error,
//! 3 resource guard exceeded.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use superjordan::cli::{run, BracketFixture, Format, RunConfig, Task};
use superjordan::cohomology::Coeffs;
use superjordan::error::RunError;

#[derive(Parser)]
#[command(name = "superjordan", version, about = "Verify the (co)homology of the super Jordan plane")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
    /// Largest homological degree.
    #[arg(long, global = true, env = "SUPERJORDAN_MAX_HDEG", default_value_t = 6)]
    max_hdeg: u32,
    /// Largest absolute internal weight.
    #[arg(long, global = true, env = "SUPERJORDAN_MAX_WEIGHT", default_value_t = 12)]
    max_weight: i64,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoeffArg {
    A,
    K,
}

#[derive(Subcommand)]
enum Command {
    /// Confluence, commutation rules, Hilbert series and the ℤ-action on A.
    VerifyRewriting {
        /// Largest n and b in the commutation rules.
        #[arg(long, default_value_t = 8)]
        max_rule: u32,
        /// Largest internal degree for dim A_d.
        #[arg(long, default_value_t = 40)]
        max_hilbert: u32,
    },
    /// d∘d = 0, minimality, exactness and the comparison maps.
    VerifyResolution,
    /// H^•(A,A) cells (or H^•(A,k) with --coeff k), periodicity, bar oracle.
    Cohomology {
        #[arg(long, value_enum, default_value_t = CoeffArg::A)]
        coeff: CoeffArg,
        #[command(flatten)]
        bar: BarArgs,
    },
    /// H_•(A,A) cells and bar oracle.
    Homology {
        #[command(flatten)]
        bar: BarArgs,
    },
    /// Cup products of named generators and u_0-periodicity.
    CupTable {
        #[arg(long, default_value_t = 3)]
        max_index: u32,
        #[arg(long, default_value_t = 2)]
        max_pq: u32,
    },
    /// Lie structure of H¹ and its transport to the Virasoro algebra.
    Virasoro {
        #[arg(long, default_value_t = 3)]
        max_m: u32,
        /// JSON file of bracket overrides.
        #[arg(long)]
        fixture: Option<std::path::PathBuf>,
    },
    /// Action of H¹ on H^• via liftings and the Jacobi recursion.
    Brackets {
        #[arg(long, default_value_t = 3)]
        max_index: u32,
        #[arg(long, default_value_t = 2)]
        max_pq: u32,
        #[arg(long, default_value_t = 4)]
        max_m: u32,
    },
    /// The Yoneda algebra H^•(A,k): products, presentation, 𝒦₂.
    Yoneda {
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        #[arg(long, default_value_t = 10)]
        presentation_degree: u32,
    },
    /// The ℤ-action and the spectral sequence for the bosonization A#kℤ.
    Bosonization {
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        #[arg(long, default_value_t = 10)]
        presentation_degree: u32,
    },
}

#[derive(Args)]
struct BarArgs {
    /// Largest homological degree for the bar-complex oracle.
    #[arg(long, default_value_t = 3)]
    bar_hdeg: u32,
    /// Largest absolute weight for the bar-complex oracle.
    #[arg(long, default_value_t = 8)]
    bar_weight: i64,
    /// Largest bar-cell dimension before the resource guard trips.
    #[arg(long, default_value_t = superjordan::cohomology::BAR_ORACLE_LIMIT)]
    bar_limit: usize,
}

fn config(cli: &Cli) -> Result<RunConfig, RunError> {
    let task = match &cli.command {
        Command::VerifyRewriting { .. } => Task::VerifyRewriting,
        Command::VerifyResolution => Task::VerifyResolution,
        Command::Cohomology { .. } => Task::Cohomology,
        Command::Homology { .. } => Task::Homology,
        Command::CupTable { .. } => Task::CupTable,
        Command::Virasoro { .. } => Task::Virasoro,
        Command::Brackets { .. } => Task::Brackets,
        Command::Yoneda { .. } => Task::Yoneda,
        Command::Bosonization { .. } => Task::Bosonization,
    };
    let mut cfg = RunConfig::new(task);
    cfg.verbose = true;
    cfg.max_hdeg = cli.common.max_hdeg;
    cfg.max_weight = cli.common.max_weight;
    let bar = |cfg: &mut RunConfig, b: &BarArgs| {
        cfg.bar_hdeg = b.bar_hdeg;
        cfg.bar_weight = b.bar_weight;
        cfg.bar_limit = b.bar_limit;
    };
    match &cli.command {
        Command::VerifyRewriting { max_rule, max_hilbert } => {
            cfg.max_rule = *max_rule;
            cfg.max_hilbert = *max_hilbert;
        }
        Command::VerifyResolution => {}
        Command::Cohomology { coeff, bar: b } => {
            cfg.coeffs = match coeff {
                CoeffArg::A => Coeffs::A,
                CoeffArg::K => Coeffs::K,
            };
            bar(&mut cfg, b);
        }
        Command::Homology { bar: b } => bar(&mut cfg, b),
        Command::CupTable { max_index, max_pq } => {
            cfg.max_index = *max_index;
            cfg.max_pq = *max_pq;
        }
        Command::Virasoro { max_m, fixture } => {
            cfg.max_m = *max_m;
            if let Some(path) = fixture {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| RunError::Usage(format!("cannot read {}: {e}", path.display())))?;
                cfg.fixture = Some(BracketFixture::parse(&text)?);
            }
        }
        Command::Brackets { max_index, max_pq, max_m } => {
            cfg.max_index = *max_index;
            cfg.max_pq = *max_pq;
            cfg.max_m = *max_m;
        }
        Command::Yoneda { max_degree, presentation_degree } | Command::Bosonization { max_degree, presentation_degree } => {
            cfg.max_degree = *max_degree;
            cfg.presentation_degree = *presentation_degree;
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let format = match cli.common.format {
        OutFormat::Json => Format::Json,
        OutFormat::Md => Format::Markdown,
    };
    let start = Instant::now();
    let outcome = config(&cli).and_then(|cfg| run(&cfg));
    match outcome {
        Ok(report) => {
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Markdown => print!("{}", report.to_markdown()),
            }
            eprintln!(
                "[superjordan] {}: {}/{} checks passed in {:.1?}",
                report.task,
                report.summary.passed,
                report.summary.total,
                start.elapsed()
            );
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
