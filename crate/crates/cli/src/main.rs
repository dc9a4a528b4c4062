//! `cluster-f2`: triangulations, colorings, point counts and covering checks
//! from the command line.

mod commands;
mod output;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cluster_f2::DynkinType;
use commands::{Guard, Method};
use output::Format;

#[derive(Parser)]
#[command(name = "cluster-f2", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run past resource guards (prints a warning).
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List all triangulations of the (m+1)-gon, or all points of X(m).
    Enumerate {
        #[arg(long)]
        m: usize,
        /// Enumerate points instead of triangulations.
        #[arg(long)]
        points: bool,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// With --points, leave out the alternating deep point.
        #[arg(long)]
        manifold: bool,
        /// Write the listing to a file and print a summary.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Apply the F2 coloring map to triangulations.
    Color {
        #[arg(long)]
        m: Option<usize>,
        /// Comma-separated diagonals, e.g. "0-2,0-3,0-4".
        #[arg(long)]
        diagonals: Option<String>,
        /// JSON file with one or more triangulations.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Count F2 points of an acyclic quiver.
    Count {
        /// Quiver JSON file or a builder such as dynkin:D:5.
        #[arg(long)]
        quiver: String,
        #[arg(long, value_enum, default_value = "all")]
        method: Method,
    },
    /// Hexagonal-move classes of all triangulations.
    Classes {
        #[arg(long)]
        m: usize,
    },
    /// Compare hexagonal-move classes with the fibers of the coloring map.
    VerifyTheorem {
        #[arg(long)]
        m: usize,
    },
    /// Build the fan-construction covering and check it.
    Cover {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
        /// Write the covering triangulations to a file.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Include the per-point assignment.
        #[arg(long)]
        verbose: bool,
    },
    /// Build and check the 12-gon covering that misses a non-F2 point.
    Counterexample {
        #[arg(long, default_value_t = 3)]
        q: usize,
        /// Also check coverage of every point over the given field.
        #[arg(long)]
        full: bool,
    },
    /// Check whether a set of triangulations covers every non-deep point.
    VerifyCover {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        q: usize,
        /// Polygon parameter, needed only for an empty file.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        verbose: bool,
    },
    /// Point and seed counts for one Dynkin type, cross-checked.
    Table1 {
        #[arg(long = "type")]
        ty: DynkinType,
        #[arg(long)]
        max_rank: usize,
    },
}

fn run(cli: &Cli) -> anyhow::Result<output::Report> {
    let guard = Guard { force: cli.force };
    match &cli.command {
        Command::Enumerate {
            m,
            points,
            q,
            manifold,
            emit,
        } => commands::enumerate(&guard, *m, *points, *q, *manifold, emit.as_ref()),
        Command::Color { m, diagonals, file } => {
            commands::color(*m, diagonals.as_deref(), file.as_ref())
        }
        Command::Count { quiver, method } => commands::count(&guard, quiver, *method),
        Command::Classes { m } => commands::classes(&guard, *m),
        Command::VerifyTheorem { m } => commands::verify_theorem(&guard, *m),
        Command::Cover {
            m,
            q,
            emit,
            verbose,
        } => commands::cover(&guard, *m, *q, emit.as_ref(), *verbose),
        Command::Counterexample { q, full } => commands::counterexample(*q, *full),
        Command::VerifyCover {
            file,
            q,
            m,
            verbose,
        } => commands::verify_cover(file, *q, *m, *verbose, &guard),
        Command::Table1 { ty, max_rank } => commands::table1(*ty, *max_rank, &guard),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .expect("thread pool is configured once");
    }
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if let Err(e) = report.write(cli.format, &mut out).and_then(|()| Ok(out.flush()?)) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::from(1)
    }
}
