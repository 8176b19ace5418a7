use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::{CliError, Outcome, RunConfig};

/// Exact Heisenberg and Weil representations over F_p.
#[derive(Parser, Debug)]
#[command(name = "weil", version)]
struct Cli {
    /// Odd prime, at most 7.
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Dimension 2n of the symplectic space (2 or 4).
    #[arg(long, global = true, default_value_t = 2)]
    dim: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Sample count for checks too large to run exhaustively.
    #[arg(long, global = true, default_value_t = 500)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    /// JSON with floating-point renderings next to the exact values.
    Float,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// G₁ and the identity G₁^{2n} = p^n·σ((−1)^n).
    Gauss,
    /// Enumerate Lagrangian subspaces.
    Lagrangians {
        #[arg(long)]
        oriented: bool,
    },
    /// The canonical operator T from one oriented Lagrangian model to another.
    Intertwiner {
        /// Source, e.g. "rows=1,0|o=1".
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Also compute the chained operator and compare exactly.
        #[arg(long)]
        check: bool,
    },
    /// Kernel values of the canonical operator.
    Kernel {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// The Weil representation matrix ρ(g) on the base model.
    Rep {
        /// Row-major group element, e.g. "g=1,1;0,1".
        #[arg(long)]
        element: String,
    },
    /// Reduction isomorphism for an oriented isotropic subspace.
    Reduce {
        #[arg(long)]
        isotropic: String,
    },
    /// Tensor product compatibility report.
    Tensor,
    /// Gram matrix of the duality pairing.
    Pair {
        /// Lagrangian at which the pairing is evaluated; defaults to the base.
        #[arg(long)]
        at: Option<String>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
    },
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::new(cli.p, cli.dim, cli.seed, cli.samples, cli.format)?;
    cfg.check_scale()?;
    match &cli.command {
        Command::Gauss => commands::gauss(&cfg),
        Command::Lagrangians { oriented } => commands::lagrangians(&cfg, *oriented),
        Command::Intertwiner { from, to, check } => commands::intertwiner(&cfg, from, to, *check),
        Command::Kernel { from, to } => commands::kernel(&cfg, from, to),
        Command::Rep { element } => commands::rep(&cfg, element),
        Command::Reduce { isotropic } => commands::reduce(&cfg, isotropic),
        Command::Tensor => commands::verify(&cfg, "tensor"),
        Command::Pair { at } => commands::pair(&cfg, at.as_deref()),
        Command::Verify { suite } => commands::verify(&cfg, suite),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match dispatch(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("weil: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let text = outcome.render(cli.format);
    if let Err(e) = emit(&text, cli.out.as_ref()) {
        eprintln!("weil: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("weil: check failed; the report carries the failing case");
        ExitCode::from(1)
    }
}
