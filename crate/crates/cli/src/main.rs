//! `qgames`: seeded experiments on quantum games, written as CSV.

mod experiments;
mod params;
mod table;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser};

use params::{Params, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] qgames::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) | CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qgames",
    version,
    about = "Seeded experiments on quantum games, written as CSV"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Base seed; required by every Monte Carlo subcommand
    #[arg(long)]
    seed: Option<String>,
    /// Output file [default: stdout]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for trial fan-out [default: all cores]. Does not change results
    #[arg(long)]
    workers: Option<usize>,
    /// Flat `key = value` file; flags given on the command line win
    #[arg(long)]
    config: Option<PathBuf>,
    /// Numeric parameter to sweep, one CSV row (group) per value
    #[arg(long, requires = "sweep_values")]
    sweep_param: Option<String>,
    /// Comma-separated values for --sweep-param
    #[arg(long, value_delimiter = ',', requires = "sweep_param")]
    sweep_values: Vec<String>,
}

macro_rules! knobs {
    ($name:ident { $($(#[doc = $doc:literal])* $field:ident),* $(,)? }) => {
        #[derive(Debug, Args)]
        struct $name {
            $( $(#[doc = $doc])* #[arg(long)] $field: Option<String>, )*
            #[command(flatten)]
            common: Common,
        }

        impl $name {
            fn pairs(&self) -> Vec<(&'static str, &str)> {
                let mut v = Vec::new();
                $( if let Some(x) = &self.$field { v.push((stringify!($field), x.as_str())); } )*
                v
            }
        }
    };
}

knobs!(NewcombArgs {
    /// zero | one | plus [default: plus]
    tactic,
    /// classical | qutrojan [default: classical]
    breaker,
    /// Probability that the classical switch fires [default: 0.5]
    prob_not,
    /// Monte Carlo trials [default: 100000]
    trials,
});

knobs!(EvBreakerArgs {
    /// Rounds [default: 10]
    n,
    /// Initial value of the tested qubit, 0 or 1 [default: 1]
    first_qubit,
    /// Monte Carlo trials [default: 100000]
    trials,
});

knobs!(TesterArgs {
    /// Rounds [default: 10]
    n,
    /// working | damaged [default: working]
    bomb,
    /// Monte Carlo trials [default: 100000]
    trials,
});

knobs!(AntiZenoArgs {
    /// Stages [default: 8]
    n,
    /// Stage angle alpha of V_alpha [default: 0]
    alpha,
    /// working | damaged [default: working]
    bomb,
});

knobs!(WiesnerArgs {
    /// Sub-games per banknote [default: 16]
    k,
    /// Monte Carlo trials [default: 100000]
    trials,
    /// swap | hadamard [default: swap]
    variant,
    /// haar | computational_pair [default: haar]
    policy,
    /// uniform_guess | measure_resend | legitimate [default: uniform_guess]
    forger,
});

knobs!(IsingArgs {
    /// Ring length [default: 16]
    cells,
    /// Coupling beta*J; overrides --p [default: 0.5]
    beta_j,
    /// Switch probability, used when beta_j is not given
    p,
    /// Total sweeps including burn-in [default: 22000]
    sweeps,
    /// Sweeps discarded before recording [default: 2000]
    burn_in,
    /// single_random_cell | even_odd [default: single_random_cell]
    schedule,
    /// classical | quantum_cell [default: classical]
    mode,
    /// series | summary [default: series]
    output,
});

knobs!(IdentitiesArgs {
    /// Pass threshold on the worst deviation [default: 1e-10]
    tol,
    /// Random parameter draws per identity [default: 100]
    draws,
});

#[derive(Debug, clap::Subcommand)]
enum Command {
    /// Newcomb's game with a classical switch or a qutrojan breaker
    Newcomb(NewcombArgs),
    /// Elitzur-Vaidman breaker survival
    EvBreaker(EvBreakerArgs),
    /// Zeno bomb tester
    BombZeno(TesterArgs),
    /// Anti-Zeno bomb tester (exact, no sampling)
    BombAntizeno(AntiZenoArgs),
    /// Supply-demand bomb tester against the Zeno tester
    SupplyDemand(TesterArgs),
    /// Wiesner banknote forgery
    Wiesner(WiesnerArgs),
    /// Quantized Metropolis automaton on an Ising ring
    Ising(IsingArgs),
    /// Catalog gate identities
    Identities(IdentitiesArgs),
}

impl Command {
    fn parts(&self) -> (Subcommand, Vec<(&'static str, &str)>, &Common) {
        match self {
            Command::Newcomb(a) => (Subcommand::Newcomb, a.pairs(), &a.common),
            Command::EvBreaker(a) => (Subcommand::EvBreaker, a.pairs(), &a.common),
            Command::BombZeno(a) => (Subcommand::BombZeno, a.pairs(), &a.common),
            Command::BombAntizeno(a) => (Subcommand::BombAntizeno, a.pairs(), &a.common),
            Command::SupplyDemand(a) => (Subcommand::SupplyDemand, a.pairs(), &a.common),
            Command::Wiesner(a) => (Subcommand::Wiesner, a.pairs(), &a.common),
            Command::Ising(a) => (Subcommand::Ising, a.pairs(), &a.common),
            Command::Identities(a) => (Subcommand::Identities, a.pairs(), &a.common),
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let (sub, flags, common) = cli.command.parts();
    let mut params = Params::new(sub);
    if let Some(path) = &common.config {
        params.apply_config(&fs::read_to_string(path)?)?;
    }
    for (key, value) in flags {
        params.apply(key, value)?;
    }
    if let Some(seed) = &common.seed {
        params.apply("seed", seed)?;
    }
    if sub.needs_seed() {
        params.require_seed()?;
    }
    let workers = match common.workers {
        Some(0) => return Err(CliError::invalid("--workers must be >= 1")),
        Some(w) => w,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::invalid(format!("cannot start worker pool: {e}")))?;
    let mut metadata = format!(
        "qgames {} {} {}",
        env!("CARGO_PKG_VERSION"),
        sub,
        params.describe()
    );
    let table = pool.install(|| match &common.sweep_param {
        Some(key) => {
            metadata.push_str(&format!(" sweep={}:{}", key, common.sweep_values.join(",")));
            experiments::sweep(&params, key, &common.sweep_values)
        }
        None => experiments::run(&params, 0),
    })?;
    let csv = table.render(metadata.trim_end())?;
    match &common.out {
        Some(path) => fs::write(path, csv)?,
        None => io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
