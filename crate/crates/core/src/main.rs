use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use regretlab::harness::acceptance::run_suite;
use regretlab::harness::config::{ExperimentConfig, Format};
use regretlab::harness::emit::emit;
use regretlab::harness::experiment::{dyadic, run_experiment, ResultRow};
use regretlab::Result;

#[derive(Parser)]
#[command(name = "regretlab", version, about = "Run online learners and check their regret and stability bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment at its configured horizons.
    Run(RunArgs),
    /// Run an experiment over dyadic horizons 2^from..2^to.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 6)]
        from: u32,
        #[arg(long, default_value_t = 12)]
        to: u32,
    },
    /// Run an acceptance suite and print one verdict line per criterion.
    Acceptance {
        /// bounds-exact, bounds-approx, equivalence, wrapper, oracles or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file.
    config: PathBuf,
    /// Replace the configured seeds with this one.
    #[arg(long)]
    seed: Option<u64>,
    /// Abort on truncated solves and uncertified hindsight optima.
    #[arg(long)]
    strict: bool,
    /// Skip the premise checks of the learner's bound.
    #[arg(long)]
    no_validate: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Override a config entry, e.g. `--set learner.kind=iol`.
    #[arg(long = "set", value_name = "PATH=VALUE")]
    overrides: Vec<String>,
}

impl RunArgs {
    fn load(&self, extra: Option<String>) -> Result<ExperimentConfig> {
        let mut overrides = self.overrides.clone();
        overrides.extend(extra);
        if let Some(seed) = self.seed {
            overrides.push(format!("seeds=[{seed}]"));
        }
        if self.strict {
            overrides.push("strict=true".into());
        }
        if self.no_validate {
            overrides.push("validate=false".into());
        }
        ExperimentConfig::load(&self.config, &overrides)
    }

    fn finish(&self, cfg: &ExperimentConfig, rows: &[ResultRow]) -> Result<ExitCode> {
        let format = self.format.unwrap_or(cfg.output.format);
        let path = self.out.as_ref().or(cfg.output.path.as_ref());
        emit(rows, format, path.map(|p| p.as_path()))?;
        let failed: Vec<String> = rows
            .iter()
            .flat_map(|r| r.bounds.iter().filter(|b| !b.pass).map(move |b| format!("{} (T={}, seed={})", b.bound_name, r.horizon, r.seed)))
            .collect();
        if failed.is_empty() {
            Ok(ExitCode::SUCCESS)
        } else {
            eprintln!("{} verdict(s) failed:", failed.len());
            for f in failed {
                eprintln!("  {f}");
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.load(None)?;
            let rows = run_experiment(&cfg)?;
            args.finish(&cfg, &rows)
        }
        Command::Sweep { run: args, from, to } => {
            if from > to || to >= usize::BITS {
                return Err(regretlab::Error::Config(format!("invalid sweep range 2^{from}..2^{to}")));
            }
            let cfg = args.load(Some(format!("horizons={:?}", dyadic(from, to))))?;
            let rows = run_experiment(&cfg)?;
            args.finish(&cfg, &rows)
        }
        Command::Acceptance { suite } => {
            let results = run_suite(&suite)?;
            for r in &results {
                println!("{}", r.line());
            }
            let failed: Vec<String> = results.iter().filter(|r| !r.pass).map(|r| format!("C{}", r.id)).collect();
            if failed.is_empty() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("failing criteria: {}", failed.join(", "));
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
