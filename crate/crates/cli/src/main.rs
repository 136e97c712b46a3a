use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use trialbandit::runner::{run_experiment, write_bundle, ExperimentConfig};
use trialbandit::PolicyKind;

#[derive(Parser)]
#[command(name = "trialbandit", version, about = "Replay treatment-allocation bandits against a trial or a synthetic environment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay the participants of a recorded trial ([dataset] config).
    Replay(RunArgs),
    /// Run against a synthetic environment ([synthetic] config).
    Synth(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Repetitions per policy.
    #[arg(long)]
    runs: Option<usize>,
    /// Comma-separated policies: random, greedy, thompson, ucb.
    #[arg(long, value_delimiter = ',')]
    policies: Option<Vec<PolicyKind>>,
    /// Use one bandit per context.
    #[arg(long, action = clap::ArgAction::Set)]
    contextual: Option<bool>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long)]
    workers: Option<usize>,
}

impl RunArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::from_file(&self.config)
            .with_context(|| format!("reading {}", self.config.display()))?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(runs) = self.runs {
            cfg.runs = runs;
        }
        if let Some(p) = &self.policies {
            cfg.policies = p.clone();
        }
        if let Some(c) = self.contextual {
            cfg.contextual = c;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        Ok(cfg)
    }
}

fn run(args: &RunArgs, want_dataset: bool) -> Result<()> {
    let cfg = args.load()?;
    match (want_dataset, cfg.dataset.is_some(), cfg.synthetic.is_some()) {
        (true, false, _) => bail!("`replay` needs a [dataset] table in {}", args.config.display()),
        (false, _, false) => bail!("`synth` needs a [synthetic] table in {}", args.config.display()),
        _ => {}
    }
    let results = run_experiment(&cfg)?;
    let bundle = write_bundle(&results, &cfg.out)?;

    println!(
        "{} participants, {} runs, {} mode{}",
        results.horizon,
        cfg.runs,
        if cfg.contextual { "contextual" } else { "context-free" },
        if results.excluded > 0 {
            format!(", {} rows excluded", results.excluded)
        } else {
            String::new()
        }
    );
    println!(
        "{:<10} {:>22} {:>22} {:>16} {:>16}",
        "policy", "final regret", "suboptimal draws", "regret %rand", "subopt %rand"
    );
    for agg in &results.aggregates {
        let pct = |r: Option<trialbandit::MeanStd>| {
            r.map(|r| format!("{:.2}±{:.2}", r.mean, r.std))
                .unwrap_or_else(|| "-".into())
        };
        println!(
            "{:<10} {:>22} {:>22} {:>16} {:>16}",
            agg.policy.name(),
            format!("{:.2}±{:.2}", agg.final_regret.mean, agg.final_regret.std),
            format!("{:.1}±{:.1}", agg.final_suboptimal.mean, agg.final_suboptimal.std),
            pct(agg.regret_ratio),
            pct(agg.suboptimal_ratio),
        );
    }
    println!("wrote {} files to {}", bundle.all_files().len(), bundle.dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Replay(args) => run(args, true),
        Command::Synth(args) => run(args, false),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
