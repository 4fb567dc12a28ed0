mod args;

use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;
use ddacf::experiment::{
    merge_entries, parse_config, read_results_csv, run_experiment, summary_text, write_summary, ConfigEntries,
    ExperimentConfig, RunStatus,
};
use ddacf::synth::{write_synth, SynthParams};

use args::{Cli, Command, ReportArgs, RunArgs, SynthArgs, SEED_ENV};

fn experiment_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut entries = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            parse_config(&text).with_context(|| format!("in {}", path.display()))?
        }
        None => ConfigEntries::new(),
    };
    merge_entries(&mut entries, args.entries());
    if !entries.contains_key("seed") {
        if let Ok(seed) = std::env::var(SEED_ENV) {
            entries.insert("seed".into(), vec![seed]);
        }
    }
    Ok(ExperimentConfig::from_entries(&entries)?)
}

fn run(args: &RunArgs) -> Result<bool> {
    let cfg = experiment_config(args)?;
    log::info!("{} configurations x {} models", cfg.grid.len(), cfg.models.len());
    let results = run_experiment(&cfg)?;
    let failed = results.iter().filter(|r| r.outcome.is_err()).count();
    let rows: Vec<_> = results.iter().map(ddacf::experiment::ResultRow::from_run).collect();
    print!("{}", summary_text(&rows));
    println!("\nreport written to {}", cfg.out_dir.display());
    if failed > 0 {
        eprintln!("{failed} of {} runs failed", results.len());
    }
    Ok(failed == 0)
}

fn synth(args: &SynthArgs) -> Result<bool> {
    let params = SynthParams {
        n_users: args.users,
        depressed_fraction: args.depressed_fraction,
        tweets_per_user: (args.min_tweets, args.max_tweets),
        s_text: args.s_text,
        pronoun_boost: args.pronoun_boost,
        s_act: args.s_act,
        seed: args.seed,
    };
    let n = write_synth(&params, &args.out)?;
    println!(
        "wrote {n} users ({} depressed) to {}",
        params.n_depressed(),
        args.out.display()
    );
    Ok(true)
}

fn report(args: &ReportArgs) -> Result<bool> {
    let rows = read_results_csv(&args.results)?;
    if rows.is_empty() {
        bail!("{} has no rows", args.results.display());
    }
    let out = match &args.out {
        Some(dir) => dir.clone(),
        None => args.results.parent().unwrap_or(Path::new(".")).to_path_buf(),
    };
    write_summary(&rows, &out)?;
    print!("{}", summary_text(&rows));
    Ok(rows.iter().all(|r| r.status == RunStatus::Ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let outcome = match &cli.command {
        Command::Run(a) => run(a),
        Command::Synth(a) => synth(a),
        Command::Report(a) => report(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
