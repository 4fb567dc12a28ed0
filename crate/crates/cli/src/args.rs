use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ddacf::experiment::ConfigEntries;

pub const SEED_ENV: &str = "DDACF_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "ddacf-kit",
    version,
    about = "Depression detection experiments on labelled social-media corpora"
)]
pub struct Cli {
    /// Log more (repeat for debug output).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cross-validate every configuration of a grid and write the report.
    Run(Box<RunArgs>),
    /// Write a synthetic corpus.
    Synth(SynthArgs),
    /// Rebuild summary.txt from an existing results.csv.
    Report(ReportArgs),
}

/// Flags of `run`. Every one of them is also a config-file key (dashes
/// become underscores) and overrides the file. Grid flags repeat or take
/// comma lists; `all` expands to every value.
#[derive(Debug, Args, Default)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long)]
    pub jobs: Option<String>,
    #[arg(long)]
    pub folds: Option<String>,
    /// Falls back to the config file, then to $DDACF_SEED, then to 0.
    #[arg(long)]
    pub seed: Option<String>,
    /// Fraction of users held out for the headline metrics.
    #[arg(long)]
    pub holdout: Option<String>,
    #[arg(long)]
    pub min_posts: Option<String>,
    #[arg(long)]
    pub tweet_cap: Option<String>,

    #[arg(long)]
    pub stopwords: Option<String>,
    #[arg(long)]
    pub lexicon: Option<String>,
    #[arg(long)]
    pub negators: Option<String>,
    #[arg(long)]
    pub thesaurus: Option<String>,

    #[arg(long, value_name = "BOOL")]
    pub self_center: Vec<String>,
    #[arg(long, value_name = "BOOL")]
    pub tfidf: Vec<String>,
    #[arg(long, value_name = "infogain|mostfreq")]
    pub selector: Vec<String>,
    #[arg(long, value_name = "avg|mixed|none")]
    pub sentiment: Vec<String>,
    #[arg(long, value_name = "deptsent|nonsparse")]
    pub use_words: Vec<String>,
    #[arg(long, value_name = "asis|norm|categorical")]
    pub measures: Vec<String>,
    #[arg(long, value_name = "BOOL")]
    pub synonyms: Vec<String>,
    #[arg(long, value_name = "nb|dt|svml|svmr")]
    pub model: Vec<String>,

    #[arg(long)]
    pub selector_k: Option<String>,
    #[arg(long)]
    pub sparse_threshold: Option<String>,
    #[arg(long, value_name = "all|text|activity")]
    pub feature_set: Option<String>,
    #[arg(long)]
    pub night_start: Option<String>,
    #[arg(long)]
    pub night_end: Option<String>,

    #[arg(long)]
    pub svm_c: Option<String>,
    #[arg(long)]
    pub svm_sigma: Option<String>,
    #[arg(long)]
    pub svm_tol: Option<String>,
    #[arg(long)]
    pub svm_max_iter: Option<String>,
    #[arg(long)]
    pub dt_max_depth: Option<String>,
    #[arg(long)]
    pub dt_min_leaf: Option<String>,
    #[arg(long)]
    pub dt_ccp_alpha: Option<String>,
    #[arg(long)]
    pub nb_alpha: Option<String>,
}

impl RunArgs {
    /// The flags that were given, as config entries.
    pub fn entries(&self) -> ConfigEntries {
        let mut e = ConfigEntries::new();
        let scalars = [
            ("corpus", &self.corpus),
            ("out", &self.out),
            ("jobs", &self.jobs),
            ("folds", &self.folds),
            ("seed", &self.seed),
            ("holdout", &self.holdout),
            ("min_posts", &self.min_posts),
            ("tweet_cap", &self.tweet_cap),
            ("stopwords", &self.stopwords),
            ("lexicon", &self.lexicon),
            ("negators", &self.negators),
            ("thesaurus", &self.thesaurus),
            ("selector_k", &self.selector_k),
            ("sparse_threshold", &self.sparse_threshold),
            ("feature_set", &self.feature_set),
            ("night_start", &self.night_start),
            ("night_end", &self.night_end),
            ("svm_c", &self.svm_c),
            ("svm_sigma", &self.svm_sigma),
            ("svm_tol", &self.svm_tol),
            ("svm_max_iter", &self.svm_max_iter),
            ("dt_max_depth", &self.dt_max_depth),
            ("dt_min_leaf", &self.dt_min_leaf),
            ("dt_ccp_alpha", &self.dt_ccp_alpha),
            ("nb_alpha", &self.nb_alpha),
        ];
        for (key, value) in scalars {
            if let Some(v) = value {
                e.insert(key.to_owned(), vec![v.clone()]);
            }
        }
        let grids = [
            ("self_center", &self.self_center),
            ("tfidf", &self.tfidf),
            ("selector", &self.selector),
            ("sentiment", &self.sentiment),
            ("use_words", &self.use_words),
            ("measures", &self.measures),
            ("synonyms", &self.synonyms),
            ("model", &self.model),
        ];
        for (key, values) in grids {
            if !values.is_empty() {
                e.insert(key.to_owned(), values.clone());
            }
        }
        e
    }
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output corpus file.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub users: usize,
    #[arg(long, default_value_t = 0.5)]
    pub depressed_fraction: f64,
    #[arg(long, default_value_t = 20)]
    pub min_tweets: usize,
    #[arg(long, default_value_t = 40)]
    pub max_tweets: usize,
    /// Chance that a depressed user's tweet carries a depression word.
    #[arg(long, default_value_t = 0.0)]
    pub s_text: f64,
    /// Extra first-person pronoun rate for depressed users.
    #[arg(long, default_value_t = 0.0)]
    pub pronoun_boost: f64,
    /// Night-time and volume shift for depressed users.
    #[arg(long, default_value_t = 0.0)]
    pub s_act: f64,
    /// Defaults to $DDACF_SEED, then 0.
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// A results.csv written by `run`.
    #[arg(long)]
    pub results: PathBuf,
    /// Where summary.txt goes; defaults to the directory of the CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
