//! Grid experiments: configuration files, parallel execution and reports.
//!
//! A configuration is a flat `key = value` text. Grid keys may repeat or
//! hold comma-separated values; `all` expands to every possible value.
//!
//! ```
//! use ddacf::experiment::{parse_config, ExperimentConfig};
//!
//! let entries = parse_config("corpus = users.jsonl\nselector = infogain\nselector = mostfreq\nmodel = all\n").unwrap();
//! let cfg = ExperimentConfig::from_entries(&entries).unwrap();
//! assert_eq!(cfg.n_runs(), 2 * 4);
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{filter_users, load_corpus, Corpus, DEFAULT_MIN_POSTS, DEFAULT_TWEET_CAP};
use crate::error::{Error, Result};
use crate::eval::{run_cv, CvSettings, MetricsReport};
use crate::features::{FeatureConfig, FeatureGrid, MeasureMode, PreparedCorpus, Selector, SentimentMode, UseWords};
use crate::learners::{ModelKind, ModelSpec};
use crate::resources::{ResourcePaths, Resources};

/// Raw configuration: key to values, in the order given.
pub type ConfigEntries = BTreeMap<String, Vec<String>>;

fn canonical_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

/// Parses `key = value` lines. `#` starts a comment; repeated keys collect
/// their values.
pub fn parse_config(text: &str) -> Result<ConfigEntries> {
    let mut entries = ConfigEntries::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected `key = value`", i + 1)))?;
        entries
            .entry(canonical_key(key))
            .or_default()
            .push(value.trim().to_owned());
    }
    Ok(entries)
}

/// Replaces the values of every key present in `overrides`.
pub fn merge_entries(base: &mut ConfigEntries, overrides: ConfigEntries) {
    for (k, v) in overrides {
        base.insert(canonical_key(&k), v);
    }
}

const GRID_KEYS: [&str; 8] = [
    "self_center",
    "tfidf",
    "selector",
    "sentiment",
    "use_words",
    "measures",
    "synonyms",
    "model",
];

const SCALAR_KEYS: [&str; 25] = [
    "corpus",
    "out",
    "jobs",
    "folds",
    "seed",
    "holdout",
    "stopwords",
    "lexicon",
    "negators",
    "thesaurus",
    "selector_k",
    "sparse_threshold",
    "feature_set",
    "svm_c",
    "svm_sigma",
    "svm_tol",
    "svm_max_iter",
    "dt_max_depth",
    "dt_min_leaf",
    "dt_ccp_alpha",
    "nb_alpha",
    "min_posts",
    "tweet_cap",
    "night_start",
    "night_end",
];

pub fn parse_bool(s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "t" | "yes" | "1" | "on" => Ok(true),
        "false" | "f" | "no" | "0" | "off" => Ok(false),
        other => Err(Error::InvalidConfig(format!("`{other}` is not a boolean"))),
    }
}

fn parse_value<T: FromStr>(key: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("`{s}` is not a valid value for `{key}`")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub corpus: PathBuf,
    pub out_dir: PathBuf,
    pub jobs: Option<usize>,
    pub resources: ResourcePaths,
    pub min_posts: usize,
    pub tweet_cap: usize,
    /// Settings shared by every grid point.
    pub base: FeatureConfig,
    pub grid: FeatureGrid,
    pub models: Vec<ModelKind>,
    pub model_spec: ModelSpec,
    pub cv: CvSettings,
}

impl ExperimentConfig {
    /// Defaults: a single grid point at [`FeatureConfig::default`] and all
    /// four models.
    pub fn new(corpus: impl Into<PathBuf>) -> Self {
        let base = FeatureConfig::default();
        ExperimentConfig {
            corpus: corpus.into(),
            out_dir: PathBuf::from("results"),
            jobs: None,
            resources: ResourcePaths::default(),
            min_posts: DEFAULT_MIN_POSTS,
            tweet_cap: DEFAULT_TWEET_CAP,
            grid: FeatureGrid::single(&base),
            base,
            models: ModelKind::ALL.to_vec(),
            model_spec: ModelSpec::new(ModelKind::SvmLinear),
            cv: CvSettings::default(),
        }
    }

    pub fn from_entries(entries: &ConfigEntries) -> Result<Self> {
        for key in entries.keys() {
            if !GRID_KEYS.contains(&key.as_str()) && !SCALAR_KEYS.contains(&key.as_str()) {
                return Err(Error::InvalidConfig(format!("unknown key `{key}`")));
            }
        }
        let scalar = |key: &str| -> Result<Option<&str>> {
            match entries.get(key).map(Vec::as_slice) {
                None | Some([]) => Ok(None),
                Some([v]) => Ok(Some(v.as_str())),
                Some(_) => Err(Error::InvalidConfig(format!("`{key}` given more than once"))),
            }
        };
        fn list<T>(
            entries: &ConfigEntries,
            key: &str,
            all: &[T],
            parse: impl Fn(&str) -> Result<T>,
        ) -> Result<Option<Vec<T>>>
        where
            T: Clone + PartialEq,
        {
            let Some(values) = entries.get(key) else {
                return Ok(None);
            };
            let mut out: Vec<T> = Vec::new();
            for v in values
                .iter()
                .flat_map(|v| v.split(','))
                .map(str::trim)
                .filter(|v| !v.is_empty())
            {
                let items = if v.eq_ignore_ascii_case("all") {
                    all.to_vec()
                } else {
                    vec![parse(v)?]
                };
                for item in items {
                    if !out.contains(&item) {
                        out.push(item);
                    }
                }
            }
            if out.is_empty() {
                return Err(Error::InvalidConfig(format!("`{key}` has no values")));
            }
            Ok(Some(out))
        }

        let corpus = scalar("corpus")?.ok_or_else(|| Error::InvalidConfig("`corpus` is required".into()))?;
        let mut cfg = ExperimentConfig::new(corpus);
        if let Some(v) = scalar("out")? {
            cfg.out_dir = v.into();
        }
        if let Some(v) = scalar("jobs")? {
            cfg.jobs = Some(parse_value("jobs", v)?);
        }
        cfg.resources = ResourcePaths {
            stopwords: scalar("stopwords")?.map(PathBuf::from),
            lexicon: scalar("lexicon")?.map(PathBuf::from),
            negators: scalar("negators")?.map(PathBuf::from),
            thesaurus: scalar("thesaurus")?.map(PathBuf::from),
        };
        if let Some(v) = scalar("min_posts")? {
            cfg.min_posts = parse_value("min_posts", v)?;
        }
        if let Some(v) = scalar("tweet_cap")? {
            cfg.tweet_cap = parse_value("tweet_cap", v)?;
        }
        if let Some(v) = scalar("folds")? {
            cfg.cv.folds = parse_value("folds", v)?;
        }
        if let Some(v) = scalar("seed")? {
            cfg.cv.seed = parse_value("seed", v)?;
        }
        if let Some(v) = scalar("holdout")? {
            cfg.cv.holdout = Some(parse_value("holdout", v)?);
        }

        let base = &mut cfg.base;
        if let Some(v) = scalar("selector_k")? {
            base.selector_k = parse_value("selector_k", v)?;
        }
        if let Some(v) = scalar("sparse_threshold")? {
            base.sparse_threshold = parse_value("sparse_threshold", v)?;
        }
        if let Some(v) = scalar("feature_set")? {
            base.feature_set = v.parse()?;
        }
        if let Some(v) = scalar("night_start")? {
            base.night.start_hour = parse_value("night_start", v)?;
        }
        if let Some(v) = scalar("night_end")? {
            base.night.end_hour = parse_value("night_end", v)?;
        }

        let full = FeatureGrid::full();
        let grid = &mut cfg.grid;
        if let Some(v) = list(entries, "self_center", &full.self_center, parse_bool)? {
            grid.self_center = v;
        }
        if let Some(v) = list(entries, "tfidf", &full.tfidf, parse_bool)? {
            grid.tfidf = v;
        }
        if let Some(v) = list(entries, "selector", &full.selector, Selector::from_str)? {
            grid.selector = v;
        }
        if let Some(v) = list(entries, "sentiment", &full.sentiment, SentimentMode::from_str)? {
            grid.sentiment = v;
        }
        if let Some(v) = list(entries, "use_words", &full.use_words, UseWords::from_str)? {
            grid.use_words = v;
        }
        if let Some(v) = list(entries, "measures", &full.account_measures, MeasureMode::from_str)? {
            grid.account_measures = v;
        }
        if let Some(v) = list(entries, "synonyms", &full.synonyms, parse_bool)? {
            grid.synonyms = v;
        }
        if let Some(v) = list(entries, "model", &ModelKind::ALL, ModelKind::from_str)? {
            cfg.models = v;
        }

        let spec = &mut cfg.model_spec;
        if let Some(v) = scalar("svm_c")? {
            spec.svm_c = parse_value("svm_c", v)?;
        }
        if let Some(v) = scalar("svm_sigma")? {
            spec.svm_sigma = Some(parse_value("svm_sigma", v)?);
        }
        if let Some(v) = scalar("svm_tol")? {
            spec.svm_tol = parse_value("svm_tol", v)?;
        }
        if let Some(v) = scalar("svm_max_iter")? {
            spec.svm_max_iter = parse_value("svm_max_iter", v)?;
        }
        if let Some(v) = scalar("dt_max_depth")? {
            spec.dt.max_depth = parse_value("dt_max_depth", v)?;
        }
        if let Some(v) = scalar("dt_min_leaf")? {
            spec.dt.min_leaf = parse_value("dt_min_leaf", v)?;
        }
        if let Some(v) = scalar("dt_ccp_alpha")? {
            spec.dt.ccp_alpha = parse_value("dt_ccp_alpha", v)?;
        }
        if let Some(v) = scalar("nb_alpha")? {
            spec.nb_alpha = parse_value("nb_alpha", v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.models.is_empty() || self.grid.is_empty() {
            return bad("the grid and the model list must be non-empty".into());
        }
        if self.cv.folds < 2 {
            return bad(format!("folds = {} (need at least 2)", self.cv.folds));
        }
        if let Some(h) = self.cv.holdout {
            if !(h > 0.0 && h < 1.0) {
                return bad(format!("holdout = {h} (need 0 < holdout < 1)"));
            }
        }
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        if self.base.selector_k == 0 {
            return bad("selector_k must be at least 1".into());
        }
        if !(self.base.sparse_threshold > 0.0 && self.base.sparse_threshold < 1.0) {
            return bad(format!(
                "sparse_threshold = {} (need 0 < t < 1)",
                self.base.sparse_threshold
            ));
        }
        if self.base.night.start_hour > 23 || self.base.night.end_hour > 24 {
            return bad("night hours must lie in 0..=24".into());
        }
        let spec = &self.model_spec;
        if !(spec.svm_c > 0.0) || !(spec.svm_tol > 0.0) || spec.svm_sigma.is_some_and(|s| !(s > 0.0)) {
            return bad("svm_c, svm_tol and svm_sigma must be positive".into());
        }
        if spec.dt.max_depth == 0 || spec.dt.min_leaf == 0 || !(spec.dt.ccp_alpha >= 0.0) {
            return bad("dt_max_depth and dt_min_leaf must be >= 1 and dt_ccp_alpha >= 0".into());
        }
        if !(spec.nb_alpha >= 0.0) {
            return bad("nb_alpha must be >= 0".into());
        }
        if self.min_posts == 0 || self.tweet_cap < self.min_posts {
            return bad("need 1 <= min_posts <= tweet_cap".into());
        }
        Ok(())
    }

    pub fn configs(&self) -> Vec<FeatureConfig> {
        self.grid.expand(&self.base)
    }

    pub fn n_runs(&self) -> usize {
        self.grid.len() * self.models.len()
    }
}

/// One (configuration, model) run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub config: FeatureConfig,
    pub model: ModelKind,
    pub outcome: std::result::Result<MetricsReport, String>,
}

fn run_sort_key(config: &FeatureConfig, model: ModelKind) -> ([String; 7], String) {
    (config.flag_values(), model.to_string())
}

/// Runs every (configuration, model) pair on `corpus`. Results come back
/// sorted by configuration flags, then model, whatever the completion order.
pub fn run_grid(corpus: &Corpus, resources: &Resources, cfg: &ExperimentConfig) -> Vec<RunResult> {
    let configs = cfg.configs();
    let mut variants: Vec<(bool, bool)> = configs.iter().map(|c| (c.self_center, c.synonyms)).collect();
    variants.sort_unstable();
    variants.dedup();
    let prepared: BTreeMap<(bool, bool), std::result::Result<PreparedCorpus, String>> = variants
        .par_iter()
        .map(|&(sc, syn)| {
            let p = PreparedCorpus::new(corpus, resources, sc, syn, cfg.base.night).map_err(|e| e.to_string());
            ((sc, syn), p)
        })
        .collect();

    let mut jobs: Vec<(FeatureConfig, ModelKind)> = configs
        .iter()
        .flat_map(|c| cfg.models.iter().map(move |&m| (c.clone(), m)))
        .collect();
    jobs.sort_by_cached_key(|(c, m)| run_sort_key(c, *m));
    jobs.par_iter()
        .map(|(config, model)| {
            let outcome = match &prepared[&(config.self_center, config.synonyms)] {
                Ok(p) => run_cv(p, config, &cfg.model_spec.with_kind(*model), &cfg.cv).map_err(|e| e.to_string()),
                Err(e) => Err(e.clone()),
            };
            if let Err(e) = &outcome {
                log::warn!("run `{}` with {model} failed: {e}", config.label());
            }
            RunResult {
                config: config.clone(),
                model: *model,
                outcome,
            }
        })
        .collect()
}

/// Loads inputs, runs the grid on a pool of `cfg.jobs` workers and writes
/// the report files. Invalid configuration or unreadable inputs fail
/// before any run starts.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunResult>> {
    cfg.validate()?;
    let resources = Resources::load(&cfg.resources)?;
    let corpus = filter_users(&load_corpus(&cfg.corpus)?, cfg.min_posts, cfg.tweet_cap)?;
    log::info!(
        "{} users ({} depressed), {} runs",
        corpus.len(),
        corpus.positive_count(),
        cfg.n_runs()
    );
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    let results = pool.install(|| run_grid(&corpus, &resources, cfg));
    write_report(&results, &cfg.out_dir)?;
    Ok(results)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Error,
}

/// One line of the results CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub self_center: String,
    pub tfidf: String,
    pub selector: String,
    pub sentiment: String,
    pub use_words: String,
    pub measures: String,
    pub synonyms: String,
    pub model: String,
    pub accuracy: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
    pub auc: Option<f64>,
    pub status: RunStatus,
    pub error: String,
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

impl ResultRow {
    pub fn from_run(run: &RunResult) -> Self {
        let [self_center, tfidf, selector, sentiment, use_words, measures, synonyms] = run.config.flag_values();
        let ok = run.outcome.as_ref().ok();
        ResultRow {
            self_center,
            tfidf,
            selector,
            sentiment,
            use_words,
            measures,
            synonyms,
            model: run.model.to_string(),
            accuracy: ok.map(|r| round6(r.metrics.accuracy)),
            precision: ok.map(|r| round6(r.metrics.precision)),
            recall: ok.map(|r| round6(r.metrics.recall)),
            f1: ok.map(|r| round6(r.metrics.f1)),
            auc: ok.map(|r| round6(r.auc)),
            status: if ok.is_some() { RunStatus::Ok } else { RunStatus::Error },
            error: run.outcome.as_ref().err().cloned().unwrap_or_default(),
        }
    }

    pub fn flags(&self) -> [&str; 7] {
        [
            &self.self_center,
            &self.tfidf,
            &self.selector,
            &self.sentiment,
            &self.use_words,
            &self.measures,
            &self.synonyms,
        ]
    }

    pub fn config_label(&self) -> String {
        FeatureConfig::FLAG_NAMES
            .iter()
            .zip(self.flags())
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn write_results_csv<W: std::io::Write>(out: W, rows: &[ResultRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

fn roc_file_name(index: usize, run: &RunResult) -> String {
    format!("run{:04}_{}.tsv", index + 1, run.model)
}

pub fn roc_tsv(points: &[(f64, f64)]) -> String {
    let mut s = String::from("fpr\ttpr\n");
    for (x, y) in points {
        let _ = writeln!(s, "{x:.6}\t{y:.6}");
    }
    s
}

/// Best row per model by F1; ties go to the higher accuracy, then the
/// lexicographically smaller configuration.
pub fn best_by_model(rows: &[ResultRow]) -> Vec<&ResultRow> {
    let mut best: BTreeMap<&str, &ResultRow> = BTreeMap::new();
    for row in rows.iter().filter(|r| r.status == RunStatus::Ok) {
        let key = |r: &ResultRow| (r.f1.unwrap_or(0.0), r.accuracy.unwrap_or(0.0));
        match best.get(row.model.as_str()) {
            Some(cur) => {
                let (a, b) = (key(row), key(cur));
                let better = a.0 > b.0 || (a.0 == b.0 && (a.1 > b.1 || (a.1 == b.1 && row.flags() < cur.flags())));
                if better {
                    best.insert(&row.model, row);
                }
            }
            None => {
                best.insert(&row.model, row);
            }
        }
    }
    best.into_values().collect()
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| format!("{v:.4}"))
}

/// Plain-text summary: the best configuration per model, then every row.
pub fn summary_text(rows: &[ResultRow]) -> String {
    let mut s = String::new();
    let failed = rows.iter().filter(|r| r.status == RunStatus::Error).count();
    let _ = writeln!(s, "{} runs, {} failed\n", rows.len(), failed);
    let _ = writeln!(s, "Best configuration per model (by F1)");
    for r in best_by_model(rows) {
        let _ = writeln!(
            s,
            "  {:<5} f1={} acc={}  {}",
            r.model,
            fmt_opt(r.f1),
            fmt_opt(r.accuracy),
            r.config_label()
        );
    }
    let _ = writeln!(s, "\nAll runs");
    let _ = writeln!(
        s,
        "  {:<3} {:<5} {:<9} {:<6} {:<9} {:<12} {:<3} {:<5} {:>7} {:>7} {:>7} {:>7} {:>7}",
        "sc", "tfidf", "selector", "sent", "words", "measures", "syn", "model", "acc", "prec", "rec", "f1", "auc"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "  {:<3} {:<5} {:<9} {:<6} {:<9} {:<12} {:<3} {:<5} {:>7} {:>7} {:>7} {:>7} {:>7}{}",
            r.self_center,
            r.tfidf,
            r.selector,
            r.sentiment,
            r.use_words,
            r.measures,
            r.synonyms,
            r.model,
            fmt_opt(r.accuracy),
            fmt_opt(r.precision),
            fmt_opt(r.recall),
            fmt_opt(r.f1),
            fmt_opt(r.auc),
            if r.status == RunStatus::Error {
                format!("  error: {}", r.error)
            } else {
                String::new()
            }
        );
    }
    s
}

/// Writes `results.csv`, `summary.txt` and one ROC TSV per successful run
/// under `roc/`.
pub fn write_report(results: &[RunResult], out_dir: &Path) -> Result<()> {
    if results.is_empty() {
        return Err(Error::InvalidConfig("no runs to report".into()));
    }
    let roc_dir = out_dir.join("roc");
    std::fs::create_dir_all(&roc_dir).map_err(|e| Error::io(&roc_dir, e))?;
    let rows: Vec<ResultRow> = results.iter().map(ResultRow::from_run).collect();
    let csv_path = out_dir.join("results.csv");
    let file = std::fs::File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
    write_results_csv(std::io::BufWriter::new(file), &rows)?;
    for (i, run) in results.iter().enumerate() {
        if let Ok(report) = &run.outcome {
            let path = roc_dir.join(roc_file_name(i, run));
            std::fs::write(&path, roc_tsv(&report.roc_points)).map_err(|e| Error::io(&path, e))?;
        }
    }
    write_summary(&rows, out_dir)
}

/// Writes `summary.txt` from rows, e.g. rows read back from a CSV.
pub fn write_summary(rows: &[ResultRow], out_dir: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidConfig("no rows to summarize".into()));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let path = out_dir.join("summary.txt");
    std::fs::write(&path, summary_text(rows)).map_err(|e| Error::io(&path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(text: &str) -> ConfigEntries {
        parse_config(text).unwrap()
    }

    #[test]
    fn full_grid_times_models() {
        let cfg = ExperimentConfig::from_entries(&entries(
            "corpus = c.jsonl\nself_center = all\ntfidf=all\nselector=all\nsentiment=all\nuse-words=all\nmeasures=all\nsynonyms=all\nmodel=all",
        ))
        .unwrap();
        assert_eq!(cfg.configs().len(), 288);
        assert_eq!(cfg.n_runs(), 1152);
    }

    #[test]
    fn repeated_and_comma_values() {
        let cfg =
            ExperimentConfig::from_entries(&entries("corpus=c\nmodel = nb, dt\nmodel = svml\nmodel = nb")).unwrap();
        assert_eq!(
            cfg.models,
            [ModelKind::NaiveBayes, ModelKind::DecisionTree, ModelKind::SvmLinear]
        );
        assert_eq!(cfg.n_runs(), 3);
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut e = entries("corpus=c\nseed=1\nselector=infogain\nselector=mostfreq");
        merge_entries(&mut e, entries("seed=9\nselector=mostfreq"));
        let cfg = ExperimentConfig::from_entries(&e).unwrap();
        assert_eq!(cfg.cv.seed, 9);
        assert_eq!(cfg.grid.selector, [Selector::MostFrequent]);
    }

    #[test]
    fn invalid_configs_are_refused() {
        for text in [
            "selector=infogain",
            "corpus=c\nbogus=1",
            "corpus=c\nselector=median",
            "corpus=c\nfolds=1",
            "corpus=c\nseed=1\nseed=2",
            "corpus=c\nholdout=1.5",
            "corpus=c\nsvm_c=0",
            "no equals sign",
        ] {
            let parsed = parse_config(text).and_then(|e| ExperimentConfig::from_entries(&e));
            assert!(matches!(parsed, Err(Error::InvalidConfig(_))), "{text}");
        }
    }

    #[test]
    fn best_row_tie_rules() {
        let row = |f1: f64, acc: f64, sel: &str| ResultRow {
            self_center: "T".into(),
            tfidf: "T".into(),
            selector: sel.into(),
            sentiment: "mixed".into(),
            use_words: "deptsent".into(),
            measures: "categorical".into(),
            synonyms: "T".into(),
            model: "dt".into(),
            accuracy: Some(acc),
            precision: Some(0.0),
            recall: Some(0.0),
            f1: Some(f1),
            auc: Some(0.5),
            status: RunStatus::Ok,
            error: String::new(),
        };
        let rows = [
            row(0.5, 0.6, "mostfreq"),
            row(0.5, 0.7, "mostfreq"),
            row(0.5, 0.7, "infogain"),
        ];
        assert_eq!(best_by_model(&rows)[0].selector, "infogain");
        let rows = [row(0.6, 0.1, "mostfreq"), row(0.5, 0.9, "infogain")];
        assert_eq!(best_by_model(&rows)[0].f1, Some(0.6));
    }

    #[test]
    fn empty_report_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        assert!(write_report(&[], dir.path()).is_err());
        assert!(write_summary(&[], dir.path()).is_err());
    }
}
