//! Feature engineering: term selection, sentiment, Dept-Sent vocabulary and
//! account measures, assembled into one [`FeatureVector`] per user.
//!
//! Everything that depends on labels or on the distribution of users is
//! fitted on training rows only ([`FittedFeatures::fit`]) and then applied
//! unchanged to training and test rows alike.

pub mod measures;
pub mod selection;
pub mod sentiment;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::corpus::{Corpus, Label};
use crate::error::{Error, Result};
use crate::matrix::{build_dtm, dense_terms, Idf, SparseRow, TermMatrix, Thesaurus, DEFAULT_ZERO_FRACTION};
use crate::resources::Resources;
use crate::textprep::{StopwordPolicy, TokenDoc};

pub use measures::{
    compute_account_measures, quantile, transform_measures, AccountMeasures, MeasureMode, MeasureTransform,
    NightWindow, Quartiles,
};
pub use selection::{binary_entropy, entropy, info_gain, select_terms, split_gain, Selector};
pub use sentiment::{
    build_dept_sent_vocab, doc_sentiments, tweet_sentiment, user_sentiment, SentimentLexicon, SentimentMode,
};

pub const DEFAULT_SELECTOR_K: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UseWords {
    DeptSent,
    NonSparse,
}

/// Which feature blocks reach the learner. `All` is the normal setting; the
/// other two exist for ablation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureSet {
    All,
    TextOnly,
    ActivityOnly,
}

impl FeatureSet {
    pub fn uses_text(self) -> bool {
        self != FeatureSet::ActivityOnly
    }

    pub fn uses_activity(self) -> bool {
        self != FeatureSet::TextOnly
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub self_center: bool,
    pub tfidf: bool,
    pub selector: Selector,
    pub selector_k: usize,
    pub sentiment: SentimentMode,
    pub use_words: UseWords,
    pub account_measures: MeasureMode,
    pub synonyms: bool,
    pub feature_set: FeatureSet,
    pub sparse_threshold: f64,
    pub night: NightWindow,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            self_center: true,
            tfidf: true,
            selector: Selector::InfoGain,
            selector_k: DEFAULT_SELECTOR_K,
            sentiment: SentimentMode::Mixed,
            use_words: UseWords::DeptSent,
            account_measures: MeasureMode::Categorical,
            synonyms: true,
            feature_set: FeatureSet::All,
            sparse_threshold: DEFAULT_ZERO_FRACTION,
            night: NightWindow::default(),
        }
    }
}

/// Possible values of each configurable feature, used to span grids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureGrid {
    pub self_center: Vec<bool>,
    pub tfidf: Vec<bool>,
    pub selector: Vec<Selector>,
    pub sentiment: Vec<SentimentMode>,
    pub use_words: Vec<UseWords>,
    pub account_measures: Vec<MeasureMode>,
    pub synonyms: Vec<bool>,
}

impl FeatureGrid {
    /// Every possible value of every feature.
    pub fn full() -> Self {
        FeatureGrid {
            self_center: vec![false, true],
            tfidf: vec![false, true],
            selector: vec![Selector::InfoGain, Selector::MostFrequent],
            sentiment: vec![SentimentMode::Avg, SentimentMode::Mixed, SentimentMode::None],
            use_words: vec![UseWords::DeptSent, UseWords::NonSparse],
            account_measures: vec![MeasureMode::AsIs, MeasureMode::Norm, MeasureMode::Categorical],
            synonyms: vec![false, true],
        }
    }

    /// A one-point grid at `cfg`.
    pub fn single(cfg: &FeatureConfig) -> Self {
        FeatureGrid {
            self_center: vec![cfg.self_center],
            tfidf: vec![cfg.tfidf],
            selector: vec![cfg.selector],
            sentiment: vec![cfg.sentiment],
            use_words: vec![cfg.use_words],
            account_measures: vec![cfg.account_measures],
            synonyms: vec![cfg.synonyms],
        }
    }

    pub fn len(&self) -> usize {
        self.self_center.len()
            * self.tfidf.len()
            * self.selector.len()
            * self.sentiment.len()
            * self.use_words.len()
            * self.account_measures.len()
            * self.synonyms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The Cartesian product, taking the remaining settings from `base`.
    pub fn expand(&self, base: &FeatureConfig) -> Vec<FeatureConfig> {
        let mut out = Vec::with_capacity(self.len());
        for &self_center in &self.self_center {
            for &tfidf in &self.tfidf {
                for &selector in &self.selector {
                    for &sentiment in &self.sentiment {
                        for &use_words in &self.use_words {
                            for &account_measures in &self.account_measures {
                                for &synonyms in &self.synonyms {
                                    out.push(FeatureConfig {
                                        self_center,
                                        tfidf,
                                        selector,
                                        sentiment,
                                        use_words,
                                        account_measures,
                                        synonyms,
                                        ..base.clone()
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn tf(b: bool) -> &'static str {
    if b {
        "T"
    } else {
        "F"
    }
}

impl FeatureConfig {
    /// Values of the grid features, in report column order.
    pub fn flag_values(&self) -> [String; 7] {
        [
            tf(self.self_center).to_owned(),
            tf(self.tfidf).to_owned(),
            self.selector.to_string(),
            self.sentiment.to_string(),
            self.use_words.to_string(),
            self.account_measures.to_string(),
            tf(self.synonyms).to_owned(),
        ]
    }

    pub const FLAG_NAMES: [&'static str; 7] = [
        "self_center",
        "tfidf",
        "selector",
        "sentiment",
        "use_words",
        "measures",
        "synonyms",
    ];

    /// Compact human-readable label, e.g. `sc=T tfidf=T sel=infogain ...`.
    pub fn label(&self) -> String {
        let v = self.flag_values();
        format!(
            "sc={} tfidf={} sel={} sent={} words={} meas={} syn={}",
            v[0], v[1], v[2], v[3], v[4], v[5], v[6]
        )
    }
}

macro_rules! keyword_enum {
    ($ty:ident { $($variant:ident => $text:literal $(| $alias:literal)*),+ $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $text),+ })
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text $(| $alias)* => Ok($ty::$variant),)+
                    other => Err(Error::InvalidConfig(format!(
                        "`{other}` is not a valid {}", stringify!($ty)
                    ))),
                }
            }
        }
    };
}

keyword_enum!(Selector { InfoGain => "infogain" | "ig", MostFrequent => "mostfreq" | "mostfrequent" });
keyword_enum!(SentimentMode { Avg => "avg", Mixed => "mixed", None => "none" });
keyword_enum!(UseWords { DeptSent => "deptsent" | "dept-sent", NonSparse => "nonsparse" | "non-sparse" });
keyword_enum!(MeasureMode { AsIs => "asis" | "as-is", Norm => "norm", Categorical => "categorical" | "categ" });
keyword_enum!(FeatureSet { All => "all", TextOnly => "text", ActivityOnly => "activity" });

/// Names and order of the columns of a feature vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub term_names: Vec<String>,
    pub account_names: Vec<String>,
    pub sentiment: bool,
    fingerprint: String,
}

impl FeatureSchema {
    pub fn new(term_names: Vec<String>, account_names: Vec<String>, sentiment: bool) -> Self {
        let mut hasher = Sha256::new();
        for name in &term_names {
            hasher.update(b"t:");
            hasher.update(name.as_bytes());
            hasher.update(b"\n");
        }
        for name in &account_names {
            hasher.update(b"a:");
            hasher.update(name.as_bytes());
            hasher.update(b"\n");
        }
        hasher.update(if sentiment { b"s:1" } else { b"s:0" });
        let digest = hasher.finalize();
        let fingerprint = digest[..8].iter().map(|b| format!("{b:02x}")).collect();
        FeatureSchema {
            term_names,
            account_names,
            sentiment,
            fingerprint,
        }
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn n_terms(&self) -> usize {
        self.term_names.len()
    }

    /// Number of dense (non-term) columns.
    pub fn n_dense(&self) -> usize {
        self.account_names.len() + self.sentiment as usize
    }

    pub fn width(&self) -> usize {
        self.n_terms() + self.n_dense()
    }
}

/// One user's learner input.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub user_id: String,
    pub term_features: SparseRow,
    pub account_features: Vec<f64>,
    pub sentiment_feature: Option<f64>,
    pub label: Label,
    pub schema: Arc<FeatureSchema>,
}

impl FeatureVector {
    /// Account features followed by the sentiment scalar, if any.
    pub fn dense_features(&self) -> Vec<f64> {
        let mut out = self.account_features.clone();
        out.extend(self.sentiment_feature);
        out
    }

    /// All columns as one dense row: terms, account features, sentiment.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.schema.n_terms()];
        for &(t, v) in &self.term_features {
            out[t] = v;
        }
        out.extend(self.dense_features());
        out
    }
}

/// Combines per-user blocks into feature vectors under one schema.
///
/// Every block must hold exactly one entry per user, in user order.
pub fn assemble_features(
    schema: Arc<FeatureSchema>,
    user_ids: &[String],
    labels: &[Label],
    term_rows: Vec<SparseRow>,
    account_rows: Vec<Vec<f64>>,
    sentiment: Option<Vec<f64>>,
) -> Result<Vec<FeatureVector>> {
    let n = user_ids.len();
    let mismatch = |what: &str, found: usize| Error::SchemaMismatch {
        expected: format!("{n} users"),
        found: format!("{found} {what}"),
    };
    if labels.len() != n {
        return Err(mismatch("labels", labels.len()));
    }
    if term_rows.len() != n {
        return Err(mismatch("term rows", term_rows.len()));
    }
    if account_rows.len() != n {
        return Err(mismatch("account rows", account_rows.len()));
    }
    if let Some(s) = &sentiment {
        if s.len() != n {
            return Err(mismatch("sentiment values", s.len()));
        }
    }
    if sentiment.is_some() != schema.sentiment {
        return Err(Error::SchemaMismatch {
            expected: format!("sentiment column present: {}", schema.sentiment),
            found: format!("sentiment values given: {}", sentiment.is_some()),
        });
    }
    if let Some(row) = account_rows.iter().find(|r| r.len() != schema.account_names.len()) {
        return Err(Error::SchemaMismatch {
            expected: format!("{} account features", schema.account_names.len()),
            found: format!("{}", row.len()),
        });
    }
    if let Some(row) = term_rows.iter().find(|r| r.iter().any(|&(t, _)| t >= schema.n_terms())) {
        return Err(Error::SchemaMismatch {
            expected: format!("term index < {}", schema.n_terms()),
            found: format!("{row:?}"),
        });
    }
    let mut sentiment = sentiment.map(Vec::into_iter);
    Ok(user_ids
        .iter()
        .zip(labels)
        .zip(term_rows.into_iter().zip(account_rows))
        .map(|((id, &label), (terms, account))| FeatureVector {
            user_id: id.clone(),
            term_features: terms,
            account_features: account,
            sentiment_feature: sentiment.as_mut().and_then(Iterator::next),
            label,
            schema: Arc::clone(&schema),
        })
        .collect())
}

/// Label-independent per-user material for one preprocessing setting
/// (stopword policy and synonym collapsing).
#[derive(Debug, Clone)]
pub struct PreparedCorpus {
    pub self_center: bool,
    pub synonyms: bool,
    pub night: NightWindow,
    pub user_ids: Vec<String>,
    pub labels: Vec<Label>,
    pub docs: Vec<TokenDoc>,
    /// Count matrix, synonyms already collapsed when `synonyms` is set.
    pub counts: TermMatrix,
    pub tweet_sentiments: Vec<Vec<(f64, f64)>>,
    pub measures: Vec<AccountMeasures>,
    lexicon: SentimentLexicon,
    thesaurus: Thesaurus,
}

impl PreparedCorpus {
    pub fn new(
        corpus: &Corpus,
        resources: &Resources,
        self_center: bool,
        synonyms: bool,
        night: NightWindow,
    ) -> Result<Self> {
        let policy = StopwordPolicy::new(resources.stopwords.clone(), self_center);
        let users = corpus.users();
        let docs: Vec<TokenDoc> = users.iter().map(|u| TokenDoc::from_user(u, &policy)).collect();
        let mut counts = build_dtm(&docs);
        if synonyms {
            counts = counts.collapse_synonyms(&resources.thesaurus)?;
        }
        let tweet_sentiments = docs.iter().map(|d| doc_sentiments(d, &resources.lexicon)).collect();
        let measures = users.iter().map(|u| compute_account_measures(u, night)).collect();
        Ok(PreparedCorpus {
            self_center,
            synonyms,
            night,
            user_ids: users.iter().map(|u| u.user_id.clone()).collect(),
            labels: corpus.labels(),
            docs,
            counts,
            tweet_sentiments,
            measures,
            lexicon: resources.lexicon.clone(),
            thesaurus: resources.thesaurus.clone(),
        })
    }

    /// Prepares the variant `cfg` needs.
    pub fn for_config(corpus: &Corpus, resources: &Resources, cfg: &FeatureConfig) -> Result<Self> {
        Self::new(corpus, resources, cfg.self_center, cfg.synonyms, cfg.night)
    }

    pub fn len(&self) -> usize {
        self.user_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.user_ids.is_empty()
    }

    pub fn matches(&self, cfg: &FeatureConfig) -> bool {
        self.self_center == cfg.self_center && self.synonyms == cfg.synonyms && self.night == cfg.night
    }

    pub fn lexicon(&self) -> &SentimentLexicon {
        &self.lexicon
    }

    /// Column name a (stemmed) term lands under in [`Self::counts`].
    pub fn column_name<'a>(&'a self, term: &'a str) -> &'a str {
        if self.synonyms {
            self.thesaurus.canonical(term)
        } else {
            term
        }
    }
}

/// Feature statistics frozen from one set of training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedFeatures {
    pub config: FeatureConfig,
    pub dept_sent_vocab: Option<BTreeSet<String>>,
    pub selected_terms: Vec<String>,
    pub idf: Option<Idf>,
    pub measure_transform: Option<MeasureTransform>,
    pub schema: Arc<FeatureSchema>,
}

impl FittedFeatures {
    pub fn fit(prepared: &PreparedCorpus, cfg: &FeatureConfig, train: &[usize]) -> Result<Self> {
        if !prepared.matches(cfg) {
            return Err(Error::InvalidConfig(format!(
                "prepared corpus (self_center={}, synonyms={}) does not match `{}`",
                prepared.self_center,
                prepared.synonyms,
                cfg.label()
            )));
        }
        let use_text = cfg.feature_set.uses_text();
        let mut dept_sent_vocab = None;
        let mut selected_terms = Vec::new();
        let mut idf = None;

        if use_text {
            let allowed: BTreeSet<String> = match cfg.use_words {
                UseWords::DeptSent => {
                    let vocab = build_dept_sent_vocab(&prepared.docs, &prepared.labels, train, &prepared.lexicon)?;
                    let columns = vocab.iter().map(|t| prepared.column_name(t).to_owned()).collect();
                    dept_sent_vocab = Some(vocab);
                    columns
                }
                UseWords::NonSparse => dense_terms(&prepared.counts, Some(train), cfg.sparse_threshold)?,
            };
            selected_terms = select_terms(
                &prepared.counts,
                &prepared.labels,
                train,
                cfg.selector,
                cfg.selector_k,
                |t| allowed.contains(t),
            )?;
            if cfg.tfidf {
                let chosen: BTreeSet<&str> = selected_terms.iter().map(String::as_str).collect();
                let sub = prepared.counts.retain_terms(|t| chosen.contains(t));
                idf = Some(Idf::fit(&sub, Some(train))?);
            }
        }

        let measure_transform = if cfg.feature_set.uses_activity() {
            Some(MeasureTransform::fit(&prepared.measures, train, cfg.account_measures)?)
        } else {
            None
        };

        let schema = FeatureSchema::new(
            selected_terms.clone(),
            measure_transform
                .as_ref()
                .map(MeasureTransform::names)
                .unwrap_or_default(),
            use_text && cfg.sentiment != SentimentMode::None,
        );
        Ok(FittedFeatures {
            config: cfg.clone(),
            dept_sent_vocab,
            selected_terms,
            idf,
            measure_transform,
            schema: Arc::new(schema),
        })
    }

    /// Feature vectors for `rows` of the prepared corpus.
    pub fn transform(&self, prepared: &PreparedCorpus, rows: &[usize]) -> Result<Vec<FeatureVector>> {
        let columns: Vec<Option<usize>> = self
            .selected_terms
            .iter()
            .map(|t| prepared.counts.term_index(t))
            .collect();
        let term_rows: Vec<SparseRow> = rows
            .iter()
            .map(|&r| {
                let row = prepared.counts.row(r);
                columns
                    .iter()
                    .enumerate()
                    .filter_map(|(j, col)| {
                        let col = (*col)?;
                        let p = row.binary_search_by_key(&col, |&(c, _)| c).ok()?;
                        let mut v = row[p].1;
                        if let Some(idf) = &self.idf {
                            v *= idf.weight(&self.selected_terms[j]);
                        }
                        (v != 0.0).then_some((j, v))
                    })
                    .collect()
            })
            .collect();
        let account_rows: Vec<Vec<f64>> = match &self.measure_transform {
            Some(t) => rows.iter().map(|&r| t.transform(&prepared.measures[r])).collect(),
            None => vec![Vec::new(); rows.len()],
        };
        let sentiment = self.schema.sentiment.then(|| {
            rows.iter()
                .map(|&r| user_sentiment(&prepared.tweet_sentiments[r], self.config.sentiment))
                .collect()
        });
        let ids: Vec<String> = rows.iter().map(|&r| prepared.user_ids[r].clone()).collect();
        let labels: Vec<Label> = rows.iter().map(|&r| prepared.labels[r]).collect();
        assemble_features(
            Arc::clone(&self.schema),
            &ids,
            &labels,
            term_rows,
            account_rows,
            sentiment,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_grid_has_288_configs() {
        let grid = FeatureGrid::full();
        assert_eq!(grid.len(), 2 * 2 * 2 * 3 * 2 * 3 * 2);
        let configs = grid.expand(&FeatureConfig::default());
        assert_eq!(configs.len(), 288);
        let labels: BTreeSet<String> = configs.iter().map(FeatureConfig::label).collect();
        assert_eq!(labels.len(), 288);
    }

    #[test]
    fn keyword_round_trip() {
        for s in ["infogain", "mostfreq"] {
            assert_eq!(s.parse::<Selector>().unwrap().to_string(), s);
        }
        assert_eq!("Dept-Sent".parse::<UseWords>().unwrap(), UseWords::DeptSent);
        assert_eq!("as-is".parse::<MeasureMode>().unwrap(), MeasureMode::AsIs);
        assert!("median".parse::<SentimentMode>().is_err());
    }

    #[test]
    fn fingerprint_tracks_schema() {
        let a = FeatureSchema::new(vec!["sad".into()], vec!["posts".into()], true);
        let b = FeatureSchema::new(vec!["sad".into()], vec!["posts".into()], false);
        let c = FeatureSchema::new(vec!["sad".into()], vec!["posts".into()], true);
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), c.fingerprint());
        assert_eq!(a.fingerprint().len(), 16);
    }

    #[test]
    fn assemble_checks_alignment() {
        let schema = Arc::new(FeatureSchema::new(vec!["t".into()], vec!["a".into()], false));
        let ids = vec!["u1".to_string(), "u2".to_string()];
        let labels = [Label::Depressed, Label::NotDepressed];
        let ok = assemble_features(
            Arc::clone(&schema),
            &ids,
            &labels,
            vec![vec![(0, 1.0)], vec![]],
            vec![vec![1.0], vec![2.0]],
            None,
        )
        .unwrap();
        assert_eq!(ok[0].to_dense(), [1.0, 1.0]);
        assert_eq!(ok[1].to_dense(), [0.0, 2.0]);
        assert!(ok.iter().all(|f| f.sentiment_feature.is_none()));

        let bad = assemble_features(
            Arc::clone(&schema),
            &ids,
            &labels,
            vec![vec![]],
            vec![vec![1.0], vec![2.0]],
            None,
        );
        assert!(matches!(bad, Err(Error::SchemaMismatch { .. })));
        let bad = assemble_features(
            schema,
            &ids,
            &labels,
            vec![vec![], vec![]],
            vec![vec![1.0], vec![2.0]],
            Some(vec![0.0, 0.0]),
        );
        assert!(matches!(bad, Err(Error::SchemaMismatch { .. })));
    }
}
