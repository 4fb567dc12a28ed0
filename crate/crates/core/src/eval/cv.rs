//! Stratified k-fold cross validation with training-only feature fitting.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{confusion, metrics, roc_auc, ConfusionMatrix, Metrics};
use crate::corpus::{Corpus, Label};
use crate::error::{Error, Result};
use crate::features::{FeatureConfig, FittedFeatures, PreparedCorpus};
use crate::learners::{ModelSpec, TrainedModel};
use crate::resources::Resources;

pub const DEFAULT_FOLDS: usize = 10;

/// `(row, predicted label, score)`.
pub type Prediction = (usize, Label, f64);

fn class_indices(labels: &[Label]) -> Result<[Vec<usize>; 2]> {
    let mut by_class = [Vec::new(), Vec::new()];
    for (i, l) in labels.iter().enumerate() {
        by_class[l.is_positive() as usize].push(i);
    }
    for (c, idx) in by_class.iter().enumerate() {
        if idx.len() < 2 {
            return Err(Error::TooFewExamples {
                class: Label::from_positive(c == 1),
                count: idx.len(),
            });
        }
    }
    Ok(by_class)
}

/// Splits `0..labels.len()` into `k` class-stratified folds.
///
/// Each class is shuffled with a generator seeded by `seed` and dealt
/// round-robin, the second class continuing where the first stopped so
/// fold sizes differ by at most one. `k` is lowered to the minority class
/// size when needed. Folds are returned with ascending indices.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 folds, got {k}")));
    }
    let mut by_class = class_indices(labels)?;
    let minority = by_class[0].len().min(by_class[1].len());
    let k = if minority < k {
        log::warn!("only {minority} examples in the minority class; using {minority} folds instead of {k}");
        minority
    } else {
        k
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for idx in by_class.iter_mut().rev() {
        idx.shuffle(&mut rng);
        for &i in idx.iter() {
            folds[next % k].push(i);
            next += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(folds)
}

/// Stratified `(train, test)` split with about `fraction` of each class in
/// the test part (at least one per class).
pub fn holdout_split(labels: &[Label], fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParams(format!(
            "holdout fraction {fraction} not in (0, 1)"
        )));
    }
    let mut by_class = class_indices(labels)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05ee_d0f4_01d0_u64);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for idx in by_class.iter_mut().rev() {
        idx.shuffle(&mut rng);
        let n_test = ((idx.len() as f64 * fraction).round() as usize).clamp(1, idx.len() - 1);
        test.extend_from_slice(&idx[..n_test]);
        train.extend_from_slice(&idx[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CvSettings {
    pub folds: usize,
    pub seed: u64,
    /// When set, this fraction is held out: folds run on the rest and the
    /// headline metrics come from a model fitted on all of the rest.
    pub holdout: Option<f64>,
}

impl Default for CvSettings {
    fn default() -> Self {
        CvSettings {
            folds: DEFAULT_FOLDS,
            seed: 0,
            holdout: None,
        }
    }
}

/// Everything fitted for one training split plus its test predictions.
#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub features: FittedFeatures,
    pub model: TrainedModel,
    /// `(row, predicted label, score)` for each test row, in row order.
    pub predictions: Vec<Prediction>,
}

/// Fits features and model on `train` and scores `test`.
pub fn fit_fold(
    prepared: &PreparedCorpus,
    cfg: &FeatureConfig,
    spec: &ModelSpec,
    train: &[usize],
    test: &[usize],
) -> Result<FoldOutcome> {
    let features = FittedFeatures::fit(prepared, cfg, train)?;
    let train_fvs = features.transform(prepared, train)?;
    let model = TrainedModel::train(spec, &train_fvs)?;
    let predictions = features
        .transform(prepared, test)?
        .iter()
        .zip(test)
        .map(|(fv, &r)| model.predict(fv).map(|(l, s)| (r, l, s)))
        .collect::<Result<_>>()?;
    Ok(FoldOutcome {
        features,
        model,
        predictions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub cm: ConfusionMatrix,
    pub metrics: Metrics,
    /// Absent when the fold's test rows hold a single class.
    pub auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub cm: ConfusionMatrix,
    pub metrics: Metrics,
    pub auc: f64,
    pub roc_points: Vec<(f64, f64)>,
    pub per_fold: Vec<FoldReport>,
    /// Whether the headline numbers come from a held-out test set rather
    /// than pooled fold predictions.
    pub holdout: bool,
}

impl MetricsReport {
    pub fn accuracy(&self) -> f64 {
        self.metrics.accuracy
    }

    pub fn f1(&self) -> f64 {
        self.metrics.f1
    }
}

type Summary = (ConfusionMatrix, Metrics, Vec<(f64, f64)>, f64);

fn summarize(labels: &[Label], predictions: &[Prediction]) -> Result<Summary> {
    let preds: Vec<Label> = predictions.iter().map(|p| p.1).collect();
    let truth: Vec<Label> = predictions.iter().map(|p| labels[p.0]).collect();
    let scores: Vec<f64> = predictions.iter().map(|p| p.2).collect();
    let cm = confusion(&preds, &truth)?;
    let (roc, auc) = roc_auc(&scores, &truth)?;
    Ok((cm, metrics(&cm), roc, auc))
}

fn fold_report(fold: usize, n_train: usize, labels: &[Label], predictions: &[Prediction]) -> Result<FoldReport> {
    let preds: Vec<Label> = predictions.iter().map(|p| p.1).collect();
    let truth: Vec<Label> = predictions.iter().map(|p| labels[p.0]).collect();
    let scores: Vec<f64> = predictions.iter().map(|p| p.2).collect();
    let cm = confusion(&preds, &truth)?;
    let auc = match roc_auc(&scores, &truth) {
        Ok((_, auc)) => Some(auc),
        Err(Error::OneClassOnly) => None,
        Err(e) => return Err(e),
    };
    Ok(FoldReport {
        fold,
        n_train,
        n_test: predictions.len(),
        cm,
        metrics: metrics(&cm),
        auc,
    })
}

/// Cross-validates one feature configuration and model on a prepared corpus.
pub fn run_cv(
    prepared: &PreparedCorpus,
    cfg: &FeatureConfig,
    spec: &ModelSpec,
    settings: &CvSettings,
) -> Result<MetricsReport> {
    let labels = &prepared.labels;
    let (pool, holdout) = match settings.holdout {
        Some(fraction) => {
            let (train, test) = holdout_split(labels, fraction, settings.seed)?;
            (train, Some(test))
        }
        None => ((0..labels.len()).collect(), None),
    };
    let pool_labels: Vec<Label> = pool.iter().map(|&r| labels[r]).collect();
    let folds: Vec<Vec<usize>> = stratified_folds(&pool_labels, settings.folds, settings.seed)?
        .into_iter()
        .map(|f| f.into_iter().map(|i| pool[i]).collect())
        .collect();

    let outcomes: Vec<(usize, Vec<Prediction>)> = folds
        .par_iter()
        .map(|test| {
            let train: Vec<usize> = pool
                .iter()
                .copied()
                .filter(|r| test.binary_search(r).is_err())
                .collect();
            fit_fold(prepared, cfg, spec, &train, test).map(|o| (train.len(), o.predictions))
        })
        .collect::<Result<_>>()?;

    let per_fold = outcomes
        .iter()
        .enumerate()
        .map(|(i, (n_train, preds))| fold_report(i, *n_train, labels, preds))
        .collect::<Result<Vec<_>>>()?;

    let headline = match &holdout {
        Some(test) => fit_fold(prepared, cfg, spec, &pool, test)?.predictions,
        None => outcomes.into_iter().flat_map(|(_, p)| p).collect(),
    };
    let (cm, metrics, roc_points, auc) = summarize(labels, &headline)?;
    Ok(MetricsReport {
        cm,
        metrics,
        auc,
        roc_points,
        per_fold,
        holdout: holdout.is_some(),
    })
}

/// Prepares `corpus` for `cfg` and cross-validates it.
pub fn cross_validate(
    corpus: &Corpus,
    resources: &Resources,
    cfg: &FeatureConfig,
    spec: &ModelSpec,
    settings: &CvSettings,
) -> Result<MetricsReport> {
    let prepared = PreparedCorpus::for_config(corpus, resources, cfg)?;
    run_cv(&prepared, cfg, spec, settings)
}
